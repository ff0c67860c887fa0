"""Exact finite-level computations with adelic Schwartz functions on symplectic
space and formal Eisenstein classes, with a harness for restriction/induction
functor axioms."""

from .config import DEFAULT, EngineConfig
from .cosets import CompactOpenSet, ElementaryCoset, FrameError
from .eisenstein import EisSymbol, FormalEisensteinClass, isogeny_kernel_data
from .orbits import euclidean_reduce, global_orbit_set, local_orbit, orbit_bfs_oracle
from .parametrize import PathDisagreement, parametrize
from .schwartz import NotInvariantError, SchwartzFunction
from .symplectic import AdelicGroupElement, CongruenceSubgroup, FiniteLevelElement

__version__ = "0.1.0"

__all__ = [
    "DEFAULT", "EngineConfig", "CompactOpenSet", "ElementaryCoset", "FrameError",
    "EisSymbol", "FormalEisensteinClass", "isogeny_kernel_data", "euclidean_reduce",
    "global_orbit_set", "local_orbit", "orbit_bfs_oracle", "PathDisagreement", "parametrize",
    "NotInvariantError", "SchwartzFunction", "AdelicGroupElement", "CongruenceSubgroup",
    "FiniteLevelElement",
]
