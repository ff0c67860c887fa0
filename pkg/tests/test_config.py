import json

import pytest

from adeliceis.config import EngineConfig


def test_defaults():
    cfg = EngineConfig()
    assert (cfg.genus, cfg.p, cfg.c, cfg.cp) == (1, 5, 2, 10)
    assert [N for N in range(1, 64) if cfg.admissible_level(N)] == [3, 7, 9, 11, 13, 17, 19, 21, 23, 27,
                                                                   29, 31, 33, 37, 39, 41, 43, 47, 49,
                                                                   51, 53, 57, 59, 61, 63]


def test_invalid():
    with pytest.raises(ValueError):
        EngineConfig(c=5)
    with pytest.raises(ValueError):
        EngineConfig(c=1)


def test_env_file(tmp_path, monkeypatch):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"p": 7, "c": 3, "seed": 4}))
    monkeypatch.setenv("ENGINE_CONFIG", str(path))
    cfg = EngineConfig.load()
    assert (cfg.p, cfg.c, cfg.seed, cfg.cp) == (7, 3, 4, 21)
    assert cfg.with_overrides(seed=9).seed == 9
