"""Small exact matrix helpers on tuples of tuples (ints or Fractions)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = tuple[tuple, ...]


def as_matrix(rows) -> Matrix:
    return tuple(tuple(r) for r in rows)


def identity(m: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(m)) for i in range(m))


def zeros(m: int) -> Matrix:
    return tuple((0,) * m for _ in range(m))


def diag(*entries) -> Matrix:
    m = len(entries)
    return tuple(tuple(entries[i] if i == j else 0 for j in range(m)) for i in range(m))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a: Matrix, v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def scale(a: Matrix, s) -> Matrix:
    return tuple(tuple(s * x for x in row) for row in a)


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_mod(a: Matrix, n: int) -> Matrix:
    return tuple(tuple(x % n for x in row) for row in a)


def is_integral(a: Matrix) -> bool:
    return all(Fraction(x).denominator == 1 for row in a for x in row)


def to_int(a: Matrix) -> Matrix:
    if not is_integral(a):
        raise ValueError("matrix is not integral")
    return tuple(tuple(int(x) for x in row) for row in a)


def denominator(a: Matrix) -> int:
    from math import lcm
    return lcm(1, *(Fraction(x).denominator for row in a for x in row))


def mat_inv(a: Matrix) -> Matrix:
    """Exact inverse over Q by Gauss-Jordan."""
    m = len(a)
    work = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(m)]
            for i, row in enumerate(a)]
    for col in range(m):
        piv = next((r for r in range(col, m) if work[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        work[col], work[piv] = work[piv], work[col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(m):
            if r != col and work[r][col] != 0:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return tuple(tuple(x.numerator if x.denominator == 1 else x for x in row[m:]) for row in work)


def det(a: Matrix) -> Fraction:
    m = len(a)
    work = [[Fraction(x) for x in row] for row in a]
    d = Fraction(1)
    for col in range(m):
        piv = next((r for r in range(col, m) if work[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            d = -d
        d *= work[col][col]
        for r in range(col + 1, m):
            if work[r][col] != 0:
                f = work[r][col] / work[col][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return d


def smith_normal_form(m: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, W)`` with ``U @ m @ W == D`` diagonal, U and W unimodular.

    Diagonal entries are nonnegative and each divides the next.
    Raises ValueError for singular input.
    """
    a = [[int(x) for x in row] for row in to_int(m)]
    k = len(a)
    if any(len(r) != k for r in a):
        raise ValueError("square matrix required")
    if det(as_matrix(a)) == 0:
        raise ValueError("singular matrix")
    u = [list(r) for r in identity(k)]
    w = [list(r) for r in identity(k)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in w:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row dst += f * row src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for row in a:
            row[dst] += f * row[src]
        for row in w:
            row[dst] += f * row[src]

    for t in range(k):
        while True:
            # bring the smallest nonzero entry of the trailing block to (t, t)
            entries = [(abs(a[i][j]), i, j) for i in range(t, k) for j in range(t, k) if a[i][j]]
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            done = True
            for i in range(t + 1, k):
                q = a[i][t] // a[t][t]
                if q:
                    add_row(i, t, -q)
                if a[i][t]:
                    done = False
            for j in range(t + 1, k):
                q = a[t][j] // a[t][t]
                if q:
                    add_col(j, t, -q)
                if a[t][j]:
                    done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, k) for j in range(t + 1, k)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return as_matrix(u), as_matrix(a), as_matrix(w)


def cokernel_representatives(m: Matrix) -> list[tuple[int, ...]]:
    """Representatives of Z^k / m Z^k, one per class.

    Uses the Smith form: if U m W = D then Z^k / m Z^k ~ Z^k / D Z^k via U,
    so x = U^{-1} y for y in the box prod [0, d_i).
    """
    from itertools import product

    u, d, _ = smith_normal_form(m)
    uinv = to_int(mat_inv(u))
    ranges = [range(d[i][i]) for i in range(len(d))]
    return [tuple(mat_vec(uinv, y)) for y in product(*ranges)]


def sparse_rank(rows, modulus: int | None = None) -> int:
    """Rank of sparse rows (dicts column -> rational), over Q or over Z/modulus (prime).

    Over Q the elimination is exact with Fractions; mod a prime it reduces
    numerators and inverts denominators first.
    """
    piv: dict = {}
    r = 0
    for row in rows:
        if modulus is None:
            row = {c: Fraction(v) for c, v in row.items() if v}
        else:
            row = {c: Fraction(v).numerator * pow(Fraction(v).denominator, -1, modulus) % modulus
                   for c, v in row.items()}
            row = {c: v for c, v in row.items() if v}
        while row:
            c = min(row)
            P = piv.get(c)
            if P is None:
                inv = (1 / row[c]) if modulus is None else pow(row[c], -1, modulus)
                piv[c] = {k: (v * inv if modulus is None else v * inv % modulus)
                          for k, v in row.items()}
                r += 1
                break
            f = row[c]
            for k, v in P.items():
                x = row.get(k, 0) - f * v
                if modulus is not None:
                    x %= modulus
                if x:
                    row[k] = x
                else:
                    row.pop(k, None)
    return r
