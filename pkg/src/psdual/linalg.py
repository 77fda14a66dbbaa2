"""Dense exact linear algebra over the prime fields F_p.

Matrices are lists of row lists with entries canonically reduced to
{0, ..., p-1}.  Everything here is small (per-degree dimensions of the
modules we handle rarely exceed a handful), so plain integer arithmetic
beats any bignum/array machinery and stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

Matrix = list[list[int]]
Vector = list[int]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    """Scalar arithmetic modulo a prime, canonical representatives 0..p-1."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        return inv_mod(a, self.p)


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("inverse of 0")
    return pow(a, p - 2, p)


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def mat_copy(a: Matrix) -> Matrix:
    return [row[:] for row in a]


def transpose(a: Matrix) -> Matrix:
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def mat_add(a: Matrix, b: Matrix, p: int) -> Matrix:
    return [[(x + y) % p for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c: int, a: Matrix, p: int) -> Matrix:
    return [[(c * x) % p for x in row] for row in a]


def mat_mul(a: Matrix, b: Matrix, p: int) -> Matrix:
    # (r x k) @ (k x c); empty dimensions fall through naturally
    rows = len(a)
    k = len(b)
    cols = len(b[0]) if b else 0
    out = zeros(rows, cols)
    for i in range(rows):
        arow = a[i]
        orow = out[i]
        for t in range(k):
            c = arow[t]
            if c:
                brow = b[t]
                for j in range(cols):
                    orow[j] = (orow[j] + c * brow[j]) % p
    return out


def mat_vec(a: Matrix, v: Vector, p: int) -> Vector:
    return [sum(c * x for c, x in zip(row, v)) % p for row in a]


def is_zero_matrix(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def rref(a: Matrix, p: int) -> tuple[Matrix, list[int]]:
    """Row-reduced echelon form; returns (matrix, pivot column list)."""
    m = mat_copy(a)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if m[i][c] % p), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = inv_mod(m[r][c], p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] % p:
                f = m[i][c] % p
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: Matrix, p: int) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a, p)[1])


def solve(a: Matrix, b: Vector, p: int) -> Vector | None:
    """One solution of a @ x = b, or None if inconsistent."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug = [a[i][:] + [b[i] % p] for i in range(rows)]
    red, pivots = rref(aug, p)
    if cols in pivots:
        return None
    x = [0] * cols
    for r, c in enumerate(pivots):
        x[c] = red[r][cols]
    return x


def kernel_basis(a: Matrix, p: int) -> list[Vector]:
    """Basis of the right null space of a."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if cols == 0:
        return []
    if rows == 0:
        return [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]
    red, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * cols
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-red[r][f]) % p
        basis.append(v)
    return basis


def solutions(a: Matrix, b: Vector, p: int):
    """Iterate all solutions of a @ x = b (particular + kernel lattice)."""
    x0 = solve(a, b, p)
    if x0 is None:
        return
    ker = kernel_basis(a, p)
    if not ker:
        yield x0
        return
    for coeffs in product(range(p), repeat=len(ker)):
        x = x0[:]
        for c, v in zip(coeffs, ker):
            if c:
                x = [(xi + c * vi) % p for xi, vi in zip(x, v)]
        yield x


def solution_count(a: Matrix, b: Vector, p: int) -> int:
    if solve(a, b, p) is None:
        return 0
    cols = len(a[0]) if a else 0
    return p ** (cols - rank(a, p))


def is_invertible(a: Matrix, p: int) -> bool:
    n = len(a)
    return n == 0 or (len(a[0]) == n and rank(a, p) == n)


def mat_inv(a: Matrix, p: int) -> Matrix:
    n = len(a)
    if n == 0:
        return []
    aug = [a[i][:] + identity(n)[i] for i in range(n)]
    red, pivots = rref(aug, p)
    if pivots != list(range(n)):
        raise ValueError("matrix not invertible")
    return [row[n:] for row in red]


def gl_order(n: int, p: int) -> int:
    """Number of invertible n x n matrices over F_p."""
    q = p**n
    out = 1
    for i in range(n):
        out *= q - p**i
    return out
