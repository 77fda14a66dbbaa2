"""Exact F_p linear algebra against brute-force checks."""

import random
from itertools import product

import pytest

from psdual import linalg


def brute_rank(a, p):
    """Rank = size of the largest set of independent rows, by enumeration."""
    rows = [tuple(r) for r in a]
    n = len(rows)
    best = 0
    for mask in range(1 << n):
        chosen = [rows[i] for i in range(n) if mask >> i & 1]
        if not chosen:
            continue
        # independent iff no nonzero combination vanishes
        ok = True
        for coeffs in product(range(p), repeat=len(chosen)):
            if not any(coeffs):
                continue
            vec = [
                sum(c * r[j] for c, r in zip(coeffs, chosen)) % p
                for j in range(len(chosen[0]))
            ]
            if not any(vec):
                ok = False
                break
        if ok:
            best = max(best, len(chosen))
    return best


@pytest.mark.parametrize("p", [2, 3, 5])
def test_rank_matches_brute_force(p):
    rng = random.Random(7)
    for _ in range(25):
        rows, cols = rng.randint(1, 3), rng.randint(1, 3)
        a = [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)]
        assert linalg.rank(a, p) == brute_rank(a, p)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_solve_and_kernel(p):
    rng = random.Random(11)
    for _ in range(40):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        a = [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)]
        x = [rng.randrange(p) for _ in range(cols)]
        b = linalg.mat_vec(a, x, p)
        got = linalg.solve(a, b, p)
        assert got is not None
        assert linalg.mat_vec(a, got, p) == b
        for v in linalg.kernel_basis(a, p):
            assert linalg.mat_vec(a, v, p) == [0] * rows


def test_solve_inconsistent():
    assert linalg.solve([[1], [1]], [0, 1], 2) is None


@pytest.mark.parametrize("p", [2, 3])
def test_inverse(p):
    rng = random.Random(3)
    found = 0
    while found < 10:
        n = rng.randint(1, 3)
        a = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
        if not linalg.is_invertible(a, p):
            continue
        found += 1
        inv = linalg.mat_inv(a, p)
        assert linalg.mat_mul(a, inv, p) == linalg.identity(n)


def test_solutions_enumerates_coset():
    a = [[1, 1]]
    sols = list(linalg.solutions(a, [0], 2))
    assert sorted(sols) == [[0, 0], [1, 1]]


def test_gl_order():
    assert linalg.gl_order(1, 2) == 1
    assert linalg.gl_order(2, 2) == 6
    assert linalg.gl_order(1, 3) == 2
    assert linalg.gl_order(3, 2) == 168


def test_prime_field_rejects_composites():
    with pytest.raises(ValueError):
        linalg.PrimeField(6)
    assert linalg.PrimeField(5).inv(2) == 3


def test_empty_shapes():
    assert linalg.rank([], 2) == 0
    assert linalg.kernel_basis([[0, 0]], 2) == [[1, 0], [0, 1]]
    assert linalg.is_invertible([], 2)
