"""Newton polynomials and integral Pontryagin-class data.

N_k writes the k-th power sum of formal roots in terms of the elementary
symmetric polynomials (here always renamed p_1, p_2, ... because the
roots in question are the formal roots of a total Pontryagin class).
The p-divisibility of N_{(p-1)/2} in the Pontryagin classes of a closed
oriented manifold is exactly the P^1 self-duality criterion at the odd
prime p, so these polynomials drive the integrality checks.
"""

from __future__ import annotations

from dataclasses import dataclass

Poly = dict[tuple[int, ...], int]  # exponent tuple over p_1..p_k -> coefficient


def _trim(exps: tuple[int, ...]) -> tuple[int, ...]:
    while exps and exps[-1] == 0:
        exps = exps[:-1]
    return exps


def poly_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


def poly_scale(c: int, a: Poly) -> Poly:
    return {e: c * x for e, x in a.items() if c * x}


def poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            n = max(len(e1), len(e2))
            e = _trim(
                tuple(
                    (e1[i] if i < len(e1) else 0) + (e2[i] if i < len(e2) else 0)
                    for i in range(n)
                )
            )
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def poly_mod(a: Poly, p: int) -> Poly:
    return {e: c % p for e, c in a.items() if c % p}


def sigma(i: int) -> Poly:
    exps = [0] * i
    exps[i - 1] = 1
    return {tuple(exps): 1}


def newton_polynomial(k: int, p: int | None = None) -> Poly:
    """k-th power sum in the elementary symmetric polynomials p_1..p_k.

    Computed by the recursion
    N_k = p_1 N_{k-1} - p_2 N_{k-2} + ... + (-1)^{k-1} k p_k,
    reduced mod p when a prime is given.
    """
    if k < 1:
        raise ValueError("k must be positive")
    acc: list[Poly] = [{(): 0}]  # N_0 unused placeholder
    for m in range(1, k + 1):
        total: Poly = poly_scale(m * (-1) ** (m - 1), sigma(m))
        for i in range(1, m):
            term = poly_mul(sigma(i), acc[m - i])
            total = poly_add(total, poly_scale((-1) ** (i - 1), term))
        acc.append(total)
    out = acc[k]
    return poly_mod(out, p) if p else out


def poly_str(a: Poly) -> str:
    """Render like ``p1^3 + 4 p1 p2 + 3 p3``; graded-lex monomial order."""
    if not a:
        return "0"

    def key(e: tuple[int, ...]):
        return (sum(i * x for i, x in enumerate(e, 1)), tuple(-x for x in e))

    parts = []
    for e in sorted(a, key=key):
        factors = []
        for i, x in enumerate(e, 1):
            if x == 1:
                factors.append(f"p{i}")
            elif x > 1:
                factors.append(f"p{i}^{x}")
        body = " ".join(factors) if factors else "1"
        c = a[e]
        parts.append(body if c == 1 and factors else f"{c} {body}" if factors else str(c))
    return " + ".join(parts)


# ---------------------------------------------------------------------------
# integral characteristic data


@dataclass
class IntegralCharData:
    """Total Pontryagin class in Z[g]/(g^(T+1)), one degree-4 generator.

    ``pontryagin[i]`` is the integer with p_i = pontryagin[i] * g^i;
    index 0 is always 1 and the list stops at the truncation T.
    """

    name: str
    dim: int  # real manifold dimension (g^i dies above degree dim)
    pontryagin: list[int]

    def __post_init__(self):
        if not self.pontryagin or self.pontryagin[0] != 1:
            raise ValueError("total class must start with 1")

    @property
    def truncation(self) -> int:
        return len(self.pontryagin) - 1

    def p_class(self, i: int) -> int:
        return self.pontryagin[i] if 0 <= i <= self.truncation else 0

    def p1_half(self) -> int | None:
        """Integer c with p_1/2 = c g, or None when p_1 is not 2-divisible."""
        p1 = self.p_class(1)
        if 4 > self.dim:
            return 0
        return p1 // 2 if p1 % 2 == 0 else None

    def newton_value(self, k: int) -> int:
        """Coefficient of g^k in N_k(p_1, ..., p_k)."""
        total = 0
        for exps, coef in newton_polynomial(k).items():
            term = coef
            for i, e in enumerate(exps, 1):
                term *= self.p_class(i) ** e
            total += term
        return total


def q1_divisibility(data: IntegralCharData, p: int) -> bool:
    """Is N_{(p-1)/2} in the Pontryagin classes divisible by p?

    Equivalent to the vanishing of the first p-primary Milnor-Wu class,
    hence to P^1 self-duality at p for oriented manifolds.
    """
    if p == 2 or p < 2:
        raise ValueError("p must be an odd prime")
    k = (p - 1) // 2
    if 4 * k > data.dim:
        return True  # the class lives in a vanishing degree
    return data.newton_value(k) % p == 0


def cp_char_data(n: int) -> IntegralCharData:
    """p(CP^n) = (1 + g)^{n+1} for g the square of the degree-2 generator."""
    from math import comb

    t = n // 2
    return IntegralCharData(
        f"CP^{n}", 2 * n, [comb(n + 1, i) for i in range(t + 1)]
    )


def hp_char_data(n: int) -> IntegralCharData:
    """p(HP^n) = (1 + g)^{2n+2} (1 + 4g)^{-1} truncated at g^n."""
    from math import comb

    series = [0] * (n + 1)
    for i in range(n + 1):
        # (1+4g)^{-1} = sum (-4)^j g^j
        series[i] = sum(
            comb(2 * n + 2, i - j) * (-4) ** j for j in range(i + 1)
        )
    return IntegralCharData(f"HP^{n}", 4 * n, series)
