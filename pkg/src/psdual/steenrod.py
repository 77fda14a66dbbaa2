"""Exact arithmetic in the mod-p Steenrod algebra.

Elements are F_p-linear combinations of admissible monomials.  A monomial
is a word of atoms:

* p = 2: the atom ``i`` (a positive int) is Sq^i, so ``(6, 3, 1)`` is
  Sq6 Sq3 Sq1.  Admissible means i_j >= 2 i_{j+1}.
* odd p: the atom ``0`` is the Bockstein b and the atom ``s >= 1`` is P^s,
  so ``(0, 3, 1)`` is b P3 P1.  Admissible means s_j >= p s_{j+1} + e_j,
  where e_j counts the Bockstein between P^{s_j} and P^{s_{j+1}}, and no
  two Bocksteins are adjacent.

Products are reduced to the admissible basis by rewriting the leftmost
inadmissible pair (or b-sandwiched pair) with the Adem relations until
none remains.  The finite subalgebras generated by Sq^1, ..., Sq^{2^k}
(resp. b, P^1, ..., P^{p^(k-1)}) are modelled by SubalgebraSpec, with
basis enumeration, antipode, word expansion, and presentation relations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

from .linalg import PrimeField, rref, solve

Word = tuple[int, ...]

# ---------------------------------------------------------------------------
# binomial coefficients mod p (Lucas), atoms, degrees, admissibility


def binom_mod(n: int, k: int, p: int) -> int:
    """C(n, k) mod p for n, k >= 0; zero outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    if p == 2:
        return int(n & k == k)
    out = 1
    while n or k:
        ni, ki = n % p, k % p
        if ki > ni:
            return 0
        num = den = 1
        for i in range(ki):
            num = num * (ni - i) % p
            den = den * (i + 1) % p
        out = out * num * pow(den, p - 2, p) % p
        n //= p
        k //= p
    return out


def atom_degree(atom: int, p: int) -> int:
    if p == 2:
        return atom
    return 1 if atom == 0 else 2 * atom * (p - 1)


def word_degree(word: Word, p: int) -> int:
    return sum(atom_degree(a, p) for a in word)


def atom_str(atom: int, p: int) -> str:
    if p == 2:
        return f"Sq{atom}"
    return "b" if atom == 0 else f"P{atom}"


def word_str(word: Word, p: int) -> str:
    if not word:
        return "1"
    return " ".join(atom_str(a, p) for a in word)


def is_admissible(word: Word, p: int) -> bool:
    return _violation(word, p) is None


def _violation(word: Word, p: int) -> tuple[int, int] | None:
    """First inadmissible spot: (index, span) with span 2 or 3.

    Adjacent Bocksteins (which kill the whole word) are reported before
    any Adem pair; among Adem pairs the leftmost is rewritten first.
    """
    n = len(word)
    for i in range(n - 1):
        if word[i] == 0 and word[i + 1] == 0:
            return (i, 2)
    i = 0
    while i < n - 1:
        a = word[i]
        if a == 0:
            i += 1
            continue
        b = word[i + 1]
        if b == 0:
            if i + 2 < n and a <= p * word[i + 2]:
                return (i, 3)
            i += 2
            continue
        if (p == 2 and a < 2 * b) or (p != 2 and a < p * b):
            return (i, 2)
        i += 1
    return None


# ---------------------------------------------------------------------------
# Adem rewriting


def _adem_pair(a: int, b: int, p: int) -> dict[Word, int]:
    """Expansion of the inadmissible product Sq^a Sq^b / P^a P^b."""
    out: dict[Word, int] = {}
    if p == 2:
        for c in range(a // 2 + 1):
            if binom_mod(b - c - 1, a - 2 * c, 2):
                w = (a + b,) if c == 0 else (a + b - c, c)
                out[w] = 1
        return out
    for t in range(a // p + 1):
        coef = binom_mod((p - 1) * (b - t) - 1, a - p * t, p)
        if a + t & 1:
            coef = -coef
        coef %= p
        if coef:
            w = (a + b,) if t == 0 else (a + b - t, t)
            out[w] = coef
    return out


def _adem_sandwich(a: int, b: int, p: int) -> dict[Word, int]:
    """Expansion of P^a b P^b with a <= p*b (odd p only)."""
    out: dict[Word, int] = {}
    for t in range(a // p + 1):
        coef = binom_mod((p - 1) * (b - t), a - p * t, p)
        if a + t & 1:
            coef = -coef
        coef %= p
        if coef:
            w = (0, a + b) if t == 0 else (0, a + b - t, t)
            out[w] = (out.get(w, 0) + coef) % p
    for t in range((a - 1) // p + 1):
        coef = binom_mod((p - 1) * (b - t) - 1, a - p * t - 1, p)
        if not (a + t & 1):
            coef = -coef
        coef %= p
        if coef:
            w = (a + b, 0) if t == 0 else (a + b - t, 0, t)
            out[w] = (out.get(w, 0) + coef) % p
    return out


_ADEM_CACHE: dict[tuple[int, Word], dict[Word, int]] = {}


def adem_reduce_word(word: Word, p: int) -> dict[Word, int]:
    """Admissible-basis expansion of a single word, as word -> coefficient."""
    key = (p, word)
    cached = _ADEM_CACHE.get(key)
    if cached is not None:
        return cached
    out: dict[Word, int] = {}
    work: list[tuple[Word, int]] = [(word, 1)]
    while work:
        w, c = work.pop()
        hit = _ADEM_CACHE.get((p, w))
        if hit is not None:
            for wa, ca in hit.items():
                v = (out.get(wa, 0) + c * ca) % p
                if v:
                    out[wa] = v
                else:
                    out.pop(wa, None)
            continue
        spot = _violation(w, p)
        if spot is None:
            v = (out.get(w, 0) + c) % p
            if v:
                out[w] = v
            else:
                out.pop(w, None)
            continue
        i, span = spot
        head, tail = w[:i], w[i + span:]
        if span == 2 and w[i] == 0:
            continue  # b b = 0
        if span == 2:
            expansion = _adem_pair(w[i], w[i + 1], p)
        else:
            expansion = _adem_sandwich(w[i], w[i + 2], p)
        for mid, cm in expansion.items():
            work.append((head + mid + tail, c * cm % p))
    _ADEM_CACHE[key] = out
    return out


# ---------------------------------------------------------------------------
# algebra elements


def _word_sort_key(p: int):
    # within a degree: reverse-lexicographic, so Sq6 sorts before Sq5 Sq1
    return lambda w: (word_degree(w, p), tuple(-a for a in w))


class Element:
    """F_p-linear combination of admissible monomials, canonical form."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: dict[Word, int] | None = None):
        PrimeField(p)
        self.p = p
        clean: dict[Word, int] = {}
        for w, c in (terms or {}).items():
            c %= p
            if not c:
                continue
            if is_admissible(w, p):
                clean[w] = (clean.get(w, 0) + c) % p
            else:
                for wa, ca in adem_reduce_word(w, p).items():
                    clean[wa] = (clean.get(wa, 0) + c * ca) % p
        self.terms = {w: c for w, c in clean.items() if c}

    # -- constructors

    @classmethod
    def zero(cls, p: int) -> "Element":
        return cls(p, {})

    @classmethod
    def one(cls, p: int) -> "Element":
        return cls(p, {(): 1})

    @classmethod
    def from_word(cls, p: int, word: Word | list[int], coeff: int = 1) -> "Element":
        return cls(p, {tuple(word): coeff})

    # -- structure

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Element)
            and self.p == other.p
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.p, tuple(sorted(self.terms.items()))))

    def degree(self) -> int | None:
        """Degree of a homogeneous element; None for 0 or mixed degrees."""
        degs = {word_degree(w, self.p) for w in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self) -> bool:
        return len({word_degree(w, self.p) for w in self.terms}) <= 1

    # -- arithmetic

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, 0) + c
        return Element(self.p, terms)

    def __sub__(self, other: "Element") -> "Element":
        return self + (-1) * other

    def __rmul__(self, scalar: int) -> "Element":
        return Element(self.p, {w: c * scalar for w, c in self.terms.items()})

    def __mul__(self, other: "Element") -> "Element":
        self._check(other)
        terms: dict[Word, int] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                for w, c in adem_reduce_word(w1 + w2, self.p).items():
                    terms[w] = terms.get(w, 0) + c1 * c2 * c
        return Element(self.p, terms)

    def _check(self, other: "Element"):
        if not isinstance(other, Element):
            raise TypeError(f"expected Element, got {type(other).__name__}")
        if self.p != other.p:
            raise ValueError(f"prime mismatch: {self.p} vs {other.p}")

    # -- text form (stable and re-parseable)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=_word_sort_key(self.p)):
            c = self.terms[w]
            body = word_str(w, self.p)
            parts.append(body if c == 1 else f"{c} {body}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Element(p={self.p}, {self})"

    @classmethod
    def parse(cls, text: str, p: int) -> "Element":
        terms: dict[Word, int] = {}
        text = text.strip()
        if text == "0":
            return cls.zero(p)
        for chunk in text.split("+"):
            toks = chunk.split()
            if not toks:
                raise ValueError("empty term")
            coeff = 1
            if toks[0].lstrip("-").isdigit():
                coeff = int(toks[0])
                toks = toks[1:]
            word: list[int] = []
            for t in toks:
                if t == "b":
                    word.append(0)
                elif t.startswith("Sq") and t[2:].isdigit():
                    word.append(int(t[2:]))
                elif t.startswith("P") and t[1:].isdigit():
                    word.append(int(t[1:]))
                else:
                    raise ValueError(f"bad factor {t!r}")
            terms[tuple(word)] = terms.get(tuple(word), 0) + coeff
        return cls(p, terms)


def adem_reduce(word: Word | list[int], p: int) -> Element:
    """Canonical admissible expansion of a product of generators."""
    return Element.from_word(p, tuple(word))


# ---------------------------------------------------------------------------
# antipode


_CHI_CACHE: dict[tuple[int, int], Element] = {}


def _chi_atom(atom: int, p: int) -> Element:
    key = (p, atom)
    cached = _CHI_CACHE.get(key)
    if cached is not None:
        return cached
    if atom == 0 and p != 2:
        out = Element(p, {(0,): -1})
    else:
        # chi(P^n) = -sum_{i=1..n} P^i chi(P^{n-i}), chi(P^0) = 1; same at p=2
        out = Element(p, {(atom,): -1})
        for i in range(1, atom):
            out = out + (-1) * (Element.from_word(p, (i,)) * _chi_atom(atom - i, p))
    _CHI_CACHE[key] = out
    return out


def antipode(x: Element) -> Element:
    """Canonical antiautomorphism: chi(uv) = chi(v) chi(u)."""
    out = Element.zero(x.p)
    for w, c in x.terms.items():
        acc = Element.one(x.p)
        for atom in reversed(w):
            acc = acc * _chi_atom(atom, x.p)
        out = out + c * acc
    return out


# ---------------------------------------------------------------------------
# the finite subalgebras A(k)


class Gen(NamedTuple):
    name: str
    atom: int
    degree: int


@dataclass(frozen=True)
class SubalgebraSpec:
    """A(k) at the prime p; k=None stands for the whole Steenrod algebra.

    Generators: Sq^{2^i} for 0 <= i <= k at p = 2, and b together with
    P^{p^i} for 0 <= i < k at odd p.  The k=None form is representational
    (module validators accept it); its generator list is not enumerable.
    """

    p: int
    k: int | None

    def __post_init__(self):
        PrimeField(self.p)
        if self.k is not None and self.k < 0:
            raise ValueError("level k must be nonnegative")

    def generators(self) -> tuple[Gen, ...]:
        if self.k is None:
            raise ValueError("the full Steenrod algebra has no finite generator list")
        if self.p == 2:
            return tuple(
                Gen(f"Sq{2**i}", 2**i, 2**i) for i in range(self.k + 1)
            )
        gens = [Gen("b", 0, 1)]
        gens += [
            Gen(f"P{self.p**i}", self.p**i, 2 * self.p**i * (self.p - 1))
            for i in range(self.k)
        ]
        return tuple(gens)

    def gen_by_name(self, name: str) -> Gen:
        for g in self.generators():
            if g.name == name:
                return g
        raise KeyError(name)

    def label(self) -> str:
        return f"A({self.k})_{self.p}" if self.k is not None else f"A_{self.p}"


_WORDS_CACHE: dict[tuple[SubalgebraSpec, int], tuple[Word, ...]] = {}


def words_of_degree(spec: SubalgebraSpec, degree: int) -> tuple[Word, ...]:
    """All generator words of the given degree, lexicographically sorted."""
    key = (spec, degree)
    cached = _WORDS_CACHE.get(key)
    if cached is not None:
        return cached
    atoms = sorted(g.atom for g in spec.generators())
    out: list[Word] = []

    def grow(prefix: tuple[int, ...], remaining: int):
        if remaining == 0:
            out.append(prefix)
            return
        for a in atoms:
            d = atom_degree(a, spec.p)
            if d <= remaining:
                grow(prefix + (a,), remaining - d)

    grow((), degree)
    result = tuple(sorted(out))
    _WORDS_CACHE[key] = result
    return result


def _expansion_matrix(
    words: list[Word], p: int
) -> tuple[list[Word], list[list[int]]]:
    """Column-per-word matrix of admissible expansions (rows = monomials)."""
    expansions = [adem_reduce_word(w, p) for w in words]
    support = sorted({m for e in expansions for m in e}, key=_word_sort_key(p))
    index = {m: i for i, m in enumerate(support)}
    mat = [[0] * len(words) for _ in support]
    for j, e in enumerate(expansions):
        for m, c in e.items():
            mat[index[m]][j] = c
    return support, mat


def express_in_words(x: Element, spec: SubalgebraSpec) -> dict[Word, int]:
    """Write a homogeneous element as a combination of generator words.

    Raises ValueError when the element does not lie in the word span of
    the spec's generators (cannot happen for elements of A(k) itself).
    """
    if not x:
        return {}
    deg = x.degree()
    if deg is None:
        raise ValueError("element must be homogeneous")
    words = list(words_of_degree(spec, deg))
    support, mat = _expansion_matrix(words, x.p)
    extra = [m for m in x.terms if m not in set(support)]
    if extra:
        raise ValueError(f"not in the span of {spec.label()} words")
    target = [x.terms.get(m, 0) for m in support]
    sol = solve(mat, target, x.p)
    if sol is None:
        raise ValueError(f"not in the span of {spec.label()} words")
    return {w: c for w, c in zip(words, sol) if c}


# ---------------------------------------------------------------------------
# graded basis of A(k) via closure


class SubalgebraBasis:
    """Echelonized graded F_p-basis of A(k), with coordinate lookups."""

    def __init__(self, spec: SubalgebraSpec, by_degree: dict[int, list[Element]]):
        self.spec = spec
        self.by_degree = by_degree
        self.dimension = sum(len(v) for v in by_degree.values())
        self.top_degree = max((d for d, v in by_degree.items() if v), default=0)

    def elements(self) -> Iterator[Element]:
        for d in sorted(self.by_degree):
            yield from self.by_degree[d]

    def dim_in_degree(self, d: int) -> int:
        return len(self.by_degree.get(d, []))

    def coordinates(self, x: Element, degree: int | None = None) -> list[int]:
        """Coordinates of a homogeneous element against the degree basis."""
        if not x:
            return [0] * self.dim_in_degree(degree) if degree is not None else []
        d = x.degree()
        if d is None:
            raise ValueError("element must be homogeneous")
        basis = self.by_degree.get(d, [])
        support = sorted(
            {m for b in basis for m in b.terms} | set(x.terms),
            key=_word_sort_key(x.p),
        )
        mat = [[b.terms.get(m, 0) for b in basis] for m in support]
        target = [x.terms.get(m, 0) for m in support]
        sol = solve(mat, target, x.p)
        if sol is None:
            raise ValueError("element not in subalgebra span")
        return sol


def subalgebra_basis(spec: SubalgebraSpec, degree_cap: int = 64) -> SubalgebraBasis:
    """Graded basis of A(k), by closing {1} under generator multiplication.

    Row reduction happens in admissible-basis coordinates degree by degree;
    iteration stops when a full sweep adds nothing new.  The degree cap
    guards nontermination only; A(k) at the supported levels tops out far
    below it.
    """
    p = spec.p
    gens = [Element.from_word(p, (g.atom,)) for g in spec.generators()]
    echelon: dict[int, list[tuple[Word, Element]]] = {}

    def insert(x: Element) -> bool:
        if not x:
            return False
        d = x.degree()
        if d is None or d > degree_cap:
            return False
        rows = echelon.setdefault(d, [])
        key = _word_sort_key(p)
        for pivot, vec in rows:
            c = x.terms.get(pivot, 0)
            if c:
                x = x + (-c) * vec
        if not x:
            return False
        lead = min(x.terms, key=key)
        x = pow(x.terms[lead], p - 2, p) * x
        rows.append((lead, x))
        rows.sort(key=lambda pv: key(pv[0]))
        return True

    insert(Element.one(p))
    frontier = [Element.one(p)]
    while frontier:
        new: list[Element] = []
        for x in frontier:
            for g in gens:
                y = g * x
                if insert(y):
                    new.append(y)
        frontier = new
    by_degree = {
        d: [vec for _, vec in rows] for d, rows in sorted(echelon.items())
    }
    return SubalgebraBasis(spec, by_degree)


# ---------------------------------------------------------------------------
# presentation relations


Relation = tuple[str, tuple[tuple[int, Word], ...]]

# the pictographic A(2) relations, pinned as written
A2_RELATIONS: tuple[tuple[Word, ...], ...] = (
    ((1, 1),),
    ((2, 2), (1, 2, 1)),
    ((4, 1), (1, 4), (2, 1, 2)),
    ((4, 4), (2, 2, 4), (2, 4, 2)),
)

_RELATIONS_CACHE: dict[SubalgebraSpec, tuple[Relation, ...]] = {}


def _relation_name(terms: tuple[tuple[int, Word], ...], p: int) -> str:
    parts = []
    for c, w in terms:
        body = word_str(w, p)
        parts.append(body if c % p == 1 else f"{c % p} {body}")
    return " + ".join(parts)


def presentation_relations(spec: SubalgebraSpec) -> tuple[Relation, ...]:
    """Defining relations of A(k) used by module validation.

    Candidates are the inadmissible generator pairs g h (plus the
    Bockstein-sandwich triples g b h at odd primes); each is re-expressed
    through the remaining words of its degree.  Pairs whose reduction
    leaves the word span (an honest new element, like Sq2 Sq4) yield no
    relation.
    """
    cached = _RELATIONS_CACHE.get(spec)
    if cached is not None:
        return cached
    p = spec.p
    atoms = sorted(g.atom for g in spec.generators())
    candidates: list[Word] = []
    if p != 2:
        candidates.append((0, 0))
    positive = [a for a in atoms if a >= 1]
    for a in positive:
        for b in positive:
            if (p == 2 and a < 2 * b) or (p != 2 and a < p * b):
                candidates.append((a, b))
            if p != 2 and a <= p * b:
                candidates.append((a, 0, b))
    rels: list[Relation] = []
    for w in sorted(candidates, key=lambda w: (word_degree(w, p), w)):
        reduced = adem_reduce_word(w, p)
        others = [x for x in words_of_degree(spec, word_degree(w, p)) if x != w]
        support, mat = _expansion_matrix(others, p)
        if any(m not in set(support) for m in reduced) and reduced:
            continue
        target = [reduced.get(m, 0) for m in support]
        sol = solve(mat, target, p)
        if sol is None:
            continue
        terms: list[tuple[int, Word]] = [(1, w)]
        for x, c in zip(others, sol):
            if c:
                terms.append(((-c) % p, x))
        rel = tuple(terms)
        rels.append((_relation_name(rel, p), rel))
    result = tuple(rels)
    _RELATIONS_CACHE[spec] = result
    return result


class RelationCheck(NamedTuple):
    name: str
    ok: bool
    residue: str


def verify_presentation(spec: SubalgebraSpec) -> list[RelationCheck]:
    """Reduce each defining relation of the spec; report any nonzero residue.

    For A(2)_2 this checks the four pinned relations; every spec also gets
    its generated presentation list.
    """
    p = spec.p
    checks: list[RelationCheck] = []
    seen: set[str] = set()

    def run(name: str, terms):
        if name in seen:
            return
        seen.add(name)
        total = Element.zero(p)
        for c, w in terms:
            total = total + c * Element.from_word(p, w)
        checks.append(RelationCheck(name, not total, str(total)))

    if spec.p == 2 and spec.k == 2:
        for words in A2_RELATIONS:
            terms = tuple((1, w) for w in words)
            run(_relation_name(terms, p), terms)
    for name, terms in presentation_relations(spec):
        run(name, terms)
    return checks
