"""Ready-made ring models and the text-file loader.

Projective families come with their full operation tables: Sq^i on
RP/CP/HP via the binomial rules, P^i at odd primes via the one-root
splitting embeddings (x -> -t^2 for HP, with the sign convention pinned
so that P^1 x = x^2 at p = 3).  User spaces arrive through a
line-oriented text format; loaded objects are validated before use.

File grammar ('#' starts a comment, tokens are whitespace-separated):

    prime <p>
    fundamental <n>                      # rings only
    basis <name> <degree>
    op <g> <name> = <c>*<name> [+ ...]   # g in Sq1 Sq2 Sq4 Sq8 b P1 P3 P5
    cup <name> <name> = <c>*<name> [+ ...]

Unspecified actions and products are zero; ``= 0`` is accepted.
"""

from __future__ import annotations

import os
from pathlib import Path

from .linalg import Matrix, zeros
from .manifolds import Space
from .modules import FiniteModule, GradedSpace, op_atom, op_degree, validate
from .newton import cp_char_data, hp_char_data
from .rings import Elt, PoincareRing, validate_ring
from .steenrod import SubalgebraSpec, binom_mod

FILE_OPS = ("Sq1", "Sq2", "Sq4", "Sq8", "b", "P1", "P3", "P5")


class ParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ValidationError(ValueError):
    def __init__(self, name: str, violations: list[str]):
        super().__init__(
            f"{name}: {len(violations)} violation(s):\n  "
            + "\n  ".join(violations)
        )
        self.violations = violations


# ---------------------------------------------------------------------------
# truncated polynomial models


def _poly_ring(
    p: int,
    name: str,
    gen_degree: int,
    n: int,
    op_rule,
) -> PoincareRing:
    """F_p[x]/(x^{n+1}) with |x| = gen_degree and a closed action rule.

    ``op_rule(label_atom, j)`` returns (coefficient, target exponent) for
    the operation on x^j, or None for zero.
    """
    names = {0: ("1",)}
    for j in range(1, n + 1):
        names[gen_degree * j] = (f"x{j}",)
    space = GradedSpace(p, names)
    cup: dict[tuple[str, str], Elt] = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i + j <= n:
                cup[(f"x{i}", f"x{j}")] = {f"x{i+j}": 1}
    ops: dict[str, dict[int, Matrix]] = {}
    labels = (
        [(f"Sq{i}", i) for i in range(1, gen_degree * n + 1)]
        if p == 2
        else [(f"P{i}", i) for i in range(1, gen_degree * n // (2 * (p - 1)) + 1)]
    )
    for label, atom in labels:
        by_deg: dict[int, Matrix] = {}
        for j in range(1, n + 1):
            hit = op_rule(atom, j)
            if hit is None:
                continue
            coef, target = hit
            if coef % p == 0 or target > n:
                continue
            mat = zeros(1, 1)
            mat[0][0] = coef % p
            by_deg[gen_degree * j] = mat
        if by_deg:
            ops[label] = by_deg
    return PoincareRing(p, name, space, gen_degree * n, cup, ops)


def rp(n: int) -> PoincareRing:
    """H^*(RP^n; F_2) = F_2[x]/(x^{n+1}), Sq^i x^j = C(j, i) x^{i+j}."""
    if n < 1:
        raise ValueError("need n >= 1")
    return _poly_ring(
        2, f"RP^{n}", 1, n, lambda i, j: (binom_mod(j, i, 2), j + i)
    )


def cp(n: int, p: int = 2) -> PoincareRing:
    """H^*(CP^n; F_p): degree-2 generator, binomial action."""
    if n < 1:
        raise ValueError("need n >= 1")
    if p == 2:

        def rule(i, j):
            if i % 2:
                return None
            return binom_mod(j, i // 2, 2), j + i // 2

    else:

        def rule(i, j):  # P^i x^j = C(j, i) x^{j + i(p-1)}
            return binom_mod(j, i, p), j + i * (p - 1)

    return _poly_ring(p, f"CP^{n}", 2, n, rule)


def hp(n: int, p: int = 2) -> PoincareRing:
    """H^*(HP^n; F_p) for p in {2, 3, 5}: degree-4 generator.

    p = 2: the total square of x^j is (x + x^2)^j, so only Sq^{4i} act.
    Odd p: embed x -> -t^2 with P(t) = t + t^p, giving
    P^i x^j = (-1)^{i(p-1)/2} C(2j, i) x^{j + i(p-1)/2}.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if p not in (2, 3, 5):
        raise ValueError(f"HP^n is modelled at p in 2, 3, 5 only, not {p}")
    if p == 2:

        def rule(i, j):
            if i % 4:
                return None
            return binom_mod(j, i // 4, 2), j + i // 4

    else:
        half = (p - 1) // 2

        def rule(i, j):
            if (i * half) % 1:
                return None
            sign = -1 if (i * half) % 2 else 1
            return sign * binom_mod(2 * j, i, p), j + i * half

    return _poly_ring(p, f"HP^{n}", 4, n, rule)


def op2() -> PoincareRing:
    """The octonionic projective plane at p = 2: F_2[x]/(x^3), |x| = 8."""

    def rule(i, j):
        if i % 8:
            return None
        return binom_mod(j, i // 8, 2), j + i // 8

    return _poly_ring(2, "F4/Spin(9)", 8, 2, rule)


# ---------------------------------------------------------------------------
# assembled spaces


def rp_space(n: int) -> Space:
    return Space(f"RP^{n}", n, {2: rp(n)})


def cp_space(n: int, primes=(2, 3, 5)) -> Space:
    return Space(
        f"CP^{n}", 2 * n, {p: cp(n, p) for p in primes}, cp_char_data(n)
    )


def hp_space(n: int, primes=(2, 3, 5)) -> Space:
    return Space(
        f"HP^{n}", 4 * n, {p: hp(n, p) for p in primes}, hp_char_data(n)
    )


def op2_space() -> Space:
    return Space("F4/Spin(9)", 16, {2: op2()})


def data_dir() -> Path:
    override = os.environ.get("PSDUAL_DATA")
    if override:
        return Path(override)
    return Path(__file__).parent / "data"


def file_space(path: str | Path) -> Space:
    obj = load(path)
    if not isinstance(obj, PoincareRing):
        raise ValueError(
            f"{path}: space analysis needs a ring file (with 'fundamental')"
        )
    return Space(obj.name, obj.n, {obj.p: obj})


def parse_space(text: str, primes=None) -> Space:
    """Space strings: rp:11, cp:11, hp:7, op2, file:<path>."""
    text = text.strip()
    if text == "op2":
        return op2_space()
    if text.startswith("file:"):
        return file_space(text[5:])
    if ":" in text:
        family, _, arg = text.partition(":")
        if family in ("rp", "cp", "hp") and arg.isdigit():
            n = int(arg)
            if family == "rp":
                return rp_space(n)
            chosen = tuple(primes) if primes else (2, 3, 5)
            if family == "cp":
                return cp_space(n, chosen)
            return hp_space(n, tuple(p for p in chosen if p in (2, 3, 5)))
    raise ValueError(f"unknown space {text!r}")


# ---------------------------------------------------------------------------
# the text format


def _parse_combination(rhs: str, line_no: int) -> Elt:
    rhs = rhs.strip()
    if rhs == "0":
        return {}
    out: Elt = {}
    for chunk in rhs.split("+"):
        chunk = chunk.strip()
        if "*" in chunk:
            c_text, _, name = chunk.partition("*")
            try:
                c = int(c_text)
            except ValueError as exc:
                raise ParseError(line_no, f"bad coefficient {c_text!r}") from exc
        else:
            c, name = 1, chunk
        name = name.strip()
        if not name:
            raise ParseError(line_no, "missing basis name")
        out[name] = out.get(name, 0) + c
    return out


def loads(text: str, name: str = "<string>") -> PoincareRing | FiniteModule:
    """Parse the text format; returns a ring iff 'fundamental' appears."""
    prime: int | None = None
    fundamental: int | None = None
    basis: dict[str, int] = {}
    op_lines: list[tuple[int, str, str, Elt]] = []
    cup_lines: list[tuple[int, str, str, Elt]] = []

    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split(None)
        head = toks[0]
        if head == "prime":
            if len(toks) != 2 or not toks[1].isdigit():
                raise ParseError(line_no, "usage: prime <p>")
            prime = int(toks[1])
        elif head == "fundamental":
            if len(toks) != 2 or not toks[1].lstrip("-").isdigit():
                raise ParseError(line_no, "usage: fundamental <n>")
            fundamental = int(toks[1])
        elif head == "basis":
            if len(toks) != 3 or not toks[2].lstrip("-").isdigit():
                raise ParseError(line_no, "usage: basis <name> <degree>")
            if toks[1] in basis:
                raise ParseError(line_no, f"duplicate basis name {toks[1]!r}")
            basis[toks[1]] = int(toks[2])
        elif head in ("op", "cup"):
            body = line[len(head):].strip()
            if "=" not in body:
                raise ParseError(line_no, f"{head} line needs '='")
            lhs, _, rhs = body.partition("=")
            lhs_toks = lhs.split()
            if len(lhs_toks) != 2:
                raise ParseError(
                    line_no, f"usage: {head} <a> <b> = <combination>"
                )
            combo = _parse_combination(rhs, line_no)
            if head == "op":
                if lhs_toks[0] not in FILE_OPS:
                    raise ParseError(
                        line_no,
                        f"operation {lhs_toks[0]!r} not in {' '.join(FILE_OPS)}",
                    )
                op_lines.append((line_no, lhs_toks[0], lhs_toks[1], combo))
            else:
                cup_lines.append((line_no, lhs_toks[0], lhs_toks[1], combo))
        else:
            raise ParseError(line_no, f"unknown directive {head!r}")

    if prime is None:
        raise ParseError(1, "missing 'prime' line")
    if not basis:
        raise ParseError(1, "no basis lines")
    by_degree: dict[int, list[str]] = {}
    for nm, d in basis.items():
        by_degree.setdefault(d, []).append(nm)
    space = GradedSpace(prime, {d: tuple(v) for d, v in by_degree.items()})

    def check_name(nm: str, line_no: int):
        if nm not in basis:
            raise ParseError(line_no, f"unknown basis name {nm!r}")

    act: dict[str, dict[int, Matrix]] = {}
    for line_no, g, src, combo in op_lines:
        check_name(src, line_no)
        for nm in combo:
            check_name(nm, line_no)
        d = basis[src]
        target = d + op_degree(g, prime)
        tgt_names = space.names(target)
        for nm in combo:
            if basis[nm] != target:
                raise ParseError(
                    line_no,
                    f"{g} {src}: {nm} has degree {basis[nm]}, expected {target}",
                )
        mat = act.setdefault(g, {}).setdefault(
            d, zeros(len(tgt_names), space.dim(d))
        )
        col = space.index(d, src)
        for nm, c in combo.items():
            mat[tgt_names.index(nm)][col] = c % prime

    if fundamental is None:
        if cup_lines:
            raise ParseError(
                cup_lines[0][0], "cup lines need a 'fundamental' line (rings)"
            )
        unstable = min(space.degrees(), default=0) >= 0
        mod = FiniteModule(space, act, unstable=unstable)
        spec = _inferred_spec(prime, act)
        violations = validate(mod, spec)
        if violations:
            raise ValidationError(name, violations)
        return mod

    cup: dict[tuple[str, str], Elt] = {}
    for line_no, a, b, combo in cup_lines:
        check_name(a, line_no)
        check_name(b, line_no)
        for nm in combo:
            check_name(nm, line_no)
            if basis[nm] != basis[a] + basis[b]:
                raise ParseError(
                    line_no,
                    f"cup {a} {b}: {nm} has degree {basis[nm]}, "
                    f"expected {basis[a] + basis[b]}",
                )
        cup[(a, b)] = combo
    ring = PoincareRing(
        prime, Path(name).stem if name != "<string>" else name,
        space, fundamental, cup, act,
    )
    _derive_ops(ring)
    violations = validate_ring(ring)
    if violations:
        raise ValidationError(name, violations)
    return ring


def _inferred_spec(p: int, act: dict) -> SubalgebraSpec:
    """Smallest A(k) whose generators cover the operations present."""
    atoms = {op_atom(g) for g in act}
    if p == 2:
        k = 0
        while any(a > 2**k for a in atoms):
            k += 1
        return SubalgebraSpec(2, k)
    k = 1
    while any(a > p ** (k - 1) for a in atoms if a):
        k += 1
    return SubalgebraSpec(p, k)


def _derive_ops(ring: PoincareRing):
    """Fill in decomposable operations from the generator actions.

    A loaded ring only names Sq1/Sq2/Sq4/Sq8 (resp. b, P1, P3, P5); the
    other Sq^i / P^i are words in those whenever the grading width allows,
    which is what the Cartan and Wu machinery needs.
    """
    from . import linalg as la
    from .steenrod import Element, atom_str

    p = ring.p
    width = max(ring.space.degrees())
    available = sorted({op_atom(g) for g in ring.ops if op_atom(g) != 0})
    if not available:
        return
    spec_atoms = tuple(available)
    targets = (
        range(1, width + 1)
        if p == 2
        else range(1, width // (2 * (p - 1)) + 1)
    )
    for i in targets:
        label = atom_str(i, p) if p == 2 else f"P{i}"
        if label in ring.ops or i in available:
            continue
        elem = Element.from_word(p, (i,))
        expr = _express_over_atoms(elem, spec_atoms, p)
        if expr is None:
            continue
        by_deg: dict[int, Matrix] = {}
        deg_i = op_degree(label, p)
        for d in ring.space.degrees():
            if ring.space.dim(d + deg_i) == 0:
                continue
            total = zeros(ring.space.dim(d + deg_i), ring.space.dim(d))
            for word, c in expr.items():
                mat = ring._mod.word_matrix(word, d)
                total = la.mat_add(total, la.mat_scale(c, mat, p), p)
            if not la.is_zero_matrix(total):
                by_deg[d] = total
        if by_deg:
            ring.ops[label] = by_deg  # ring.ops aliases the module table


def _express_over_atoms(elem, atoms: tuple[int, ...], p: int):
    """Like express_in_words but over an arbitrary positive atom set."""
    from .linalg import solve
    from .steenrod import _expansion_matrix, atom_degree

    deg = elem.degree()
    if deg is None:
        return None
    words: list[tuple[int, ...]] = []

    def grow(prefix, remaining):
        if remaining == 0:
            words.append(prefix)
            return
        for a in atoms:
            d = atom_degree(a, p)
            if d <= remaining:
                grow(prefix + (a,), remaining - d)

    grow((), deg)
    if not words:
        return None
    support, mat = _expansion_matrix(words, p)
    if any(m not in set(support) for m in elem.terms):
        return None
    sol = solve(mat, [elem.terms.get(m, 0) for m in support], p)
    if sol is None:
        return None
    return {w: c for w, c in zip(words, sol) if c}


def dumps(obj: PoincareRing | FiniteModule) -> str:
    """Canonical text form; load(dumps(x)) reproduces x."""
    lines = [f"prime {obj.p}"]
    if isinstance(obj, PoincareRing):
        lines.append(f"fundamental {obj.n}")
        space = obj.space
    else:
        space = obj.space
    for d in space.degrees():
        for nm in space.names(d):
            lines.append(f"basis {nm} {d}")
    act = obj.ops if isinstance(obj, PoincareRing) else obj.act
    for g in sorted(act, key=lambda g: (op_degree(g, obj.p), g)):
        if isinstance(obj, PoincareRing) and op_atom(g) not in (
            0, 1, 2, 4, 8
        ):
            continue  # derived operations are reconstructed on load
        for d in sorted(act[g]):
            mat = act[g][d]
            tgt = space.names(d + op_degree(g, obj.p))
            for col, src in enumerate(space.names(d)):
                combo = [
                    (mat[row][col], nm)
                    for row, nm in enumerate(tgt)
                    if mat[row][col]
                ]
                if combo:
                    rhs = " + ".join(f"{c}*{nm}" for c, nm in combo)
                    lines.append(f"op {g} {src} = {rhs}")
    if isinstance(obj, PoincareRing):
        seen = set()
        for d1 in space.degrees():
            for d2 in space.degrees():
                if d1 == 0 or d2 == 0:
                    continue
                for a in space.names(d1):
                    for b in space.names(d2):
                        if (b, a) in seen:
                            continue
                        prod = obj.cup({a: 1}, {b: 1})
                        if prod:
                            seen.add((a, b))
                            rhs = " + ".join(
                                f"{c}*{nm}" for nm, c in sorted(prod.items())
                            )
                            lines.append(f"cup {a} {b} = {rhs}")
    return "\n".join(lines) + "\n"


def load(path: str | Path) -> PoincareRing | FiniteModule:
    path = Path(path)
    return loads(path.read_text(), name=str(path))


def save(obj: PoincareRing | FiniteModule, path: str | Path):
    Path(path).write_text(dumps(obj))
