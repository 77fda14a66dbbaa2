"""Duality invariants of closed-manifold cohomology rings.

Wu classes realize the operations into the top degree through the cup
pairing; the Stiefel-Whitney classes of the tangent bundle follow from
them, the inverse classes give the negative tangent bundle, and its Thom
module decides which subalgebra generators annihilate the Thom class.
The structure report runs all of that at every requested prime, always
cross-checking the top-operation criterion against the module-level
self-duality search.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import linalg
from .modules import FiniteModule, GradedSpace, is_self_dual, op_degree
from .newton import IntegralCharData
from .rings import Elt, PoincareRing, inverse_total_class
from .steenrod import SubalgebraSpec


# ---------------------------------------------------------------------------
# Wu classes and Stiefel-Whitney classes


@dataclass
class WuData:
    """v_i (p = 2) or Milnor-Wu q_i (odd p), as a map degree-index -> class."""

    p: int
    classes: dict[int, Elt]

    def total(self, R: PoincareRing) -> Elt:
        out = R.one()
        for v in self.classes.values():
            out = R.add(out, v)
        return out

    def cls(self, i: int) -> Elt:
        return self.classes.get(i, {})


def wu_classes(R: PoincareRing) -> WuData:
    """Solve <v_i x, [M]> = <Sq^i x, [M]> for every i (q_i and P^i at odd p).

    Uniqueness and solvability are exactly nondegeneracy of the cup
    pairing; a degenerate ring raises.
    """
    if R.n is None:
        raise ValueError("Wu classes need a fundamental degree")
    p = R.p
    classes: dict[int, Elt] = {}
    indices = (
        range(1, R.n + 1)
        if p == 2
        else range(1, R.n // (2 * (p - 1)) + 1)
    )
    for i in indices:
        deg = i if p == 2 else 2 * i * (p - 1)
        label = f"Sq{i}" if p == 2 else f"P{i}"
        dim = R.space.dim(deg)
        comp_deg = R.n - deg
        if dim == 0:
            continue
        rows = []
        rhs = []
        for x in R.space.names(comp_deg):
            rows.append(
                [
                    R.pairing_coef(R.cup({e: 1}, {x: 1}))
                    for e in R.space.names(deg)
                ]
            )
            rhs.append(R.pairing_coef(R.apply_op(label, {x: 1})))
        sol = linalg.solve(rows, rhs, p)
        if sol is None or (
            rows and linalg.rank(rows, p) < dim
        ):
            raise ValueError(f"degenerate pairing in degree {deg}")
        v = R.from_coords(sol, deg)
        if v:
            classes[i] = v
    return WuData(p, classes)


def sw_from_wu(R: PoincareRing, wu: WuData) -> Elt:
    """w(tau) = Sq(v): total Stiefel-Whitney class from the Wu classes."""
    if R.p != 2:
        raise ValueError("Stiefel-Whitney classes live at p = 2")
    return R.total_op(wu.total(R))


# ---------------------------------------------------------------------------
# virtual bundles and Thom modules


@dataclass
class VirtualBundle:
    """Characteristic-class data of a virtual bundle over a ring model.

    p = 2: ``w`` is the total Stiefel-Whitney class.  Odd p: ``q`` is the
    total Milnor-Wu class and ``beta_u`` the Bockstein of the Thom class
    (zero for oriented data).  The virtual rank places the Thom class.
    """

    ring: PoincareRing
    rank: int
    w: Elt = field(default_factory=dict)
    q: Elt = field(default_factory=dict)
    beta_u: Elt = field(default_factory=dict)

    def __post_init__(self):
        R = self.ring
        total = self.w if R.p == 2 else self.q
        if not total:
            total = R.one()
            if R.p == 2:
                self.w = total
            else:
                self.q = total
        if R.degree_part(total, 0) != R.one():
            raise ValueError("total class must have degree-0 term 1")
        if R.p != 2:
            step = 2 * (R.p - 1)
            for name in self.q:
                if R.degree_of[name] % step:
                    raise ValueError(
                        f"odd-p class in degree {R.degree_of[name]}, "
                        f"not a multiple of {step}"
                    )

    def total_class(self) -> Elt:
        return self.w if self.ring.p == 2 else self.q

    def component(self, degree: int) -> Elt:
        return self.ring.degree_part(self.total_class(), degree)


def trivial_bundle(R: PoincareRing, rank: int = 0) -> VirtualBundle:
    return VirtualBundle(R, rank)


def negative_tangent_bundle(R: PoincareRing) -> VirtualBundle:
    """-tau with classes derived from the Wu identities.

    At p = 2 the total class is the series inverse of Sq(v); at odd p the
    power sums are additive, so every q_i just changes sign.  Oriented
    data: the Bockstein kills the Thom class.
    """
    wu = wu_classes(R)
    if R.p == 2:
        return VirtualBundle(R, -R.n, w=inverse_total_class(R, sw_from_wu(R, wu)))
    total = R.one()
    for v in wu.classes.values():
        total = R.add(total, R.scale(-1, v))
    return VirtualBundle(R, -R.n, q=total)


def thom_module(xi: VirtualBundle) -> FiniteModule:
    """Free rank-one module on the Thom class u in degree ``rank``.

    Sq^i(x u) = sum_{a+b=i} Sq^a(x) w_b(xi) u at p = 2; odd p uses the
    Cartan expansion with the q_i and the Bockstein of u.
    """
    R = xi.ring
    p = R.p
    r = xi.rank
    space = GradedSpace(
        p,
        {
            d + r: tuple("u" if n == R.unit else f"{n}.u" for n in R.space.names(d))
            for d in R.space.degrees()
        },
    )
    act: dict[str, dict[int, list[list[int]]]] = {}

    def column(label: str, x: str) -> Elt:
        atom = int(label[2:]) if label.startswith("Sq") else (
            0 if label == "b" else int(label[1:])
        )
        kind = "Sq" if p == 2 else "P"
        if label == "b":
            out = R.apply_op("b", {x: 1})
            sign = -1 if R.degree_of[x] % 2 else 1
            return R.add(out, R.scale(sign, R.cup({x: 1}, xi.beta_u)))
        out = R.zero()
        for a in range(atom + 1):
            left = {x: 1} if a == 0 else R.apply_op(f"{kind}{a}", {x: 1})
            cls = xi.component((atom - a) * (1 if p == 2 else 2 * (p - 1)))
            out = R.add(out, R.cup(left, cls))
        return out

    labels = R.op_labels()
    if p != 2 and "b" not in labels:
        labels = ["b"] + labels
    for label in labels:
        shift_deg = op_degree(label, p)
        by_deg = {}
        for d in R.space.degrees():
            target = d + shift_deg
            if R.space.dim(target) == 0:
                continue
            cols = [
                R.coords(column(label, x), target) for x in R.space.names(d)
            ]
            by_deg[d + r] = linalg.transpose(cols)
        act[label] = by_deg
    return FiniteModule(space, act)


def thom_iso_is_linear(
    xi: VirtualBundle, spec: SubalgebraSpec
) -> tuple[bool, str | None]:
    """Do the spec's generators pass through the Thom isomorphism?

    Equivalent to every generator annihilating the Thom class, i.e. to
    the vanishing of the matching characteristic-class components.
    """
    R = xi.ring
    if spec.p != R.p:
        raise ValueError("prime mismatch")
    for g in spec.generators():
        if g.atom == 0:
            cls = xi.beta_u
        else:
            cls = xi.component(g.degree)
        if cls:
            return False, f"{g.name} u = ({R.elt_str(cls)}) u != 0"
    return True, None


# ---------------------------------------------------------------------------
# top-operation criterion


def top_op_vanishing(R: PoincareRing, spec: SubalgebraSpec) -> dict[str, bool]:
    """For each generator: does its action into H^n vanish?"""
    if R.n is None:
        raise ValueError("needs a fundamental degree")
    if spec.p != R.p:
        raise ValueError("prime mismatch")
    out = {}
    for g in spec.generators():
        out[g.name] = linalg.is_zero_matrix(R.matrix(g.name, R.n - g.degree))
    return out


# ---------------------------------------------------------------------------
# the structure report


@dataclass
class Space:
    """A named space with ring models per prime and optional integral data."""

    name: str
    dim: int
    rings: dict[int, PoincareRing]
    chardata: IntegralCharData | None = None


@dataclass
class LevelResult:
    structure: str  # orientable | spin | string | 5-brane
    verdict: str  # yes | no | no obstruction found | not evaluated
    witness: str = ""
    checks: list[tuple[str, str]] = field(default_factory=list)


@dataclass
class ObstructionReport:
    space: str
    dim: int
    levels: list[LevelResult]
    psd: dict[str, str]  # spec label -> yes/no/not evaluated
    p1_half: int | None = None

    def obstruction(self) -> str:
        for lv in self.levels:
            if lv.verdict == "no":
                return lv.witness or "obstructed"
        return "none found"

    def level(self, structure: str) -> LevelResult:
        for lv in self.levels:
            if lv.structure == structure:
                return lv
        raise KeyError(structure)

    def as_text(self) -> str:
        lines = [f"space: {self.space} (dimension {self.dim})"]
        for label in sorted(self.psd):
            lines.append(f"  {label}-PSD: {self.psd[label]}")
        if self.p1_half is not None:
            lines.append(f"  p1/2 = {self.p1_half}")
        for lv in self.levels:
            line = f"  {lv.structure}: {lv.verdict.upper()}"
            if lv.witness:
                line += f" ({lv.witness})"
            lines.append(line)
        lines.append(f"  obstruction: {self.obstruction()}")
        return "\n".join(lines)

    def as_json(self) -> str:
        return json.dumps(
            {
                "space": self.space,
                "dim": self.dim,
                "psd": self.psd,
                "p1_half": self.p1_half,
                "levels": [
                    {
                        "structure": lv.structure,
                        "verdict": lv.verdict,
                        "witness": lv.witness,
                        "checks": lv.checks,
                    }
                    for lv in self.levels
                ],
                "obstruction": self.obstruction(),
            },
            sort_keys=True,
        )


def psd_verdict(
    R: PoincareRing, spec: SubalgebraSpec, budget: int = 2**24
) -> tuple[bool, str]:
    """Self-duality of the ring's module, computed two independent ways.

    The top-operation criterion and the dualize/shift isomorphism search
    must agree; a disagreement means a broken model and raises.
    """
    tops = top_op_vanishing(R, spec)
    by_tops = all(tops.values())
    verdict = is_self_dual(R.as_module(spec, unstable=False), spec, R.n, budget)
    if verdict.outcome == "inconclusive":
        raise RuntimeError(
            f"self-duality search for {R.name} over {spec.label()} "
            f"exceeded budget"
        )
    if verdict.is_isomorphic != by_tops:
        raise AssertionError(
            f"cross-check failed for {R.name} over {spec.label()}: "
            f"top-operation criterion says {by_tops}, module search says "
            f"{verdict.is_isomorphic}"
        )
    if by_tops:
        return True, ""
    gen = next(
        g for g in spec.generators() if not tops[g.name]
    )
    witness = (
        f"{gen.name}: H^{R.n - gen.degree}({R.name}) -> H^{R.n} nonzero; "
        f"chi({gen.name}): H^0 -> H^{gen.degree} zero"
    )
    return False, witness


def _short_witness(gen_name: str) -> str:
    return f"{gen_name} asymmetry"


def structure_report(space: Space, budget: int = 2**24) -> ObstructionReport:
    """Orientable/spin/string/5-brane verdicts with named witnesses.

    Spin is a biconditional; string and 5-brane are necessary conditions
    unless integral data settles them through p_1/2.  Every self-duality
    verdict is cross-computed through the top-operation criterion and the
    module isomorphism search.
    """
    psd: dict[str, str] = {}
    failures: dict[str, tuple[str, str]] = {}  # spec label -> (short, long)

    def run(prime: int, k: int) -> bool | None:
        R = space.rings.get(prime)
        spec = SubalgebraSpec(prime, k)
        if R is None:
            psd.setdefault(spec.label(), "not evaluated")
            return None
        ok, witness = psd_verdict(R, spec, budget)
        psd[spec.label()] = "yes" if ok else "no"
        if not ok:
            gen = witness.split(":")[0]
            failures[spec.label()] = (_short_witness(gen), witness)
        return ok

    a0 = run(2, 0)
    a1 = run(2, 1)
    a2 = run(2, 2)
    a13 = run(3, 1)
    a3 = run(2, 3)
    a15 = run(5, 1)

    p1_half = space.chardata.p1_half() if space.chardata else None

    levels: list[LevelResult] = []

    def add_level(structure, verdict, witness="", checks=()):
        levels.append(LevelResult(structure, verdict, witness, list(checks)))

    # orientable: A(0)_2-PSD, reported through v_1
    if a0 is None:
        add_level("orientable", "not evaluated")
    elif a0:
        add_level("orientable", "yes", checks=[("v1 = 0", "pass")])
    else:
        add_level(
            "orientable", "no", failures["A(0)_2"][0],
            checks=[("v1 = 0", "fail")],
        )

    # spin: biconditional with A(1)_2-PSD
    if a1 is None:
        add_level("spin", "not evaluated")
    elif a0 is False:
        add_level("spin", "no", failures["A(0)_2"][0])
    elif a1:
        add_level("spin", "yes", checks=[("A(1)_2-PSD", "pass")])
    else:
        add_level("spin", "no", failures["A(1)_2"][0],
                  checks=[("A(1)_2-PSD", "fail")])

    # string: necessary conditions, settled by p_1/2 when available
    checks = []
    witness = ""
    if a1 is False or a0 is False:
        verdict = "no"
        witness = levels[-1].witness  # inherit the spin obstruction
    else:
        verdict = "no obstruction found"
        for label, flag in (("A(2)_2", a2), ("A(1)_3", a13)):
            if flag is None:
                checks.append((f"{label}-PSD", "not evaluated"))
            elif flag:
                checks.append((f"{label}-PSD", "pass"))
            else:
                verdict, (witness, _) = "no", failures[label]
                checks.append((f"{label}-PSD", "fail"))
                break
        if verdict != "no" and space.chardata is not None:
            half = p1_half
            if half is None:  # p_1 not 2-divisible: cannot be spin anyway
                checks.append(("p1/2 = 0", "not evaluated"))
            elif half == 0:
                checks.append(("p1/2 = 0", "pass"))
                if a1:
                    verdict = "yes"
            else:
                verdict = "no"
                witness = f"p1/2 = {half}"
                checks.append(("p1/2 = 0", "fail"))
    add_level("string", verdict, witness, checks)

    # 5-brane: necessary conditions only (the secondary obstruction is out)
    checks = []
    witness = ""
    string_level = levels[-1]
    if string_level.verdict == "no":
        verdict, witness = "no", string_level.witness
    else:
        verdict = "no obstruction found"
        for label, flag in (("A(3)_2", a3), ("A(1)_5", a15)):
            if flag is None:
                checks.append((f"{label}-PSD", "not evaluated"))
            elif flag:
                checks.append((f"{label}-PSD", "pass"))
            else:
                verdict, (witness, _) = "no", failures[label]
                checks.append((f"{label}-PSD", "fail"))
                break
    add_level("5-brane", verdict, witness, checks)

    return ObstructionReport(space.name, space.dim, levels, psd, p1_half)
