"""Self-check battery behind ``psdual verify``.

Each check re-derives a pinned fact from scratch (relations reducing to
zero, subalgebra extents, the top-operation/self-duality equivalence on
the projective corpus, the frozen obstruction table, Newton polynomials,
Wu-route Stiefel-Whitney classes).  The CLI exits nonzero if anything
here disagrees; the pytest suite runs the same facts plus the slower
oracles.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

from .charts import render_a2_portrait, render_module
from .manifolds import (
    negative_tangent_bundle,
    psd_verdict,
    structure_report,
    thom_iso_is_linear,
    top_op_vanishing,
)
from .modules import is_self_dual
from .newton import newton_polynomial, poly_str, q1_divisibility
from .rings import inverse_total_class
from .spaces import (
    cp,
    cp_space,
    data_dir,
    file_space,
    hp,
    hp_space,
    load,
    op2_space,
    rp,
    rp_space,
)
from .steenrod import (
    Element,
    SubalgebraSpec,
    antipode,
    binom_mod,
    subalgebra_basis,
    verify_presentation,
)


class CheckResult(NamedTuple):
    name: str
    ok: bool
    detail: str


EXPECTED_TABLE = {
    "RP^5": "Sq2 asymmetry",
    "RP^11": "Sq4 asymmetry",
    "RP^23": "Sq8 asymmetry",
    "CP^2": "Sq2 asymmetry",
    "CP^3": "P1 asymmetry",
    "CP^5": "Sq4 asymmetry",
    "CP^11": "p1/2 = 6",
    "HP^2": "Sq4 asymmetry",
    "HP^3": "P1 asymmetry",
    "HP^7": "p1/2 = 6",
    "F4/Spin(9)": "Sq8 asymmetry",
}

NEWTON_EXPECTED = {
    5: "p1^2 + 3 p2",
    7: "p1^3 + 4 p1 p2 + 3 p3",
    11: "p1^5 + 6 p1^3 p2 + 5 p1^2 p3 + 5 p1 p2^2 + 6 p1 p4 + 6 p2 p3 + 5 p5",
}


def _check_relations() -> CheckResult:
    bad = [c.name for c in verify_presentation(SubalgebraSpec(2, 2)) if not c.ok]
    for spec in (SubalgebraSpec(2, 3), SubalgebraSpec(3, 1), SubalgebraSpec(5, 1)):
        bad += [c.name for c in verify_presentation(spec) if not c.ok]
    return CheckResult(
        "presentation relations reduce to zero",
        not bad,
        "; ".join(bad) if bad else "all relations vanish",
    )


def _check_antipode() -> CheckResult:
    chi4 = antipode(Element.from_word(2, (4,)))
    want = Element(2, {(4,): 1, (2, 2): 1})
    return CheckResult(
        "antipode of Sq4",
        chi4 == want,
        f"chi(Sq4) = {chi4}",
    )


def _check_extents() -> CheckResult:
    b1 = subalgebra_basis(SubalgebraSpec(2, 1))
    b2 = subalgebra_basis(SubalgebraSpec(2, 2))
    ok = (b1.dimension, b1.top_degree, b2.dimension, b2.top_degree) == (
        8, 6, 64, 23,
    )
    return CheckResult(
        "subalgebra extents",
        ok,
        f"A(1): dim {b1.dimension} top {b1.top_degree}; "
        f"A(2): dim {b2.dimension} top {b2.top_degree}",
    )


def _corpus(small: bool = True):
    rps = range(2, 13) if small else range(1, 25)
    cps = range(1, 7) if small else range(1, 13)
    hps = range(1, 5) if small else range(1, 9)
    for n in rps:
        yield rp(n)
    for n in cps:
        for p in (2, 3, 5):
            yield cp(n, p)
    for n in hps:
        for p in (2, 3, 5):
            yield hp(n, p)
    yield op2_space().rings[2]


def _check_equivalence() -> CheckResult:
    count = 0
    for R in _corpus(small=True):
        ks = range(4) if R.p == 2 else range(2)
        for k in ks:
            psd_verdict(R, SubalgebraSpec(R.p, k))  # raises on disagreement
            count += 1
    return CheckResult(
        "top-operation criterion matches module self-duality",
        True,
        f"{count} (ring, subalgebra) pairs cross-checked",
    )


def _check_thom() -> CheckResult:
    checked = 0
    for R in _corpus(small=True):
        if R.p != 2:
            continue
        xi = negative_tangent_bundle(R)
        for k in range(4):
            spec = SubalgebraSpec(2, k)
            linear, _ = thom_iso_is_linear(xi, spec)
            if linear:
                verdict = is_self_dual(
                    R.as_module(spec, unstable=False), spec, R.n
                )
                if not verdict.is_isomorphic:
                    return CheckResult(
                        "Thom-class annihilation forces self-duality",
                        False,
                        f"{R.name} over {spec.label()}",
                    )
                checked += 1
    return CheckResult(
        "Thom-class annihilation forces self-duality",
        True,
        f"{checked} annihilating (bundle, subalgebra) pairs verified",
    )


def _check_table() -> CheckResult:
    for space, expected in EXPECTED_TABLE.items():
        sp = _builtin_space(space)
        got = structure_report(sp).obstruction()
        if got != expected:
            return CheckResult(
                "frozen obstruction table",
                False,
                f"{space}: got {got!r}, expected {expected!r}",
            )
    return CheckResult(
        "frozen obstruction table",
        True,
        f"{len(EXPECTED_TABLE)} rows match",
    )


def _builtin_space(name: str):
    if name.startswith("RP^"):
        return rp_space(int(name[3:]))
    if name.startswith("CP^"):
        return cp_space(int(name[3:]))
    if name.startswith("HP^"):
        return hp_space(int(name[3:]))
    if name == "F4/Spin(9)":
        return op2_space()
    raise KeyError(name)


def _check_newton() -> CheckResult:
    for p, want in NEWTON_EXPECTED.items():
        got = poly_str(newton_polynomial((p - 1) // 2, p))
        if sorted(got.split(" + ")) != sorted(want.split(" + ")):
            return CheckResult(
                "Newton polynomials mod 5, 7, 11",
                False,
                f"mod {p}: got {got!r}",
            )
    return CheckResult(
        "Newton polynomials mod 5, 7, 11", True, "all three match"
    )


def _check_wu() -> CheckResult:
    from .manifolds import sw_from_wu, wu_classes

    for n in range(1, 13):
        R = rp(n)
        total = sw_from_wu(R, wu_classes(R))
        want = {
            (f"x{j}" if j else "1"): binom_mod(n + 1, j, 2)
            for j in range(n + 1)
            if binom_mod(n + 1, j, 2)
        }
        if total != want:
            return CheckResult(
                "Wu-route w(RP^n) = (1+x)^(n+1)",
                False,
                f"n={n}: {R.elt_str(total)}",
            )
    return CheckResult(
        "Wu-route w(RP^n) = (1+x)^(n+1)", True, "n <= 12 verified"
    )


def _check_q1() -> CheckResult:
    for n in range(1, 9):
        for p in (3, 5):
            sp = cp_space(n)
            by_q1 = q1_divisibility(sp.chardata, p)
            by_top = top_op_vanishing(sp.rings[p], SubalgebraSpec(p, 1))["P1"]
            if by_q1 != by_top:
                return CheckResult(
                    "q1 divisibility matches P1 vanishing",
                    False,
                    f"CP^{n} at p={p}",
                )
    return CheckResult(
        "q1 divisibility matches P1 vanishing", True, "CP^n, n <= 8, p in 3,5"
    )


def _check_charts() -> CheckResult:
    import xml.etree.ElementTree as ET

    svg = render_module(rp(5), fmt="svg")
    ET.fromstring(svg)
    vertices = svg.count("<circle")
    portrait = render_a2_portrait("svg")
    ET.fromstring(portrait)
    ok = vertices == 6 and portrait.count("<circle") == 64
    return CheckResult(
        "charts well-formed with correct vertex counts",
        ok,
        f"rp:5 has {vertices} vertices; portrait has "
        f"{portrait.count('<circle')}",
    )


def _check_data_files() -> CheckResult:
    path = data_dir() / "g2_so4.mod"
    if not path.exists():
        return CheckResult("bundled G2/SO(4) data", True, "file not present")
    sp = file_space(path)
    got = structure_report(sp).obstruction()
    return CheckResult(
        "bundled G2/SO(4) data",
        got == "Sq4 asymmetry",
        f"obstruction: {got}",
    )


ALL_CHECKS: tuple[Callable[[], CheckResult], ...] = (
    _check_relations,
    _check_antipode,
    _check_extents,
    _check_equivalence,
    _check_thom,
    _check_table,
    _check_newton,
    _check_wu,
    _check_q1,
    _check_charts,
    _check_data_files,
)


def run_all() -> list[CheckResult]:
    out = []
    for check in ALL_CHECKS:
        try:
            out.append(check())
        except Exception as exc:  # a crash is a failure, not an abort
            out.append(CheckResult(check.__name__, False, f"raised {exc!r}"))
    return out
