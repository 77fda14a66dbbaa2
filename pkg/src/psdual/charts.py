"""Module charts: dots per basis element, one arc per nonzero action entry.

Layout convention (the usual chart idiom): degree increases upward, the
vertices of one degree fan out horizontally, and each operation draws
its arcs in its own style, bowing right with a radius that grows with
the degree span.  Output is deterministic: fixed operation order, fixed
vertex order, fixed float formatting, so documents are golden-testable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .modules import FiniteModule, left_regular_module, op_degree
from .rings import PoincareRing
from .steenrod import SubalgebraSpec

OP_ORDER = ("Sq1", "Sq2", "Sq4", "Sq8", "b", "P1", "P3")

DEFAULT_STYLES = {
    "Sq1": ("#000000", ""),
    "Sq2": ("#1f77b4", ""),
    "Sq4": ("#d62728", ""),
    "Sq8": ("#2ca02c", ""),
    "b": ("#000000", "4 3"),
    "P1": ("#1f77b4", "4 3"),
    "P3": ("#d62728", "4 3"),
}


@dataclass
class ChartStyle:
    """Arc styles per operation plus the geometry of the dot grid."""

    styles: dict[str, tuple[str, str]] = field(
        default_factory=lambda: dict(DEFAULT_STYLES)
    )
    unit: float = 22.0  # vertical pixels per degree
    fan: float = 26.0  # horizontal pixels between vertices of one degree
    margin: float = 30.0

    def style_for(self, op: str) -> tuple[str, str]:
        if op not in self.styles:
            raise KeyError(f"no arc style for operation {op!r}")
        return self.styles[op]


def _module_of(m: FiniteModule | PoincareRing) -> FiniteModule:
    if isinstance(m, PoincareRing):
        return m._mod
    return m


def _arcs(mod: FiniteModule, ops: list[str]):
    """Deterministic arc list: (op, src_degree, src_idx, dst_idx, coeff)."""
    out = []
    for op in ops:
        for d in sorted(mod.act.get(op, {})):
            mat = mod.act[op][d]
            for j in range(len(mat[0]) if mat else 0):
                for i in range(len(mat)):
                    if mat[i][j]:
                        out.append((op, d, j, i, mat[i][j]))
    return out


def _ordered_ops(mod: FiniteModule, style: ChartStyle) -> list[str]:
    present = [op for op in mod.act if mod.act[op]]
    known = [op for op in OP_ORDER if op in present]
    extra = sorted(set(present) - set(known), key=lambda n: (op_degree(n, mod.p), n))
    for op in known + extra:
        style.style_for(op)  # unsupported operations fail fast
    return known + extra


def render_module(
    m: FiniteModule | PoincareRing,
    style: ChartStyle | None = None,
    fmt: str = "svg",
    title: str = "",
) -> str:
    """Emit the chart of a module or ring as an SVG or ASCII document."""
    mod = _module_of(m)
    style = style or ChartStyle()
    if fmt == "svg":
        return _render_svg(mod, style, title)
    if fmt == "ascii":
        return _render_ascii(mod, title)
    raise ValueError(f"unknown format {fmt!r} (want svg or ascii)")


def render_a2_portrait(fmt: str = "svg", style: ChartStyle | None = None) -> str:
    """A(2) at p = 2 as a left module over itself on the generator 1."""
    reg = left_regular_module(SubalgebraSpec(2, 2))
    return render_module(reg, style, fmt, title="A(2) left module on 1")


# ---------------------------------------------------------------------------
# SVG


def _render_svg(mod: FiniteModule, style: ChartStyle, title: str) -> str:
    degrees = mod.degrees()
    if degrees:
        lo, hi = min(degrees), max(degrees)
    else:
        lo = hi = 0
    max_fan = max((mod.dim(d) for d in degrees), default=1)
    width = style.margin * 2 + style.fan * max(max_fan - 1, 0) + 60
    height = style.margin * 2 + style.unit * (hi - lo)

    def pos(d: int, idx: int) -> tuple[float, float]:
        x = style.margin + 40 + idx * style.fan
        y = style.margin + style.unit * (hi - d)
        return x, y

    ops = _ordered_ops(mod, style)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        f"<title>{title or 'module chart'}</title>",
    ]
    for d in range(lo, hi + 1):
        _, y = pos(d, 0)
        parts.append(
            f'<text x="{style.margin - 24:.1f}" y="{y + 4:.1f}" '
            f'font-size="11" fill="#555">{d}</text>'
        )
    for op, d, j, i, coeff in _arcs(mod, ops):
        color, dash = style.style_for(op)
        x1, y1 = pos(d, j)
        x2, y2 = pos(d + op_degree(op, mod.p), i)
        span = op_degree(op, mod.p)
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        label = f"<!-- {op} {d}:{j} -> {d + span}:{i} ({coeff}) -->"
        if span == 1 and x1 == x2:
            parts.append(
                f'{label}<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" '
                f'y2="{y2:.1f}" stroke="{color}" fill="none"{dash_attr}/>'
            )
        else:
            r = style.unit * span * 0.75
            parts.append(
                f'{label}<path d="M {x1:.1f} {y1:.1f} A {r:.1f} {r:.1f} '
                f'0 0 0 {x2:.1f} {y2:.1f}" stroke="{color}" '
                f'fill="none"{dash_attr}/>'
            )
    for d in degrees:
        for idx, name in enumerate(mod.space.names(d)):
            x, y = pos(d, idx)
            parts.append(
                f'<circle cx="{x:.1f}" cy="{y:.1f}" r="3" fill="#000">'
                f"<title>{name} (degree {d})</title></circle>"
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# ASCII


def _render_ascii(mod: FiniteModule, title: str) -> str:
    """One row per degree, top degree first; arcs bracketed on the source row.

    Grammar per row:  ``<degree> | name name ... [op src -> dst] ...``
    """
    degrees = mod.degrees()
    lines = []
    if title:
        lines.append(f"# {title}")
    if not degrees:
        lines.append("(zero module)")
        return "\n".join(lines) + "\n"
    ops = [op for op in mod.act if mod.act[op]]
    ops = [op for op in OP_ORDER if op in ops] + sorted(
        set(ops) - set(OP_ORDER), key=lambda n: (op_degree(n, mod.p), n)
    )
    arcs_by_src: dict[int, list[str]] = {}
    for op, d, j, i, coeff in _arcs(mod, ops):
        src = mod.space.names(d)[j]
        dst = mod.space.names(d + op_degree(op, mod.p))[i]
        text = f"[{op} {src} -> {dst}]" if coeff == 1 else (
            f"[{op} {src} -> {coeff}*{dst}]"
        )
        arcs_by_src.setdefault(d, []).append(text)
    width = max(len(str(d)) for d in range(min(degrees), max(degrees) + 1))
    for d in range(max(degrees), min(degrees) - 1, -1):
        row = f"{d:>{width}} | " + " ".join(mod.space.names(d))
        if d in arcs_by_src:
            row += "  " + " ".join(arcs_by_src[d])
        lines.append(row.rstrip())
    return "\n".join(lines) + "\n"
