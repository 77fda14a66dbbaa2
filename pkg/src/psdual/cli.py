"""Command line surface.

Subcommands: analyze (structure report for one space), table1 (the
homogeneous-space obstruction table), render / a2 (charts), newton
(integrality polynomials), verify (the self-check battery).  Exit codes:
0 success, 1 verify failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .charts import render_a2_portrait, render_module
from .manifolds import structure_report
from .newton import newton_polynomial, poly_str
from .spaces import data_dir, file_space, load, parse_space
from .verify import run_all


def _write(text: str, output: str | None):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _primes(text: str | None) -> tuple[int, ...] | None:
    if not text:
        return None
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise SystemExit(2)


def cmd_analyze(args) -> int:
    space = parse_space(args.space, _primes(args.primes))
    report = structure_report(space, budget=args.budget)
    _write(report.as_json() if args.json else report.as_text(), args.output)
    return 0


TABLE_ROWS = (
    ("RP^5", "rp:5"),
    ("RP^11", "rp:11"),
    ("RP^23", "rp:23"),
    ("CP^2", "cp:2"),
    ("CP^3", "cp:3"),
    ("CP^5", "cp:5"),
    ("CP^11", "cp:11"),
    ("HP^2", "hp:2"),
    ("HP^3", "hp:3"),
    ("HP^7", "hp:7"),
    ("G2/U(2) short", "file:g2_u2_short.mod"),
    ("G2/U(2) long", "file:g2_u2_long.mod"),
    ("G2/SO(4)", "file:g2_so4.mod"),
    ("G2/T", "file:g2_t.mod"),
    ("F4/Spin(9)", "op2"),
    ("F4/G2", "file:f4_g2.mod"),
)

_VERDICT_CELL = {
    "yes": "Yes",
    "no": "No",
    "no obstruction found": "Yes*",
    "not evaluated": "n/a",
}


def cmd_table1(args) -> int:
    lines = []
    header = f"{'Space':<14} {'Spin?':<6} {'String?':<8} {'5-Brane?':<9} Obstruction"
    lines.append(header)
    lines.append("-" * len(header))
    starred = False
    for label, spec_str in TABLE_ROWS:
        if spec_str.startswith("file:"):
            path = data_dir() / spec_str[5:]
            if not path.exists():
                lines.append(
                    f"{label:<14} {'?':<6} {'?':<8} {'?':<9} data unavailable"
                )
                continue
            space = file_space(path)
        else:
            space = parse_space(spec_str)
        rep = structure_report(space, budget=args.budget)
        cells = [
            _VERDICT_CELL[rep.level(structure).verdict]
            for structure in ("spin", "string", "5-brane")
        ]
        starred = starred or "Yes*" in cells
        lines.append(
            f"{label:<14} {cells[0]:<6} {cells[1]:<8} {cells[2]:<9} "
            f"{rep.obstruction()}"
        )
    if starred:
        lines.append(
            "* no obstruction found at this level "
            "(the checks here are necessary conditions)"
        )
    _write("\n".join(lines), args.output)
    return 0


def cmd_render(args) -> int:
    if args.space.startswith("file:"):
        obj = load(args.space[5:])
        title = args.space[5:]
    else:
        space = parse_space(args.space)
        prime = args.prime or min(space.rings)
        if prime not in space.rings:
            raise ValueError(f"no mod-{prime} model for {space.name}")
        obj = space.rings[prime]
        title = f"{space.name} mod {prime}"
    _write(render_module(obj, fmt=args.format, title=title), args.output)
    return 0


def cmd_a2(args) -> int:
    _write(render_a2_portrait(args.format), args.output)
    return 0


def cmd_newton(args) -> int:
    if args.k is None and args.prime is None:
        raise ValueError("give --k, or --prime to use k = (p-1)/2")
    k = args.k if args.k is not None else (args.prime - 1) // 2
    _write(poly_str(newton_polynomial(k, args.prime)), args.output)
    return 0


def cmd_verify(args) -> int:
    results = run_all()
    failed = 0
    for res in results:
        mark = "ok  " if res.ok else "FAIL"
        sys.stdout.write(f"{mark} {res.name}: {res.detail}\n")
        failed += not res.ok
    sys.stdout.write(
        f"{len(results) - failed}/{len(results)} checks passed\n"
    )
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psdual",
        description="Poincare self-duality checker for Steenrod "
        "subalgebra actions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", help="write to a file instead of stdout")

    p = sub.add_parser("analyze", help="structure report for one space")
    p.add_argument("space", help="rp:11, cp:11, hp:7, op2, or file:<path>")
    p.add_argument("--primes", help="comma list, e.g. 2,3")
    p.add_argument("--json", action="store_true")
    p.add_argument("--budget", type=int, default=2**24,
                   help="isomorphism search budget")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("table1", help="homogeneous-space obstruction table")
    p.add_argument("--budget", type=int, default=2**24)
    common(p)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("render", help="chart of a space or file")
    p.add_argument("space")
    p.add_argument("--format", choices=("svg", "ascii"), default="svg")
    p.add_argument("--prime", type=int)
    common(p)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("a2", help="portrait of the 64-dimensional subalgebra")
    p.add_argument("--format", choices=("svg", "ascii"), default="svg")
    common(p)
    p.set_defaults(func=cmd_a2)

    p = sub.add_parser("newton", help="power sums in the Pontryagin classes")
    p.add_argument("--prime", type=int)
    p.add_argument("--k", type=int)
    common(p)
    p.set_defaults(func=cmd_newton)

    p = sub.add_parser("verify", help="run the self-check battery")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
