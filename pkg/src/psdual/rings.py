"""Graded-commutative ring models with a Steenrod action.

A PoincareRing is a finite graded F_p-algebra with globally unique basis
names, cup-product structure constants, an optional fundamental degree n
(with one-dimensional top slice spanned by the orientation class), and
action matrices for every operation the model knows: all Sq^i at p = 2,
b and all P^i at odd p.  Ring elements are plain dicts name -> scalar;
inhomogeneous dicts double as total characteristic classes.
"""

from __future__ import annotations

from . import linalg
from .linalg import Matrix
from .modules import FiniteModule, GradedSpace, op_atom, op_degree
from .modules import validate as validate_module
from .steenrod import SubalgebraSpec

Elt = dict[str, int]


class PoincareRing:
    def __init__(
        self,
        p: int,
        name: str,
        space: GradedSpace,
        fundamental_degree: int | None,
        cup: dict[tuple[str, str], Elt],
        ops: dict[str, dict[int, Matrix]],
    ):
        self.p = p
        self.name = name
        self.space = space
        self.n = fundamental_degree
        names = [nm for d in space.degrees() for nm in space.names(d)]
        if len(set(names)) != len(names):
            raise ValueError("ring basis names must be globally unique")
        self.degree_of = {
            nm: d for d in space.degrees() for nm in space.names(d)
        }
        if space.dim(0) != 1:
            raise ValueError("need a one-dimensional degree-0 slice (the unit)")
        self.unit = space.names(0)[0]
        if self.n is not None:
            if space.dim(self.n) != 1:
                raise ValueError(
                    f"fundamental degree {self.n} must be one-dimensional"
                )
            self.top = space.names(self.n)[0]
        else:
            self.top = None
        self._cup = self._complete_cup(cup)
        self._mod = FiniteModule(space, ops)  # shape checks + zero cleanup
        self.ops = self._mod.act

    # -- multiplication table ------------------------------------------------

    def _complete_cup(
        self, given: dict[tuple[str, str], Elt]
    ) -> dict[tuple[str, str], Elt]:
        table: dict[tuple[str, str], Elt] = {}
        for (a, b), prod in given.items():
            if a not in self.degree_of or b not in self.degree_of:
                raise ValueError(f"cup {a} {b}: unknown basis name")
            table[(a, b)] = {n: c % self.p for n, c in prod.items() if c % self.p}
        for (a, b) in list(table):
            if (b, a) not in table:
                sign = -1 if (self.degree_of[a] * self.degree_of[b]) % 2 else 1
                table[(b, a)] = {
                    n: (sign * c) % self.p for n, c in table[(a, b)].items()
                }
        return table

    # -- elements -------------------------------------------------------------

    def zero(self) -> Elt:
        return {}

    def one(self) -> Elt:
        return {self.unit: 1}

    def basis_elt(self, name: str) -> Elt:
        if name not in self.degree_of:
            raise KeyError(name)
        return {name: 1}

    def add(self, a: Elt, b: Elt) -> Elt:
        out = dict(a)
        for n, c in b.items():
            out[n] = (out.get(n, 0) + c) % self.p
        return {n: c for n, c in out.items() if c}

    def scale(self, c: int, a: Elt) -> Elt:
        return {n: (c * x) % self.p for n, x in a.items() if (c * x) % self.p}

    def cup(self, a: Elt, b: Elt) -> Elt:
        out: Elt = {}
        for n1, c1 in a.items():
            for n2, c2 in b.items():
                if n1 == self.unit:
                    prod = {n2: 1}
                elif n2 == self.unit:
                    prod = {n1: 1}
                else:
                    prod = self._cup.get((n1, n2), {})
                for n, c in prod.items():
                    out[n] = (out.get(n, 0) + c1 * c2 * c) % self.p
        return {n: c for n, c in out.items() if c}

    def degree_part(self, a: Elt, d: int) -> Elt:
        return {n: c for n, c in a.items() if self.degree_of[n] == d}

    def coords(self, a: Elt, d: int) -> list[int]:
        return [a.get(n, 0) for n in self.space.names(d)]

    def from_coords(self, v: list[int], d: int) -> Elt:
        return {
            n: c % self.p
            for n, c in zip(self.space.names(d), v)
            if c % self.p
        }

    def elt_str(self, a: Elt) -> str:
        if not a:
            return "0"
        parts = []
        for n in sorted(a, key=lambda n: (self.degree_of[n], n)):
            parts.append(n if a[n] == 1 else f"{a[n]}*{n}")
        return " + ".join(parts)

    # -- operations -----------------------------------------------------------

    def matrix(self, label: str, d: int) -> Matrix:
        return self._mod.matrix(label, d)

    def apply_op(self, label: str, a: Elt) -> Elt:
        out: Elt = {}
        shift = op_degree(label, self.p)
        for d in sorted({self.degree_of[n] for n in a}):
            v = linalg.mat_vec(self.matrix(label, d), self.coords(a, d), self.p)
            for n, c in self.from_coords(v, d + shift).items():
                out[n] = (out.get(n, 0) + c) % self.p
        return {n: c for n, c in out.items() if c}

    def total_op(self, a: Elt) -> Elt:
        """Sum of Sq^i a over all i >= 0 (resp. P^i at odd p)."""
        out = dict(a)
        for label in self.op_labels():
            if op_atom(label) == 0:
                continue
            for n, c in self.apply_op(label, a).items():
                out[n] = (out.get(n, 0) + c) % self.p
        return {n: c for n, c in out.items() if c}

    def op_labels(self) -> list[str]:
        return sorted(self.ops, key=lambda L: (op_degree(L, self.p), L))

    # -- duality --------------------------------------------------------------

    def pairing_coef(self, a: Elt) -> int:
        """Coefficient of the orientation class."""
        if self.top is None:
            raise ValueError("ring has no fundamental degree")
        return a.get(self.top, 0)

    def pairing_matrix(self, d: int) -> Matrix:
        """H^d x H^{n-d} cup pairing against the orientation class."""
        if self.n is None:
            raise ValueError("ring has no fundamental degree")
        rows = []
        for x in self.space.names(d):
            rows.append(
                [
                    self.pairing_coef(self.cup({x: 1}, {y: 1}))
                    for y in self.space.names(self.n - d)
                ]
            )
        return rows

    # -- views ----------------------------------------------------------------

    def as_module(self, spec: SubalgebraSpec, unstable: bool = True) -> FiniteModule:
        if spec.p != self.p:
            raise ValueError(f"ring is mod {self.p}, spec is {spec.label()}")
        act = {
            g.name: dict(self.ops.get(g.name, {})) for g in spec.generators()
        }
        return FiniteModule(self.space, act, unstable=unstable)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PoincareRing)
            and self.p == other.p
            and self.space == other.space
            and self.n == other.n
            and self._cup == other._cup
            and self.ops == other.ops
        )

    def __repr__(self) -> str:
        return f"PoincareRing({self.name}, p={self.p}, n={self.n})"


# ---------------------------------------------------------------------------
# ring validation


def validate_ring(R: PoincareRing, check_action: bool = True) -> list[str]:
    """Poincare-ring axioms: algebra laws, nondegenerate pairing, Cartan
    and unstable conditions for the stored action."""
    out: list[str] = []
    p = R.p
    names = [(n, R.degree_of[n]) for d in R.space.degrees() for n in R.space.names(d)]

    for a, da in names:
        for b, db in names:
            ab = R.cup({a: 1}, {b: 1})
            ba = R.cup({b: 1}, {a: 1})
            sign = -1 if (da * db) % 2 else 1
            if ab != R.scale(sign, ba):
                out.append(f"commutativity fails: {a} {b}")
    for a, _ in names:
        for b, _ in names:
            for c, _ in names:
                lhs = R.cup(R.cup({a: 1}, {b: 1}), {c: 1})
                rhs = R.cup({a: 1}, R.cup({b: 1}, {c: 1}))
                if lhs != rhs:
                    out.append(f"associativity fails: {a} {b} {c}")

    if R.n is not None:
        for d in R.space.degrees():
            if not 0 <= d <= R.n:
                out.append(f"degree {d} outside [0, {R.n}]")
            elif R.space.dim(R.n - d) != R.space.dim(d):
                out.append(f"pairing dims differ in degree {d}")
            elif linalg.rank(R.pairing_matrix(d), p) != R.space.dim(d):
                out.append(f"pairing degenerate in degree {d}")

    if not check_action:
        return out

    labels = R.op_labels()
    for a, da in names:
        for b, db in names:
            prod = R.cup({a: 1}, {b: 1})
            for label in labels:
                atom = op_atom(label)
                if atom == 0:  # Bockstein is a derivation
                    lhs = R.apply_op("b", prod)
                    rhs = R.add(
                        R.cup(R.apply_op("b", {a: 1}), {b: 1}),
                        R.scale(
                            -1 if da % 2 else 1,
                            R.cup({a: 1}, R.apply_op("b", {b: 1})),
                        ),
                    )
                else:
                    lhs = R.apply_op(label, prod)
                    rhs = R.zero()
                    kind = "Sq" if p == 2 else "P"
                    for i in range(atom + 1):
                        left = (
                            {a: 1}
                            if i == 0
                            else R.apply_op(f"{kind}{i}", {a: 1})
                        )
                        j = atom - i
                        right = (
                            {b: 1}
                            if j == 0
                            else R.apply_op(f"{kind}{j}", {b: 1})
                        )
                        rhs = R.add(rhs, R.cup(left, right))
                if lhs != rhs:
                    out.append(f"Cartan fails: {label} on {a} {b}")
                    break

    for a, da in names:
        for label in labels:
            atom = op_atom(label)
            if atom == 0:
                continue
            val = R.apply_op(label, {a: 1})
            if p == 2:
                if atom > da and val:
                    out.append(f"unstable fails: {label} {a} != 0")
                if atom == da and val != R.cup({a: 1}, {a: 1}):
                    out.append(f"unstable fails: {label} {a} != {a}^2")
            else:
                if 2 * atom > da and val:
                    out.append(f"unstable fails: {label} {a} != 0")
                if 2 * atom == da:
                    power = R.one()
                    for _ in range(p):
                        power = R.cup(power, {a: 1})
                    if val != power:
                        out.append(f"unstable fails: {label} {a} != {a}^p")

    spec = SubalgebraSpec(p, 3) if p == 2 else SubalgebraSpec(p, 2)
    out.extend(validate_module(R.as_module(spec, unstable=False), spec))
    return out


# ---------------------------------------------------------------------------
# total classes


def inverse_total_class(R: PoincareRing, c: Elt) -> Elt:
    """Power-series inverse of a total class with constant term 1."""
    if R.degree_part(c, 0) != R.one():
        raise ValueError("total class must have constant term 1")
    top = max(R.space.degrees())
    inv = R.one()
    for k in range(1, top + 1):
        acc = R.zero()
        for j in range(1, k + 1):
            acc = R.add(
                acc, R.cup(R.degree_part(c, j), R.degree_part(inv, k - j))
            )
        inv = R.add(inv, R.scale(-1, acc))
    return inv
