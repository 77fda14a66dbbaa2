"""Subalgebra extents against a word-span oracle.

The engine closes {1} under generator multiplication with incremental
echelonization.  The oracle here is a different route: enumerate every
generator word of each degree outright, expand each in the admissible
basis, and row-reduce the whole degree at once.  The two must agree on
every graded dimension.
"""

import pytest

from psdual import linalg
from psdual.steenrod import (
    Element,
    SubalgebraSpec,
    adem_reduce_word,
    atom_degree,
    subalgebra_basis,
)


def span_oracle_dims(spec, top_guess):
    """Graded dimensions of A(k) from the set of word values per degree.

    values(D) = { g * v : g generator, v in values(D - |g|) } is exactly
    the set of values of degree-D generator words (each word is some
    g * (shorter word)), deduplicated so the table stays small; the
    graded dimension is the rank of that value set.
    """
    gens = [
        (Element.from_word(spec.p, (g.atom,)), g.degree)
        for g in spec.generators()
    ]
    values: dict[int, set[Element]] = {0: {Element.one(spec.p)}}
    dims = {0: 1}
    for degree in range(1, top_guess + 1):
        vals = set()
        for g_elem, g_deg in gens:
            for v in values.get(degree - g_deg, ()):
                vals.add(g_elem * v)
        values[degree] = vals
        nonzero = [v for v in vals if v]
        if not nonzero:
            dims[degree] = 0
            continue
        support = sorted({m for e in nonzero for m in e.terms})
        rows = [[e.terms.get(m, 0) for m in support] for e in nonzero]
        dims[degree] = linalg.rank(rows, spec.p)
    return dims


@pytest.mark.parametrize(
    "spec,dim,top",
    [
        (SubalgebraSpec(2, 0), 2, 1),
        (SubalgebraSpec(2, 1), 8, 6),
        (SubalgebraSpec(2, 2), 64, 23),
    ],
)
def test_extent_against_span_oracle(spec, dim, top):
    oracle = span_oracle_dims(spec, top + 4)
    basis = subalgebra_basis(spec)
    assert sum(oracle.values()) == dim
    assert max(d for d, v in oracle.items() if v) == top
    assert basis.dimension == dim
    assert basis.top_degree == top
    for d in range(top + 5):
        assert basis.dim_in_degree(d) == oracle[d], f"degree {d}"


def test_a0_basis_is_one_and_sq1():
    basis = subalgebra_basis(SubalgebraSpec(2, 0))
    assert [str(e) for e in basis.elements()] == ["1", "Sq1"]


def test_odd_primary_extent_against_oracle():
    spec = SubalgebraSpec(3, 1)
    basis = subalgebra_basis(spec)
    oracle = span_oracle_dims(spec, basis.top_degree + 4)
    assert sum(oracle.values()) == basis.dimension
    for d, v in oracle.items():
        assert basis.dim_in_degree(d) == v


@pytest.mark.parametrize("spec", [SubalgebraSpec(2, 1), SubalgebraSpec(2, 2)])
def test_basis_closed_under_multiplication(spec):
    basis = subalgebra_basis(spec)
    elems = list(basis.elements())
    for a in elems:
        for b in elems:
            ab = a * b
            if ab:
                basis.coordinates(ab)  # raises if outside the span


def test_a1_graded_dimensions():
    basis = subalgebra_basis(SubalgebraSpec(2, 1))
    assert [basis.dim_in_degree(d) for d in range(7)] == [1, 1, 1, 2, 1, 1, 1]


def test_full_spec_is_representational_only():
    spec = SubalgebraSpec(2, None)
    assert spec.label() == "A_2"
    with pytest.raises(ValueError):
        spec.generators()


def test_spec_generators():
    a3 = SubalgebraSpec(2, 3)
    assert [g.name for g in a3.generators()] == ["Sq1", "Sq2", "Sq4", "Sq8"]
    a15 = SubalgebraSpec(5, 1)
    assert [(g.name, g.degree) for g in a15.generators()] == [("b", 1), ("P1", 8)]
    a23 = SubalgebraSpec(3, 2)
    assert [g.name for g in a23.generators()] == ["b", "P1", "P3"]
