"""Poincare self-duality of Steenrod subalgebra actions.

Exact mod-p Steenrod algebra arithmetic, finite A(k)-modules with a
duality-checking isomorphism engine, Poincare ring models of manifolds
with Wu/Stiefel-Whitney/Thom characteristic-class machinery, Newton
integrality tests, a space library with a text-file format, and chart
rendering.  ``psdual --help`` lists the command-line surface.
"""

from .manifolds import (
    ObstructionReport,
    Space,
    VirtualBundle,
    WuData,
    negative_tangent_bundle,
    structure_report,
    thom_iso_is_linear,
    thom_module,
    top_op_vanishing,
    trivial_bundle,
    sw_from_wu,
    wu_classes,
)
from .modules import (
    FiniteModule,
    GradedSpace,
    IsoVerdict,
    dualize,
    fingerprint,
    is_isomorphic,
    is_self_dual,
    left_regular_module,
    self_dual_shifts,
    shift,
    validate,
)
from .newton import (
    IntegralCharData,
    newton_polynomial,
    poly_str,
    q1_divisibility,
)
from .rings import PoincareRing, inverse_total_class, validate_ring
from .spaces import cp, hp, load, loads, op2, parse_space, rp, save
from .steenrod import (
    Element,
    SubalgebraSpec,
    adem_reduce,
    antipode,
    subalgebra_basis,
    verify_presentation,
)

__version__ = "0.1.0"

__all__ = [
    "Element",
    "FiniteModule",
    "GradedSpace",
    "IntegralCharData",
    "IsoVerdict",
    "ObstructionReport",
    "PoincareRing",
    "Space",
    "SubalgebraSpec",
    "VirtualBundle",
    "WuData",
    "adem_reduce",
    "antipode",
    "cp",
    "dualize",
    "fingerprint",
    "hp",
    "inverse_total_class",
    "is_isomorphic",
    "is_self_dual",
    "left_regular_module",
    "load",
    "loads",
    "negative_tangent_bundle",
    "newton_polynomial",
    "op2",
    "parse_space",
    "poly_str",
    "q1_divisibility",
    "rp",
    "save",
    "self_dual_shifts",
    "shift",
    "structure_report",
    "subalgebra_basis",
    "sw_from_wu",
    "thom_iso_is_linear",
    "thom_module",
    "top_op_vanishing",
    "trivial_bundle",
    "validate",
    "validate_ring",
    "verify_presentation",
    "wu_classes",
]
