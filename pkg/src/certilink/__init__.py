"""certilink: linking numbers and writhe with certified error bounds.

Angles are carried as [x, y, sigma] triples (a plane direction plus a full
turn counter), so the linking number of two closed polygonal curves is
computed without a single trigonometric call while an explicit upper bound
on the accumulated rounding error is tracked alongside.  A result is
*certified* when that bound stays below a quarter turn, which pins the
integer exactly.
"""

from .chains import Chain, ZeroChain, boundary, chain_from_curve, chain_linking, is_closed
from .errors import (
    CertilinkError,
    CurveTooSmall,
    DegenerateDirection,
    DegenerateSegments,
    ExponentRange,
    IntersectionDetected,
    NonGenericDirection,
    NotClosed,
)
from .linking import (
    Accumulator,
    CertifiedValue,
    ErrorBudget,
    PolygonalCurve,
    linking_number,
    writhe,
)
from .precision import DOUBLE, SINGLE, FloatModel, get_model
from .segment import SegmentPairAngle, a_priori_ok, build_angle
from .triple import (
    IDENTITY,
    AngleTriple,
    add,
    angle_of,
    cross_detect,
    negate,
    normalize,
    point_sign,
    scalar_mul,
    sub,
)

__version__ = "0.1.0"

__all__ = [
    "Accumulator",
    "AngleTriple",
    "CertifiedValue",
    "CertilinkError",
    "Chain",
    "CurveTooSmall",
    "DOUBLE",
    "DegenerateDirection",
    "DegenerateSegments",
    "ErrorBudget",
    "ExponentRange",
    "FloatModel",
    "IDENTITY",
    "IntersectionDetected",
    "NonGenericDirection",
    "NotClosed",
    "PolygonalCurve",
    "SINGLE",
    "SegmentPairAngle",
    "ZeroChain",
    "a_priori_ok",
    "add",
    "angle_of",
    "boundary",
    "build_angle",
    "chain_from_curve",
    "chain_linking",
    "cross_detect",
    "get_model",
    "is_closed",
    "linking_number",
    "negate",
    "normalize",
    "point_sign",
    "scalar_mul",
    "sub",
    "writhe",
]
