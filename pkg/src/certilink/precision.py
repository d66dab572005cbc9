"""Floating-point model constants shared by the error accounting.

All error bounds in this package are expressed as multiples of the unit
roundoff ``u`` of the arithmetic that produced the value.  Two models are
supported: IEEE double (u = 2**-53, the default working precision) and IEEE
single (u = 2**-24, used to make certification loss reachable at desk scale).

The per-operation constants below are worst-case bounds for the individual
steps of the angle pipeline.  Each decimal constant is nudged one ulp upward
when stored, so that the *stored* double is never below the published decimal
value and bounds are never under-reported through their own rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def _up(decimal_value: float) -> float:
    """Round a bound constant upward by one ulp."""
    return math.nextafter(decimal_value, math.inf)


# Error of one triple addition (x'' = xx'-yy', y'' = xy'+yx'), in units of u.
ADD_ERR_U = _up(2.829)

# Error of one normalized 3-vector component, in units of u.
NORMALIZED_COMPONENT_ERR_U = _up(3.415)

# Error of a dot product of two normalized 3-vectors, in units of u.
UNIT_DOT_ERR_U = _up(13.838)

# Error of 1 + d1 + d2 + d3 built from three such dot products, in units of u.
ONE_PLUS_DOTS_ERR_U = _up(57.515)

# Error of a scalar triple product of normalized 3-vectors, in units of u.
UNIT_TRIPLE_PRODUCT_ERR_U = _up(23.26)

# Coefficient of the 1/R and 1/R' terms in the a-posteriori pair bound.
POSTERIORI_COEF_U = _up(57.516)

# A-priori pair bound when both segments are shorter than every
# endpoint-to-endpoint distance, in units of u.
APRIORI_ERR_U = _up(117.861)

# Pair bound plus one accumulation step; NM * this bounds the whole sum when
# every pair is a-priori admissible.
PAIR_TOTAL_ERR_U = _up(120.690)


@dataclass(frozen=True)
class FloatModel:
    """Unit roundoff and derived certification threshold for one precision."""

    name: str
    u: float
    max_int_budget: int  # floor(pi / (2u)); certification fails at or above it

    @property
    def half_pi_in_u(self) -> float:
        return math.pi / (2.0 * self.u)


def _model(name: str, u: float) -> FloatModel:
    return FloatModel(name=name, u=u, max_int_budget=int(math.pi / (2.0 * u)))


DOUBLE = _model("double", 2.0 ** -53)
SINGLE = _model("single", 2.0 ** -24)

_MODELS = {"double": DOUBLE, "single": SINGLE}


def get_model(precision: str | FloatModel) -> FloatModel:
    """Resolve ``"double"`` / ``"single"`` (or a model instance) to a model."""
    if isinstance(precision, FloatModel):
        return precision
    try:
        return _MODELS[precision]
    except KeyError:
        raise ValueError(f"unknown precision {precision!r}; expected 'double' or 'single'") from None
