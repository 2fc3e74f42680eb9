"""
Liouville-Green expansions of K_{i nu}(nu z) and I_{+-i nu}(nu z).

All three are returned in scaled form; the correction sum over E_s(beta)
sits in the exponent next to -+nu xi. The error factors and the constant
normalisations at infinity are taken as 1, so every result carries an
O(nu^-n) relative error.

Points with Im z < 0 are handled through the reflection relations

    K(conj z) = conj K(z),    I_{+-i nu}(nu conj z) = conj I_{-+i nu}(nu z)
"""

import logging
from enum import Enum

import mpmath

from imbessel import config
from imbessel.branch_maps import TurningPointFrame, map_point
from imbessel.coeff_engine import coefficient_table
from imbessel.errors import DomainError, RegionError, TableRangeError
from imbessel.precision import ScaledValue, working_digits

logger = logging.getLogger(__name__)


class OrderSign(Enum):
    PLUS = 1
    MINUS = -1

    @property
    def flipped(self) -> "OrderSign":
        return OrderSign.MINUS if self is OrderSign.PLUS else OrderSign.PLUS


def _terms(n: int | None) -> int:
    if n is None:
        n = config.LG_DEFAULT_TERMS
    limit = coefficient_table().max_order + 1
    if not 2 <= n <= limit:
        raise TableRangeError("LG terms", n, limit)
    return n


def _frame(z, exclusion_radius) -> TurningPointFrame:
    if exclusion_radius is None:
        exclusion_radius = config.LG_EXCLUSION_RADIUS
    z = mpmath.mpc(z)
    if z == 0 or z.real < 0:
        raise DomainError(f"LG expansions need Re z >= 0 and z != 0, got {z}")
    if abs(z - 1) < exclusion_radius:
        raise RegionError(z, exclusion_radius)
    # the LG region never touches the Taylor disc
    return map_point(z, taylor_radius=0)


def _exponent_sum(nu, beta, n: int, alternating: bool) -> mpmath.mpc:
    table = coefficient_table()
    total = mpmath.mpc(0)
    for s in range(1, n):
        term = table.e_poly(s)(beta) / nu**s
        total += -term if alternating and s % 2 else term
    return total


def _log_k(nu, frame: TurningPointFrame, n: int) -> mpmath.mpc:
    # (z^2-1)^(-1/4) = beta^(1/2) on the branch continuous from z > 1
    pi = mpmath.pi
    return (
        mpmath.log(pi / (2 * nu)) / 2
        + mpmath.log(frame.beta) / 2
        - nu * frame.xi
        - nu * pi / 2
        + _exponent_sum(nu, frame.beta, n, alternating=True)
    )


def _log_i(nu, frame: TurningPointFrame, n: int, sign: OrderSign) -> mpmath.mpc:
    pi = mpmath.pi
    base = -mpmath.log(2 * pi * nu) / 2 + mpmath.log(frame.beta) / 2 + nu * pi / 2
    if sign is OrderSign.PLUS:
        return base + nu * frame.xi + _exponent_sum(nu, frame.beta, n, alternating=False)
    return (
        base
        + mpmath.mpc(0, pi / 2)
        - nu * frame.xi
        + _exponent_sum(nu, frame.beta, n, alternating=True)
    )


def lg_K(nu, z, n: int | None = None, exclusion_radius=None) -> ScaledValue:
    """
    LG approximation of K_{i nu}(nu z) with n-1 correction terms.

    On the real segment 0 < z < 1 the value comes from the connection
    formula K = pi i (I_{i nu} - I_{-i nu}) / (2 sinh(nu pi)).
    """
    n = _terms(n)
    with working_digits():
        nu = mpmath.mpf(nu)
        if nu <= 0:
            raise DomainError(f"order parameter nu must be positive, got {nu}")
        z = mpmath.mpc(z)
        if z.imag < 0:
            return lg_K(nu, mpmath.conj(z), n, exclusion_radius).conjugate()
        frame = _frame(z, exclusion_radius)
        if frame.on_cut:
            logger.debug(f"lg_K at x={z.real}: connection formula on the cut")
            plus = mpmath.exp(_log_i(nu, frame, n, OrderSign.PLUS))
            minus = mpmath.exp(_log_i(nu, frame, n, OrderSign.MINUS))
            value = mpmath.pi * 1j * (plus - minus) / (2 * mpmath.sinh(nu * mpmath.pi))
            return ScaledValue.from_value(mpmath.mpc(value.real))
        return ScaledValue.from_log(_log_k(nu, frame, n))


def lg_I(
    nu,
    z,
    n: int | None = None,
    order_sign: OrderSign = OrderSign.PLUS,
    exclusion_radius=None,
) -> ScaledValue:
    """LG approximation of I_{i nu}(nu z) (PLUS) or I_{-i nu}(nu z) (MINUS)."""
    n = _terms(n)
    with working_digits():
        nu = mpmath.mpf(nu)
        if nu <= 0:
            raise DomainError(f"order parameter nu must be positive, got {nu}")
        z = mpmath.mpc(z)
        if z.imag < 0:
            reflected = lg_I(nu, mpmath.conj(z), n, order_sign.flipped, exclusion_radius)
            return reflected.conjugate()
        frame = _frame(z, exclusion_radius)
        return ScaledValue.from_log(_log_i(nu, frame, n, order_sign))
