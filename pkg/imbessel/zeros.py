"""
Positive zeros of K_{i nu}(t) and of its companion L_{i nu}(t).

    k_{nu,m} ~ nu sum_s kappa^_s(kappa_0) / nu^(2s)

where kappa_0 in (0, 1) solves

    ln{(1 + (1-k^2)^(1/2)) / k} - (1-k^2)^(1/2) = (2 / 3 nu) |a_m|^(3/2)

with a_m the m-th negative zero of Ai. The L-zeros use the same kappa^_s
with b_m, the zeros of Bi, in place of a_m. Both sequences decrease in m,
and l_{nu,1} > k_{nu,1} > l_{nu,2} > k_{nu,2} > ...
"""

import logging
from dataclasses import dataclass, field

import mpmath
from sortedcontainers import SortedDict

from imbessel import config, oracle
from imbessel.airy_core import AiryKind, airy_neg_zero
from imbessel.coeff_engine import KappaTable, kappa_hat
from imbessel.errors import DomainError, TableRangeError
from imbessel.oscillatory_j import ZeroFamily, ZeroResult
from imbessel.precision import working_digits

logger = logging.getLogger(__name__)

_AIRY_KIND = {ZeroFamily.K: AiryKind.AI, ZeroFamily.L: AiryKind.BI}


@dataclass(frozen=True)
class KZeroQuery:
    nu: mpmath.mpf
    m: int
    family: ZeroFamily = ZeroFamily.K
    # None means every order the table holds
    truncation: int | None = None
    table: KappaTable = field(default_factory=KappaTable.builtin, compare=False)

    def __post_init__(self):
        if self.nu <= 0:
            raise DomainError(f"order parameter nu must be positive, got {self.nu}")
        if self.m < 1:
            raise DomainError(f"zero index must be >= 1, got {self.m}")
        if self.family not in _AIRY_KIND:
            raise DomainError(f"{self.family} zeros are not K- or L-zeros")
        if self.truncation is None:
            object.__setattr__(self, "truncation", self.table.max_order)
        if not 0 <= self.truncation <= self.table.max_order:
            raise TableRangeError("kappa^_s", self.truncation, self.table.max_order)


def kappa_rhs(nu, m: int, family: ZeroFamily = ZeroFamily.K) -> mpmath.mpf:
    """(2 / 3 nu) |alpha_m|^(3/2) for the Airy zero alpha_m of the family."""
    with working_digits(config.ZERO_DIGITS):
        alpha = airy_neg_zero(_AIRY_KIND[family], m)
        return 2 * mpmath.power(-alpha, mpmath.mpf(3) / 2) / (3 * mpmath.mpf(nu))


def kappa_lhs(kappa) -> mpmath.mpf:
    with working_digits(config.ZERO_DIGITS):
        kappa = mpmath.mpf(kappa)
        u = mpmath.sqrt(1 - kappa * kappa)
        return mpmath.log((1 + u) / kappa) - u


def _solve_small(rhs: mpmath.mpf, tol: mpmath.mpf) -> mpmath.mpf:
    # Newton in y = ln(kappa) on ln(1+u) - y - u - R, which is convex and
    # decreasing (dF/dy = -u), started left of the root at the 2/(eU) seed
    y = mpmath.log(2) - 1 - rhs
    for step in range(config.RHO_INVERSE_MAXSTEPS):
        kappa = mpmath.exp(y)
        u = mpmath.sqrt((1 - kappa) * (1 + kappa))
        delta = (mpmath.log(1 + u) - y - u - rhs) / u
        y += delta
        if abs(delta) < tol:
            logger.debug(f"kappa0 (small) converged after {step + 1} steps")
            return mpmath.exp(y)
    raise ArithmeticError(f"kappa0 did not converge for R={rhs}")


def _solve_near_one(rhs: mpmath.mpf, tol: mpmath.mpf) -> mpmath.mpf:
    # Newton in u = sqrt(1-kappa^2) on atanh(u) - u - R, convex and increasing;
    # both candidate seeds lie right of the root
    u = min(mpmath.cbrt(3 * rhs), mpmath.tanh(rhs + 1))
    for step in range(config.RHO_INVERSE_MAXSTEPS):
        delta = (mpmath.atanh(u) - u - rhs) * (1 - u * u) / (u * u)
        u -= delta
        if abs(delta) < tol * u:
            logger.debug(f"kappa0 (near 1) converged after {step + 1} steps")
            return mpmath.sqrt((1 - u) * (1 + u))
    raise ArithmeticError(f"kappa0 did not converge for R={rhs}")


def kappa0(nu, m: int, family: ZeroFamily = ZeroFamily.K) -> mpmath.mpf:
    """The leading coefficient kappa_{m,0} (family K) or rho_{m,0} (family L)."""
    if mpmath.mpf(nu) <= 0:
        raise DomainError(f"order parameter nu must be positive, got {nu}")
    with working_digits(config.ZERO_DIGITS) as digits:
        rhs = kappa_rhs(nu, m, family)
        tol = mpmath.mpf(10) ** (5 - digits)
        if rhs > config.KAPPA_SEED_SWITCH:
            return _solve_small(rhs, tol)
        return _solve_near_one(rhs, tol)


def k_zero(
    query: KZeroQuery, with_error: bool = True, ctx: oracle.PrecisionContext | None = None
) -> ZeroResult:
    """
    The m-th positive zero of K_{i nu}(t) (or L_{i nu}(t) for family L).

    :param with_error: evaluate delta_K (delta_L) at the result through the oracle
    """
    with working_digits(config.ZERO_DIGITS):
        nu = mpmath.mpf(query.nu)
        k0 = kappa0(nu, query.m, query.family)
        x = mpmath.fsum(
            kappa_hat(s, k0, query.table) / nu ** (2 * s)
            for s in range(query.truncation + 1)
        )
        t = nu * x
        logger.debug(f"{query.family.value} zero nu={nu} m={query.m}: kappa0={k0}, x={x}")
        if not with_error:
            return ZeroResult(t, mpmath.mpf(-1), query.truncation + 1, x, query.family)
        estimator = delta_K if query.family is ZeroFamily.K else delta_L
        delta = estimator(nu, t, ctx)
        return ZeroResult(t, abs(delta), query.truncation + 1, x, query.family, delta)


def l_zero(
    nu, m: int, s_max: int | None = None, table: KappaTable | None = None
) -> ZeroResult:
    """The m-th positive zero of L_{i nu}(t), without an oracle estimate."""
    query = KZeroQuery(nu, m, ZeroFamily.L, s_max, table or KappaTable.builtin())
    return k_zero(query, with_error=False)


def delta_K(nu, t, ctx: oracle.PrecisionContext | None = None) -> mpmath.mpf:
    """-K_{i nu}(t) / (t Re K_{1+i nu}(t))."""
    return oracle.delta_k(nu, t, ctx)


def delta_L(nu, t, ctx: oracle.PrecisionContext | None = None) -> mpmath.mpf:
    return oracle.delta_l(nu, t, ctx)


def exact_relative_error_K(nu, t, ctx: oracle.PrecisionContext | None = None) -> mpmath.mpf:
    """The eps with K_{i nu}(t / (1 + eps)) = 0 nearest to delta_K(t)."""
    ctx = ctx or oracle.DEFAULT_CONTEXT
    with working_digits(ctx.digits + config.ORACLE_GUARD_DIGITS):
        nu, t = mpmath.mpf(nu), mpmath.mpf(t)
        scale = mpmath.exp(-nu * mpmath.pi / 2)
        start = oracle.delta_k(nu, t, ctx)

        def f(eps):
            return oracle.k_iv(nu, t / (1 + eps), ctx) / scale

        return mpmath.findroot(f, (mpmath.mpf(0), start), solver="secant")


def figure_data(
    nu,
    m_range: range,
    family: ZeroFamily = ZeroFamily.K,
    s_max: int | None = None,
    table: KappaTable | None = None,
    ctx: oracle.PrecisionContext | None = None,
) -> SortedDict:
    """m -> log10|Delta| at the truncated zero expansion, for every m in m_range."""
    table = table or KappaTable.builtin()
    data = SortedDict()
    for m in m_range:
        result = k_zero(KZeroQuery(nu, m, family, s_max, table), ctx=ctx)
        data[m] = mpmath.log10(result.estimated_relative_error)
        if m % 10 == 0:
            logger.info(f"{family.value} zeros nu={nu}: m={m} log10|delta|={data[m]}")
    return data
