"""
Modulus, phase and real zeros of J_{i nu}(nu x) on 0 < x < inf.

    |J_{i nu}(nu x)| ~ (2 pi nu)^(-1/2) (x^2+1)^(-1/4)
                       exp{nu pi/2 + sum_{s>=1} Ehat_{2s}(bh) / nu^(2s)}
    arg J_{i nu}(nu x) ~ nu rho(x) - pi/4 + sum_{s>=0} Ehat_{2s+1}(bh) / nu^(2s+1)

with bh = (x^2+1)^(-1/2). The zeros of Re{e^(-i r pi) J_{i nu}(t)} are
t = nu x with x ~ sum_s q_s(p0) / nu^(2s), p0 = rho^-1((m + r - 1/4) pi / nu).
"""

import logging
from dataclasses import dataclass, field
from enum import Enum

import mpmath

from imbessel import config, oracle
from imbessel.branch_maps import phase_variables, rho_inverse_log
from imbessel.coeff_engine import ehat_eval, q_poly
from imbessel.errors import DomainError, TableRangeError
from imbessel.precision import ScaledValue, working_digits

logger = logging.getLogger(__name__)

# terms used by the accuracy diagnostics
MODULUS_TERMS = 4
PHASE_TERMS = 4


class ZeroFamily(Enum):
    J = "J"
    K = "K"
    L = "L"


class YPart(Enum):
    RE_Y = "ReY"
    IM_Y = "ImY"


@dataclass(frozen=True)
class ZeroQuery:
    nu: mpmath.mpf
    m: int
    r: mpmath.mpf = field(default_factory=lambda: mpmath.mpf(0))
    truncation: int = config.MAX_Q_ORDER

    def __post_init__(self):
        if self.nu <= 0:
            raise DomainError(f"order parameter nu must be positive, got {self.nu}")
        if not 0 <= self.r <= 0.5:
            raise DomainError(f"r must lie in [0, 1/2], got {self.r}")
        if not 0 <= self.truncation <= config.MAX_Q_ORDER:
            raise TableRangeError("q_s", self.truncation, config.MAX_Q_ORDER)


@dataclass(frozen=True)
class ZeroResult:
    t: mpmath.mpf
    # estimated |relative error|, -1 when no oracle was consulted
    estimated_relative_error: mpmath.mpf
    terms_used: int
    x: mpmath.mpf
    family: ZeroFamily = ZeroFamily.J
    signed_delta: mpmath.mpf | None = None

    @property
    def has_estimate(self) -> bool:
        return self.signed_delta is not None


def _check_terms(count: int, highest: int) -> None:
    if highest > config.MAX_E_ORDER:
        raise TableRangeError("Ehat_s", highest, config.MAX_E_ORDER)
    if count < 0:
        raise DomainError(f"number of terms must be non-negative, got {count}")


def _even_sum(nu, beta_hat, n_terms: int) -> mpmath.mpf:
    return mpmath.fsum(ehat_eval(2 * s, beta_hat) / nu ** (2 * s) for s in range(1, n_terms + 1))


def _odd_sum(nu, beta_hat, n_terms: int) -> mpmath.mpf:
    return mpmath.fsum(
        ehat_eval(2 * s + 1, beta_hat) / nu ** (2 * s + 1) for s in range(n_terms + 1)
    )


def _positive(nu, x) -> tuple[mpmath.mpf, mpmath.mpf]:
    nu, x = mpmath.mpf(nu), mpmath.mpf(x)
    if nu <= 0:
        raise DomainError(f"order parameter nu must be positive, got {nu}")
    if x <= 0:
        raise DomainError(f"x must be positive, got {x}")
    return nu, x


def j_modulus(nu, x, n_terms: int = MODULUS_TERMS) -> ScaledValue:
    """|J_{i nu}(nu x)| with Ehat_2 .. Ehat_{2 n_terms} in the exponent."""
    _check_terms(n_terms, 2 * n_terms)
    with working_digits():
        nu, x = _positive(nu, x)
        beta_hat = phase_variables(x).beta_hat
        log_value = (
            -mpmath.log(2 * mpmath.pi * nu) / 2
            - mpmath.log(x * x + 1) / 4
            + nu * mpmath.pi / 2
            + _even_sum(nu, beta_hat, n_terms)
        )
        return ScaledValue.from_log(log_value)


def j_phase(nu, x, n_terms: int = PHASE_TERMS) -> mpmath.mpf:
    """arg J_{i nu}(nu x) on the continuous branch, Ehat_1 .. Ehat_{2 n_terms + 1}."""
    _check_terms(n_terms, 2 * n_terms + 1)
    with working_digits():
        nu, x = _positive(nu, x)
        pv = phase_variables(x)
        return nu * pv.rho - mpmath.pi / 4 + _odd_sum(nu, pv.beta_hat, n_terms)


def omega1(nu, x, n_terms: int = MODULUS_TERMS, ctx: oracle.PrecisionContext | None = None):
    """log10 of the modulus error, against the oracle."""
    with working_digits():
        nu, x = _positive(nu, x)
        exact = abs(oracle.j_iv(nu, nu * x, ctx))
        beta_hat = phase_variables(x).beta_hat
        scaled = (
            mpmath.sqrt(2 * mpmath.pi * nu)
            * mpmath.exp(-nu * mpmath.pi / 2)
            * mpmath.root(x * x + 1, 4)
            * exact
        )
        return mpmath.log10(abs(scaled - mpmath.exp(_even_sum(nu, beta_hat, n_terms))))


def omega2(nu, x, n_terms: int = PHASE_TERMS, ctx: oracle.PrecisionContext | None = None):
    """log10 of the error in the unit phase factor, against the oracle."""
    with working_digits():
        nu, x = _positive(nu, x)
        exact = oracle.j_iv(nu, nu * x, ctx)
        pv = phase_variables(x)
        unit = mpmath.expj(-(nu * pv.rho - mpmath.pi / 4)) * exact / abs(exact)
        approx = mpmath.expj(_odd_sum(nu, pv.beta_hat, n_terms))
        return mpmath.log10(abs(unit - approx))


def phase_zero(nu, target, n_terms: int = PHASE_TERMS) -> mpmath.mpf:
    """
    Solve nu rho(x) + sum_s Ehat_{2s+1}/nu^(2s+1) = nu * target for x.

    This is the zero condition itself, without the re-expansion in nu^-2,
    so x - rho^-1(target) can be compared with the q_s coefficients.
    """
    with working_digits():
        nu = mpmath.mpf(nu)
        target = mpmath.mpf(target)
        seed = rho_inverse_log(target)

        def residual(y):
            return j_phase(nu, mpmath.exp(y), n_terms) + mpmath.pi / 4 - nu * target

        y = mpmath.findroot(residual, seed, solver="secant")
        return mpmath.exp(y)


def delta0(nu, t, ctx: oracle.PrecisionContext | None = None) -> mpmath.mpf:
    """Re J_{i nu}(t) / (t Re J'_{i nu}(t)), the first-order relative error at t."""
    return oracle.delta_j(nu, t, ctx)


def j_zero(query: ZeroQuery, with_error: bool = True, ctx: oracle.PrecisionContext | None = None):
    """
    The m-th zero t = nu x of Re{e^(-i r pi) J_{i nu}(t)}.

    :param with_error: evaluate delta0 at the result through the oracle
    """
    with working_digits(config.ZERO_DIGITS):
        nu = mpmath.mpf(query.nu)
        big_m = (query.m + mpmath.mpf(query.r) - mpmath.mpf(1) / 4) * mpmath.pi / nu
        # rho_inverse_log keeps p0 meaningful far into the e^M regime
        p0 = mpmath.exp(rho_inverse_log(big_m))
        x = mpmath.fsum(q_poly(s, p0) / nu ** (2 * s) for s in range(query.truncation + 1))
        t = nu * x
        logger.debug(f"J zero nu={nu} m={query.m} r={query.r}: M={big_m}, p0={p0}")
        if not with_error:
            return ZeroResult(t, mpmath.mpf(-1), query.truncation + 1, x)
        delta = delta0(nu, t, ctx)
        return ZeroResult(t, abs(delta), query.truncation + 1, x, ZeroFamily.J, delta)


def exact_relative_error(nu, t, ctx: oracle.PrecisionContext | None = None) -> mpmath.mpf:
    """The eps with Re J_{i nu}(t / (1 + eps)) = 0 nearest to delta0(t)."""
    ctx = ctx or oracle.DEFAULT_CONTEXT
    with working_digits(ctx.digits + config.ORACLE_GUARD_DIGITS):
        nu, t = mpmath.mpf(nu), mpmath.mpf(t)
        scale = abs(oracle.j_iv(nu, t, ctx))
        start = oracle.delta_j(nu, t, ctx)

        def f(eps):
            return oracle.j_iv(nu, t / (1 + eps), ctx).real / scale

        return mpmath.findroot(f, (mpmath.mpf(0), start), solver="secant")


def y_zero_map(kind: YPart) -> mpmath.mpf:
    """
    The r whose J-zeros are the zeros of Re Y (r = 1/2) or Im Y (r = 0).

    Re Y and Im J differ by the factor sinh(nu pi)/(cosh(nu pi) - 1) > 0,
    Im Y and Re J by -sinh(nu pi)/(cosh(nu pi) + 1) < 0.
    """
    match kind:
        case YPart.RE_Y:
            return mpmath.mpf(1) / 2
        case YPart.IM_Y:
            return mpmath.mpf(0)
