"""
Extended-precision reference values.

Nothing here calls the asymptotic modules. Series are the ascending series
written through 0F1 and summed with extra digits to absorb the growth of the
partial sums; K also has a quadrature form

    K_{i nu}(t) = int_0^inf exp(-t cosh s) cos(nu s) ds

which is used to cross-check the series.
"""

import logging
import math
from dataclasses import dataclass

import mpmath
from mpmath import mp

from imbessel import config
from imbessel.errors import (
    ConfigError,
    DegenerateFrameError,
    DomainError,
    PoleError,
    PrecisionBudgetError,
    QuadratureError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PrecisionContext:
    digits: int = config.ORACLE_DIGITS
    series_tail_tol: mpmath.mpf | None = None
    quadrature_tol: mpmath.mpf | None = None

    def __post_init__(self):
        if self.digits < config.ORACLE_MIN_DIGITS:
            raise ConfigError(
                f"oracle needs at least {config.ORACLE_MIN_DIGITS} digits, got {self.digits}"
            )
        ceiling = mpmath.mpf(10) ** (5 - self.digits)
        for name in ("series_tail_tol", "quadrature_tol"):
            value = getattr(self, name)
            if value is None:
                object.__setattr__(self, name, mpmath.mpf(10) ** (-self.digits))
            elif value > ceiling:
                raise ConfigError(f"{name}={value} is looser than {ceiling}")


DEFAULT_CONTEXT = PrecisionContext()


def _ctx(ctx: PrecisionContext | None) -> PrecisionContext:
    return ctx or DEFAULT_CONTEXT


def _padding(growth) -> int:
    """Extra digits for a series whose partial sums grow like exp(growth)."""
    if not mpmath.isfinite(growth):
        raise DomainError(f"series growth must be finite, got {growth}")
    needed = math.ceil(float(growth) / math.log(10)) + config.ORACLE_GUARD_DIGITS
    if needed > config.ORACLE_MAX_PADDING:
        raise PrecisionBudgetError(needed, config.ORACLE_MAX_PADDING)
    return needed


def _positive(t, what: str) -> mpmath.mpf:
    t = mpmath.mpf(t)
    if not mpmath.isfinite(t) or t <= 0:
        raise DomainError(f"{what} needs finite t > 0, got {t}")
    return t


def _order(nu) -> mpmath.mpf:
    nu = mpmath.mpf(nu)
    if nu <= 0:
        raise DomainError(f"order parameter nu must be positive, got {nu}")
    return nu


# ===== Gamma =====


def gamma_complex(w, ctx: PrecisionContext | None = None) -> mpmath.mpc:
    ctx = _ctx(ctx)
    with mp.workdps(ctx.digits + config.ORACLE_GUARD_DIGITS):
        w = mpmath.mpc(w)
        if w.imag == 0 and w.real <= 0 and w.real == mpmath.floor(w.real):
            raise PoleError(w)
        if w.real < 0.5:
            return mpmath.pi / (mpmath.sinpi(w) * mpmath.gamma(1 - w))
        return mpmath.mpc(mpmath.gamma(w))


# ===== Ascending series =====


def _series(mu, z, modified: bool, ctx: PrecisionContext):
    # (z/2)^mu / Gamma(mu+1) * 0F1(; mu+1; -+z^2/4)
    mu = mpmath.mpc(mu)
    z = mpmath.mpc(z)
    pad = _padding(abs(z) + abs(mu.imag) * mpmath.pi / 2)
    with mp.workdps(ctx.digits + pad):
        w = z * z / 4
        if not modified:
            w = -w
        lead = mpmath.power(z / 2, mu) / gamma_complex(mu + 1, PrecisionContext(mp.dps))
        value = lead * mpmath.hyp0f1(mu + 1, w)
    logger.debug(f"series order {mu} at {z}: {pad} padding digits")
    return value


def j_iv(nu, t, ctx: PrecisionContext | None = None) -> mpmath.mpc:
    """J_{i nu}(t) for real t > 0."""
    ctx = _ctx(ctx)
    with mp.workdps(ctx.digits):
        return _series(mpmath.mpc(0, nu), _positive(t, "j_iv"), False, ctx)


def i_iv(nu, z, sign: int = 1, ctx: PrecisionContext | None = None) -> mpmath.mpc:
    """I_{+i nu}(z) (sign=1) or I_{-i nu}(z) (sign=-1), principal branch."""
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign}")
    ctx = _ctx(ctx)
    with mp.workdps(ctx.digits):
        z = mpmath.mpc(z)
        if z == 0:
            raise DomainError("I_{i nu} is singular at z = 0")
        return _series(mpmath.mpc(0, sign * mpmath.mpf(nu)), z, True, ctx)


def i_iv_prime(nu, z, sign: int = 1, ctx: PrecisionContext | None = None) -> mpmath.mpc:
    """d/dz I_{+-i nu}(z), from I'_mu = I_{mu+1} + (mu/z) I_mu."""
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign}")
    ctx = _ctx(ctx)
    with mp.workdps(ctx.digits):
        z = mpmath.mpc(z)
        if z == 0:
            raise DomainError("I_{i nu} is singular at z = 0")
        mu = mpmath.mpc(0, sign * mpmath.mpf(nu))
        return _series(mu + 1, z, True, ctx) + mu / z * _series(mu, z, True, ctx)


def _k_from_i(mu, t, ctx: PrecisionContext):
    # K_mu = pi (I_-mu - I_mu) / (2 sin(mu pi)); I_+- cancel down to e^-t
    pad = _padding(2 * abs(t))
    inner = PrecisionContext(ctx.digits + pad)
    with mp.workdps(inner.digits):
        plus = _series(mu, t, True, inner)
        minus = _series(-mu, t, True, inner)
        return mpmath.pi * (minus - plus) / (2 * mpmath.sinpi(mu))


def _quad_k(integrand, nu, t, ctx: PrecisionContext):
    # the integral is e^(-nu pi/2) times the size of the integrand
    pad = _padding(nu * mpmath.pi / 2)
    with mp.workdps(ctx.digits + pad):
        cutoff = (ctx.digits + config.QUAD_TAIL_DIGITS) * mpmath.ln10
        end = mpmath.acosh(max(cutoff / t, 1)) + 1
        if nu > 0:
            step = mpmath.pi / nu
            count = int(mpmath.ceil(end / step))
            points = [k * step for k in range(count + 1)]
        else:
            points = [0, end]
        value, error = mpmath.quad(integrand, points, error=True)
        scale = max(abs(value), mpmath.exp(-max(t, nu * mpmath.pi / 2)))
        logger.debug(f"quadrature on {len(points) - 1} panels: error {error}")
        if error > ctx.quadrature_tol * scale:
            raise QuadratureError(error, ctx.quadrature_tol * scale)
        return value


def k_iv(nu, t, ctx: PrecisionContext | None = None, method: str = "series") -> mpmath.mpf:
    """
    K_{i nu}(t) for real t > 0.

    :param method: "series" (connection formula on the I series) or "quad"
    """
    ctx = _ctx(ctx)
    with mp.workdps(ctx.digits):
        t = _positive(t, "k_iv")
        match method:
            case "series":
                nu = _order(nu)
                return _k_from_i(mpmath.mpc(0, nu), t, ctx).real
            case "quad":
                nu = mpmath.mpf(nu)
                return _quad_k(
                    lambda s: mpmath.exp(-t * mpmath.cosh(s)) * mpmath.cos(nu * s), nu, t, ctx
                )
            case _:
                raise ConfigError(f"unknown oracle method {method!r}")


def k_iv_complex(nu, z, ctx: PrecisionContext | None = None) -> mpmath.mpc:
    """K_{i nu}(z) for complex z off the negative real axis, from the I series."""
    ctx = _ctx(ctx)
    with mp.workdps(ctx.digits):
        nu = _order(nu)
        z = mpmath.mpc(z)
        if z == 0 or (z.imag == 0 and z.real < 0):
            raise DomainError(f"k_iv_complex needs z off (-inf, 0], got {z}")
        return _k_from_i(mpmath.mpc(0, nu), z, ctx)


def k_1piv_re(nu, t, ctx: PrecisionContext | None = None, method: str = "series") -> mpmath.mpf:
    """Re K_{1+i nu}(t), the K-zero estimator denominator."""
    ctx = _ctx(ctx)
    with mp.workdps(ctx.digits):
        t = _positive(t, "k_1piv_re")
        match method:
            case "series":
                nu = _order(nu)
                return _k_from_i(mpmath.mpc(1, nu), t, ctx).real
            case "quad":
                nu = mpmath.mpf(nu)
                return _quad_k(
                    lambda s: mpmath.exp(-t * mpmath.cosh(s))
                    * mpmath.cosh(s)
                    * mpmath.cos(nu * s),
                    nu,
                    t,
                    ctx,
                )
            case _:
                raise ConfigError(f"unknown oracle method {method!r}")


def l_iv(nu, t, ctx: PrecisionContext | None = None) -> mpmath.mpf:
    """L_{i nu}(t) = pi (I_{i nu} + I_{-i nu}) / (2 sinh(nu pi)), real for t > 0."""
    ctx = _ctx(ctx)
    with mp.workdps(ctx.digits):
        nu = _order(nu)
        t = _positive(t, "l_iv")
        plus = i_iv(nu, t, 1, ctx)
        minus = i_iv(nu, t, -1, ctx)
        return (mpmath.pi * (plus + minus) / (2 * mpmath.sinh(nu * mpmath.pi))).real


def l_iv_prime(nu, t, ctx: PrecisionContext | None = None) -> mpmath.mpf:
    """d/dt L_{i nu}(t)."""
    ctx = _ctx(ctx)
    with mp.workdps(ctx.digits):
        nu = _order(nu)
        t = _positive(t, "l_iv_prime")
        total = i_iv_prime(nu, t, 1, ctx) + i_iv_prime(nu, t, -1, ctx)
        return (mpmath.pi * total / (2 * mpmath.sinh(nu * mpmath.pi))).real


def y_iv(nu, t, ctx: PrecisionContext | None = None) -> mpmath.mpc:
    """Y_{i nu}(t) = (J_mu cos(mu pi) - J_{-mu}) / sin(mu pi), mu = i nu."""
    ctx = _ctx(ctx)
    with mp.workdps(ctx.digits):
        nu = _order(nu)
        t = _positive(t, "y_iv")
        mu = mpmath.mpc(0, nu)
        plus = _series(mu, t, False, ctx)
        minus = _series(-mu, t, False, ctx)
        return (plus * mpmath.cospi(mu) - minus) / mpmath.sinpi(mu)


# ===== Zero estimators =====


def _check_derivative(derivative, t) -> None:
    if abs(derivative) < config.ORACLE_MIN_DERIVATIVE:
        raise DegenerateFrameError(f"derivative {derivative} at t={t} is too small to divide by")


def delta_j(nu, t, ctx: PrecisionContext | None = None) -> mpmath.mpf:
    """Re J_{i nu}(t) / (t d/dt Re J_{i nu}(t))."""
    ctx = _ctx(ctx)
    with mp.workdps(ctx.digits):
        nu = _order(nu)
        t = _positive(t, "delta_j")
        mu = mpmath.mpc(0, nu)
        j = _series(mu, t, False, ctx)
        j_next = _series(mu + 1, t, False, ctx)
        # J'_mu = -J_{mu+1} + (mu/t) J_mu
        derivative = -j_next.real - nu / t * j.imag
        _check_derivative(derivative, t)
        return j.real / (t * derivative)


def delta_k(nu, t, ctx: PrecisionContext | None = None, method: str = "series") -> mpmath.mpf:
    """K_{i nu}(t) / (t K'_{i nu}(t)), with K' = -Re K_{1+i nu}."""
    ctx = _ctx(ctx)
    with mp.workdps(ctx.digits):
        k = k_iv(nu, t, ctx, method)
        derivative = -k_1piv_re(nu, t, ctx, method)
        _check_derivative(derivative, t)
        return k / (mpmath.mpf(t) * derivative)


def delta_l(nu, t, ctx: PrecisionContext | None = None) -> mpmath.mpf:
    ctx = _ctx(ctx)
    with mp.workdps(ctx.digits):
        derivative = l_iv_prime(nu, t, ctx)
        _check_derivative(derivative, t)
        return l_iv(nu, t, ctx) / (mpmath.mpf(t) * derivative)
