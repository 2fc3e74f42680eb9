"""
Liouville variables for the imaginary-order Bessel equation.

For z in the closed right half-plane:

    xi    = (z^2 - 1)^(1/2) - arcsec(z)        (xi = (2/3) zeta^(3/2))
    beta  = (z^2 - 1)^(-1/2)
    sigma = zeta^(1/2) beta                    (analytic at z = 1)

The cut of xi runs along (0, 1]; real points 0 < x < 1 are taken on the
upper side, where zeta < 0 and sigma > 0.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from imbessel import config
from imbessel.errors import DegenerateFrameError, DomainError
from imbessel.polynomial import (
    series_derivative,
    series_eval,
    series_mul,
    series_pow,
)
from imbessel.precision import working_digits

logger = logging.getLogger(__name__)

# rho(x) = 0 at this x
RHO_ZERO = "0.6627434193"


@dataclass(frozen=True)
class TurningPointFrame:
    z: mpmath.mpc
    xi: mpmath.mpc
    zeta: mpmath.mpc
    beta: mpmath.mpc
    sigma: mpmath.mpc
    near_turning: bool
    # continuous argument of xi: 0 on (1, inf), 3pi/2 on the upper side of (0, 1)
    xi_arg: mpmath.mpf
    zeta_sqrt: mpmath.mpc
    on_cut: bool = False

    @property
    def is_real(self) -> bool:
        return self.z.imag == 0

    @property
    def zeta_arg(self) -> mpmath.mpf:
        return 2 * self.xi_arg / 3

    def zeta_quarter(self) -> mpmath.mpc:
        """zeta^(1/4) on the branch continuous from zeta > 0."""
        return mpmath.root(abs(self.zeta), 4) * mpmath.expj(self.zeta_arg / 4)

    def sigma_sqrt(self) -> mpmath.mpc:
        return mpmath.sqrt(self.sigma)


@dataclass(frozen=True)
class PhaseVariables:
    rho: mpmath.mpf
    beta_hat: mpmath.mpf
    tau: mpmath.mpf | None = None


def _as_point(z) -> mpmath.mpc:
    z = mpmath.mpc(z)
    if z == 0:
        raise DomainError("z = 0 is a singular point")
    if z.real < 0:
        raise DomainError(f"z = {z} lies left of the imaginary axis")
    return z


# ===== Taylor series about the turning point =====


@dataclass(frozen=True)
class TurningSeries:
    """Rational series in eps = z - 1 for the analytic pieces at z = 1.

    zeta  = c eps phi(eps),   sigma = psi(eps) / c,   c = 2^(1/3)
    """

    phi: tuple[Fraction, ...]
    psi: tuple[Fraction, ...]

    @property
    def length(self) -> int:
        return len(self.phi)


@lru_cache(maxsize=8)
def turning_series(n: int) -> TurningSeries:
    # sqrt(t^2 - 1)/t = sqrt(2 eps) h(eps),  h = sqrt(1 + eps/2)/(1 + eps)
    half = series_pow([Fraction(1), Fraction(1, 2)], Fraction(1, 2), n)
    inv = [Fraction((-1) ** k) for k in range(n)]
    h = series_mul(half, inv, n)
    # 3/2 * integral / (sqrt(2) eps^(3/2)), a unit series
    lead = [Fraction(3, 2) * h[k] * Fraction(2, 2 * k + 3) for k in range(n)]
    phi = series_pow(lead, Fraction(2, 3), n)
    inv_half = series_pow([Fraction(1), Fraction(1, 2)], -1, n)
    psi = series_pow(series_mul(phi, inv_half, n), Fraction(1, 2), n)
    logger.debug(f"Built turning-point series with {n} terms")
    return TurningSeries(tuple(phi), tuple(psi))


def _cbrt2() -> mpmath.mpf:
    return mpmath.cbrt(2)


def _taylor_frame(z: mpmath.mpc) -> TurningPointFrame:
    eps = z - 1
    ts = turning_series(config.TAYLOR_TERMS)
    c = _cbrt2()
    zeta = mpmath.mpc(c * eps * series_eval(ts.phi, eps))
    sigma = mpmath.mpc(series_eval(ts.psi, eps) / c)
    if zeta == 0:
        xi = mpmath.mpc(0)
        arg = mpmath.mpf(0)
        zeta_sqrt = mpmath.mpc(0)
        beta = mpmath.mpc(mpmath.inf)
    else:
        arg = 3 * mpmath.arg(zeta) / 2
        zeta_sqrt = mpmath.sqrt(zeta)
        xi = mpmath.mpf(2) / 3 * mpmath.exp(mpmath.mpf(3) / 2 * mpmath.log(zeta))
        beta = sigma / zeta_sqrt
    return TurningPointFrame(
        z=z,
        xi=xi,
        zeta=zeta,
        beta=beta,
        sigma=sigma,
        near_turning=True,
        xi_arg=arg,
        zeta_sqrt=zeta_sqrt,
        on_cut=z.imag == 0 and z.real <= 1,
    )


def _cut_frame(x: mpmath.mpf) -> TurningPointFrame:
    """Upper side of the cut, 0 < x < 1."""
    u = mpmath.sqrt((1 - x) * (1 + x))
    # atanh(u) = log((1 + u) / x) stays finite when u rounds to 1
    big_x = mpmath.log((1 + u) / x) - u
    root = mpmath.cbrt(mpmath.mpf(3) * big_x / 2)
    return TurningPointFrame(
        z=mpmath.mpc(x),
        xi=mpmath.mpc(0, -big_x),
        zeta=mpmath.mpc(-root * root),
        beta=mpmath.mpc(0, -1 / u),
        sigma=mpmath.mpc(root / u),
        near_turning=False,
        xi_arg=3 * mpmath.pi / 2,
        zeta_sqrt=mpmath.mpc(0, root),
        on_cut=True,
    )


def _closed_frame(z: mpmath.mpc) -> TurningPointFrame:
    w = mpmath.sqrt(z - 1) * mpmath.sqrt(z + 1)
    xi = w - mpmath.acos(1 / z)
    theta = mpmath.arg(xi)
    # keep arg(xi) continuous across the ray through z in (0, 1)
    if z.imag > 0 and theta < -mpmath.pi / 4:
        theta += 2 * mpmath.pi
    elif z.imag < 0 and theta > mpmath.pi / 4:
        theta -= 2 * mpmath.pi
    mod = mpmath.cbrt(mpmath.mpf(3) * abs(xi) / 2)
    zeta_sqrt = mod * mpmath.expj(theta / 3)
    beta = 1 / w
    return TurningPointFrame(
        z=z,
        xi=xi,
        zeta=zeta_sqrt * zeta_sqrt,
        beta=beta,
        sigma=zeta_sqrt * beta,
        near_turning=False,
        xi_arg=theta,
        zeta_sqrt=zeta_sqrt,
    )


def map_point(z, taylor_radius=None) -> TurningPointFrame:
    """
    Compute xi, zeta, beta and sigma at z.

    :param z: point with Re z >= 0, z != 0
    :param taylor_radius: below this distance from 1 the Taylor series are
        used (default config.TAYLOR_RADIUS)
    """
    if taylor_radius is None:
        taylor_radius = config.TAYLOR_RADIUS
    with working_digits():
        z = _as_point(z)
        if abs(z - 1) < taylor_radius:
            return _taylor_frame(z)
        if z.imag == 0 and z.real < 1:
            return _cut_frame(z.real)
        return _closed_frame(z)


def frame_derivatives(frame: TurningPointFrame) -> tuple[mpmath.mpc, mpmath.mpc]:
    """Return (zeta', sigma') at frame.z."""
    with working_digits():
        if frame.near_turning:
            eps = frame.z - 1
            ts = turning_series(config.TAYLOR_TERMS)
            c = _cbrt2()
            phi = series_eval(ts.phi, eps)
            dphi = series_eval(series_derivative(ts.phi), eps)
            dpsi = series_eval(series_derivative(ts.psi), eps)
            return mpmath.mpc(c * (phi + eps * dphi)), mpmath.mpc(dpsi / c)
        z, sigma, zeta = frame.z, frame.sigma, frame.zeta
        if sigma == 0:
            raise DegenerateFrameError(f"sigma vanishes at z={z}")
        zeta_prime = 1 / (z * sigma)
        sigma_prime = (1 - 2 * z * z * sigma**3) / (2 * z * zeta)
        return zeta_prime, sigma_prime


# ===== Variables on the imaginary axis and the cut =====


def _positive(x, what: str) -> mpmath.mpf:
    x = mpmath.mpf(x)
    if x <= 0:
        raise DomainError(f"{what} needs x > 0, got {x}")
    return x


def rho(x) -> mpmath.mpf:
    with working_digits():
        x = _positive(x, "rho")
        r = mpmath.sqrt(x * x + 1)
        return r - mpmath.log((1 + r) / x)


def _rho_of_log(y: mpmath.mpf) -> mpmath.mpf:
    x = mpmath.exp(y)
    r = mpmath.sqrt(x * x + 1)
    return r - mpmath.log(1 + r) + y


def _rho_seed(m: mpmath.mpf) -> mpmath.mpf:
    if m >= 2:
        return mpmath.log(m + 1 / (2 * m) - mpmath.mpf(7) / (24 * m**3))
    if m <= -2:
        if m < -40:
            return m - 1 + mpmath.ln2
        return mpmath.log(2 * mpmath.exp(m - 1) - 2 * mpmath.exp(3 * m - 3))
    return mpmath.log(mpmath.mpf(RHO_ZERO)) + m / mpmath.mpf(1.2)


def rho_inverse_log(m) -> mpmath.mpf:
    """ln x for the x with rho(x) = m; stays finite for very negative m."""
    with working_digits():
        m = mpmath.mpf(m)
        seed = _rho_seed(m)
        # rho(e^y) is convex increasing in y, so Newton cannot overshoot twice
        y = mpmath.findroot(
            lambda y: _rho_of_log(y) - m,
            seed,
            solver="newton",
            df=lambda y: mpmath.sqrt(mpmath.exp(2 * y) + 1),
            maxsteps=config.RHO_INVERSE_MAXSTEPS,
        )
        logger.debug(f"rho_inverse({m}): seed {seed}, root {y}")
        return y


def rho_inverse(m) -> mpmath.mpf:
    with working_digits():
        return mpmath.exp(rho_inverse_log(m))


def tau(x) -> mpmath.mpf:
    with working_digits():
        x = mpmath.mpf(x)
        if not 0 < x < 1:
            raise DomainError(f"tau is defined on (0, 1), got {x}")
        u = mpmath.sqrt((1 - x) * (1 + x))
        if u < config.TAU_SERIES_CUTOFF:
            u2 = u * u
            return mpmath.fsum(
                u2**k / (2 * k + 1) for k in range(config.TAU_SERIES_TERMS)
            )
        return mpmath.log((1 + u) / x) / u


def phase_variables(x) -> PhaseVariables:
    with working_digits():
        x = _positive(x, "phase_variables")
        t = tau(x) if x < 1 else None
        return PhaseVariables(rho(x), 1 / mpmath.sqrt(1 + x * x), t)
