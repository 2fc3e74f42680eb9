"""
Airy-type expansions valid through the turning point z = 1.

With t = nu^(2/3) zeta and the slowly varying pair A(nu,z), B(nu,z),

    w_l = Ai_l(t) A + Ai_l'(t) B    (l = 0, +-1),    w_2 = Bi(t) A + Bi'(t) B

    I_{+-i nu}(nu z) = 2^(1/2) e^(-+pi i/6) e^(nu pi/2) nu^(-1/3) sigma^(1/2) w_{+-1}
    K_{i nu}(nu z)   = pi e^(nu pi/2) / (2^(1/2) nu^(1/3) sinh(nu pi)) sigma^(1/2) w_0
    L_{i nu}(nu z)   = the same with w_2

A and B are expanded either in powers of nu^-2 (analytic at z = 1) or in the
exponential form away from it; for validation they can also be computed from
oracle values of I_{+-i nu} and K_{i nu}.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import mpmath

from imbessel import config, oracle, zeros
from imbessel.airy_core import airy_eval, airy_rotated
from imbessel.branch_maps import map_point
from imbessel.coeff_engine import ABBranch, Variant, ab_coefficient, script_E, select_branch
from imbessel.errors import DomainError, RegionError, TableRangeError
from imbessel.precision import ScaledValue, conj_exact, working_digits

logger = logging.getLogger(__name__)

# bisection steps when refining l_{nu,1} on the L assembly
L_ZERO_STEPS = 80
L_ZERO_WIDENINGS = 8


class BesselKind(Enum):
    K = "K"
    L = "L"
    I_PLUS = "I+"
    I_MINUS = "I-"

    @property
    def reflected(self) -> "BesselKind":
        """The function whose conjugate gives this one at conj(z)."""
        match self:
            case BesselKind.I_PLUS:
                return BesselKind.I_MINUS
            case BesselKind.I_MINUS:
                return BesselKind.I_PLUS
            case _:
                return self


class ABMode(Enum):
    SERIES = "series_AB"
    EXACT = "exact_AB"


class ExactVariant(Enum):
    # I_{i nu}, I_{-i nu}: satisfactory where both oscillate or are balanced
    I_PAIR = "I_pair"
    # I_{i nu}, K_{i nu}: satisfactory where one grows and the other decays
    I_K = "I_K"


class EnvelopeSource(Enum):
    ORACLE = "oracle"
    ASSEMBLY = "assembly"


@dataclass(frozen=True)
class ABPair:
    A: mpmath.mpc
    B: mpmath.mpc
    # None for values built from the oracle
    branch_used: ABBranch | None = None

    def conjugate(self) -> "ABPair":
        return ABPair(conj_exact(self.A), conj_exact(self.B), self.branch_used)


@dataclass(frozen=True)
class WFunctions:
    w0: mpmath.mpc
    w1: mpmath.mpc
    wm1: mpmath.mpc
    w2: mpmath.mpc


def _order(nu) -> mpmath.mpf:
    nu = mpmath.mpf(nu)
    if nu <= 0:
        raise DomainError(f"order parameter nu must be positive, got {nu}")
    return nu


def _is_positive_real(z: mpmath.mpc) -> bool:
    return z.imag == 0 and z.real > 0


def log_sinh_nu_pi(nu) -> mpmath.mpf:
    """ln sinh(nu pi) without forming sinh(nu pi)."""
    x = mpmath.pi * nu
    return x - mpmath.ln2 + mpmath.log1p(-mpmath.exp(-2 * x))


# ===== A(nu,z) and B(nu,z) =====


def ab_eval(nu, z, s_max: int = config.MAX_AB_ORDER, branch: ABBranch | None = None) -> ABPair:
    """
    A = 1 + sum_{s=1}^{s_max} A_s/nu^(2s),  B = nu^(-4/3) sum_{s=0}^{s_max} B_s/nu^(2s).

    :param branch: force the coefficient branch; by default chosen from z
    """
    if not 0 <= s_max <= config.MAX_AB_ORDER:
        raise TableRangeError("A_s/B_s", s_max, config.MAX_AB_ORDER)
    with working_digits():
        nu = _order(nu)
        z = mpmath.mpc(z)
        if z.imag < 0:
            return ab_eval(nu, mpmath.conj(z), s_max, branch).conjugate()
        branch = branch or select_branch(z)
        a = 1 + mpmath.fsum(
            ab_coefficient("A", s, z, branch) / nu ** (2 * s) for s in range(1, s_max + 1)
        )
        b = mpmath.fsum(
            ab_coefficient("B", s, z, branch) / nu ** (2 * s) for s in range(s_max + 1)
        ) / mpmath.power(nu, mpmath.mpf(4) / 3)
        if _is_positive_real(z):
            a, b = mpmath.mpc(a.real), mpmath.mpc(b.real)
        return ABPair(mpmath.mpc(a), mpmath.mpc(b), branch)


def ab_expform(nu, z, n: int | None = None, exclusion_radius=None) -> ABPair:
    """
    The exponential forms

        A ~ exp{sum E~_2s / nu^2s} cosh{sum E~_{2s+1} / nu^(2s+1)}
        B ~ nu^(-1/3) zeta^(-1/2) exp{sum E_2s / nu^2s} sinh{sum E_{2s+1} / nu^(2s+1)}

    with the even sums over s = 1..n-1 and the odd ones over s = 0..n-1.
    """
    if n is None:
        n = config.LG_DEFAULT_TERMS
    limit = (config.MAX_E_ORDER + 1) // 2
    if not 2 <= n <= limit:
        raise TableRangeError("exponential-form terms", n, limit)
    if exclusion_radius is None:
        exclusion_radius = config.LG_EXCLUSION_RADIUS
    with working_digits():
        nu = _order(nu)
        z = mpmath.mpc(z)
        if z.imag < 0:
            return ab_expform(nu, mpmath.conj(z), n, exclusion_radius).conjugate()
        if abs(z - 1) < exclusion_radius:
            raise RegionError(z, exclusion_radius)
        frame = map_point(z, taylor_radius=0)

        def sums(variant: Variant) -> tuple[mpmath.mpc, mpmath.mpc]:
            even = mpmath.fsum(
                script_E(2 * s, frame, variant) / nu ** (2 * s) for s in range(1, n)
            )
            odd = mpmath.fsum(
                script_E(2 * s + 1, frame, variant) / nu ** (2 * s + 1) for s in range(n)
            )
            return even, odd

        even, odd = sums(Variant.TILDE)
        a = mpmath.exp(even) * mpmath.cosh(odd)
        even, odd = sums(Variant.PLAIN)
        b = mpmath.exp(even) * mpmath.sinh(odd) / (mpmath.cbrt(nu) * frame.zeta_sqrt)
        if _is_positive_real(z):
            a, b = mpmath.mpc(a.real), mpmath.mpc(b.real)
        return ABPair(mpmath.mpc(a), mpmath.mpc(b), ABBranch.DIRECT)


def exact_variant(z) -> ExactVariant:
    return ExactVariant.I_PAIR if mpmath.mpc(z).real < 1 else ExactVariant.I_K


def ab_exact(
    nu,
    z,
    ctx: oracle.PrecisionContext | None = None,
    variant: ExactVariant | None = None,
) -> ABPair:
    """A and B solved from oracle values of I_{+-i nu}(nu z), or I_{i nu} and K_{i nu}."""
    ctx = ctx or oracle.DEFAULT_CONTEXT
    with working_digits(ctx.digits):
        nu = _order(nu)
        z = mpmath.mpc(z)
        if z.imag < 0:
            return ab_exact(nu, mpmath.conj(z), ctx, variant).conjugate()
        variant = variant or exact_variant(z)
        frame = map_point(z)
        t = mpmath.power(nu, mpmath.mpf(2) / 3) * frame.zeta
        factor = (
            mpmath.sqrt(2)
            * mpmath.cbrt(nu)
            * mpmath.exp(-nu * mpmath.pi / 2)
            / frame.sigma_sqrt()
        )
        plus = oracle.i_iv(nu, nu * z, 1, ctx)
        logger.debug(f"exact A/B at z={z} from the {variant.value} pair")
        match variant:
            case ExactVariant.I_PAIR:
                minus = oracle.i_iv(nu, nu * z, -1, ctx)
                left = mpmath.expjpi(-mpmath.mpf(1) / 3) * plus
                right = mpmath.expjpi(mpmath.mpf(1) / 3) * minus
                a = -mpmath.pi * factor * (
                    left * airy_rotated(-1, t, derivative=True)
                    + right * airy_rotated(1, t, derivative=True)
                )
                b = mpmath.pi * factor * (left * airy_rotated(-1, t) + right * airy_rotated(1, t))
            case ExactVariant.I_K:
                k = oracle.k_iv_complex(nu, nu * z, ctx)
                k_term = 2 * mpmath.expjpi(-mpmath.mpf(1) / 6) * mpmath.sinh(nu * mpmath.pi) * k
                ai = airy_eval(t)
                a = factor * (
                    k_term * airy_rotated(1, t, derivative=True) - mpmath.pi * plus * ai.ai_prime
                )
                b = factor * (mpmath.pi * plus * ai.ai - k_term * airy_rotated(1, t))
        return ABPair(mpmath.mpc(a), mpmath.mpc(b))


# ===== Assembly =====


def w_functions(nu, z, ab: ABPair) -> WFunctions:
    """w_0, w_1, w_-1 and w_2 at nu^(2/3) zeta(z) for the given A, B."""
    with working_digits():
        nu = _order(nu)
        t = mpmath.power(nu, mpmath.mpf(2) / 3) * map_point(z).zeta
        plain = airy_eval(t)

        def w(l: int) -> mpmath.mpc:
            return airy_rotated(l, t) * ab.A + airy_rotated(l, t, derivative=True) * ab.B

        return WFunctions(
            w0=plain.ai * ab.A + plain.ai_prime * ab.B,
            w1=w(1),
            wm1=w(-1),
            w2=plain.bi * ab.A + plain.bi_prime * ab.B,
        )


def _log_prefactor(which: BesselKind, nu) -> mpmath.mpc:
    pi = mpmath.pi
    base = nu * pi / 2 - mpmath.log(nu) / 3
    match which:
        case BesselKind.K | BesselKind.L:
            return mpmath.log(pi) - mpmath.ln2 / 2 + base - log_sinh_nu_pi(nu)
        case BesselKind.I_PLUS:
            return mpmath.ln2 / 2 + base - mpmath.mpc(0, pi / 6)
        case BesselKind.I_MINUS:
            return mpmath.ln2 / 2 + base + mpmath.mpc(0, pi / 6)


def bessel_airy(
    which: BesselKind,
    nu,
    z,
    mode: ABMode = ABMode.SERIES,
    s_max: int = config.MAX_AB_ORDER,
    ctx: oracle.PrecisionContext | None = None,
) -> ScaledValue:
    """K_{i nu}(nu z), L_{i nu}(nu z) or I_{+-i nu}(nu z) from the Airy assembly."""
    digits = (ctx or oracle.DEFAULT_CONTEXT).digits if mode is ABMode.EXACT else None
    with working_digits(digits):
        nu = _order(nu)
        z = mpmath.mpc(z)
        if z.imag < 0:
            reflected = bessel_airy(which.reflected, nu, mpmath.conj(z), mode, s_max, ctx)
            return reflected.conjugate()
        if mode is ABMode.SERIES:
            ab = ab_eval(nu, z, s_max)
        else:
            ab = ab_exact(nu, z, ctx)
        w = w_functions(nu, z, ab)
        match which:
            case BesselKind.K:
                value = w.w0
            case BesselKind.L:
                value = w.w2
            case BesselKind.I_PLUS:
                value = w.w1
            case BesselKind.I_MINUS:
                value = w.wm1
        if value == 0:
            return ScaledValue(mpmath.mpc(0), 0)
        sigma_half = map_point(z).sigma_sqrt()
        result = ScaledValue.from_log(
            _log_prefactor(which, nu) + mpmath.log(sigma_half) + mpmath.log(value)
        )
        if which in (BesselKind.K, BesselKind.L) and _is_positive_real(z):
            return result.real
        return result


# ===== Envelope and error diagnostics =====


def _l_sign(nu, x) -> int:
    return 1 if bessel_airy(BesselKind.L, nu, x).mantissa.real > 0 else -1


@lru_cache(maxsize=64)
def _refined_l_zero(nu: mpmath.mpf, digits: int) -> mpmath.mpf:
    seed = zeros.l_zero(nu, 1).x
    width = mpmath.mpf(config.L_ZERO_BRACKET)
    for _ in range(L_ZERO_WIDENINGS):
        lo, hi = seed * (1 - width), seed * (1 + width)
        if _l_sign(nu, lo) != _l_sign(nu, hi):
            break
        width *= 4
    else:
        raise ArithmeticError(f"no sign change of L around its first zero for nu={nu}")
    sign_lo = _l_sign(nu, lo)
    for _ in range(L_ZERO_STEPS):
        mid = (lo + hi) / 2
        if _l_sign(nu, mid) == sign_lo:
            lo = mid
        else:
            hi = mid
    logger.debug(f"l_(nu,1) for nu={nu}: seed {seed}, refined {(lo + hi) / 2}")
    return (lo + hi) / 2


def refined_l_zero(nu) -> mpmath.mpf:
    """The largest zero of L_{i nu}(nu x) in x, refined on the L assembly."""
    with working_digits() as digits:
        return _refined_l_zero(_order(nu), digits)


def _k_and_l(nu, x, source: EnvelopeSource, ctx) -> tuple[mpmath.mpf, mpmath.mpf]:
    if source is EnvelopeSource.ORACLE:
        return oracle.k_iv(nu, nu * x, ctx), oracle.l_iv(nu, nu * x, ctx)
    k = bessel_airy(BesselKind.K, nu, x).value.real
    l_value = bessel_airy(BesselKind.L, nu, x).value.real
    return k, l_value


def envelope_N(
    nu,
    x,
    source: EnvelopeSource = EnvelopeSource.ORACLE,
    ctx: oracle.PrecisionContext | None = None,
) -> mpmath.mpf:
    """(K^2 + L^2)^(1/2) at nu x for x <= l_{nu,1}, otherwise K itself."""
    with working_digits():
        nu = _order(nu)
        x = mpmath.mpf(x)
        if x <= 0:
            raise DomainError(f"envelope needs x > 0, got {x}")
        k, l_value = _k_and_l(nu, x, source, ctx)
        if x <= refined_l_zero(nu):
            return mpmath.sqrt(k * k + l_value * l_value)
        return k


def chi_diagnostic(
    nu,
    x,
    s_max: int = config.MAX_AB_ORDER,
    ctx: oracle.PrecisionContext | None = None,
    source: EnvelopeSource = EnvelopeSource.ORACLE,
) -> mpmath.mpf:
    """|K - S| / N with S the s_max-truncated Airy assembly of K."""
    ctx = ctx or oracle.DEFAULT_CONTEXT
    with working_digits(ctx.digits):
        nu, x = _order(nu), mpmath.mpf(x)
        exact = oracle.k_iv(nu, nu * x, ctx)
        approx = bessel_airy(BesselKind.K, nu, x, ABMode.SERIES, s_max).value.real
        return abs(exact - approx) / envelope_N(nu, x, source, ctx)


def omega3(nu, x, s_max: int = config.MAX_AB_ORDER, ctx: oracle.PrecisionContext | None = None):
    return mpmath.log10(chi_diagnostic(nu, x, s_max, ctx))
