"""
Airy functions for the turning-point assemblies.

|t| <= AIRY_SEAM uses the Maclaurin series (through 0F1, with guard digits
for the cancellation on the negative axis); beyond it mpmath's asymptotic
evaluator is used. The rotated solutions are Ai_l(t) = Ai(t e^(-2 pi i l / 3)).
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import mpmath
from mpmath import mp

from imbessel import config
from imbessel.branch_maps import TurningPointFrame
from imbessel.coeff_engine import coefficient_table
from imbessel.errors import DomainError, TableRangeError
from imbessel.precision import mp_rational, working_digits

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AiryValue:
    ai: mpmath.mpc
    ai_prime: mpmath.mpc
    bi: mpmath.mpc
    bi_prime: mpmath.mpc
    argument: mpmath.mpc

    @property
    def wronskian(self) -> mpmath.mpc:
        """Ai Bi' - Ai' Bi, equal to 1/pi."""
        with working_digits():
            return self.ai * self.bi_prime - self.ai_prime * self.bi


class AiryKind(Enum):
    AI = "Ai"
    BI = "Bi"


class ExpForm(Enum):
    AI0 = "Ai0"
    AI0_PRIME = "Ai0'"
    AI1 = "Ai1"
    AI1_PRIME = "Ai1'"
    AIM1 = "Aim1"
    AIM1_PRIME = "Aim1'"

    @property
    def is_derivative(self) -> bool:
        return self.value.endswith("'")


def _check_argument(t) -> mpmath.mpc:
    t = mpmath.mpc(t)
    if abs(t) > config.AIRY_MAX_ARG:
        raise DomainError(f"|t| = {abs(t)} exceeds the Airy limit {config.AIRY_MAX_ARG}")
    return t


def _maclaurin(t: mpmath.mpc) -> tuple[mpmath.mpc, ...]:
    # Ai = c1 f - c2 g, Bi = sqrt(3) (c1 f + c2 g)
    c1 = mpmath.power(3, -mpmath.mpf(2) / 3) / mpmath.gamma(mpmath.mpf(2) / 3)
    c2 = mpmath.power(3, -mpmath.mpf(1) / 3) / mpmath.gamma(mpmath.mpf(1) / 3)
    w = t**3 / 9
    f = mpmath.hyp0f1(mpmath.mpf(2) / 3, w)
    g = t * mpmath.hyp0f1(mpmath.mpf(4) / 3, w)
    f_prime = t * t / 2 * mpmath.hyp0f1(mpmath.mpf(5) / 3, w)
    g_prime = mpmath.hyp0f1(mpmath.mpf(1) / 3, w)
    root3 = mpmath.sqrt(3)
    return (
        c1 * f - c2 * g,
        c1 * f_prime - c2 * g_prime,
        root3 * (c1 * f + c2 * g),
        root3 * (c1 * f_prime + c2 * g_prime),
    )


def _asymptotic(t: mpmath.mpc) -> tuple[mpmath.mpc, ...]:
    return (
        mpmath.airyai(t),
        mpmath.airyai(t, derivative=1),
        mpmath.airybi(t),
        mpmath.airybi(t, derivative=1),
    )


def airy_eval(t, use_series: bool | None = None) -> AiryValue:
    """
    Ai, Ai', Bi and Bi' at t.

    :param use_series: force the Maclaurin branch (True) or the asymptotic
        branch (False); by default chosen from |t| and config.AIRY_SEAM
    """
    with working_digits() as digits:
        t = _check_argument(t)
        if use_series is None:
            use_series = abs(t) <= config.AIRY_SEAM
        if use_series:
            with mp.workdps(digits + config.AIRY_GUARD_DIGITS):
                values = _maclaurin(t)
        else:
            values = _asymptotic(t)
        ai, ai_prime, bi, bi_prime = (mpmath.mpc(v) for v in values)
        return AiryValue(ai, ai_prime, bi, bi_prime, t)


def _rotation(l: int) -> mpmath.mpc:
    if l not in (-1, 0, 1):
        raise DomainError(f"rotation index must be -1, 0 or 1, got {l}")
    return mpmath.expjpi(-mpmath.mpf(2) * l / 3)


def airy_rotated(l: int, t, derivative: bool = False, chain_rule: bool = True) -> mpmath.mpc:
    """
    Ai_l(t) = Ai(t e^(-2 pi i l/3)), or its derivative.

    With chain_rule the derivative is d/dt Ai_l(t), i.e. it carries the
    factor e^(-2 pi i l/3); without it, Ai' at the rotated point.
    """
    with working_digits():
        rot = _rotation(l)
        value = airy_eval(mpmath.mpc(t) * rot)
        if not derivative:
            return value.ai
        return value.ai_prime * rot if chain_rule else value.ai_prime


def _zero_seed(t: mpmath.mpf) -> mpmath.mpf:
    # -T(t), T(t) = t^(2/3) (1 + 5/48 t^-2 - 5/36 t^-4)
    return -mpmath.power(t, mpmath.mpf(2) / 3) * (
        1 + mpmath.mpf(5) / 48 / t**2 - mpmath.mpf(5) / 36 / t**4
    )


@lru_cache(maxsize=2048)
def _neg_zero(kind: AiryKind, m: int, digits: int) -> mpmath.mpf:
    with mp.workdps(digits):
        shift = 1 if kind is AiryKind.AI else 3
        seed = _zero_seed(3 * mpmath.pi * (4 * m - shift) / 8)

        def f(x):
            v = airy_eval(x)
            return (v.ai if kind is AiryKind.AI else v.bi).real

        def df(x):
            v = airy_eval(x)
            return (v.ai_prime if kind is AiryKind.AI else v.bi_prime).real

        root = mpmath.findroot(f, seed, solver="newton", df=df)
        logger.debug(f"{kind.value} zero m={m}: seed {seed}, root {root}")
        return root


def airy_neg_zero(kind: AiryKind, m: int) -> mpmath.mpf:
    """The m-th negative zero of Ai (a_m) or Bi (b_m)."""
    if m < 1:
        raise DomainError(f"zero index must be >= 1, got {m}")
    with working_digits() as digits:
        return _neg_zero(kind, m, digits)


def ai_expform(n: int, nu, frame: TurningPointFrame, which: ExpForm) -> mpmath.mpc:
    """
    Exponential-form expansion of Ai_l(nu^(2/3) zeta) or its derivative with
    respect to nu^(2/3) zeta (chain-rule convention for the rotated forms).

    The correction sum runs over s = 1..n-1 and sits inside the exponential.
    """
    if not 2 <= n <= 8:
        raise TableRangeError("Airy exponential form", n, 8)
    with working_digits():
        nu = mpmath.mpf(nu)
        xi = frame.xi
        if nu * abs(xi) < config.EXPFORM_MIN_NU_XI:
            raise DomainError(
                f"nu*|xi| = {nu * abs(xi)} is below {config.EXPFORM_MIN_NU_XI}"
            )
        arg = frame.xi_arg
        pi = mpmath.pi
        match which:
            case ExpForm.AI0 | ExpForm.AI0_PRIME:
                ok = abs(frame.zeta_arg) <= 2 * pi / 3
                sign, alternating, phase = -1, True, mpmath.mpc(1)
            case ExpForm.AI1 | ExpForm.AI1_PRIME:
                ok = 0 <= arg <= pi / 2
                sign, alternating, phase = 1, False, mpmath.expjpi(mpmath.mpf(1) / 6)
            case ExpForm.AIM1 | ExpForm.AIM1_PRIME:
                ok = pi <= arg <= 3 * pi / 2
                sign, alternating, phase = -1, True, mpmath.expjpi(mpmath.mpf(1) / 3)
        if not ok:
            raise DomainError(f"{which.value} expansion is not valid at arg(xi) = {arg}")
        table = coefficient_table()
        exponent = sign * nu * xi
        for s in range(1, n):
            a = mp_rational(table.airy(s, tilde=which.is_derivative))
            term = a / (s * nu**s * xi**s)
            exponent += (-1) ** s * term if alternating else term
        quarter = frame.zeta_quarter()
        scale = 2 * mpmath.sqrt(pi)
        if which.is_derivative:
            # Ai1' keeps e^(i pi/6); the other two flip sign
            lead = phase * mpmath.root(nu, 6) * quarter / scale
            if which is not ExpForm.AI1_PRIME:
                lead = -lead
        else:
            lead = phase / (scale * mpmath.root(nu, 6) * quarter)
        return lead * mpmath.exp(exponent)
