from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import mpmath
from mpmath import mp

from imbessel import config


@contextmanager
def working_digits(digits: int | None = None) -> Iterator[int]:
    """Raise mpmath's working precision for the duration of the block.

    Never lowers an enclosing precision, so an oracle running at 60 digits
    that calls into an asymptotic module keeps its 60 digits.

    :param int digits: requested significant digits, default config.WORKING_DIGITS
    """
    target = max(mp.dps, digits if digits is not None else config.WORKING_DIGITS)
    with mp.workdps(target):
        yield target


def conj_exact(value: mpmath.mpc) -> mpmath.mpc:
    """Complex conjugate carried out at the precision the value already has."""
    bits = max(mp.prec, value.real.bc, value.imag.bc)
    with mp.workprec(bits):
        return mpmath.conj(value)


def mp_rational(q: Fraction | int) -> mpmath.mpf:
    """Exact rational to an mpf at the current precision."""
    if isinstance(q, int):
        return mpmath.mpf(q)
    return mpmath.mpf(q.numerator) / q.denominator


@dataclass(frozen=True)
class ScaledValue:
    """value = mantissa * exp(log_scale)

    log_scale is an integer (natural-log units) chosen as the nearest integer
    to log|value|, so e^-1/2 <= |mantissa| <= e^1/2 for non-zero values.
    """

    mantissa: mpmath.mpc
    log_scale: int = 0

    @classmethod
    def from_value(cls, value) -> "ScaledValue":
        v = mpmath.mpc(value)
        if v == 0:
            return cls(mpmath.mpc(0), 0)
        k = int(mpmath.nint(mpmath.log(abs(v))))
        return cls(v * mpmath.exp(-k), k)

    @classmethod
    def from_log(cls, log_value) -> "ScaledValue":
        """Build from a (complex) logarithm of the value."""
        lv = mpmath.mpc(log_value)
        k = int(mpmath.nint(lv.real))
        return cls(mpmath.exp(lv - k), k)

    @property
    def value(self) -> mpmath.mpc:
        return self.mantissa * mpmath.exp(self.log_scale)

    @property
    def log_abs(self) -> mpmath.mpf:
        if self.mantissa == 0:
            return mpmath.ninf
        return mpmath.log(abs(self.mantissa)) + self.log_scale

    @property
    def real(self) -> "ScaledValue":
        return ScaledValue(mpmath.mpc(self.mantissa.real), self.log_scale)

    def is_zero(self) -> bool:
        return self.mantissa == 0

    def conjugate(self) -> "ScaledValue":
        return ScaledValue(conj_exact(self.mantissa), self.log_scale)

    def __mul__(self, other: "ScaledValue") -> "ScaledValue":
        if not isinstance(other, ScaledValue):
            other = ScaledValue.from_value(other)
        if self.is_zero() or other.is_zero():
            return ScaledValue(mpmath.mpc(0), 0)
        return ScaledValue.from_log(
            mpmath.log(self.mantissa * other.mantissa)
            + self.log_scale
            + other.log_scale
        )

    __rmul__ = __mul__

    def relative_difference(self, other: "ScaledValue") -> mpmath.mpf:
        """|self - other| / |other| without leaving log space."""
        if other.is_zero():
            raise ZeroDivisionError("relative difference to zero")
        if self.is_zero():
            return mpmath.mpf(1)
        shift = self.log_scale - other.log_scale
        return abs(self.mantissa * mpmath.exp(shift) - other.mantissa) / abs(
            other.mantissa
        )
