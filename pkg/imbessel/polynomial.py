from fractions import Fraction
from typing import Iterable, Sequence

from imbessel.precision import mp_rational

Series = list[Fraction]


class RationalPoly:
    """Univariate polynomial with exact rational coefficients.

    coeffs[k] is the coefficient of x^k; trailing zeros are dropped so the
    zero polynomial has no coefficients.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Fraction | int] = ()) -> None:
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def monomial(cls, k: int, c: Fraction | int = 1) -> "RationalPoly":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return RationalPoly(self.coeff(k) + other.coeff(k) for k in range(n))

    def __neg__(self) -> "RationalPoly":
        return RationalPoly(-c for c in self.coeffs)

    def __sub__(self, other: "RationalPoly") -> "RationalPoly":
        return self + (-other)

    def __mul__(self, other: "RationalPoly | Fraction | int") -> "RationalPoly":
        if not isinstance(other, RationalPoly):
            return RationalPoly(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        terms = [f"{c}*x^{k}" for k, c in enumerate(self.coeffs) if c != 0]
        return "RationalPoly(" + (" + ".join(terms) or "0") + ")"

    def derivative(self) -> "RationalPoly":
        return RationalPoly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def integral(self) -> "RationalPoly":
        """Antiderivative vanishing at 0."""
        return RationalPoly(
            [0] + [c / (k + 1) for k, c in enumerate(self.coeffs)]
        )

    def is_even(self) -> bool:
        return all(c == 0 for c in self.coeffs[1::2])

    def is_odd(self) -> bool:
        return all(c == 0 for c in self.coeffs[0::2])

    def valuation(self) -> int:
        """Largest k with x^k dividing the polynomial (-1 for zero)."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return -1

    def __call__(self, x):
        """Horner evaluation; exact for int/Fraction input, mpmath otherwise."""
        exact = isinstance(x, (int, Fraction))
        acc = Fraction(0) if exact else 0
        for c in reversed(self.coeffs):
            acc = acc * x + (c if exact else mp_rational(c))
        return acc


# ===== Truncated power series =====
# A series is a list of Fractions [c0, c1, ...] meaning sum c_k eps^k + O(eps^n)
# with n = len(series).


def series_mul(a: Sequence[Fraction], b: Sequence[Fraction], n: int) -> Series:
    out = [Fraction(0)] * n
    for i, ai in enumerate(a[:n]):
        if ai == 0:
            continue
        for j in range(min(len(b), n - i)):
            out[i + j] += ai * b[j]
    return out


def series_pow(a: Sequence[Fraction], alpha: Fraction | int, n: int) -> Series:
    """a^alpha for a unit series (a[0] == 1) and rational alpha.

    Uses the recurrence k f_k = sum_{j=1}^k (alpha*j - (k-j)) a_j f_{k-j}.
    """
    if not a or a[0] != 1:
        raise ValueError("series_pow needs a series with constant term 1")
    alpha = Fraction(alpha)
    f = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for k in range(1, n):
        acc = Fraction(0)
        for j in range(1, min(k, len(a) - 1) + 1):
            if a[j] != 0:
                acc += (alpha * j - (k - j)) * a[j] * f[k - j]
        f[k] = acc / k
    return f


def series_scale(a: Sequence[Fraction], c: Fraction | int) -> Series:
    return [x * c for x in a]


def series_derivative(a: Sequence[Fraction]) -> Series:
    return [k * c for k, c in enumerate(a) if k > 0]


def series_eval(a: Sequence[Fraction], x):
    """Horner evaluation of a truncated series at an mpmath number."""
    acc = 0
    for c in reversed(a):
        acc = acc * x + mp_rational(c)
    return acc


class MonomialSum:
    """Sparse sum of monomials with rational coefficients.

    Keys are exponent tuples of a fixed arity; exponents may be negative.
    Only the ring operations the coefficient recursions need are provided.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, ...], Fraction] | None = None) -> None:
        self.terms: dict[tuple[int, ...], Fraction] = {
            k: Fraction(v) for k, v in (terms or {}).items() if v != 0
        }

    def __add__(self, other: "MonomialSum") -> "MonomialSum":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return MonomialSum(out)

    def __neg__(self) -> "MonomialSum":
        return MonomialSum({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "MonomialSum") -> "MonomialSum":
        return self + (-other)

    def __mul__(self, other: "MonomialSum | Fraction | int") -> "MonomialSum":
        if not isinstance(other, MonomialSum):
            return MonomialSum({k: v * other for k, v in self.terms.items()})
        out: dict[tuple[int, ...], Fraction] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, Fraction(0)) + v1 * v2
        return MonomialSum(out)

    __rmul__ = __mul__

    def __truediv__(self, other: Fraction | int) -> "MonomialSum":
        return MonomialSum({k: v / other for k, v in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MonomialSum):
            return NotImplemented
        return self.terms == other.terms

    def __len__(self) -> int:
        return len(self.terms)

    def shifted(self, shift: tuple[int, ...]) -> "MonomialSum":
        """Multiply by the monomial with exponents `shift`."""
        return MonomialSum(
            {tuple(a + b for a, b in zip(k, shift)): v for k, v in self.terms.items()}
        )
