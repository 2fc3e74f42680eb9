"""
Exact coefficient families.

Everything here is generated in rational arithmetic and only turned into
mpmath numbers at the final substitution:

    E_s(beta)       LG exponent coefficients
    Ehat_s(bhat)    their real forms on the imaginary axis
    a_s, a~_s       Airy exponent coefficients
    A_s(z), B_s(z)  coefficients of the slowly varying Airy multipliers
    q_s(x)          J-zero coefficients
    kappa^_s(z)     K- and L-zero coefficients
"""

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Sequence, TypeVar

import mpmath
from sortedcontainers import SortedDict

from imbessel import config
from imbessel.branch_maps import TurningPointFrame, map_point, tau, turning_series
from imbessel.errors import (
    DomainError,
    KappaTableParseError,
    ParityError,
    TableRangeError,
    TurningPointError,
)
from imbessel.polynomial import (
    MonomialSum,
    RationalPoly,
    Series,
    series_eval,
    series_mul,
    series_pow,
)
from imbessel.precision import mp_rational, working_digits

logger = logging.getLogger(__name__)

T = TypeVar("T")


# ===== E_s(beta) and the Airy coefficients =====

E1 = RationalPoly([0, Fraction(3, 24), 0, Fraction(5, 24)])
E2 = RationalPoly([0, 0, Fraction(1, 16), 0, Fraction(6, 16), 0, Fraction(5, 16)])
# beta^2 (beta^2 + 1)
_WEIGHT = RationalPoly([0, 0, 1, 0, 1])


def _check_e(s: int, poly: RationalPoly) -> None:
    parity_ok = poly.is_even() if s % 2 == 0 else poly.is_odd()
    if not parity_ok:
        raise ParityError(f"E_{s} has the wrong parity")
    if poly.valuation() < s:
        raise ParityError(f"E_{s} is not divisible by beta^{s}")


def e_step(history: Sequence[RationalPoly]) -> RationalPoly:
    """E_{s+1} from E_1..E_s.

    E_{s+1} = 1/2 b^2(b^2+1) E_s' + 1/2 int_0^b p^2(p^2+1) sum_{j=1}^{s-1} E_j' E_{s-j}' dp
    """
    s = len(history)
    conv = RationalPoly()
    for j in range(1, s):
        conv = conv + history[j - 1].derivative() * history[s - j - 1].derivative()
    return (_WEIGHT * history[-1].derivative() + (_WEIGHT * conv).integral()) * Fraction(
        1, 2
    )


def gen_E(max_s: int) -> tuple[RationalPoly, ...]:
    if not 1 <= max_s <= config.MAX_E_ORDER:
        raise TableRangeError("E_s", max_s, config.MAX_E_ORDER)
    polys = [E1, E2]
    while len(polys) < max_s:
        nxt = e_step(polys)
        _check_e(len(polys) + 1, nxt)
        polys.append(nxt)
    return tuple(polys[:max_s])


def _airy_sequence(first: Fraction, n: int) -> tuple[Fraction, ...]:
    b = [first, first]
    for s in range(2, n):
        conv = sum((b[j - 1] * b[s - j - 1] for j in range(1, s)), Fraction(0))
        b.append(Fraction(s + 1, 2) * b[s - 1] + conv / 2)
    return tuple(b[:n])


def gen_airy_coeffs(max_s: int) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Return (a_1..a_max_s, a~_1..a~_max_s)."""
    if not 1 <= max_s <= config.MAX_AIRY_COEFF_ORDER:
        raise TableRangeError("a_s", max_s, config.MAX_AIRY_COEFF_ORDER)
    return _airy_sequence(Fraction(5, 72), max_s), _airy_sequence(Fraction(-7, 72), max_s)


@dataclass(frozen=True)
class CoefficientTable:
    E: tuple[RationalPoly, ...]
    a: tuple[Fraction, ...]
    a_tilde: tuple[Fraction, ...]

    @property
    def max_order(self) -> int:
        return len(self.E)

    def e_poly(self, s: int) -> RationalPoly:
        if not 1 <= s <= len(self.E):
            raise TableRangeError("E_s", s, len(self.E))
        return self.E[s - 1]

    def airy(self, s: int, tilde: bool = False) -> Fraction:
        seq = self.a_tilde if tilde else self.a
        if not 1 <= s <= len(seq):
            raise TableRangeError("a_s", s, len(seq))
        return seq[s - 1]


@lru_cache(maxsize=4)
def coefficient_table(max_s: int | None = None) -> CoefficientTable:
    max_s = max_s or config.MAX_E_ORDER
    a, a_tilde = gen_airy_coeffs(config.MAX_AIRY_COEFF_ORDER)
    logger.debug(f"Generated E_1..E_{max_s}")
    return CoefficientTable(gen_E(max_s), a, a_tilde)


@lru_cache(maxsize=None)
def ehat_poly(s: int) -> RationalPoly:
    """Real polynomial with Ehat_s(bh) = E_s(-i bh) (s even), -i E_s(-i bh) (s odd)."""
    poly = coefficient_table().e_poly(s)
    out = []
    for k, c in enumerate(poly.coeffs):
        if c == 0:
            out.append(c)
            continue
        if (k + s) % 2:
            raise ParityError(f"E_{s} has a beta^{k} term, so Ehat_{s} is not real")
        # (-i)^k for even s, (-i)^(k+1) for odd s
        power = k if s % 2 == 0 else k + 1
        out.append(c if power % 4 == 0 else -c)
    return RationalPoly(out)


def ehat_eval(s: int, beta_hat) -> mpmath.mpf:
    with working_digits():
        return ehat_poly(s)(mpmath.mpf(beta_hat))


# ===== Script-E and the d-recursion =====


class Variant(Enum):
    PLAIN = "plain"
    TILDE = "tilde"


def _script_value(s: int, beta, xi, tilde: bool):
    table = coefficient_table()
    b = mp_rational(table.airy(s, tilde))
    return table.e_poly(s)(beta) + (-1) ** s * b / (s * xi**s)


def script_E(s: int, frame: TurningPointFrame, variant: Variant = Variant.PLAIN):
    if frame.xi == 0:
        raise TurningPointError(f"script E_{s}")
    with working_digits():
        return _script_value(s, frame.beta, frame.xi, variant is Variant.TILDE)


def compose_d(values: Sequence[T]) -> list[T]:
    """d_s = v_s + (1/s) sum_{j=1}^{s-1} j v_j d_{s-j}

    These are the coefficients of exp(sum v_s x^s). Works for any ring
    element supporting +, * and division by an int.
    """
    d: list[T] = []
    for s, v in enumerate(values, start=1):
        if s == 1:
            d.append(v)
            continue
        tail = (1 * values[0]) * d[s - 2]
        for j in range(2, s):
            tail = tail + (j * values[j - 1]) * d[s - j - 1]
        d.append(v + tail / s)
    return d


def gen_d(max_s: int, variant: Variant, frame: TurningPointFrame) -> list:
    with working_digits():
        return compose_d([script_E(s, frame, variant) for s in range(1, max_s + 1)])


# ===== Reduction of sigma/zeta monomials about z = 1 =====
# Monomials are keyed (a, j, m) meaning z^a sigma^j zeta^m. Around z = 1,
# zeta = c eps phi and sigma = psi / c with c = 2^(1/3), so each monomial
# becomes c^(m-j) eps^m (1+eps)^a phi^m psi^j. Grouping by (m-j) mod 3 keeps
# every series rational.

MonomialKey = tuple[int, int, int]


@lru_cache(maxsize=None)
def _phi_power(m: int, n: int) -> Series:
    return series_pow(list(turning_series(n).phi), m, n)


@lru_cache(maxsize=None)
def _psi_power(j: int, n: int) -> Series:
    return series_pow(list(turning_series(n).psi), j, n)


def _binomial_series(a: int, n: int) -> Series:
    out = [Fraction(0)] * n
    coeff = Fraction(1)
    for k in range(min(a, n - 1) + 1):
        out[k] = coeff
        coeff = coeff * (a - k) / (k + 1)
    return out


@lru_cache(maxsize=None)
def reduce_at_turning(
    terms: tuple[tuple[MonomialKey, Fraction], ...], n: int
) -> tuple[tuple[Fraction, ...], ...]:
    """Series S_0, S_1, S_2 in eps with sum_r c^r S_r(eps) equal to the monomial sum.

    Negative powers of eps must cancel; a leftover pole means the coefficient
    is not analytic at the turning point and raises ParityError.
    """
    pole = max([0] + [-m for (_, _, m), _ in terms])
    size = n + pole
    groups: dict[tuple[int, int, int], list[Fraction]] = {}
    for (a, j, m), coeff in terms:
        e = m - j
        r = e % 3
        factor = coeff * Fraction(2) ** ((e - r) // 3)
        acc = groups.setdefault((a, m, r), [Fraction(0)] * size)
        for k, p in enumerate(_psi_power(j, size)):
            acc[k] += factor * p
    out = [[Fraction(0)] * size for _ in range(3)]
    for (a, m, r), acc in groups.items():
        series = series_mul(acc, _phi_power(m, size), size)
        if a:
            series = series_mul(series, _binomial_series(a, size), size)
        offset = m + pole
        for k in range(size - offset):
            out[r][k + offset] += series[k]
    for r in range(3):
        if any(out[r][:pole]):
            raise ParityError("monomial sum keeps a pole at the turning point")
    return tuple(tuple(s[pole : pole + n]) for s in out)


def taylor_value(series: Sequence[Sequence[Fraction]], eps) -> mpmath.mpc:
    c = mpmath.cbrt(2)
    return mpmath.mpc(sum(c**r * series_eval(s, eps) for r, s in enumerate(series)))


def evaluate_monomials(
    terms: tuple[tuple[MonomialKey, Fraction], ...], z
) -> mpmath.mpc:
    """sum coeff z^a sigma^j zeta^m, through the Taylor branch near z = 1."""
    with working_digits():
        frame = map_point(z)
        if frame.near_turning:
            return taylor_value(
                reduce_at_turning(terms, config.TAYLOR_TERMS), frame.z - 1
            )
        z, sigma, zeta = frame.z, frame.sigma, frame.zeta
        return mpmath.fsum(
            mp_rational(c) * z**a * sigma**j * zeta**m for (a, j, m), c in terms
        )


# ===== A_s(z) and B_s(z) =====


class ABBranch(Enum):
    DIRECT = "direct"
    TAU_FORM = "tau_form"
    TAYLOR = "taylor"


def select_branch(z) -> ABBranch:
    z = mpmath.mpc(z)
    if abs(z - 1) < config.TAYLOR_RADIUS:
        return ABBranch.TAYLOR
    if z.imag == 0 and 0 < z.real < 1:
        return ABBranch.TAU_FORM
    return ABBranch.DIRECT


def _check_ab(which: str, s: int) -> None:
    if which not in ("A", "B"):
        raise ValueError(f"unknown coefficient family {which!r}")
    if not 0 <= s <= config.MAX_AB_ORDER:
        raise TableRangeError(f"{which}_s", s, config.MAX_AB_ORDER)


def _script_monomials(s: int, tilde: bool) -> MonomialSum:
    """Script-E_s as a sum of sigma^j w^k with w = zeta^(1/2)."""
    table = coefficient_table()
    terms = {(k, -k): c for k, c in enumerate(table.e_poly(s).coeffs) if c}
    # 1/xi^s = (3/2)^s w^(-3s)
    terms[(0, -3 * s)] = (-1) ** s * table.airy(s, tilde) / s * Fraction(3, 2) ** s
    return MonomialSum(terms)


@lru_cache(maxsize=None)
def ab_monomials(which: str, s: int) -> tuple[tuple[MonomialKey, Fraction], ...]:
    """A_s or B_s as monomials in sigma and zeta (all zeta powers integral)."""
    _check_ab(which, s)
    if which == "A":
        order, tilde, w_shift = 2 * s, True, 0
    else:
        order, tilde, w_shift = 2 * s + 1, False, -1
    if order == 0:
        return (((0, 0, 0), Fraction(1)),)
    d = compose_d([_script_monomials(k, tilde) for k in range(1, order + 1)])
    out = []
    for (j, k), c in sorted(d[order - 1].terms.items()):
        k += w_shift
        if k % 2:
            raise ParityError(f"{which}_{s} has an odd power of zeta^(1/2)")
        out.append(((0, j, k // 2), c))
    return tuple(out)


def _ab_direct(which: str, s: int, beta, xi, zeta_inv_sqrt):
    if which == "A":
        if s == 0:
            return mpmath.mpc(1)
        vals = [_script_value(k, beta, xi, True) for k in range(1, 2 * s + 1)]
        return compose_d(vals)[-1]
    vals = [_script_value(k, beta, xi, False) for k in range(1, 2 * s + 2)]
    return zeta_inv_sqrt * compose_d(vals)[-1]


def ab_coefficient(which: str, s: int, z, branch: ABBranch | None = None) -> mpmath.mpc:
    """
    A_s(z) (which="A") or B_s(z) (which="B").

    :param branch: force an evaluation branch; by default chosen from z
    """
    _check_ab(which, s)
    with working_digits():
        z = mpmath.mpc(z)
        branch = branch or select_branch(z)
        logger.debug(f"{which}_{s}({z}) via {branch.value}")
        match branch:
            case ABBranch.TAYLOR:
                series = reduce_at_turning(ab_monomials(which, s), config.TAYLOR_TERMS)
                return taylor_value(series, z - 1)
            case ABBranch.TAU_FORM:
                x = z.real
                if not 0 < x < 1:
                    raise DomainError(f"tau form needs 0 < x < 1, got {x}")
                u = mpmath.sqrt(1 - x * x)
                t = tau(x)
                beta = mpmath.mpc(0, -1 / u)
                zeta = map_point(x, taylor_radius=0).zeta
                xi = (1 - t) / beta
                zeta_inv_sqrt = -2 * beta * zeta / (3 * (t - 1))
                value = _ab_direct(which, s, beta, xi, zeta_inv_sqrt)
                return mpmath.mpc(value.real)
            case ABBranch.DIRECT:
                frame = map_point(z, taylor_radius=0)
                if frame.xi == 0:
                    raise TurningPointError(f"{which}_{s} direct form")
                return _ab_direct(which, s, frame.beta, frame.xi, 1 / frame.zeta_sqrt)


def a1_tau_form(x) -> mpmath.mpf:
    """Closed real form of A_1 on 0 < x < 1."""
    with working_digits():
        x = mpmath.mpf(x)
        t = tau(x)
        w = 1 - x * x
        return (
            -mpmath.mpf(385) / (1152 * w**3)
            + 7 * (99 * t - 104) / (1728 * w**2 * (t - 1))
            - (729 * t**2 - 1584 * t + 400) / (10368 * w * (t - 1) ** 2)
        )


def b0_tau_form(x) -> mpmath.mpf:
    """Closed real form of B_0 on 0 < x < 1."""
    with working_digits():
        x = mpmath.mpf(x)
        t = tau(x)
        w = 1 - x * x
        zeta = map_point(x, taylor_radius=0).zeta.real
        return -5 * zeta / (36 * w**2 * (t - 1)) + (9 * t - 4) * zeta / (
            108 * w * (t - 1) ** 2
        )


# ===== Upsilon_1 =====

UPSILON1_TERMS: tuple[tuple[MonomialKey, Fraction], ...] = (
    ((0, 3, -2), Fraction(10, 48)),
    ((0, 1, -1), Fraction(6, 48)),
    ((0, 0, -2), Fraction(-5, 48)),
)


def upsilon1(z) -> mpmath.mpc:
    """Leading correction of the zeta-argument of the Airy function in K."""
    return evaluate_monomials(UPSILON1_TERMS, z)


# ===== q_s(x) =====

# (sign, numerator coefficients in x^2 from the constant up, denominator, power of x^2+1)
_Q_TABLE: dict[int, tuple[int, tuple[int, ...], int, int]] = {
    1: (1, (-2, 3), 24, 2),
    2: (-1, (-4, 1812, -4119, 465), 5760, 5),
    3: (
        1,
        (-1912, 910164, -19043730, 46671831, -19038132, 714231),
        2903040,
        8,
    ),
    4: (
        -1,
        (
            742544,
            452367216,
            -45022408056,
            493158930936,
            -1239519604671,
            846638961795,
            -138922188885,
            2542280985,
        ),
        1393459200,
        11,
    ),
}


def q_poly(s: int, x) -> mpmath.mpf:
    if s == 0:
        return mpmath.mpf(x)
    if s not in _Q_TABLE:
        raise TableRangeError("q_s", s, config.MAX_Q_ORDER)
    sign, num, den, power = _Q_TABLE[s]
    with working_digits():
        x = mpmath.mpf(x)
        y = x * x
        acc = mpmath.mpf(0)
        for c in reversed(num):
            acc = acc * y + c
        return sign * x * acc / (den * (y + 1) ** power)


def q_over_x(s: int, x) -> mpmath.mpf:
    with working_digits():
        return q_poly(s, x) / mpmath.mpf(x)


# ===== kappa^_s(z) tables =====


class KappaSource(Enum):
    BUILT_IN = "built_in"
    IMPORTED = "imported"


@dataclass(frozen=True)
class KappaTerm:
    """coeff * z^z_pow * sigma^sigma_pow * zeta^(-zetainv_pow)"""

    coeff: Fraction
    z_pow: int
    sigma_pow: int
    zetainv_pow: int

    @property
    def key(self) -> MonomialKey:
        return (self.z_pow, self.sigma_pow, -self.zetainv_pow)


_HEADER = re.compile(r"^kappa\s+s=(\d+)$")
_TERM = re.compile(
    r"^term\s+(\S+)\s+z\^(-?\d+)\s+sigma\^(-?\d+)\s+zetainv\^(-?\d+)$"
)
_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(token: str, line_no: int) -> Fraction:
    if not _RATIONAL.match(token):
        raise KappaTableParseError(line_no, f"malformed rational {token!r}")
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise KappaTableParseError(line_no, f"zero denominator in {token!r}")


@dataclass
class KappaTable:
    # s -> terms of kappa^_s
    entries: SortedDict = field(default_factory=SortedDict)
    source: KappaSource = KappaSource.BUILT_IN

    @property
    def max_order(self) -> int:
        return self.entries.peekitem(-1)[0] if self.entries else 0

    def terms(self, s: int) -> tuple[KappaTerm, ...]:
        if s not in self.entries:
            raise TableRangeError("kappa^_s", s, self.max_order)
        return self.entries[s]

    def monomials(self, s: int) -> tuple[tuple[MonomialKey, Fraction], ...]:
        return tuple((t.key, t.coeff) for t in self.terms(s))

    def merged(self, other: "KappaTable") -> "KappaTable":
        """Entries of `other` take precedence over ours."""
        entries = SortedDict(self.entries)
        entries.update(other.entries)
        return KappaTable(entries, other.source)

    @classmethod
    def builtin(cls) -> "KappaTable":
        return cls(SortedDict({s: terms for s, terms in _BUILTIN.items()}))

    @classmethod
    def parse(cls, text: str) -> "KappaTable":
        """
        Parse the plain-text table format:

            # comment
            kappa s=3
            term -5/24 z^1 sigma^4 zetainv^2
        """
        entries: dict[int, list[KappaTerm]] = {}
        header_lines: dict[int, int] = {}
        current: int | None = None
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if m := _HEADER.match(line):
                current = int(m.group(1))
                if current == 0:
                    raise KappaTableParseError(line_no, "kappa^_0 = z is fixed")
                if current in entries:
                    raise KappaTableParseError(line_no, f"duplicate block s={current}")
                entries[current] = []
                header_lines[current] = line_no
                continue
            if m := _TERM.match(line):
                if current is None:
                    raise KappaTableParseError(line_no, "term before any kappa header")
                coeff = parse_rational(m.group(1), line_no)
                entries[current].append(
                    KappaTerm(coeff, int(m.group(2)), int(m.group(3)), int(m.group(4)))
                )
                continue
            raise KappaTableParseError(line_no, f"unrecognised line {line.split()[0]!r}")
        for s, terms in entries.items():
            if not terms:
                raise KappaTableParseError(header_lines[s], f"block s={s} has no terms")
        return cls(
            SortedDict({s: tuple(terms) for s, terms in entries.items()}),
            KappaSource.IMPORTED,
        )

    @classmethod
    def load(cls, path: str | Path) -> "KappaTable":
        """Built-in table overlaid with the blocks found in `path`."""
        imported = cls.parse(Path(path).read_text())
        logger.info(f"Imported kappa^_s for s in {list(imported.entries)} from {path}")
        return cls.builtin().merged(imported)


def _terms(*rows: tuple[str, int, int, int]) -> tuple[KappaTerm, ...]:
    return tuple(KappaTerm(Fraction(c), a, b, e) for c, a, b, e in rows)


_BUILTIN: dict[int, tuple[KappaTerm, ...]] = {
    1: _terms(
        ("5/48", 1, 1, 2),
        ("-5/24", 1, 4, 2),
        ("-1/8", 1, 2, 1),
    ),
    2: _terms(
        ("-175/1152", 3, 10, 5),
        ("-1105/1152", 1, 10, 5),
        ("-25/192", 3, 8, 4),
        ("-491/288", 1, 8, 4),
        ("25/288", 3, 7, 5),
        ("-3/128", 3, 6, 3),
        ("-1543/1920", 1, 6, 3),
        ("5/192", 3, 5, 4),
        ("-25/1152", 1, 5, 4),
        ("-5/384", 1, 3, 3),
        ("-25/4608", 3, 4, 5),
        ("-11/192", 1, 4, 2),
        ("25/4608", 1, 2, 4),
        ("1105/9216", 1, 1, 5),
    ),
}


def kappa_hat(s: int, z, table: KappaTable | None = None) -> mpmath.mpf:
    """kappa^_s(z) for 0 < z <= 1."""
    table = table or KappaTable.builtin()
    with working_digits():
        z = mpmath.mpf(z)
        if not 0 < z <= 1:
            raise DomainError(f"kappa^_s is used on (0, 1], got z={z}")
        if s == 0:
            return z
        return evaluate_monomials(table.monomials(s), z).real


def kappa_hat_over_z(s: int, z, table: KappaTable | None = None) -> mpmath.mpf:
    with working_digits():
        return kappa_hat(s, z, table) / mpmath.mpf(z)
