from fractions import Fraction

import mpmath
import pytest
import sympy

from imbessel import config
from imbessel.branch_maps import map_point
from imbessel.coeff_engine import (
    E1,
    E2,
    ABBranch,
    KappaSource,
    KappaTable,
    Variant,
    a1_tau_form,
    ab_coefficient,
    b0_tau_form,
    coefficient_table,
    compose_d,
    e_step,
    ehat_eval,
    ehat_poly,
    gen_airy_coeffs,
    gen_d,
    gen_E,
    kappa_hat,
    kappa_hat_over_z,
    q_poly,
    q_over_x,
    reduce_at_turning,
    script_E,
    select_branch,
    taylor_value,
    upsilon1,
)
from imbessel.errors import (
    KappaTableParseError,
    TableRangeError,
    TurningPointError,
)
from imbessel.polynomial import RationalPoly

C = mpmath.cbrt(2)

A_AT_ONE = {
    1: Fraction(1, 225),
    2: Fraction(151439, 218295000),
}
B_AT_ONE = {
    0: Fraction(1, 70),
    1: Fraction(1213, 1023750),
}


def mp(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


class TestGenE:
    def test_closed_forms(self):
        assert E1(1) == Fraction(1, 3)
        assert E2(1) == Fraction(3, 4)

    def test_recursion_reproduces_e2(self):
        assert e_step([E1]) == E2

    def test_e3(self):
        e3 = gen_E(3)[2]
        assert e3 == RationalPoly(
            [
                0,
                0,
                0,
                Fraction(75, 1152),
                0,
                Fraction(4779, 5760),
                0,
                Fraction(1989, 1152),
                0,
                Fraction(1105, 1152),
            ]
        )

    def test_parity_and_divisibility(self):
        for s, poly in enumerate(gen_E(config.MAX_E_ORDER), start=1):
            assert poly(-1) == (poly(1) if s % 2 == 0 else -poly(1))
            assert poly.is_even() if s % 2 == 0 else poly.is_odd()
            assert poly.valuation() >= s
            assert poly.degree == 3 * s

    def test_e3_against_quadrature(self):
        e3 = gen_E(3)[2]
        with mpmath.workdps(40):
            d1 = E1.derivative()
            d2 = E2.derivative()
            for b in [mpmath.mpf("0.3"), mpmath.mpf(1), mpmath.mpf(2)]:
                integral = mpmath.quad(lambda p: p**2 * (p**2 + 1) * d1(p) ** 2, [0, b])
                expected = b**2 * (b**2 + 1) * d2(b) / 2 + integral / 2
                assert abs(e3(b) - expected) < 1e-20 * abs(expected)

    def test_range(self):
        with pytest.raises(TableRangeError):
            gen_E(config.MAX_E_ORDER + 1)
        with pytest.raises(TableRangeError):
            gen_E(0)


class TestAiryCoefficients:
    def test_first_terms(self):
        a, a_tilde = gen_airy_coeffs(3)
        assert a[:2] == (Fraction(5, 72), Fraction(5, 72))
        assert a_tilde[:2] == (Fraction(-7, 72), Fraction(-7, 72))
        assert a[2] == Fraction(1105, 10368)
        assert a_tilde[2] == Fraction(-1463, 10368)

    def test_length_and_limit(self):
        a, a_tilde = gen_airy_coeffs(20)
        assert len(a) == len(a_tilde) == 20
        with pytest.raises(TableRangeError):
            gen_airy_coeffs(21)

    def test_table_lookup(self):
        table = coefficient_table()
        assert table.airy(1) == Fraction(5, 72)
        assert table.airy(1, tilde=True) == Fraction(-7, 72)
        with pytest.raises(TableRangeError):
            table.e_poly(table.max_order + 1)


class TestEhat:
    def test_ehat1(self):
        assert ehat_poly(1)(1) == Fraction(1, 12)
        assert ehat_poly(1) == RationalPoly([0, Fraction(-3, 24), 0, Fraction(5, 24)])

    def test_ehat2_closed_form(self):
        b = Fraction(1, 2)
        expected = b**2 * (5 * b**2 - 1) * (1 - b**2) / 16
        assert ehat_poly(2)(b) == expected

    def test_ehat3_real_odd(self):
        poly = ehat_poly(3)
        assert poly.is_odd()
        value = ehat_eval(3, "0.7")
        with mpmath.workdps(30):
            # -i E_3(-i bh)
            direct = -1j * gen_E(3)[2](mpmath.mpc(0, "-0.7"))
        assert abs(value - direct.real) < 1e-20
        assert abs(direct.imag) < 1e-20


class TestScriptE:
    def test_at_two(self):
        frame = map_point(2)
        beta = 1 / mpmath.sqrt(3)
        expected = E1(beta) - mpmath.mpf(5) / 72 / frame.xi
        assert abs(script_E(1, frame) - expected) < 1e-13
        expected_tilde = E1(beta) + mpmath.mpf(7) / 72 / frame.xi
        assert abs(script_E(1, frame, Variant.TILDE) - expected_tilde) < 1e-13

    def test_far_field(self):
        frame = map_point(10**6)
        for s in range(1, 4):
            poly = coefficient_table().e_poly(s)
            diff = script_E(s, frame) - poly(frame.beta)
            assert abs(diff) < 1e-6
            assert abs(diff * frame.xi**s) < 1

    def test_turning_point(self):
        with pytest.raises(TurningPointError):
            script_E(1, map_point(1))


class TestComposeD:
    def test_exact_numbers(self):
        v = [Fraction(1, 2), Fraction(1, 3)]
        d = compose_d(v)
        assert d[0] == Fraction(1, 2)
        assert d[1] == Fraction(1, 3) + Fraction(1, 8)

    def test_printed_compositions(self):
        e = sympy.symbols("e1:8")
        d = compose_d(list(e))
        e1, e2, e3, e4, e5, e6, e7 = e
        printed = {
            2: (e1**2 + 2 * e2) / 2,
            3: (e1**3 + 6 * e1 * e2 + 6 * e3) / 6,
            4: (e1**4 + 12 * e1**2 * e2 + 24 * e1 * e3 + 12 * e2**2 + 24 * e4) / 24,
            5: (
                e1**5
                + 20 * e1**3 * e2
                + 60 * e1**2 * e3
                + 60 * e1 * (e2**2 + 2 * e4)
                + 120 * e2 * e3
                + 120 * e5
            )
            / 120,
            6: (
                e1**6
                + 30 * e1**4 * e2
                + 120 * e1**3 * e3
                + 180 * (e2**2 + 2 * e4) * e1**2
                + 720 * e1 * (e2 * e3 + e5)
                + 120 * e2**3
                + 720 * e2 * e4
                + 360 * e3**2
                + 720 * e6
            )
            / 720,
            7: (
                e1**7
                + 42 * e1**5 * e2
                + 210 * e1**4 * e3
                + 420 * e1**3 * (e2**2 + 2 * e4)
                + 2520 * e1**2 * (e2 * e3 + e5)
                + 840 * e1 * (e2**3 + 6 * e2 * e4 + 3 * e3**2 + 6 * e6)
                + 2520 * e2**2 * e3
                + 5040 * e2 * e5
                + 5040 * e3 * e4
                + 5040 * e7
            )
            / 5040,
        }
        assert d[0] == e1
        for s, expr in printed.items():
            assert sympy.expand(d[s - 1] - expr) == 0

    def test_gen_d_matches_script(self):
        frame = map_point(2)
        d = gen_d(3, Variant.PLAIN, frame)
        e = [script_E(s, frame) for s in range(1, 4)]
        assert abs(d[0] - e[0]) < 1e-25
        assert abs(d[2] - (e[0] ** 3 + 6 * e[0] * e[1] + 6 * e[2]) / 6) < 1e-13


class TestABCoefficients:
    @pytest.mark.parametrize("s", [1, 2])
    def test_a_at_turning_point(self, s):
        value = ab_coefficient("A", s, 1)
        assert abs(value - mp(A_AT_ONE[s])) < 1e-12

    @pytest.mark.parametrize("s", [0, 1])
    def test_b_at_turning_point(self, s):
        value = ab_coefficient("B", s, 1)
        assert abs(value - C * mp(B_AT_ONE[s])) < 1e-12

    @pytest.mark.parametrize("which,s", [("A", 3), ("B", 2), ("B", 3)])
    def test_higher_orders_near_turning_point(self, which, s):
        # the direct form cancels terms of size xi^(-2s-1) here
        with mpmath.workdps(80):
            for z in [mpmath.mpf("1.01"), mpmath.mpc(1, "0.01"), mpmath.mpf("0.99")]:
                taylor = ab_coefficient(which, s, z, branch=ABBranch.TAYLOR)
                direct = ab_coefficient(which, s, z, branch=ABBranch.DIRECT)
                assert abs(taylor - direct) < mpmath.mpf(10) ** -30 * abs(taylor)
            at_one = ab_coefficient(which, s, 1)
            assert at_one.imag == 0
            assert 1e-5 < at_one.real < 1e-2

    def test_a0(self):
        assert ab_coefficient("A", 0, 2) == 1

    def test_branch_selection(self):
        assert select_branch(1.05) is ABBranch.TAYLOR
        assert select_branch(0.5) is ABBranch.TAU_FORM
        assert select_branch(0.85) is ABBranch.TAU_FORM
        assert select_branch(1.1) is ABBranch.DIRECT
        assert select_branch(0.5 + 0.5j) is ABBranch.DIRECT

    @pytest.mark.parametrize("which,s", [("A", 1), ("A", 2), ("A", 3), ("B", 0), ("B", 1), ("B", 3)])
    def test_seam(self, which, s):
        for angle in [0, 0.25, 0.5, 1, 1.5]:
            # just outside the Taylor disc, so the default branch differs
            z = 1 + 1.01 * config.TAYLOR_RADIUS * mpmath.expjpi(angle)
            if angle == 1:
                z = mpmath.mpc(z.real)
            taylor = ab_coefficient(which, s, z, branch=ABBranch.TAYLOR)
            other = ab_coefficient(which, s, z)
            assert abs(taylor - other) <= 1e-11 * abs(taylor)

    def test_real_on_positive_axis(self):
        for x in [0.3, 0.95, 2.5]:
            for s in range(1, 4):
                assert abs(ab_coefficient("A", s, x).imag) < 1e-20
                assert abs(ab_coefficient("B", s, x).imag) < 1e-20

    def test_tau_form_matches_continuation(self):
        x = mpmath.mpf("0.5")
        tau_value = ab_coefficient("A", 1, x)
        continued = ab_coefficient("A", 1, mpmath.mpc(x, 1e-15))
        assert abs(tau_value - continued) < 1e-10
        b_tau = ab_coefficient("B", 0, x)
        b_continued = ab_coefficient("B", 0, mpmath.mpc(x, 1e-15))
        assert abs(b_tau - b_continued) < 1e-10

    def test_printed_tau_forms(self):
        for x in ["0.2", "0.5", "0.8"]:
            assert abs(ab_coefficient("A", 1, x) - a1_tau_form(x)) < 1e-18
            assert abs(ab_coefficient("B", 0, x) - b0_tau_form(x)) < 1e-18

    def test_range(self):
        with pytest.raises(TableRangeError):
            ab_coefficient("A", config.MAX_AB_ORDER + 1, 2)


class TestUpsilon:
    def test_turning_point(self):
        assert abs(upsilon1(1) - C / 70) < 1e-12

    def test_identity_form(self):
        for z in [2, 0.5, 1 + 2j]:
            f = map_point(z)
            alt = 3 * f.xi * E1(f.beta) / (2 * f.zeta**2) - mpmath.mpf(5) / (48 * f.zeta**2)
            assert abs(upsilon1(z) - alt) < 1e-13

    def test_equals_b0(self):
        for z in [0.4, 1.02, 3]:
            assert abs(upsilon1(z) - ab_coefficient("B", 0, z)) < 1e-18


class TestQ:
    def test_values_at_one(self):
        assert abs(q_poly(1, 1) - mpmath.mpf(1) / 96) < 1e-15
        assert abs(q_poly(2, 1) - mpmath.mpf(923) / 92160) < 1e-15
        assert q_poly(0, 3) == 3

    def test_decay(self):
        for s in range(1, 5):
            assert abs(q_poly(s, 1e4) / 1e4) < 1e-8

    def test_range(self):
        with pytest.raises(TableRangeError):
            q_poly(5, 1)

    def test_over_x(self):
        assert abs(q_over_x(1, 1) - mpmath.mpf(1) / 96) < 1e-15
        assert q_over_x(0, "2.5") == 1


KAPPA_TEXT = """
# kappa^_3 placeholder with two terms
kappa s=3
term 1/7 z^1 sigma^2 zetainv^0
term -2 z^1 sigma^0 zetainv^0   # trailing comment
"""


class TestKappa:
    def test_turning_point(self):
        assert abs(kappa_hat(1, 1) + mpmath.mpf(1) / 70) < 1e-12
        assert abs(kappa_hat(2, 1) + mpmath.mpf(3781) / 3185000) < 1e-12

    def test_small_z(self):
        z = mpmath.mpf("1e-4")
        k1 = kappa_hat(1, z)
        assert abs(k1 / (-z / 12) - 1) <= 1 / abs(mpmath.log(z))
        z = mpmath.mpf("1e-100")
        k2 = kappa_hat(2, z)
        assert abs(k2 / (z / 1440) - 1) <= 10 / abs(mpmath.log(z))

    def test_over_z(self):
        assert abs(kappa_hat_over_z(1, 1) + mpmath.mpf(1) / 70) < 1e-12
        assert abs(kappa_hat_over_z(1, "1e-8") + mpmath.mpf(1) / 12) < 0.1
        assert kappa_hat_over_z(0, "0.3") == 1

    def test_kappa0(self):
        assert abs(kappa_hat(0, "0.3") - mpmath.mpf("0.3")) < 1e-15

    def test_seam(self):
        table = KappaTable.builtin()
        for s in (1, 2):
            direct = kappa_hat(s, "0.89")
            series = reduce_at_turning(table.monomials(s), config.TAYLOR_TERMS)
            taylor = taylor_value(series, mpmath.mpf("-0.11")).real
            assert abs(direct - taylor) <= 1e-11 * abs(taylor)

    def test_builtin_matches_factored_form(self):
        z, s, w = sympy.symbols("z sigma zeta")
        factored = (
            -z
            * s
            / (46080 * w**5)
            * (
                200 * s**9 * (35 * z**2 + 221)
                + 80 * s**7 * w * (75 * z**2 + 982)
                - 4000 * s**6 * z**2
                + 24 * s**5 * w**2 * (45 * z**2 + 1543)
                - 200 * s**4 * w * (6 * z**2 - 5)
                + 600 * s**2 * w**2
                + 10 * s**3 * (25 * z**2 + 264 * w**3)
                - 250 * s * w
                - 5525
            )
        )
        table = KappaTable.builtin()
        built = sum(
            sympy.Rational(t.coeff.numerator, t.coeff.denominator)
            * z**t.z_pow
            * s**t.sigma_pow
            * w ** (-t.zetainv_pow)
            for t in table.terms(2)
        )
        assert sympy.simplify(sympy.expand(built - factored)) == 0
        k1 = z * s / (48 * w**2) * (5 - 10 * s**3 - 6 * s * w)
        built1 = sum(
            sympy.Rational(t.coeff.numerator, t.coeff.denominator)
            * z**t.z_pow
            * s**t.sigma_pow
            * w ** (-t.zetainv_pow)
            for t in table.terms(1)
        )
        assert sympy.simplify(sympy.expand(built1 - k1)) == 0

    def test_builtin_range(self):
        table = KappaTable.builtin()
        assert table.source is KappaSource.BUILT_IN
        assert table.max_order == 2
        with pytest.raises(TableRangeError):
            kappa_hat(3, 0.5, table)

    def test_parse_and_merge(self, tmp_path):
        parsed = KappaTable.parse(KAPPA_TEXT)
        assert parsed.source is KappaSource.IMPORTED
        assert list(parsed.entries) == [3]
        assert parsed.terms(3)[0].coeff == Fraction(1, 7)
        assert parsed.terms(3)[1].coeff == -2
        path = tmp_path / "kappa.txt"
        path.write_text(KAPPA_TEXT)
        table = KappaTable.load(path)
        assert table.max_order == 3
        assert list(table.entries) == [1, 2, 3]
        # the imported block is usable, and s=1 still comes from the built-in table
        assert kappa_hat(3, "0.5", table) != 0
        assert kappa_hat(1, "0.5", table) == kappa_hat(1, "0.5")

    @pytest.mark.parametrize(
        "text,line",
        [
            ("kappa s=3\nterm 1/x z^1 sigma^0 zetainv^0\n", 2),
            ("kappa s=3\nterm 1//2 z^1 sigma^0 zetainv^0\n", 2),
            ("kappa s=3\nterm 1/0 z^1 sigma^0 zetainv^0\n", 2),
            ("term 1 z^1 sigma^0 zetainv^0\n", 1),
            ("# ok\nkappa s=3\nfoo bar\n", 3),
            ("kappa s=3\nterm 1 z^1 sigma^0\n", 2),
            ("kappa s=3\nterm 1 z^1 sigma^0 zetainv^0\nkappa s=3\n", 3),
            ("kappa s=0\n", 1),
            ("kappa s=3\n", 1),
        ],
    )
    def test_parse_errors(self, text, line):
        with pytest.raises(KappaTableParseError) as err:
            KappaTable.parse(text)
        assert err.value.line_no == line
