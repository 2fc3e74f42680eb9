import mpmath
import pytest

from imbessel import config, oracle
from imbessel.errors import DomainError, RegionError, TableRangeError
from imbessel.lg_expansions import OrderSign, lg_I, lg_K

NU = 10


def k_reference(nu, z):
    # K_{i nu}(w) = pi i (I_{i nu}(w) - I_{-i nu}(w)) / (2 sinh(nu pi))
    with mpmath.workdps(40):
        w = nu * mpmath.mpc(z)
        plus = oracle.i_iv(nu, w, 1)
        minus = oracle.i_iv(nu, w, -1)
        return mpmath.pi * 1j * (plus - minus) / (2 * mpmath.sinh(nu * mpmath.pi))


def rel(approx, exact):
    with mpmath.workdps(40):
        return abs(approx.value - exact) / abs(exact)


class TestLgK:
    def test_against_oracle_real(self):
        with mpmath.workdps(40):
            exact = oracle.k_iv(NU, 2 * NU)
        assert rel(lg_K(NU, 2, n=5), exact) <= 1e-5
        assert rel(lg_K(NU, 2, n=8), exact) <= 1e-6

    def test_truncation_convergence(self):
        with mpmath.workdps(40):
            exact = oracle.k_iv(NU, 3 * NU)
        errors = [rel(lg_K(NU, 3, n=n), exact) for n in range(2, 7)]
        for a, b in zip(errors, errors[1:]):
            assert b <= a / 3

    def test_complex_point(self):
        z = mpmath.mpc(1.2, 0.5)
        assert rel(lg_K(20, z, n=8), k_reference(20, z)) <= 1e-4

    def test_imaginary_axis(self):
        z = mpmath.mpc(0, 0.5)
        assert rel(lg_K(20, z, n=8), k_reference(20, z)) <= 1e-4

    def test_on_cut(self):
        nu = 20
        value = lg_K(nu, 0.3, n=8)
        assert value.mantissa.imag == 0
        with mpmath.workdps(40):
            exact = oracle.k_iv(nu, 6)
            scale = mpmath.exp(-nu * mpmath.pi / 2)
            assert abs(value.value - exact) <= 1e-4 * scale

    def test_large_argument(self):
        nu, z = mpmath.mpf(5), mpmath.mpf(10) ** 4
        lead = mpmath.log(mpmath.pi / (2 * nu * z)) / 2 - nu * z
        assert abs(lg_K(nu, z).log_abs - lead) < 1e-3

    def test_conjugate_symmetry(self):
        for z in [mpmath.mpc(1, 1), mpmath.mpc(3, 0.2), mpmath.mpc(0.4, 2)]:
            below = lg_K(NU, mpmath.conj(z))
            above = lg_K(NU, z).conjugate()
            assert below.log_scale == above.log_scale
            assert below.mantissa == above.mantissa

    def test_real_result_for_real_argument(self):
        assert lg_K(NU, 2).mantissa.imag == 0

    def test_mantissa_normalised(self):
        for z in [2, mpmath.mpc(1, 3), 50]:
            m = abs(lg_K(NU, z).mantissa)
            assert 0.5 <= m <= 2

    def test_turning_point_excluded(self):
        with pytest.raises(RegionError):
            lg_K(NU, 1.1)
        with pytest.raises(RegionError):
            lg_K(NU, mpmath.mpc(1, 0.2))

    def test_exclusion_radius_override(self):
        assert lg_K(NU, 1.2, exclusion_radius=0.1).log_abs < 0

    @pytest.mark.parametrize("z", [0, -1, mpmath.mpc(-0.5, 1)])
    def test_domain(self, z):
        with pytest.raises(DomainError):
            lg_K(NU, z)

    def test_nu_positive(self):
        with pytest.raises(DomainError):
            lg_K(0, 2)

    @pytest.mark.parametrize("n", [1, 14])
    def test_term_limit(self, n):
        with pytest.raises(TableRangeError):
            lg_K(NU, 2, n=n)


class TestLgI:
    def test_plus_against_oracle(self):
        with mpmath.workdps(40):
            exact = oracle.i_iv(NU, 2 * NU, 1)
        assert rel(lg_I(NU, 2, n=6), exact) <= 1e-4

    def test_minus_on_imaginary_axis(self):
        z = mpmath.mpc(0, 0.5)
        with mpmath.workdps(40):
            exact = oracle.i_iv(20, 20 * z, -1)
        assert rel(lg_I(20, z, n=8, order_sign=OrderSign.MINUS), exact) <= 1e-4

    def test_modulus_on_imaginary_axis(self):
        # |J_{i nu}(nu x)| = e^(nu pi/2) |I_{i nu}(i nu x)|
        x = mpmath.mpf(1.5)
        value = lg_I(NU, mpmath.mpc(0, x), n=9)
        with mpmath.workdps(40):
            exact = abs(oracle.j_iv(NU, NU * x))
            modulus = mpmath.exp(value.log_abs + NU * mpmath.pi / 2)
            assert abs(modulus - exact) / exact <= 1e-8

    def test_connection_reproduces_k(self):
        # the I_{i nu} term is e^(-nu pi) smaller here, below working precision
        nu, z = 20, mpmath.mpc(0, 0.5)
        plus = lg_I(nu, z, n=6)
        minus = lg_I(nu, z, n=6, order_sign=OrderSign.MINUS)
        k = lg_K(nu, z, n=6)
        with mpmath.workdps(30):
            combined = (
                mpmath.pi * 1j * (plus.value - minus.value) / (2 * mpmath.sinh(nu * mpmath.pi))
            )
            assert abs(combined - k.value) <= 1e-20 * abs(k.value)

    def test_large_argument(self):
        nu, z = mpmath.mpf(5), mpmath.mpf(10) ** 4
        lead = -mpmath.log(2 * mpmath.pi * nu * z) / 2 + nu * z
        assert abs(lg_I(nu, z).log_abs - lead) < 1e-3

    def test_reflection(self):
        z = mpmath.mpc(0.8, 1.3)
        for sign in OrderSign:
            below = lg_I(NU, mpmath.conj(z), order_sign=sign)
            above = lg_I(NU, z, order_sign=sign.flipped).conjugate()
            assert below.log_scale == above.log_scale
            assert below.mantissa == above.mantissa

    def test_orders_conjugate_on_cut(self):
        plus = lg_I(NU, 0.4)
        minus = lg_I(NU, 0.4, order_sign=OrderSign.MINUS)
        assert plus.log_scale == minus.log_scale
        with mpmath.workdps(config.WORKING_DIGITS):
            assert abs(plus.mantissa - mpmath.conj(minus.mantissa)) < 1e-25

    def test_turning_point_excluded(self):
        with pytest.raises(RegionError):
            lg_I(NU, 0.9, order_sign=OrderSign.MINUS)
