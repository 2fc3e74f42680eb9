import mpmath
import numpy as np
import pytest
from scipy import special

from imbessel import config
from imbessel.airy_core import (
    AiryKind,
    ExpForm,
    ai_expform,
    airy_eval,
    airy_neg_zero,
    airy_rotated,
)
from imbessel.branch_maps import map_point
from imbessel.errors import DomainError, TableRangeError

E_PI_3 = mpmath.expjpi(mpmath.mpf(1) / 3)
E_PI_6 = mpmath.expjpi(mpmath.mpf(1) / 6)


def rel(a, b):
    return abs(a - b) / abs(b)


def random_points(n, radius, seed):
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.random(n))
    theta = 2 * np.pi * rng.random(n)
    return [complex(a * np.cos(t), a * np.sin(t)) for a, t in zip(r, theta)]


class TestAiryEval:
    def test_value_at_zero(self):
        v = airy_eval(0)
        with mpmath.workdps(30):
            expected = mpmath.power(3, -mpmath.mpf(2) / 3) / mpmath.gamma(mpmath.mpf(2) / 3)
            assert abs(v.ai - expected) < 1e-25
            assert abs(v.ai - mpmath.mpf("0.35502805388781723926")) < 1e-19

    @pytest.mark.parametrize("t", [-10.0, -4.6, -3.0, -1.0, 0.5, 2.0, 4.4, 4.6, 10.0])
    def test_matches_scipy(self, t):
        ai, aip, bi, bip = special.airy(t)
        v = airy_eval(t)
        for ours, ref in [(v.ai, ai), (v.ai_prime, aip), (v.bi, bi), (v.bi_prime, bip)]:
            assert abs(ours - ref) <= 1e-12 * max(1.0, abs(ref))

    def test_wronskian(self):
        for t in random_points(50, 8.0, seed=11):
            v = airy_eval(t)
            assert rel(v.wronskian, 1 / mpmath.pi) < 1e-12

    def test_wronskian_with_cancellation(self):
        # Ai and Bi are both large here, so the products cancel
        v = airy_eval(mpmath.mpc(-2.05, -5.27))
        assert rel(v.wronskian, 1 / mpmath.pi) < 1e-14

    @pytest.mark.parametrize("angle", [0, 0.25, 0.5, 0.75, 1, 1.25, 1.5, 1.75])
    def test_seam(self, angle):
        t = config.AIRY_SEAM * mpmath.expjpi(angle)
        series = airy_eval(t, use_series=True)
        asymptotic = airy_eval(t, use_series=False)
        assert rel(series.ai, asymptotic.ai) < 1e-12
        assert rel(series.ai_prime, asymptotic.ai_prime) < 1e-12
        assert rel(series.bi, asymptotic.bi) < 1e-12

    def test_argument_limit(self):
        with pytest.raises(DomainError):
            airy_eval(2e5)


class TestAiryRotated:
    @pytest.mark.parametrize("t", [0, 2, -3, 1 + 1j])
    def test_connection_formulas(self, t):
        v = airy_eval(t)
        a1 = airy_rotated(1, t)
        am1 = airy_rotated(-1, t)
        assert abs(v.ai - E_PI_3 * a1 - mpmath.conj(E_PI_3) * am1) < 1e-13
        assert abs(v.bi - mpmath.conj(E_PI_6) * a1 - E_PI_6 * am1) < 1e-13

    def test_connection_at_random_points(self):
        for t in random_points(20, 5.0, seed=3):
            residual = airy_eval(t).ai - E_PI_3 * airy_rotated(1, t) - mpmath.conj(
                E_PI_3
            ) * airy_rotated(-1, t)
            assert abs(residual) < 1e-13 * max(1, abs(airy_eval(t).ai))

    def test_identity_rotation(self):
        t = mpmath.mpc(1.5, -0.7)
        assert airy_rotated(0, t) == airy_eval(t).ai

    def test_conjugate_symmetry(self):
        for t in [1.2 + 0.4j, -2 + 1j, 3j]:
            lhs = airy_rotated(1, mpmath.conj(t))
            rhs = mpmath.conj(airy_rotated(-1, t))
            assert abs(lhs - rhs) < 1e-20

    def test_chain_rule(self):
        t = mpmath.mpc(1.3, 0.4)
        h = mpmath.mpf("1e-10")
        with mpmath.workdps(30):
            fd = (airy_rotated(1, t + h) - airy_rotated(1, t - h)) / (2 * h)
        assert abs(airy_rotated(1, t, derivative=True) - fd) < 1e-15
        raw = airy_rotated(1, t, derivative=True, chain_rule=False)
        assert abs(raw * mpmath.expjpi(-mpmath.mpf(2) / 3) - fd) < 1e-15

    def test_bad_index(self):
        with pytest.raises(DomainError):
            airy_rotated(2, 1)


class TestAiryNegZero:
    def test_first_zeros_match_scipy(self):
        a, _, _, _ = special.ai_zeros(5)
        b, _, _, _ = special.bi_zeros(5)
        for m in range(1, 6):
            assert abs(airy_neg_zero(AiryKind.AI, m) - a[m - 1]) < 1e-12
            assert abs(airy_neg_zero(AiryKind.BI, m) - b[m - 1]) < 1e-12

    def test_first_ai_zero(self):
        with mpmath.workdps(30):
            a1 = mpmath.mpf("-2.33810741045976703849")
        assert abs(airy_neg_zero(AiryKind.AI, 1) - a1) < 1e-20

    def test_ordering(self):
        zeros = [airy_neg_zero(AiryKind.AI, m) for m in range(1, 41)]
        assert zeros[0] < 0
        assert all(b < a for a, b in zip(zeros, zeros[1:]))

    @pytest.mark.slow
    def test_ordering_to_200(self):
        zeros = [airy_neg_zero(AiryKind.AI, m) for m in range(1, 201)]
        assert all(b < a < 0 for a, b in zip(zeros, zeros[1:]))

    def test_large_index_scale(self):
        a = airy_neg_zero(AiryKind.AI, 200)
        assert abs(abs(a) ** 1.5 / (mpmath.mpf(3) / 2 * 200 * mpmath.pi) - 1) < 0.01

    def test_residual(self):
        for m in range(1, 11):
            v = airy_eval(airy_neg_zero(AiryKind.AI, m))
            assert abs(v.ai) <= 1e-12 * abs(v.ai_prime)

    def test_index(self):
        with pytest.raises(DomainError):
            airy_neg_zero(AiryKind.AI, 0)


class TestExpForm:
    nu = mpmath.mpf(10)

    def argument(self, frame, nu=None):
        nu = nu or self.nu
        return mpmath.cbrt(nu) ** 2 * frame.zeta

    def test_truncation_decay(self):
        frame = map_point(3)
        exact = airy_eval(self.argument(frame))
        for which, ref in [(ExpForm.AI0, exact.ai), (ExpForm.AI0_PRIME, exact.ai_prime)]:
            dev2 = rel(ai_expform(2, self.nu, frame, which), ref)
            dev3 = rel(ai_expform(3, self.nu, frame, which), ref)
            assert dev3 <= 0.3 * dev2

    def test_leading_term_far_out(self):
        frame = map_point(1000)
        lead = mpmath.exp(-self.nu * frame.xi) / (
            2 * mpmath.sqrt(mpmath.pi) * mpmath.root(self.nu, 6) * frame.zeta_quarter()
        )
        assert rel(ai_expform(4, self.nu, frame, ExpForm.AI0), lead) < 1e-4

    def test_rotated_plus(self):
        frame = map_point(3)
        t = self.argument(frame)
        assert rel(ai_expform(6, self.nu, frame, ExpForm.AI1), airy_rotated(1, t)) < 1e-7
        assert (
            rel(
                ai_expform(6, self.nu, frame, ExpForm.AI1_PRIME),
                airy_rotated(1, t, derivative=True),
            )
            < 1e-7
        )

    def test_rotated_plus_phase(self):
        value = ai_expform(2, self.nu, map_point(3), ExpForm.AI1)
        assert abs(mpmath.arg(value) - mpmath.pi / 6) < 1e-14

    def test_rotated_minus_on_cut(self):
        nu = mpmath.mpf(20)
        frame = map_point(0.5)
        t = self.argument(frame, nu)
        assert rel(ai_expform(6, nu, frame, ExpForm.AIM1), airy_rotated(-1, t)) < 1e-5
        assert (
            rel(
                ai_expform(6, nu, frame, ExpForm.AIM1_PRIME),
                airy_rotated(-1, t, derivative=True),
            )
            < 1e-5
        )

    def test_too_close_to_turning_point(self):
        with pytest.raises(DomainError):
            ai_expform(3, 1, map_point(1.05), ExpForm.AI0)

    def test_sector(self):
        with pytest.raises(DomainError):
            ai_expform(3, 20, map_point(0.5), ExpForm.AI1)
        with pytest.raises(DomainError):
            ai_expform(3, 20, map_point(3), ExpForm.AIM1)

    def test_order_limit(self):
        with pytest.raises(TableRangeError):
            ai_expform(9, self.nu, map_point(3), ExpForm.AI0)
