"""Sigma evaluators: normalization, quasi-periodicity, wp properties."""
import numpy as np
import pytest

from g2ell.curves import WeierstrassCurve, curve_v_from_alpha_beta, elliptic_targets
from g2ell.errors import OnLattice, OnThetaDivisor
from g2ell.periods import periods_g2, transform_symplectic
from g2ell.sigma import (
    CharacteristicG2,
    JacobiContext,
    SigmaG1Evaluator,
    SigmaG2Evaluator,
    odd_characteristics,
)


@pytest.fixture(scope="module")
def sig23(ctx23):
    return ctx23.sig_v


class TestCharacteristics:
    def test_six_odd(self):
        odds = odd_characteristics()
        assert len(odds) == 6
        assert all(c.parity() == 1 for c in odds)

    def test_selected_delta_is_conventional(self, sig23):
        assert sig23.delta == CharacteristicG2((0.5, 0.5), (1.0, 0.5))


class TestSigmaG2:
    def test_leading_expansion_limits(self, sig23):
        # sigma(t e3)/(-t) and 3 sigma(t e1)/t^3 tend to 1; Richardson
        # removes the curve's own t^2 series terms.  The cubic leg runs at a
        # larger base scale because dividing by t^3 amplifies rounding noise.
        def rich(ratio, t0):
            r1, r2, r4 = ratio(t0), ratio(t0 / 2), ratio(t0 / 4)
            first = (4 * r2 - r1) / 3.0
            second = (4 * r4 - r2) / 3.0
            return (16 * second - first) / 15.0

        lin = rich(lambda t: sig23.sigma(np.array([0.0, t])) / (-t), 1e-3)
        cub = rich(lambda t: 3.0 * sig23.sigma(np.array([t, 0.0])) / t**3, 1e-2)
        assert abs(lin - 1.0) < 1e-6
        assert abs(cub - 1.0) < 1e-6

    def test_direct_ratio_carries_series_term(self, sig23):
        # the raw ratio at t deviates by the genuine series coefficient, so
        # it scales as t^2 (this is what limits the direct reading at 1e-3)
        dev = lambda t: abs(sig23.sigma(np.array([0.0, t])) / (-t) - 1.0)
        assert abs(dev(1e-3) / dev(5e-4) - 4.0) < 0.05

    def test_oddness(self, sig23, rng):
        for _ in range(5):
            u = rng.normal(0, 0.4, 2) + 1j * rng.normal(0, 0.3, 2)
            assert abs(sig23.sigma(u) + sig23.sigma(-u)) < 1e-10 * max(1e-30, abs(sig23.sigma(u)))

    def test_quasi_periodicity_all_generators(self, sig23, rng):
        worst = 0.0
        for m1a in (0, 1):
            for m1b in (0, 1):
                for m2a in (0, 1):
                    for m2b in (0, 1):
                        m1 = np.array([m1a, m1b])
                        m2 = np.array([m2a, m2b])
                        omega = sig23.periods.omega_a @ m1 + sig23.periods.omega_b @ m2
                        for _ in range(3):
                            u = rng.normal(0, 0.3, 2) + 1j * rng.normal(0, 0.3, 2)
                            lhs = sig23.sigma(u + omega) / sig23.sigma(u)
                            rhs = sig23.quasi_period_factor(u, m1, m2)
                            worst = max(worst, abs(lhs - rhs) / abs(rhs))
        assert worst < 1e-7

    def test_wp_periodicity_and_parity(self, sig23, rng):
        u = rng.normal(0, 0.3, 2) + 1j * rng.normal(0, 0.3, 2)
        omega = sig23.periods.omega_a @ np.array([1, 0]) + sig23.periods.omega_b @ np.array([0, 1])
        w0 = sig23.wp_all(u, reduce=False)
        w1 = sig23.wp_all(u + omega, reduce=False)
        wn = sig23.wp_all(-u, reduce=False)
        for key in [(1, 1), (1, 3), (3, 3)]:
            assert abs(w0[key] - w1[key]) < 1e-7 * max(1.0, abs(w0[key]))
            assert abs(w0[key] - wn[key]) < 1e-9 * max(1.0, abs(w0[key]))
        for key in [(1, 1, 1), (1, 1, 3), (1, 3, 3), (3, 3, 3)]:
            assert abs(w0[key] + wn[key]) < 1e-9 * max(1.0, abs(w0[key]))

    def test_on_theta_divisor_raises(self, sig23):
        with pytest.raises(OnThetaDivisor):
            sig23.wp_all(np.zeros(2))

    def test_wp_index_order_irrelevant(self, sig23):
        u = np.array([0.21 + 0.04j, -0.17 + 0.09j])
        assert sig23.wp((3, 1), u) == sig23.wp((1, 3), u)
        assert sig23.wp((3, 1, 1), u) == sig23.wp((1, 1, 3), u)

    def test_basis_independence(self, curve23, sig23, rng):
        # periods from a symplectically transformed homology basis give the
        # same sigma function after recalibration
        per = periods_g2(curve23)
        shift = np.block([[np.eye(2), np.array([[1, 1], [1, 0]])], [np.zeros((2, 2)), np.eye(2)]]).astype(int)
        swap = np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]]).astype(int)
        for s in (shift, swap @ shift):
            other = SigmaG2Evaluator(curve23, periods=transform_symplectic(per, s))
            for _ in range(3):
                u = rng.normal(0, 0.3, 2) + 1j * rng.normal(0, 0.3, 2)
                a, b = sig23.sigma(u), other.sigma(u)
                assert abs(a - b) < 1e-7 * max(1.0, abs(a))
                wa = sig23.wp_all(u)
                wb = other.wp_all(u)
                for key in wa:
                    assert abs(wa[key] - wb[key]) < 1e-7 * max(1.0, abs(wa[key]))


class TestSigmaG1:
    def test_linear_expansion(self, ctx23):
        ev = ctx23.sig_e[0]
        for t in (1e-2, 1e-3):
            assert abs(ev.sigma(t) / t - 1.0) < 2e-5  # deviation is the t^2 series term

    def test_wp_differential_equation(self, ctx23, rng):
        for ev in ctx23.sig_e:
            for _ in range(10):
                u = rng.normal(0, 0.4) + 1j * rng.normal(0, 0.4)
                w, wp = ev.wp_with_prime(u)
                resid = abs(wp**2 - 4.0 * complex(ev.cubic.rhs(w)))
                assert resid < 1e-8 * max(1.0, abs(wp) ** 2)

    def test_wp_parity_and_periodicity(self, ctx23, rng):
        ev = ctx23.sig_e[0]
        u = 0.21 + 0.17j
        per = ev.periods
        assert abs(ev.wp(u) - ev.wp(-u)) < 1e-10 * max(1.0, abs(ev.wp(u)))
        assert abs(ev.wp(u + per.omega_a, reduce=False) - ev.wp(u, reduce=False)) < 1e-8 * max(1.0, abs(ev.wp(u)))
        assert abs(ev.wp_prime(u) + ev.wp_prime(-u)) < 1e-10 * max(1.0, abs(ev.wp_prime(u)))

    def test_half_period_values_are_roots(self):
        ev = SigmaG1Evaluator(WeierstrassCurve(0.0, -1.0, 0.0))
        per = ev.periods
        halves = [per.omega_prime, per.omega_prime + per.omega_second, per.omega_second]
        values = sorted(round(float(ev.wp(h).real), 6) for h in halves)
        assert values == [-1.0, 0.0, 1.0]

    def test_on_lattice_raises(self, ctx23):
        with pytest.raises(OnLattice):
            ctx23.sig_e[0].wp(0.0, reduce=False)

    def test_al_squares(self, ctx23, rng):
        ev = ctx23.sig_e[1]
        per = ev.periods
        halves = {1: per.omega_prime, 2: per.omega_prime + per.omega_second, 3: per.omega_second}
        for _ in range(4):
            u = rng.normal(0, 0.3) + 1j * rng.normal(0, 0.3)
            for j, h in halves.items():
                lhs = ev.al(j, u) ** 2
                rhs = ev.wp(u) - ev.wp(h)
                assert abs(lhs - rhs) < 1e-8 * max(1.0, abs(rhs))
                even = ev.al(j, -u) ** 2
                assert abs(lhs - even) < 1e-8 * max(1.0, abs(lhs))

    def test_quasi_periodicity(self, ctx23, rng):
        ev = ctx23.sig_e[0]
        u = 0.11 - 0.23j
        for m1, m2 in ((1, 0), (0, 1), (1, 1), (2, -1)):
            omega = m1 * ev.periods.omega_a + m2 * ev.periods.omega_b
            lhs = ev.sigma(u + omega) / ev.sigma(u)
            rhs = ev.quasi_period_factor(u, m1, m2)
            assert abs(lhs - rhs) < 1e-9 * abs(rhs)


class TestJacobi:
    def test_values_at_zero(self, ctx23):
        sn, cn, dn = ctx23.jac[0].sn_cn_dn(0.0)
        assert abs(sn) < 1e-12 and abs(cn - 1) < 1e-12 and abs(dn - 1) < 1e-12

    def test_algebraic_identities(self, ctx23, rng):
        for jac in ctx23.jac:
            m = jac.modulus
            for _ in range(5):
                u = rng.normal(0, 0.5) + 1j * rng.normal(0, 0.3)
                sn, cn, dn = jac.sn_cn_dn(u)
                assert abs(sn**2 + cn**2 - 1.0) < 1e-10 * max(1.0, abs(sn) ** 2)
                assert abs(dn**2 + m**2 * sn**2 - 1.0) < 1e-10 * max(1.0, abs(sn) ** 2)

    def test_sn_parametrizes_quartic(self, ctx23):
        jac = ctx23.jac[0]
        m = jac.modulus
        u, h = 0.37 + 0.21j, 1e-5
        sn = jac.sn_cn_dn(u)[0]
        snp = (jac.sn_cn_dn(u + h)[0] - jac.sn_cn_dn(u - h)[0]) / (2 * h)
        assert abs(snp**2 - (1 - sn**2) * (1 - m**2 * sn**2)) < 1e-8

    def test_modulus_matches_kappa(self, ctx23):
        assert ctx23.modulus_residual[0] < 1e-10
        assert ctx23.modulus_residual[1] < 1e-10

    def test_sn_oddness_cn_dn_even(self, ctx23):
        jac = ctx23.jac[1]
        u = 0.19 - 0.07j
        sn, cn, dn = jac.sn_cn_dn(u)
        sn2, cn2, dn2 = jac.sn_cn_dn(-u)
        assert abs(sn + sn2) < 1e-12
        assert abs(cn - cn2) < 1e-12
        assert abs(dn - dn2) < 1e-12

    def test_pole_of_sn(self, ctx23):
        from g2ell.errors import PoleOfSn

        jac = ctx23.jac[0]
        # theta_01 vanishes at z = tau/2, i.e. u = pi theta00^2 tau / 2
        pole = np.pi * jac._t00_0**2 * jac.tau / 2.0
        with pytest.raises(PoleOfSn):
            jac.sn_cn_dn(pole)
