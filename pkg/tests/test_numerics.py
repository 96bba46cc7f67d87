"""Quadrature and lattice-membership kernels."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from g2ell.errors import DegenerateLattice, InvalidParameters, NonConvergence, SingularSample
from g2ell.numerics import PathSegment, Tolerance, integrate_segment, lattice_member

TOL = Tolerance(abs_tol=1e-12, rel_tol=1e-12)


class TestIntegrateSegment:
    def test_constant(self):
        seg = PathSegment(0.0, 1.0)
        assert abs(integrate_segment(lambda z: np.ones_like(z), seg, TOL) - 1.0) < 1e-12

    def test_left_inverse_sqrt(self):
        # closed form: integral of z^(-1/2) over [0, 1] is 2
        seg = PathSegment(0.0, 1.0, singular_left=True)
        val = integrate_segment(lambda z: 1.0 / np.sqrt(z), seg, TOL)
        assert abs(val - 2.0) < 1e-11

    def test_both_ends_arcsine(self):
        # oracle: substitute z = sin^2(t/2)-style, integral is exactly pi
        seg = PathSegment(0.0, 1.0, singular_left=True, singular_right=True)
        val = integrate_segment(lambda z: 1.0 / np.sqrt(z * (1.0 - z)), seg, TOL)
        assert abs(val - np.pi) < 1e-11

    def test_complex_segment_polynomial(self):
        # antiderivative oracle for a complex-coefficient cubic
        a, b = 0.3 - 0.2j, 1.1 + 0.7j
        coeffs = np.array([0.4 - 1.0j, 0.0, 2.0 + 0.5j, -0.3j])

        def f(z):
            return np.polyval(coeffs, z)

        anti = np.polyint(coeffs)
        expected = np.polyval(anti, b) - np.polyval(anti, a)
        val = integrate_segment(f, PathSegment(a, b), TOL)
        assert abs(val - expected) < 1e-12

    def test_path_reversal_negates(self):
        seg = PathSegment(0.2 + 0.1j, 1.5 - 0.4j)
        f = lambda z: np.exp(z) / (z + 3.0)
        forward = integrate_segment(f, seg, TOL)
        backward = integrate_segment(f, seg.reversed(), TOL)
        assert abs(forward + backward) < 1e-12

    @settings(max_examples=20, deadline=None)
    @given(
        a=st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False),
        b=st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False),
    )
    def test_linearity(self, a, b):
        seg = PathSegment(0.0, 1.0 + 0.5j)
        f = lambda z: np.sin(z)
        g = lambda z: z**2 + 1.0
        combo = integrate_segment(lambda z: a * f(z) + b * g(z), seg, TOL)
        parts = a * integrate_segment(f, seg, TOL) + b * integrate_segment(g, seg, TOL)
        assert abs(combo - parts) < 10 * 1e-11 * max(1.0, abs(a) + abs(b))

    def test_singular_sample_raises(self):
        seg = PathSegment(0.0, 1.0)

        def f(z):
            out = 1.0 / (np.real(z) - 0.5)  # real pole on the path -> inf/nan samples
            return np.where(np.abs(np.real(z) - 0.5) < 0.2, np.inf, out)

        with pytest.raises(SingularSample):
            integrate_segment(f, seg, TOL)

    def test_nonconvergence_budget(self):
        seg = PathSegment(0.0, 1.0, singular_left=True)
        tiny = Tolerance(abs_tol=1e-12, rel_tol=0.0, max_refinements=1)
        with pytest.raises(NonConvergence):
            integrate_segment(lambda z: 1.0 / np.sqrt(z) * np.cos(40 * z), seg, tiny)

    def test_degenerate_segment_rejected(self):
        with pytest.raises(InvalidParameters):
            PathSegment(1.0, 1.0)


class TestLatticeMember:
    def setup_method(self):
        rng = np.random.default_rng(5)
        self.cols = rng.normal(size=(2, 4)) + 1j * rng.normal(size=(2, 4))

    def test_zero_vector(self):
        m = lattice_member(np.zeros(2), self.cols)
        assert m is not None and np.all(m == 0)

    def test_exact_combination(self):
        v = self.cols[:, 0] + 2 * self.cols[:, 2]
        m = lattice_member(v, self.cols)
        assert m is not None
        assert list(m) == [1, 0, 2, 0]

    def test_half_lattice_rejected(self):
        # the real solve gives (1/2, 0, 0, 0), rejected by integer rounding
        v = self.cols[:, 0] / 2.0
        assert lattice_member(v, self.cols) is None

    def test_translation_consistency(self):
        rng = np.random.default_rng(6)
        m_shift = np.array([1, -2, 0, 3])
        v = self.cols @ np.array([2, 0, -1, 1])
        m1 = lattice_member(v, self.cols)
        m2 = lattice_member(v + self.cols @ m_shift, self.cols)
        assert m1 is not None and m2 is not None
        assert list(m2 - m1) == list(m_shift)

    def test_degenerate_lattice_raises(self):
        cols = np.ones((2, 4), dtype=complex)
        with pytest.raises(DegenerateLattice):
            lattice_member(np.zeros(2), cols)

    @settings(max_examples=25, deadline=None)
    @given(m=st.lists(st.integers(min_value=-4, max_value=4), min_size=4, max_size=4))
    def test_recovers_integer_coordinates(self, m):
        v = self.cols @ np.array(m)
        got = lattice_member(v, self.cols)
        assert got is not None
        assert list(got) == m


class TestTolerance:
    def test_needs_positive_target(self):
        with pytest.raises(InvalidParameters):
            Tolerance(abs_tol=0.0, rel_tol=0.0)

    def test_negative_rejected(self):
        with pytest.raises(InvalidParameters):
            Tolerance(abs_tol=-1.0)
