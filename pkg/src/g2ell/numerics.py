"""Complex-arithmetic kernels shared by the rest of the package.

Three services live here:

* Gauss-Legendre quadrature of analytic integrands along straight segments
  in the complex plane, with inverse-square-root endpoint singularities
  removed by trigonometric substitution,
* node-doubling refinement control, and
* membership tests for vectors against a rank-2g period lattice in C^g.

Everything is a pure function of its arguments; there is no shared mutable
state, so concurrent use is safe.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateLattice, InvalidParameters, NonConvergence, SingularSample

__all__ = [
    "PathSegment",
    "Tolerance",
    "integrate_segment",
    "lattice_member",
    "gauss_nodes",
]


@dataclass(frozen=True)
class Tolerance:
    """Convergence targets for iterative numerics.

    At least one of ``abs_tol`` and ``rel_tol`` must be positive; refinement
    stops once successive estimates differ by less than
    ``max(abs_tol, rel_tol * |estimate|)``.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_refinements: int = 16

    def __post_init__(self) -> None:
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise InvalidParameters("tolerances must be nonnegative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise InvalidParameters("at least one of abs_tol, rel_tol must be positive")
        if self.max_refinements < 1:
            raise InvalidParameters("max_refinements must be a positive integer")

    def met(self, delta: float, scale: float) -> bool:
        return delta < max(self.abs_tol, self.rel_tol * abs(scale))


@dataclass(frozen=True)
class PathSegment:
    """Straight segment [a, b] in the complex plane.

    ``singular_left``/``singular_right`` flag endpoints where the integrand
    blows up like (z - end)^(-1/2); those ends are handled by substitution.
    """

    a: complex
    b: complex
    singular_left: bool = False
    singular_right: bool = False

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise InvalidParameters("segment endpoints must be distinct")

    def reversed(self) -> "PathSegment":
        return PathSegment(self.b, self.a, self.singular_right, self.singular_left)


#: largest Gauss-Legendre rule used anywhere; leggauss beyond this is slow
#: (dense companion eigensolve) and a smooth integrand never needs it
MAX_GAUSS_NODES = 1024


@lru_cache(maxsize=64)
def gauss_nodes(n: int) -> tuple:
    """Gauss-Legendre nodes/weights on [0, 1], cached per node count."""
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) / 2.0, w / 2.0


def _substituted(seg: PathSegment) -> tuple:
    """Map the segment onto t in [0, 1] so the integrand is smooth.

    Returns (x_of_t, dx_dt_of_t) as callables on node arrays.  sin^2 ramps
    give dx/dt a simple zero at a flagged end, cancelling a (z-end)^(-1/2)
    blow-up; the double-flagged case uses the half-angle version of the same
    substitution at both ends at once.
    """
    a, b = seg.a, seg.b
    span = b - a
    if seg.singular_left and seg.singular_right:
        mid, half = (a + b) / 2.0, span / 2.0

        def x_of_t(t):
            return mid + half * np.sin(np.pi * (t - 0.5))

        def dx_dt(t):
            return half * np.pi * np.cos(np.pi * (t - 0.5))

    elif seg.singular_left:

        def x_of_t(t):
            return a + span * np.sin(np.pi * t / 2.0) ** 2

        def dx_dt(t):
            return span * (np.pi / 2.0) * np.sin(np.pi * t)

    elif seg.singular_right:

        def x_of_t(t):
            return b - span * np.sin(np.pi * (1.0 - t) / 2.0) ** 2

        def dx_dt(t):
            return span * (np.pi / 2.0) * np.sin(np.pi * (1.0 - t))

    else:

        def x_of_t(t):
            return a + span * t

        def dx_dt(t):
            return np.full_like(t, span, dtype=complex)

    return x_of_t, dx_dt


def integrate_segment(
    f: Callable[[np.ndarray], np.ndarray],
    seg: PathSegment,
    tol: Tolerance = Tolerance(),
    n0: int = 16,
) -> complex:
    """Integrate ``f`` along ``seg`` by refined Gauss-Legendre quadrature.

    ``f`` receives a complex numpy array of sample points ordered along the
    segment and must return the integrand values.  Node count doubles until
    two successive estimates agree to ``tol``; flagged endpoint square-root
    singularities are removed before sampling, so ``f`` is never evaluated
    at the endpoints themselves.
    """
    x_of_t, dx_dt = _substituted(seg)
    previous = None
    n = n0
    for _ in range(tol.max_refinements):
        t, w = gauss_nodes(n)
        x = x_of_t(t)
        fx = np.asarray(f(x), dtype=complex)
        if not np.all(np.isfinite(fx)):
            raise SingularSample(
                f"integrand not finite on segment [{seg.a}, {seg.b}] at {n} nodes"
            )
        estimate = complex(np.sum(fx * dx_dt(t) * w))
        if previous is not None and tol.met(abs(estimate - previous), abs(estimate)):
            return estimate
        if n >= MAX_GAUSS_NODES:
            break
        previous = estimate
        n *= 2
    raise NonConvergence(
        f"quadrature on [{seg.a}, {seg.b}] did not settle "
        f"(reached {n} nodes)"
    )


def lattice_member(
    v: np.ndarray,
    columns: np.ndarray,
    tol: Tolerance = Tolerance(),
    int_tol: float = 1e-6,
) -> Optional[np.ndarray]:
    """Integer coordinates of ``v`` in the lattice spanned by ``columns``.

    ``columns`` is a g x 2g complex matrix whose columns span C^g over R.
    Returns the integer vector m with ``v = columns @ m`` when the real
    solve lands within ``int_tol`` of an integer vector componentwise (and
    the residual passes ``tol``); returns None otherwise.
    """
    v = np.asarray(v, dtype=complex).reshape(-1)
    columns = np.asarray(columns, dtype=complex)
    g = v.shape[0]
    if columns.shape != (g, 2 * g):
        raise InvalidParameters(f"expected {g}x{2 * g} lattice columns, got {columns.shape}")
    real_system = np.vstack([columns.real, columns.imag])
    cond = np.linalg.cond(real_system)
    if not np.isfinite(cond) or cond > 1e12:
        raise DegenerateLattice(f"lattice columns nearly dependent (cond={cond:.3g})")
    rhs = np.concatenate([v.real, v.imag])
    coeffs = np.linalg.solve(real_system, rhs)
    m = np.rint(coeffs)
    if np.max(np.abs(coeffs - m)) >= int_tol:
        return None
    residual = np.linalg.norm(v - columns @ m)
    scale = max(1.0, float(np.max(np.abs(columns))))
    if not tol.met(residual, scale):
        return None
    return m.astype(np.int64)
