"""Theta functions with characteristics, genus 1 and 2.

The series are summed over a block of lattice points centered on the peak of
the Gaussian envelope, with the truncation radius chosen from the envelope's
decay and then validated by doubling until two evaluations agree.  The block
accumulation itself lives in a compiled Cython kernel when available, with a
NumPy fallback selected at import time (``BACKEND`` says which one won).

Derivatives are always termwise: the p-th z-derivative of a theta term just
multiplies it by (2 pi i (n + eps))^p, so one pass over the block yields the
value and any batch of partials at once.
"""
from __future__ import annotations

from typing import Optional, Tuple

import numpy as np

from .errors import NonConvergence
from .numerics import Tolerance

try:  # compiled kernel, built by setup.py when Cython + a C compiler exist
    from . import _theta_cy as _kernel

    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on the build environment
    from . import _theta_py as _kernel

    BACKEND = "python"

__all__ = [
    "BACKEND",
    "theta_g1",
    "theta_g1_with_derivatives",
    "theta_g2",
    "theta_g2_batch",
    "MONOMIALS_ORDER3",
    "monomial_index",
]

_RADIUS_CAP = 220

# derivative monomials (p, q) = order of d/dz1, d/dz2, total order <= 3
MONOMIALS_ORDER3 = np.array(
    [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)],
    dtype=np.int64,
)
_MONO_INDEX = {(int(p), int(q)): k for k, (p, q) in enumerate(MONOMIALS_ORDER3)}


def monomial_index(p: int, q: int) -> int:
    """Position of the (d/dz1)^p (d/dz2)^q sum in a MONOMIALS_ORDER3 batch."""
    return _MONO_INDEX[(p, q)]


def _radius_estimate(ymin: float, log_tail: float, poly_order: int) -> int:
    """Smallest block radius with Gaussian tail exp(-pi ymin r^2) below target.

    ``log_tail`` is ln(1/tol); a couple of fixed-point rounds absorb the
    polynomial growth of derivative factors.
    """
    if ymin <= 0:
        raise NonConvergence("Im tau must be positive definite")
    r = np.sqrt(max(log_tail, 1.0) / (np.pi * ymin))
    for _ in range(3):
        r = np.sqrt((max(log_tail, 1.0) + poly_order * np.log(2 * np.pi * (r + 2) + 2)) / (np.pi * ymin))
    r = int(np.ceil(r)) + 2
    if r > _RADIUS_CAP:
        raise NonConvergence(
            f"theta series needs block radius {r} (Im tau too close to singular)"
        )
    return r


def _g1_center(eps1: float, eps2: float, z: complex, tau: complex) -> int:
    # peak of |term| at n + eps1 = -Im(z+eps2)/Im(tau)
    return int(np.rint(-np.imag(z + eps2) / np.imag(tau) - eps1))


def theta_g1_with_derivatives(
    eps1: float,
    eps2: float,
    z: complex,
    tau: complex,
    tol: Tolerance = Tolerance(abs_tol=1e-14, rel_tol=1e-14),
    max_order: int = 0,
    radius: Optional[int] = None,
) -> Tuple[np.ndarray, float]:
    """Theta with characteristic (eps1, eps2) and z-derivatives 0..max_order.

    Returns (values, scale) where scale is the sum of term magnitudes of the
    plain series; a value tiny against the scale sits on the theta divisor.
    """
    if np.imag(tau) <= 0:
        raise NonConvergence("Im tau must be positive")
    center = _g1_center(eps1, eps2, z, tau)
    if radius is not None:
        vals, scale = _kernel.theta_g1_sums(eps1, eps2, complex(z), complex(tau), int(radius), center, max_order)
        return np.asarray(vals), scale
    target = max(tol.abs_tol, 1e-16)
    r = _radius_estimate(float(np.imag(tau)), -np.log(target), max_order)
    vals, scale = _kernel.theta_g1_sums(eps1, eps2, complex(z), complex(tau), r, center, max_order)
    while True:
        r2 = 2 * r
        if r2 > _RADIUS_CAP:
            raise NonConvergence(f"theta series did not settle below radius {_RADIUS_CAP}")
        vals2, scale2 = _kernel.theta_g1_sums(eps1, eps2, complex(z), complex(tau), r2, center, max_order)
        if np.all(np.abs(np.asarray(vals2) - np.asarray(vals)) <= np.maximum(tol.abs_tol * scale2, tol.rel_tol * np.abs(vals2) + tol.abs_tol)):
            return np.asarray(vals2), scale2
        r, vals, scale = r2, vals2, scale2


def theta_g1(eps1: float, eps2: float, z: complex, tau: complex, tol: Tolerance = Tolerance(abs_tol=1e-14, rel_tol=1e-14)) -> complex:
    """Genus-1 theta value with real characteristics (eps1, eps2)."""
    vals, _ = theta_g1_with_derivatives(eps1, eps2, z, tau, tol, max_order=0)
    return complex(vals[0])


def _g2_center(dprime: np.ndarray, dsecond: np.ndarray, z: np.ndarray, y: np.ndarray) -> np.ndarray:
    peak = np.linalg.solve(y, -np.imag(z + dsecond))
    return np.rint(peak - dprime).astype(np.int64)


def _g2_checked(tau: np.ndarray) -> Tuple[np.ndarray, float]:
    tau = np.asarray(tau, dtype=complex)
    if tau.shape != (2, 2):
        raise NonConvergence("tau must be 2x2")
    if np.max(np.abs(tau - tau.T)) > 1e-8 * max(1.0, float(np.max(np.abs(tau)))):
        raise NonConvergence("tau must be symmetric")
    y = tau.imag
    eigs = np.linalg.eigvalsh((y + y.T) / 2.0)
    if eigs[0] <= 0:
        raise NonConvergence("Im tau must be positive definite")
    return tau, float(eigs[0])


def theta_g2_batch(
    dprime: np.ndarray,
    dsecond: np.ndarray,
    z: np.ndarray,
    tau: np.ndarray,
    monomials: np.ndarray = MONOMIALS_ORDER3,
    tol: Tolerance = Tolerance(abs_tol=1e-14, rel_tol=1e-14),
    radius: Optional[int] = None,
) -> Tuple[np.ndarray, float]:
    """Genus-2 theta and termwise partials for a batch of (p, q) orders.

    Returns (sums, scale): sums[k] is the (d/dz1)^p (d/dz2)^q derivative for
    monomials[k] = (p, q); scale is the total term magnitude of the series.
    With ``radius`` given, evaluates at that fixed radius; otherwise picks a
    radius from the Gaussian tail and doubles it until two evaluations agree
    to ``tol``.
    """
    dprime = np.ascontiguousarray(dprime, dtype=float)
    dsecond = np.ascontiguousarray(dsecond, dtype=float)
    z = np.ascontiguousarray(z, dtype=complex)
    monomials = np.ascontiguousarray(monomials, dtype=np.int64)
    tau, ymin = _g2_checked(tau)
    tau = np.ascontiguousarray(tau)
    center = np.ascontiguousarray(_g2_center(dprime, dsecond, z, tau.imag))
    if radius is not None:
        vals, scale = _kernel.theta_g2_sums(dprime, dsecond, z, tau, int(radius), center, monomials)
        return np.asarray(vals), scale
    target = max(tol.abs_tol, 1e-16)
    order = int(np.max(np.sum(monomials, axis=1)))
    r = _radius_estimate(ymin, -np.log(target), order)
    vals, scale = _kernel.theta_g2_sums(dprime, dsecond, z, tau, r, center, monomials)
    while True:
        r2 = 2 * r
        if r2 > _RADIUS_CAP:
            raise NonConvergence(f"theta series did not settle below radius {_RADIUS_CAP}")
        vals2, scale2 = _kernel.theta_g2_sums(dprime, dsecond, z, tau, r2, center, monomials)
        if np.all(np.abs(np.asarray(vals2) - np.asarray(vals)) <= np.maximum(tol.abs_tol * scale2, tol.rel_tol * np.abs(vals2) + tol.abs_tol)):
            return np.asarray(vals2), scale2
        r, vals, scale = r2, vals2, scale2


def theta_g2(
    dprime: np.ndarray,
    dsecond: np.ndarray,
    z: np.ndarray,
    tau: np.ndarray,
    tol: Tolerance = Tolerance(abs_tol=1e-14, rel_tol=1e-14),
) -> complex:
    """Genus-2 theta value with characteristic (dprime, dsecond)."""
    vals, _ = theta_g2_batch(dprime, dsecond, z, tau, monomials=np.array([(0, 0)], dtype=np.int64), tol=tol)
    return complex(vals[0])


def validated_radius_g2(tau: np.ndarray, tol: Tolerance, order: int = 3, slack: int = 2) -> int:
    """Radius accepted by the doubling check at a reference argument.

    Evaluators freeze this at construction and reuse it for every point;
    after centering, the required radius depends only on Im tau and the
    derivative order, not on z.
    """
    tau, ymin = _g2_checked(tau)
    monomials = MONOMIALS_ORDER3[: (order + 1) * (order + 2) // 2]
    z = np.array([0.337 + 0.41j, -0.211 + 0.27j]) @ tau  # generic off-divisor probe
    r = _radius_estimate(ymin, -np.log(max(tol.abs_tol, 1e-16)), order)
    dp = np.array([0.5, 0.5])
    dq = np.array([1.0, 0.5])
    vals, scale = theta_g2_batch(dp, dq, z, tau, monomials, tol, radius=r)
    while True:
        r2 = 2 * r
        if r2 > _RADIUS_CAP:
            raise NonConvergence("could not validate a truncation radius")
        vals2, scale2 = theta_g2_batch(dp, dq, z, tau, monomials, tol, radius=r2)
        if np.all(np.abs(vals2 - vals) <= np.maximum(tol.abs_tol * scale2, tol.rel_tol * np.abs(vals2) + tol.abs_tol)):
            return r + slack
        r, vals = r2, vals2
