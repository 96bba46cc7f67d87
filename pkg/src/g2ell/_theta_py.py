"""Pure-NumPy theta lattice sums (fallback backend).

Same contract as the compiled kernel in ``_theta_cy``: raw truncated sums of
the theta series and its termwise derivatives over a centered square block
of lattice points.  The high-level wrappers in :mod:`g2ell.theta` pick the
truncation radius and the block center; these kernels only accumulate.
"""
from __future__ import annotations

import numpy as np

TWO_PI_I = 2j * np.pi


def theta_g1_sums(
    eps1: float,
    eps2: float,
    z: complex,
    tau: complex,
    radius: int,
    center: int,
    max_order: int,
):
    """Sums D_p = sum_n (2 pi i (n+eps1))^p exp(pi i (n+eps1)^2 tau + 2 pi i (n+eps1)(z+eps2)).

    n runs over center + [-radius, radius].  Returns (array of D_p for
    p = 0..max_order, sum of |terms|).
    """
    n = np.arange(center - radius, center + radius + 1, dtype=float)
    a = n + eps1
    expo = 1j * np.pi * a * a * tau + TWO_PI_I * a * (z + eps2)
    terms = np.exp(expo)
    m = TWO_PI_I * a
    out = np.empty(max_order + 1, dtype=complex)
    power = np.ones_like(terms)
    for p in range(max_order + 1):
        out[p] = np.sum(power * terms)
        power = power * m
    return out, float(np.sum(np.abs(terms)))


def theta_g2_sums(
    dprime: np.ndarray,
    dsecond: np.ndarray,
    z: np.ndarray,
    tau: np.ndarray,
    radius: int,
    center: np.ndarray,
    monomials: np.ndarray,
):
    """Sums over n in center + [-radius, radius]^2 of m1^p m2^q exp(E(n)).

    E(n) = pi i (n+d')^T tau (n+d') + 2 pi i (n+d')^T (z+d''), with
    m_j = 2 pi i (n_j + d'_j).  ``monomials`` is an integer (k, 2) array of
    (p, q) pairs.  Returns (length-k complex array, sum of |exp(E)|).
    """
    rng = np.arange(-radius, radius + 1, dtype=float)
    n1 = center[0] + rng[:, None] + dprime[0]
    n2 = center[1] + rng[None, :] + dprime[1]
    expo = (
        1j * np.pi * (tau[0, 0] * n1 * n1 + 2.0 * tau[0, 1] * n1 * n2 + tau[1, 1] * n2 * n2)
        + TWO_PI_I * (n1 * (z[0] + dsecond[0]) + n2 * (z[1] + dsecond[1]))
    )
    terms = np.exp(expo)
    m1 = TWO_PI_I * n1
    m2 = TWO_PI_I * n2
    pmax = int(monomials[:, 0].max(initial=0))
    qmax = int(monomials[:, 1].max(initial=0))
    pow1 = [np.ones_like(terms)]
    for _ in range(pmax):
        pow1.append(pow1[-1] * m1)
    pow2 = [np.ones_like(terms)]
    for _ in range(qmax):
        pow2.append(pow2[-1] * m2)
    out = np.empty(len(monomials), dtype=complex)
    for k, (p, q) in enumerate(monomials):
        out[k] = np.sum(pow1[p] * pow2[q] * terms)
    return out, float(np.sum(np.abs(terms)))
