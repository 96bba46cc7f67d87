# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled theta lattice sums (hot kernel).

Mirrors ``g2ell._theta_py``: raw truncated sums of the theta series and its
termwise derivatives over a centered block of lattice points.  One pass over
the block accumulates every requested derivative monomial.

The exponentials are advanced by first-order recurrences along each row
(the step ratio exp(E(n+1) - E(n)) itself updates by a constant factor), so
the inner loop costs a few complex multiplies instead of a cexp call.  Rows
recurse outward from the block center, where the Gaussian envelope peaks;
in the decay direction underflow to zero is harmless.
"""
import numpy as np

cimport numpy as cnp
from libc.complex cimport cabs as _cabs
from libc.complex cimport cexp as _cexp

cnp.import_array()

ctypedef double complex dcomplex

cdef double TWO_PI = 6.283185307179586476925286766559
cdef double PI = 3.1415926535897932384626433832795


def theta_g1_sums(double eps1, double eps2, dcomplex z, dcomplex tau,
                  int radius, long center, int max_order):
    cdef int p, step
    cdef double a0 = center + eps1
    cdef dcomplex zp = z + eps2
    cdef dcomplex pi_i = PI * 1j
    cdef dcomplex two_pi_i = TWO_PI * 1j
    cdef double abs_sum = 0.0
    cdef dcomplex term, ratio, qup, m, power
    out_arr = np.zeros(max_order + 1, dtype=np.complex128)
    cdef dcomplex[:] out = out_arr

    # center term, exact
    term = _cexp(pi_i * a0 * a0 * tau + two_pi_i * a0 * zp)
    abs_sum += _cabs(term)
    m = two_pi_i * a0
    power = 1.0
    for p in range(max_order + 1):
        out[p] += power * term
        power = power * m

    qup = _cexp(2.0 * pi_i * tau)
    # upward sweep: ratio(a -> a+1) = exp(pi i tau (2a+1) + 2 pi i zp)
    cdef dcomplex up_term = term
    cdef dcomplex up_ratio = _cexp(pi_i * tau * (2.0 * a0 + 1.0) + two_pi_i * zp)
    cdef double a = a0
    for step in range(radius):
        up_term = up_term * up_ratio
        up_ratio = up_ratio * qup
        a += 1.0
        abs_sum += _cabs(up_term)
        m = two_pi_i * a
        power = 1.0
        for p in range(max_order + 1):
            out[p] += power * up_term
            power = power * m
    # downward sweep: ratio(a -> a-1) = exp(pi i tau (-2a+1) - 2 pi i zp)
    cdef dcomplex dn_term = term
    cdef dcomplex dn_ratio = _cexp(pi_i * tau * (-2.0 * a0 + 1.0) - two_pi_i * zp)
    a = a0
    for step in range(radius):
        dn_term = dn_term * dn_ratio
        dn_ratio = dn_ratio * qup
        a -= 1.0
        abs_sum += _cabs(dn_term)
        m = two_pi_i * a
        power = 1.0
        for p in range(max_order + 1):
            out[p] += power * dn_term
            power = power * m
    return out_arr, abs_sum


def theta_g2_sums(double[:] dprime, double[:] dsecond, dcomplex[:] z,
                  dcomplex[:, :] tau, int radius, long[:] center,
                  long[:, :] monomials):
    cdef int i1, k, p, q, step, pmax = 0, qmax = 0
    cdef int nmono = monomials.shape[0]
    cdef double a1, a2, a20
    cdef dcomplex row_term, term, up_ratio, dn_ratio, q22, m2
    cdef dcomplex z1 = z[0] + dsecond[0]
    cdef dcomplex z2 = z[1] + dsecond[1]
    cdef dcomplex t11 = tau[0, 0], t12 = tau[0, 1], t22 = tau[1, 1]
    cdef double abs_sum = 0.0
    cdef dcomplex pi_i = PI * 1j
    cdef dcomplex two_pi_i = TWO_PI * 1j
    cdef int mono_p[16]
    cdef int mono_q[16]
    cdef dcomplex acc[16]
    cdef dcomplex pow1[8]
    cdef dcomplex pow2[8]

    if nmono > 16:
        raise ValueError("at most 16 derivative monomials per call")
    for k in range(nmono):
        mono_p[k] = monomials[k, 0]
        mono_q[k] = monomials[k, 1]
        acc[k] = 0.0
        if mono_p[k] > pmax:
            pmax = mono_p[k]
        if mono_q[k] > qmax:
            qmax = mono_q[k]
    if pmax > 7 or qmax > 7:
        raise ValueError("derivative order per variable is limited to 7")

    a20 = center[1] + dprime[1]
    q22 = _cexp(2.0 * pi_i * t22)
    pow1[0] = 1.0
    pow2[0] = 1.0

    for i1 in range(-radius, radius + 1):
        a1 = center[0] + i1 + dprime[0]
        for p in range(pmax):  # powers of m1 depend only on the row
            pow1[p + 1] = pow1[p] * (two_pi_i * a1)
        # row anchor at the center column, exact exponential
        row_term = _cexp(pi_i * (t11 * a1 * a1 + 2.0 * t12 * a1 * a20 + t22 * a20 * a20)
                         + two_pi_i * (a1 * z1 + a20 * z2))
        # upward sweep from the anchor, then downward; the step ratio
        # exp(E(a2 + 1) - E(a2)) itself advances by the constant q22
        up_ratio = _cexp(pi_i * (2.0 * t12 * a1 + t22 * (2.0 * a20 + 1.0)) + two_pi_i * z2)
        dn_ratio = _cexp(pi_i * (-2.0 * t12 * a1 + t22 * (-2.0 * a20 + 1.0)) - two_pi_i * z2)
        term = row_term
        a2 = a20
        for step in range(radius + 1):
            if step > 0:
                term = term * up_ratio
                up_ratio = up_ratio * q22
                a2 += 1.0
            abs_sum += _cabs(term)
            m2 = two_pi_i * a2
            for q in range(qmax):
                pow2[q + 1] = pow2[q] * m2
            for k in range(nmono):
                acc[k] += pow1[mono_p[k]] * pow2[mono_q[k]] * term
        term = row_term
        a2 = a20
        for step in range(radius):
            term = term * dn_ratio
            dn_ratio = dn_ratio * q22
            a2 -= 1.0
            abs_sum += _cabs(term)
            m2 = two_pi_i * a2
            for q in range(qmax):
                pow2[q + 1] = pow2[q] * m2
            for k in range(nmono):
                acc[k] += pow1[mono_p[k]] * pow2[mono_q[k]] * term

    out_arr = np.zeros(nmono, dtype=np.complex128)
    cdef dcomplex[:] out = out_arr
    for k in range(nmono):
        out[k] = acc[k]
    return out_arr, abs_sum
