"""Identities connecting the genus-2 wp functions with elliptic wp functions.

A :class:`ReductionContext` bundles everything the identities need: the
curve V with its sigma/wp evaluator, the two Legendre targets E_1/E_2 with
theirs, the push-forward and pull-back coefficients of the induced maps
between the Jacobians, and the auxiliary tilde models with their Jacobi
function contexts.  Every operation below then evaluates one side (or both
sides) of a closed-form identity exactly as it is written, so different
code paths can be compared numerically at matching tolerances.

The coefficient conventions:

    push-forward  u = (u1, u3)  ->  a_i u1 + b_i u3     (Jac V -> Jac E_i)
    pull-back     v -> (c_i v, d_i v)                   (Jac E_i -> Jac V)

with a1 = 1 - ab, b1 = ab (1 - ab), a2 = ab + 1, b2 = -ab (ab + 1) and
c_i, d_i their 2x2-inverse partners, so that the composite is doubling.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .curves import (
    AffinePoint,
    CurveV,
    LegendreCurve,
    basepoints,
    elliptic_targets,
    kappas,
    sqrtc,
    tilde_curve,
)
from .errors import BranchCollision, DenominatorVanishes, InvalidParameters
from .numerics import Tolerance, lattice_member
from .periods import periods_with_halfperiod_convention
from .sigma import JacobiContext, SigmaG1Evaluator, SigmaG2Evaluator

__all__ = [
    "ReductionContext",
    "DivisorPair",
    "make_context",
    "f_direct",
    "f_formula",
    "restrict_wp",
    "wp_on_Kv",
    "kummer_product_factors",
    "q_functions",
    "wp_addition",
    "jacobi_inversion",
    "kummer_Z",
    "wp_from_Z",
    "kummer_Z_products",
    "wp_tilde_bridge",
    "al_product_coords",
    "al_product_displays",
    "wp_from_al_products",
    "kdv_residuals",
]


@dataclass(frozen=True)
class DivisorPair:
    p: AffinePoint
    q: AffinePoint


class ReductionContext:
    """Evaluators and constants for one curve V and its elliptic quotients."""

    def __init__(self, curve: CurveV, tol: Tolerance = Tolerance()):
        self.curve = curve
        self.tol = tol
        a, b = curve.alpha, curve.beta
        ab = a * b
        self.alpha, self.beta = a, b

        self.sig_v = SigmaG2Evaluator(curve, tol=tol)
        self.e1, self.e2 = elliptic_targets(curve)
        self.sig_e = (SigmaG1Evaluator(self.e1, tol=tol), SigmaG1Evaluator(self.e2, tol=tol))
        self.o1, self.o2 = basepoints(curve)

        self.a_push = (1 - ab, ab + 1)
        self.b_push = (ab * (1 - ab), -ab * (ab + 1))
        self.c_pull = (1 / (1 - ab), 1 / (1 + ab))
        self.d_pull = (1 / (ab * (1 - ab)), -1 / (ab * (1 + ab)))
        self.k1 = np.array([self.c_pull[0], self.d_pull[0]], dtype=complex)
        self.k2 = np.array([self.c_pull[1], self.d_pull[1]], dtype=complex)
        self.K = np.column_stack([self.k1, self.k2])
        self.kappa1, self.kappa2 = kappas(curve)
        self.root_ab = sqrtc((1 - a**2) * (1 - b**2))

        # tilde models with the prescribed half-period basis convention
        self.tilde = []
        for i, kap in ((1, self.kappa1), (2, self.kappa2)):
            crv = tilde_curve(curve, i)
            per = periods_with_halfperiod_convention(crv, 1.0 / kap**2, tol)
            self.tilde.append(SigmaG1Evaluator(crv, per, tol))
        self.jac = tuple(JacobiContext(t.periods.tau) for t in self.tilde)
        self.modulus_residual = tuple(
            abs(self.jac[i].modulus**2 - (self.kappa1, self.kappa2)[i] ** 2) for i in range(2)
        )

    # -- linear maps between the universal covers ---------------------------

    def push(self, i: int, u: np.ndarray) -> complex:
        u = np.asarray(u, dtype=complex)
        return self.a_push[i - 1] * u[0] + self.b_push[i - 1] * u[1]

    def pull(self, i: int, v: complex) -> np.ndarray:
        return (self.k1 if i == 1 else self.k2) * v

    def push_pull_matrix(self) -> np.ndarray:
        amat = np.array([[self.a_push[0], self.b_push[0]], [self.a_push[1], self.b_push[1]]])
        return amat @ self.K

    def in_lattice_v(self, vec: np.ndarray, int_tol: float = 1e-6) -> Optional[np.ndarray]:
        return lattice_member(
            vec, self.sig_v.periods.lattice_columns, Tolerance(abs_tol=1e-6, rel_tol=0.0), int_tol
        )

    def in_lattice_e(self, i: int, z: complex, int_tol: float = 1e-6) -> Optional[np.ndarray]:
        return lattice_member(
            np.array([z]),
            self.sig_e[i - 1].periods.lattice_columns,
            Tolerance(abs_tol=1e-6, rel_tol=0.0),
            int_tol,
        )

    def wps(self, u: np.ndarray) -> Dict[Tuple[int, ...], complex]:
        return self.sig_v.wp_all(u)

    def w_arguments(self, u: np.ndarray) -> Tuple[complex, complex]:
        """w_1, w_2 with w_i = sqrt((1-a^2)(1-b^2)) (u1 +- ab u3)."""
        u = np.asarray(u, dtype=complex)
        ab = self.alpha * self.beta
        return (
            self.root_ab * (u[0] + ab * u[1]),
            self.root_ab * (u[0] - ab * u[1]),
        )


def make_context(curve: CurveV, tol: Tolerance = Tolerance()) -> ReductionContext:
    """Build the full reduction context; closed-form coefficient checks run here."""
    ctx = ReductionContext(curve, tol)
    gram = ctx.push_pull_matrix()
    if not np.allclose(gram, 2.0 * np.eye(2), rtol=0, atol=1e-12):
        raise InvalidParameters(f"push/pull coefficient product is not doubling: {gram}")
    return ctx


# ---------------------------------------------------------------------------
# f functions (wp of E_i composed with the push-forward)
# ---------------------------------------------------------------------------


def f_direct(ctx: ReductionContext, i: int, u: np.ndarray) -> complex:
    """wp_{E_i} evaluated at the push-forward a_i u1 + b_i u3."""
    return ctx.sig_e[i - 1].wp(ctx.push(i, u))


def f_formula(ctx: ReductionContext, i: int, u: np.ndarray) -> complex:
    """Closed rational expression for f_i in wp_11, wp_13, wp_33."""
    a, b = ctx.alpha, ctx.beta
    ab = a * b
    w = ctx.wps(u)
    p11, p13, p33 = w[(1, 1)], w[(1, 3)], w[(3, 3)]
    den_core = p13 + ab**2
    if abs(den_core) < 1e-10 * max(1.0, abs(p13)):
        raise DenominatorVanishes("wp_13 + (ab)^2 vanishes")
    if i == 1:
        a1 = p33 + ab**2 * p11 + ab * (ab - 1) ** 2 * (a - b) ** 2 - 2 * ab**3
        num = -ab * p13**2 - a1 * p13 - ab * (p11 - ab) * (p33 - ab**3)
        return num / ((ab - 1) ** 2 * den_core**2)
    a2 = p33 + ab**2 * p11 - ab * (ab + 1) ** 2 * (a + b) ** 2 + 2 * ab**3
    num = ab * p13**2 - a2 * p13 + ab * (p11 + ab) * (p33 + ab**3)
    return num / ((ab + 1) ** 2 * den_core**2)


# ---------------------------------------------------------------------------
# restrictions to the pulled-back lines k_i v
# ---------------------------------------------------------------------------


def restrict_wp(ctx: ReductionContext, i: int, which: Tuple[int, ...], v: complex) -> complex:
    """Closed forms for wp_{jk}(k_i v) and wp_{jkl}(k_i v) in wp_{E_i}(v)."""
    a, b = ctx.alpha, ctx.beta
    ab = a * b
    key = tuple(sorted(which))
    ev = ctx.sig_e[i - 1]
    p, dp = ev.wp_with_prime(v)
    if abs(p) < 1e-12:
        raise DenominatorVanishes("wp_{E_i}(v) vanishes")
    if i == 1:
        s, m = ab - 1, (a - b) ** 2
        table = {
            (1, 1): 2 * ab + m / p,
            (1, 3): -(ab**2),
            (3, 3): ab**2 * (s**2 * p + 2 * ab),
            (1, 1, 1): s * dp * (m + ab * p) / p**2,
            (1, 1, 3): -(ab**2) * s * dp / p,
            (1, 3, 3): ab**3 * s * dp / p,
            (3, 3, 3): -(ab**3) * s * (s**2 * p + ab) * dp / p,
        }
    elif i == 2:
        s, m = ab + 1, (a + b) ** 2
        table = {
            (1, 1): -2 * ab + m / p,
            (1, 3): -(ab**2),
            (3, 3): ab**2 * (s**2 * p - 2 * ab),
            (1, 1, 1): -s * dp * (m - ab * p) / p**2,
            (1, 1, 3): ab**2 * s * dp / p,
            (1, 3, 3): ab**3 * s * dp / p,
            (3, 3, 3): -(ab**3) * s * (s**2 * p - ab) * dp / p,
        }
    else:
        raise InvalidParameters("cover index must be 1 or 2")
    if key not in table:
        raise InvalidParameters(f"unknown wp index set {which}")
    return complex(table[key])


# ---------------------------------------------------------------------------
# wp on the full plane through both pull-backs (K v)
# ---------------------------------------------------------------------------


def _p123(ctx: ReductionContext, v1: complex, v2: complex):
    a, b = ctx.alpha, ctx.beta
    ab = a * b
    w1, w1p = ctx.sig_e[0].wp_with_prime(v1)
    w2, w2p = ctx.sig_e[1].wp_with_prime(v2)
    p1 = ((ab - 1) ** 2 * w1 - (ab + 1) ** 2 * w2 + 8 * ab) * w1 * w2 - (a + b) ** 2 * w1 + (a - b) ** 2 * w2
    p2 = (
        (ab**2 - 1) * w1p * w2p
        - 2 * ((ab - 1) ** 2 * w1 + (ab + 1) ** 2 * w2 - 2 * (a**2 + 1) * (b**2 + 1)) * w1 * w2
        - 2 * ((a + b) ** 2 * w1 + (a - b) ** 2 * w2)
    )
    p3 = -2 * ab * p1 - 2 * (a**2 * b**4 + a**4 * b**2 - 4 * ab**2 + a**2 + b**2) * w1 * w2
    return w1, w1p, w2, w2p, p1, p2, p3


def wp_on_Kv(ctx: ReductionContext, which: Tuple[int, int], v1: complex, v2: complex) -> complex:
    """wp_{jk}(K v) as a rational combination of wp_{E_1}(v1), wp_{E_2}(v2)."""
    a, b = ctx.alpha, ctx.beta
    ab = a * b
    w1, w1p, w2, w2p, p1, p2, p3 = _p123(ctx, v1, v2)
    if abs(p1) < 1e-12 * max(1.0, abs(w1 * w2)):
        raise DenominatorVanishes("shared denominator p1 vanishes")
    key = tuple(sorted(which))
    if key == (1, 1):
        return complex(-p2 * ((ab - 1) ** 2 * (a + b) ** 2 * w1**2 + (ab + 1) ** 2 * (a - b) ** 2 * w2**2 + p3) / (2 * p1**2))
    if key == (1, 3):
        return complex(ab**2 + ab**2 * p2 * ((ab**2 - 1) * w1p * w2p - p2) / (2 * p1**2))
    if key == (3, 3):
        return complex(-(ab**2) * p2 * ((ab**2 - 1) ** 2 * w1**2 * w2**2 + (a**2 - b**2) ** 2 + p3) / (2 * p1**2))
    raise InvalidParameters(f"unknown wp index pair {which}")


def kummer_product_factors(ctx: ReductionContext, v1: complex, v2: complex) -> dict:
    """The p-polynomials and the product decompositions of wp on K v.

    Each of wp_11, wp_13 - (ab)^2, wp_33 factors as (p2 / (2 p1^2)) times a
    bracket; the dict carries all pieces so tests can check the identity
    factor by factor.
    """
    a, b = ctx.alpha, ctx.beta
    ab = a * b
    w1, w1p, w2, w2p, p1, p2, p3 = _p123(ctx, v1, v2)
    return {
        "p1": p1,
        "p2": p2,
        "p3": p3,
        "bracket_11": (ab - 1) ** 2 * (a + b) ** 2 * w1**2 + (ab + 1) ** 2 * (a - b) ** 2 * w2**2 + p3,
        "bracket_13": (ab**2 - 1) * w1p * w2p - p2,
        "bracket_33": (ab**2 - 1) ** 2 * w1**2 * w2**2 + (a**2 - b**2) ** 2 + p3,
        "prefactor": p2 / (2 * p1**2),
    }


# ---------------------------------------------------------------------------
# two-argument q functions and the addition formulas
# ---------------------------------------------------------------------------


def q_functions(ctx: ReductionContext, u: np.ndarray, v: np.ndarray) -> Tuple[complex, ...]:
    """(q, q1, q3, q11, q13, q33) for the wp addition formulas."""
    l2, l4, l6, l8, _ = ctx.curve.lambdas
    wu = ctx.wps(u)
    wv = ctx.wps(v)

    def at(w):
        pp = w[(1, 1)] * w[(3, 3)] - w[(1, 3)] ** 2
        return w[(1, 1)], w[(1, 3)], w[(3, 3)], w[(1, 1, 1)], w[(1, 1, 3)], w[(1, 3, 3)], w[(3, 3, 3)], pp

    u11, u13, u33, u111, u113, u133, u333, uP = at(wu)
    v11, v13, v33, v111, v113, v133, v333, vP = at(wv)

    q = u33 - v33 + u13 * v11 - v13 * u11
    q1 = u133 - v133 + u113 * v11 - v113 * u11 + v111 * u13 - u111 * v13
    q3 = u333 - v333 + u133 * v11 - v133 * u11 + v113 * u13 - u113 * v13
    q11 = (
        8 * l2 * (u13 * v11 - v13 * u11)
        + 4 * l4 * (u13 - v13)
        - 4 * (uP - vP)
        - 8 * (u33 * v11 - v33 * u11)
        + 2 * (u113 * v111 - v113 * u111)
    )
    q13 = (
        4 * l6 * (u13 - v13)
        + 2 * l4 * (u13 * v11 - v13 * u11)
        - 4 * (u33 * v13 - v33 * u13)
        + 2 * (uP * v11 - vP * u11)
        - 2 * l8 * (u11 - v11)
        + v111 * u133 - u111 * v133
    )
    q33 = (
        4 * l6 * q
        + 4 * l8 * (u13 - v13)
        + 4 * (uP * v13 - vP * u13)
        + 2 * (u133 * v113 - v133 * u113)
    )
    return q, q1, q3, q11, q13, q33


def wp_addition(ctx: ReductionContext, u: np.ndarray, v: np.ndarray) -> Tuple[complex, complex, complex]:
    """(wp_11, wp_13, wp_33) at u + v from values at u and v alone."""
    q, q1, q3, q11, q13, q33 = q_functions(ctx, u, v)
    if abs(q) < 1e-12:
        raise DenominatorVanishes("q(u, v) vanishes; arguments too close modulo the lattice")
    wu = ctx.wps(u)
    wv = ctx.wps(v)
    w11 = -wu[(1, 1)] - wv[(1, 1)] + 0.25 * (q1 / q) ** 2 - q11 / (4 * q)
    w13 = -wu[(1, 3)] - wv[(1, 3)] + q1 * q3 / (4 * q**2) - q13 / (4 * q)
    w33 = -wu[(3, 3)] - wv[(3, 3)] + 0.25 * (q3 / q) ** 2 - q33 / (4 * q)
    return complex(w11), complex(w13), complex(w33)


# ---------------------------------------------------------------------------
# divisor inversion
# ---------------------------------------------------------------------------


def jacobi_inversion(ctx: ReductionContext, u: np.ndarray, tol: float = 1e-8) -> DivisorPair:
    """The divisor {P, Q} with Abel sum u: x's from wp_11/wp_13, y's from wp_111/wp_113."""
    w = ctx.wps(u)
    p11, p13 = w[(1, 1)], w[(1, 3)]
    disc = p11**2 + 4 * p13
    scale = max(1.0, abs(p11) ** 2, abs(p13))
    if abs(disc) < tol * scale:
        raise BranchCollision("divisor points collide (discriminant vanishes)")
    root = np.sqrt(complex(disc))
    xs = ((p11 + root) / 2.0, (p11 - root) / 2.0)
    pts = []
    for x in xs:
        y = -(w[(1, 1, 1)] * x + w[(1, 1, 3)]) / 2.0
        pts.append(AffinePoint(x, y))
    return DivisorPair(pts[0], pts[1])


# ---------------------------------------------------------------------------
# Kummer coordinates
# ---------------------------------------------------------------------------


def _kummer_den(ctx: ReductionContext, p11: complex, p13: complex, p33: complex) -> complex:
    a2, b2 = ctx.alpha**2, ctx.beta**2
    den = (a2 + b2) * (p13 - a2 * b2) + a2 * b2 * p11 + p33
    if abs(den) < 1e-12 * max(1.0, abs(p33), abs(a2 * b2 * p11)):
        raise DenominatorVanishes("shared Kummer denominator vanishes")
    return den


def kummer_Z(ctx: ReductionContext, u: np.ndarray) -> Tuple[complex, complex, complex]:
    """(Z1, Z2, Z3): Kummer coordinates as rational functions of wp values."""
    a2, b2 = ctx.alpha**2, ctx.beta**2
    w = ctx.wps(u)
    p11, p13, p33 = w[(1, 1)], w[(1, 3)], w[(3, 3)]
    den = _kummer_den(ctx, p11, p13, p33)
    z1 = -(1 - a2) * (1 - b2) * (a2 * b2 + p13) / den
    z2 = -((1 + a2 * b2) * (a2 * b2 - p13) - a2 * b2 * p11 - p33) / den
    z3 = -(a2 * b2 * p11 - p33) / den
    return complex(z1), complex(z2), complex(z3)


def wp_from_Z(ctx: ReductionContext, z1: complex, z2: complex, z3: complex) -> Tuple[complex, complex, complex]:
    """(wp_11, wp_13, wp_33) back from the Kummer coordinates."""
    a2, b2 = ctx.alpha**2, ctx.beta**2
    den = z1 + z2 - 1.0
    if abs(den) < 1e-12 * max(1.0, abs(z1), abs(z2)):
        raise DenominatorVanishes("Z1 + Z2 - 1 vanishes")
    p11 = ((a2 + b2) * (z2 - z3) + (1 + a2 * b2) * (z3 - 1)) / den
    p13 = a2 * b2 * (1 + z1 - z2) / den
    p33 = a2 * b2 * ((a2 + b2) * (z2 + z3) - (1 + a2 * b2) * (z3 + 1)) / den
    return complex(p11), complex(p13), complex(p33)


def kummer_Z_products(ctx: ReductionContext, u: np.ndarray) -> Tuple[complex, complex, complex]:
    """(Z1, Z2, Z3) as products of Jacobi functions at w_1, w_2."""
    w1, w2 = ctx.w_arguments(u)
    sn1, cn1, dn1 = ctx.jac[0].sn_cn_dn(w1)
    sn2, cn2, dn2 = ctx.jac[1].sn_cn_dn(w2)
    return complex(sn1 * sn2), complex(cn1 * cn2), complex(dn1 * dn2)


# ---------------------------------------------------------------------------
# bridges between the Legendre targets and the tilde models
# ---------------------------------------------------------------------------


def wp_tilde_bridge(ctx: ReductionContext, i: int, u: complex) -> dict:
    """Residuals of the wp and sn/cn/dn bridges between E_i and tilde-E_i.

    Returns relative residuals of the affine wp relation and of the three
    squared-Jacobi-function expressions in wp of the tilde model.
    """
    a, b = ctx.alpha, ctx.beta
    ab = a * b
    kap = (ctx.kappa1, ctx.kappa2)[i - 1]
    tilde = ctx.tilde[i - 1]
    jac = ctx.jac[i - 1]

    if i == 1:
        arg = -1j * (ab - 1) / (a - b) * u
        factor = (a - b) ** 2 / (ab - 1) ** 2
    else:
        arg = 1j * (ab + 1) / (a + b) * u
        factor = (a + b) ** 2 / (ab + 1) ** 2
    lhs = ctx.sig_e[i - 1].wp(arg)
    wt = tilde.wp(u)
    rhs = factor * (1.0 - wt)
    affine = abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))

    sn, cn, dn = jac.sn_cn_dn(u)
    wk = tilde.wp(kap * u)
    res_sn = abs(sn**2 - 1.0 / (kap**2 * wk)) / max(1.0, abs(sn) ** 2)
    res_cn = abs(cn**2 - (wk - 1.0 / kap**2) / wk) / max(1.0, abs(cn) ** 2)
    res_dn = abs(dn**2 - (wk - 1.0) / wk) / max(1.0, abs(dn) ** 2)
    return {"affine": affine, "sn2": res_sn, "cn2": res_cn, "dn2": res_dn}


# ---------------------------------------------------------------------------
# al-function product coordinates
# ---------------------------------------------------------------------------


def al_product_coords(ctx: ReductionContext, u: np.ndarray) -> Tuple[complex, complex, complex]:
    """Product coordinates al_j(k1 w1) al_j(k2 w2) from the tilde sigma evaluators."""
    w1, w2 = ctx.w_arguments(u)
    out = []
    for j in (1, 2, 3):
        out.append(ctx.tilde[0].al(j, ctx.kappa1 * w1) * ctx.tilde[1].al(j, ctx.kappa2 * w2))
    return tuple(complex(v) for v in out)


def al_product_displays(ctx: ReductionContext, u: np.ndarray) -> Tuple[complex, complex, complex]:
    """The same product coordinates as rational functions of wp values."""
    a2, b2 = ctx.alpha**2, ctx.beta**2
    w = ctx.wps(u)
    p11, p13, p33 = w[(1, 1)], w[(1, 3)], w[(3, 3)]
    den = a2 * b2 + p13
    if abs(den) < 1e-12 * max(1.0, abs(p13)):
        raise DenominatorVanishes("wp_13 + (ab)^2 vanishes")
    pref = (a2 - b2) / ((1 - a2) ** 2 * (1 - b2) ** 2)
    z1 = pref * ((1 + a2 * b2) * (p13 - a2 * b2) + a2 * b2 * p11 + p33) / den
    z2 = pref * (p33 - a2 * b2 * p11) / den
    z3 = pref * ((a2 + b2) * (p13 - a2 * b2) + a2 * b2 * p11 + p33) / den
    return complex(z1), complex(z2), complex(z3)


def wp_from_al_products(
    ctx: ReductionContext, z1: complex, z2: complex, z3: complex
) -> Tuple[complex, complex, complex]:
    """(wp_11, wp_13, wp_33) from the al product coordinates."""
    a2, b2 = ctx.alpha**2, ctx.beta**2
    q = (1 - a2) * (1 - b2)
    den = q * (z3 - z1) + a2 - b2
    if abs(den) < 1e-12 * max(1.0, abs(z1), abs(z3)):
        raise DenominatorVanishes("al-coordinate denominator vanishes")
    p11 = q * ((1 + a2 * b2) * z3 - q * z2 - (a2 + b2) * z1) / den
    p13 = a2 * b2 * (q * (z1 - z3) + a2 - b2) / den
    p33 = a2 * b2 * q * ((1 + a2 * b2) * z3 + q * z2 - (a2 + b2) * z1) / den
    return complex(p11), complex(p13), complex(p33)


# ---------------------------------------------------------------------------
# KdV-hierarchy residuals
# ---------------------------------------------------------------------------


def kdv_residuals(ctx: ReductionContext, u: np.ndarray, h: float = 1e-3) -> Tuple[float, float, float]:
    """Relative residuals of the three evolution identities for F = 2 wp_11 + (2/3) l2.

    First and third u-derivatives of F and G = 2 wp_13 up to total order
    three are analytic wp values; the two order-five pieces are Richardson
    central second differences of the analytic wp_111 and wp_113.
    """
    l2 = ctx.curve.lambda2
    u = ctx.sig_v.lattice_shift(np.asarray(u, dtype=complex))
    e1 = np.array([1.0, 0.0])

    w = ctx.sig_v.wp_all(u, reduce=False)
    f_val = 2 * w[(1, 1)] + (2.0 / 3.0) * l2
    g_val = 2 * w[(1, 3)]
    f_u1 = 2 * w[(1, 1, 1)]
    f_u3 = 2 * w[(1, 1, 3)]
    g_u1 = 2 * w[(1, 1, 3)]

    def second_diff(key: Tuple[int, ...], step: float) -> complex:
        wp_p = ctx.sig_v.wp_all(u + step * e1, reduce=False)[key]
        wp_m = ctx.sig_v.wp_all(u - step * e1, reduce=False)[key]
        return (wp_p - 2 * w[key] + wp_m) / step**2

    def richardson(key: Tuple[int, ...]) -> complex:
        d1 = second_diff(key, h)
        d2 = second_diff(key, h / 2)
        return (4.0 * d2 - d1) / 3.0

    f_3u1 = 2 * richardson((1, 1, 1))
    f_2u1_u3 = 2 * richardson((1, 1, 3))

    terms1 = (f_u3, 0.25 * f_3u1, 1.5 * f_val * f_u1)
    r1 = abs(f_u3 - 0.25 * f_3u1 + 1.5 * f_val * f_u1) / max(1.0, *map(abs, terms1))
    terms2 = (0.25 * f_2u1_u3, (f_val + l2 / 3.0) * f_u3, 0.5 * f_u1 * g_val)
    r2 = abs(0.25 * f_2u1_u3 - (f_val + l2 / 3.0) * f_u3 - 0.5 * f_u1 * g_val) / max(1.0, *map(abs, terms2))
    r3 = abs(f_u3 - g_u1) / max(1.0, abs(f_u3))
    return float(r1), float(r2), float(r3)
