"""Period matrices, Abel maps, and Humbert relation detection.

Periods are computed from loop integrals around pairs of branch points.  A
loop around two branch points p, q collapses onto the straight cut [p, q]:
the loop integral is twice the segment integral, and the substitution
x = midpoint + halfspan * sin(pi (t - 1/2)) turns dx / y into a smooth
integrand (the sqrt vanishing at both ends cancels against dx/dt), leaving

    contour integral of rho(x) dx / (2 y)  =  -i pi * integral_0^1 rho / sqrt(R) dt

with R(x) the product of the remaining branch-point factors, tracked
continuously along the cut.  Chain loops around consecutive branch points
(sorted lexicographically) generate the homology; a symplectic basis is
assembled from them and certified a posteriori by the Riemann relations
(tau symmetric, Im tau positive definite, generalized Legendre relation)
rather than by explicit intersection bookkeeping.  Loop orientations enter
only through an eight-way sign enumeration that stops at the first
certified candidate.

The Abel map integrates the holomorphic differentials along explicit
segment chains with the y-branch continued analytically (argument
unwrapping with refinement), routing through a branch point so that both
path ends can always be matched to the requested points of the curve.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .curves import INFINITY, AffinePoint, CurveV, LegendreCurve, WeierstrassCurve
from .errors import (
    InvalidParameters,
    NearDegenerateBranchPoints,
    NonConvergence,
)
from .numerics import Tolerance, gauss_nodes, lattice_member

__all__ = [
    "PeriodsG2",
    "PeriodsG1",
    "HomologyBasis",
    "HumbertRelation",
    "periods_g2",
    "periods_g1",
    "abel_g2",
    "abel_g1",
    "halfperiod_class",
    "periods_with_halfperiod_convention",
    "humbert_delta4",
    "transform_symplectic",
]

_PI_I_HALF = 0.5j * np.pi


# ---------------------------------------------------------------------------
# result types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HomologyBasis:
    """Branch points in use and the loop combination that was certified.

    ``a_cycles`` and ``b_cycles`` give each basis cycle as an integer
    combination of the four chain loops (loop j encircles sorted branch
    points j and j+1); ``signs`` is the chain-orientation pattern that
    passed certification.
    """

    branch_points: np.ndarray
    a_cycles: np.ndarray
    b_cycles: np.ndarray
    signs: Tuple[int, ...]


@dataclass(frozen=True)
class PeriodsG2:
    """Full genus-2 period data.

    omega_a = 2 omega', omega_b = 2 omega'' are the a/b-cycle integrals of
    the holomorphic differentials (-x/(2y) dx, -1/(2y) dx) by rows; eta_a =
    -2 eta', eta_b = -2 eta'' those of the second-kind differentials.  tau
    is the normalized matrix (omega')^{-1} omega''.
    """

    omega_a: np.ndarray
    omega_b: np.ndarray
    eta_a: np.ndarray
    eta_b: np.ndarray
    tau: np.ndarray
    basis: HomologyBasis
    legendre_sign: int
    legendre_residual: float

    @property
    def omega_prime(self) -> np.ndarray:
        return self.omega_a / 2.0

    @property
    def omega_second(self) -> np.ndarray:
        return self.omega_b / 2.0

    @property
    def eta_prime(self) -> np.ndarray:
        return -self.eta_a / 2.0

    @property
    def eta_second(self) -> np.ndarray:
        return -self.eta_b / 2.0

    @property
    def lattice_columns(self) -> np.ndarray:
        """2 x 4 matrix whose columns generate the period lattice."""
        return np.hstack([self.omega_a, self.omega_b])

    def to_json(self) -> dict:
        def mat(m):
            return [[[v.real, v.imag] for v in row] for row in np.asarray(m)]

        return {
            "omega_a": mat(self.omega_a),
            "omega_b": mat(self.omega_b),
            "eta_a": mat(self.eta_a),
            "eta_b": mat(self.eta_b),
            "tau": mat(self.tau),
            "legendre_residual": self.legendre_residual,
        }


@dataclass(frozen=True)
class PeriodsG1:
    """Genus-1 periods of -dx/(2y): omega_a = 2 Omega', omega_b = 2 Omega''.

    eta_a = -2 eta', eta_b = -2 eta'' are the matching second-kind periods
    (cubic models only).  tau = Omega''/Omega' has positive imaginary part.
    """

    omega_a: complex
    omega_b: complex
    eta_a: complex
    eta_b: complex
    tau: complex
    roots: np.ndarray
    legendre_residual: float

    @property
    def omega_prime(self) -> complex:
        return self.omega_a / 2.0

    @property
    def omega_second(self) -> complex:
        return self.omega_b / 2.0

    @property
    def eta_prime(self) -> complex:
        return -self.eta_a / 2.0

    @property
    def eta_second(self) -> complex:
        return -self.eta_b / 2.0

    @property
    def lattice_columns(self) -> np.ndarray:
        return np.array([[self.omega_a, self.omega_b]], dtype=complex)

    def reduce(self, v: complex) -> complex:
        """Translate v by a lattice vector into the centered fundamental cell."""
        basis = np.array([[self.omega_a.real, self.omega_b.real], [self.omega_a.imag, self.omega_b.imag]])
        coeff = np.linalg.solve(basis, [v.real, v.imag])
        m = np.rint(coeff)
        return v - m[0] * self.omega_a - m[1] * self.omega_b

    def to_json(self) -> dict:
        return {
            "omega_a": [self.omega_a.real, self.omega_a.imag],
            "omega_b": [self.omega_b.real, self.omega_b.imag],
            "eta_a": [self.eta_a.real, self.eta_a.imag],
            "eta_b": [self.eta_b.real, self.eta_b.imag],
            "tau": [self.tau.real, self.tau.imag],
            "legendre_residual": self.legendre_residual,
        }


@dataclass(frozen=True)
class HumbertRelation:
    h: Tuple[int, int, int, int, int]
    delta: int
    residual: float

    def to_json(self) -> dict:
        return {"h": list(self.h), "delta": self.delta, "residual": self.residual}


# ---------------------------------------------------------------------------
# continuous square roots along sampled paths
# ---------------------------------------------------------------------------


def _tracked_sqrt(values: np.ndarray, anchor: Optional[complex] = None) -> Tuple[np.ndarray, float]:
    """Continuous branch of sqrt(values) along an ordered sample sequence.

    Unwraps the argument of ``values`` (first element first); if ``anchor``
    is given it must be a square root of values[0], and the returned branch
    starts there; otherwise the principal root of values[0] starts the
    branch.  Also returns the largest argument step, which callers use to
    force refinement when the sampling was too coarse to trust unwrapping.
    """
    args = np.angle(values)
    steps = np.diff(args)
    steps = (steps + np.pi) % (2 * np.pi) - np.pi
    max_step = float(np.max(np.abs(steps))) if len(steps) else 0.0
    unwrapped = np.concatenate([[args[0]], args[0] + np.cumsum(steps)])
    roots = np.sqrt(np.abs(values)) * np.exp(0.5j * unwrapped)
    if anchor is not None:
        ratio = anchor / roots[0]
        sign = 1.0 if abs(ratio - 1.0) < abs(ratio + 1.0) else -1.0
        roots = roots * sign
    return roots, max_step


def _refined_quadrature(
    integrand: Callable[[np.ndarray], Tuple[np.ndarray, float]],
    tol: Tolerance,
    n0: int = 16,
    max_arg_step: float = np.pi / 2,
) -> np.ndarray:
    """Vector Gauss-Legendre refinement on [0, 1] with branch-tracking guard.

    ``integrand(t)`` returns (values with shape (k, len(t)), worst argument
    step seen by the branch tracking).  Refinement continues until both the
    quadrature agrees and the tracking was adequately sampled.
    """
    from .numerics import MAX_GAUSS_NODES

    previous = None
    n = n0
    for _ in range(tol.max_refinements):
        t, w = gauss_nodes(n)
        values, worst = integrand(t)
        estimate = values @ w
        # attainable accuracy is limited by the integrand's absolute mass
        # (summation rounding), not only by the possibly-cancelled result
        floor = 64.0 * np.finfo(float).eps * float(np.max(np.abs(values) @ w))
        tracked_ok = worst < max_arg_step
        if previous is not None and tracked_ok:
            delta = float(np.max(np.abs(estimate - previous)))
            scale = float(np.max(np.abs(estimate)))
            if delta < max(tol.abs_tol, tol.rel_tol * scale, floor):
                return estimate
        if n >= MAX_GAUSS_NODES:
            break
        previous = estimate
        n *= 2
    raise NonConvergence(f"loop quadrature did not settle (reached {n} nodes)")


# ---------------------------------------------------------------------------
# loop integrals around branch-point pairs
# ---------------------------------------------------------------------------


def _poly_from_roots(roots: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    def poly(x: np.ndarray) -> np.ndarray:
        out = np.ones_like(x)
        for r in roots:
            out = out * (x - r)
        return out

    return poly


def _pair_loop_integrals(
    rhos: Sequence[Callable[[np.ndarray], np.ndarray]],
    p: complex,
    q: complex,
    others: np.ndarray,
    tol: Tolerance,
) -> np.ndarray:
    """Integrals of rho_k(x) dx / (2y) around a loop encircling p and q."""

    mid = (p + q) / 2.0
    half = (q - p) / 2.0
    r_poly = _poly_from_roots(others)
    r_at_p = complex(r_poly(np.array([p], dtype=complex))[0])

    def integrand(t: np.ndarray):
        x = mid + half * np.sin(np.pi * (t - 0.5))
        # anchor the branch at the exact endpoint so refinements agree
        r = np.concatenate([[r_at_p], r_poly(x)])
        roots, worst = _tracked_sqrt(r)
        rows = np.vstack([rho(x) / roots[1:] for rho in rhos])
        return rows, worst

    return -1j * np.pi * _refined_quadrature(integrand, tol)


def _segment_clearance(z0: complex, z1: complex, points: np.ndarray) -> float:
    """Smallest distance from ``points`` to the closed segment [z0, z1]."""
    d = z1 - z0
    denom = abs(d) ** 2
    best = np.inf
    for c in points:
        t = ((c - z0).real * d.real + (c - z0).imag * d.imag) / denom
        t = min(1.0, max(0.0, t))
        best = min(best, abs(c - (z0 + t * d)))
    return float(best)


def _ray_clearance(anchor: complex, points: np.ndarray) -> float:
    """Smallest distance from ``points`` to the ray {r * anchor : r >= 1}."""
    best = np.inf
    for c in points:
        t = (c.real * anchor.real + c.imag * anchor.imag) / abs(anchor) ** 2
        t = max(1.0, t)
        best = min(best, abs(c - t * anchor))
    return float(best)


# ---------------------------------------------------------------------------
# genus-2 and genus-1 period construction
# ---------------------------------------------------------------------------


def _sorted_branch_points(points: np.ndarray) -> np.ndarray:
    order = np.lexsort((points.imag, points.real))
    return points[order]


def _check_separation(points: np.ndarray) -> None:
    scale = max(1.0, float(np.max(np.abs(points))))
    n = len(points)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(points[i] - points[j]) < 1e-8 * scale:
                raise NearDegenerateBranchPoints(
                    f"branch points {points[i]} and {points[j]} are too close"
                )


def _certify_candidate(
    omega_a: np.ndarray, omega_b: np.ndarray, eta_a: np.ndarray, eta_b: np.ndarray
) -> Optional[Tuple[np.ndarray, int, float]]:
    """Riemann-relation certificate; returns (tau, legendre sign, residual)."""
    op = omega_a / 2.0
    os = omega_b / 2.0
    ep = -eta_a / 2.0
    es = -eta_b / 2.0
    if abs(np.linalg.det(op)) < 1e-14:
        return None
    tau = np.linalg.solve(op, os)
    scale = max(1.0, float(np.max(np.abs(tau))))
    if np.max(np.abs(tau - tau.T)) > 1e-9 * scale:
        return None
    y = (tau.imag + tau.imag.T) / 2.0
    if np.linalg.eigvalsh(y)[0] <= 1e-12:
        return None
    lhs = op.T @ es - ep.T @ os
    res_plus = float(np.max(np.abs(lhs - _PI_I_HALF * np.eye(2))))
    res_minus = float(np.max(np.abs(lhs + _PI_I_HALF * np.eye(2))))
    if min(res_plus, res_minus) > 1e-8:
        return None
    sign = 1 if res_plus <= res_minus else -1
    return tau, sign, min(res_plus, res_minus)


def periods_g2(curve: CurveV, tol: Tolerance = Tolerance()) -> PeriodsG2:
    """Period matrices of the four standard differentials on V.

    Chain loops around consecutive sorted branch points are combined into
    the candidate basis (g1, g3 | g2+g4, g4); the loop orientation pattern
    is the first of eight sign choices that passes the Riemann-relation
    certificate.
    """
    bps = _sorted_branch_points(curve.branch_points)
    _check_separation(bps)
    l2, l4 = curve.lambda2, curve.lambda4

    rhos = [
        lambda x: -x,  # omega_1
        lambda x: -np.ones_like(x),  # omega_3
        lambda x: -(x**2),  # eta_1
        lambda x: -3.0 * x**3 - 2.0 * l2 * x**2 - l4 * x,  # eta_3
    ]

    loops = []
    for j in range(4):
        p, q = bps[j], bps[j + 1]
        others = np.array([b for b in bps if b != p and b != q], dtype=complex)
        loops.append(_pair_loop_integrals(rhos, p, q, others, tol))
    loops = np.array(loops)  # (4 loops, 4 differentials)

    for signs in itertools.product((1, -1), repeat=3):
        f = np.array([1, signs[0], signs[0] * signs[1], signs[0] * signs[1] * signs[2]])
        g = loops * f[:, None]
        a1, a2 = g[0], g[2]
        b1, b2 = g[1] + g[3], g[3]
        omega_a = np.array([[a1[0], a2[0]], [a1[1], a2[1]]])
        omega_b = np.array([[b1[0], b2[0]], [b1[1], b2[1]]])
        eta_a = np.array([[a1[2], a2[2]], [a1[3], a2[3]]])
        eta_b = np.array([[b1[2], b2[2]], [b1[3], b2[3]]])
        cert = _certify_candidate(omega_a, omega_b, eta_a, eta_b)
        if cert is not None:
            tau, lsign, res = cert
            a_comb = np.zeros((2, 4), dtype=np.int64)
            b_comb = np.zeros((2, 4), dtype=np.int64)
            a_comb[0, 0], a_comb[1, 2] = f[0], f[2]
            b_comb[0, 1], b_comb[0, 3] = f[1], f[3]
            b_comb[1, 3] = f[3]
            basis = HomologyBasis(bps, a_comb, b_comb, tuple(signs))
            return PeriodsG2(omega_a, omega_b, eta_a, eta_b, tau, basis, lsign, res)
    raise NonConvergence(
        "no loop orientation produced a certified symplectic basis; "
        "branch-point chain may be self-crossing"
    )


def _cubic_of(curve) -> WeierstrassCurve:
    if isinstance(curve, LegendreCurve):
        return curve.as_cubic()
    if isinstance(curve, WeierstrassCurve):
        return curve
    raise InvalidParameters(f"periods need a cubic model, got {type(curve).__name__}")


def periods_g1(curve, tol: Tolerance = Tolerance()) -> PeriodsG1:
    """Periods of -dx/(2y) and -x dx/(2y) on a monic-cubic elliptic curve."""
    cubic = _cubic_of(curve)
    roots = _sorted_branch_points(cubic.roots)
    _check_separation(roots)
    rhos = [lambda x: -np.ones_like(x), lambda x: -x]

    vals = []
    for j in range(2):
        p, q = roots[j], roots[j + 1]
        others = np.array([b for b in roots if b != p and b != q], dtype=complex)
        vals.append(_pair_loop_integrals(rhos, p, q, others, tol))
    (oa, ea), (ob, eb) = vals[0], vals[1]

    tau = ob / oa
    if tau.imag < 0:
        ob, eb = -ob, -eb
        tau = -tau
    if abs(tau.imag) < 1e-12:
        raise NonConvergence("degenerate normalized period")
    # Legendre relation eta' omega'' - eta'' omega' = +- pi i / 2
    ep, es = -ea / 2.0, -eb / 2.0
    op, os_ = oa / 2.0, ob / 2.0
    res = min(abs(ep * os_ - es * op - _PI_I_HALF), abs(ep * os_ - es * op + _PI_I_HALF))
    if res > 1e-9:
        raise NonConvergence(f"genus-1 Legendre relation residual {res:.3g}")
    return PeriodsG1(oa, ob, ea, eb, tau, roots, float(res))


def transform_symplectic(periods: PeriodsG2, s: np.ndarray) -> PeriodsG2:
    """Periods in the homology basis transformed by the symplectic matrix s.

    ``s`` is 4x4 integer, symplectic for [[0, I], [-I, 0]]; new cycles are
    integer combinations of the old ones, so the new period matrices follow
    by linearity.  Used to exercise basis independence without recomputing
    any integrals.
    """
    s = np.asarray(s)
    j = np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]])
    if not np.allclose(s.T @ j @ s, j):
        raise InvalidParameters("matrix is not symplectic")
    p = np.hstack([periods.omega_a, periods.omega_b]) @ s
    q = np.hstack([periods.eta_a, periods.eta_b]) @ s
    omega_a, omega_b = p[:, :2], p[:, 2:]
    eta_a, eta_b = q[:, :2], q[:, 2:]
    cert = _certify_candidate(omega_a, omega_b, eta_a, eta_b)
    if cert is None:
        raise NonConvergence("transformed basis failed certification")
    tau, lsign, res = cert
    return PeriodsG2(
        omega_a, omega_b, eta_a, eta_b, tau, periods.basis, lsign, res
    )


# ---------------------------------------------------------------------------
# Abel maps
# ---------------------------------------------------------------------------


_WAYPOINT_ANGLES = (0.0, 0.41, -0.53, 1.13, -1.27, 2.03, -2.31, 2.9)


class _CurveModel:
    """What the Abel machinery needs: branch points and differential rows."""

    def __init__(self, branch_points: np.ndarray, rhos: Sequence[Callable], degree: int):
        self.branch = np.asarray(branch_points, dtype=complex)
        self.rhos = rhos
        self.degree = degree  # degree of the defining polynomial (odd: 3 or 5)
        self.poly = _poly_from_roots(self.branch)

    def clearance_scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self.branch))))


def _model_g2(curve: CurveV) -> _CurveModel:
    return _CurveModel(
        curve.branch_points,
        [lambda x: -x, lambda x: -np.ones_like(x)],
        5,
    )


def _model_g1(cubic: WeierstrassCurve) -> _CurveModel:
    return _CurveModel(cubic.roots, [lambda x: -np.ones_like(x)], 3)


def _piece_from_branch(
    model: _CurveModel, b: complex, z1: complex, tol: Tolerance
) -> Tuple[np.ndarray, complex]:
    """Integrals from branch point b to the point over z1 with + tracking.

    Returns (integral vector, y at the far end).  The far-end y belongs to
    the tracked branch; callers flip the whole piece when the other sheet
    is wanted (from a branch point either sheet is reachable).
    """
    others = np.array([c for c in model.branch if c != b], dtype=complex)
    span = z1 - b
    root_span = np.sqrt(complex(span))
    s_poly = _poly_from_roots(others)
    s_at_b = complex(s_poly(np.array([b], dtype=complex))[0])
    s_at_end = complex(s_poly(np.array([z1], dtype=complex))[0])
    y_end_holder = {}

    def integrand(t: np.ndarray):
        x = b + span * np.sin(np.pi * t / 2.0) ** 2
        # anchor at the branch point itself; carry the branch to the far end
        s_vals = np.concatenate([[s_at_b], s_poly(x), [s_at_end]])
        roots, worst = _tracked_sqrt(s_vals)
        pref = (np.pi / 2.0) * root_span * np.cos(np.pi * t / 2.0)
        rows = np.vstack([rho(x) * pref / roots[1:-1] for rho in model.rhos])
        y_end_holder["y"] = root_span * roots[-1]
        return rows, worst

    vals = _refined_quadrature(integrand, tol)
    return vals, y_end_holder["y"]


def _piece_branch_to_branch(
    model: _CurveModel, b0: complex, b1: complex, tol: Tolerance
) -> np.ndarray:
    """Integral from branch point b0 to branch point b1 (half a pair loop)."""
    others = np.array([c for c in model.branch if c != b0 and c != b1], dtype=complex)
    return _pair_loop_integrals(model.rhos, b0, b1, others, tol) / 2.0


def _piece_straight(
    model: _CurveModel, z0: complex, y0: complex, z1: complex, tol: Tolerance
) -> Tuple[np.ndarray, complex]:
    """Integrals along [z0, z1] with y anchored to y0 at z0."""
    span = z1 - z0
    y_end_holder = {}

    def integrand(t: np.ndarray):
        x = z0 + span * t
        m_vals = model.poly(x)
        ends = np.concatenate([[complex(model.poly(np.array([z0]))[0])], m_vals, [complex(model.poly(np.array([z1]))[0])]])
        roots, worst = _tracked_sqrt(ends, anchor=y0)
        y = roots[1:-1]
        y_end_holder["y"] = roots[-1]
        rows = np.vstack([rho(x) * span / (2.0 * y) for rho in model.rhos])
        return rows, worst

    vals = _refined_quadrature(integrand, tol)
    return vals, y_end_holder["y"]


def _piece_from_infinity(
    model: _CurveModel, z1: complex, y1: complex, tol: Tolerance
) -> np.ndarray:
    """Integrals from infinity to (z1, y1) along the ray through z1.

    Parametrized by x = z1 / s^2; the odd degree makes every holomorphic
    differential smooth in s at s = 0.
    """
    half_deg = model.degree  # 5 or 3
    root_z1 = np.sqrt(complex(z1))
    lead = root_z1**half_deg

    def g_poly(x: np.ndarray) -> np.ndarray:
        out = np.ones_like(x)
        for b in model.branch:
            out = out * (1.0 - b / x)
        return out

    def integrand(t: np.ndarray):
        s = t[::-1]  # track from the anchor end s = 1 toward s -> 0
        x = z1 / s**2
        g_vals = g_poly(x)
        with_anchor = np.concatenate([[complex(g_poly(np.array([z1]))[0])], g_vals])
        anchor_root = y1 / lead
        roots, worst = _tracked_sqrt(with_anchor, anchor=anchor_root)
        gr = roots[1:]
        # 1/(s^3 y) = s^(deg-3) / (lead * sqrt(g))
        inv = s ** (half_deg - 3) / (lead * gr)
        rows = np.vstack([-rho(x) * z1 * inv for rho in model.rhos])
        return rows[:, ::-1], worst

    return _refined_quadrature(integrand, tol)


def _clearance_ok(model: _CurveModel, z0: complex, z1: complex, skip=()) -> bool:
    """Segment admissibility: no branch point too close to [z0, z1].

    Points near either endpoint get a relaxed threshold (the sin^2 ramp of
    the endpoint substitutions clusters nodes there), points near the middle
    a strict one.
    """
    goal = 0.05 * model.clearance_scale()
    for c in model.branch:
        if any(abs(c - s) < 1e-12 * model.clearance_scale() for s in skip):
            continue
        threshold = min(goal, 0.45 * abs(c - z0), 0.45 * abs(c - z1))
        if _segment_clearance(z0, z1, np.array([c])) < threshold:
            return False
    return True


class _AbelMap:
    """Abelian integrals from infinity, with the expensive legs cached.

    One leg runs from infinity to the best-isolated branch point; movement
    between branch points uses the well-conditioned pair-segment integrals
    along the sorted chain.  Junctions at branch points may switch sheets
    freely, which only shifts results by lattice vectors: exactly the
    ambiguity the Abel map carries anyway.
    """

    def __init__(self, model: _CurveModel, tol: Tolerance):
        self.model = model
        self.tol = tol
        self.sorted_branch = _sorted_branch_points(model.branch)
        iso = [min(abs(b - c) for c in model.branch if c != b) for b in self.sorted_branch]
        self.star_index = int(np.argmax(iso))
        self._leg_infinity: Optional[np.ndarray] = None
        self._chain: Optional[List[np.ndarray]] = None

    def _infinity_leg(self) -> np.ndarray:
        if self._leg_infinity is not None:
            return self._leg_infinity
        model, tol = self.model, self.tol
        bstar = complex(self.sorted_branch[self.star_index])
        far = 3.0 * model.clearance_scale()
        goal = 0.05 * model.clearance_scale()
        base_dir = np.angle(bstar) if abs(bstar) > 1e-9 else 0.0
        for ang in _WAYPOINT_ANGLES:
            w = far * np.exp(1j * (base_dir + ang))
            if _ray_clearance(w, model.branch) < goal:
                continue
            if not _clearance_ok(model, w, bstar, skip=(bstar,)):
                continue
            piece_b_to_w, y_w = _piece_from_branch(model, bstar, w, tol)
            piece_inf_to_w = _piece_from_infinity(model, w, y_w, tol)
            self._leg_infinity = piece_inf_to_w - piece_b_to_w
            return self._leg_infinity
        raise NonConvergence("no clear route from infinity to the reference branch point")

    def _chain_pieces(self) -> List[np.ndarray]:
        if self._chain is None:
            self._chain = [
                _piece_branch_to_branch(self.model, self.sorted_branch[j], self.sorted_branch[j + 1], self.tol)
                for j in range(len(self.sorted_branch) - 1)
            ]
        return self._chain

    def to_branch(self, index: int) -> np.ndarray:
        """Integral from infinity to the sorted branch point ``index`` (mod lattice)."""
        value = self._infinity_leg().copy()
        chain = self._chain_pieces()
        j = self.star_index
        while j < index:
            value += chain[j]
            j += 1
        while j > index:
            value -= chain[j - 1]
            j -= 1
        return value

    def branch_index_of(self, p: AffinePoint) -> Optional[int]:
        if p.at_infinity:
            return None
        scale = self.model.clearance_scale()
        for j, b in enumerate(self.sorted_branch):
            if abs(p.x - b) < 1e-10 * scale:
                return j
        return None

    def from_infinity(self, p: AffinePoint) -> np.ndarray:
        model, tol = self.model, self.tol
        if p.at_infinity:
            return np.zeros(len(model.rhos), dtype=complex)
        hit = self.branch_index_of(p)
        if hit is not None:
            return self.to_branch(hit)
        # nearest admissible branch point carries the final leg; the sheet
        # sign is fixed by matching the tracked y to the requested point
        order = np.argsort(np.abs(self.sorted_branch - p.x))
        for idx in order:
            b = complex(self.sorted_branch[idx])
            if not _clearance_ok(model, b, p.x, skip=(b,)):
                continue
            tail, y_end = _piece_from_branch(model, b, p.x, tol)
            ratio = p.y / y_end
            sign = 1.0 if abs(ratio - 1.0) < abs(ratio + 1.0) else -1.0
            if abs(ratio - sign) > 1e-6 * max(1.0, abs(ratio)):
                raise NonConvergence("sheet tracking failed to land on the requested point")
            return self.to_branch(int(idx)) + sign * tail
        raise NonConvergence(f"no clear route to {p}")


_ABEL_CACHE: dict = {}


def _abel_map_for(key, model_factory, tol: Tolerance) -> _AbelMap:
    cache_key = (key, tol.abs_tol, tol.rel_tol, tol.max_refinements)
    found = _ABEL_CACHE.get(cache_key)
    if found is None:
        found = _AbelMap(model_factory(), tol)
        if len(_ABEL_CACHE) > 128:
            _ABEL_CACHE.clear()
        _ABEL_CACHE[cache_key] = found
    return found


def abel_g2(
    curve: CurveV,
    p: AffinePoint,
    basepoint: AffinePoint = INFINITY,
    tol: Tolerance = Tolerance(),
) -> np.ndarray:
    """Abel map of V: integral of (omega_1, omega_3) from basepoint to p.

    The value depends on the path only modulo the period lattice; tests use
    :func:`g2ell.numerics.lattice_member` against ``PeriodsG2.lattice_columns``
    for comparisons.
    """
    if not curve.contains(p, tol=1e-8) or not curve.contains(basepoint, tol=1e-8):
        raise InvalidParameters("abel map endpoints must lie on the curve")
    amap = _abel_map_for(("g2", curve.alpha, curve.beta), lambda: _model_g2(curve), tol)
    head = amap.from_infinity(p)
    if basepoint.at_infinity:
        return head
    return head - amap.from_infinity(basepoint)


def abel_g1(
    curve,
    p: AffinePoint,
    basepoint: AffinePoint = INFINITY,
    tol: Tolerance = Tolerance(),
) -> complex:
    """Abel map of a monic-cubic elliptic curve for -dx/(2y)."""
    cubic = _cubic_of(curve)
    if not cubic.contains(p) or not cubic.contains(basepoint):
        raise InvalidParameters("abel map endpoints must lie on the curve")
    amap = _abel_map_for(
        ("g1", cubic.lambda2, cubic.lambda4, cubic.lambda6), lambda: _model_g1(cubic), tol
    )
    head = amap.from_infinity(p)
    if not basepoint.at_infinity:
        head = head - amap.from_infinity(basepoint)
    return complex(head[0])


# ---------------------------------------------------------------------------
# half-period bookkeeping for the tilde-model basis convention
# ---------------------------------------------------------------------------


def halfperiod_class(periods: PeriodsG1, v: complex, tol: float = 1e-6) -> Tuple[int, int]:
    """Class of the half-period v in (1/2) Lambda / Lambda as a (0/1, 0/1) pair."""
    basis = np.array(
        [[periods.omega_a.real, periods.omega_b.real], [periods.omega_a.imag, periods.omega_b.imag]]
    )
    coeff = 2.0 * np.linalg.solve(basis, [v.real, v.imag])
    m = np.rint(coeff)
    if np.max(np.abs(coeff - m)) > 1e-4:
        raise NonConvergence(f"value {v} is not a half-period (coefficients {coeff})")
    return int(m[0]) % 2, int(m[1]) % 2


_GL2F2_LIFTS = {
    ((1, 0), (0, 1)): np.array([[1, 0], [0, 1]]),
    ((0, 1), (1, 0)): np.array([[0, 1], [-1, 0]]),
    ((1, 1), (0, 1)): np.array([[1, 1], [0, 1]]),
    ((1, 0), (1, 1)): np.array([[1, 0], [1, 1]]),
    ((0, 1), (1, 1)): np.array([[0, -1], [1, 1]]),
    ((1, 1), (1, 0)): np.array([[1, 1], [1, 2]]),
}


def periods_with_halfperiod_convention(
    curve: LegendreCurve,
    special_root: complex,
    tol: Tolerance = Tolerance(),
) -> PeriodsG1:
    """Basis of Lambda with prescribed half-period classes of the branch points.

    Rebases so that the integral from infinity to (special_root, 0) is the
    first half-period, the one to (0, 0) the second, and the one to the
    remaining root their sum.  The change of basis is the determinant-one
    lift of the unique GL(2, F_2) map sending the measured classes to the
    target classes, so Im tau stays positive.
    """
    base = periods_g1(curve, tol)
    roots = [special_root, 0.0]
    classes = []
    for r in roots:
        h = abel_g1(curve, AffinePoint(r, 0.0), INFINITY, tol)
        classes.append(halfperiod_class(base, h))
    c_mat = np.array([[classes[0][0], classes[1][0]], [classes[0][1], classes[1][1]]])
    if (int(round(np.linalg.det(c_mat))) % 2) == 0:
        raise NonConvergence("measured half-period classes are linearly dependent")
    # want M^{-1} c_special = (1,0), M^{-1} c_zero = (0,1)  =>  M = (c_special c_zero) mod 2
    key = ((c_mat[0, 0] % 2, c_mat[0, 1] % 2), (c_mat[1, 0] % 2, c_mat[1, 1] % 2))
    m = _GL2F2_LIFTS[key]
    p_new = np.array([base.omega_a, base.omega_b]) @ m
    q_new = np.array([base.eta_a, base.eta_b]) @ m
    oa, ob = complex(p_new[0]), complex(p_new[1])
    ea, eb = complex(q_new[0]), complex(q_new[1])
    tau = ob / oa
    if tau.imag <= 0:
        raise NonConvergence("rebased lattice lost orientation")
    ep, es = -ea / 2.0, -eb / 2.0
    res = min(
        abs(ep * ob / 2 - es * oa / 2 - _PI_I_HALF), abs(ep * ob / 2 - es * oa / 2 + _PI_I_HALF)
    )
    return PeriodsG1(oa, ob, ea, eb, tau, base.roots, float(res))


# ---------------------------------------------------------------------------
# Humbert relation search
# ---------------------------------------------------------------------------


def humbert_delta4(
    tau: np.ndarray, bound: int = 20, tol: float = 1e-6
) -> Optional[HumbertRelation]:
    """Integer relation h1 t11 + h2 t12 + h3 t22 + h4 (t12^2 - t11 t22) + h5 = 0.

    Exhaustive vectorized scan over |h_i| <= bound for relations with
    invariant h2^2 - 4 (h1 h3 + h4 h5) = 4; among hits, the smallest
    max-norm tuple (then lexicographic order) wins, to keep output stable.
    """
    tau = np.asarray(tau, dtype=complex)
    t11, t12, t22 = tau[0, 0], tau[0, 1], tau[1, 1]
    quad = t12**2 - t11 * t22
    rng = np.arange(-bound, bound + 1)

    h2 = rng[:, None, None]
    h3 = rng[None, :, None]
    h4 = rng[None, None, :]
    inner = h2 * t12 + h3 * t22 + h4 * quad
    tuples = []
    for h1 in rng:  # keep the scan at O(bound^3) memory
        value = h1 * t11 + inner
        h5 = -np.rint(value.real)
        residual = np.abs(value + h5)
        mask = (residual < tol) & (np.abs(h5) <= bound)
        if not np.any(mask):
            continue
        delta = h2**2 - 4 * (h1 * h3 + h4 * h5.astype(np.int64))
        mask &= delta == 4
        for i2, i3, i4 in np.argwhere(mask):
            h = (int(h1), int(rng[i2]), int(rng[i3]), int(rng[i4]), int(h5[i2, i3, i4]))
            tuples.append((max(abs(v) for v in h), h, float(residual[i2, i3, i4])))
    if not tuples:
        return None
    tuples.sort(key=lambda rec: (rec[0], rec[1]))
    _, h, res = tuples[0]
    return HumbertRelation(h, 4, res)
