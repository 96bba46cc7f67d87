"""Genus-2 sigma/wp functions for curves with degree-2 elliptic covers.

Build a curve V : y^2 = x(x-1)(x-a^2)(x-b^2)(x-a^2 b^2), compute its period
matrices and two-dimensional sigma function from first principles (periods
-> theta -> sigma -> log-derivatives), do the same for its two elliptic
quotients, and verify numerically every identity tying the genus-2 wp
functions to the elliptic ones.
"""
from .curves import (
    AffinePoint,
    INFINITY,
    CurveHPrime,
    CurveV,
    JacobiQuarticCurve,
    LegendreCurve,
    WeierstrassCurve,
    alpha_beta_from_e,
    curve_v_from_alpha_beta,
    e_from_alpha_beta,
    elliptic_targets,
    phi,
    phi_preimage,
    torsion48_curve,
    weierstrass_normalize,
)
from .errors import (
    BranchCollision,
    CalibrationFailure,
    DegenerateLattice,
    DenominatorVanishes,
    G2EllError,
    InvalidParameters,
    NearDegenerateBranchPoints,
    NonConvergence,
    OnLattice,
    OnThetaDivisor,
    PoleOfSn,
    SingularSample,
)
from .numerics import PathSegment, Tolerance, integrate_segment, lattice_member
from .theta import BACKEND as THETA_BACKEND

__version__ = "0.1.0"
