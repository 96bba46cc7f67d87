"""Identity verification suites over a grid of test curves.

Each suite samples points on the Jacobian (through the Abel map, so the
arguments are honest divisor images away from the singular loci), evaluates
both sides of every identity it owns, and reports the worst relative
residual, normalized by the largest term magnitude so that pole proximity
does not inflate failures artificially.

The five-curve default grid mixes real, purely imaginary, and generic
complex parameters with the two classical 48-torsion fixtures.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .curves import CurveV, curve_v_from_alpha_beta, torsion48_curve
from .errors import DenominatorVanishes, G2EllError, NonConvergence, OnThetaDivisor
from .numerics import Tolerance
from .periods import abel_g2, humbert_delta4
from .reduction import (
    ReductionContext,
    al_product_coords,
    al_product_displays,
    f_direct,
    f_formula,
    jacobi_inversion,
    kdv_residuals,
    kummer_Z,
    kummer_Z_products,
    make_context,
    q_functions,
    restrict_wp,
    wp_addition,
    wp_from_Z,
    wp_on_Kv,
    wp_tilde_bridge,
)

__all__ = [
    "IdentityResult",
    "SUITES",
    "default_grid",
    "run_suite",
    "run_suites",
    "sample_jacobian_points",
    "sample_scalar_arguments",
]

SUITES = (
    "fundamental",
    "f-formulas",
    "restrictions",
    "addition",
    "kummer",
    "kdv",
    "humbert",
)


@dataclass
class IdentityResult:
    name: str
    description: str
    samples: int
    max_residual: float
    tolerance: float
    passed: bool

    def to_json(self) -> dict:
        return asdict(self)


def default_grid() -> List[CurveV]:
    return [
        curve_v_from_alpha_beta(2.0, 3.0),
        curve_v_from_alpha_beta(2.0, 3.0j),
        curve_v_from_alpha_beta(1.5 + 0.5j, 0.5 - 0.25j),
        torsion48_curve(1),
        torsion48_curve(2),
    ]


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def sample_jacobian_points(
    ctx: ReductionContext, rng: np.random.Generator, count: int, max_tries: int = 40
) -> List[np.ndarray]:
    """Arguments u = A(P) + A(Q) for random curve points with |x| <= 10.

    Rejects draws that land too near the theta divisor or produce huge wp
    values (where every identity degenerates to 0 = 0 in floating point).
    """
    out: List[np.ndarray] = []
    curve = ctx.curve
    tries = 0
    consecutive_failures = 0
    while len(out) < count and tries < max_tries * count:
        tries += 1
        xs = rng.uniform(-10, 10, size=2) + 1j * rng.uniform(-10, 10, size=2)
        if min(abs(x - b) / (1.0 + abs(b)) for x in xs for b in curve.branch_points) < 0.02:
            continue
        signs = rng.integers(0, 2, size=2) * 2 - 1
        try:
            u = abel_g2(curve, curve.point(xs[0], signs[0]), tol=ctx.tol) + abel_g2(
                curve, curve.point(xs[1], signs[1]), tol=ctx.tol
            )
            w = ctx.wps(u)
        except (OnThetaDivisor, NonConvergence):
            consecutive_failures += 1
            if consecutive_failures > 15:
                raise NonConvergence("Abel-map sampling keeps failing; curve too ill-conditioned")
            continue
        consecutive_failures = 0
        if max(abs(v) for v in w.values()) > 1e7:
            continue
        out.append(u)
    if len(out) < count:
        raise NonConvergence("could not sample enough Jacobian points")
    return out


def sample_scalar_arguments(
    periods, rng: np.random.Generator, count: int, lo: float = 0.12, hi: float = 0.44
) -> List[complex]:
    """Generic scalar arguments inside one lattice cell, away from half-periods."""
    out = []
    while len(out) < count:
        x1 = rng.uniform(lo, hi) * rng.choice((-1, 1))
        x2 = rng.uniform(lo, hi) * rng.choice((-1, 1))
        if abs(abs(x1) - 0.25) < 0.04 and abs(abs(x2) - 0.25) < 0.04:
            continue
        out.append(complex(x1 * periods.omega_a + x2 * periods.omega_b))
    return out


def _res(lhs: complex, rhs: complex, terms: Sequence[complex]) -> float:
    scale = max(1.0, max(abs(t) for t in terms))
    return abs(lhs - rhs) / scale


# ---------------------------------------------------------------------------
# the suites
# ---------------------------------------------------------------------------


def _fundamental_residuals(
    wp: Dict[Tuple[int, ...], complex], lambdas: Tuple[complex, ...]
) -> Dict[str, float]:
    l2, l4, l6, l8, _ = lambdas
    p11, p13, p33 = wp[(1, 1)], wp[(1, 3)], wp[(3, 3)]
    p111, p113, p133, p333 = wp[(1, 1, 1)], wp[(1, 1, 3)], wp[(1, 3, 3)], wp[(3, 3, 3)]
    out = {}
    terms = (p111**2, 4 * p33, 4 * l4 * p11, 4 * p11**3, 4 * p13 * p11, 4 * l2 * p11**2, 4 * l6)
    out["wp111_squared"] = _res(p111**2, sum(terms[1:]), terms)
    terms = (p111 * p113, 2 * l8, 2 * p13**2, -2 * p33 * p11, 2 * l4 * p13, 4 * p13 * p11**2, 4 * l2 * p13 * p11)
    out["wp111_wp113"] = _res(p111 * p113, sum(terms[1:]), terms)
    terms = (p113**2, -4 * p33 * p13, 4 * l2 * p13**2, 4 * p11 * p13**2)
    out["wp113_squared"] = _res(p113**2, sum(terms[1:]), terms)
    terms = (p33, -p11 * p13, 0.25 * p111**2, -(p11**3), -l2 * p11**2, -l4 * p11, -l6)
    out["wp33_from_lower"] = _res(p33, sum(terms[1:]), terms)
    terms = (p133, p111 * p13, -p11 * p113)
    out["wp133_bilinear"] = _res(p133, sum(terms[1:]), terms)
    terms = (p333, 2 * p11 * p133, -p33 * p111, -p13 * p113, 2 * l2 * p133, -l4 * p113)
    out["wp333_bilinear"] = _res(p333, sum(terms[1:]), terms)
    return out


def _suite_fundamental(
    ctx: ReductionContext,
    samples: List[np.ndarray],
    tolerance: float,
    lambda_override: Optional[Dict[str, complex]] = None,
) -> List[IdentityResult]:
    lambdas = list(ctx.curve.lambdas)
    if lambda_override:
        names = ["lambda2", "lambda4", "lambda6", "lambda8", "lambda10"]
        for key, val in lambda_override.items():
            lambdas[names.index(key)] = val
    worst: Dict[str, float] = {}
    for u in samples:
        for name, value in _fundamental_residuals(ctx.wps(u), tuple(lambdas)).items():
            worst[name] = max(worst.get(name, 0.0), value)
    descriptions = {
        "wp111_squared": "square of wp_111 against the cubic in wp_11",
        "wp111_wp113": "product wp_111 wp_113 against its polynomial form",
        "wp113_squared": "square of wp_113 against the quadratic in wp_13",
        "wp33_from_lower": "wp_33 determined by wp_11, wp_13, wp_111",
        "wp133_bilinear": "wp_133 as a bilinear of lower wp values",
        "wp333_bilinear": "wp_333 as a bilinear of lower wp values",
    }
    return [
        IdentityResult(name, descriptions[name], len(samples), worst[name], tolerance, worst[name] < tolerance)
        for name in descriptions
    ]


def _suite_f_formulas(ctx, samples, tolerance) -> List[IdentityResult]:
    out = []
    for i in (1, 2):
        worst = 0.0
        used = 0
        for u in samples:
            try:
                fd = f_direct(ctx, i, u)
                ff = f_formula(ctx, i, u)
            except (DenominatorVanishes, G2EllError):
                continue
            used += 1
            worst = max(worst, abs(ff - fd) / max(1.0, abs(fd)))
        out.append(
            IdentityResult(
                f"pushforward_wp_E{i}",
                f"rational expression for wp_E{i} of the push-forward vs direct evaluation",
                used,
                worst,
                tolerance,
                worst < tolerance and used > 0,
            )
        )
    return out


def _suite_restrictions(ctx, rng, count, tolerance, abs13_tol=1e-8) -> List[IdentityResult]:
    out = []
    keys = [(1, 1), (1, 3), (3, 3), (1, 1, 1), (1, 1, 3), (1, 3, 3), (3, 3, 3)]
    ab2 = (ctx.alpha * ctx.beta) ** 2
    for i in (1, 2):
        vs = sample_scalar_arguments(ctx.sig_e[i - 1].periods, rng, count)
        worst = {k: 0.0 for k in keys}
        worst13 = 0.0
        for v in vs:
            w = ctx.wps(ctx.pull(i, v))
            for k in keys:
                rhs = restrict_wp(ctx, i, k, v)
                worst[k] = max(worst[k], abs(w[k] - rhs) / max(1.0, abs(rhs)))
            worst13 = max(worst13, abs(w[(1, 3)] + ab2))
        for k in keys:
            tag = "".join(str(j) for j in k)
            out.append(
                IdentityResult(
                    f"restriction_wp{tag}_line{i}",
                    f"wp_{tag} on the pull-back line of E_{i} in closed form",
                    count,
                    worst[k],
                    tolerance,
                    worst[k] < tolerance,
                )
            )
        out.append(
            IdentityResult(
                f"restriction_wp13_constant_line{i}",
                f"wp_13 is constant -(ab)^2 on the pull-back line of E_{i}",
                count,
                worst13,
                abs13_tol,
                worst13 < abs13_tol,
            )
        )
    return out


def _suite_addition(ctx, rng, count, tolerance) -> List[IdentityResult]:
    pair_samples = sample_jacobian_points(ctx, rng, 2 * count)
    worst = [0.0, 0.0, 0.0]
    antisym = 0.0
    used = 0
    for j in range(count):
        u, v = pair_samples[2 * j], pair_samples[2 * j + 1]
        try:
            got = wp_addition(ctx, u, v)
            w = ctx.wps(u + v)
            q_uv = q_functions(ctx, u, v)
            q_vu = q_functions(ctx, v, u)
        except (DenominatorVanishes, OnThetaDivisor):
            continue
        used += 1
        for idx, key in enumerate([(1, 1), (1, 3), (3, 3)]):
            worst[idx] = max(worst[idx], abs(got[idx] - w[key]) / max(1.0, abs(w[key])))
        antisym = max(antisym, max(abs(a + b) for a, b in zip(q_uv, q_vu)) / max(1.0, abs(q_uv[0])))
    out = [
        IdentityResult(
            f"addition_wp{tag}",
            f"two-argument formula for wp_{tag}(u+v)",
            used,
            worst[idx],
            tolerance,
            worst[idx] < tolerance and used > 0,
        )
        for idx, tag in enumerate(("11", "13", "33"))
    ]
    out.append(
        IdentityResult(
            "addition_q_antisymmetry",
            "q-functions change sign when the arguments swap",
            used,
            antisym,
            tolerance,
            antisym < tolerance,
        )
    )
    return out


def _suite_pull_push(ctx, rng, count, tolerance) -> List[IdentityResult]:
    """Full-plane expressions wp_jk(K v) in both elliptic wp functions."""
    worst = {(1, 1): 0.0, (1, 3): 0.0, (3, 3): 0.0}
    used = 0
    v1s = sample_scalar_arguments(ctx.sig_e[0].periods, rng, count)
    v2s = sample_scalar_arguments(ctx.sig_e[1].periods, rng, count)
    for v1, v2 in zip(v1s, v2s):
        u = ctx.K @ np.array([v1, v2])
        try:
            w = ctx.wps(u)
            for key in worst:
                rhs = wp_on_Kv(ctx, key, v1, v2)
                worst[key] = max(worst[key], abs(w[key] - rhs) / max(1.0, abs(rhs)))
        except (DenominatorVanishes, OnThetaDivisor):
            continue
        used += 1
    return [
        IdentityResult(
            f"two_elliptic_wp{''.join(map(str, key))}",
            f"wp_{''.join(map(str, key))} on the doubled plane from both elliptic wp functions",
            used,
            worst[key],
            tolerance,
            worst[key] < tolerance and used > 0,
        )
        for key in worst
    ]


def _suite_kummer(ctx, rng, count, samples, tolerance_products=1e-6) -> List[IdentityResult]:
    out = []
    rt_worst = 0.0
    prod_worst = 0.0
    al_worst = 0.0
    used = 0
    al_scale = (ctx.kappa1 * ctx.kappa2) ** 2
    for u in samples:
        try:
            z = kummer_Z(ctx, u)
            back = wp_from_Z(ctx, *z)
            w = ctx.wps(u)
            prods = kummer_Z_products(ctx, u)
            alp = al_product_coords(ctx, u)
            disp = al_product_displays(ctx, u)
        except (DenominatorVanishes, OnThetaDivisor):
            continue
        used += 1
        for idx, key in enumerate([(1, 1), (1, 3), (3, 3)]):
            rt_worst = max(rt_worst, abs(back[idx] - w[key]) / max(1.0, abs(w[key])))
        prod_worst = max(prod_worst, max(abs(z[j] - prods[j]) / max(1.0, abs(z[j])) for j in range(3)))
        al_worst = max(al_worst, max(abs(al_scale * alp[j] - disp[j]) / max(1.0, abs(disp[j])) for j in range(3)))
    out.append(IdentityResult("kummer_round_trip", "wp -> Z -> wp is the identity", used, rt_worst, 1e-8, rt_worst < 1e-8 and used > 0))
    out.append(IdentityResult("kummer_Z_vs_jacobi_products", "Z coordinates equal sn/cn/dn products", used, prod_worst, tolerance_products, prod_worst < tolerance_products))
    out.append(
        IdentityResult(
            "al_products_vs_displays",
            "al-function products match the rational displays (displays carry the constant (k1 k2)^2)",
            used,
            al_worst,
            tolerance_products,
            al_worst < tolerance_products,
        )
    )

    bridge_worst = {"affine": 0.0, "sn2": 0.0, "cn2": 0.0, "dn2": 0.0}
    bused = 0
    for i in (1, 2):
        args = sample_scalar_arguments(ctx.tilde[i - 1].periods, rng, max(4, count // 2))
        for uu in args:
            try:
                r = wp_tilde_bridge(ctx, i, uu)
            except G2EllError:
                continue
            bused += 1
            for k in bridge_worst:
                bridge_worst[k] = max(bridge_worst[k], r[k])
    out.append(
        IdentityResult(
            "tilde_model_affine_bridge",
            "wp of E_i at the rotated argument vs affine function of the tilde-model wp",
            bused,
            max(bridge_worst["affine"], 0.0),
            1e-7,
            bridge_worst["affine"] < 1e-7 and bused > 0,
        )
    )
    sn_worst = max(bridge_worst["sn2"], bridge_worst["cn2"], bridge_worst["dn2"])
    out.append(
        IdentityResult(
            "tilde_model_jacobi_squares",
            "sn^2, cn^2, dn^2 as rational functions of the tilde-model wp",
            bused,
            sn_worst,
            1e-7,
            sn_worst < 1e-7 and bused > 0,
        )
    )
    return out


def _suite_kdv(ctx, samples, tolerance, h=1e-3) -> List[IdentityResult]:
    worst = [0.0, 0.0, 0.0]
    used = 0
    for u in samples:
        try:
            r = kdv_residuals(ctx, u, h)
        except (OnThetaDivisor, G2EllError):
            continue
        used += 1
        for j in range(3):
            worst[j] = max(worst[j], r[j])
    names = (
        ("kdv_flow", "third-order flow equation for twice wp_11 plus the quartic coefficient"),
        ("kdv_mixed", "mixed third-derivative constraint coupling the flow to twice wp_13"),
        ("kdv_compatibility", "equality of the cross derivatives of the two potentials"),
    )
    return [
        IdentityResult(names[j][0], names[j][1], used, worst[j], tolerance, worst[j] < tolerance and used > 0)
        for j in range(3)
    ]


def _suite_humbert(ctx, tolerance=1e-6, bound=20) -> List[IdentityResult]:
    rel = humbert_delta4(ctx.sig_v.periods.tau, bound=bound, tol=tolerance)
    found = rel is not None
    return [
        IdentityResult(
            "humbert_delta4",
            "integer quadratic relation of invariant 4 on the normalized period matrix"
            + (f"; h = {list(rel.h)}" if found else ""),
            1,
            rel.residual if found else float("inf"),
            tolerance,
            found and rel.residual < tolerance,
        )
    ]


# ---------------------------------------------------------------------------
# drivers
# ---------------------------------------------------------------------------


def run_suite(
    ctx: ReductionContext,
    suite: str,
    samples: int = 20,
    seed: int = 42,
    lambda_override: Optional[Dict[str, complex]] = None,
) -> List[IdentityResult]:
    """Run one named identity suite against a prepared context."""
    rng = np.random.default_rng(seed)
    if suite == "fundamental":
        pts = sample_jacobian_points(ctx, rng, samples)
        return _suite_fundamental(ctx, pts, 1e-6, lambda_override)
    if suite == "f-formulas":
        pts = sample_jacobian_points(ctx, rng, samples)
        return _suite_f_formulas(ctx, pts, 1e-6)
    if suite == "restrictions":
        return _suite_restrictions(ctx, rng, samples, 1e-6)
    if suite == "addition":
        half = max(2, samples // 2)
        out = _suite_addition(ctx, rng, half, 1e-6)
        out.extend(_suite_pull_push(ctx, rng, samples, 1e-6))
        return out
    if suite == "kummer":
        pts = sample_jacobian_points(ctx, rng, samples)
        return _suite_kummer(ctx, rng, samples, pts)
    if suite == "kdv":
        pts = sample_jacobian_points(ctx, rng, samples)
        return _suite_kdv(ctx, pts, 1e-5)
    if suite == "humbert":
        return _suite_humbert(ctx)
    raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")


def run_suites(
    curve: CurveV,
    suites: Sequence[str],
    samples: int = 20,
    seed: int = 42,
    tol: Tolerance = Tolerance(),
    lambda_override: Optional[Dict[str, complex]] = None,
) -> dict:
    """Run several suites on one curve and assemble a JSON-ready report."""
    ctx = make_context(curve, tol)
    report = {
        "alpha": [curve.alpha.real, curve.alpha.imag],
        "beta": [curve.beta.real, curve.beta.imag],
        "samples": samples,
        "seed": seed,
        "suites": {},
        "pass": True,
    }
    for suite in suites:
        results = run_suite(ctx, suite, samples, seed, lambda_override if suite == "fundamental" else None)
        report["suites"][suite] = [r.to_json() for r in results]
        report["pass"] = report["pass"] and all(r.passed for r in results)
    return report
