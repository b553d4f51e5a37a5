"""Contact-condition verification at sampled points.

Every check evaluates exact algebraic expressions on deterministically
sampled points and aggregates the worst case into a report: single forms on a
level set, one-parameter families, the closed-form factorization of the top
wedge alpha ^ (d alpha)^{n-1} ^ dR ^ df ^ dfbar, the perturbation-scale
search for the branched-covering form, the pullback identity of the covering
projection, the first variation of the pulled-back level family, and the
inverted-first-weight form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .exterior import (
    DiagonalOneForm,
    TangentFrame,
    contact_value,
    cpoint,
    eval_one_form,
    eval_two_form,
    first_angular_form,
    level_contact_form,
    tangent_frame,
    to_real,
    top_form_value,
    weighted_contact_form,
)
from .geometry import (
    LevelSpec,
    brieskorn_poly,
    check_exponents,
    poly_gradient,
    sample_level_set,
    sample_level_set_with_stats,
    scale_flow,
    _solve_scale_time,
)

__all__ = [
    "VerificationReport",
    "DegenerateWedgeIdentity",
    "verify_contact",
    "verify_family",
    "WedgeIdentityTerms",
    "wedge_identity_terms",
    "wedge_identity_ratio",
    "wedge_identity_bracket",
    "sample_branch_locus",
    "perturbation_scale_search",
    "pullback_check",
    "pulled_back_form_value",
    "s_derivative_check",
    "negative_weight_bracket",
    "negative_weight_sign_check",
    "negative_weight_sign_search",
]

RESIDUAL_TOL = 1e-9
DEFAULT_THRESHOLD = 1e-6


@dataclass
class VerificationReport:
    """Structured result of a sampled check."""

    check: str
    params: dict
    sample_count: int
    seed: int | None
    min_value: float | None
    max_residual: float | None
    sign_consistent: bool | None
    witnesses: list
    tolerances: dict
    passed: bool
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "params": self.params,
            "sample_count": self.sample_count,
            "seed": self.seed,
            "min_value": self.min_value,
            "max_residual": self.max_residual,
            "sign_consistent": self.sign_consistent,
            "witnesses": self.witnesses,
            "tolerances": self.tolerances,
            "pass": self.passed,
            "extras": self.extras,
        }


class DegenerateWedgeIdentity(RuntimeError):
    """The closed-form side is numerically zero; both sides are attached."""

    def __init__(self, lhs: complex, rhs: complex):
        super().__init__(f"degenerate identity locus: lhs={lhs!r}, rhs={rhs!r}")
        self.lhs = lhs
        self.rhs = rhs


def _point_witness(z, value) -> dict:
    return {"point": np.asarray(z), "value": value}


def _greedy_chain_order(points: list[np.ndarray]) -> list[int]:
    coords = np.array([to_real(z) for z in points])
    n = len(points)
    dist = np.linalg.norm(coords[:, None, :] - coords[None, :, :], axis=2)
    visited = [0]
    free = set(range(1, n))
    while free:
        cur = visited[-1]
        nxt = min(free, key=lambda j: dist[cur, j])
        visited.append(nxt)
        free.remove(nxt)
    return visited


def _chain_sign_consistency(points, frames, values) -> bool | None:
    """Transport frame orientation along a nearest-neighbor chain.

    Frame orientations from null-space computations are arbitrary, so raw
    signs are meaningless; the transported signs are informational only.
    """
    if len(points) < 2:
        return True
    order = _greedy_chain_order(points)
    mats = [frames[i].real_matrix() for i in range(len(frames))]
    chain_sign = {order[0]: 1.0}
    for prev, cur in zip(order, order[1:]):
        overlap = np.linalg.det(mats[cur] @ mats[prev].T)
        if abs(overlap) < 1e-8:
            return None
        chain_sign[cur] = chain_sign[prev] * (1.0 if overlap > 0 else -1.0)
    oriented = [values[i] * chain_sign[i] for i in range(len(values))]
    return all(v > 0 for v in oriented) or all(v < 0 for v in oriented)


def verify_contact(
    form: DiagonalOneForm,
    spec: LevelSpec,
    samples: Sequence,
    threshold: float = DEFAULT_THRESHOLD,
    seed: int | None = None,
    check: str = "verify-contact",
) -> VerificationReport:
    """Evaluate the contact volume on tangent frames at every sample.

    Passes when every |value| exceeds the threshold and the samples sit on
    the level set; orientation coherence along a sample chain is recorded
    but does not gate the result.
    """
    cs = spec.constraint_set()
    pts = [cpoint(z) for z in samples]
    frames: list[TangentFrame] = []
    values: list[float] = []
    max_res = 0.0
    for z in pts:
        max_res = max(max_res, cs.max_residual(z))
        frame = tangent_frame(cs, z, spec.frame_dim)
        frames.append(frame)
        values.append(contact_value(form, frame))
    abs_vals = [abs(v) for v in values]
    min_value = min(abs_vals)
    passed = min_value > threshold and max_res <= RESIDUAL_TOL
    sign = _chain_sign_consistency(pts, frames, values) if min_value > threshold else None
    worst = np.argsort(abs_vals)[:3]
    witnesses = [_point_witness(pts[i], values[i]) for i in worst]
    return VerificationReport(
        check=check,
        params={"form": list(form.coeffs), "spec": spec.label()},
        sample_count=len(pts),
        seed=seed,
        min_value=min_value,
        max_residual=max_res,
        sign_consistent=sign,
        witnesses=witnesses,
        tolerances={"threshold": threshold, "residual": RESIDUAL_TOL},
        passed=passed,
    )


def verify_family(
    family: Callable[[float], DiagonalOneForm],
    t_grid: Sequence[float],
    spec,
    count: int,
    seed: int,
    threshold: float = DEFAULT_THRESHOLD,
    check: str = "verify-family",
) -> VerificationReport:
    """Run verify_contact for each t; spec may be fixed or a function of t."""
    t_grid = [float(t) for t in t_grid]
    if not t_grid:
        raise ValueError("empty t grid")
    spec_fn = spec if callable(spec) else (lambda _t: spec)
    fixed_spec = None if callable(spec) else spec
    fixed_samples = None
    if fixed_spec is not None:
        fixed_samples = sample_level_set(fixed_spec, count, seed)
    per_t = []
    min_value = math.inf
    max_res = 0.0
    worst = None
    all_pass = True
    for idx, t in enumerate(t_grid):
        spec_t = spec_fn(t)
        samples = fixed_samples if fixed_samples is not None else sample_level_set(
            spec_t, count, (seed, idx)
        )
        rep = verify_contact(family(t), spec_t, samples, threshold=threshold, seed=seed)
        per_t.append({"t": t, "min_value": rep.min_value, "pass": rep.passed})
        all_pass = all_pass and rep.passed
        max_res = max(max_res, rep.max_residual)
        if rep.min_value < min_value:
            min_value = rep.min_value
            worst = {"t": t, **rep.witnesses[0]}
    return VerificationReport(
        check=check,
        params={"t_grid": t_grid, "spec": spec_fn(t_grid[0]).label(), "count": count},
        sample_count=count * len(t_grid),
        seed=seed,
        min_value=min_value,
        max_residual=max_res,
        sign_consistent=None,
        witnesses=[worst] if worst else [],
        tolerances={"threshold": threshold, "residual": RESIDUAL_TOL},
        passed=all_pass,
        extras={"per_t": per_t},
    )


def _poly_covector(exponents, z) -> np.ndarray:
    w = poly_gradient(exponents, z)
    out = np.empty(2 * len(exponents), dtype=complex)
    out[0::2] = w
    out[1::2] = 1j * w
    return out


def _poly_conj_covector(exponents, z) -> np.ndarray:
    w = np.conj(poly_gradient(exponents, z))
    out = np.empty(2 * len(exponents), dtype=complex)
    out[0::2] = w
    out[1::2] = -1j * w
    return out


def _radius_covector(weights, z) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    z = cpoint(z)
    out = np.empty(2 * z.size, dtype=complex)
    out[0::2] = 2.0 * w * z.real
    out[1::2] = 2.0 * w * z.imag
    return out


def wedge_identity_bracket(exponents, s: float, z, on_level: bool = False) -> complex:
    """Closed-form scalar multiplying the reference volume form.

    The general expression is valid at any ambient point; with on_level=True
    the simplified form (radius one, polynomial zero) is returned instead.
    """
    e = np.asarray(check_exponents(exponents))
    z = cpoint(z)
    s = float(s)
    mods = np.abs(z)
    if on_level:
        return complex(
            -2.0
            * (
                e[0] * mods[0] ** (2 * (e[0] - 1))
                + s * np.sum(e[1:] * mods[1:] ** (2 * (e[1:] - 1)))
            )
        )
    f = brieskorn_poly(exponents, z)
    radius = s * mods[0] ** 2 + float(np.sum(mods[1:] ** 2))
    t1 = s * np.conj(f) * np.sum(e * z**e)
    t2 = s * f * np.sum(e * np.conj(z) ** e)
    t3 = -2.0 * e[0] * radius * mods[0] ** (2 * (e[0] - 1))
    t4 = -2.0 * s * radius * np.sum(e[1:] * mods[1:] ** (2 * (e[1:] - 1)))
    return complex(t1 + t2 + t3 + t4)


def reference_volume_value(exponents) -> complex:
    """Value of (i^n (n-1)!/2) prod(a_j) dz_0^dzbar_0^...^dz_n^dzbar_n on the basis."""
    e = check_exponents(exponents)
    m = len(e)
    n = m - 1
    prod = 1
    for a in e:
        prod *= a
    return complex((1j**n) * math.factorial(n - 1) / 2.0 * prod * (-2j) ** m)


@dataclass(frozen=True)
class WedgeIdentityTerms:
    lhs: complex
    rhs: complex
    bracket: complex
    volume: complex
    ratio: complex | None


def wedge_identity_terms(exponents, s: float, z, degenerate_tol: float = 1e-12) -> WedgeIdentityTerms:
    """Both sides of the top-wedge factorization at an arbitrary ambient point.

    The left side is the direct exterior-algebra expansion of
    alpha_s ^ (d alpha_s)^{n-1} ^ dR_s ^ df ^ dfbar on the standard real
    basis; the right side is the closed-form bracket times the reference
    volume.  The ratio is withheld when the right side is numerically zero.
    """
    e = check_exponents(exponents)
    z = cpoint(z)
    if z.size != len(e):
        raise ValueError("length mismatch between exponents and point")
    s = float(s)
    n = len(e) - 1
    form = level_contact_form(e, s)
    weights = (s,) + (1.0,) * n
    factors = [
        form.covector(z),
        _radius_covector(weights, z),
        _poly_covector(e, z),
        _poly_conj_covector(e, z),
    ]
    lhs = top_form_value(factors, form.two_form_matrix(), n - 1)
    bracket = wedge_identity_bracket(e, s, z)
    volume = reference_volume_value(e)
    rhs = bracket * volume
    ratio = None if abs(rhs) < degenerate_tol else lhs / rhs
    return WedgeIdentityTerms(lhs=lhs, rhs=rhs, bracket=bracket, volume=volume, ratio=ratio)


def wedge_identity_ratio(exponents, s: float, z) -> complex:
    """Ratio of the expanded wedge to its closed form; 1 when the identity holds."""
    terms = wedge_identity_terms(exponents, s, z)
    if terms.ratio is None:
        raise DegenerateWedgeIdentity(terms.lhs, terms.rhs)
    return terms.ratio


def sample_branch_locus(exponents, count: int, seed) -> list[np.ndarray]:
    """Points (0, w) of the cylinder level set with vanishing first coordinate.

    These are exactly the points over the branching locus of the covering
    projection; empty when the tail consists of a single exponent.
    """
    e = check_exponents(exponents)
    tail = e[1:]
    if len(tail) < 2:
        return []
    tail_points = sample_level_set(LevelSpec.level(tail, 1.0), count, seed)
    return [np.concatenate(([0.0 + 0.0j], w)) for w in tail_points]


def perturbation_scale_search(
    exponents,
    samples: Sequence,
    eps_max: float = 1.0,
    threshold: float = DEFAULT_THRESHOLD,
    max_halvings: int = 40,
    branch_samples: Sequence = (),
    seed: int | None = None,
) -> tuple[float | None, VerificationReport]:
    """Largest eps = eps_max * 2^-k making the perturbed pullback form contact.

    The candidate form has coefficients (eps, a_1, ..., a_n) on the cylinder
    level set; frames are built once and reused across the geometric eps
    sweep.  At branch samples the exterior derivative of the perturbation
    direction is checked to be positive on the covering kernel (the first
    coordinate plane).
    """
    e = check_exponents(exponents)
    spec = LevelSpec.cylinder(e)
    cs = spec.constraint_set()
    pts = [cpoint(z) for z in samples]
    max_res = max((cs.max_residual(z) for z in pts), default=0.0)
    frames = [tangent_frame(cs, z, spec.frame_dim) for z in pts]
    tail = tuple(float(a) for a in e[1:])
    trajectory = []
    eps_star = None
    star_min = None
    for k in range(max_halvings + 1):
        eps = float(eps_max) * 2.0**-k
        form = DiagonalOneForm((eps,) + tail)
        min_val = min(abs(contact_value(form, fr)) for fr in frames)
        ok = bool(min_val > threshold)
        trajectory.append({"eps": eps, "min_value": min_val, "pass": ok})
        if ok and eps_star is None:
            eps_star = eps
            star_min = min_val
    # monotone along the sweep: once an eps passes, every smaller tested one passes
    monotone = True
    seen_pass = False
    for row in trajectory:
        if seen_pass and not row["pass"]:
            monotone = False
        seen_pass = seen_pass or row["pass"]
    kernel_two_form_min = None
    gamma = first_angular_form(len(e))
    if branch_samples:
        u0 = np.zeros(len(e), dtype=complex)
        u0[0] = 1.0
        v0 = np.zeros(len(e), dtype=complex)
        v0[0] = 1j
        kernel_two_form_min = min(
            eval_two_form(gamma, cpoint(z), u0, v0) for z in branch_samples
        )
    passed = eps_star is not None and monotone and (
        kernel_two_form_min is None or kernel_two_form_min > 0.0
    )
    report = VerificationReport(
        check="epsilon-search",
        params={"exponents": list(e), "eps_max": eps_max, "max_halvings": max_halvings},
        sample_count=len(pts),
        seed=seed,
        min_value=star_min,
        max_residual=max_res,
        sign_consistent=None,
        witnesses=[],
        tolerances={"threshold": threshold, "residual": RESIDUAL_TOL},
        passed=passed,
        extras={
            "eps_star": eps_star,
            "monotone": monotone,
            "kernel_two_form_min": kernel_two_form_min,
            "trajectory": trajectory,
        },
    )
    return eps_star, report


def pullback_check(
    exponents,
    samples: Sequence,
    seed: int = 0,
    tol: float = 1e-10,
) -> VerificationReport:
    """The cylinder form equals the covering pullback of the weighted sphere form.

    For random tangent vectors v at each sample, |alpha_0(v) - beta(dpi v)|
    must vanish, where beta carries the tail weights and dpi drops the first
    component.
    """
    e = check_exponents(exponents)
    spec = LevelSpec.cylinder(e)
    cs = spec.constraint_set()
    alpha0 = level_contact_form(e, 0.0)
    beta = weighted_contact_form(e[1:])
    max_dev = 0.0
    max_res = 0.0
    worst = None
    pts = [cpoint(z) for z in samples]
    for i, z in enumerate(pts):
        max_res = max(max_res, cs.max_residual(z))
        frame = tangent_frame(cs, z, spec.frame_dim)
        rng = np.random.default_rng((seed, i))
        coeffs = rng.standard_normal(frame.dim)
        v = sum(c * b for c, b in zip(coeffs, frame.basis))
        v = v / np.linalg.norm(to_real(v))
        dev = abs(eval_one_form(alpha0, z, v) - eval_one_form(beta, z[1:], v[1:]))
        if dev > max_dev:
            max_dev = dev
            worst = _point_witness(z, dev)
    return VerificationReport(
        check="pullback",
        params={"exponents": list(e)},
        sample_count=len(pts),
        seed=seed,
        min_value=None,
        max_residual=max_res,
        sign_consistent=None,
        witnesses=[worst] if worst else [],
        tolerances={"deviation": tol, "residual": RESIDUAL_TOL},
        passed=max_dev < tol and max_res <= RESIDUAL_TOL,
        extras={"max_deviation": max_dev},
    )


def _ambient_inverse_isotopy(exponents, w) -> np.ndarray:
    """Ambient extension of the inverse isotopy: flow onto the unit sphere."""
    e = check_exponents(exponents)
    w = cpoint(w)
    t = _solve_scale_time(e, np.abs(w) ** 2)
    return scale_flow(e, w, t)


def pulled_back_form_value(exponents, w, v, s: float, fd_step: float = 1e-5) -> float:
    """Value at (w, v) of the level form pulled back through the inverse isotopy.

    The differential of the inverse isotopy is approximated by a central
    finite difference with step fd_step along v.
    """
    e = check_exponents(exponents)
    w = cpoint(w)
    v = cpoint(v)
    form = level_contact_form(e, s)
    zp = _ambient_inverse_isotopy(e, w + fd_step * v)
    zm = _ambient_inverse_isotopy(e, w - fd_step * v)
    image_v = (zp - zm) / (2.0 * fd_step)
    image_w = _ambient_inverse_isotopy(e, w)
    return eval_one_form(form, image_w, image_v)


def s_derivative_first_variation(exponents, w, v) -> float:
    """Analytic first variation of the pulled-back family at s = 0.

    Equals the first-coordinate angular form scaled by the conformal factor
    a_0 * e^{2 tau(w)/a_0}, where tau(w) is the flow time onto the unit
    sphere.  The factor is a_0 on the branch locus and positive everywhere,
    so the variation is a positive multiple of the angular form.
    """
    e = check_exponents(exponents)
    w = cpoint(w)
    tau = _solve_scale_time(e, np.abs(w) ** 2)
    gamma = first_angular_form(len(e))
    return e[0] * math.exp(2.0 * tau / e[0]) * eval_one_form(gamma, w, v)


def s_derivative_check(
    exponents,
    samples: Sequence,
    h: float = 1e-4,
    seed: int = 0,
    fd_step: float = 1e-5,
) -> VerificationReport:
    """Finite-difference first variation in s of the pulled-back level family.

    The derivative at s = 0 is estimated by the central difference over
    {0, 2h}.  It is compared both against the plain first-coordinate angular
    form (tolerance 10h; informational, see below) and against the analytic
    first variation, which carries an extra positive conformal factor.  The
    pass criterion is agreement with the analytic variation: the plain
    angular form matches only up to that factor, which equals a_0 at the
    branch locus and drifts away from 1 elsewhere.
    """
    e = check_exponents(exponents)
    spec = LevelSpec.cylinder(e)
    cs = spec.constraint_set()
    gamma = first_angular_form(len(e))
    max_dev_gamma = 0.0
    max_dev_model = 0.0
    max_res = 0.0
    worst = None
    pts = [cpoint(z) for z in samples]
    for i, z in enumerate(pts):
        max_res = max(max_res, cs.max_residual(z))
        frame = tangent_frame(cs, z, spec.frame_dim)
        rng = np.random.default_rng((seed, i))
        coeffs = rng.standard_normal(frame.dim)
        v = sum(c * b for c, b in zip(coeffs, frame.basis))
        v = v / np.linalg.norm(to_real(v))
        upper = pulled_back_form_value(e, z, v, 2.0 * h, fd_step=fd_step)
        lower = pulled_back_form_value(e, z, v, 0.0, fd_step=fd_step)
        deriv = (upper - lower) / (2.0 * h)
        dev_gamma = abs(deriv - eval_one_form(gamma, z, v))
        dev_model = abs(deriv - s_derivative_first_variation(e, z, v))
        max_dev_gamma = max(max_dev_gamma, dev_gamma)
        if dev_model > max_dev_model:
            max_dev_model = dev_model
            worst = _point_witness(z, deriv)
    tol = 10.0 * h
    return VerificationReport(
        check="s-derivative",
        params={"exponents": list(e), "h": h, "fd_step": fd_step},
        sample_count=len(pts),
        seed=seed,
        min_value=None,
        max_residual=max_res,
        sign_consistent=None,
        witnesses=[worst] if worst else [],
        tolerances={"deviation": tol, "residual": RESIDUAL_TOL},
        passed=max_dev_model < tol and max_res <= RESIDUAL_TOL,
        extras={
            "max_deviation_from_first_variation": max_dev_model,
            "max_deviation_from_angular_form": max_dev_gamma,
        },
    )


def negative_weight_bracket(exponents, big_c: float, z) -> float:
    """Contact criterion scalar of the form with inverted first weight.

    At a point of the unit-sphere level the candidate form with coefficients
    (-C a_0, a_1, ..., a_n) is contact exactly where this real scalar does
    not vanish.
    """
    e = np.asarray(check_exponents(exponents))
    z = cpoint(z)
    if z.size != e.size:
        raise ValueError("length mismatch between exponents and point")
    if abs(brieskorn_poly(tuple(e), z)) > RESIDUAL_TOL or abs(
        np.sum(np.abs(z) ** 2) - 1.0
    ) > RESIDUAL_TOL:
        raise ValueError("point is not on the unit-sphere level set")
    c = float(big_c)
    mods = np.abs(z)
    tail_power_sum = np.sum(e[1:] * z[1:] ** e[1:])
    term1 = -2.0 * e[0] * mods[0] ** (2 * (e[0] - 1))
    term2 = 2.0 * c * np.sum(e[1:] * mods[1:] ** (2 * (e[1:] - 1)))
    term3 = -(c - 1.0) * (e[0] - 1) * 2.0 * np.real(np.conj(z[0]) ** e[0] * tail_power_sum)
    return float(term1 + term2 + term3)


def negative_weight_sign_check(
    exponents, big_c: float, samples: Sequence, seed: int | None = None
) -> VerificationReport:
    """Uniform-sign check of the inverted-weight criterion over samples."""
    e = check_exponents(exponents)
    pts = [cpoint(z) for z in samples]
    values = [negative_weight_bracket(e, big_c, z) for z in pts]
    uniform = all(v > 0 for v in values) or all(v < 0 for v in values)
    order = np.argsort(np.abs(values))
    witnesses = [_point_witness(pts[i], values[i]) for i in order[:2]]
    return VerificationReport(
        check="negative-weight",
        params={"exponents": list(e), "C": big_c},
        sample_count=len(pts),
        seed=seed,
        min_value=float(min(abs(v) for v in values)),
        max_residual=None,
        sign_consistent=uniform,
        witnesses=witnesses,
        tolerances={},
        passed=uniform,
        extras={"positive": sum(v > 0 for v in values), "negative": sum(v < 0 for v in values)},
    )


def negative_weight_sign_search(
    exponent_grid: Sequence, c_grid: Sequence[float], samples_per_case: int, seed: int
) -> list[dict]:
    """Scan (exponents, C) cases for sign changes of the inverted-weight scalar.

    An empty witness list is a valid outcome; witnesses carry the case and a
    point pair realizing opposite signs.
    """
    witnesses = []
    for case_idx, raw_e in enumerate(exponent_grid):
        e = check_exponents(raw_e)
        pts = sample_level_set(LevelSpec.level(e, 1.0), samples_per_case, (seed, case_idx))
        for c in c_grid:
            values = [negative_weight_bracket(e, c, z) for z in pts]
            pos = [i for i, v in enumerate(values) if v > 0]
            neg = [i for i, v in enumerate(values) if v < 0]
            if pos and neg:
                witnesses.append(
                    {
                        "exponents": list(e),
                        "C": float(c),
                        "positive": _point_witness(pts[pos[0]], values[pos[0]]),
                        "negative": _point_witness(pts[neg[0]], values[neg[0]]),
                    }
                )
    return witnesses
