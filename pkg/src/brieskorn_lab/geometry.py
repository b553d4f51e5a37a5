"""Brieskorn polynomials, their level-set family, and the scaling isotopy.

The polynomial f(z) = z_0^{a_0} + ... + z_n^{a_n} cuts out a variety that is
smooth away from the origin.  Intersecting it with the weighted radius level
R_s = s*|z_0|^2 + |z_1|^2 + ... + |z_n|^2 = 1 gives a family of closed
manifolds: s = 1 is the intersection with the unit sphere and s = 0 the
intersection with the spherical cylinder over the unit sphere of the last n
coordinates.  The one-parameter scaling action
(z_0, ..., z_n) -> (e^{t/a_0} z_0, ..., e^{t/a_n} z_n) preserves the variety
and moves points between the levels; the time to reach a given level solves
a strictly increasing scalar equation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exterior import (
    Constraint,
    ConstraintSet,
    ProjectionFailure,
    RankDeficiencyError,
    cpoint,
    newton_project,
    to_complex,
    to_real,
)

__all__ = [
    "check_exponents",
    "brieskorn_poly",
    "poly_gradient",
    "jacobian_full_rank",
    "scaling_field",
    "scale_flow",
    "LevelSpec",
    "transversality_value",
    "SampleStats",
    "sample_level_set",
    "sample_level_set_with_stats",
    "flow_time_to_level",
    "isotopy_to_level",
    "isotopy_from_level",
]

ON_MANIFOLD_TOL = 1e-9


def check_exponents(exponents: Sequence[int], min_len: int = 2) -> tuple[int, ...]:
    """Validate a tuple of positive integer exponents."""
    e = tuple(exponents)
    if len(e) < min_len:
        raise ValueError(f"need at least {min_len} exponents, got {len(e)}")
    out = []
    for a in e:
        ia = int(a)
        if ia != a or ia < 1:
            raise ValueError(f"exponents must be positive integers, got {a!r}")
        out.append(ia)
    return tuple(out)


def brieskorn_poly(exponents: Sequence[int], z) -> complex:
    """Sum of coordinate powers z_0^{a_0} + ... + z_n^{a_n}."""
    e = check_exponents(exponents, min_len=1)
    z = cpoint(z)
    if z.size != len(e):
        raise ValueError("length mismatch between exponents and point")
    return complex(np.sum(z ** np.asarray(e)))


def poly_gradient(exponents: Sequence[int], z) -> np.ndarray:
    """Complex derivative vector (a_j * z_j^{a_j - 1})."""
    e = np.asarray(check_exponents(exponents, min_len=1))
    z = cpoint(z)
    if z.size != e.size:
        raise ValueError("length mismatch between exponents and point")
    return e * z ** (e - 1)


def jacobian_full_rank(exponents: Sequence[int], z, rel_tol: float = 1e-10) -> bool:
    """Whether the 2 x (2m) complex defining Jacobian of the variety has rank 2.

    Rows are the holomorphic and antiholomorphic derivative blocks; rank is
    decided by singular values relative to the largest one.
    """
    e = check_exponents(exponents, min_len=1)
    z = cpoint(z)
    w = poly_gradient(e, z)
    m = len(e)
    mat = np.zeros((2, 2 * m), dtype=complex)
    mat[0, :m] = w
    mat[1, m:] = np.conj(w)
    sing = np.linalg.svd(mat, compute_uv=False)
    if sing[0] == 0.0:
        return False
    return bool(sing[1] > rel_tol * sing[0])


def scaling_field(exponents: Sequence[int], z) -> np.ndarray:
    """Infinitesimal generator (z_0/a_0, ..., z_n/a_n) of the scaling action."""
    e = np.asarray(check_exponents(exponents, min_len=1))
    z = cpoint(z)
    if z.size != e.size:
        raise ValueError("length mismatch between exponents and point")
    return z / e


def scale_flow(exponents: Sequence[int], z, t: float) -> np.ndarray:
    """Time-t scaling flow (e^{t/a_j} z_j)."""
    e = np.asarray(check_exponents(exponents, min_len=1))
    z = cpoint(z)
    return np.exp(float(t) / e) * z


def _radius_constraint(weights: Sequence[float], name: str) -> Constraint:
    w = np.asarray(weights, dtype=float)

    def func(z):
        return float(np.sum(w * np.abs(z) ** 2) - 1.0)

    def grad(z):
        return 2.0 * w * z

    return Constraint(name=name, func=func, grad=grad)


def _poly_constraints(exponents: tuple[int, ...]) -> tuple[Constraint, Constraint]:
    def re_func(z):
        return brieskorn_poly(exponents, z).real

    def re_grad(z):
        return np.conj(poly_gradient(exponents, z))

    def im_func(z):
        return brieskorn_poly(exponents, z).imag

    def im_grad(z):
        return 1j * np.conj(poly_gradient(exponents, z))

    return (
        Constraint(name="re_poly", func=re_func, grad=re_grad),
        Constraint(name="im_poly", func=im_func, grad=im_grad),
    )


@dataclass(frozen=True)
class LevelSpec:
    """A level-set description: weighted-radius level of the variety, or a sphere.

    variant "level" is the intersection of the variety with R_s = 1 for
    s in [0, 1]; "cylinder" is the same with s = 0 (the spherical cylinder);
    "sphere" is the round unit sphere of C^m with no polynomial constraint
    (exponents then only label the weights used by the forms under test).
    """

    exponents: tuple[int, ...]
    s: float = 1.0
    variant: str = "level"

    def __post_init__(self):
        object.__setattr__(self, "exponents", check_exponents(self.exponents, min_len=1))
        if self.variant not in ("level", "cylinder", "sphere"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant == "level":
            if len(self.exponents) < 2:
                raise ValueError("level variant needs at least two exponents")
            if not 0.0 <= self.s <= 1.0:
                raise ValueError("s must lie in [0, 1]")
        if self.variant == "cylinder":
            if len(self.exponents) < 2:
                raise ValueError("cylinder variant needs at least two exponents")
            object.__setattr__(self, "s", 0.0)
        if self.variant == "sphere":
            object.__setattr__(self, "s", 1.0)

    @classmethod
    def level(cls, exponents, s: float = 1.0) -> "LevelSpec":
        return cls(tuple(exponents), float(s), "level")

    @classmethod
    def cylinder(cls, exponents) -> "LevelSpec":
        return cls(tuple(exponents), 0.0, "cylinder")

    @classmethod
    def sphere(cls, weights) -> "LevelSpec":
        return cls(tuple(weights), 1.0, "sphere")

    @property
    def ambient_dim(self) -> int:
        return len(self.exponents)

    @property
    def frame_dim(self) -> int:
        if self.variant == "sphere":
            return 2 * self.ambient_dim - 1
        return 2 * self.ambient_dim - 3

    @property
    def radius_weights(self) -> tuple[float, ...]:
        if self.variant == "sphere":
            return (1.0,) * self.ambient_dim
        return (float(self.s),) + (1.0,) * (self.ambient_dim - 1)

    def constraint_set(self) -> ConstraintSet:
        radius = _radius_constraint(self.radius_weights, name="radius")
        if self.variant == "sphere":
            return ConstraintSet(constraints=(radius,), ambient_dim=self.ambient_dim)
        re_c, im_c = _poly_constraints(self.exponents)
        return ConstraintSet(constraints=(re_c, im_c, radius), ambient_dim=self.ambient_dim)

    def label(self) -> str:
        exps = ",".join(str(a) for a in self.exponents)
        if self.variant == "level":
            return f"level({exps}; s={self.s:g})"
        if self.variant == "cylinder":
            return f"cylinder({exps})"
        return f"sphere({exps})"


def transversality_value(spec: LevelSpec, z) -> float:
    """Derivative of the defining radius along the scaling field, up to scale.

    Equals sum_j weight_j * |z_j|^2 / a_j with weight_0 = s and weight_j = 1
    for j >= 1; positive at every point of the level set.
    """
    if spec.variant == "sphere":
        raise ValueError("transversality check applies to level/cylinder variants")
    z = cpoint(z)
    cs = spec.constraint_set()
    if cs.max_residual(z) > ON_MANIFOLD_TOL:
        raise ValueError("point is not on the level set")
    w = np.asarray(spec.radius_weights)
    return float(np.sum(w * np.abs(z) ** 2 / np.asarray(spec.exponents)))


@dataclass
class SampleStats:
    requested: int = 0
    projection_failures: int = 0
    rank_rejections: int = 0


def _seed_entropy(seed) -> tuple[int, ...]:
    if isinstance(seed, (tuple, list)):
        return tuple(int(x) for x in seed)
    return (int(seed),)


def _has_full_rank_jacobian(cs: ConstraintSet, z, rank_tol: float = 1e-10) -> bool:
    jac = cs.jacobian(z)
    sing = np.linalg.svd(jac, compute_uv=False)
    if sing.size == 0 or sing[0] == 0.0:
        return False
    return bool(np.sum(sing > rank_tol * sing[0]) == jac.shape[0])


def sample_level_set_with_stats(
    spec: LevelSpec,
    count: int,
    seed,
    tol: float = 1e-12,
    max_attempts: int = 12,
) -> tuple[list[np.ndarray], SampleStats]:
    """Sample points of the level set by seeded Gaussian starts plus projection.

    Point i is drawn from a dedicated random stream derived from (seed, i),
    so results are reproducible and independent of evaluation order.  Starts
    whose projection fails or lands on a rank-deficient point are rejected
    and counted.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    cs = spec.constraint_set()
    stats = SampleStats(requested=count)
    points: list[np.ndarray] = []
    entropy = _seed_entropy(seed)
    for i in range(count):
        rng = np.random.default_rng(entropy + (i,))
        accepted = None
        last_start = None
        for _ in range(max_attempts):
            start = rng.standard_normal(2 * spec.ambient_dim)
            z0 = to_complex(start)
            z0 = z0 / np.linalg.norm(start)
            last_start = z0
            try:
                z = newton_project(cs, z0, tol=tol, max_iter=50)
            except (ProjectionFailure, RankDeficiencyError):
                stats.projection_failures += 1
                continue
            if not _has_full_rank_jacobian(cs, z):
                stats.rank_rejections += 1
                continue
            # one extra Gauss-Newton step pushes the residual from the
            # requested tolerance down to the round-off floor
            step, _, _, _ = np.linalg.lstsq(cs.jacobian(z), cs.residuals(z), rcond=None)
            accepted = to_complex(to_real(z) - step)
            break
        if accepted is None:
            raise ProjectionFailure(
                f"sampling {spec.label()} failed repeatedly; last start {last_start!r}"
            )
        points.append(accepted)
    return points, stats


def sample_level_set(spec: LevelSpec, count: int, seed) -> list[np.ndarray]:
    """Deterministic list of on-manifold points; see sample_level_set_with_stats."""
    points, _ = sample_level_set_with_stats(spec, count, seed)
    return points


def _solve_scale_time(exponents: tuple[int, ...], weighted_sq: np.ndarray) -> float:
    """Solve sum_j c_j * e^{2T/a_j} = 1 for the unique T, c_j >= 0 not all zero.

    The left side is strictly increasing in T, so a doubling bracket plus
    bisection is safe; two Newton polishes push the residual to round-off.
    """
    c = np.asarray(weighted_sq, dtype=float)
    a = np.asarray(exponents, dtype=float)
    mask = c > 0.0
    if not np.any(mask):
        raise ValueError("no solution: every weighted modulus vanishes")
    c = c[mask]
    a = a[mask]

    def g(t: float) -> float:
        return float(np.sum(c * np.exp(2.0 * t / a)) - 1.0)

    def dg(t: float) -> float:
        return float(np.sum(c * (2.0 / a) * np.exp(2.0 * t / a)))

    g0 = g(0.0)
    if g0 < 0.0:
        lo, hi = 0.0, 1.0
        while g(hi) < 0.0:
            hi *= 2.0
            if hi > 1e6:
                raise ValueError("bracketing failed; equation has no reachable solution")
    elif g0 > 0.0:
        lo, hi = -1.0, 0.0
        while g(lo) > 0.0:
            lo *= 2.0
            if lo < -1e6:
                raise ValueError("bracketing failed; equation has no reachable solution")
    else:
        lo = hi = 0.0
    for _ in range(200):
        if hi - lo <= 1e-14:
            break
        mid = 0.5 * (lo + hi)
        if g(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    for _ in range(2):
        slope = dg(t)
        if slope > 0.0:
            t -= g(t) / slope
    return float(t)


def _require_on_unit_sphere_variety(exponents: tuple[int, ...], z) -> None:
    if abs(brieskorn_poly(exponents, z)) > ON_MANIFOLD_TOL:
        raise ValueError("point is not on the variety")
    if abs(np.sum(np.abs(z) ** 2) - 1.0) > ON_MANIFOLD_TOL:
        raise ValueError("point is not on the unit sphere")


def flow_time_to_level(exponents: Sequence[int], z, s: float) -> float:
    """Unique flow time moving a point of the s=1 level onto the s level.

    Solves s*e^{2T/a_0}|z_0|^2 + sum_{j>=1} e^{2T/a_j}|z_j|^2 = 1 with
    residual below 1e-12.
    """
    e = check_exponents(exponents)
    z = cpoint(z)
    _require_on_unit_sphere_variety(e, z)
    weights = np.array((float(s),) + (1.0,) * (len(e) - 1))
    c = weights * np.abs(z) ** 2
    if not np.any(c > 0.0):
        raise ValueError("no solution: s = 0 with the tail coordinates all zero")
    return _solve_scale_time(e, c)


def isotopy_to_level(exponents: Sequence[int], z, s: float) -> np.ndarray:
    """Image of a point of the s=1 level under the flow onto the s level."""
    e = check_exponents(exponents)
    t = flow_time_to_level(e, z, s)
    return scale_flow(e, z, t)


def isotopy_from_level(exponents: Sequence[int], w, s: float) -> np.ndarray:
    """Inverse of :func:`isotopy_to_level`: flow a point of the s level back."""
    e = check_exponents(exponents)
    w = cpoint(w)
    if abs(brieskorn_poly(e, w)) > ON_MANIFOLD_TOL:
        raise ValueError("point is not on the variety")
    weights = np.array((float(s),) + (1.0,) * (len(e) - 1))
    if abs(np.sum(weights * np.abs(w) ** 2) - 1.0) > ON_MANIFOLD_TOL:
        raise ValueError("point is not on the requested level")
    c = np.abs(w) ** 2
    t = _solve_scale_time(e, c)
    return scale_flow(e, w, t)
