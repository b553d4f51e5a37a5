"""Milnor open books on spheres and the cyclic branched covering model.

The page fibration sends a sphere point off the binding to the phase of the
defining polynomial; the Reeb field of the weighted contact form rotates the
pages at unit rate.  Dropping the first coordinate projects the cylinder
level set onto the sphere as a cyclic branched covering, and a fixed root of
-1 turns the first coordinate's phase into the pulled-back page fibration.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exterior import (
    Constraint,
    ConstraintSet,
    cpoint,
    eval_one_form,
    eval_two_form,
    pfaffian,
    tangent_frame,
    to_real,
    weighted_contact_form,
)
from .geometry import LevelSpec, brieskorn_poly, check_exponents, poly_gradient
from .verify import RESIDUAL_TOL, VerificationReport, _point_witness

__all__ = [
    "OpenBookSpec",
    "CoveringSpec",
    "page_phase",
    "reeb_field",
    "reeb_flow",
    "page_rotation_residual",
    "page_symplectic_check",
    "BindingLoop",
    "binding_components",
    "binding_orientation_integrals",
    "base_projection",
    "fibers_over",
    "cover_page_phase",
    "radial_profile",
]

BINDING_TOL = 1e-12


@dataclass(frozen=True)
class OpenBookSpec:
    """Weights (a_1, ..., a_n) of the page fibration on the sphere of C^n."""

    exponents: tuple[int, ...]
    page_phase: complex = 1.0 + 0.0j

    def __post_init__(self):
        object.__setattr__(self, "exponents", check_exponents(self.exponents, min_len=1))
        theta = complex(self.page_phase)
        if abs(abs(theta) - 1.0) > 1e-12:
            raise ValueError("page phase must lie on the unit circle")
        object.__setattr__(self, "page_phase", theta)

    @property
    def ambient_dim(self) -> int:
        return len(self.exponents)


@dataclass(frozen=True)
class CoveringSpec:
    """Full exponents (a_0, ..., a_n) plus a fixed a_0-th root of -1."""

    exponents: tuple[int, ...]
    root: complex = None

    def __post_init__(self):
        e = check_exponents(self.exponents, min_len=2)
        object.__setattr__(self, "exponents", e)
        root = self.root
        if root is None:
            root = cmath.exp(1j * math.pi / e[0])
        root = complex(root)
        if abs(root ** e[0] + 1.0) > 1e-14:
            raise ValueError("root must satisfy root**a_0 == -1 within 1e-14")
        object.__setattr__(self, "root", root)

    @property
    def degree(self) -> int:
        return self.exponents[0]

    @property
    def tail(self) -> tuple[int, ...]:
        return self.exponents[1:]


def page_phase(spec: OpenBookSpec, z) -> complex:
    """Phase f(z)/|f(z)| of the defining polynomial; undefined on the binding."""
    z = cpoint(z)
    val = brieskorn_poly(spec.exponents, z)
    if abs(val) < BINDING_TOL:
        raise ValueError("point lies on (or too close to) the binding")
    return val / abs(val)


def reeb_field(spec: OpenBookSpec, z) -> np.ndarray:
    """Rotational field with component j equal to (i/a_j) z_j."""
    z = cpoint(z)
    if z.size != spec.ambient_dim:
        raise ValueError("length mismatch")
    return 1j * z / np.asarray(spec.exponents)


def reeb_flow(spec: OpenBookSpec, z, t: float) -> np.ndarray:
    """Time-t Reeb flow (e^{i t / a_j} z_j)."""
    z = cpoint(z)
    return np.exp(1j * float(t) / np.asarray(spec.exponents)) * z


def page_rotation_residual(spec: OpenBookSpec, z, t: float) -> float:
    """|phase(flow_t z) - e^{it} phase(z)|; identically zero for the flow."""
    return abs(page_phase(spec, reeb_flow(spec, z, t)) - cmath.exp(1j * float(t)) * page_phase(spec, z))


def _page_constraint_set(spec: OpenBookSpec, theta0: complex, dim: int) -> ConstraintSet:
    """Sphere plus fixed-phase constraints cutting out the page through theta0."""
    e = spec.exponents

    def radius(z):
        return float(np.sum(np.abs(z) ** 2) - 1.0)

    def radius_grad(z):
        return 2.0 * z

    q = np.conj(theta0)

    def phase(z):
        return float(np.imag(q * brieskorn_poly(e, z)))

    def phase_grad(z):
        return 1j * np.conj(q * poly_gradient(e, z))

    return ConstraintSet(
        constraints=(
            Constraint(name="radius", func=radius, grad=radius_grad),
            Constraint(name="page_phase", func=phase, grad=phase_grad),
        ),
        ambient_dim=dim,
    )


def page_symplectic_check(
    spec: OpenBookSpec,
    samples: Sequence,
    threshold: float = 1e-6,
    min_binding_distance: float = 1e-6,
    seed: int | None = None,
) -> VerificationReport:
    """The two-form of the weighted contact form is non-degenerate on pages.

    At each sphere sample away from the binding, the page tangent space is
    the null space of the sphere and phase constraints; the check requires
    |Pf| of the restricted two-form above the threshold and the Reeb field
    transverse to the page (unit angular rate).
    """
    n = spec.ambient_dim
    beta = weighted_contact_form(spec.exponents)
    min_pf = math.inf
    min_transversal = math.inf
    max_rate_residual = 0.0
    kept = 0
    max_res = 0.0
    worst = None
    for z in samples:
        z = cpoint(z)
        fval = brieskorn_poly(spec.exponents, z)
        if abs(fval) <= min_binding_distance:
            continue
        kept += 1
        theta0 = fval / abs(fval)
        cs = _page_constraint_set(spec, theta0, n)
        max_res = max(max_res, cs.max_residual(z))
        frame = tangent_frame(cs, z, 2 * n - 2)
        two = np.array(
            [[eval_two_form(beta, z, u, v) for v in frame.basis] for u in frame.basis]
        )
        pf = abs(pfaffian(two))
        if pf < min_pf:
            min_pf = pf
            worst = _point_witness(z, pf)
        reeb = reeb_field(spec, z)
        grad_df = np.sum(poly_gradient(spec.exponents, z) * reeb)
        transversal = float(np.imag(np.conj(theta0) * grad_df))
        min_transversal = min(min_transversal, transversal)
        max_rate_residual = max(max_rate_residual, abs(np.imag(grad_df / fval) - 1.0))
    passed = (
        kept > 0
        and min_pf > threshold
        and min_transversal > 0.0
        and max_res <= RESIDUAL_TOL
    )
    return VerificationReport(
        check="page-symplectic",
        params={"exponents": list(spec.exponents)},
        sample_count=kept,
        seed=seed,
        min_value=(None if kept == 0 else min_pf),
        max_residual=max_res,
        sign_consistent=None,
        witnesses=[worst] if worst else [],
        tolerances={"threshold": threshold, "binding_distance": min_binding_distance},
        passed=passed,
        extras={
            "min_reeb_transversality": (None if kept == 0 else min_transversal),
            "max_rotation_rate_residual": (None if kept == 0 else max_rate_residual),
            "skipped_near_binding": len(list(samples)) - kept,
        },
    )


def _binding_radii(a0: int, a1: int) -> tuple[float, float]:
    """Solve r0^{a0} = r1^{a1}, r0^2 + r1^2 = 1 on (0, 1) by bisection."""

    def gap(r0: float) -> float:
        return r0**a0 - (1.0 - r0 * r0) ** (a1 / 2.0)

    lo, hi = 0.0, 1.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    r0 = 0.5 * (lo + hi)
    r1 = math.sqrt(1.0 - r0 * r0)
    return r0, r1


@dataclass(frozen=True)
class BindingLoop:
    """One component of the two-exponent binding, parametrized by psi.

    The loop is (r0 e^{i((pi + a1 psi)/a0 + offset)}, r1 e^{i psi}) with the
    offset an a0-th root-of-unity shift; increasing psi gives the boundary
    orientation.
    """

    exponents: tuple[int, int]
    radii: tuple[float, float]
    offset_index: int
    period: float

    def point(self, psi: float) -> np.ndarray:
        a0, a1 = self.exponents
        r0, r1 = self.radii
        phase0 = (math.pi + a1 * psi) / a0 + 2.0 * math.pi * self.offset_index / a0
        return np.array([r0 * cmath.exp(1j * phase0), r1 * cmath.exp(1j * psi)])

    def velocity(self, psi: float) -> np.ndarray:
        a0, a1 = self.exponents
        z = self.point(psi)
        return np.array([1j * (a1 / a0) * z[0], 1j * z[1]])

    def sample(self, num: int) -> list[np.ndarray]:
        return [self.point(self.period * k / num) for k in range(num)]


def binding_components(a0: int, a1: int) -> list[BindingLoop]:
    """All gcd(a0, a1) components of the binding link in the 3-sphere."""
    a0 = int(a0)
    a1 = int(a1)
    if a0 < 1 or a1 < 1:
        raise ValueError("exponents must be positive")
    g = math.gcd(a0, a1)
    radii = _binding_radii(a0, a1)
    period = 2.0 * math.pi * a0 / g
    return [
        BindingLoop(exponents=(a0, a1), radii=radii, offset_index=k, period=period)
        for k in range(g)
    ]


def binding_orientation_integrals(a0: int, a1: int, form=None, nodes: int = 4096) -> list[float]:
    """Line integral of the contact form over each binding component.

    Composite trapezoid quadrature on the periodic psi-parametrization; the
    values are equal across components and strictly positive, which is the
    boundary-orientation compatibility of the open book.
    """
    if nodes < 4:
        raise ValueError("need at least 4 quadrature nodes")
    if form is None:
        form = weighted_contact_form((a0, a1))
    out = []
    for loop in binding_components(a0, a1):
        step = loop.period / nodes
        total = 0.0
        for k in range(nodes):
            psi = k * step
            total += eval_one_form(form, loop.point(psi), loop.velocity(psi))
        out.append(total * step)
    return out


def base_projection(z) -> np.ndarray:
    """Covering projection: drop the first coordinate."""
    z = cpoint(z)
    if z.size < 2:
        raise ValueError("need at least two coordinates")
    return z[1:]


def fibers_over(spec: CoveringSpec, w, branch_tol: float = 1e-9) -> list[np.ndarray]:
    """All covering preimages of a sphere point.

    Generic points have a_0 preimages (z_0, w) with z_0 running over the
    a_0-th roots of minus the tail polynomial; on the branching locus the
    single preimage has vanishing first coordinate.
    """
    w = cpoint(w)
    tail = spec.tail
    if w.size != len(tail):
        raise ValueError("length mismatch between covering tail and base point")
    if abs(np.sum(np.abs(w) ** 2) - 1.0) > RESIDUAL_TOL:
        raise ValueError("base point is not on the unit sphere")
    val = complex(np.sum(w ** np.asarray(tail)))
    if abs(val) < branch_tol:
        return [np.concatenate(([0.0 + 0.0j], w))]
    a0 = spec.degree
    radius = abs(val) ** (1.0 / a0)
    base_angle = cmath.phase(-val)
    return [
        np.concatenate(
            ([radius * cmath.exp(1j * (base_angle + 2.0 * math.pi * k) / a0)], w)
        )
        for k in range(a0)
    ]


def cover_page_phase(spec: CoveringSpec, z) -> complex:
    """Pulled-back page coordinate root * z_0/|z_0|.

    Its a_0-th power equals the page phase of the projected point, making it
    an a_0-th root of the downstairs fibration.
    """
    z = cpoint(z)
    if abs(z[0]) < BINDING_TOL:
        raise ValueError("point lies on the pulled-back binding")
    return spec.root * z[0] / abs(z[0])


def radial_profile(k: int, delta: float, r):
    """Monotone radial model of the covering near the branch locus.

    Equals r^k for r <= delta/2 and r for r >= delta, with a smooth monotone
    blend in between.  Intended for delta <= 1, where the convex blend is
    strictly increasing.
    """
    k = int(k)
    if k < 1:
        raise ValueError("k must be a positive integer")
    delta = float(delta)
    if delta <= 0.0:
        raise ValueError("delta must be positive")
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0.0):
        raise ValueError("r must be non-negative")
    t = np.clip((r_arr - delta / 2.0) / (delta / 2.0), 0.0, 1.0)
    smooth = t * t * t * (t * (6.0 * t - 15.0) + 10.0)
    out = np.where(
        r_arr <= delta / 2.0,
        r_arr**k,
        np.where(r_arr >= delta, r_arr, (1.0 - smooth) * r_arr**k + smooth * r_arr),
    )
    if np.isscalar(r) or np.ndim(r) == 0:
        return float(out)
    return out
