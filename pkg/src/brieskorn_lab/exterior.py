"""Exterior algebra over C^m viewed as R^{2m}.

Real coordinates interleave as (x_0, y_0, ..., x_{m-1}, y_{m-1}) with
z_j = x_j + i*y_j.  The diagonal 1-form family

    (i/2) * sum_j c_j (z_j dzbar_j - zbar_j dz_j)

evaluates on a real tangent vector v (written in complex components) as
sum_j c_j * Im(conj(z_j) * v_j); its exterior derivative is the constant
2-form i * sum_j c_j dz_j ^ dzbar_j.  Tangent frames of implicitly defined
level sets come from an orthonormal null-space computation of the
constraint Jacobian, and Newton projection moves ambient points onto the
level sets.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "RankDeficiencyError",
    "ProjectionFailure",
    "cpoint",
    "rtangent",
    "to_real",
    "to_complex",
    "DiagonalOneForm",
    "standard_contact_form",
    "weighted_contact_form",
    "level_contact_form",
    "first_angular_form",
    "negative_weight_form",
    "eval_one_form",
    "eval_two_form",
    "pfaffian",
    "Constraint",
    "ConstraintSet",
    "TangentFrame",
    "tangent_frame",
    "newton_project",
    "contact_value",
    "top_form_value",
]


class RankDeficiencyError(RuntimeError):
    """The constraint Jacobian lost rank (singular point of the variety)."""


class ProjectionFailure(RuntimeError):
    """Newton projection did not reach the requested tolerance."""


def cpoint(values) -> np.ndarray:
    """Validate and return a point of C^m as a 1-d complex array."""
    z = np.atleast_1d(np.asarray(values, dtype=complex))
    if z.ndim != 1 or z.size == 0:
        raise ValueError("a point must be a non-empty 1-d sequence of complex numbers")
    if not np.all(np.isfinite(z)):
        raise ValueError("point has non-finite coordinates")
    return z


def rtangent(values) -> np.ndarray:
    """Validate a real tangent vector written in complex components."""
    return cpoint(values)


def to_real(v) -> np.ndarray:
    """Complex (m,) -> real (2m,), interleaved (x_0, y_0, x_1, y_1, ...)."""
    v = np.asarray(v, dtype=complex)
    out = np.empty(2 * v.size)
    out[0::2] = v.real
    out[1::2] = v.imag
    return out


def to_complex(x) -> np.ndarray:
    """Inverse of :func:`to_real`."""
    x = np.asarray(x, dtype=float)
    return x[0::2] + 1j * x[1::2]


@dataclass(frozen=True)
class DiagonalOneForm:
    """Real coefficients c_j of (i/2) * sum_j c_j (z_j dzbar_j - zbar_j dz_j)."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError("a diagonal form needs at least one coefficient")
        if not all(math.isfinite(c) for c in coeffs):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def covector(self, z) -> np.ndarray:
        """Coefficient vector on the standard real basis at the point z."""
        z = cpoint(z)
        if z.size != self.dim:
            raise ValueError("length mismatch between form and point")
        c = np.asarray(self.coeffs)
        out = np.empty(2 * self.dim, dtype=complex)
        out[0::2] = -c * z.imag
        out[1::2] = c * z.real
        return out

    def two_form_matrix(self) -> np.ndarray:
        """Matrix of the exterior derivative on the standard real basis.

        Constant in z: block-diagonal with blocks [[0, 2c_j], [-2c_j, 0]].
        """
        m = np.zeros((2 * self.dim, 2 * self.dim))
        for j, c in enumerate(self.coeffs):
            m[2 * j, 2 * j + 1] = 2.0 * c
            m[2 * j + 1, 2 * j] = -2.0 * c
        return m


def standard_contact_form(dim: int) -> DiagonalOneForm:
    """Unit coefficients: the standard contact form of the sphere in C^dim."""
    return DiagonalOneForm((1.0,) * dim)


def weighted_contact_form(weights: Sequence[float]) -> DiagonalOneForm:
    """Coefficients equal to the given positive weights."""
    return DiagonalOneForm(tuple(weights))


def level_contact_form(exponents: Sequence[int], s: float) -> DiagonalOneForm:
    """Coefficients (s*a_0, a_1, ..., a_n) used along the level family."""
    e = tuple(exponents)
    if len(e) < 2:
        raise ValueError("need at least two exponents")
    return DiagonalOneForm((s * e[0],) + tuple(float(a) for a in e[1:]))


def first_angular_form(dim: int) -> DiagonalOneForm:
    """The angular form of the first coordinate plane: coefficients (1, 0, ..., 0)."""
    return DiagonalOneForm((1.0,) + (0.0,) * (dim - 1))


def negative_weight_form(exponents: Sequence[int], big_c: float) -> DiagonalOneForm:
    """Coefficients (-C*a_0, a_1, ..., a_n): candidate form with inverted first weight."""
    e = tuple(exponents)
    if len(e) < 2:
        raise ValueError("need at least two exponents")
    return DiagonalOneForm((-float(big_c) * e[0],) + tuple(float(a) for a in e[1:]))


def eval_one_form(form: DiagonalOneForm, z, v) -> float:
    """Value of the form at z on the real tangent vector v."""
    z = cpoint(z)
    v = rtangent(v)
    if not (form.dim == z.size == v.size):
        raise ValueError("length mismatch")
    c = np.asarray(form.coeffs)
    return float(np.sum(c * np.imag(np.conj(z) * v)))


def eval_two_form(form: DiagonalOneForm, z, u, v) -> float:
    """Value of the exterior derivative on (u, v); independent of z."""
    z = cpoint(z)
    u = rtangent(u)
    v = rtangent(v)
    if not (form.dim == z.size == u.size == v.size):
        raise ValueError("length mismatch")
    c = np.asarray(form.coeffs)
    return float(2.0 * np.sum(c * np.imag(np.conj(u) * v)))


def _pfaffian_unchecked(mat: np.ndarray) -> complex:
    """Pfaffian by Parlett-Reid elimination; no symmetry validation."""
    a = np.array(mat, dtype=complex, copy=True)
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    if n % 2 == 1:
        return 0.0 + 0.0j
    pf = 1.0 + 0.0j
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(a[k + 1 :, k])))
        if a[kp, k] == 0:
            return 0.0 + 0.0j
        if kp != k + 1:
            a[[k + 1, kp], :] = a[[kp, k + 1], :]
            a[:, [k + 1, kp]] = a[:, [kp, k + 1]]
            pf = -pf
        pivot = a[k, k + 1]
        pf *= pivot
        if k + 2 < n:
            tau = a[k, k + 2 :] / pivot
            a[k + 2 :, k + 2 :] += np.outer(tau, a[k + 2 :, k + 1])
            a[k + 2 :, k + 2 :] -= np.outer(a[k + 2 :, k + 1], tau)
    return complex(pf)


def pfaffian(matrix, skew_tol: float = 1e-12) -> float:
    """Pfaffian of a real antisymmetric matrix of even dimension.

    Satisfies pfaffian(A)**2 == det(A) and Pf([[0, a], [-a, 0]]) == a.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("square matrix required")
    n = a.shape[0]
    if n % 2 == 1:
        raise ValueError("Pfaffian needs even dimension")
    if n:
        scale = max(1.0, float(np.abs(a).max()))
        if float(np.abs(a + a.T).max()) > skew_tol * scale:
            raise ValueError("matrix is not antisymmetric within tolerance")
    return float(_pfaffian_unchecked(a).real)


@dataclass(frozen=True)
class Constraint:
    """A scalar constraint func(z) == target with analytic gradient.

    The gradient is a real covector written in complex components g with
    directional derivative Re(sum conj(g_j) v_j).
    """

    name: str
    func: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    target: float = 0.0


@dataclass(frozen=True)
class ConstraintSet:
    """Constraints cutting out a level set in C^ambient_dim."""

    constraints: tuple[Constraint, ...]
    ambient_dim: int

    def residuals(self, z) -> np.ndarray:
        z = cpoint(z)
        return np.array([c.func(z) - c.target for c in self.constraints])

    def max_residual(self, z) -> float:
        r = self.residuals(z)
        return float(np.abs(r).max()) if r.size else 0.0

    def jacobian(self, z) -> np.ndarray:
        """Rows are the real gradients, shape (k, 2*ambient_dim)."""
        z = cpoint(z)
        return np.array([to_real(c.grad(z)) for c in self.constraints])


@dataclass(frozen=True)
class TangentFrame:
    """A point on a level set with an orthonormal real basis of its tangent space."""

    base: np.ndarray
    basis: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def gram(self) -> np.ndarray:
        b = np.array([to_real(v) for v in self.basis])
        return b @ b.T

    def real_matrix(self) -> np.ndarray:
        return np.array([to_real(v) for v in self.basis])


def tangent_frame(cs: ConstraintSet, z, expected_dim: int, rank_tol: float = 1e-10,
                  on_tol: float = 1e-9) -> TangentFrame:
    """Orthonormal basis of the null space of the constraint Jacobian at z."""
    z = cpoint(z)
    if cs.max_residual(z) > on_tol:
        raise ValueError("point does not satisfy the constraints")
    jac = cs.jacobian(z)
    k = jac.shape[0]
    _, sing, vt = np.linalg.svd(jac, full_matrices=True)
    rank = int(np.sum(sing > rank_tol * sing[0])) if sing.size and sing[0] > 0 else 0
    if rank < k:
        raise RankDeficiencyError("constraint Jacobian is rank deficient at this point")
    null_rows = vt[k:, :]
    if null_rows.shape[0] != expected_dim:
        raise ValueError(
            f"tangent space has dimension {null_rows.shape[0]}, expected {expected_dim}"
        )
    basis = tuple(to_complex(row) for row in null_rows)
    return TangentFrame(base=z, basis=basis)


def newton_project(cs: ConstraintSet, z0, tol: float = 1e-12, max_iter: int = 50) -> np.ndarray:
    """Gauss-Newton projection onto the constraint set (Moore-Penrose step)."""
    z = cpoint(z0)
    for _ in range(max_iter):
        res = cs.residuals(z)
        if res.size == 0 or float(np.abs(res).max()) < tol:
            return z
        jac = cs.jacobian(z)
        step, _, rank, _ = np.linalg.lstsq(jac, res, rcond=None)
        if rank < jac.shape[0]:
            raise RankDeficiencyError("constraint Jacobian collapsed during projection")
        z = to_complex(to_real(z) - step)
    raise ProjectionFailure(f"no convergence after {max_iter} iterations from {z0!r}")


def contact_value(form: DiagonalOneForm, frame: TangentFrame) -> float:
    """Value of alpha ^ (d alpha)^m on an ordered frame of odd dimension 2m+1.

    Computed as sum_k (-1)^k alpha(v_k) * Pf(D^(k)) with D the matrix of the
    exterior derivative on the frame and D^(k) the minor with v_k removed.
    The convention is anchored by the unit-coefficient form on the 3-sphere
    at (1, 0) with frame ((i,0), (0,1), (0,i)) evaluating to exactly 2.
    """
    d = frame.dim
    if d % 2 == 0:
        raise ValueError("contact evaluation needs an odd-dimensional frame")
    z = frame.base
    alpha = [eval_one_form(form, z, v) for v in frame.basis]
    two = np.array(
        [[eval_two_form(form, z, u, v) for v in frame.basis] for u in frame.basis]
    )
    total = 0.0
    for k in range(d):
        idx = [i for i in range(d) if i != k]
        minor = two[np.ix_(idx, idx)]
        total += (-1) ** k * alpha[k] * _pfaffian_unchecked(minor).real
    return float(total)


@lru_cache(maxsize=None)
def _perms_with_parity(n: int) -> tuple[np.ndarray, np.ndarray]:
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    inversions = np.zeros(perms.shape[0], dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            inversions += perms[:, i] > perms[:, j]
    parity = 1.0 - 2.0 * (inversions % 2)
    return perms, parity


def _resolve_covector(factor, z) -> np.ndarray:
    if isinstance(factor, DiagonalOneForm):
        if z is None:
            raise ValueError("a base point is needed to evaluate a diagonal form factor")
        return factor.covector(z)
    return np.asarray(factor, dtype=complex)


def _expand_full(covectors: list[np.ndarray], sigma: np.ndarray | None, power: int) -> complex:
    """Top-form value by full permutation expansion over the standard basis."""
    k = len(covectors)
    n = k + 2 * power
    perms, parity = _perms_with_parity(n)
    term = parity.astype(complex)
    for i, w in enumerate(covectors):
        term = term * w[perms[:, i]]
    for j in range(power):
        a = perms[:, k + 2 * j]
        b = perms[:, k + 2 * j + 1]
        term = term * sigma[a, b]
    return complex(term.sum() / 2**power)


def _expand_hybrid(covectors: list[np.ndarray], sigma: np.ndarray | None, power: int) -> complex:
    """Top-form value by subset determinants times Pfaffians of the complement."""
    k = len(covectors)
    n = k + 2 * power
    fac = math.factorial(power)
    stacked = np.array(covectors).reshape(k, n) if k else np.empty((0, n), dtype=complex)
    total = 0.0 + 0.0j
    base_offset = k * (k - 1) // 2
    for subset in itertools.combinations(range(n), k):
        rest = [i for i in range(n) if i not in subset]
        if power:
            pf = _pfaffian_unchecked(np.asarray(sigma, dtype=complex)[np.ix_(rest, rest)])
            if pf == 0:
                continue
        else:
            pf = 1.0 + 0.0j
        det = complex(np.linalg.det(stacked[:, subset])) if k else 1.0 + 0.0j
        sign = -1.0 if (sum(subset) - base_offset) % 2 else 1.0
        total += sign * det * fac * pf
    return complex(total)


def top_form_value(factors: Sequence, sigma, power: int, z=None) -> complex:
    """Value of factor_1 ^ ... ^ factor_k ^ sigma^power on the standard real basis.

    Factors are complex-valued 1-forms given either as covector arrays on the
    interleaved real basis or as DiagonalOneForm instances (evaluated at z);
    sigma is a 2-form as an antisymmetric matrix or a DiagonalOneForm whose
    exterior derivative is taken.  The total degree must equal the ambient
    real dimension.  Dimension <= 8 uses the full permutation expansion, and
    larger cases the determinant/Pfaffian hybrid; both follow the same
    convention as :func:`contact_value` for 1-form factors while powers of
    sigma enter as honest wedge powers.
    """
    covectors = [_resolve_covector(f, z) for f in factors]
    sigma_mat = None
    if power < 0:
        raise ValueError("power must be non-negative")
    if power > 0:
        if sigma is None:
            raise ValueError("a 2-form is required for positive power")
        sigma_mat = sigma.two_form_matrix() if isinstance(sigma, DiagonalOneForm) else np.asarray(sigma, dtype=complex)
    sizes = {w.size for w in covectors}
    if sigma_mat is not None:
        sizes.add(sigma_mat.shape[0])
        if sigma_mat.shape[0] != sigma_mat.shape[1]:
            raise ValueError("sigma must be square")
    if len(sizes) > 1:
        raise ValueError("factors have inconsistent ambient dimension")
    if not sizes:
        raise ValueError("nothing to evaluate")
    n = sizes.pop()
    if len(covectors) + 2 * power != n:
        raise ValueError(
            f"total degree {len(covectors) + 2 * power} does not match ambient real dimension {n}"
        )
    if n <= 8:
        return _expand_full(covectors, sigma_mat, power)
    return _expand_hybrid(covectors, sigma_mat, power)
