"""Exact integer monodromy algebra and join-complex homology.

The homology monodromy of the open book with tail exponents (a_1, ..., a_n)
is the Kronecker product of companion-style blocks, one of size a_i - 1 per
exponent; it acts on the middle homology of the join of the root-of-unity
vertex sets, whose reduced homology is free of rank (a_1-1)...(a_n-1) in the
top degree.  Everything here is exact: Python integers, fraction-free
determinants, Smith normal form, and integer kernel bases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations, product
from typing import Sequence

__all__ = [
    "IntMatrix",
    "IntPolynomial",
    "monodromy_block",
    "monodromy_matrix",
    "monodromy_hypotheses",
    "milnor_number",
    "bareiss_determinant",
    "char_poly",
    "char_poly_match",
    "char_poly_relation",
    "matrix_order_check",
    "JoinComplex",
    "boundary_matrix",
    "smith_invariant_factors",
    "HomologySummary",
    "reduced_homology",
    "reduced_homology_ranks",
    "integer_kernel_basis",
    "rotation_induced_map",
]

DEFAULT_BUDGET = 100_000


class IntMatrix:
    """Rectangular matrix over the integers with exact arithmetic."""

    __slots__ = ("data",)

    def __init__(self, rows: Sequence[Sequence[int]]):
        data = tuple(tuple(int(x) for x in row) for row in rows)
        if data and any(len(row) != len(data[0]) for row in data):
            raise ValueError("rows have inconsistent lengths")
        for row in rows:
            for x in row:
                if int(x) != x:
                    raise ValueError("entries must be integers")
        self.data = data

    @property
    def rows(self) -> int:
        return len(self.data)

    @property
    def cols(self) -> int:
        return len(self.data[0]) if self.data else 0

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        ot = list(zip(*other.data)) if other.data else []
        return IntMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in ot] for row in self.data]
        )

    def __pow__(self, k: int) -> "IntMatrix":
        if self.rows != self.cols:
            raise ValueError("powers need a square matrix")
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = IntMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def kron(self, other: "IntMatrix") -> "IntMatrix":
        out = []
        for row_a in self.data:
            for row_b in other.data:
                out.append([a * b for a in row_a for b in row_b])
        return IntMatrix(out)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(list(zip(*self.data)) if self.data else [])

    def determinant(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant needs a square matrix")
        return bareiss_determinant(self.data)

    def to_serializable(self):
        return [[str(x) for x in row] for row in self.data]

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols})"


class IntPolynomial:
    """Integer polynomial, coefficients ascending by degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[int]):
        cleaned = [int(c) for c in coeffs]
        while len(cleaned) > 1 and cleaned[-1] == 0:
            cleaned.pop()
        if not cleaned:
            cleaned = [0]
        self.coeffs = tuple(cleaned)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial([-c for c in self.coeffs])

    def __call__(self, x):
        total = 0
        for c in reversed(self.coeffs):
            total = total * x + c
        return total

    def reciprocal(self) -> "IntPolynomial":
        """Coefficient reversal t^deg * p(1/t)."""
        return IntPolynomial(list(reversed(self.coeffs)))

    def compose_negative(self) -> "IntPolynomial":
        """p(-t)."""
        return IntPolynomial([c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)])

    def monic_normalized(self) -> "IntPolynomial":
        if self.coeffs[-1] < 0:
            return -self
        return self

    def to_serializable(self):
        return [str(c) for c in self.coeffs]

    def __repr__(self):
        terms = []
        for power in range(self.degree, -1, -1):
            c = self.coeffs[power]
            if c == 0 and self.degree > 0:
                continue
            mag = abs(c)
            if power == 0:
                body = f"{mag}"
            elif power == 1:
                body = "t" if mag == 1 else f"{mag}*t"
            else:
                body = f"t^{power}" if mag == 1 else f"{mag}*t^{power}"
            if not terms:
                terms.append(body if c > 0 else f"-{body}")
            else:
                terms.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(terms) if terms else "0"


def monodromy_block(p: int) -> IntMatrix:
    """The p x p block with first row all ones and -1 on the subdiagonal."""
    p = int(p)
    if p < 1:
        raise ValueError("block size must be at least 1")
    rows = [[1] * p]
    for i in range(1, p):
        row = [0] * p
        row[i - 1] = -1
        rows.append(row)
    return IntMatrix(rows)


def milnor_number(tail: Sequence[int]) -> int:
    """Product of (a_i - 1) over the tail exponents."""
    out = 1
    for a in tail:
        ia = int(a)
        if ia != a or ia < 1:
            raise ValueError("exponents must be positive integers")
        out *= ia - 1
    return out


def monodromy_matrix(tail: Sequence[int]) -> IntMatrix:
    """Kronecker product of the blocks of sizes a_i - 1, in the given order."""
    exps = [int(a) for a in tail]
    if not exps:
        raise ValueError("need at least one exponent")
    if any(a <= 1 for a in exps):
        raise ValueError(
            "every exponent must be at least 2: a unit exponent collapses the rank to zero"
        )
    blocks = [monodromy_block(a - 1) for a in exps]
    return reduce(lambda acc, b: acc.kron(b), blocks)


def monodromy_hypotheses(tail: Sequence[int]) -> dict:
    """Applicability flags: more than one exponent and coprime tuple."""
    exps = [int(a) for a in tail]
    g = 0
    for a in exps:
        g = math.gcd(g, a)
    return {
        "n_greater_than_one": len(exps) > 1,
        "gcd": g,
        "gcd_is_one": g == 1,
        "has_unit_exponent": any(a == 1 for a in exps),
    }


def bareiss_determinant(rows) -> int:
    """Fraction-free exact determinant of an integer matrix."""
    a = [list(int(x) for x in row) for row in rows]
    n = len(a)
    if n == 0:
        return 1
    if any(len(row) != n for row in a):
        raise ValueError("determinant needs a square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot_row = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot_row is None:
                return 0
            a[k], a[pivot_row] = a[pivot_row], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _interpolate_integer_poly(xs: list[int], ys: list[int]) -> list[int]:
    """Exact polynomial interpolation; the result must have integer coefficients."""
    n = len(xs)
    divided = [Fraction(y) for y in ys]
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            divided[i] = (divided[i] - divided[i - 1]) / (xs[i] - xs[i - level])
    poly = [Fraction(0)] * n
    basis = [Fraction(1)]
    for i in range(n):
        for j, b in enumerate(basis):
            poly[j] += divided[i] * b
        if i < n - 1:
            shifted = [Fraction(0)] + basis
            scaled = [-Fraction(xs[i]) * b for b in basis] + [Fraction(0)]
            basis = [u + v for u, v in zip(shifted, scaled)]
    out = []
    for c in poly:
        if c.denominator != 1:
            raise ArithmeticError("interpolation produced a non-integer coefficient")
        out.append(int(c))
    return out


def char_poly(matrix: IntMatrix) -> IntPolynomial:
    """Characteristic polynomial det(tI - M), exactly.

    Fraction-free determinants at the integer points 0..dim followed by exact
    interpolation; the result is monic of degree equal to the dimension.
    """
    if matrix.rows != matrix.cols:
        raise ValueError("characteristic polynomial needs a square matrix")
    n = matrix.rows
    xs = list(range(n + 1))
    ys = []
    for t in xs:
        shifted = [
            [(t if i == j else 0) - matrix.data[i][j] for j in range(n)] for i in range(n)
        ]
        ys.append(bareiss_determinant(shifted))
    poly = IntPolynomial(_interpolate_integer_poly(xs, ys))
    if poly.degree != n or not poly.is_monic:
        raise ArithmeticError("characteristic polynomial came out non-monic")
    return poly


def char_poly_match(candidate: IntPolynomial, reference: IntPolynomial) -> str | None:
    """Classify candidate as the reference char poly or its reciprocal."""
    if candidate == reference:
        return "equal"
    if candidate == reference.reciprocal().monic_normalized():
        return "reciprocal"
    return None


def char_poly_relation(candidate: IntPolynomial, reference: IntPolynomial) -> str:
    """Diagnose how candidate relates to reference: also detects sign twists.

    "negated" means candidate(t) == char poly of the negated reference matrix,
    which happens for the Kronecker-block monodromy model when the number of
    factors is odd.
    """
    direct = char_poly_match(candidate, reference)
    if direct is not None:
        return direct
    negated = reference.compose_negative().monic_normalized()
    if candidate == negated:
        return "negated"
    if candidate == negated.reciprocal().monic_normalized():
        return "negated_reciprocal"
    return "none"


def matrix_order_check(matrix: IntMatrix, bound: int) -> int | None:
    """Least k <= bound with M^k the identity, if any (exact)."""
    if matrix.rows != matrix.cols:
        raise ValueError("order check needs a square matrix")
    ident = IntMatrix.identity(matrix.rows)
    power = ident
    for k in range(1, int(bound) + 1):
        power = power @ matrix
        if power == ident:
            return k
    return None


@dataclass(frozen=True)
class JoinComplex:
    """Join of discrete vertex sets: at most one vertex from each part.

    Top simplices pick one vertex per part, so their count is the product of
    the part sizes and the complex has dimension len(part_sizes) - 1.
    """

    part_sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(a) for a in self.part_sizes)
        if not sizes or any(a < 1 for a in sizes):
            raise ValueError("part sizes must be positive integers")
        object.__setattr__(self, "part_sizes", sizes)

    @property
    def parts(self) -> int:
        return len(self.part_sizes)

    @property
    def dimension(self) -> int:
        return self.parts - 1

    def vertex_count(self) -> int:
        return sum(self.part_sizes)

    def simplex_count(self) -> int:
        total = 1
        for a in self.part_sizes:
            total *= a + 1
        return total - 1

    def part_offsets(self) -> tuple[int, ...]:
        offsets = [0]
        for a in self.part_sizes[:-1]:
            offsets.append(offsets[-1] + a)
        return tuple(offsets)

    def simplices(self, k: int) -> list[tuple[int, ...]]:
        """All k-simplices as ascending tuples of global vertex ids."""
        if k < 0 or k > self.dimension:
            raise ValueError(f"no simplices of dimension {k}")
        offsets = self.part_offsets()
        out = []
        for parts in combinations(range(self.parts), k + 1):
            ranges = [range(offsets[p], offsets[p] + self.part_sizes[p]) for p in parts]
            out.extend(tuple(v) for v in product(*ranges))
        return out


def boundary_matrix(complex_: JoinComplex, k: int) -> IntMatrix:
    """Simplicial boundary from k-chains to (k-1)-chains.

    Degree zero returns the augmentation onto a point (a single all-ones
    row), which is the convention matching reduced homology; the composite
    of consecutive boundaries vanishes.
    """
    if k < 0 or k > complex_.dimension:
        raise ValueError(f"boundary degree {k} out of range")
    if k == 0:
        return IntMatrix([[1] * complex_.vertex_count()])
    lower = {simplex: i for i, simplex in enumerate(complex_.simplices(k - 1))}
    upper = complex_.simplices(k)
    rows = [[0] * len(upper) for _ in range(len(lower))]
    for col, simplex in enumerate(upper):
        for drop in range(len(simplex)):
            face = simplex[:drop] + simplex[drop + 1 :]
            rows[lower[face]][col] += (-1) ** drop
    return IntMatrix(rows)


def smith_invariant_factors(matrix: IntMatrix) -> list[int]:
    """Nonzero invariant factors (positive, each dividing the next)."""
    a = [list(row) for row in matrix.data]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    factors: list[int] = []
    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = a[i][j]
                if v != 0 and (best is None or abs(v) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        if bi != t:
            a[t], a[bi] = a[bi], a[t]
        if bj != t:
            for r in range(rows):
                a[r][t], a[r][bj] = a[r][bj], a[r][t]
        while True:
            p = a[t][t]
            swapped = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // p
                    for j in range(t, cols):
                        a[i][j] -= q * a[t][j]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        swapped = True
                        break
            if swapped:
                continue
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // p
                    for i in range(t, rows):
                        a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        for r in range(rows):
                            a[r][t], a[r][j] = a[r][j], a[r][t]
                        swapped = True
                        break
            if not swapped:
                break
        p = a[t][t]
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % p != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            for j in range(t, cols):
                a[t][j] += a[offender][j]
            continue
        factors.append(abs(p))
        t += 1
    return factors


@dataclass(frozen=True)
class HomologySummary:
    """Reduced Betti numbers by degree and the torsion invariant factors."""

    ranks: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]

    @property
    def torsion_free(self) -> bool:
        return all(not t for t in self.torsion)


def _check_budget(complex_: JoinComplex, budget: int) -> None:
    count = complex_.simplex_count()
    if count > budget:
        raise ValueError(f"complex has {count} simplices, over the budget {budget}")


def reduced_homology(complex_: JoinComplex, budget: int = DEFAULT_BUDGET) -> HomologySummary:
    """Reduced integral homology via exact Smith normal form.

    For the join of n parts the expected profile is rank prod(a_i - 1) in
    degree n-1 and zero elsewhere with no torsion.
    """
    _check_budget(complex_, budget)
    n = complex_.parts
    counts = [len(complex_.simplices(k)) for k in range(n)]
    boundary_factors = [smith_invariant_factors(boundary_matrix(complex_, k)) for k in range(n)]
    ranks = []
    torsion = []
    for k in range(n):
        rank_in = len(boundary_factors[k])
        rank_out = len(boundary_factors[k + 1]) if k + 1 < n else 0
        ranks.append(counts[k] - rank_in - rank_out)
        if k + 1 < n:
            torsion.append(tuple(f for f in boundary_factors[k + 1] if f > 1))
        else:
            torsion.append(())
    return HomologySummary(ranks=tuple(ranks), torsion=tuple(torsion))


def reduced_homology_ranks(complex_: JoinComplex, budget: int = DEFAULT_BUDGET) -> list[int]:
    """Reduced Betti numbers in degrees 0..n-1."""
    return list(reduced_homology(complex_, budget=budget).ranks)


def integer_kernel_basis(matrix: IntMatrix) -> IntMatrix:
    """Columns forming a lattice basis of the integer kernel.

    Euclidean column elimination with a unimodular companion; the returned
    matrix has one column per kernel generator.
    """
    rows = matrix.rows
    cols = matrix.cols
    a = [list(row) for row in matrix.data]
    u = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]
    lead = 0
    for r in range(rows):
        if lead >= cols:
            break
        while True:
            nonzero = [j for j in range(lead, cols) if a[r][j] != 0]
            if len(nonzero) <= 1:
                break
            jmin = min(nonzero, key=lambda j: abs(a[r][j]))
            for j in nonzero:
                if j == jmin:
                    continue
                q = a[r][j] // a[r][jmin]
                if q:
                    for i in range(rows):
                        a[i][j] -= q * a[i][jmin]
                    for i in range(cols):
                        u[i][j] -= q * u[i][jmin]
        nonzero = [j for j in range(lead, cols) if a[r][j] != 0]
        if nonzero:
            j0 = nonzero[0]
            if j0 != lead:
                for i in range(rows):
                    a[i][j0], a[i][lead] = a[i][lead], a[i][j0]
                for i in range(cols):
                    u[i][j0], u[i][lead] = u[i][lead], u[i][j0]
            lead += 1
    kernel_cols = [[u[i][j] for i in range(cols)] for j in range(lead, cols)]
    return IntMatrix(list(zip(*kernel_cols)) if kernel_cols else [[] for _ in range(cols)])


def _solve_exact(basis: IntMatrix, target: IntMatrix) -> IntMatrix:
    """Solve basis @ X = target exactly; the solution must be integral."""
    rows = basis.rows
    k = basis.cols
    width = target.cols
    if target.rows != rows:
        raise ValueError("dimension mismatch in exact solve")
    aug = [
        [Fraction(basis.data[i][j]) for j in range(k)]
        + [Fraction(target.data[i][j]) for j in range(width)]
        for i in range(rows)
    ]
    pivot_row = 0
    pivot_cols = []
    for col in range(k):
        pivot = next((i for i in range(pivot_row, rows) if aug[i][col] != 0), None)
        if pivot is None:
            continue
        aug[pivot_row], aug[pivot] = aug[pivot], aug[pivot_row]
        pv = aug[pivot_row][col]
        aug[pivot_row] = [x / pv for x in aug[pivot_row]]
        for i in range(rows):
            if i != pivot_row and aug[i][col] != 0:
                factor = aug[i][col]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[pivot_row])]
        pivot_cols.append(col)
        pivot_row += 1
    if len(pivot_cols) != k:
        raise ValueError("basis matrix does not have full column rank")
    sol = [[Fraction(0)] * width for _ in range(k)]
    for row_idx, col in enumerate(pivot_cols):
        for j in range(width):
            sol[col][j] = aug[row_idx][j + k]
    for i in range(pivot_row, rows):
        if any(aug[i][k + j] != 0 for j in range(width)):
            raise ArithmeticError("inconsistent exact solve")
    out = []
    for row in sol:
        int_row = []
        for x in row:
            if x.denominator != 1:
                raise ArithmeticError("solution is not integral")
            int_row.append(int(x))
        out.append(int_row)
    result = IntMatrix(out)
    if basis @ result != target:
        raise ArithmeticError("exact solve verification failed")
    return result


def _rotation_vertex_map(complex_: JoinComplex, shifts: Sequence[int]) -> list[int]:
    offsets = complex_.part_offsets()
    mapping = []
    for part, size in enumerate(complex_.part_sizes):
        base = offsets[part]
        shift = int(shifts[part]) % size
        for idx in range(size):
            mapping.append(base + (idx + shift) % size)
    return mapping


def rotation_induced_map(
    complex_: JoinComplex,
    shifts: Sequence[int] | None = None,
    budget: int = DEFAULT_BUDGET,
) -> IntMatrix:
    """Matrix of the part-wise vertex rotation on top-degree homology.

    The chain map permutes top simplices without sign (the part-sorted vertex
    order is preserved), and the homology basis is an integer kernel basis of
    the top boundary; the induced matrix solves an exact linear system over
    that basis.
    """
    _check_budget(complex_, budget)
    if shifts is None:
        shifts = (1,) * complex_.parts
    if len(shifts) != complex_.parts:
        raise ValueError("one shift per part is required")
    top = complex_.dimension
    kernel = integer_kernel_basis(boundary_matrix(complex_, top))
    vertex_map = _rotation_vertex_map(complex_, shifts)
    simplices = complex_.simplices(top)
    index = {simplex: i for i, simplex in enumerate(simplices)}
    perm_rows = [[0] * len(simplices) for _ in range(len(simplices))]
    for col, simplex in enumerate(simplices):
        image = tuple(sorted(vertex_map[v] for v in simplex))
        perm_rows[index[image]][col] = 1
    permutation = IntMatrix(perm_rows)
    return _solve_exact(kernel, permutation @ kernel)
