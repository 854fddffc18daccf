"""Exact rational linear algebra.

Everything here is fraction-free where it matters: elimination runs the
Bareiss scheme on integer-scaled rows, so solvability verdicts come with
integer witnesses. ``solve_with_certificate`` is the workhorse: on an
inconsistent system it hands back an integer left-null vector y with
y*A = 0 and y*b != 0, which is the refutation object the geodesic checks
serialize.

No numpy: matrices are small (ambient dims <= 5 for roots, <= 52 for the
algebras) and certificates must be exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from math import gcd, lcm

from .errors import DimensionError

Vec = tuple[Q, ...]
Mat = list[list[Q]]


def dot(u, v) -> Q:
    if len(u) != len(v):
        raise DimensionError(f"dot: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Q(0))


def _scale_to_int(row) -> tuple[list[int], int]:
    """Return (integer row, scalar s) with int_row = s * row, s > 0."""
    fr = [Q(x) for x in row]
    s = lcm(*(x.denominator for x in fr)) if fr else 1
    return [int(x * s) for x in fr], s


def _normalize_int_vec(v: list[Q]) -> Vec:
    """Scale a rational vector to coprime integers, first nonzero positive."""
    den = lcm(*(x.denominator for x in v)) if v else 1
    ints = [int(x * den) for x in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    if g > 1:
        ints = [a // g for a in ints]
    for a in ints:
        if a != 0:
            if a < 0:
                ints = [-b for b in ints]
            break
    return tuple(Q(a) for a in ints)


@dataclass(frozen=True)
class SolveResult:
    status: str  # "solved" or "inconsistent"
    solution: Vec | None  # one solution of A x = b (free vars set to 0)
    certificate: Vec | None  # integer y with y*A = 0, y*b != 0

    @property
    def solved(self) -> bool:
        return self.status == "solved"


def solve_with_certificate(rows, rhs) -> SolveResult:
    """Solve A x = b exactly, or refute with an integer left-null certificate.

    The certificate satisfies y*A = 0 and y*b != 0 over the ORIGINAL rows,
    so a caller can re-verify the refutation independently.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    if len(rhs) != m:
        raise DimensionError(f"solve: {m} rows vs {len(rhs)} rhs entries")

    # Integer-scale each augmented row and append an identity tail that
    # tracks the row operations; Bareiss keeps the tail integral too.
    work: list[list[int]] = []
    scales: list[int] = []
    for i in range(m):
        ints, s = _scale_to_int(list(rows[i]) + [rhs[i]])
        scales.append(s)
        work.append(ints + [0] * m)
        work[i][n + 1 + i] = 1

    width = n + 1 + m
    prev_pivot = 1
    pivot_cols: list[int] = []
    r = 0  # current pivot row
    for col in range(n):
        piv = None
        for i in range(r, m):
            if work[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            work[r], work[piv] = work[piv], work[r]
        p = work[r][col]
        for i in range(r + 1, m):
            q = work[i][col]
            wi, wr = work[i], work[r]
            for j in range(width):
                wi[j] = (p * wi[j] - q * wr[j]) // prev_pivot
        prev_pivot = p
        pivot_cols.append(col)
        r += 1
        if r == m:
            break

    # Inconsistency: a row with zero A-part and nonzero b-part. Its tail
    # gives the combination of the scaled rows; undo the scaling.
    for i in range(r, m):
        if work[i][n] != 0:
            y = [Q(work[i][n + 1 + k]) * scales[k] for k in range(m)]
            return SolveResult("inconsistent", None, _normalize_int_vec(y))

    # Back-substitute on the echelon rows (exact rationals, one pass).
    x = [Q(0)] * n
    for k in range(len(pivot_cols) - 1, -1, -1):
        col = pivot_cols[k]
        row = work[k]
        acc = Q(row[n])
        for j in range(col + 1, n):
            if row[j]:
                acc -= Q(row[j]) * x[j]
        x[col] = acc / row[col]
    return SolveResult("solved", tuple(x), None)


def nullspace(rows) -> list[Vec]:
    """Basis of {x : A x = 0}, via reduced echelon form over Q."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    mat = [[Q(x) for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        p = mat[r][col]
        mat[r] = [x / p for x in mat[r]]
        for i in range(m):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Q(0)] * n
        v[fc] = Q(1)
        for k, pc in enumerate(pivots):
            v[pc] = -mat[k][fc]
        basis.append(tuple(v))
    return basis


def invert(rows) -> Mat:
    """Inverse of a square matrix; DimensionError if singular."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionError("invert: matrix not square")
    cols = []
    for j in range(n):
        e = [Q(1) if i == j else Q(0) for i in range(n)]
        res = solve_with_certificate(rows, e)
        if not res.solved:
            raise DimensionError("invert: matrix is singular")
        cols.append(res.solution)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def leading_principal_minors(rows) -> list[Q]:
    """Leading principal minors d_1..d_n via no-swap Bareiss.

    Stops after recording the first zero minor (the elimination cannot
    continue past it); a symmetric matrix is positive definite iff the
    full list comes back with every entry > 0.
    """
    n = len(rows)
    mat = [[Q(x) for x in row] for row in rows]
    minors: list[Q] = []
    prev = Q(1)
    for k in range(n):
        p = mat[k][k]
        minors.append(p)
        if p == 0:
            break
        for i in range(k + 1, n):
            qk = mat[i][k]
            for j in range(k + 1, n):
                mat[i][j] = (p * mat[i][j] - qk * mat[k][j]) / prev
            mat[i][k] = Q(0)
        prev = p
    return minors


def is_positive_definite(rows) -> bool:
    minors = leading_principal_minors(rows)
    return len(minors) == len(rows) and all(d > 0 for d in minors)


class RowBasis:
    """Incremental row-space membership structure over Q.

    Rows are kept in reduced echelon form; ``add`` reports whether the
    vector enlarged the span, ``contains`` tests membership without
    mutating.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: list[list[Q]] = []
        self._pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _reduce(self, vec) -> list[Q]:
        v = [Q(x) for x in vec]
        if len(v) != self.dim:
            raise DimensionError(f"RowBasis: expected dim {self.dim}, got {len(v)}")
        for row, p in zip(self._rows, self._pivots):
            if v[p] != 0:
                f = v[p]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def contains(self, vec) -> bool:
        return all(x == 0 for x in self._reduce(vec))

    def add(self, vec) -> bool:
        v = self._reduce(vec)
        p = next((j for j, x in enumerate(v) if x != 0), None)
        if p is None:
            return False
        f = v[p]
        v = [x / f for x in v]
        for row in self._rows:
            if row[p] != 0:
                g = row[p]
                for j in range(self.dim):
                    row[j] -= g * v[j]
        self._rows.append(v)
        self._pivots.append(p)
        return True
