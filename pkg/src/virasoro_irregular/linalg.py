"""Exact linear algebra over the Laurent ring and its fraction field.

Determinants use the Bareiss fraction-free scheme so intermediate entries
stay in the ring and every division is exact.  Adjugates come from cofactor
expansion, which is cheap at the matrix sizes that appear here (frame
matrices have size equal to the rank, at most six or so).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .ring import LaurentPoly, NotDivisible, RationalFunction


class LinalgError(Exception):
    """Base class for exact linear-algebra failures."""


class SingularSystem(LinalgError):
    """A matrix expected to be invertible has rank deficiency."""


class InconsistentSystem(LinalgError):
    """An overdetermined system has no solution."""


Matrix = list[list[LaurentPoly]]


def _clone(rows: Sequence[Sequence[LaurentPoly]]) -> Matrix:
    return [list(row) for row in rows]


def det_bareiss(rows: Sequence[Sequence[LaurentPoly]]) -> LaurentPoly:
    """Determinant by fraction-free elimination with row pivoting."""
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    if any(len(row) != n for row in rows):
        raise ValueError("matrix must be square")
    table = rows[0][0].table
    a = _clone(rows)
    sign = 1
    prev = LaurentPoly.const(table, 1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return LaurentPoly.zero(table)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]).exact_div(prev)
            a[i][k] = LaurentPoly.zero(table)
        prev = a[k][k]
    return a[n - 1][n - 1] if sign == 1 else -a[n - 1][n - 1]


def _minor(rows: Sequence[Sequence[LaurentPoly]], drop_row: int, drop_col: int) -> Matrix:
    return [
        [entry for j, entry in enumerate(row) if j != drop_col]
        for i, row in enumerate(rows)
        if i != drop_row
    ]


def adjugate(rows: Sequence[Sequence[LaurentPoly]]) -> Matrix:
    """Adjugate matrix: ``A @ adjugate(A) == det(A) * I``."""
    n = len(rows)
    table = rows[0][0].table
    if n == 1:
        return [[LaurentPoly.const(table, 1)]]
    out = [[LaurentPoly.zero(table) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            cof = det_bareiss(_minor(rows, j, i))
            out[i][j] = cof if (i + j) % 2 == 0 else -cof
    return out


def inverse_exact(rows: Sequence[Sequence[LaurentPoly]]) -> Matrix:
    """Inverse with entries in the Laurent ring; needs det to divide every cofactor."""
    d = det_bareiss(rows)
    if d.is_zero():
        raise SingularSystem("matrix determinant is zero")
    adj = adjugate(rows)
    try:
        return [[entry.exact_div(d) for entry in row] for row in adj]
    except NotDivisible as exc:
        raise NotDivisible(f"inverse leaves the Laurent ring: {exc}") from exc


def mat_mul(a: Sequence[Sequence[LaurentPoly]], b: Sequence[Sequence[LaurentPoly]]) -> Matrix:
    table = a[0][0].table
    out = []
    for row in a:
        new = []
        for j in range(len(b[0])):
            acc = LaurentPoly.zero(table)
            for k, entry in enumerate(row):
                acc = acc + entry * b[k][j]
            new.append(acc)
        out.append(new)
    return out


def mat_vec(a: Sequence[Sequence[LaurentPoly]], v: Sequence[LaurentPoly]) -> list[LaurentPoly]:
    out = []
    for row in a:
        acc = row[0] * v[0]
        for entry, x in zip(row[1:], v[1:]):
            acc = acc + entry * x
        out.append(acc)
    return out


def solve_cramer_poly(
    a_rows: Sequence[Sequence[LaurentPoly]],
    b: Sequence[LaurentPoly],
) -> tuple[list[LaurentPoly], LaurentPoly]:
    """Solve ``A x = b`` over the ring without leaving it.

    Returns ``(numerators, det)`` with ``x_i = numerators[i] / det``; the
    caller keeps the common denominator explicit, which avoids rational
    arithmetic whose unreduced intermediates grow without bound.
    """
    n = len(a_rows)
    if any(len(row) != n for row in a_rows) or len(b) != n:
        raise ValueError("system must be square with a matching right side")
    d = det_bareiss(a_rows)
    if d.is_zero():
        raise SingularSystem("matrix determinant is zero")
    nums = []
    for col in range(n):
        replaced = [
            [b[i] if j == col else entry for j, entry in enumerate(row)]
            for i, row in enumerate(a_rows)
        ]
        nums.append(det_bareiss(replaced))
    return nums, d


def solve_unique_rational(
    a_rows: Sequence[Sequence[RationalFunction]],
    b: Sequence[RationalFunction],
) -> list[RationalFunction]:
    """Solve an (possibly overdetermined) full-column-rank system exactly.

    Extra equations beyond the rank must be consistent; otherwise
    InconsistentSystem is raised.  Rank deficiency raises SingularSystem.
    """
    m = len(a_rows)
    if m != len(b):
        raise ValueError("matrix and right-hand side disagree")
    n = len(a_rows[0]) if m else 0
    aug = [list(row) + [rhs] for row, rhs in zip(a_rows, b)]
    row = 0
    pivots: list[int] = []
    for col in range(n):
        piv = next((i for i in range(row, m) if not aug[i][col].is_zero()), None)
        if piv is None:
            raise SingularSystem(f"no pivot in column {col}")
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [entry * inv for entry in aug[row]]
        for i in range(m):
            if i != row and not aug[i][col].is_zero():
                factor = aug[i][col]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
    for i in range(row, m):
        if not aug[i][n].is_zero():
            raise InconsistentSystem("overdetermined system has no solution")
    return [aug[pivots.index(col)][n] for col in range(n)]


def rref_solve_fraction(
    a_rows: Sequence[Sequence[Fraction]],
    b: Sequence[Fraction],
) -> tuple[list[Fraction], list[int]]:
    """Solve a rational linear system, zeroing all free variables.

    Returns ``(solution, free_columns)``; the solution is the unique one
    supported on pivot columns, which makes the output deterministic.
    Raises InconsistentSystem when no solution exists.
    """
    m = len(a_rows)
    n = len(a_rows[0]) if m else 0
    aug = [[Fraction(x) for x in row] + [Fraction(rhs)] for row, rhs in zip(a_rows, b)]
    row = 0
    pivot_of_col: dict[int, int] = {}
    for col in range(n):
        piv = next((i for i in range(row, m) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [entry * inv for entry in aug[row]]
        for i in range(m):
            if i != row and aug[i][col] != 0:
                factor = aug[i][col]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[row])]
        pivot_of_col[col] = row
        row += 1
    for i in range(row, m):
        if aug[i][n] != 0:
            raise InconsistentSystem("no solution over the rationals")
    xs = [Fraction(0)] * n
    for col, r in pivot_of_col.items():
        xs[col] = aug[r][n]
    free = [c for c in range(n) if c not in pivot_of_col]
    return xs, free
