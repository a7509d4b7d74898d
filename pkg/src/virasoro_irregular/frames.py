"""Parameter frames: eigenvalue tables, deformation fields and dual operators.

A family of modules is coordinatized by scalars ``c_1 .. c_r`` (plus the
zero-mode parameter ``c_0`` and the background charge ``Q``).  Deforming a
parameter acts on eigenvalues through explicit vector fields; inverting the
matrix of those fields against the parameter derivatives singles out, for
each expansion variable, one operator combination dual to it.  That dual
combination drives the series recursions in the solver, and the remaining
rows of the inverse drive the gauge analysis.

Two families appear:

* the polynomial family, coordinates ``c_1..c_r``, expansion in the top
  parameter ``c_r``;
* the odd family, coordinates ``c_1..c_{r-1}`` plus a top eigenvalue ``Lam``
  of weight ``2r-1``, expansion in ``Lam``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import inverse_exact
from .ring import LaurentPoly, NotDivisible, RingError, VarTable

GENERAL = "general"
DISPLAY = "section2-display"
CONVENTIONS = (GENERAL, DISPLAY)


class FrameError(RingError):
    """Structural failure while building a frame or its dual operator."""


class DegreeOverflow(FrameError):
    """A dual-operator coefficient has powers outside the proven range."""


# ----- scalar tables --------------------------------------------------------


def default_central_charge(table: VarTable, qname: str = "Q") -> LaurentPoly:
    q = LaurentPoly.var(table, qname)
    return 1 + 6 * q * q


def conformal_weight(table: VarTable, c0name: str, qname: str = "Q") -> LaurentPoly:
    c0 = LaurentPoly.var(table, c0name)
    return c0 * (LaurentPoly.var(table, qname) - c0)


def _cvar(table: VarTable, cnames: Sequence[str], j: int) -> LaurentPoly:
    """c_j as a polynomial; indices outside 1..len(cnames) give zero."""
    if 1 <= j <= len(cnames):
        return LaurentPoly.var(table, cnames[j - 1])
    return LaurentPoly.zero(table)


def eigenvalue(table: VarTable, n: int, cnames: Sequence[str],
               c0name: str = "c0", qname: str = "Q",
               convention: str = GENERAL) -> LaurentPoly:
    """Mode-n eigenvalue of the family with top parameter index len(cnames).

    The linear part is ``((n+1) Q - kappa c_0) c_n`` with ``kappa = 1`` in
    the general convention and ``kappa = 2`` in the display convention; the
    quadratic part is ``-sum_{a+b=n} c_a c_b`` over positive indices.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    if n < 1:
        raise ValueError("eigenvalues are indexed by positive modes")
    kappa = 1 if convention == GENERAL else 2
    q = LaurentPoly.var(table, qname)
    c0 = LaurentPoly.var(table, c0name)
    out = ((n + 1) * q - kappa * c0) * _cvar(table, cnames, n)
    for a in range(1, n):
        out = out - _cvar(table, cnames, a) * _cvar(table, cnames, n - a)
    return out


def eigen_window(table: VarTable, r: int, cnames: Sequence[str],
                 c0name: str = "c0", qname: str = "Q",
                 convention: str = GENERAL) -> dict[int, LaurentPoly]:
    """Eigenvalues of the annihilating window, modes ``r`` through ``2r``."""
    if len(cnames) != r:
        raise ValueError("need exactly r parameter names")
    return {n: eigenvalue(table, n, cnames, c0name, qname, convention)
            for n in range(r, 2 * r + 1)}


def lower_scalars(table: VarTable, r: int, cnames: Sequence[str],
                  c0name: str = "c0", qname: str = "Q",
                  convention: str = GENERAL) -> dict[int, LaurentPoly]:
    """Scalars subtracted from the free modes ``1`` through ``r-1``."""
    return {n: eigenvalue(table, n, cnames, c0name, qname, convention)
            for n in range(1, r)}


def quadratic_scalars(table: VarTable, r: int, cnames: Sequence[str],
                      lam_name: str) -> dict[int, LaurentPoly]:
    """Annihilating-window scalars of the odd family.

    Modes ``r`` to ``2r-2`` carry the pure quadratic ``-sum c_a c_b`` over
    the surviving parameters ``c_1..c_{r-1}``; mode ``2r-1`` carries the free
    top eigenvalue; everything above vanishes (and is omitted).
    """
    if len(cnames) != r - 1:
        raise ValueError("odd family has r-1 polynomial parameters")
    out: dict[int, LaurentPoly] = {}
    for m in range(r, 2 * r - 1):
        acc = LaurentPoly.zero(table)
        for a in range(1, m):
            acc = acc - _cvar(table, cnames, a) * _cvar(table, cnames, m - a)
        out[m] = acc
    out[2 * r - 1] = LaurentPoly.var(table, lam_name)
    return out


# ----- polynomial-family frame ------------------------------------------------


def deformation_fields(table: VarTable, r: int,
                       cnames: Sequence[str]) -> list[dict[str, LaurentPoly]]:
    """Vector fields of parameter deformations, indices ``0`` to ``r-1``.

    Field ``i`` sends ``c_k`` to ``k * c_{i+k}``; entries beyond the top
    index vanish.  Field ``0`` is the weight (Euler) field.
    """
    if len(cnames) != r:
        raise ValueError("need exactly r parameter names")
    fields = []
    for i in range(r):
        comp: dict[str, LaurentPoly] = {}
        for k in range(1, r - i + 1):
            comp[cnames[k - 1]] = k * _cvar(table, cnames, i + k)
        fields.append(comp)
    return fields


def apply_field(field: dict[str, LaurentPoly], poly: LaurentPoly) -> LaurentPoly:
    out = LaurentPoly.zero(poly.table)
    for name, coeff in field.items():
        out = out + coeff * poly.derivative(name)
    return out


def frame_matrix(table: VarTable, r: int, cnames: Sequence[str]) -> list[list[LaurentPoly]]:
    """Matrix of the deformation fields against the parameter derivatives."""
    fields = deformation_fields(table, r, cnames)
    zero = LaurentPoly.zero(table)
    return [[fields[i].get(cnames[k], zero) for k in range(r)] for i in range(r)]


def expected_frame_det(table: VarTable, r: int, cnames: Sequence[str]) -> LaurentPoly:
    sign = -1 if (r * (r - 1) // 2) % 2 else 1
    fact = 1
    for k in range(2, r + 1):
        fact *= k
    top = LaurentPoly.var(table, cnames[r - 1], r)
    return top * Fraction(sign * fact)


def series_inverse_coeffs(table: VarTable, r: int, cnames: Sequence[str],
                          count: int) -> list[LaurentPoly]:
    """Taylor coefficients of ``1 / (c_r + c_{r-1} z + ... + c_1 z^{r-1})``."""
    top = _cvar(table, cnames, r)
    top_inv = top ** -1
    coeffs = [top_inv]
    for p in range(1, count):
        acc = LaurentPoly.zero(table)
        for m in range(max(0, p - r + 1), p):
            acc = acc + coeffs[m] * _cvar(table, cnames, r - p + m)
        coeffs.append(-(acc * top_inv))
    return coeffs


@dataclass
class DualOperator:
    """Expansion-variable orders of the operator dual to one frame direction.

    ``orders[i]`` maps a mode index ``n`` to the coefficient of ``D_n`` at
    order ``i`` of the expansion variable; coefficients never contain the
    expansion variable itself.  ``D_n`` stands for mode ``n`` minus its
    scalar (the conformal weight for ``n = 0``, the lower scalar table
    otherwise).
    """

    r: int
    var: str
    orders: list[dict[int, LaurentPoly]]

    def order_count(self) -> int:
        return len(self.orders)


def dual_operator(table: VarTable, r: int, cnames: Sequence[str]) -> DualOperator:
    """Operator combination dual to deforming the top polynomial parameter.

    Row ``r`` of the inverted frame matrix, cleared by ``c_r ** r`` and split
    into powers of ``c_r``: the result is ``sum_i var^i sum_n w[i][n] D_n``
    with every ``w[i][n]`` free of the top parameter.
    """
    matrix = frame_matrix(table, r, cnames)
    inv = inverse_exact(matrix)
    top = cnames[r - 1]
    clear = LaurentPoly.var(table, top, r)
    orders: list[dict[int, LaurentPoly]] = [{} for _ in range(r)]
    for n in range(r):
        coeff = clear * inv[r - 1][n]
        for power, part in coeff.split_by_var(top).items():
            if power < 0 or power > r - 1:
                raise DegreeOverflow(
                    f"dual coefficient power {power} outside 0..{r - 1}")
            if not part.is_zero():
                orders[power][n] = part
    return DualOperator(r=r, var=top, orders=orders)


# ----- odd-family frame ---------------------------------------------------------


def odd_fields(table: VarTable, r: int, cnames: Sequence[str],
               lam_name: str) -> list[dict[str, LaurentPoly]]:
    """Deformation fields of the odd family, indices ``0`` to ``r-1``.

    Field ``0`` is the weight field.  For ``n >= 1`` the components are the
    unique solution of the requirement that applying the field to every
    annihilating-window scalar ``S_m`` (modes ``r`` to ``2r-2``) returns
    ``(m - n) S_{m+n}``, scalars above mode ``2r-1`` being zero.  The system
    is triangular with diagonal ``-2 c_{r-1}``, so the solution is exact.
    """
    if len(cnames) != r - 1:
        raise ValueError("odd family has r-1 polynomial parameters")
    scal = quadratic_scalars(table, r, cnames, lam_name)

    def s_at(m: int) -> LaurentPoly:
        return scal.get(m, LaurentPoly.zero(table))

    fields: list[dict[str, LaurentPoly]] = []
    euler: dict[str, LaurentPoly] = {
        cnames[k - 1]: k * _cvar(table, cnames, k) for k in range(1, r)
    }
    euler[lam_name] = (2 * r - 1) * LaurentPoly.var(table, lam_name)
    fields.append(euler)
    diag = -2 * _cvar(table, cnames, r - 1)
    for n in range(1, r):
        h: dict[int, LaurentPoly] = {}
        for j in range(r - 1, 0, -1):
            rhs = (r - 1 + j - n) * s_at(r - 1 + j + n)
            acc = rhs
            for k in range(j + 1, r):
                idx = r - 1 + j - k
                if 1 <= idx <= r - 1:
                    acc = acc + 2 * _cvar(table, cnames, idx) * h[k]
            h[j] = acc.exact_div(diag)
        comp = {cnames[k - 1]: h[k] for k in range(1, r) if not h[k].is_zero()}
        fields.append(comp)
    return fields


def odd_frame_matrix(table: VarTable, r: int, cnames: Sequence[str],
                     lam_name: str) -> list[list[LaurentPoly]]:
    """Odd-family fields against the derivatives of ``c_1..c_{r-1}, Lam``."""
    fields = odd_fields(table, r, cnames, lam_name)
    cols = list(cnames) + [lam_name]
    zero = LaurentPoly.zero(table)
    return [[fields[n].get(col, zero) for col in cols] for n in range(r)]


def expected_odd_frame_det(table: VarTable, r: int, cnames: Sequence[str],
                           lam_name: str) -> LaurentPoly:
    kappa = Fraction(2 * r - 1)
    for n in range(1, r):
        kappa *= Fraction(-(2 * r - 2 * n - 1), 2)
    if (r * (r - 1) // 2) % 2:
        kappa = -kappa
    lam = LaurentPoly.var(table, lam_name, r)
    bottom = LaurentPoly.var(table, cnames[r - 2], -(r - 1)) if r >= 2 \
        else LaurentPoly.const(table, 1)
    return lam * bottom * kappa


def odd_dual_operator(table: VarTable, r: int, cnames: Sequence[str],
                      lam_name: str) -> DualOperator:
    """Operator combination dual to deforming the top odd eigenvalue.

    The top-eigenvalue row of the inverted odd frame, cleared by ``Lam**r``
    and split into powers of ``Lam``; coefficients must stay free of
    negative powers of ``Lam``.
    """
    matrix = odd_frame_matrix(table, r, cnames, lam_name)
    inv = inverse_exact(matrix)
    clear = LaurentPoly.var(table, lam_name, r)
    orders: list[dict[int, LaurentPoly]] = [{} for _ in range(r)]
    for n in range(r):
        coeff = clear * inv[r - 1][n]
        for power, part in coeff.split_by_var(lam_name).items():
            if power < 0 or power > r - 1:
                raise DegreeOverflow(
                    f"odd dual coefficient power {power} outside 0..{r - 1}")
            if not part.is_zero():
                orders[power][n] = part
    return DualOperator(r=r, var=lam_name, orders=orders)


def lowest_order_profile(op: DualOperator) -> dict[int, LaurentPoly]:
    """Order-zero part of a dual operator (the seed of its recursion)."""
    return dict(op.orders[0])
