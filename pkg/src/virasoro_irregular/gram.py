"""Pairing between shifted-word functionals and the partition basis.

The scalar ``{X}`` denotes the coefficient of the cyclic vector in ``X``.
Pairing the shifted word of ``mu`` against the basis vector of ``lam`` gives
a matrix with two structural properties this module relies on and also
verifies in tests:

* the entry vanishes whenever ``|mu| > |lam|``;
* equal-weight blocks are diagonal, with closed-form diagonal entries

      2^len * prod(parts) * prod(multiplicity!) * top_eigenvalue^len

where ``top_eigenvalue`` is the eigenvalue of the highest annihilating mode
``2 * rho``.  Determinants of weight ranges are therefore pure powers of the
top eigenvalue up to a rational factor; ``gram_det_report`` computes the
determinant honestly (fraction-free elimination, no use of the closed form)
and factors it, so any deviation surfaces as an error.

``solve_descendants`` inverts the pairing: given the values ``{L~_mu v}``
for every word up to a weight bound, it reconstructs the descendant part of
``v`` one weight at a time from the top, dividing by the honest diagonal
entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .linalg import det_bareiss
from .ring import LaurentPoly, NotDivisible, RingError
from .virasoro import (
    ModuleContext,
    ModuleVector,
    Partition,
    apply_tilde_word,
    partition_sort_key,
    partitions_of,
)


class GramError(RingError):
    """Structural failure in the pairing machinery."""


class SingularGram(GramError):
    """A diagonal pairing entry vanished, so the solve cannot proceed."""


class ProportionalityFailure(GramError):
    """A determinant is not a rational multiple of a pure eigenvalue power."""

    def __init__(self, message: str, det: LaurentPoly, base: LaurentPoly,
                 exponent: int, remainder: LaurentPoly):
        super().__init__(message)
        self.det = det
        self.base = base
        self.exponent = exponent
        self.remainder = remainder


def gram_entry(ctx: ModuleContext, mu: Partition, lam: Partition) -> LaurentPoly:
    """Pairing of the shifted word of ``mu`` against the basis vector of ``lam``."""
    return apply_tilde_word(ctx.basis(lam) if lam else ctx.cyclic(), mu).constant_term()


def weight_range_partitions(lo: int, hi: int) -> list[Partition]:
    out: list[Partition] = []
    for w in range(lo, hi + 1):
        out.extend(partitions_of(w))
    return sorted(out, key=partition_sort_key)


def gram_matrix(ctx: ModuleContext, lo: int, hi: int
                ) -> tuple[list[Partition], list[list[LaurentPoly]]]:
    """Pairing matrix over all partitions with weight in ``[lo, hi]``."""
    parts = weight_range_partitions(lo, hi)
    rows = [[gram_entry(ctx, mu, lam) for lam in parts] for mu in parts]
    return parts, rows


def expected_diagonal(ctx: ModuleContext, lam: Partition) -> LaurentPoly:
    """Closed form of the diagonal pairing entry."""
    top = ctx.eigenvalue(2 * ctx.rho)
    value = LaurentPoly.const(ctx.table, 1)
    mult: dict[int, int] = {}
    for part in lam:
        mult[part] = mult.get(part, 0) + 1
        value = value * (2 * part)
        value = value * top
    for count in mult.values():
        value = value * math.factorial(count)
    return value


def pure_power_factor(poly: LaurentPoly, base: LaurentPoly) -> tuple[int, Fraction]:
    """Write ``poly`` as ``ratio * base**exponent`` or raise ProportionalityFailure.

    The candidate exponent is forced by the grading: both operands must be
    quasi-homogeneous and the base must carry nonzero weight (every
    eigenvalue base here does), so a single exact division decides.
    """
    if poly.is_zero():
        raise ProportionalityFailure("zero cannot be a pure power", poly, base, 0, poly)
    if poly.is_constant():
        return 0, poly.as_rational()
    w_base = base.homogeneous_weight()
    w_poly = poly.homogeneous_weight()
    if not w_base:
        raise ProportionalityFailure("base must carry nonzero weight",
                                     poly, base, 0, poly)
    if w_poly is None or w_poly % w_base != 0 or w_poly // w_base < 0:
        raise ProportionalityFailure("weights rule out a pure power",
                                     poly, base, 0, poly)
    exponent = w_poly // w_base
    try:
        ratio = poly.exact_div(base ** exponent)
    except NotDivisible:
        raise ProportionalityFailure(
            f"base power {exponent} does not divide the determinant",
            poly, base, exponent, poly) from None
    if not ratio.is_constant():
        raise ProportionalityFailure(
            f"cofactor of base power {exponent} is not rational",
            poly, base, exponent, ratio)
    return exponent, ratio.as_rational()


@dataclass
class GramDetReport:
    """Factorized determinant of a weight-range pairing block."""

    lo: int
    hi: int
    size: int
    det: LaurentPoly
    base: LaurentPoly
    exponent: int
    ratio: Fraction


def gram_det_report(ctx: ModuleContext, lo: int, hi: int) -> GramDetReport:
    parts, rows = gram_matrix(ctx, lo, hi)
    det = det_bareiss(rows)
    base = ctx.eigenvalue(2 * ctx.rho)
    exponent, ratio = pure_power_factor(det, base)
    return GramDetReport(lo=lo, hi=hi, size=len(parts), det=det,
                         base=base, exponent=exponent, ratio=ratio)


def solve_descendants(ctx: ModuleContext, targets: Mapping[Partition, LaurentPoly],
                      top_weight: int, constant: LaurentPoly | None = None,
                      verify: bool = True) -> ModuleVector:
    """Reconstruct a vector from its pairings against all words up to a weight.

    ``targets[mu]`` is the required value of ``{L~_mu v}``; missing words
    default to zero.  The constant term of the result is ``constant`` (the
    pairing never constrains it).  With ``verify`` set, every prescribed
    pairing is recomputed on the result and must match exactly.
    """
    for mu in targets:
        w = sum(mu)
        if w < 1 or w > top_weight:
            raise ValueError(f"target word {mu} outside weight range 1..{top_weight}")
    zero = LaurentPoly.zero(ctx.table)
    solved = ModuleVector(ctx, {} if constant is None else {(): constant})
    for w in range(top_weight, 0, -1):
        layer: dict[Partition, LaurentPoly] = {}
        for mu in partitions_of(w):
            t_mu = targets.get(mu, zero) - gram_entry_on(ctx, mu, solved)
            diag = apply_tilde_word(ctx.basis(mu), mu).constant_term()
            if diag.is_zero():
                raise SingularGram(f"diagonal pairing entry vanished at {mu}")
            if t_mu.is_zero():
                continue
            try:
                layer[mu] = t_mu.exact_div(diag)
            except NotDivisible as exc:
                raise NotDivisible(
                    f"pairing solve at {mu} leaves the ring: {exc}") from exc
        solved = solved + ModuleVector(ctx, layer)
    if verify:
        for w in range(1, top_weight + 1):
            for mu in partitions_of(w):
                got = gram_entry_on(ctx, mu, solved)
                want = targets.get(mu, zero)
                if got != want:
                    raise GramError(f"pairing mismatch at {mu}: {got} != {want}")
    return solved


def gram_entry_on(ctx: ModuleContext, mu: Partition, vec: ModuleVector) -> LaurentPoly:
    """Value of ``{L~_mu vec}`` for an arbitrary vector."""
    return apply_tilde_word(vec, mu).constant_term()
