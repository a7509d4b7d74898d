"""Structure of the word-against-basis pairing and its triangular solve."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from virasoro_irregular.gram import (
    GramError,
    ProportionalityFailure,
    SingularGram,
    expected_diagonal,
    gram_det_report,
    gram_entry,
    gram_entry_on,
    gram_matrix,
    pure_power_factor,
    solve_descendants,
    weight_range_partitions,
)
from virasoro_irregular.ring import LaurentPoly, VarTable
from virasoro_irregular.virasoro import ModuleContext, ModuleVector, partitions_of

T1 = VarTable(["E1", "E2", "cv"], [1, 2, 0])
T2 = VarTable(["E2", "E3", "E4", "cv"], [2, 3, 4, 0])


def ctx_rank1() -> ModuleContext:
    return ModuleContext(T1, 1, {1: LaurentPoly.var(T1, "E1"),
                                 2: LaurentPoly.var(T1, "E2")},
                         LaurentPoly.var(T1, "cv"))


def ctx_rank2() -> ModuleContext:
    return ModuleContext(T2, 2, {n: LaurentPoly.var(T2, f"E{n}") for n in (2, 3, 4)},
                         LaurentPoly.var(T2, "cv"))


def test_weight_range_partitions_order():
    assert weight_range_partitions(0, 2) == [(), (1,), (2,), (1, 1)]
    assert weight_range_partitions(2, 3) == [(2,), (1, 1), (3,), (2, 1), (1, 1, 1)]


@pytest.mark.parametrize("ctx_builder", [ctx_rank1, ctx_rank2])
def test_entries_vanish_above_the_diagonal_weight(ctx_builder):
    ctx = ctx_builder()
    for wmu in range(1, 5):
        for wlam in range(0, wmu):
            for mu in partitions_of(wmu):
                for lam in partitions_of(wlam):
                    assert gram_entry(ctx, mu, lam).is_zero(), (mu, lam)


@pytest.mark.parametrize("ctx_builder", [ctx_rank1, ctx_rank2])
def test_equal_weight_blocks_are_diagonal(ctx_builder):
    ctx = ctx_builder()
    for w in range(1, 6):
        parts = partitions_of(w)
        for mu in parts:
            for lam in parts:
                entry = gram_entry(ctx, mu, lam)
                if mu == lam:
                    assert entry == expected_diagonal(ctx, lam)
                else:
                    assert entry.is_zero(), (mu, lam)


def test_expected_diagonal_values_rank1():
    ctx = ctx_rank1()
    e2 = LaurentPoly.var(T1, "E2")
    assert expected_diagonal(ctx, (1,)) == 2 * e2
    assert expected_diagonal(ctx, (2,)) == 4 * e2
    assert expected_diagonal(ctx, (1, 1)) == 8 * e2 ** 2
    assert expected_diagonal(ctx, (2, 1)) == 8 * e2 ** 2
    assert expected_diagonal(ctx, (1, 1, 1)) == 48 * e2 ** 3


def test_entry_weights_follow_the_grading():
    for ctx in (ctx_rank1(), ctx_rank2()):
        rho = ctx.rho
        for wmu in range(1, 4):
            for wlam in range(wmu, 4):
                for mu in partitions_of(wmu):
                    for lam in partitions_of(wlam):
                        entry = gram_entry(ctx, mu, lam)
                        if entry.is_zero():
                            continue
                        expected = sum(mu) - sum(lam) + rho * (len(mu) + len(lam))
                        assert entry.homogeneous_weight() == expected, (mu, lam)


def test_det_reports_match_frozen_values():
    ctx = ctx_rank1()
    e2 = LaurentPoly.var(T1, "E2")
    rep = gram_det_report(ctx, 1, 1)
    assert (rep.det, rep.exponent, rep.ratio) == (2 * e2, 1, Fraction(2))
    rep = gram_det_report(ctx, 2, 2)
    assert (rep.det, rep.exponent, rep.ratio) == (32 * e2 ** 3, 3, Fraction(32))
    rep = gram_det_report(ctx, 3, 3)
    assert (rep.det, rep.exponent, rep.ratio) == (2304 * e2 ** 6, 6, Fraction(2304))
    rep = gram_det_report(ctx, 1, 2)
    assert (rep.det, rep.exponent, rep.ratio) == (64 * e2 ** 4, 4, Fraction(64))

    ctx2 = ctx_rank2()
    e4 = LaurentPoly.var(T2, "E4")
    rep = gram_det_report(ctx2, 2, 2)  # weight-2 block: diag(4 E4, 8 E4^2)
    assert (rep.det, rep.exponent, rep.ratio) == (32 * e4 ** 3, 3, Fraction(32))


def test_observed_exponent_counts_lengths_not_weights():
    # sum of partition lengths per weight: w=1 -> 1, w=2 -> 3, w=3 -> 6
    ctx = ctx_rank1()
    for lo, hi, expected in [(1, 1, 1), (2, 2, 3), (3, 3, 6), (1, 3, 10), (0, 2, 4)]:
        assert gram_det_report(ctx, lo, hi).exponent == expected


def test_pure_power_factor_detects_mixtures():
    e2 = LaurentPoly.var(T1, "E2")
    e1 = LaurentPoly.var(T1, "E1")
    assert pure_power_factor(3 * e2 ** 2, e2) == (2, Fraction(3))
    assert pure_power_factor(LaurentPoly.const(T1, Fraction(5, 7)), e2) == (0, Fraction(5, 7))
    with pytest.raises(ProportionalityFailure):
        pure_power_factor(e2 + e1 ** 2, e2)
    with pytest.raises(ProportionalityFailure):
        pure_power_factor(LaurentPoly.zero(T1), e2)


def random_vector(rng: random.Random, ctx: ModuleContext, top: int) -> ModuleVector:
    terms = {}
    for w in range(top + 1):
        for lam in partitions_of(w):
            if rng.random() < 0.6:
                val = LaurentPoly.const(ctx.table, Fraction(rng.randint(-6, 6), rng.randint(1, 4)))
                if rng.random() < 0.4:
                    val = val * LaurentPoly.var(ctx.table, "E1" if ctx.rho == 1 else "E2")
                terms[lam] = val
    return ModuleVector(ctx, terms)


@pytest.mark.parametrize("ctx_builder,top", [(ctx_rank1, 4), (ctx_rank2, 3)])
def test_solve_descendants_round_trip(ctx_builder, top):
    ctx = ctx_builder()
    rng = random.Random(60221023)
    for _ in range(6):
        v_true = random_vector(rng, ctx, top)
        targets = {}
        for w in range(1, top + 1):
            for mu in partitions_of(w):
                targets[mu] = gram_entry_on(ctx, mu, v_true)
        got = solve_descendants(ctx, targets, top, constant=v_true.constant_term())
        assert got == v_true


def test_solve_descendants_rejects_out_of_range_targets():
    ctx = ctx_rank1()
    one = LaurentPoly.const(T1, 1)
    with pytest.raises(ValueError):
        solve_descendants(ctx, {(3,): one}, 2)
    with pytest.raises(ValueError):
        solve_descendants(ctx, {(): one}, 2)


def test_singular_context_is_reported():
    table = VarTable(["E1", "cv"], [1, 0])
    ctx = ModuleContext(table, 1, {1: LaurentPoly.var(table, "E1"), 2: 0}, 0)
    with pytest.raises(SingularGram):
        solve_descendants(ctx, {(1,): LaurentPoly.const(table, 1)}, 1)
