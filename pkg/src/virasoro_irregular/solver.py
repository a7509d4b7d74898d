"""Order-by-order construction of the canonical series vectors.

The integer-rank series lives over the rank ``r-1`` module whose zero-mode
parameter is primed, expanded in the top polynomial parameter ``c_r``.  The
half-integer series lives over the same module with the unprimed zero mode,
expanded in the top eigenvalue slot ``Lam``.  Rank one is solved inside the
Verma module with rational-function coefficients.

Each order performs three steps: the descendant coefficients are solved
from the shifted-word pairings, the constant term of the flow recurrence
pins the next unknown on the elimination schedule, and the full recurrence
residual is recomputed and must vanish identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .frames import (GENERAL, CONVENTIONS, DualOperator, conformal_weight,
                     default_central_charge, dual_operator, eigen_window,
                     eigenvalue, lower_scalars, odd_dual_operator)
from .gram import gram_entry, gram_entry_on, solve_descendants
from .linalg import adjugate, det_bareiss, mat_vec
from .ring import LaurentPoly, NotDivisible, RationalFunction, VarTable
from .virasoro import (ModuleContext, ModuleVector, apply_mode, apply_tilde,
                       partitions_of, verma_context)

__all__ = [
    "INTEGER", "HALF", "RANK_ONE",
    "SolverError", "NonAffineElimination", "NonUnitPivot", "ResidualNonZero",
    "SingularShapovalov",
    "LedgerEntry", "UnknownLedger", "IrregularSeries",
    "RelationCheck", "VerificationReport",
    "solve_integer", "solve_half", "solve_rank1", "rank1_series",
    "verify_canonical", "scheduled_unknown",
]

INTEGER = "integer"
HALF = "half"
RANK_ONE = "rank-one"


class SolverError(Exception):
    """The construction left the proven path; never recovered silently."""


class NonAffineElimination(SolverError):
    """A pinning equation was not affine in exactly its scheduled unknown."""


class NonUnitPivot(SolverError):
    """A pinning pivot did not divide the constant part within the ring."""


class ResidualNonZero(SolverError):
    """The flow recurrence failed to vanish after back-substitution."""


class SingularShapovalov(SolverError):
    """A Verma level pairing matrix was singular over the function field."""


def scheduled_unknown(r: int, k: int) -> str:
    """Name of the unknown pinned by the order-``k`` constant term."""
    if k < r - 1:
        return f"g{r - 1 - k}"
    if k == r - 1:
        return "nu"
    return f"ce{k - r + 1}"


@dataclass
class LedgerEntry:
    name: str
    order: int | None
    value: LaurentPoly | None = None
    equation: LaurentPoly | None = None

    @property
    def solved(self) -> bool:
        return self.value is not None


@dataclass
class UnknownLedger:
    """Elimination schedule with the equation each unknown was pinned by.

    Entries carry ``order = None`` for tail constants beyond the truncation
    horizon; those stay symbolic in every stored coefficient.
    """

    entries: list[LedgerEntry]

    @classmethod
    def plan(cls, r: int, order: int) -> "UnknownLedger":
        entries = [LedgerEntry(scheduled_unknown(r, k), k)
                   for k in range(order + 1)]
        scheduled = {e.name for e in entries}
        for j in range(1, order + 1):
            name = f"ce{j}"
            if name not in scheduled:
                entries.append(LedgerEntry(name, None))
        for j in range(r - 1, 0, -1):
            if f"g{j}" not in scheduled:
                entries.append(LedgerEntry(f"g{j}", None))
        if "nu" not in scheduled:
            entries.append(LedgerEntry("nu", None))
        return cls(entries)

    def entry_for_order(self, k: int) -> LedgerEntry:
        for e in self.entries:
            if e.order == k:
                return e
        raise KeyError(f"no unknown scheduled at order {k}")

    def pending_names(self) -> set[str]:
        return {e.name for e in self.entries if not e.solved}


@dataclass
class IrregularSeries:
    """Truncated canonical series together with its construction record.

    ``vectors[k]`` is the order-``k`` tail coefficient over the base module
    context; ``x_vectors`` are the constant-term-free combinations used by
    the elimination argument.  ``nu`` and ``g`` hold the solved exponent and
    essential-singularity data (still-symbolic slots keep their variable).
    ``pending`` lists the tail constants the truncation cannot determine.
    """

    kind: str
    r: int
    order: int
    table: VarTable
    ctx: ModuleContext
    var: str
    cnames: tuple[str, ...]
    vectors: list[ModuleVector]
    x_vectors: list[ModuleVector]
    nu: LaurentPoly | None
    g: dict[int, LaurentPoly]
    constants: dict[int, LaurentPoly]
    pending: tuple[str, ...]
    ledger: UnknownLedger | None
    convention: str = GENERAL


# ----- shared elimination machinery -----------------------------------------


@dataclass
class _KindRecipe:
    kind: str
    r: int
    step: int
    table: VarTable
    ctx: ModuleContext
    var: str
    cnames: tuple[str, ...]
    dual: DualOperator
    lower: dict[int, LaurentPoly] | None
    delta: LaurentPoly | None
    subtract_scalars: bool

    def relation(self, part: int) -> tuple[LaurentPoly | None, int]:
        raise NotImplementedError


class _IntegerRecipe(_KindRecipe):
    def relation(self, part: int) -> tuple[LaurentPoly | None, int]:
        table, r = self.table, self.r
        if part == 1:
            qc = LaurentPoly.var(table, "Q", 1, r + 1) - LaurentPoly.var(table, "c0")
            return qc, 1
        if 2 <= part <= r:
            return LaurentPoly.var(table, f"c{part - 1}", 1, -2), 1
        if part == r + 1:
            return LaurentPoly.const(table, -1), 2
        return None, 0


class _HalfRecipe(_KindRecipe):
    def relation(self, part: int) -> tuple[LaurentPoly | None, int]:
        if part == self.r:
            return LaurentPoly.const(self.table, 1), 1
        return None, 0


def _scalar_of(table: VarTable, value) -> LaurentPoly:
    if isinstance(value, LaurentPoly):
        return value if value.table == table else value.migrate(table)
    return LaurentPoly.const(table, value)


def _integer_recipe(r: int, order: int, central) -> _IntegerRecipe:
    names = ["Q", "c0", "c0p"] + [f"c{j}" for j in range(1, r + 1)] + ["nu"]
    weights = [0, 0, 0] + list(range(1, r + 1)) + [0]
    for j in range(1, r):
        names.append(f"g{j}")
        weights.append(r * j)
    for k in range(1, order + 1):
        names.append(f"ce{k}")
        weights.append(-r * k)
    table = VarTable(tuple(names), tuple(weights))
    cnames = tuple(f"c{j}" for j in range(1, r))
    var = f"c{r}"
    c_vir = default_central_charge(table) if central is None else _scalar_of(table, central)
    base_eigen = eigen_window(table, r - 1, cnames, c0name="c0p")
    ctx = ModuleContext(table, r - 1, base_eigen, c_vir)
    return _IntegerRecipe(
        kind=INTEGER, r=r, step=r, table=table, ctx=ctx, var=var,
        cnames=cnames, dual=dual_operator(table, r, cnames + (var,)),
        lower=lower_scalars(table, r, cnames),
        delta=conformal_weight(table, "c0"), subtract_scalars=True)


def _half_recipe(r: int, order: int, central) -> _HalfRecipe:
    step = 2 * r - 1
    names = ["Q", "c0"] + [f"c{j}" for j in range(1, r)] + ["Lam", "nu"]
    weights = [0, 0] + list(range(1, r)) + [step, 0]
    for j in range(1, r):
        names.append(f"g{j}")
        weights.append(step * j)
    for k in range(1, order + 1):
        names.append(f"ce{k}")
        weights.append(-step * k)
    table = VarTable(tuple(names), tuple(weights))
    cnames = tuple(f"c{j}" for j in range(1, r))
    c_vir = default_central_charge(table) if central is None else _scalar_of(table, central)
    base_eigen = eigen_window(table, r - 1, cnames, c0name="c0")
    ctx = ModuleContext(table, r - 1, base_eigen, c_vir)
    return _HalfRecipe(
        kind=HALF, r=r, step=step, table=table, ctx=ctx, var="Lam",
        cnames=cnames, dual=odd_dual_operator(table, r, cnames, "Lam"),
        lower=None, delta=None, subtract_scalars=False)


def _dual_term(recipe: _KindRecipe, i: int, vec: ModuleVector) -> ModuleVector:
    """Apply the order-``i`` slice of the canonical operator to a vector."""
    out = ModuleVector(recipe.ctx)
    for n in sorted(recipe.dual.orders[i]):
        weight = recipe.dual.orders[i][n]
        acted = apply_mode(vec, n)
        if recipe.subtract_scalars:
            scalar = recipe.delta if n == 0 else recipe.lower[n]
            acted = acted - vec.scale(scalar)
        out = out + acted.scale(weight)
    return out


def _flow_residual(recipe: _KindRecipe, vectors: list[ModuleVector],
                   g_polys: dict[int, LaurentPoly], nu_poly: LaurentPoly,
                   k: int) -> ModuleVector:
    """Left side of the order-``k`` flow recurrence (must vanish)."""
    r = recipe.r
    acc = ModuleVector(recipe.ctx)
    for i in range(r - 1):
        j = k - i
        if j < 0 or j >= len(vectors):
            continue
        v = vectors[j]
        acc = acc + _dual_term(recipe, i, v)
        acc = acc + v.scale(g_polys[r - 1 - i] * Fraction(r - 1 - i))
    j = k - r + 1
    if 0 <= j < len(vectors):
        v = vectors[j]
        acc = acc + _dual_term(recipe, r - 1, v)
        acc = acc - v.scale(nu_poly + LaurentPoly.const(recipe.table, k - r + 1))
    return acc


def _order_targets(recipe: _KindRecipe, vectors: list[ModuleVector],
                   k: int) -> dict[tuple[int, ...], LaurentPoly]:
    """Pairings {L~_mu v_k} implied by the defining relations.

    The innermost (largest) word factor is traded for a known lower-order
    vector via its relation; the remaining word is then straightened
    against that vector.
    """
    targets: dict[tuple[int, ...], LaurentPoly] = {}
    for w in range(1, recipe.r * k + 1):
        for mu in partitions_of(w):
            scalar, shift = recipe.relation(mu[0])
            if scalar is None:
                continue
            j = k - shift
            if j < 0:
                continue
            t = gram_entry_on(recipe.ctx, mu[1:], vectors[j]) * scalar
            if not t.is_zero():
                targets[mu] = t
    return targets


def _substitute_state(vectors: list[ModuleVector], g_polys: dict[int, LaurentPoly],
                      nu_poly: LaurentPoly, name: str,
                      value: LaurentPoly) -> LaurentPoly:
    mapping = {name: value}
    for i, vec in enumerate(vectors):
        vectors[i] = vec.map_coeffs(lambda p: p.subs(mapping))
    for j in list(g_polys):
        g_polys[j] = g_polys[j].subs(mapping)
    return nu_poly.subs(mapping)


def _pin_unknown(recipe: _KindRecipe, ledger: UnknownLedger,
                 vectors: list[ModuleVector], g_polys: dict[int, LaurentPoly],
                 nu_poly: LaurentPoly, k: int) -> LaurentPoly:
    """Solve the scheduled unknown from the order-``k`` constant term."""
    entry = ledger.entry_for_order(k)
    name = entry.name
    equation = _flow_residual(recipe, vectors, g_polys, nu_poly, k).constant_term()
    lo, hi = equation.degree_in(name)
    if lo < 0 or hi > 1:
        raise NonAffineElimination(
            f"order {k}: constant term has degree window {lo}..{hi} in {name}")
    pivot = equation.coeff_of_power(name, 1)
    rest = equation.coeff_of_power(name, 0)
    if pivot.is_zero():
        raise NonAffineElimination(f"order {k}: no pivot for {name}")
    if not pivot.is_unit_monomial():
        raise NonUnitPivot(f"order {k}: pivot for {name} is {pivot}")
    try:
        value = (-rest).exact_div(pivot)
    except NotDivisible as exc:
        raise NonUnitPivot(f"order {k}: {name} leaves the ring: {exc}") from exc
    stray = value.support_vars() & ledger.pending_names()
    if stray:
        raise NonAffineElimination(
            f"order {k}: solved {name} still involves pending {sorted(stray)}")
    entry.value = value
    entry.equation = equation
    return value


def _x_vectors(vectors: list[ModuleVector]) -> list[ModuleVector]:
    """Constant-term-free combinations: X_k = v_k - sum {v_i} X_{k-i}."""
    if not vectors:
        return []
    xs = [vectors[0]]
    for k in range(1, len(vectors)):
        x = vectors[k]
        for i in range(1, k + 1):
            x = x - xs[k - i].scale(vectors[i].constant_term())
        xs.append(x)
    return xs


def _run_recursion(recipe: _KindRecipe, order: int) -> IrregularSeries:
    table = recipe.table
    ledger = UnknownLedger.plan(recipe.r, order)
    g_polys = {j: LaurentPoly.var(table, f"g{j}") for j in range(1, recipe.r)}
    nu_poly = LaurentPoly.var(table, "nu")
    vectors = [recipe.ctx.cyclic()]
    for k in range(order + 1):
        if k >= 1:
            slot = LaurentPoly.var(table, f"ce{k}")
            targets = _order_targets(recipe, vectors, k)
            vectors.append(solve_descendants(
                recipe.ctx, targets, recipe.r * k, constant=slot))
        name = ledger.entry_for_order(k).name
        value = _pin_unknown(recipe, ledger, vectors, g_polys, nu_poly, k)
        nu_poly = _substitute_state(vectors, g_polys, nu_poly, name, value)
        residual = _flow_residual(recipe, vectors, g_polys, nu_poly, k)
        if not residual.is_zero():
            raise ResidualNonZero(
                f"order {k}: flow recurrence left {residual!r}")
    constants = {}
    for entry in ledger.entries:
        if entry.solved and entry.name.startswith("ce"):
            constants[int(entry.name[2:])] = entry.value
    pending = tuple(sorted(ledger.pending_names(),
                           key=lambda s: (s[:2] != "ce", s)))
    return IrregularSeries(
        kind=recipe.kind, r=recipe.r, order=order, table=table,
        ctx=recipe.ctx, var=recipe.var, cnames=recipe.cnames,
        vectors=vectors, x_vectors=_x_vectors(vectors),
        nu=nu_poly, g=g_polys, constants=constants, pending=pending,
        ledger=ledger)


def solve_integer(r: int, order: int, central=None) -> IrregularSeries:
    """Canonical integer-rank series over the rank ``r-1`` module."""
    if r < 2:
        raise ValueError("integer construction starts at rank 2")
    if order < 0:
        raise ValueError("truncation order must be non-negative")
    return _run_recursion(_integer_recipe(r, order, central), order)


def solve_half(r: int, order: int, central=None) -> IrregularSeries:
    """Canonical half-integer series (rank ``r - 1/2``)."""
    if r < 2:
        raise ValueError("half-integer construction starts at r = 2")
    if order < 0:
        raise ValueError("truncation order must be non-negative")
    return _run_recursion(_half_recipe(r, order, central), order)


# ----- rank one --------------------------------------------------------------


def _product(table: VarTable, factors: list[LaurentPoly]) -> LaurentPoly:
    out = LaurentPoly.const(table, 1)
    for f in factors:
        out = out * f
    return out


def _cancel_common(nums: list[LaurentPoly],
                   factors: list[LaurentPoly]) -> tuple[list[LaurentPoly], list[LaurentPoly]]:
    """Strip denominator factors dividing every numerator at once."""
    remaining: list[LaurentPoly] = []
    for f in factors:
        try:
            nums = [p.exact_div(f) for p in nums]
        except NotDivisible:
            remaining.append(f)
    return nums, remaining


def _reduced(p: LaurentPoly, factors: list[LaurentPoly]) -> RationalFunction:
    """Quotient by the factor list, cancelling whatever divides exactly."""
    den = LaurentPoly.const(p.table, 1)
    for f in factors:
        try:
            p = p.exact_div(f)
        except NotDivisible:
            den = den * f
    return RationalFunction(p, den)


def solve_rank1(vctx: ModuleContext, lam1: LaurentPoly, lam2: LaurentPoly,
                order: int, convention: str = GENERAL) -> IrregularSeries:
    """Rank-one series inside the Verma module.

    ``lam1`` must be linear and ``lam2`` quadratic in the expansion
    parameter ``c1``; all higher eigenvalues vanish identically, so the
    level-``k`` coefficients follow from the ``L_1`` and ``L_2`` relations
    alone, solved against the level pairing matrix over the rational
    function field.
    """
    if vctx.rho != 0:
        raise ValueError("rank-one construction needs a Verma context")
    if order < 0:
        raise ValueError("truncation order must be non-negative")
    table = vctx.table
    c1 = LaurentPoly.var(table, "c1")
    one = LaurentPoly.const(table, 1)
    try:
        s1 = lam1.exact_div(c1)
        s2 = lam2.exact_div(c1 * c1)
    except NotDivisible as exc:
        raise ValueError(f"eigenvalues do not match a rank-one expansion: {exc}")
    if s1.uses_var("c1") or s2.uses_var("c1"):
        raise ValueError("eigenvalues do not match a rank-one expansion")
    # each level carries one explicit factored denominator, so the solve
    # stays in the ring and never builds unreduced rational intermediates;
    # the two relation sources are solved separately against the adjugate
    # and only then recombined, keeping the pairing solve small
    numerators = [vctx.cyclic()]
    denominators: list[list[LaurentPoly]] = [[]]
    zero = LaurentPoly.zero(table)
    for k in range(1, order + 1):
        lams = partitions_of(k)
        rows = [[gram_entry(vctx, mu, lam) for lam in lams] for mu in lams]
        det = det_bareiss(rows)
        if det.is_zero():
            raise SingularShapovalov(f"level {k}: pairing determinant vanishes")
        adj = adjugate(rows)
        drop = [gram_entry_on(vctx, mu[1:], numerators[k - 1]) * s1
                if mu[0] == 1 else zero for mu in lams]
        drop2 = [gram_entry_on(vctx, mu[1:], numerators[k - 2]) * s2
                 if mu[0] == 2 and k >= 2 else zero for mu in lams]
        y1 = mat_vec(adj, drop)
        y2 = mat_vec(adj, drop2) if any(not t.is_zero() for t in drop2) else None
        before1 = _product(table, denominators[k - 1])
        before2 = _product(table, denominators[k - 2]) if k >= 2 else one
        if y2 is None:
            nums = [a * before2 for a in y1]
        else:
            nums = [a * before2 + b * before1 for a, b in zip(y1, y2)]
        factors = [det] + denominators[k - 1] + (denominators[k - 2] if k >= 2 else [])
        nums, factors = _cancel_common(nums, factors)
        numerators.append(ModuleVector(vctx, dict(zip(lams, nums))))
        denominators.append(factors)
    vectors = [
        vec.map_coeffs(lambda p, fs=factors: _reduced(p, fs))
        for vec, factors in zip(numerators, denominators)
    ]
    return IrregularSeries(
        kind=RANK_ONE, r=1, order=order, table=table, ctx=vctx, var="c1",
        cnames=(), vectors=vectors, x_vectors=[], nu=None, g={},
        constants={}, pending=(), ledger=None, convention=convention)


def rank1_series(order: int, convention: str = GENERAL,
                 central=None) -> IrregularSeries:
    """Rank-one series on the standard three-variable table."""
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    table = VarTable(("Q", "c0", "c1"), (0, 0, 1))
    delta = conformal_weight(table, "c0")
    c_vir = default_central_charge(table) if central is None else _scalar_of(table, central)
    vctx = verma_context(table, delta, c_vir)
    lam1 = eigenvalue(table, 1, ("c1",), convention=convention)
    lam2 = eigenvalue(table, 2, ("c1",), convention=convention)
    return solve_rank1(vctx, lam1, lam2, order, convention=convention)


# ----- independent verification ----------------------------------------------


@dataclass
class RelationCheck:
    relation: str
    window: str
    ok: bool
    detail: str = ""


@dataclass
class VerificationReport:
    checks: list[RelationCheck] = field(default_factory=list)

    @property
    def all_ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[RelationCheck]:
        return [c for c in self.checks if not c.ok]

    def add(self, relation: str, window: str, ok: bool, detail: str = "") -> None:
        self.checks.append(RelationCheck(relation, window, ok, detail))


def _rebuild_recipe(series: IrregularSeries) -> _KindRecipe:
    r, table, ctx = series.r, series.table, series.ctx
    if series.kind == INTEGER:
        return _IntegerRecipe(
            kind=INTEGER, r=r, step=r, table=table, ctx=ctx, var=series.var,
            cnames=series.cnames,
            dual=dual_operator(table, r, series.cnames + (series.var,)),
            lower=lower_scalars(table, r, series.cnames),
            delta=conformal_weight(table, "c0"), subtract_scalars=True)
    return _HalfRecipe(
        kind=HALF, r=r, step=2 * r - 1, table=table, ctx=ctx, var=series.var,
        cnames=series.cnames,
        dual=odd_dual_operator(table, r, series.cnames, series.var),
        lower=None, delta=None, subtract_scalars=False)


def _check_mode_relations(series: IrregularSeries, recipe: _KindRecipe,
                          report: VerificationReport) -> None:
    r, rho = recipe.r, recipe.ctx.rho
    top_mode = max(2 * r, 2 * rho + recipe.r * series.order)
    for n in range(r, top_mode + 1):
        scalar, shift = recipe.relation(n - rho)
        bad = ""
        for k, vk in enumerate(series.vectors):
            lhs = apply_tilde(vk, n) if n <= 2 * rho else apply_mode(vk, n)
            if scalar is not None and k - shift >= 0:
                lhs = lhs - series.vectors[k - shift].scale(scalar)
            if not lhs.is_zero():
                bad = f"k={k}: {lhs!r}"
                break
        report.add(f"mode {n} relation", f"k = 0..{series.order}", not bad, bad)


def _check_flow(series: IrregularSeries, recipe: _KindRecipe,
                report: VerificationReport) -> None:
    for k in range(series.order + 1):
        res = _flow_residual(recipe, series.vectors, series.g, series.nu, k)
        report.add("flow recurrence", f"order {k}", res.is_zero(),
                   "" if res.is_zero() else repr(res))


def _check_rank_one(series: IrregularSeries, report: VerificationReport) -> None:
    vctx = series.ctx
    table = series.table
    one = RationalFunction(LaurentPoly.const(table, 1))
    report.add("normalization", "k = 0",
               series.vectors[0].constant_term() == one)
    lam1 = eigenvalue(table, 1, ("c1",), convention=series.convention)
    lam2 = eigenvalue(table, 2, ("c1",), convention=series.convention)
    s1 = lam1.exact_div(LaurentPoly.var(table, "c1"))
    s2 = lam2.exact_div(LaurentPoly.var(table, "c1", 2))
    delta = vctx.eigenvalue(0)
    for k, vk in enumerate(series.vectors):
        graded = apply_mode(vk, 0) - vk.scale(delta + LaurentPoly.const(table, k))
        report.add("grading", f"k = {k}", graded.is_zero(),
                   "" if graded.is_zero() else repr(graded))
    for n in range(1, max(4, series.order + 1) + 1):
        bad = ""
        for k, vk in enumerate(series.vectors):
            lhs = apply_mode(vk, n)
            if n == 1 and k >= 1:
                lhs = lhs - series.vectors[k - 1].scale(s1)
            elif n == 2 and k >= 2:
                lhs = lhs - series.vectors[k - 2].scale(s2)
            if not lhs.is_zero():
                bad = f"k={k}: {lhs!r}"
                break
        report.add(f"mode {n} relation", f"k = 0..{series.order}", not bad, bad)


def verify_canonical(series: IrregularSeries) -> VerificationReport:
    """Re-check every defining relation of a series from scratch.

    Nothing from the construction is reused except the stored vectors and
    solved scalars; the canonical operator and scalar tables are rebuilt.
    Failures become report entries, never exceptions.
    """
    report = VerificationReport()
    if series.kind == RANK_ONE:
        _check_rank_one(series, report)
        return report
    recipe = _rebuild_recipe(series)
    one = LaurentPoly.const(series.table, 1)
    report.add("normalization", "k = 0",
               series.vectors[0].constant_term() == one)
    for k, vk in enumerate(series.vectors):
        ok = vk.max_weight() <= recipe.r * k
        report.add("support bound", f"k = {k}", ok,
                   "" if ok else f"weight {vk.max_weight()}")
    _check_mode_relations(series, recipe, report)
    _check_flow(series, recipe, report)
    return report
