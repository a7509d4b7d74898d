"""Virasoro mode actions on modules built over a single cyclic vector.

A module context of rank ``rho`` is generated by a cyclic vector ``u`` on
which modes with index above ``2*rho`` vanish, modes with index ``rho`` to
``2*rho`` act by the eigenvalues in the context table, and modes with index
below ``rho`` act freely.  The basis is indexed by integer partitions: the
partition ``(a_1 >= ... >= a_l)`` labels the vector

    L_{rho - a_1} L_{rho - a_2} ... L_{rho - a_l} u

so the leftmost factor carries the most negative mode.  Rank ``0`` recovers
an ordinary highest-weight module whose cyclic vector has L_0-eigenvalue
``eigen[0]``.

Straightening uses the commutation rule

    [L_m, L_n] = (m - n) L_{m+n} + (c/12) (m^3 - m) delta_{m+n,0}

and memoizes the action of each mode on each basis element per context.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .ring import LaurentPoly, RationalFunction, RingError, TruncatedSeries, VarTable

Partition = tuple[int, ...]


# ----- partitions ---------------------------------------------------------


def partitions_of(n: int, max_part: int | None = None) -> list[Partition]:
    """Partitions of ``n`` in descending lexicographic order, largest part first."""
    if n < 0:
        return []
    if n == 0:
        return [()]
    cap = n if max_part is None else min(max_part, n)
    out: list[Partition] = []
    for first in range(cap, 0, -1):
        for rest in partitions_of(n - first, first):
            out.append((first,) + rest)
    return out


def partitions_up_to(n: int, max_part: int | None = None) -> dict[int, list[Partition]]:
    return {k: partitions_of(k, max_part) for k in range(n + 1)}


def partition_sort_key(lam: Partition) -> tuple:
    """Sort key: ascending weight, then descending lexicographic within a weight."""
    return (sum(lam), tuple(-p for p in lam))


def _is_partition(lam: Iterable[int]) -> bool:
    lam = tuple(lam)
    return all(isinstance(p, int) and p >= 1 for p in lam) and all(
        lam[i] >= lam[i + 1] for i in range(len(lam) - 1)
    )


def _coeff_is_zero(c) -> bool:
    if isinstance(c, LaurentPoly):
        return c.is_zero()
    if isinstance(c, RationalFunction):
        return c.is_zero()
    if isinstance(c, TruncatedSeries):
        return c.is_zero_on_window()
    return c == 0


# ----- module context -----------------------------------------------------


class ModuleContext:
    """Fixed rank, eigenvalue table and central charge for one module.

    ``eigen`` must assign a scalar to every mode index from ``rho`` to
    ``2*rho`` inclusive.  The straightening cache lives on the context, so
    contexts are cheap to query repeatedly and should be shared.
    """

    __slots__ = ("table", "rho", "eigen", "c_vir", "_zero", "_one", "_mode_cache")

    def __init__(self, table: VarTable, rho: int,
                 eigen: Mapping[int, LaurentPoly | Fraction | int],
                 c_vir: LaurentPoly | Fraction | int):
        if rho < 0:
            raise ValueError("rank must be non-negative")
        expected = set(range(rho, 2 * rho + 1))
        if set(eigen) != expected:
            raise ValueError(f"eigen table must cover modes {sorted(expected)}")
        self.table = table
        self.rho = rho
        self.eigen = {n: self._scalar(table, v) for n, v in eigen.items()}
        self.c_vir = self._scalar(table, c_vir)
        self._zero = LaurentPoly.zero(table)
        self._one = LaurentPoly.const(table, 1)
        self._mode_cache: dict[tuple[int, Partition], dict[Partition, LaurentPoly]] = {}

    @staticmethod
    def _scalar(table: VarTable, v) -> LaurentPoly:
        if isinstance(v, LaurentPoly):
            if v.table != table:
                return v.migrate(table)
            return v
        return LaurentPoly.const(table, v)

    def eigenvalue(self, n: int) -> LaurentPoly:
        """Scalar action of mode ``n`` on the cyclic vector (``n >= rho``)."""
        if n < self.rho:
            raise ValueError(f"mode {n} acts freely, it has no eigenvalue")
        return self.eigen.get(n, self._zero)

    def basis_mode(self, part: int) -> int:
        """Mode index attached to a partition part in a basis label."""
        return self.rho - part

    def cyclic(self, coeff=None) -> "ModuleVector":
        return ModuleVector(self, {(): self._one if coeff is None else coeff})

    def basis(self, lam: Iterable[int], coeff=None) -> "ModuleVector":
        lam = tuple(lam)
        if not _is_partition(lam):
            raise ValueError(f"not a partition: {lam}")
        return ModuleVector(self, {lam: self._one if coeff is None else coeff})

    def zero_vector(self) -> "ModuleVector":
        return ModuleVector(self, {})

    # cached straightening on basis elements --------------------------------

    def _apply_basis(self, n: int, lam: Partition) -> dict[Partition, LaurentPoly]:
        key = (n, lam)
        hit = self._mode_cache.get(key)
        if hit is not None:
            return hit
        rho = self.rho
        out: dict[Partition, LaurentPoly] = {}
        if not lam:
            if n < rho:
                out[(rho - n,)] = self._one
            else:
                ev = self.eigenvalue(n)
                if not ev.is_zero():
                    out[()] = ev
        else:
            m1 = rho - lam[0]
            if n <= m1:
                out[(rho - n,) + lam] = self._one
            else:
                rest = lam[1:]
                # L_n L_{m1} = L_{m1} L_n + (n - m1) L_{n+m1} [+ central]
                for mu, c in self._apply_basis(n, rest).items():
                    for nu, d in self._apply_basis(m1, mu).items():
                        _accumulate(out, nu, c * d)
                k = n - m1
                for mu, c in self._apply_basis(n + m1, rest).items():
                    _accumulate(out, mu, c * k)
                if n + m1 == 0:
                    central = self.c_vir * Fraction(n ** 3 - n, 12)
                    if not central.is_zero():
                        _accumulate(out, rest, central)
        self._mode_cache[key] = out
        return out


def _accumulate(store: dict, key, value) -> None:
    prior = store.get(key)
    if prior is None:
        if not _coeff_is_zero(value):
            store[key] = value
        return
    total = prior + value
    if _coeff_is_zero(total):
        del store[key]
    else:
        store[key] = total


def verma_context(table: VarTable, delta, c_vir) -> ModuleContext:
    """Highest-weight module: rank 0 with L_0 acting by ``delta``."""
    return ModuleContext(table, 0, {0: delta}, c_vir)


# ----- module vectors ------------------------------------------------------


class ModuleVector:
    """Finite linear combination of basis vectors of one module context.

    Coefficients may be LaurentPolys, RationalFunctions or TruncatedSeries;
    they only need to support ring arithmetic with LaurentPoly.  Zero
    coefficients are dropped on construction.
    """

    __slots__ = ("ctx", "parts")

    def __init__(self, ctx: ModuleContext, parts: Mapping[Partition, object] | None = None):
        self.ctx = ctx
        self.parts: dict[Partition, object] = {}
        if parts:
            for lam, c in parts.items():
                if not _coeff_is_zero(c):
                    self.parts[tuple(lam)] = c

    def is_zero(self) -> bool:
        return not self.parts

    def coeff(self, lam: Iterable[int]):
        return self.parts.get(tuple(lam), self.ctx._zero)

    def constant_term(self):
        """Coefficient of the cyclic vector."""
        return self.parts.get((), self.ctx._zero)

    def items(self) -> Iterator[tuple[Partition, object]]:
        return iter(sorted(self.parts.items(), key=lambda kv: partition_sort_key(kv[0])))

    def max_weight(self) -> int:
        return max((sum(lam) for lam in self.parts), default=0)

    def weight_component(self, w: int) -> "ModuleVector":
        return ModuleVector(self.ctx, {lam: c for lam, c in self.parts.items()
                                       if sum(lam) == w})

    def map_coeffs(self, fn) -> "ModuleVector":
        return ModuleVector(self.ctx, {lam: fn(c) for lam, c in self.parts.items()})

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        if not isinstance(other, ModuleVector):
            return NotImplemented
        if other.ctx is not self.ctx:
            raise ValueError("vectors from different module contexts")
        out = dict(self.parts)
        for lam, c in other.parts.items():
            _accumulate(out, lam, c)
        v = ModuleVector(self.ctx)
        v.parts = out
        return v

    def __neg__(self) -> "ModuleVector":
        return self.map_coeffs(lambda c: -c)

    def __sub__(self, other: "ModuleVector") -> "ModuleVector":
        if not isinstance(other, ModuleVector):
            return NotImplemented
        return self + (-other)

    def scale(self, scalar) -> "ModuleVector":
        if _coeff_is_zero(scalar):
            return ModuleVector(self.ctx)
        return self.map_coeffs(lambda c: c * scalar)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModuleVector):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if not self.parts:
            return "ModuleVector(0)"
        bits = [f"{lam}: {c}" for lam, c in self.items()]
        return "ModuleVector({" + ", ".join(bits) + "})"


# ----- mode application -----------------------------------------------------


def apply_mode(vec: ModuleVector, n: int) -> ModuleVector:
    """Act with L_n, straightening back onto the partition basis."""
    ctx = vec.ctx
    out: dict[Partition, object] = {}
    for lam, c in vec.parts.items():
        for mu, d in ctx._apply_basis(n, lam).items():
            _accumulate(out, mu, c * d)
    v = ModuleVector(ctx)
    v.parts = out
    return v


def apply_tilde(vec: ModuleVector, n: int) -> ModuleVector:
    """Act with L_n minus its cyclic-vector eigenvalue (``n >= rho``)."""
    ev = vec.ctx.eigenvalue(n)
    shifted = apply_mode(vec, n)
    if ev.is_zero():
        return shifted
    return shifted - vec.scale(ev)


def apply_tilde_word(vec: ModuleVector, lam: Iterable[int]) -> ModuleVector:
    """Act with the shifted word attached to partition ``lam``.

    Part ``a`` contributes the shifted mode ``a + rho``; the factor for the
    largest part sits innermost, so it is applied first.
    """
    lam = tuple(lam)
    if not _is_partition(lam):
        raise ValueError(f"not a partition: {lam}")
    rho = vec.ctx.rho
    out = vec
    for a in lam:
        out = apply_tilde(out, a + rho)
    return out


def constant_term(vec: ModuleVector):
    return vec.constant_term()
