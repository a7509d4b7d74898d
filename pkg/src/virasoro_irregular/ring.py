"""Exact coefficient arithmetic: sparse Laurent polynomials and truncated series.

Everything downstream (module vectors, Gram solves, frames, gauge data)
stores its scalars as :class:`LaurentPoly` over a fixed :class:`VarTable`.
Coefficients are ``fractions.Fraction`` so all arithmetic is exact and
canonical.  Rational functions are quarantined in :class:`RationalFunction`
and only appear where a solve genuinely needs denominators (ordinary Verma
module solves and generic linear systems); every other operation either
stays in the Laurent ring or raises :class:`NotDivisible`.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence


class RingError(Exception):
    """Base class for exact-arithmetic failures."""


class NotDivisible(RingError):
    """Raised when an exact division has no quotient in the Laurent ring."""


class NonUnitLeadingCoefficient(RingError):
    """Raised when a series division needs to invert a non-unit coefficient."""


class VariableMismatch(RingError):
    """Raised when two operands live over different variable tables."""


class VarTable:
    """Ordered roster of named variables with integer grading weights.

    The order of ``names`` fixes the exponent-vector layout and the
    graded-lexicographic monomial order used for canonical output.  Weights
    feed the quasi-homogeneity checks (weight of a monomial = sum of
    exponent * weight over the active variables); they may be negative,
    which unknown expansion constants use for bookkeeping.
    """

    __slots__ = ("names", "weights", "_index")

    def __init__(self, names: Sequence[str], weights: Sequence[int]):
        names = tuple(names)
        weights = tuple(int(w) for w in weights)
        if len(names) != len(weights):
            raise ValueError("names and weights must have equal length")
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        self.names = names
        self.weights = weights
        self._index = {name: i for i, name in enumerate(names)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise VariableMismatch(f"unknown variable {name!r}") from None

    def weight(self, name: str) -> int:
        return self.weights[self.index(name)]

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, VarTable)
            and self.names == other.names
            and self.weights == other.weights
        )

    def __hash__(self) -> int:
        return hash((self.names, self.weights))

    def __repr__(self) -> str:
        items = ", ".join(f"{n}:{w}" for n, w in zip(self.names, self.weights))
        return f"VarTable({items})"


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected exact rational, got {type(value).__name__}")


def _grlex_key(exps: tuple[int, ...]) -> tuple:
    # Graded lexicographic: compare total degree first, then the exponent
    # vector itself.  Works for negative exponents too (total order).
    return (sum(exps), exps)


class LaurentPoly:
    """Sparse multivariate Laurent polynomial with Fraction coefficients.

    Terms are stored as ``{exponent tuple: Fraction}`` with zero
    coefficients dropped, so equality of dicts is equality of polynomials.
    Instances are treated as immutable; all operations return new objects.
    """

    __slots__ = ("table", "terms")

    def __init__(self, table: VarTable, terms: Mapping[tuple[int, ...], Fraction] | None = None):
        self.table = table
        self.terms: dict[tuple[int, ...], Fraction] = {}
        if terms:
            n = len(table)
            for exps, coeff in terms.items():
                if len(exps) != n:
                    raise ValueError("exponent vector length mismatch")
                c = _as_fraction(coeff)
                if c:
                    self.terms[tuple(exps)] = c

    # ----- constructors -------------------------------------------------

    @staticmethod
    def zero(table: VarTable) -> "LaurentPoly":
        return LaurentPoly(table)

    @staticmethod
    def const(table: VarTable, value) -> "LaurentPoly":
        c = _as_fraction(value)
        p = LaurentPoly(table)
        if c:
            p.terms[(0,) * len(table)] = c
        return p

    @staticmethod
    def var(table: VarTable, name: str, power: int = 1, coeff=1) -> "LaurentPoly":
        exps = [0] * len(table)
        exps[table.index(name)] = power
        return LaurentPoly(table, {tuple(exps): _as_fraction(coeff)})

    @staticmethod
    def monomial(table: VarTable, exps: Sequence[int], coeff=1) -> "LaurentPoly":
        return LaurentPoly(table, {tuple(int(e) for e in exps): _as_fraction(coeff)})

    # ----- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        if not self.terms:
            return True
        zero = (0,) * len(self.table)
        return len(self.terms) == 1 and zero in self.terms

    def as_rational(self) -> Fraction:
        """Return the constant value; raises if the polynomial is not constant."""
        if not self.terms:
            return Fraction(0)
        zero = (0,) * len(self.table)
        if len(self.terms) == 1 and zero in self.terms:
            return self.terms[zero]
        raise RingError(f"not a constant: {self}")

    def is_unit_monomial(self) -> bool:
        """True when the polynomial is a single term (hence invertible)."""
        return len(self.terms) == 1

    def leading(self) -> tuple[tuple[int, ...], Fraction]:
        """Largest term in graded-lex order."""
        if not self.terms:
            raise RingError("zero polynomial has no leading term")
        exps = max(self.terms, key=_grlex_key)
        return exps, self.terms[exps]

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in descending graded-lex order (canonical output order)."""
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def degree_in(self, name: str) -> tuple[int, int]:
        """(min, max) exponent of ``name`` over the support; (0, 0) if absent."""
        i = self.table.index(name)
        if not self.terms:
            return (0, 0)
        es = [exps[i] for exps in self.terms]
        return (min(es), max(es))

    def uses_var(self, name: str) -> bool:
        i = self.table.index(name)
        return any(exps[i] for exps in self.terms)

    def support_vars(self) -> set[str]:
        used: set[str] = set()
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    used.add(self.table.names[i])
        return used

    # ----- arithmetic ---------------------------------------------------

    def _check(self, other: "LaurentPoly") -> None:
        if self.table is not other.table and self.table != other.table:
            raise VariableMismatch("operands over different variable tables")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(self.table, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            s = out.get(exps)
            if s is None:
                out[exps] = c
            else:
                s = s + c
                if s:
                    out[exps] = s
                else:
                    del out[exps]
        p = LaurentPoly(self.table)
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = LaurentPoly(self.table)
        p.terms = {exps: -c for exps, c in self.terms.items()}
        return p

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(self.table, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.__add__(other.__neg__())

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                return LaurentPoly(self.table)
            p = LaurentPoly(self.table)
            p.terms = {exps: coeff * c for exps, coeff in self.terms.items()}
            return p
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check(other)
        out: dict[tuple[int, ...], Fraction] = {}
        if len(self.terms) > len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                exps = tuple(x + y for x, y in zip(e1, e2))
                c = c1 * c2
                s = out.get(exps)
                if s is None:
                    out[exps] = c
                else:
                    s = s + c
                    if s:
                        out[exps] = s
                    else:
                        del out[exps]
        p = LaurentPoly(self.table)
        p.terms = out
        return p

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if self.is_unit_monomial():
                (exps, c), = self.terms.items()
                inv = LaurentPoly.monomial(self.table, tuple(-e for e in exps), Fraction(1) / c)
                return inv ** (-n)
            raise NotDivisible("negative power of a non-monomial")
        result = LaurentPoly.const(self.table, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(self.table, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    # ----- calculus and structure ----------------------------------------

    def derivative(self, name: str) -> "LaurentPoly":
        i = self.table.index(name)
        out: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e == 0:
                continue
            new = list(exps)
            new[i] = e - 1
            key = tuple(new)
            s = out.get(key, Fraction(0)) + c * e
            if s:
                out[key] = s
            elif key in out:
                del out[key]
        p = LaurentPoly(self.table)
        p.terms = out
        return p

    def coeff_of_power(self, name: str, k: int) -> "LaurentPoly":
        """Coefficient of ``name**k`` (the variable is removed from the result)."""
        i = self.table.index(name)
        out: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self.terms.items():
            if exps[i] != k:
                continue
            new = list(exps)
            new[i] = 0
            out[tuple(new)] = c
        p = LaurentPoly(self.table)
        p.terms = out
        return p

    def split_by_var(self, name: str) -> dict[int, "LaurentPoly"]:
        """Decompose as a finite Laurent polynomial in ``name``."""
        i = self.table.index(name)
        buckets: dict[int, dict[tuple[int, ...], Fraction]] = {}
        for exps, c in self.terms.items():
            new = list(exps)
            k = new[i]
            new[i] = 0
            buckets.setdefault(k, {})[tuple(new)] = c
        out = {}
        for k, terms in buckets.items():
            p = LaurentPoly(self.table)
            p.terms = terms
            out[k] = p
        return out

    def subs(self, assignments: Mapping[str, "LaurentPoly"]) -> "LaurentPoly":
        """Substitute variables by polynomials (exact; negative powers need units)."""
        idx = {self.table.index(name): poly for name, poly in assignments.items()}
        result = LaurentPoly(self.table)
        for exps, c in self.terms.items():
            factor = LaurentPoly.const(self.table, c)
            rest = list(exps)
            for i, poly in idx.items():
                e = rest[i]
                if e:
                    rest[i] = 0
                    factor = factor * (poly ** e)
            term = LaurentPoly.monomial(self.table, tuple(rest), 1)
            result = result + factor * term
        return result

    def weighted_degrees(self) -> set[int]:
        """Set of quasi-homogeneous weights present in the support."""
        ws = self.table.weights
        return {sum(e * w for e, w in zip(exps, ws)) for exps in self.terms}

    def homogeneous_weight(self) -> int | None:
        """The single weight if quasi-homogeneous (0 for the zero poly), else None."""
        degs = self.weighted_degrees()
        if not degs:
            return 0
        if len(degs) == 1:
            return next(iter(degs))
        return None

    def migrate(self, table: VarTable) -> "LaurentPoly":
        """Re-express over another table; every used variable must exist there."""
        if table == self.table:
            return self
        mapping = [table.index(name) if name in table._index else -1
                   for name in self.table.names]
        out: dict[tuple[int, ...], Fraction] = {}
        n = len(table)
        for exps, c in self.terms.items():
            new = [0] * n
            for i, e in enumerate(exps):
                if not e:
                    continue
                j = mapping[i]
                if j < 0:
                    raise VariableMismatch(
                        f"variable {self.table.names[i]!r} missing from target table")
                new[j] = e
            out[tuple(new)] = c
        p = LaurentPoly(table)
        p.terms = out
        return p

    # ----- exact division -------------------------------------------------

    def exact_div(self, divisor: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient in the Laurent ring; raises NotDivisible otherwise."""
        if isinstance(divisor, (int, Fraction)):
            divisor = LaurentPoly.const(self.table, divisor)
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return LaurentPoly(self.table)
        if divisor.is_unit_monomial():
            (dexps, dc), = divisor.terms.items()
            p = LaurentPoly(self.table)
            p.terms = {
                tuple(e - d for e, d in zip(exps, dexps)): c / dc
                for exps, c in self.terms.items()
            }
            return p
        # Shift both operands into the polynomial subring so that, for each
        # variable, the minimal exponent is zero; a Laurent quotient of the
        # shifted operands is then forced to be an honest polynomial.
        n = len(self.table)
        shift_a = [min(exps[i] for exps in self.terms) for i in range(n)]
        shift_b = [min(exps[i] for exps in divisor.terms) for i in range(n)]
        a = {tuple(e - s for e, s in zip(exps, shift_a)): c for exps, c in self.terms.items()}
        b = {tuple(e - s for e, s in zip(exps, shift_b)): c for exps, c in divisor.terms.items()}
        quot = _poly_exact_div(a, b)
        if quot is None:
            raise NotDivisible("quotient does not lie in the Laurent ring")
        back = tuple(sa - sb for sa, sb in zip(shift_a, shift_b))
        p = LaurentPoly(self.table)
        p.terms = {tuple(e + s for e, s in zip(exps, back)): c for exps, c in quot.items()}
        return p

    # ----- rendering -------------------------------------------------------

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exps, c in self.sorted_terms():
            factors = []
            for name, e in zip(self.table.names, exps):
                if e == 0:
                    continue
                factors.append(name if e == 1 else f"{name}^{e}")
            if not factors:
                body = str(c)
            else:
                mono = "*".join(factors)
                if c == 1:
                    body = mono
                elif c == -1:
                    body = f"-{mono}"
                else:
                    body = f"{c}*{mono}"
            pieces.append(body)
        text = pieces[0]
        for body in pieces[1:]:
            text += f" - {body[1:]}" if body.startswith("-") else f" + {body}"
        return text


def _poly_exact_div(a: dict, b: dict) -> dict | None:
    """Exact division of polynomial term-dicts (non-negative exponents)."""
    rem = dict(a)
    lead_b = max(b, key=_grlex_key)
    cb = b[lead_b]
    quot: dict[tuple[int, ...], Fraction] = {}
    while rem:
        lead_r = max(rem, key=_grlex_key)
        qexp = tuple(er - eb for er, eb in zip(lead_r, lead_b))
        if any(e < 0 for e in qexp):
            return None
        qc = rem[lead_r] / cb
        quot[qexp] = qc
        for exps, c in b.items():
            key = tuple(e + q for e, q in zip(exps, qexp))
            s = rem.get(key, Fraction(0)) - qc * c
            if s:
                rem[key] = s
            elif key in rem:
                del rem[key]
    return quot


class RationalFunction:
    """Quotient of Laurent polynomials, normalized opportunistically.

    There is no multivariate gcd here: the quotient is reduced when the
    denominator divides the numerator exactly or is a unit monomial, and the
    denominator is normalized to have positive leading coefficient and
    rational content one.  That keeps ordinary Verma solves canonical enough
    for equality tests (which cross-multiply) without a full gcd engine.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None):
        if den is None:
            den = LaurentPoly.const(num.table, 1)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        num._check(den)
        if num.is_zero():
            den = LaurentPoly.const(num.table, 1)
        else:
            try:
                num = num.exact_div(den)
                den = LaurentPoly.const(num.table, 1)
            except NotDivisible:
                pass
        if not den.is_constant() or den.as_rational() != 1:
            _, lead = den.leading()
            num = num * (Fraction(1) / lead)
            den = den * (Fraction(1) / lead)
        self.num = num
        self.den = den

    @staticmethod
    def from_poly(p: LaurentPoly) -> "RationalFunction":
        return RationalFunction(p)

    @property
    def table(self) -> VarTable:
        return self.num.table

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> LaurentPoly:
        if not self.is_poly():
            raise NotDivisible(f"denominator survives: {self.den}")
        return self.num * (Fraction(1) / self.den.as_rational())

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, LaurentPoly):
            return RationalFunction(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction(LaurentPoly.const(self.table, other))
        raise TypeError(f"cannot coerce {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        if self.num.is_zero():
            return o
        if o.num.is_zero():
            return self
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        r = RationalFunction.__new__(RationalFunction)
        r.num = -self.num
        r.den = self.den
        return r

    def __sub__(self, other):
        return self.__add__(self._coerce(other).__neg__())

    def __rsub__(self, other):
        return self.__neg__().__add__(other)

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other).__truediv__(self)

    def __eq__(self, other: object) -> bool:
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return (self.num * o.den) == (o.num * self.den)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if self.is_poly():
            return f"RationalFunction({self.num})"
        return f"RationalFunction(({self.num}) / ({self.den}))"


class TruncatedSeries:
    """Formal series in one distinguished variable with polynomial coefficients.

    Coefficients are LaurentPolys that must be free of the expansion
    variable; the window [lo, hi] marks the orders that are actually known.
    ``hi=None`` means the series is exact (a finite Laurent polynomial in the
    expansion variable), in which case no information is lost in products.
    """

    __slots__ = ("table", "var", "lo", "coeffs", "hi")

    def __init__(self, table: VarTable, var: str, lo: int,
                 coeffs: Sequence[LaurentPoly], hi: int | None):
        self.table = table
        self.var = var
        table.index(var)
        coeffs = list(coeffs)
        if hi is not None and len(coeffs) != hi - lo + 1:
            raise ValueError("coefficient count does not match window")
        for c in coeffs:
            if c.uses_var(var):
                raise RingError(f"series coefficient uses expansion variable {var!r}")
        # trim leading zeros for canonical form (keep window honest)
        while coeffs and coeffs[0].is_zero():
            coeffs.pop(0)
            lo += 1
        if hi is None:
            while coeffs and coeffs[-1].is_zero():
                coeffs.pop()
        self.lo = lo
        self.coeffs = coeffs
        self.hi = hi

    # ----- constructors ---------------------------------------------------

    @staticmethod
    def from_poly(p: LaurentPoly, var: str, hi: int | None = None) -> "TruncatedSeries":
        parts = p.split_by_var(var)
        if parts:
            lo = min(parts)
            top = max(parts)
            zero = LaurentPoly.zero(p.table)
            coeffs = [parts.get(k, zero) for k in range(lo, top + 1)]
        else:
            lo, coeffs = 0, []
        s = TruncatedSeries(p.table, var, lo, coeffs, None)
        return s.truncate(hi) if hi is not None else s

    @staticmethod
    def zero(table: VarTable, var: str) -> "TruncatedSeries":
        return TruncatedSeries(table, var, 0, [], None)

    # ----- structure --------------------------------------------------------

    @property
    def known_hi(self) -> int:
        if self.hi is not None:
            return self.hi
        return self.lo + len(self.coeffs) - 1 if self.coeffs else self.lo - 1

    def is_exact(self) -> bool:
        return self.hi is None

    def coeff(self, k: int) -> LaurentPoly:
        if self.hi is not None and k > self.hi:
            raise RingError(f"order {k} outside valid window (hi={self.hi})")
        if k < self.lo or k >= self.lo + len(self.coeffs):
            return LaurentPoly.zero(self.table)
        return self.coeffs[k - self.lo]

    def window(self) -> tuple[int, int | None]:
        return (self.lo, self.hi)

    def is_zero_on_window(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def truncate(self, hi: int | None) -> "TruncatedSeries":
        if hi is None:
            return self
        if self.hi is not None and hi > self.hi:
            raise RingError("cannot extend a truncated series")
        coeffs = [self.coeff(k) for k in range(self.lo, hi + 1)] if hi >= self.lo else []
        lo = self.lo if hi >= self.lo else hi + 1
        return TruncatedSeries(self.table, self.var, lo, coeffs, hi)

    def map_coeffs(self, fn: Callable[[LaurentPoly], LaurentPoly]) -> "TruncatedSeries":
        return TruncatedSeries(self.table, self.var, self.lo,
                               [fn(c) for c in self.coeffs], self.hi)

    # ----- arithmetic --------------------------------------------------------

    def _check(self, other: "TruncatedSeries") -> None:
        if self.table != other.table or self.var != other.var:
            raise VariableMismatch("series over different rings or expansion variables")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, LaurentPoly)):
            if isinstance(other, (int, Fraction)):
                other = LaurentPoly.const(self.table, other)
            other = TruncatedSeries.from_poly(other, self.var)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check(other)
        his = [h for h in (self.hi, other.hi) if h is not None]
        hi = min(his) if his else None
        los = []
        if self.coeffs or self.hi is not None:
            los.append(self.lo)
        if other.coeffs or other.hi is not None:
            los.append(other.lo)
        lo = min(los) if los else 0
        if hi is not None and hi < lo:
            return TruncatedSeries(self.table, self.var, hi + 1, [], hi)
        top = hi if hi is not None else max(self.known_hi, other.known_hi, lo - 1)
        coeffs = [self.coeff(k) + other.coeff(k) for k in range(lo, top + 1)]
        return TruncatedSeries(self.table, self.var, lo, coeffs, hi)

    __radd__ = __add__

    def __neg__(self):
        return self.map_coeffs(lambda c: -c)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, LaurentPoly)):
            if isinstance(other, (int, Fraction)):
                other = LaurentPoly.const(self.table, other)
            other = TruncatedSeries.from_poly(other, self.var)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.__add__(other.__neg__())

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, LaurentPoly)):
            if isinstance(other, (int, Fraction)):
                other = LaurentPoly.const(self.table, other)
            other = TruncatedSeries.from_poly(other, self.var)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check(other)
        if not self.coeffs and self.hi is None:
            return TruncatedSeries.zero(self.table, self.var)
        if not other.coeffs and other.hi is None:
            return TruncatedSeries.zero(self.table, self.var)
        # unknown tail of a starts at a.hi+1, so the product is unknown from
        # (a.hi + 1 + b.lo); symmetrically for b.
        bounds = []
        if self.hi is not None:
            bounds.append(self.hi + other.lo)
        if other.hi is not None:
            bounds.append(other.hi + self.lo)
        hi = min(bounds) if bounds else None
        lo = self.lo + other.lo
        if hi is not None and hi < lo:
            return TruncatedSeries(self.table, self.var, hi + 1, [], hi)
        top = hi if hi is not None else self.known_hi + other.known_hi
        coeffs = []
        for k in range(lo, top + 1):
            acc = LaurentPoly.zero(self.table)
            for i in range(self.lo, min(self.known_hi, k - other.lo) + 1):
                acc = acc + self.coeff(i) * other.coeff(k - i)
            coeffs.append(acc)
        return TruncatedSeries(self.table, self.var, lo, coeffs, hi)

    __rmul__ = __mul__

    def divide(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """Long division; the divisor's lowest coefficient must be a unit monomial."""
        self._check(other)
        if not other.coeffs:
            raise ZeroDivisionError("series division by zero")
        lead = other.coeffs[0]
        if not lead.is_unit_monomial():
            raise NonUnitLeadingCoefficient(
                f"series divisor leading coefficient is not a unit monomial: {lead}")
        lo = self.lo - other.lo
        bounds = []
        if self.hi is not None:
            bounds.append(self.hi - other.lo)
        if other.hi is not None:
            # q = a/b: a_k = sum q_i b_{k-i}; solving for q_k uses b up to b.hi
            bounds.append(other.hi - other.lo + lo)
        hi = min(bounds) if bounds else None
        top = hi if hi is not None else self.known_hi - other.lo
        qcoeffs: list[LaurentPoly] = []
        for k in range(lo, top + 1):
            acc = self.coeff(k + other.lo)
            for i, qc in enumerate(qcoeffs):
                acc = acc - qc * other.coeff(k + other.lo - (lo + i))
            qcoeffs.append(acc.exact_div(lead))
        return TruncatedSeries(self.table, self.var, lo, qcoeffs, hi)

    def to_poly(self) -> LaurentPoly:
        """Collapse an exact series back into a Laurent polynomial."""
        if self.hi is not None:
            raise RingError("only exact series can collapse to a polynomial")
        acc = LaurentPoly.zero(self.table)
        for k, c in enumerate(self.coeffs, start=self.lo):
            acc = acc + c * LaurentPoly.var(self.table, self.var, k)
        return acc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if self.table != other.table or self.var != other.var or self.hi != other.hi:
            return False
        lo = min(self.lo, other.lo)
        top = max(self.known_hi, other.known_hi)
        return all(self.coeff(k) == other.coeff(k) for k in range(lo, top + 1))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        parts = [f"({c})*{self.var}^{k}" for k, c in enumerate(self.coeffs, start=self.lo)
                 if not c.is_zero()]
        body = " + ".join(parts) if parts else "0"
        tail = "" if self.hi is None else f" + O({self.var}^{self.hi + 1})"
        return f"TruncatedSeries({body}{tail})"
