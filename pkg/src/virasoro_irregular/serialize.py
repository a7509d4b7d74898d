"""Exact JSON encoding of series data and verification reports.

Coefficients travel as ``(exponent vector, numerator, denominator)``
triples, never as decimals, with terms listed in the canonical monomial
order and document keys emitted sorted.  Equal inputs therefore always
produce byte-identical documents, and a document written by
:func:`series_to_doc` can be rebuilt with :func:`series_from_doc` and
re-verified from scratch.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .frames import CONVENTIONS, conformal_weight, default_central_charge
from .ring import LaurentPoly, RationalFunction, TruncatedSeries, VarTable
from .solver import (HALF, INTEGER, RANK_ONE, IrregularSeries,
                     VerificationReport, _half_recipe, _integer_recipe,
                     _x_vectors)
from .virasoro import ModuleVector, partition_sort_key, verma_context


class SerializeError(ValueError):
    """Document does not describe data this package can rebuild."""


# ----- rank strings -----------------------------------------------------------


def format_rank(kind: str, r: int) -> str:
    """Render an internal (kind, r) pair as the user-facing rank string."""
    if kind == HALF:
        return f"{2 * r - 1}/2"
    return str(r if kind == INTEGER else 1)


def parse_rank(text: str) -> tuple[str, int]:
    """Parse a rank string such as ``"3"`` or ``"5/2"`` into (kind, r).

    Half ranks are the family (2m+1)/2 with m >= 1, stored under the next
    integer up, so ``"5/2"`` maps to ``(half, 3)``.
    """
    body = text.strip()
    if "/" in body:
        num_text, _, den_text = body.partition("/")
        try:
            num, den = int(num_text), int(den_text)
        except ValueError:
            raise SerializeError(f"rank {text!r} is not a fraction of integers") from None
        if den != 2 or num < 3 or num % 2 == 0:
            raise SerializeError(
                f"half ranks have the form (2m+1)/2 with m >= 1, got {text!r}")
        return HALF, (num + 1) // 2
    try:
        r = int(body)
    except ValueError:
        raise SerializeError(f"rank {text!r} is not an integer or a half") from None
    if r < 1:
        raise SerializeError(f"rank must be at least 1, got {r}")
    return (RANK_ONE, 1) if r == 1 else (INTEGER, r)


# ----- polynomial and coefficient terms ---------------------------------------


def poly_terms(poly: LaurentPoly) -> list[dict]:
    """Canonical term list: exponent vector plus exact numerator/denominator."""
    return [{"e": list(exps), "n": coeff.numerator, "d": coeff.denominator}
            for exps, coeff in poly.sorted_terms()]


def poly_from_terms(table: VarTable, terms: object) -> LaurentPoly:
    if not isinstance(terms, list):
        raise SerializeError("polynomial must be a list of term records")
    total = LaurentPoly.zero(table)
    for record in terms:
        if not isinstance(record, dict) or set(record) != {"e", "n", "d"}:
            raise SerializeError(f"malformed polynomial term {record!r}")
        exps = record["e"]
        if (not isinstance(exps, list) or len(exps) != len(table)
                or not all(isinstance(e, int) for e in exps)):
            raise SerializeError(f"exponent vector {exps!r} does not fit the header")
        num, den = record["n"], record["d"]
        if not isinstance(num, int) or not isinstance(den, int) or den == 0:
            raise SerializeError(f"malformed coefficient in term {record!r}")
        total = total + LaurentPoly.monomial(table, exps, Fraction(num, den))
    return total


def coeff_doc(coeff) -> dict:
    """Encode a coefficient, polynomial or quotient, as a num/den pair."""
    if isinstance(coeff, RationalFunction):
        return {"num": poly_terms(coeff.num), "den": poly_terms(coeff.den)}
    return {"num": poly_terms(coeff),
            "den": poly_terms(LaurentPoly.const(coeff.table, 1))}


def coeff_from_doc(table: VarTable, doc: object, rational: bool):
    if not isinstance(doc, dict) or set(doc) != {"num", "den"}:
        raise SerializeError(f"malformed coefficient record {doc!r}")
    num = poly_from_terms(table, doc["num"])
    den = poly_from_terms(table, doc["den"])
    if rational:
        return RationalFunction(num, den)
    if den != LaurentPoly.const(table, 1):
        raise SerializeError("polynomial coefficient carries a denominator")
    return num


# ----- module vectors ----------------------------------------------------------


def partition_key(lam: tuple[int, ...]) -> str:
    return ",".join(str(part) for part in lam)


def partition_from_key(key: str) -> tuple[int, ...]:
    if key == "":
        return ()
    try:
        lam = tuple(int(part) for part in key.split(","))
    except ValueError:
        raise SerializeError(f"malformed partition key {key!r}") from None
    if any(part < 1 for part in lam) or list(lam) != sorted(lam, reverse=True):
        raise SerializeError(f"{key!r} is not a partition")
    return lam


def vector_doc(vec: ModuleVector) -> dict:
    ordered = sorted(vec.parts, key=partition_sort_key)
    return {partition_key(lam): coeff_doc(vec.parts[lam]) for lam in ordered}


def vector_from_doc(ctx, doc: object, rational: bool) -> ModuleVector:
    if not isinstance(doc, dict):
        raise SerializeError("vector terms must be a partition-to-coefficient map")
    parts = {partition_from_key(key): coeff_from_doc(ctx.table, value, rational)
             for key, value in doc.items()}
    return ModuleVector(ctx, parts)


# ----- series documents ---------------------------------------------------------


def _indexed_polys(store: dict[int, LaurentPoly], label: str) -> list[dict]:
    return [{label: index, "poly": poly_terms(store[index])}
            for index in sorted(store)]


def _polys_indexed(table: VarTable, docs: object, label: str) -> dict[int, LaurentPoly]:
    if not isinstance(docs, list):
        raise SerializeError(f"{label!r} records must form a list")
    out: dict[int, LaurentPoly] = {}
    for record in docs:
        if not isinstance(record, dict) or set(record) != {label, "poly"}:
            raise SerializeError(f"malformed {label!r} record {record!r}")
        index = record[label]
        if not isinstance(index, int) or index in out:
            raise SerializeError(f"bad or repeated index {index!r} in {label!r} records")
        out[index] = poly_from_terms(table, record["poly"])
    return out


def series_to_doc(series: IrregularSeries) -> dict:
    """Full document for a constructed series, ready for :func:`dumps`."""
    table = series.table
    return {
        "meta": {
            "rank": format_rank(series.kind, series.r),
            "K": series.order,
            "convention": series.convention,
            "central": poly_terms(series.ctx.c_vir),
        },
        "variables": {"names": list(table.names), "weights": list(table.weights)},
        "series": {
            "nu": None if series.nu is None else poly_terms(series.nu),
            "g": _indexed_polys(series.g, "j"),
            "constants": _indexed_polys(series.constants, "k"),
            "pending": list(series.pending),
            "tail": [{"k": k, "terms": vector_doc(vec)}
                     for k, vec in enumerate(series.vectors)],
        },
    }


def _require(doc: object, key: str, context: str) -> object:
    if not isinstance(doc, dict) or key not in doc:
        raise SerializeError(f"{context} is missing the {key!r} field")
    return doc[key]


def series_from_doc(doc: object) -> IrregularSeries:
    """Rebuild a series from its document so it can be re-verified."""
    meta = _require(doc, "meta", "document")
    rank_text = _require(meta, "rank", "meta block")
    if not isinstance(rank_text, str):
        raise SerializeError("meta rank must be a string")
    kind, r = parse_rank(rank_text)
    order = _require(meta, "K", "meta block")
    if not isinstance(order, int) or order < 0:
        raise SerializeError(f"order must be a non-negative integer, got {order!r}")
    convention = _require(meta, "convention", "meta block")
    if convention not in CONVENTIONS:
        raise SerializeError(f"unknown convention {convention!r}")

    if kind == RANK_ONE:
        table = VarTable(("Q", "c0", "c1"), (0, 0, 1))
    elif kind == INTEGER:
        table = _integer_recipe(r, order, None).table
    else:
        table = _half_recipe(r, order, None).table
    header = _require(doc, "variables", "document")
    if (_require(header, "names", "variables header") != list(table.names)
            or _require(header, "weights", "variables header") != list(table.weights)):
        raise SerializeError("variables header does not match the declared rank and order")

    central = poly_from_terms(table, _require(meta, "central", "meta block"))
    if kind == RANK_ONE:
        ctx = verma_context(table, conformal_weight(table, "c0"), central)
    elif kind == INTEGER:
        ctx = _integer_recipe(r, order, central).ctx
    else:
        ctx = _half_recipe(r, order, central).ctx

    body = _require(doc, "series", "document")
    nu_doc = _require(body, "nu", "series block")
    nu = None if nu_doc is None else poly_from_terms(table, nu_doc)
    g = _polys_indexed(table, _require(body, "g", "series block"), "j")
    constants = _polys_indexed(table, _require(body, "constants", "series block"), "k")
    pending_doc = _require(body, "pending", "series block")
    if (not isinstance(pending_doc, list)
            or not all(isinstance(name, str) and name in table.names
                       for name in pending_doc)):
        raise SerializeError("pending entries must name header variables")

    tail = _require(body, "tail", "series block")
    if not isinstance(tail, list):
        raise SerializeError("tail must be a list of order records")
    rational = kind == RANK_ONE
    staged: dict[int, ModuleVector] = {}
    for record in tail:
        k = _require(record, "k", "tail record")
        if not isinstance(k, int) or k in staged:
            raise SerializeError(f"bad or repeated tail order {k!r}")
        staged[k] = vector_from_doc(ctx, _require(record, "terms", "tail record"),
                                    rational)
    if sorted(staged) != list(range(order + 1)):
        raise SerializeError(f"tail must cover orders 0..{order} exactly once")
    vectors = [staged[k] for k in range(order + 1)]
    x_vectors = [] if kind == RANK_ONE else _x_vectors(vectors)
    return IrregularSeries(
        kind=kind, r=r, order=order, table=table, ctx=ctx,
        var="c1" if kind == RANK_ONE else ("Lam" if kind == HALF else f"c{r}"),
        cnames=() if kind == RANK_ONE else tuple(f"c{j}" for j in range(1, r)),
        vectors=vectors, x_vectors=x_vectors, nu=nu, g=g, constants=constants,
        pending=tuple(pending_doc), ledger=None, convention=convention)


# ----- reports and windowed series ----------------------------------------------


def report_doc(report: VerificationReport) -> list[dict]:
    """Residual records in the fixed relation/window/status shape."""
    return [{"relation": check.relation, "window": check.window,
             "status": "ok" if check.ok else "fail"}
            for check in report.checks]


def truncated_doc(series: TruncatedSeries) -> dict:
    """Windowed scalar series: one polynomial per expansion-variable order."""
    orders = []
    if series.hi is not None:
        for m in range(series.lo, series.hi + 1):
            poly = series.coeff(m)
            if not poly.is_zero():
                orders.append({"m": m, "poly": poly_terms(poly)})
    return {"var": series.var, "lo": series.lo, "hi": series.hi, "orders": orders}


def dumps(doc: dict) -> str:
    """Byte-deterministic rendering: sorted keys, exact integers, no floats."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
