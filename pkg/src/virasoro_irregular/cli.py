"""Command line front end for building and checking irregular series.

Five subcommands cover the package surface: ``construct`` solves a series
and writes it out, ``verify`` re-checks a series (fresh or re-ingested from
a JSON report), ``frames`` dumps the frame matrix with its determinant and
dual-operator data, ``gram`` tabulates pairing blocks with determinant
ratios, and ``gauge`` runs the obstruction pipeline.  Reports are emitted
as exact JSON (byte-deterministic, no decimals) or as a plain-text
rendering of the same tree.  Exit codes: 0 clean, 1 for residual failures
or solver errors (with a structured error in the report), 2 for usage
errors.
"""

from __future__ import annotations

import argparse
import ast
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import gauge, serialize
from .frames import (CONVENTIONS, GENERAL, deformation_fields, dual_operator,
                     expected_frame_det, expected_odd_frame_det, frame_matrix,
                     odd_dual_operator, odd_fields, odd_frame_matrix)
from .linalg import det_bareiss, inverse_exact
from .gram import GramError, gram_matrix, pure_power_factor
from .ring import LaurentPoly, RingError, VarTable
from .serialize import SerializeError, format_rank, parse_rank, poly_terms
from .solver import (HALF, INTEGER, RANK_ONE, SolverError, rank1_series,
                     solve_half, solve_integer, verify_canonical)
from .virasoro import ModuleContext


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation parameters shared by the subcommands."""

    command: str
    kind: str | None
    r: int | None
    order: int
    central: str | None
    convention: str
    fmt: str
    output: str | None
    bound: int | None
    input: str | None = None


# ----- argument handling --------------------------------------------------------


def _scalar_expression(text: str) -> LaurentPoly:
    """Parse a central-charge expression in ``Q`` and ``c0`` exactly.

    Supports integer literals, the two symbols, ``+ - * /`` and ``**`` with
    literal non-negative integer exponents; division only by nonzero
    constants, so no decimals can sneak in.
    """
    table = VarTable(("Q", "c0"), (0, 0))
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError:
        raise ValueError(f"cannot parse central charge {text!r}") from None

    def walk(node: ast.AST) -> LaurentPoly:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return LaurentPoly.const(table, node.value)
        if isinstance(node, ast.Name):
            if node.id in table.names:
                return LaurentPoly.var(table, node.id)
            raise ValueError(f"unknown symbol {node.id!r} (only Q and c0 are allowed)")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
            value = walk(node.operand)
            return -value if isinstance(node.op, ast.USub) else value
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                power = node.right
                if not (isinstance(power, ast.Constant)
                        and isinstance(power.value, int) and power.value >= 0):
                    raise ValueError("exponents must be literal non-negative integers")
                return walk(node.left) ** power.value
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if right.is_constant() and not right.is_zero():
                    return left * (Fraction(1) / right.as_rational())
                raise ValueError("division is only allowed by nonzero constants")
        raise ValueError(f"unsupported syntax in central charge {text!r}")

    return walk(tree)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="virasoro-irregular",
        description="Construct and check irregular Virasoro series.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name: str, help_text: str, rank_required: bool = True,
            order_default: int | None = None) -> argparse.ArgumentParser:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--rank", required=rank_required,
                         help="integer rank like 3 or a half rank like 5/2")
        if order_default is not None:
            cmd.add_argument("--order", type=int, default=order_default,
                             help=f"truncation order (default {order_default})")
        cmd.add_argument("--format", choices=("json", "text"), default="text",
                         dest="fmt", help="report rendering (default text)")
        cmd.add_argument("--output", help="write the report to this path")
        return cmd

    construct = add("construct", "solve a series and write it out", order_default=3)
    verify = add("verify", "re-check a series from scratch",
                 rank_required=False, order_default=3)
    verify.add_argument("--input", help="re-ingest a JSON report written by construct")
    add("frames", "frame matrix, determinants, and dual operator")
    add("gram", "pairing blocks and determinant ratios", order_default=3)
    gauge_cmd = add("gauge", "obstruction scalars and their potential",
                    order_default=4)
    gauge_cmd.add_argument("--bound", type=int,
                           help="denominator bound for the scalar completion")
    for cmd in (construct, verify, gauge_cmd):
        cmd.add_argument("--central", help="central charge expression in Q and c0")
        cmd.add_argument("--convention", choices=CONVENTIONS, default=GENERAL,
                         help="eigenvalue convention (rank one only)")
    return parser


def _config(parser: argparse.ArgumentParser, args: argparse.Namespace) -> RunConfig:
    kind: str | None = None
    r: int | None = None
    input_path = getattr(args, "input", None)
    if input_path is not None and not os.path.exists(input_path):
        parser.error(f"input file {input_path!r} does not exist")
    if args.rank is None and input_path is None:
        parser.error("either --rank or --input is required")
    if args.rank is not None:
        try:
            kind, r = parse_rank(args.rank)
        except SerializeError as exc:
            parser.error(str(exc))
    order = getattr(args, "order", 0)
    if order < 0:
        parser.error("order must be non-negative")
    bound = getattr(args, "bound", None)
    if bound is not None and bound < 1:
        parser.error("bound must be at least 1")
    convention = getattr(args, "convention", GENERAL)
    if convention != GENERAL and kind in (INTEGER, HALF):
        parser.error("the section2-display convention applies to rank one only")
    central = getattr(args, "central", None)
    if central is not None:
        try:
            _scalar_expression(central)
        except ValueError as exc:
            parser.error(str(exc))
    if args.command == "gram" and kind == HALF:
        parser.error("gram blocks are indexed by an integer rank")
    if args.command == "gauge" and kind == RANK_ONE:
        parser.error("gauge requires rank at least 2 or a half rank")
    return RunConfig(
        command=args.command, kind=kind, r=r, order=order,
        central=central, convention=convention,
        fmt=args.fmt, output=args.output, bound=bound, input=input_path)


# ----- shared helpers -----------------------------------------------------------


def _central_override(cfg: RunConfig) -> LaurentPoly | None:
    if cfg.central is None:
        return None
    try:
        return _scalar_expression(cfg.central)
    except ValueError as exc:
        raise SerializeError(str(exc)) from None


def _build_series(cfg: RunConfig):
    central = _central_override(cfg)
    if cfg.kind == RANK_ONE:
        return rank1_series(cfg.order, cfg.convention, central)
    if cfg.kind == INTEGER:
        return solve_integer(cfg.r, cfg.order, central)
    return solve_half(cfg.r, cfg.order, central)


def _meta(cfg: RunConfig, central: LaurentPoly | None = None) -> dict:
    return {
        "rank": None if cfg.kind is None else format_rank(cfg.kind, cfg.r),
        "K": cfg.order,
        "convention": cfg.convention,
        "central": None if central is None else poly_terms(central),
    }


def _header(table: VarTable) -> dict:
    return {"names": list(table.names), "weights": list(table.weights)}


def _matrix_terms(rows: list[list[LaurentPoly]]) -> list[list[list[dict]]]:
    return [[poly_terms(entry) for entry in row] for row in rows]


def _fields_doc(fields) -> list[dict]:
    out = []
    for mode in sorted(fields) if isinstance(fields, dict) else range(len(fields)):
        comps = fields[mode]
        out.append({"mode": mode,
                    "components": {name: poly_terms(poly)
                                   for name, poly in sorted(comps.items())}})
    return out


def _dual_doc(op) -> dict:
    return {"var": op.var,
            "orders": [{"i": i, "terms": [{"n": n, "poly": poly_terms(poly)}
                                          for n, poly in sorted(level.items())]}
                       for i, level in enumerate(op.orders)]}


# ----- subcommands --------------------------------------------------------------


def _cmd_construct(cfg: RunConfig) -> tuple[int, dict]:
    series = _build_series(cfg)
    report = verify_canonical(series)
    doc = serialize.series_to_doc(series)
    doc["residuals"] = serialize.report_doc(report)
    return (0 if report.all_ok else 1), doc


def _cmd_verify(cfg: RunConfig) -> tuple[int, dict]:
    if cfg.input is not None:
        with open(cfg.input, "r", encoding="utf-8") as handle:
            series = serialize.series_from_doc(json.load(handle))
    else:
        series = _build_series(cfg)
    report = verify_canonical(series)
    doc = serialize.series_to_doc(series)
    doc = {"meta": doc["meta"], "variables": doc["variables"],
           "residuals": serialize.report_doc(report)}
    return (0 if report.all_ok else 1), doc


def _cmd_frames(cfg: RunConfig) -> tuple[int, dict]:
    r = cfg.r
    if cfg.kind == HALF:
        cnames = tuple(f"c{j}" for j in range(1, r))
        table = VarTable(("Q", "c0") + cnames + ("Lam",),
                         (0, 0) + tuple(range(1, r)) + (2 * r - 1,))
        matrix = odd_frame_matrix(table, r, cnames, "Lam")
        expected = expected_odd_frame_det(table, r, cnames, "Lam")
        fields = odd_fields(table, r, cnames, "Lam")
        op = odd_dual_operator(table, r, cnames, "Lam")
    else:
        cnames = tuple(f"c{j}" for j in range(1, r + 1))
        table = VarTable(("Q", "c0") + cnames, (0, 0) + tuple(range(1, r + 1)))
        matrix = frame_matrix(table, r, cnames)
        expected = expected_frame_det(table, r, cnames)
        fields = deformation_fields(table, r, cnames)
        op = dual_operator(table, r, cnames)
    det = det_bareiss(matrix)
    ok = det == expected
    doc = {
        "meta": {"rank": format_rank(cfg.kind, r), "K": None,
                 "convention": cfg.convention, "central": None},
        "variables": _header(table),
        "frames": {
            "matrix": _matrix_terms(matrix),
            "det": poly_terms(det),
            "expected_det": poly_terms(expected),
            "det_matches": ok,
            "inverse": _matrix_terms(inverse_exact(matrix)),
            "fields": _fields_doc(fields),
            "dual": _dual_doc(op),
        },
        "residuals": [{"relation": "frame determinant closed form",
                       "window": f"rank {format_rank(cfg.kind, r)}",
                       "status": "ok" if ok else "fail"}],
    }
    return (0 if ok else 1), doc


def _cmd_gram(cfg: RunConfig) -> tuple[int, dict]:
    rho = cfg.r
    names = ("cv",) + tuple(f"E{n}" for n in range(rho, 2 * rho + 1))
    weights = (0,) + tuple(range(rho, 2 * rho + 1))
    table = VarTable(names, weights)
    eigen = {n: LaurentPoly.var(table, f"E{n}") for n in range(rho, 2 * rho + 1)}
    ctx = ModuleContext(table, rho, eigen, LaurentPoly.var(table, "cv"))
    base = ctx.eigenvalue(2 * rho)
    blocks = []
    for lo in range(cfg.order + 1):
        for hi in range(lo, cfg.order + 1):
            parts, rows = gram_matrix(ctx, lo, hi)
            det = det_bareiss(rows)
            record = {
                "lo": lo, "hi": hi, "size": len(parts),
                "partitions": [serialize.partition_key(lam) for lam in parts],
                "matrix": _matrix_terms(rows),
                "det": poly_terms(det),
            }
            try:
                exponent, ratio = pure_power_factor(det, base)
                record["factored"] = {"base": poly_terms(base), "exponent": exponent,
                                      "ratio": {"n": ratio.numerator,
                                                "d": ratio.denominator}}
            except GramError as exc:
                record["factored"] = None
                record["detail"] = str(exc)
            blocks.append(record)
    doc = {
        "meta": {"rank": str(rho), "K": cfg.order,
                 "convention": cfg.convention, "central": None},
        "variables": _header(table),
        "gram": {"base": poly_terms(base), "blocks": blocks},
    }
    return 0, doc


def _cmd_gauge(cfg: RunConfig) -> tuple[int, dict]:
    central = _central_override(cfg)
    completion = None
    residuals: list[dict] = []
    if cfg.kind == HALF:
        series = solve_half(cfg.r, cfg.order, central)
        top = cfg.bound if cfg.bound is not None else cfg.r
        for bound in range(1, top + 1):
            try:
                completion = gauge.scalar_completion_half(cfg.r, bound)
                break
            except gauge.Infeasible:
                continue
        if completion is None:
            raise gauge.Infeasible(f"no scalar completion within bound {top}")
        residuals.extend(serialize.report_doc(gauge.completion_residuals(completion)))
    else:
        series = solve_integer(cfg.r, cfg.order, central)
    obs = gauge.obstructions(series, completion)
    frob = gauge.frobenius_verify(obs)
    certificate = gauge.lstar_certificate(obs)
    cert_ok = certificate.is_zero_on_window()
    decomp = gauge.integrate_potential(obs)
    applied = gauge.apply_gauge_and_verify(series, decomp, completion, obs=obs)
    residuals.extend(serialize.report_doc(frob))
    residuals.append({"relation": "top frame row certificate",
                      "window": gauge.window_str(certificate),
                      "status": "ok" if cert_ok else "fail"})
    residuals.extend(serialize.report_doc(applied))
    table = series.table
    gauge_doc = {
        "a": [serialize.truncated_doc(a) for a in obs.a],
        "g0": poly_terms(decomp.g0),
        "nu": [{"j": j, "poly": poly_terms(decomp.nu[j])} for j in sorted(decomp.nu)],
        "passives": list(decomp.passives),
        "sigma": None,
    }
    if completion is not None:
        gauge_doc["sigma"] = {
            "bound": completion.bound,
            "scalars": [poly_terms(sigma.migrate(table))
                        for sigma in completion.sigma],
        }
    ok = frob.all_ok and cert_ok and applied.all_ok
    doc = {
        "meta": _meta(cfg, series.ctx.c_vir),
        "variables": _header(table),
        "gauge": gauge_doc,
        "residuals": residuals,
    }
    return (0 if ok else 1), doc


HANDLERS = {
    "construct": _cmd_construct,
    "verify": _cmd_verify,
    "frames": _cmd_frames,
    "gram": _cmd_gram,
    "gauge": _cmd_gauge,
}


# ----- rendering ----------------------------------------------------------------


def _is_terms(node: object) -> bool:
    return (isinstance(node, list) and bool(node)
            and all(isinstance(item, dict) and set(item) == {"e", "n", "d"}
                    for item in node))


def _poly_text(table: VarTable | None, terms: list) -> str:
    if not terms:
        return "0"
    if table is None or any(len(item["e"]) != len(table) for item in terms):
        return json.dumps(terms, sort_keys=True)
    return str(serialize.poly_from_terms(table, terms))


def _scalar_text(table: VarTable | None, node: object) -> str | None:
    """Render leaf nodes: term lists, coefficient pairs, plain scalars."""
    if node is None or isinstance(node, (bool, int, str)):
        return str(node)
    if node == []:
        return "[]"
    if _is_terms(node):
        return _poly_text(table, node)
    if isinstance(node, dict) and set(node) == {"num", "den"}:
        num = _poly_text(table, node["num"])
        den = _poly_text(table, node["den"])
        return num if den == "1" else f"({num}) / ({den})"
    if isinstance(node, dict) and set(node) == {"n", "d"}:
        return str(Fraction(node["n"], node["d"]))
    return None


def _render_lines(node: object, table: VarTable | None, indent: int,
                  lines: list[str]) -> None:
    pad = "  " * indent
    if isinstance(node, dict):
        for key, value in node.items():
            if key == "relation" and set(node) >= {"relation", "window", "status"}:
                lines.append(f"{pad}{node['status']:4} {node['relation']}"
                             f" [{node['window']}]")
                return
            label = key if key else "u"
            leaf = _scalar_text(table, value)
            if leaf is not None:
                lines.append(f"{pad}{label}: {leaf}")
            else:
                lines.append(f"{pad}{label}:")
                _render_lines(value, table, indent + 1, lines)
        return
    if isinstance(node, list):
        for index, item in enumerate(node):
            leaf = _scalar_text(table, item)
            if leaf is not None:
                lines.append(f"{pad}[{index}] {leaf or 'u'}")
            else:
                lines.append(f"{pad}[{index}]")
                _render_lines(item, table, indent + 1, lines)
        return
    lines.append(f"{pad}{node!r}")


def render_text(doc: dict) -> str:
    """Human-readable rendering of the same report tree as the JSON form."""
    table: VarTable | None = None
    header = doc.get("variables")
    if (isinstance(header, dict) and isinstance(header.get("names"), list)
            and isinstance(header.get("weights"), list)):
        table = VarTable(tuple(header["names"]), tuple(header["weights"]))
    lines: list[str] = []
    _render_lines(doc, table, 0, lines)
    return "\n".join(lines) + "\n"


def _emit(cfg: RunConfig, doc: dict) -> None:
    text = serialize.dumps(doc) if cfg.fmt == "json" else render_text(doc)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _config(parser, args)
    try:
        code, doc = HANDLERS[cfg.command](cfg)
    except (RingError, SolverError, gauge.GaugeError, SerializeError,
            json.JSONDecodeError, OSError) as exc:
        code = 1
        doc = {"meta": _meta(cfg), "error": {"type": type(exc).__name__,
                                             "message": str(exc)}}
    _emit(cfg, doc)
    return code


if __name__ == "__main__":
    sys.exit(main())
