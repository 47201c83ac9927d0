"""Command-line interface.

Commands: expand, integrate, prob, check, decompose, gen.  Global flags
--cap (expansion variable cap) and --format (json or table) may appear
before or after the subcommand.  Exit codes: 0 ok, 1 failed verdict,
2 parse/validation error, 3 expansion cap exceeded, 4 empty integration,
5 probabilistic-constraint violation, 6 not recognized as integrated.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .decompose import enumerate_pairs
from .documents import document_of, load_document
from .errors import (
    EmptyIntegration,
    ExpansionTooLarge,
    MissingVarProb,
    NotIntegrated,
    NoValidAssignment,
    ParseError,
    ProbConstraintViolation,
    UnboundVariable,
    ValidationError,
)
from .gen import gen_consistent_pw_pair, gen_pr_pair
from .logic import DEFAULT_VAR_CAP, to_text
from .prdb import (
    EprRelation,
    PrRelation,
    expand_epr,
    expand_pr,
    integrate_pr,
)
from .probcalc import epr_distribution
from .pwdb import (
    UncertainDB,
    check_prob_constraints,
    compatibility_graph,
    format_tuple,
    format_world,
    integrate_pw,
    integrate_pw_prob,
    validate_udb,
)

EXIT_OK = 0
EXIT_VERDICT_FAILED = 1
EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_EMPTY = 4
EXIT_UNBALANCED = 5
EXIT_NOT_INTEGRATED = 6


def _build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--cap", type=int, default=argparse.SUPPRESS,
        help="variable cap for expansions (default 20)",
    )
    shared.add_argument(
        "--format", choices=("json", "table"), default=argparse.SUPPRESS,
        help="output rendering (default table)",
    )
    parser = argparse.ArgumentParser(
        prog="udbi",
        description="Integrate uncertain databases and compute exact distributions.",
    )
    parser.add_argument("--cap", type=int, default=DEFAULT_VAR_CAP)
    parser.add_argument("--format", choices=("json", "table"), default="table")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[shared],
                       help="expand a relation or database to its worlds")
    p.add_argument("input")
    p.add_argument("--worlds-only", action="store_true",
                   help="list worlds without probabilities")
    p.add_argument("--out", help="write the result document to a file")

    p = sub.add_parser("integrate", parents=[shared], help="integrate two sources")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--model", choices=("pw", "pr"), required=True)
    p.add_argument("--out", help="write the result document to a file")

    p = sub.add_parser("prob", parents=[shared],
                       help="exact distribution of an integrated relation")
    p.add_argument("input")
    p.add_argument("--out", help="write the result document to a file")

    p = sub.add_parser("check", parents=[shared],
                       help="probabilistic-constraint and consistency checks")
    p.add_argument("a")
    p.add_argument("b", nargs="?")
    p.add_argument("--out", help="write the result document to a file")

    p = sub.add_parser("decompose", parents=[shared],
                       help="recover source pairs from an integrated relation")
    p.add_argument("input")
    p.add_argument("--all", action="store_true", help="emit every pair")
    p.add_argument("--limit", type=int, help="emit at most this many pairs")
    p.add_argument("--out", help="write the result document to a file")

    p = sub.add_parser("gen", parents=[shared], help="generate a random source pair")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--model", choices=("pr", "pw"), default="pr")
    p.add_argument("--max-tuples", type=int, default=4)
    p.add_argument("--max-vars", type=int, default=3)
    p.add_argument("--max-depth", type=int, default=2)
    p.add_argument("--overlap", type=float, default=0.6)
    p.add_argument("--out", help="write the result document to a file")
    return parser


# --- rendering helpers ---------------------------------------------------------

def _decimal(p: Fraction) -> str:
    return f"{p.numerator / p.denominator:.6f}"


def _distribution_table(worlds, probs) -> str:
    names = [format_world(w) for w in worlds]
    width = max([len(n) for n in names] + [5])
    lines = []
    if probs is None:
        lines.append("WORLD")
        lines.extend(names)
    else:
        frs = [str(p) for p in probs]
        fw = max([len(f) for f in frs] + [4])
        lines.append(f"{'WORLD':<{width}}  {'PROB':<{fw}}  DECIMAL")
        for name, p, fr in zip(names, probs, frs):
            lines.append(f"{name:<{width}}  {fr:<{fw}}  {_decimal(p)}")
        total = sum(probs, Fraction(0))
        lines.append(f"{'TOTAL':<{width}}  {str(total):<{fw}}  {_decimal(total)}")
    return "\n".join(lines)


def _relation_table(rel) -> str:
    lines = ["rows:"]
    lines.extend(f"  {format_tuple(row.tuple)} @ {to_text(row.event)}" for row in rel.rows)
    if isinstance(rel, EprRelation) and rel.constraints:
        lines.append("constraints:")
        lines.extend(
            f"  {to_text(lhs)}  =  {to_text(rhs)}" for lhs, rhs in rel.constraints
        )
    if rel.var_probs:
        lines.append("var_probs:")
        lines.extend(
            f"  {name} = {rel.var_probs[name]}" for name in sorted(rel.var_probs)
        )
    return "\n".join(lines)


def _udb_table(u: UncertainDB) -> str:
    return _distribution_table(u.worlds, u.probs)


def _component_doc(summary, reason=None) -> dict:
    doc = {
        "left": list(summary.left),
        "right": list(summary.right),
        "left_sum": str(summary.left_sum),
        "right_sum": str(summary.right_sum),
        "balanced": summary.balanced,
    }
    if summary.balanced:
        doc["constant"] = str(summary.constant)
    if reason is not None:
        doc["violation"] = reason
    return doc


def _component_lines(checks) -> list[str]:
    lines = ["components:"]
    for k, (summary, reason) in enumerate(checks):
        left = ",".join(map(str, summary.left)) or "-"
        right = ",".join(map(str, summary.right)) or "-"
        verdict = (
            f"P={summary.constant} balanced" if summary.balanced else "UNBALANCED"
        )
        lines.append(
            f"  {k}: left=[{left}] right=[{right}] "
            f"left_sum={summary.left_sum} right_sum={summary.right_sum} {verdict}"
        )
        if reason is not None:
            lines.append(f"     {reason}")
    return lines


def _emit(args, doc, table: str) -> None:
    """Print the table or the JSON document; --out always writes the document."""
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(json.dumps(doc, indent=2) + "\n")
    elif args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        print(table)


def _emit_value(args, value) -> None:
    table = _udb_table(value) if isinstance(value, UncertainDB) else _relation_table(value)
    _emit(args, document_of(value), table)


# --- commands -------------------------------------------------------------------

def _cmd_expand(args) -> int:
    value = load_document(args.input)
    if isinstance(value, UncertainDB):
        report = validate_udb(value)
        if report:
            raise ValidationError(report)
        expanded = value
    elif isinstance(value, EprRelation):
        worlds = [w for w, _ in expand_epr(value, args.cap)]
        expanded = UncertainDB(value.tuples(), tuple(worlds))
    else:
        udb, _ = expand_pr(value, args.cap)
        expanded = udb
    if args.worlds_only and expanded.probs is not None:
        expanded = UncertainDB(expanded.tuple_set, expanded.worlds)
    _emit_value(args, expanded)
    return EXIT_OK


def _cmd_integrate(args) -> int:
    a = load_document(args.a)
    b = load_document(args.b)
    if args.model == "pw":
        if not (isinstance(a, UncertainDB) and isinstance(b, UncertainDB)):
            raise ValidationError("--model pw needs two pw documents")
        if a.probs is not None and b.probs is not None:
            result = integrate_pw_prob(a, b)
        else:
            result = integrate_pw(a, b)
    else:
        if not (isinstance(a, PrRelation) and isinstance(b, PrRelation)):
            raise ValidationError("--model pr needs two pr documents")
        result = integrate_pr(a, b)
    _emit_value(args, result)
    return EXIT_OK


def _as_epr(value) -> EprRelation:
    if isinstance(value, EprRelation):
        return value
    if isinstance(value, PrRelation):
        return EprRelation(value.rows, (), value.var_probs)
    raise ValidationError("this command needs a pr or epr document")


def _cmd_prob(args) -> int:
    q = _as_epr(load_document(args.input))
    result = epr_distribution(q, args.cap)
    worlds = tuple(w for w, _ in result.distribution)
    probs = tuple(p for _, p in result.distribution)
    doc = {
        "distribution": document_of(UncertainDB(q.tuples(), worlds, probs)),
        "components": [_component_doc(c) for c in result.components],
        "pair": {
            "r": document_of(result.pair_used.r),
            "s": document_of(result.pair_used.s),
        },
    }
    lines = [_distribution_table(worlds, probs)]
    lines.extend(_component_lines([(c, None) for c in result.components]))
    lines.append("pair r:")
    lines.extend("  " + line for line in _relation_table(result.pair_used.r).splitlines())
    lines.append("pair s:")
    lines.extend("  " + line for line in _relation_table(result.pair_used.s).splitlines())
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


def _to_udb(value, cap: int) -> UncertainDB:
    if isinstance(value, UncertainDB):
        report = validate_udb(value)
        if report:
            raise ValidationError(report)
        return value
    if isinstance(value, EprRelation):
        raise ValidationError("check between two sources takes pw or pr documents")
    udb, _ = expand_pr(value, cap)
    return udb


def _cmd_check(args) -> int:
    if args.b is None:
        return _check_single(args)
    u1 = _to_udb(load_document(args.a), args.cap)
    u2 = _to_udb(load_document(args.b), args.cap)
    graph = compatibility_graph(u1, u2)
    complete = graph.is_complete_bipartite()
    have_probs = u1.probs is not None and u2.probs is not None
    checks = check_prob_constraints(u1, u2, graph) if have_probs else None
    balanced = None if checks is None else all(r is None for _, r in checks)
    doc = {
        "complete_bipartite": complete,
        "balanced": balanced,
        "components": None
        if checks is None
        else [_component_doc(c, r) for c, r in checks],
    }
    lines = []
    if checks is None:
        lines.append("components:")
        lines.extend(
            f"  {k}: left=[{','.join(map(str, left)) or '-'}]"
            f" right=[{','.join(map(str, right)) or '-'}]"
            for k, (left, right) in enumerate(graph.components)
        )
        lines.append("balance: not checked (sources carry no probabilities)")
    else:
        lines.extend(_component_lines(checks))
        lines.append("balance: ok" if balanced else "balance: VIOLATED")
    lines.append(f"complete-bipartite: {'yes' if complete else 'NO'}")
    _emit(args, doc, "\n".join(lines))
    if balanced is False:
        return EXIT_UNBALANCED
    return EXIT_OK if complete else EXIT_VERDICT_FAILED


def _check_single(args) -> int:
    from .probcalc import cross_check

    q = _as_epr(load_document(args.a))
    result = epr_distribution(q, args.cap)
    agreed = cross_check(q, cap=args.cap)
    doc = {
        "components": [_component_doc(c) for c in result.components],
        "cross_check": agreed,
    }
    lines = _component_lines([(c, None) for c in result.components])
    lines.append(f"cross-check: {'ok' if agreed else 'FAILED'}")
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK if agreed else EXIT_VERDICT_FAILED


def _cmd_decompose(args) -> int:
    q = _as_epr(load_document(args.input))
    if args.all:
        limit = args.limit
    else:
        limit = 1 if args.limit is None else args.limit
    pairs = enumerate_pairs(q, limit)
    doc = {
        "pairs": [{"r": document_of(p.r), "s": document_of(p.s)} for p in pairs]
    }
    lines = []
    for i, p in enumerate(pairs):
        lines.append(f"pair {i} r:")
        lines.extend("  " + line for line in _relation_table(p.r).splitlines())
        lines.append(f"pair {i} s:")
        lines.extend("  " + line for line in _relation_table(p.s).splitlines())
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


def _cmd_gen(args) -> int:
    if not 1 <= args.max_tuples <= 8:
        raise ValidationError("--max-tuples must be between 1 and 8")
    if not 1 <= args.max_vars <= 4:
        raise ValidationError("--max-vars must be between 1 and 4")
    if not 0 <= args.max_depth <= 3:
        raise ValidationError("--max-depth must be between 0 and 3")
    if not 0 <= args.overlap <= 1:
        raise ValidationError("--overlap must be between 0 and 1")
    if args.model == "pr":
        a, b = gen_pr_pair(
            args.seed,
            max_tuples=args.max_tuples,
            max_vars=args.max_vars,
            max_depth=args.max_depth,
            overlap=args.overlap,
        )
    else:
        a, b = gen_consistent_pw_pair(
            args.seed, max_common=min(args.max_tuples, 4)
        )
    doc = {"a": document_of(a), "b": document_of(b)}
    render = _udb_table if isinstance(a, UncertainDB) else _relation_table
    lines = ["source a:"]
    lines.extend("  " + line for line in render(a).splitlines())
    lines.append("source b:")
    lines.extend("  " + line for line in render(b).splitlines())
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


_COMMANDS = {
    "expand": _cmd_expand,
    "integrate": _cmd_integrate,
    "prob": _cmd_prob,
    "check": _cmd_check,
    "decompose": _cmd_decompose,
    "gen": _cmd_gen,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ParseError, ValidationError, UnboundVariable, MissingVarProb) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except ExpansionTooLarge as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CAP
    except (EmptyIntegration, NoValidAssignment) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_EMPTY
    except ProbConstraintViolation as err:
        print("error: probabilistic constraints violated", file=sys.stderr)
        for _, reason in err.failures:
            print(f"  {reason}", file=sys.stderr)
        return EXIT_UNBALANCED
    except NotIntegrated as err:
        print(f"error: not recognized as integrated: {err}", file=sys.stderr)
        return EXIT_NOT_INTEGRATED


if __name__ == "__main__":
    sys.exit(main())
