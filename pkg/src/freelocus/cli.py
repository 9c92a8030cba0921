"""Command-line front-end.

Subcommand groups mirror the library: pencil, algebra, rat, orbit.  Verdicts
never ride the exit code; exit codes mark operational failures only
(2 parse/format, 3 precondition, 4 budget, 1 internal invariant violation).
Identical argv and inputs produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import jsonio
from .algebra import lambda_bound, radical, wedderburn_components, word_span
from .errors import (
    BudgetExceeded,
    InvariantViolation,
    NotFullMatrixAlgebra,
    NotRegularAtZero,
    NotSameFunction,
    ParseError,
)
from .invariants import det_generic_check, lyndon_words, same_orbit_closure, trace_fingerprint
from .linalg import det
from .ncrat import (
    domain_compare,
    domain_decompose,
    eval_ast,
    eval_realization,
    minimize,
    parse as parse_expr,
    realize,
    rewrite_in_atoms,
    to_polynomial,
)
from .pencil import (
    in_locus,
    kippenhahn_witness,
    locus_components,
    locus_inclusion,
    pencil_reduce,
)
from .scalars import QQ, format_scalar, normalize_field
from .words import NcPolynomial

_EXIT_OK = 0
_EXIT_INTERNAL = 1
_EXIT_FORMAT = 2
_EXIT_PRECONDITION = 3
_EXIT_BUDGET = 4


def _common_flags(sub):
    sub.add_argument("--field", default="qq", help="base field: qq or qqi")
    sub.add_argument("--seed", type=int, default=0, help="seed for randomized searches")
    sub.add_argument("--trials", type=int, default=100, help="trial count for sampling checks")
    sub.add_argument("--max-size", type=int, default=8, dest="max_size",
                     help="cap on matrix sizes in searches")
    sub.add_argument("--format", default="json", choices=("json", "text"))
    sub.add_argument("--certificate", default=None,
                     help="also write the result object to this path")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="freelocus",
        description="Exact computations with free loci of monic matrix pencils "
                    "and noncommutative rational functions.",
    )
    groups = parser.add_subparsers(dest="group", required=True)

    pencil = groups.add_parser("pencil").add_subparsers(dest="command", required=True)
    for name, flags in (
        ("eval", ("--pencil", "--point")),
        ("member", ("--pencil", "--point")),
        ("compare", ("--left", "--right")),
        ("components", ("--pencil",)),
        ("reduce", ("--pencil",)),
        ("kippenhahn", ("--pencil",)),
    ):
        sub = pencil.add_parser(name)
        for flag in flags:
            sub.add_argument(flag, required=True)
        _common_flags(sub)

    algebra = groups.add_parser("algebra").add_subparsers(dest="command", required=True)
    for name in ("basis", "radical", "components"):
        sub = algebra.add_parser(name)
        sub.add_argument("--tuple", required=True, dest="tuple_path")
        _common_flags(sub)

    rat = groups.add_parser("rat").add_subparsers(dest="command", required=True)
    for name, flags in (
        ("parse", ("--expr",)),
        ("realize", ("--expr",)),
        ("minimize", ("--expr",)),
        ("eval", ("--expr", "--point")),
        ("domain", ("--expr",)),
        ("compare", ("--expr1", "--expr2")),
        ("poly", ("--expr",)),
        ("atoms", ("--expr",)),
    ):
        sub = rat.add_parser(name)
        for flag in flags:
            sub.add_argument(flag, required=True)
        _common_flags(sub)

    orbit = groups.add_parser("orbit").add_subparsers(dest="command", required=True)
    for name, flags in (
        ("fingerprint", ("--tuple",)),
        ("compare", ("--left", "--right")),
        ("detcheck", ("--left", "--right")),
    ):
        sub = orbit.add_parser(name)
        for flag in flags:
            dest = "tuple_path" if flag == "--tuple" else None
            if dest:
                sub.add_argument(flag, required=True, dest=dest)
            else:
                sub.add_argument(flag, required=True)
        _common_flags(sub)

    return parser


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON in {path}: {exc}") from exc


def _render_text(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key in sorted(obj):
            val = obj[key]
            if isinstance(val, (dict, list)):
                lines.append(f"{pad}{key}:")
                lines.extend(_render_text(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {val}")
    elif isinstance(obj, list):
        for val in obj:
            if isinstance(val, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_render_text(val, indent + 1))
            else:
                lines.append(f"{pad}- {val}")
    else:
        lines.append(f"{pad}{obj}")
    return lines


def _emit(args, command, result):
    report = {
        "command": command,
        "config": {
            "field": normalize_field(args.field),
            "seed": args.seed,
            "trials": args.trials,
            "max_size": args.max_size,
        },
        "result": result,
    }
    if args.format == "json":
        sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(_render_text(report)) + "\n")
    if args.certificate:
        with open(args.certificate, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(result, sort_keys=True, indent=2) + "\n")
    return _EXIT_OK


def _run_pencil(args):
    field = normalize_field(args.field)
    cmd = args.command
    if cmd in ("eval", "member"):
        pencil = jsonio.pencil_from_json(_load_json(args.pencil), field)
        point = jsonio.tuple_from_json(_load_json(args.point), field)
        if cmd == "eval":
            value = pencil.evaluate(point)
            result = {
                "matrix": jsonio.matrix_to_json(value),
                "det": format_scalar(det(value)),
            }
        else:
            k = in_locus(pencil, point)
            result = {"kernel_dim": k, "member": k >= 1}
        return _emit(args, f"pencil.{cmd}", result)
    if cmd == "compare":
        left = jsonio.pencil_from_json(_load_json(args.left), field)
        right = jsonio.pencil_from_json(_load_json(args.right), field)
        fwd = locus_inclusion(left, right, seed=args.seed)
        bwd = locus_inclusion(right, left, seed=args.seed)
        if fwd.holds and bwd.holds:
            relation = "equal"
        elif fwd.holds:
            relation = "left_in_right"
        elif bwd.holds:
            relation = "right_in_left"
        else:
            relation = "incomparable"
        result = {
            "relation": relation,
            "left_in_right": jsonio.verdict_to_json(fwd),
            "right_in_left": jsonio.verdict_to_json(bwd),
        }
        return _emit(args, "pencil.compare", result)
    if cmd == "components":
        pencil = jsonio.pencil_from_json(_load_json(args.pencil), field)
        comps = locus_components(pencil, field, seed=args.seed)
        result = {"components": [jsonio.pencil_to_json(c) for c in comps]}
        return _emit(args, "pencil.components", result)
    if cmd == "reduce":
        pencil = jsonio.pencil_from_json(_load_json(args.pencil), field)
        reduced = pencil_reduce(pencil, field, seed=args.seed)
        result = {
            "pencil": jsonio.pencil_to_json(reduced),
            "size": reduced.size,
            "minimality_note": "sizes use regular representations; not "
                               "guaranteed minimal over a non-closed base field",
        }
        return _emit(args, "pencil.reduce", result)
    if cmd == "kippenhahn":
        pencil = jsonio.pencil_from_json(_load_json(args.pencil), field)
        point = kippenhahn_witness(pencil)
        return _emit(args, "pencil.kippenhahn", jsonio.point_to_json(point))
    raise InvariantViolation(f"unknown pencil command {cmd}")


def _run_algebra(args):
    field = normalize_field(args.field)
    mats = jsonio.tuple_from_json(_load_json(args.tuple_path), field)
    basis = word_span(mats)
    if args.command == "basis":
        result = {
            "dimension": basis.dim,
            "words": [list(w) for w in basis.words],
            "stabilization_length": basis.length,
            "length_bound": lambda_bound(max(basis.size, 1)),
            "contains_identity": basis.contains_identity,
            "unit": jsonio.matrix_to_json(basis.unit) if basis.unit else None,
        }
        return _emit(args, "algebra.basis", result)
    rad = radical(basis)
    if args.command == "radical":
        result = {
            "radical_dimension": len(rad.radical_basis),
            "radical_basis": [jsonio.matrix_to_json(m) for m in rad.radical_basis],
            "quotient_dimension": rad.quotient_dim,
            "quotient_words": [list(w) for w, _ in rad.quotient_words],
        }
        return _emit(args, "algebra.radical", result)
    comps = wedderburn_components(basis, rad, field, seed=args.seed)
    result = {
        "components": [
            {
                "index": c.index,
                "dimension": c.dimension,
                "central_idempotent": [format_scalar(x) for x in c.central_idempotent],
                "regular_generators": [jsonio.matrix_to_json(m)
                                       for m in c.regular_generators],
            }
            for c in comps
        ]
    }
    return _emit(args, "algebra.components", result)


def _run_rat(args):
    field = normalize_field(args.field)
    cmd = args.command
    if cmd == "compare":
        ast1 = parse_expr(args.expr1)
        ast2 = parse_expr(args.expr2)
        g = max(1, _ast_vars(ast1), _ast_vars(ast2))
        r1 = minimize(realize(ast1, nvars=g))
        r2 = minimize(realize(ast2, nvars=g))
        cmpres = domain_compare(r1, r2, seed=args.seed)
        result = {
            "relation": cmpres.relation,
            "left_in_right": jsonio.verdict_to_json(cmpres.left_in_right),
            "right_in_left": jsonio.verdict_to_json(cmpres.right_in_left),
        }
        return _emit(args, "rat.compare", result)
    ast = parse_expr(args.expr)
    if cmd == "parse":
        return _emit(args, "rat.parse", {"ast": _ast_to_json(ast)})
    if cmd == "eval":
        point = jsonio.tuple_from_json(_load_json(args.point), field)
        value = eval_ast(ast, point)
        result = {
            "defined": value is not None,
            "value": jsonio.matrix_to_json(value) if value is not None else None,
        }
        return _emit(args, "rat.eval", result)
    r = realize(ast)
    if cmd == "realize":
        return _emit(args, "rat.realize", {
            "realization": jsonio.realization_to_json(r),
            "size": r.size,
        })
    m = minimize(r)
    if cmd == "minimize":
        return _emit(args, "rat.minimize", {
            "realization": jsonio.realization_to_json(m),
            "size": m.size,
        })
    if cmd == "domain":
        dd = domain_decompose(m, field, seed=args.seed)
        result = {
            "components": [jsonio.pencil_to_json(p) for p in dd.component_pencils],
            "atoms": [
                [[jsonio.realization_to_json(a) for a in row] for row in table]
                for table in dd.atoms
            ],
        }
        return _emit(args, "rat.domain", result)
    if cmd == "poly":
        poly, point = to_polynomial(m, seed=args.seed)
        d = m.size
        result = {
            "polynomial": jsonio.ncpoly_to_json(poly) if poly is not None else None,
            "witness_locus_point": jsonio.point_to_json(point) if point else None,
            "regularity_test_sizes": {
                "algebraically_closed": lambda_bound(max(d, 1)),
                "real_closed": 2 * lambda_bound(max(d, 1)),
                "general": d * lambda_bound(max(d, 1)) ** 2,
            },
        }
        return _emit(args, "rat.poly", result)
    if cmd == "atoms":
        ap = rewrite_in_atoms(m)
        result = {
            "nvars": ap.nvars,
            "size": ap.size,
            "letter_degree": ap.letter_degree(),
            "atom_degree": ap.atom_degree(),
            "semisimple_parts": [jsonio.matrix_to_json(s) for s in ap.semisimple_parts],
            "terms": [
                {"word": list(w), "coeff": format_scalar(c)}
                for w, c in sorted(ap.terms.items())
            ],
        }
        return _emit(args, "rat.atoms", result)
    raise InvariantViolation(f"unknown rat command {cmd}")


def _ast_vars(ast):
    from .ncrat import max_var

    return max_var(ast)


def _ast_to_json(ast):
    from .ncrat import Const, Inv, Neg, Prod, Sum, Var

    if isinstance(ast, Const):
        return {"const": format_scalar(ast.value)}
    if isinstance(ast, Var):
        return {"var": ast.index}
    if isinstance(ast, Sum):
        return {"sum": [_ast_to_json(c) for c in ast.children]}
    if isinstance(ast, Prod):
        return {"product": [_ast_to_json(c) for c in ast.children]}
    if isinstance(ast, Neg):
        return {"neg": _ast_to_json(ast.child)}
    if isinstance(ast, Inv):
        return {"inv": _ast_to_json(ast.child)}
    raise InvariantViolation(f"unknown AST node {ast!r}")


def _run_orbit(args):
    field = normalize_field(args.field)
    if args.command == "fingerprint":
        mats = jsonio.tuple_from_json(_load_json(args.tuple_path), field)
        fp = trace_fingerprint(mats)
        return _emit(args, "orbit.fingerprint", jsonio.fingerprint_to_json(fp))
    left = jsonio.tuple_from_json(_load_json(args.left), field)
    right = jsonio.tuple_from_json(_load_json(args.right), field)
    if args.command == "compare":
        same = same_orbit_closure(left, right)
        return _emit(args, "orbit.compare", {"same_orbit_closure": same})
    from .pencil import MonicPencil

    agree = det_generic_check(
        MonicPencil(left), MonicPencil(right),
        trials=args.trials, seed=args.seed, max_size=args.max_size,
    )
    return _emit(args, "orbit.detcheck", {"agrees": agree})


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return _EXIT_FORMAT if exc.code not in (0, None) else 0
    try:
        if args.group == "pencil":
            return _run_pencil(args)
        if args.group == "algebra":
            return _run_algebra(args)
        if args.group == "rat":
            return _run_rat(args)
        if args.group == "orbit":
            return _run_orbit(args)
        raise InvariantViolation(f"unknown group {args.group}")
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return _EXIT_FORMAT
    except (NotRegularAtZero, NotFullMatrixAlgebra, NotSameFunction, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return _EXIT_PRECONDITION
    except BudgetExceeded as exc:
        sys.stderr.write(f"error: {exc}\n")
        return _EXIT_BUDGET
    except InvariantViolation as exc:
        sys.stderr.write(f"internal invariant violation: {exc}\n")
        return _EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
