"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 parse or model-file error,
3 a check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from .coeff_algebra import MatrixModel
from .config import ModelConfigError, default_model, load_document, model_from_document, suite_config_from_document
from .derivation import fdq
from .errors import NCPError
from .parser import ParseContext, ParseError, format_canonical, format_tensor, parse
from .verifier import CheckReport, check_kernel, check_lemma4_bounds, check_poincare, check_telescoping, run_suite

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_CHECK = 3


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with status 2
        raise UsageError(message)


def dump_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _write_report(path: str | None, data: Any) -> None:
    if path:
        Path(path).write_text(dump_json(data), encoding="utf-8")


def _load(args: argparse.Namespace):
    if args.model:
        doc = load_document(args.model)
        model, coefficients = model_from_document(doc)
    else:
        model, coefficients = default_model()
    if args.tolerance is not None:
        model = MatrixModel(model.coeff_algebra, model.X, args.tolerance)
    return model, ParseContext(model.coeff_algebra, coefficients)


def _poly(args: argparse.Namespace, ctx: ParseContext):
    if args.poly is None:
        raise UsageError("--poly is required for this command")
    return parse(args.poly, ctx)


def _emit_check(report: CheckReport, args: argparse.Namespace) -> int:
    status = "PASS" if report.passed else "FAIL"
    print(
        f"{report.check_name}: {status} lhs={report.lhs!r} rhs={report.rhs!r} "
        f"margin={report.margin!r} residual={report.residual!r} "
        f"representation={report.representation_used}"
    )
    _write_report(args.report, report.to_dict())
    return EXIT_OK if report.passed else EXIT_CHECK


def cmd_fdq(args: argparse.Namespace) -> int:
    _, ctx = _load(args)
    print(format_tensor(fdq(_poly(args, ctx))))
    return EXIT_OK


def cmd_print_canonical(args: argparse.Namespace) -> int:
    _, ctx = _load(args)
    print(format_canonical(_poly(args, ctx)))
    return EXIT_OK


def cmd_check_identity(args: argparse.Namespace) -> int:
    model, ctx = _load(args)
    return _emit_check(check_telescoping(_poly(args, ctx), model), args)


def cmd_check_poincare(args: argparse.Namespace) -> int:
    model, ctx = _load(args)
    return _emit_check(check_poincare(_poly(args, ctx), model, args.variant), args)


def cmd_check_kernel(args: argparse.Namespace) -> int:
    _, ctx = _load(args)
    return _emit_check(check_kernel(_poly(args, ctx)), args)


def cmd_check_lemma4(args: argparse.Namespace) -> int:
    model, ctx = _load(args)
    R = args.R if args.R is not None else 2.0 * model.x_op
    if R <= model.x_op:
        raise UsageError(f"--R must exceed ||X|| = {model.x_op!r}")
    return _emit_check(check_lemma4_bounds(_poly(args, ctx), R, model), args)


def cmd_suite(args: argparse.Namespace) -> int:
    doc = load_document(args.model) if args.model else None
    overrides = {"trials": args.trials, "seed": args.seed, "tolerance": args.tolerance, "workers": args.workers}
    config = suite_config_from_document(doc, overrides)
    report = run_suite(config)
    summary = report["summary"]
    print(
        f"suite: {'PASS' if summary['pass'] else 'FAIL'} trials={summary['trials']} "
        f"checks={summary['checks']} failures={summary['failures']} skipped={summary['skipped']} "
        f"min_margin={summary['min_margin']!r} max_residual={summary['max_residual']!r}"
    )
    _write_report(args.report, report)
    return EXIT_OK if summary["pass"] else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="ncpoincare", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_ArgumentParser)

    def add(name: str, func, help_text: str, poly: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--model", help="model/suite JSON document")
        p.add_argument("--tolerance", type=float, help="override the model tolerance")
        p.add_argument("--report", help="write a JSON report here")
        if poly:
            p.add_argument("--poly", help="polynomial expression, e.g. \"b0*X*b1 + 2*X^2\"")
        p.set_defaults(func=func)
        return p

    add("fdq", cmd_fdq, "print the free difference quotient")
    add("print-canonical", cmd_print_canonical, "print the canonical word-basis form")
    add("check-identity", cmd_check_identity, "check the telescoping identity")
    p = add("check-poincare", cmd_check_poincare, "check the Poincare inequality")
    p.add_argument("--variant", choices=("l2", "op"), default="l2")
    p = add("check-lemma4", cmd_check_lemma4, "check the radius-R norm bounds")
    p.add_argument("--R", type=float, help="radius (default 2*||X||)")
    add("check-kernel", cmd_check_kernel, "check the formal kernel statement")
    p = add("suite", cmd_suite, "run the seeded verification suite", poly=False)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ModelConfigError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NCPError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
