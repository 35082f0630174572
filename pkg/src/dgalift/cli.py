"""Batch command-line front end.

Every command reads structured documents, computes, re-verifies whatever
it claims, and prints a JSON transcript on standard output; diagnostics go
to standard error.  Exit codes: 0 success, 1 bad input, 2 a verification
failed, 3 the search was inconclusive at the requested bound.
"""

from __future__ import annotations

import argparse
import sys
import time

from .algebra import derivative, diff, format_expr, is_cycle, tate_adjoin
from .errors import DgaliftError, VerificationError
from .field import field_from_spec
from .io import (
    dump_canonical,
    file_digest,
    load_json,
    matrix_to_doc,
    module_from_doc,
    module_to_doc,
    signature_from_doc,
    signature_to_doc,
)
from .jop import JOperator
from .lift import (
    construct_lift_even,
    construct_lift_odd,
    decide_naive_lift,
    obstruction,
    verify_lift,
)
from .module import bracket_diff
from .selftest import run_selftest
from .tensor import NaiveTensor, odd_ses, verify_splitting

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERIFY = 2
EXIT_INCONCLUSIVE = 3


class Inconclusive(DgaliftError):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dgalift",
        description=(
            "Exact calculus in graded-commutative DG algebra extensions: "
            "differentials, basis derivations, lifting obstructions, and "
            "constructive lifts of free DG modules."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, *, sig=True, mod=False, var=False, bound=False, expr=False):
        p = sub.add_parser(name, help=help_text)
        if sig:
            p.add_argument("--sig", required=True, help="signature document (JSON)")
        if mod == "required":
            p.add_argument("--mod", required=True, help="module document (JSON)")
        elif mod:
            p.add_argument("--mod", help="module document (JSON)")
        if var == "required":
            p.add_argument("--var", required=True, help="adjoined variable name")
        elif var:
            p.add_argument("--var", help="adjoined variable name (default: top)")
        if bound:
            p.add_argument(
                "--bound", type=int, default=3, help="polygen-degree search bound"
            )
        if expr:
            p.add_argument("expr", help="expression text over the signature")
        return p

    add("validate", "check signature and optional module invariants", mod=True)
    add("eval", "normalize an expression", expr=True)
    add("diff", "apply the algebra differential to an expression", expr=True)
    add("derive", "apply the derivative by a variable", var="required", expr=True)
    add("jop", "the basis derivative of the module differential", mod="required", var=True)
    add(
        "obstruct",
        "the lifting obstruction matrix with its cycle check",
        mod="required",
        var=True,
    )
    add(
        "naive",
        "semi-decide obstruction vanishing at a bound",
        mod="required",
        var=True,
        bound=True,
    )
    add(
        "lift",
        "construct and verify a lift from a found certificate",
        mod="required",
        var=True,
        bound=True,
    )
    p = add("tate", "adjoin a variable killing a cycle")
    p.add_argument("--name", required=True, help="name for the new variable")
    p.add_argument("--degree", type=int, required=True, help="degree of the new variable")
    p.add_argument("--cycle", required=True, help="expression for its differential")
    p = sub.add_parser("selftest", help="run the seeded identity suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iters", type=int, default=50)
    p.add_argument(
        "--field",
        default=None,
        help="restrict to one field: q or fp:<p> (default: both q and fp:5)",
    )
    return parser


def _load_setting(args):
    sig_doc = load_json(args.sig)
    sig = signature_from_doc(sig_doc)
    inputs = {"sig": {"path": args.sig, "sha256": file_digest(args.sig)}}
    module = d = None
    if getattr(args, "mod", None):
        module, d = module_from_doc(load_json(args.mod), sig)
        inputs["mod"] = {"path": args.mod, "sha256": file_digest(args.mod)}
    return sig, module, d, inputs


def _var_name(args, sig):
    name = getattr(args, "var", None)
    if name:
        sig.var(name)
        return name
    return sig.top_variable.name


def _emit(transcript: dict) -> None:
    sys.stdout.write(dump_canonical(transcript) + "\n")


def _run(args) -> int:
    start = time.perf_counter()
    transcript = {"tool": "dgalift", "command": args.command}

    if args.command == "selftest":
        fields = None
        if args.field:
            fields = [field_from_spec(args.field)]
        result = run_selftest(args.seed, args.iters, fields=fields)
        transcript["params"] = {"seed": args.seed, "iters": args.iters}
        transcript["data"] = result
        transcript["verdict"] = "pass" if result["all_passed"] else "fail"
        _emit(transcript)
        return EXIT_OK if result["all_passed"] else EXIT_VERIFY

    sig, module, d, inputs = _load_setting(args)
    transcript["inputs"] = inputs

    if args.command == "validate":
        data = {"signature": "ok", "degenerate": sig.degenerate}
        if module is not None:
            sq = d.square_zero
            data["module"] = "ok"
            data["square_zero"] = sq
            if not sq:
                transcript["data"] = data
                transcript["verdict"] = "fail"
                _emit(transcript)
                print("validate: differential does not square to zero", file=sys.stderr)
                return EXIT_INPUT
        transcript["data"] = data
        transcript["verdict"] = "pass"
        transcript["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
        _emit(transcript)
        return EXIT_OK

    if args.command in ("eval", "diff", "derive"):
        e = sig.parse(args.expr)
        if args.command == "diff":
            out = diff(e)
        elif args.command == "derive":
            out = derivative(e, _var_name(args, sig))
        else:
            out = e
        data = {
            "input": args.expr,
            "result": format_expr(out),
            "homogeneous": out.is_homogeneous(),
        }
        if out.is_homogeneous():
            data["degree"] = out.degree()
            data["is_cycle"] = is_cycle(out)
        transcript["data"] = data
        transcript["verdict"] = "ok"
        transcript["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
        _emit(transcript)
        return EXIT_OK

    if args.command == "tate":
        new_sig = tate_adjoin(sig, args.name, args.degree, args.cycle)
        transcript["data"] = {"signature": signature_to_doc(new_sig)}
        transcript["verdict"] = "ok"
        transcript["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
        _emit(transcript)
        return EXIT_OK

    # module-level commands
    var_name = _var_name(args, sig)
    transcript["params"] = {"var": var_name}

    if args.command == "jop":
        j = JOperator(module, var_name)
        h = j.of_diff(d)
        data = {
            "matrix": matrix_to_doc(h),
            "degree": h.degree,
            "top_variable": j.is_top,
        }
        if d.square_zero:
            data["commutes_with_differential"] = bracket_diff(d, h).is_zero()
        transcript["data"] = data
        transcript["verdict"] = "ok"
        transcript["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
        _emit(transcript)
        return EXIT_OK

    if args.command == "obstruct":
        obs = obstruction(module, d, var_name)
        transcript["data"] = {
            "obstruction": matrix_to_doc(obs.h),
            "degree": obs.h.degree,
            "cycle_verified": obs.cycle_verified,
        }
        transcript["verdict"] = "ok"
        transcript["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
        _emit(transcript)
        return EXIT_OK

    if args.command == "naive":
        transcript["params"]["bound"] = args.bound
        decision = decide_naive_lift(module, d, var_name, args.bound)
        if not decision.vanishes:
            transcript["verdict"] = "inconclusive"
            transcript["data"] = {"bound": args.bound}
            transcript["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
            _emit(transcript)
            return EXIT_INCONCLUSIVE
        transcript["verdict"] = "vanishes"
        transcript["data"] = {
            "certificate": matrix_to_doc(decision.certificate.gamma),
            "bound": args.bound,
            "parity": "even" if sig.var(var_name).degree % 2 == 0 else "odd",
        }
        transcript["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
        _emit(transcript)
        return EXIT_OK

    if args.command == "lift":
        transcript["params"]["bound"] = args.bound
        decision = decide_naive_lift(module, d, var_name, args.bound)
        if not decision.vanishes:
            transcript["verdict"] = "inconclusive"
            transcript["data"] = {"bound": args.bound}
            transcript["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
            _emit(transcript)
            return EXIT_INCONCLUSIVE
        var = sig.var(var_name)
        if var.degree % 2 == 0:
            result = construct_lift_even(module, d, var_name, decision.certificate)
        else:
            result = construct_lift_odd(module, d, var_name, decision.certificate)
        lift_report = verify_lift(
            result.lift_diff, result.u, result.ambient_diff, var_name, u_inv=result.u_inv
        )
        nt = NaiveTensor(result.module, result.ambient_diff, var_name)
        split_report = verify_splitting(nt, result)
        data = {
            "parity": result.parity,
            "certificate": matrix_to_doc(decision.certificate.gamma),
            "basis_change": matrix_to_doc(result.u),
            "lifted_matrix": matrix_to_doc(result.lift_diff.matrix),
            "verification": {
                "lift": lift_report.passed,
                "splitting": split_report.passed,
            },
        }
        if result.parity == "odd":
            data["lifted_module"] = module_to_doc(result.module)
            data["shift"] = result.shift_k
            ses = odd_ses(module, d, var_name)
            data["verification"]["sequence"] = ses.check().passed
        transcript["data"] = data
        ok = lift_report.passed and split_report.passed
        transcript["verdict"] = "lifted" if ok else "verification-failed"
        transcript["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
        _emit(transcript)
        return EXIT_OK if ok else EXIT_VERIFY

    raise DgaliftError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except VerificationError as ex:
        print(f"verification failure: {ex}", file=sys.stderr)
        return EXIT_VERIFY
    except DgaliftError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
