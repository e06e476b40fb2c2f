"""Command-line interface: ``normcorner verify | complete | example | search``.

Exit codes: 0 success, 2 input error, 3 constructor validation failure.
Reports go to stdout, progress logging to stderr.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys

import numpy as np

from . import completions as comp
from .blocks import check_normal_corner_conditions, partition
from .linalg import DEFAULT_TOLERANCES, operator_norm
from .matrixio import (
    DocumentError,
    digest,
    document_to_matrix,
    dumps,
    loads,
    matrix_to_document,
    metric_value,
)
from .search import SearchConfig, alpha_lower_bound_search, example_n2, example_n3, feasibility_search

log = logging.getLogger("normcorner")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VALIDATION = 3

VERIFY_HELP = """\
metrics:
  normality_residual  ||N^*N - NN^*||_F / max(1, ||N||_F^2)
  frobenius_B         Frobenius norm of the top-right block B
  frobenius_C         Frobenius norm of the bottom-left block C
  frobenius_gap       | frobenius_B - frobenius_C |
  norm_B              operator norm of B
  norm_C              operator norm of C
  ratio               norm_B / norm_C ("inf" if only C vanishes, 1 if both do)
  ratio_bound         sqrt(n)
  singular_value_gap  max_j |s_j(B) - s_j(C)|
verdicts:
  is_normal           normality_residual <= tol
  frobenius_equality  Frobenius norms of B and C agree (checked only if normal)
  ratio_bound         ||B|| <= sqrt(n) ||C|| (checked only if normal)
"""

COMPLETE_HELP = """\
modes:
  symmetric          [[B^*, B], [B, B^*]]
  unitary            unitary [[A, B], [B, A]] for ||B|| <= 1
  least-norm         normal [[A, B], [B, A]] with norm ||B||
  equal-sv           scalar multiple of a unitary; needs --C with s(C) = s(B)
  hermitian          normal [[A, B], [B^*, D]] from --params
  hermitian-unitary  unitary [[A, B], [B^*, D]] from --params (--unchecked skips
                     the (K0-K2)P = 0 and (Hfirst+H2)P = 0 constraints)
params file: {"K0": doc, "K2": doc, "Hfirst": doc, "H2": doc}, missing keys are zero.
metrics:
  normality_residual  ||N^*N - NN^*||_F / max(1, ||N||_F^2)
  unitarity_residual  ||N^*N - scale^2 I||_F / max(1, scale^2) (unitary-type modes)
  scale               scalar multiple of a unitary (1 for unitary modes)
  corner_residual_B   ||N_12 - B||_F
  corner_residual_C   ||N_21 - C||_F
  witness_norm        operator norm of the completion
  norm_B              operator norm of B
verdicts:
  normal              normality_residual <= tol
  unitary             unitarity_residual <= tol (unitary-type modes)
"""

SEARCH_HELP = """\
alpha metrics:
  best_ratio                  best ||B||/||C|| over feasible restarts
  witness_normality_residual  normality residual of the returned witness
  sqrt_n                      sqrt(n), the trivial upper bound
  best_restart                index of the restart that produced best_ratio
feasibility metrics:
  min_residual                smallest normality residual reached
  restarts_below_tol          number of starts ending at or below --tol
  gradient_check_error        analytic vs finite-difference gradient deviation
verdicts:
  feasible                    alpha: a restart met --tol; feasibility: min_residual <= --tol
"""


class InputError(Exception):
    pass


def _read_matrix(path: str, name: str) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{name}: cannot read {path}: {exc.strerror}") from None
    try:
        return document_to_matrix(loads(text))
    except DocumentError as exc:
        raise InputError(f"{name}: {exc}") from None


def _report(command, inputs, metrics, verdicts, tolerances, witness=None, config=None):
    out = {
        "command": command,
        "inputs": {k: digest(matrix_to_document(v)) for k, v in inputs.items()},
        "tolerances": tolerances,
    }
    if config is not None:
        out["config"] = config
    out["metrics"] = {k: metric_value(v) for k, v in metrics.items()}
    out["verdicts"] = {k: bool(v) for k, v in verdicts.items()}
    if witness is not None:
        out["witness"] = {k: matrix_to_document(v) for k, v in witness.items()}
    return out


def _emit(report, args, witness):
    if args.out:
        payload = (
            matrix_to_document(next(iter(witness.values())))
            if len(witness) == 1
            else {k: matrix_to_document(v) for k, v in witness.items()}
        )
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(dumps(payload))
        except OSError as exc:
            raise InputError(f"--out: cannot write {args.out}: {exc.strerror}") from None
    if args.format == "text":
        lines = [f"command: {report['command']}"]
        for section in ("tolerances", "config", "metrics", "verdicts"):
            for k, v in report.get(section, {}).items():
                lines.append(f"{section}.{k}: {v}")
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        sys.stdout.write(dumps(report))


def cmd_verify(args) -> int:
    N = _read_matrix(args.input, "input")
    if N.shape[0] != N.shape[1] or N.shape[0] % 2:
        raise InputError(f"input: expected a square matrix of even size, got {N.shape[0]}x{N.shape[1]}")
    verdict = check_normal_corner_conditions(partition(N), tol=args.tol)
    rep = verdict.report
    metrics = {
        "normality_residual": rep.normality_residual,
        "frobenius_B": rep.frobenius_B,
        "frobenius_C": rep.frobenius_C,
        "frobenius_gap": rep.frobenius_gap,
        "norm_B": rep.norm_B,
        "norm_C": rep.norm_C,
        "ratio": rep.ratio,
        "ratio_bound": rep.ratio_bound,
        "singular_value_gap": rep.singular_value_gap,
    }
    verdicts = {
        "is_normal": verdict.is_normal,
        "frobenius_equality": verdict.frobenius_equality,
        "ratio_bound": verdict.ratio_bound,
    }
    witness = {"N": N} if args.witness else None
    _emit(_report("verify", {"input": N}, metrics, verdicts, {"tol": args.tol}, witness), args, {"N": N})
    return EXIT_OK


def _read_params(path, n):
    if path is None:
        return comp.HermitianCornerParams.zeros(n)
    try:
        with open(path, encoding="utf-8") as fh:
            doc = loads(fh.read())
    except OSError as exc:
        raise InputError(f"params: cannot read {path}: {exc.strerror}") from None
    except DocumentError as exc:
        raise InputError(f"params: {exc}") from None
    if not isinstance(doc, dict):
        raise InputError("params: expected a JSON object")
    unknown = set(doc) - {"K0", "K2", "Hfirst", "H2"}
    if unknown:
        raise InputError(f"params: unknown keys {sorted(unknown)}")
    mats = {}
    for key in ("K0", "K2", "Hfirst", "H2"):
        if key not in doc:
            mats[key] = np.zeros((n, n), dtype=np.complex128)
            continue
        try:
            M = document_to_matrix(doc[key])
        except DocumentError as exc:
            raise InputError(f"params.{key}: {exc}") from None
        if M.shape != (n, n):
            raise InputError(f"params.{key}: expected shape {n}x{n}, got {M.shape[0]}x{M.shape[1]}")
        mats[key] = M
    return comp.HermitianCornerParams(**mats)


def cmd_complete(args) -> int:
    B = _read_matrix(args.B, "B")
    if B.shape[0] != B.shape[1]:
        raise InputError(f"B: expected a square matrix, got {B.shape[0]}x{B.shape[1]}")
    n = B.shape[0]
    inputs = {"B": B}
    C = None
    if args.C is not None:
        if args.mode != "equal-sv":
            raise InputError(f"C: --C is not used by mode {args.mode}")
        C = _read_matrix(args.C, "C")
        if C.shape != B.shape:
            raise InputError(f"C: expected shape {n}x{n}, got {C.shape[0]}x{C.shape[1]}")
        inputs["C"] = C
    elif args.mode == "equal-sv":
        raise InputError("C: mode equal-sv requires --C")
    if args.params is not None and not args.mode.startswith("hermitian"):
        raise InputError(f"params: --params is not used by mode {args.mode}")
    if args.unchecked and args.mode != "hermitian-unitary":
        raise InputError("--unchecked only applies to mode hermitian-unitary")

    if args.mode == "symmetric":
        res = comp.symmetric_completion(B)
    elif args.mode == "unitary":
        res = comp.symmetric_unitary_completion(B, tol=args.tol)
    elif args.mode == "least-norm":
        res = comp.least_norm_symmetric_completion(B)
    elif args.mode == "equal-sv":
        res = comp.equal_singular_value_completion(B, C, tol=args.tol)
    elif args.mode == "hermitian":
        res = comp.hermitian_corner_completion(B, _read_params(args.params, n), tol=args.tol)
    else:
        res = comp.hermitian_corner_unitary_completion(
            B, _read_params(args.params, n), tol=args.tol, unchecked_mode=args.unchecked
        )
    cert = res.certificate
    N = res.matrix
    metrics = cert.as_dict()
    metrics["witness_norm"] = operator_norm(N)
    metrics["norm_B"] = operator_norm(B)
    verdicts = {"normal": cert.normality_residual <= args.tol}
    if cert.unitarity_residual is not None:
        verdicts["unitary"] = cert.unitarity_residual <= args.tol
    witness = {"N": N}
    report = _report(
        "complete", inputs, metrics, verdicts, {"tol": args.tol},
        witness if args.witness else None, config={"mode": args.mode, "unchecked": args.unchecked},
    )
    _emit(report, args, witness)
    return EXIT_OK


def cmd_example(args) -> int:
    if args.n not in (2, 3):
        if args.n >= 4:
            msg = (f"no example for n={args.n}: a normal 2n x 2n matrix with "
                   "||B|| = sqrt(n) ||C|| exists if and only if n <= 3")
        else:
            msg = f"no stored example for n={args.n}; available: 2, 3"
        raise InputError(msg)
    N = (example_n2() if args.n == 2 else example_n3()).matrix
    text = dumps(matrix_to_document(N))
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise InputError(f"--out: cannot write {args.out}: {exc.strerror}") from None
    if args.format == "text":
        sys.stdout.write(np.array2string(N, precision=17, max_line_width=200) + "\n")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _search_config(args) -> SearchConfig:
    try:
        return SearchConfig(
            restarts=args.restarts,
            max_iterations=args.iters,
            seed=args.seed,
            convergence_tol=args.tol,
            include_paper_seed=not args.no_paper_seed,
            workers=args.workers,
        )
    except ValueError as exc:
        raise InputError(f"config: {exc}") from None


def cmd_search(args) -> int:
    cfg = _search_config(args)
    config = {
        "kind": args.kind,
        "restarts": cfg.restarts,
        "iters": cfg.max_iterations,
        "seed": cfg.seed,
        "paper_seed": cfg.include_paper_seed,
    }
    if args.kind == "alpha":
        if args.n is None or args.n < 1:
            raise InputError("n: --kind alpha requires --n >= 1")
        if args.B or args.C or args.example1 is not None:
            raise InputError("--B/--C/--example1 only apply to --kind feasibility")
        config["n"] = args.n
        log.info("alpha search n=%d restarts=%d seed=%d", args.n, cfg.restarts, cfg.seed)
        res = alpha_lower_bound_search(args.n, cfg)
        metrics = {
            "best_ratio": res.best_ratio,
            "witness_normality_residual": res.witness_normality_residual,
            "sqrt_n": math.sqrt(args.n),
            "best_restart": res.best_restart,
        }
        verdicts = {"feasible": res.feasible}
        witness = {"N": res.witness.matrix}
        inputs = {}
    else:
        if args.example1 is not None:
            if args.B or args.C:
                raise InputError("--example1 replaces --B/--C")
            eps = args.example1
            B = np.array([[1.0, eps], [0.0, 0.0]], dtype=np.complex128)
            C = np.array([[1.0, 0.0], [0.0, eps]], dtype=np.complex128)
            config["example1"] = eps
        else:
            if not (args.B and args.C):
                raise InputError("B: --kind feasibility requires --B and --C (or --example1)")
            B = _read_matrix(args.B, "B")
            C = _read_matrix(args.C, "C")
            if B.shape != C.shape or B.shape[0] != B.shape[1]:
                raise InputError(f"C: B and C must be square of equal size, got {B.shape} and {C.shape}")
        log.info("feasibility search n=%d restarts=%d seed=%d", B.shape[0], cfg.restarts, cfg.seed)
        rep = feasibility_search(B, C, cfg)
        metrics = {
            "min_residual": rep.min_residual,
            "restarts_below_tol": rep.restarts_below_tol,
            "gradient_check_error": rep.gradient_check_error,
        }
        verdicts = {"feasible": rep.min_residual <= cfg.convergence_tol}
        witness = {"A": rep.witness_A, "D": rep.witness_D}
        inputs = {"B": B, "C": C}
    report = _report(
        "search", inputs, metrics, verdicts, {"tol": cfg.convergence_tol},
        witness if args.witness else None, config=config,
    )
    _emit(report, args, witness)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="normcorner", description="Normal completions of 2x2 block matrices.")
    parser.add_argument("-v", "--verbose", action="store_true", help="progress logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        p.add_argument("--format", choices=("json", "text"), default="json")
        if out:
            p.add_argument("--out", help="write witness matrix document(s) to this path")
            p.add_argument("--witness", action="store_true", help="embed witness matrices in the report")

    fmt = argparse.RawDescriptionHelpFormatter
    p = sub.add_parser("verify", help="check corner conditions of a 2n x 2n matrix", epilog=VERIFY_HELP, formatter_class=fmt)
    p.add_argument("input", help="matrix document (JSON)")
    p.add_argument("--tol", type=float, default=DEFAULT_TOLERANCES.residual_tol)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("complete", help="construct a completion", epilog=COMPLETE_HELP, formatter_class=fmt)
    p.add_argument("--mode", required=True,
                   choices=("symmetric", "unitary", "least-norm", "equal-sv", "hermitian", "hermitian-unitary"))
    p.add_argument("--B", required=True, help="matrix document for the top-right block")
    p.add_argument("--C", help="matrix document for the bottom-left block (equal-sv)")
    p.add_argument("--params", help="hermitian parameter file (hermitian modes)")
    p.add_argument("--unchecked", action="store_true")
    p.add_argument("--tol", type=float, default=DEFAULT_TOLERANCES.commutation_tol)
    common(p)
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("example", help="print the extremal example for n = 2 or 3")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", help="also write the document to this path")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("search", help="multistart searches", epilog=SEARCH_HELP, formatter_class=fmt)
    p.add_argument("--kind", required=True, choices=("alpha", "feasibility"))
    p.add_argument("--n", type=int)
    p.add_argument("--B")
    p.add_argument("--C")
    p.add_argument("--example1", type=float, metavar="EPS", help="use B=[[1,EPS],[0,0]], C=diag(1,EPS)")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iters", type=int, default=300)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--no-paper-seed", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except comp.ValidationError as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
