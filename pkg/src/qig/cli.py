"""Command-line front end: compute quantities, run suites, list the catalog.

Matrices travel as JSON files ``{"n": ..., "data": [[[re, im], ...], ...]}``
with row-major data and complex entries as [re, im] pairs.  Logarithms are
natural throughout.  Exit codes: 0 success, 1 suite failures, 2 malformed
files or usage errors, 3 invariant violations, 4 domain errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, functions, linalg, quantities, verify
from .errors import DomainError, FileFormatError, InvariantViolation

_QUANTITIES = ("quasi-entropy", "umegaki", "renyi", "cov", "gen-cov", "fisher", "skew", "wyd")


def read_matrix(path: str, kind: str = "complex") -> np.ndarray:
    """Read a matrix file and validate it as complex / hermitian / density."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise FileFormatError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict) or "n" not in raw or "data" not in raw:
        raise FileFormatError(f"{path}: expected an object with fields 'n' and 'data'")
    n = raw["n"]
    data = raw["data"]
    if not isinstance(n, int) or n < 1:
        raise FileFormatError(f"{path}: 'n' must be a positive integer")
    if not isinstance(data, list) or len(data) != n:
        raise FileFormatError(f"{path}: 'data' must be a list of {n} rows")
    M = np.empty((n, n), dtype=complex)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != n:
            raise FileFormatError(f"{path}: row {i} must hold {n} entries")
        for j, entry in enumerate(row):
            try:
                re, im = entry
                M[i, j] = complex(float(re), float(im))
            except (TypeError, ValueError) as exc:
                raise FileFormatError(
                    f"{path}: entry ({i},{j}) must be a [re, im] pair"
                ) from exc
    if kind == "hermitian":
        return linalg.as_hermitian(M)
    if kind == "density":
        return linalg.as_density(M)
    return M


def write_matrix(path: str, M) -> None:
    """Write a matrix file; plain JSON floats round-trip bit-exactly."""
    M = np.asarray(M, dtype=complex)
    payload = {
        "n": int(M.shape[0]),
        "data": [[[float(z.real), float(z.imag)] for z in row] for row in M],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def format_value(v: complex) -> str:
    """12 significant digits; imaginary part shown only when it matters."""
    v = complex(v)
    if abs(v.imag) <= 1e-9 * (1.0 + abs(v.real)):
        return f"{v.real:.12g}"
    return f"{v.real:.12g}{v.imag:+.12g}j"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qig",
        description=(
            "Quantum information geometry toolkit: relative entropies, generalized "
            "covariances, monotone-metric Fisher information, skew information, and "
            "property suites for their inequalities.  All logarithms are natural."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    comp = sub.add_parser("compute", help="compute a single quantity from matrix files")
    comp.add_argument("quantity", choices=_QUANTITIES)
    comp.add_argument("--state", help="density matrix file (D or D1)")
    comp.add_argument("--state2", help="second density matrix file (D2)")
    comp.add_argument("--obs", help="observable / operand matrix file")
    comp.add_argument("--obs2", help="second observable file (defaults to --obs)")
    comp.add_argument("--fn", help="standard function spec, e.g. sld | wyd:0.5 | hansen:mu.json")
    comp.add_argument("--kernel", help="quasi-entropy kernel spec, e.g. neglog | power:0.5 | sld")
    comp.add_argument("--alpha", type=float, help="order parameter for renyi")
    comp.add_argument("--p", type=float, help="exponent for wyd")

    ver = sub.add_parser("verify", help="run a property suite and emit a report")
    ver.add_argument("suite", choices=(*verify.SUITE_NAMES, "all"))
    ver.add_argument("--trials", type=int, default=200)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--dim", default="4", help="dimension, or comma list like 2,3,4")
    ver.add_argument(
        "--tol",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="override a tolerance (margin=... or residual=...)",
    )
    ver.add_argument("--report", help="write the report to this path instead of stdout")
    ver.add_argument("--format", choices=("json", "markdown"), default="json")

    sub.add_parser("list", help="list function specs, kernels, and suites")
    return parser


def _require(parser: argparse.ArgumentParser, value, flag: str):
    if value is None:
        parser.error(f"the following argument is required here: {flag}")
    return value


def _cmd_compute(args, parser) -> int:
    q = args.quantity
    if q == "umegaki":
        d1 = read_matrix(_require(parser, args.state, "--state"), "density")
        d2 = read_matrix(_require(parser, args.state2, "--state2"), "density")
        value = quantities.umegaki(d1, d2)
    elif q == "renyi":
        alpha = _require(parser, args.alpha, "--alpha")
        d1 = read_matrix(_require(parser, args.state, "--state"), "density")
        d2 = read_matrix(_require(parser, args.state2, "--state2"), "density")
        value = quantities.renyi(alpha, d1, d2)
    elif q == "quasi-entropy":
        F = functions.parse_function_spec(
            _require(parser, args.kernel, "--kernel"), allow_kernels=True
        )
        d1 = read_matrix(_require(parser, args.state, "--state"), "density")
        d2 = read_matrix(_require(parser, args.state2, "--state2"), "density")
        A = read_matrix(args.obs) if args.obs else np.eye(d1.shape[0])
        value = quantities.quasi_entropy(F, A, d1, d2).value
    elif q == "cov":
        d = read_matrix(_require(parser, args.state, "--state"), "density")
        A = read_matrix(_require(parser, args.obs, "--obs"))
        B = read_matrix(args.obs2) if args.obs2 else A
        value = quantities.sym_cov(d, A, B)
    elif q == "gen-cov":
        f = functions.parse_function_spec(_require(parser, args.fn, "--fn"))
        d = read_matrix(_require(parser, args.state, "--state"), "density")
        A = read_matrix(_require(parser, args.obs, "--obs"))
        B = read_matrix(args.obs2) if args.obs2 else A
        value = quantities.gen_cov(f, d, A, B)
    elif q == "fisher":
        f = functions.parse_function_spec(_require(parser, args.fn, "--fn"))
        d = read_matrix(_require(parser, args.state, "--state"), "density")
        A = read_matrix(_require(parser, args.obs, "--obs"))
        B = read_matrix(args.obs2) if args.obs2 else A
        value = quantities.fisher(f, d, A, B)
    elif q == "skew":
        f = functions.parse_function_spec(_require(parser, args.fn, "--fn"))
        d = read_matrix(_require(parser, args.state, "--state"), "density")
        X = read_matrix(_require(parser, args.obs, "--obs"), "hermitian")
        value = quantities.skew_info(f, d, X)
    else:  # wyd
        p = _require(parser, args.p, "--p")
        d = read_matrix(_require(parser, args.state, "--state"), "density")
        X = read_matrix(_require(parser, args.obs, "--obs"), "hermitian")
        value = quantities.wyd_direct(p, d, X)
    print(format_value(value))
    return 0


def _parse_tolerances(entries) -> dict:
    tol = {}
    for entry in entries:
        name, sep, value = entry.partition("=")
        if not sep:
            raise DomainError(f"tolerance override must look like margin=1e-8, got {entry!r}")
        if name not in ("margin", "residual"):
            raise DomainError(f"unknown tolerance {name!r}")
        try:
            tol[name] = float(value)
        except ValueError as exc:
            raise DomainError(f"invalid tolerance value in {entry!r}") from exc
    return tol


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(part) for part in str(text).split(","))
    except ValueError as exc:
        raise DomainError(f"invalid dimension list {text!r}") from exc
    if not dims or any(d < 1 for d in dims):
        raise DomainError(f"dimensions must be positive, got {text!r}")
    return dims


def _markdown_report(payload: dict) -> str:
    lines = [
        "# qig verification report",
        "",
        f"- version: {payload['version']}",
        f"- seed: {payload['seed']}",
        f"- trials: {payload['trials']}",
        f"- dims: {', '.join(str(d) for d in payload['dims'])}",
        "",
        "| suite | trials | min margin | max residual | failures | elapsed (s) |",
        "|---|---|---|---|---|---|",
    ]
    for rep in payload["suites"]:
        mm = "n/a" if rep["min_margin"] is None else f"{rep['min_margin']:.3e}"
        mr = "n/a" if rep["max_residual"] is None else f"{rep['max_residual']:.3e}"
        lines.append(
            f"| {rep['suite']} | {rep['trials']} | {mm} | {mr} | "
            f"{len(rep['failures'])} | {rep['elapsed']:.2f} |"
        )
    lines.append("")
    return "\n".join(lines)


def _cmd_verify(args) -> int:
    names = list(verify.SUITE_NAMES) if args.suite == "all" else [args.suite]
    tol = _parse_tolerances(args.tol)
    dims = _parse_dims(args.dim)
    reports = [
        verify.run_suite(name, trials=args.trials, seed=args.seed, dims=dims, tolerances=tol or None)
        for name in names
    ]
    payload = {
        "tool": "qig",
        "version": __version__,
        "seed": args.seed,
        "trials": args.trials,
        "dims": list(dims),
        "suites": [rep.to_dict() for rep in reports],
    }
    if args.format == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        text = _markdown_report(payload)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    failing = [(rep.suite, fail["seed"]) for rep in reports for fail in rep.failures]
    if failing:
        for suite, seed in failing:
            print(f"FAIL {suite} seed {seed}", file=sys.stderr)
        return 1
    return 0


def _cmd_list() -> int:
    print("standard functions:")
    for name, f0 in functions.CATALOG_SUMMARY:
        print(f"  {name} {f0}")
    print("kernels:")
    for name, desc in functions.KERNEL_SUMMARY:
        print(f"  {name}  {desc}")
    print("suites:")
    for name in verify.SUITE_NAMES:
        print(f"  {name}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "compute":
            return _cmd_compute(args, parser)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_list()
    except FileFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
