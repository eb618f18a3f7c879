"""Command-line front end.

Machine-readable JSON goes to stdout; human-readable summaries go to
stderr.  Exit codes: 0 ok, 1 verification failure, 2 parse error,
3 feasibility cap, 4 not invertible-TN, 5 not oscillatory, 6 bad
parameters.  All randomness flows through one seed, taken from --seed
or the OSCILLAX_SEED environment variable (flag wins).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from .classify import classify, is_oscillatory
from .errors import (
    ClassMismatch,
    FeasibilityExceeded,
    IndexOutOfRange,
    InvalidPsiPattern,
    MalformedNumber,
    NotITN,
    NotNormalizable,
    NotOscillatory,
    OrderOutOfRange,
    OscillaxError,
    ParamOutOfRange,
    ShapeMismatch,
    Unpredictable,
    ZeroDenominator,
)
from .exponent import (
    exponent_bruteforce,
    exponent_via_prediction,
    exponent_via_theorem,
    generate_z1,
    generate_z2,
    with_transpose,
)
from .matrix import (
    Matrix,
    loads_matrix,
    matrix_from_csv,
    matrix_to_json_dict,
)
from .planar import (
    build_network,
    concat_copies,
    export_dot,
    min_copies_lower_corner,
    network_to_json_dict,
)
from .seb import (
    compose,
    factorization_from_text,
    factorization_to_json_dict,
    factorization_to_text,
    loads_factorization,
    neville_factorize,
    w_q_form,
)
from .verify import run_suites

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_FEASIBILITY = 3
EXIT_NOT_ITN = 4
EXIT_NOT_OSCILLATORY = 5
EXIT_BAD_PARAMS = 6

SCHEMA_PREFIX = "oscillax"
SCHEMA_VERSION = 1


def _schema(name: str) -> str:
    return f"{SCHEMA_PREFIX}.{name}/{SCHEMA_VERSION}"


def _resolve_seed(value) -> int:
    if value is not None:
        return int(value)
    env = os.environ.get("OSCILLAX_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ParamOutOfRange(f"OSCILLAX_SEED is not an integer: {env!r}") from exc
    return 0


def _read_matrix(path: str) -> Matrix:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MalformedNumber(f"cannot read {path}: {exc}") from exc
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            return loads_matrix(text)
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise MalformedNumber(f"bad matrix JSON in {path}: {exc}") from exc
    return matrix_from_csv(text)


def _read_factorization(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MalformedNumber(f"cannot read {path}: {exc}") from exc
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            return loads_factorization(text)
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise MalformedNumber(f"bad factorization JSON in {path}: {exc}") from exc
    return factorization_from_text(text)


def _emit(payload: dict, args, text_body: str | None = None) -> None:
    if getattr(args, "format", "json") == "text" and text_body is not None:
        body = text_body if text_body.endswith("\n") else text_body + "\n"
    else:
        body = json.dumps(payload, indent=2) + "\n"
    sys.stdout.write(body)
    output = getattr(args, "output", None)
    if output:
        Path(output).write_text(body)


def _note(message: str) -> None:
    print(message, file=sys.stderr)


# -- subcommands ---------------------------------------------------------------


def cmd_classify(args) -> int:
    a = _read_matrix(args.input)
    if args.method == "all":
        report = classify(a, args.cap)
        payload = {"schema": _schema("classify"), "status": "ok"}
        payload.update(report.to_json_dict())
        verdict = report.is_oscillatory
    else:
        verdict = is_oscillatory(a, args.method, args.cap)
        report = classify(a, args.cap)
        payload = {"schema": _schema("classify"), "status": "ok"}
        payload.update(report.to_json_dict())
        payload["method"] = args.method
        payload["method_verdict"] = verdict
    _note(
        f"classify: n={a.rows} tn={payload['is_tn']} tp={payload['is_tp']} "
        f"oscillatory={payload['is_oscillatory']}"
    )
    _emit(payload, args)
    return EXIT_OK


def cmd_factorize(args) -> int:
    a = _read_matrix(args.input)
    f = neville_factorize(a)
    text = factorization_to_text(f)
    wq = str(w_q_form(f))
    payload = {
        "schema": _schema("factorize"),
        "status": "ok",
        "form": args.form,
        "factorization": factorization_to_json_dict(f),
        "text": text,
        "wq": wq,
    }
    _note(f"factorize: n={f.n} {text}")
    _emit(payload, args, text_body=wq if args.form == "wq" else text)
    return EXIT_OK


def cmd_exponent(args) -> int:
    a = _read_matrix(args.input)
    payload = {"schema": _schema("exponent"), "status": "ok", "method": args.method}
    if args.method == "brute":
        report = exponent_bruteforce(a, args.cap)
        payload["report"] = report.to_json_dict()
        summary = f"r={report.r}"
    elif args.method == "theorem":
        report = exponent_via_theorem(a)
        payload["report"] = report.to_json_dict()
        summary = f"r={report.r} (lower {report.r_lower}, upper {report.r_upper})"
    else:
        if not is_oscillatory(a, "seb"):
            raise NotOscillatory("input is not oscillatory")
        prediction, l_tag, u_tag = exponent_via_prediction(a)
        payload["prediction"] = prediction.to_json_dict()
        payload["l_class"] = l_tag.to_json_dict()
        payload["u_class"] = u_tag.to_json_dict()
        summary = f"{prediction.kind}={prediction.value}"
    _note(f"exponent[{args.method}]: {summary}")
    _emit(payload, args)
    return EXIT_OK


def cmd_network(args) -> int:
    f = _read_factorization(args.input)
    net = build_network(f)
    dot = export_dot(net)
    payload = {
        "schema": _schema("network"),
        "status": "ok",
        "network": network_to_json_dict(net),
        "dot": dot,
    }
    if args.copies is not None:
        table = []
        shown = concat_copies(net, args.copies)  # rejects copies < 1
        for c in range(1, net.n):
            copies = min_copies_lower_corner(net, c)
            table.append(
                {
                    "corner_size": c,
                    "min_copies": None if copies == float("inf") else copies,
                    "positive_at_copies": (
                        copies != float("inf") and copies <= args.copies
                    ),
                }
            )
        payload["copies"] = args.copies
        payload["lower_corner_table"] = table
        dot = export_dot(shown)
        payload["dot"] = dot
    if args.dot:
        Path(args.dot).write_text(dot)
        _note(f"network: wrote DOT to {args.dot}")
    else:
        _note(f"network: n={net.n}, {len(net.layers)} layers")
    _emit(payload, args, text_body=dot)
    return EXIT_OK


def cmd_generate(args) -> int:
    seed = _resolve_seed(args.seed)
    psi = None
    if args.psi:
        if args.psi == "random":
            psi = "random"
        else:
            try:
                psi = {int(tok.strip().lstrip("Ll")) for tok in args.psi.split(",")}
            except ValueError as exc:
                raise InvalidPsiPattern(f"cannot parse pattern {args.psi!r}") from exc
    if args.cls == "z1":
        if psi is not None:
            raise InvalidPsiPattern("z1 takes no partial-chain pattern")
        part = generate_z1(args.n, args.s, seed)
    else:
        part = generate_z2(args.n, args.s, psi, seed)
    payload = {
        "schema": _schema("generate"),
        "status": "ok",
        "class": args.cls,
        "n": args.n,
        "s": args.s,
        "psi": args.psi,
        "seed": seed,
        "factorization": factorization_to_json_dict(part),
    }
    if args.full:
        rng = random.Random(seed ^ 0x5EED)
        d = tuple(rng.randint(1, 4) for _ in range(args.n))
        full = with_transpose(part, d)
        payload["full_factorization"] = factorization_to_json_dict(full)
        payload["matrix"] = matrix_to_json_dict(compose(full))
    _note(f"generate: {args.cls}(s={args.s}) n={args.n} seed={seed}")
    _emit(payload, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    seed = _resolve_seed(args.seed)
    results = run_suites([args.suite], nmax=args.nmax, cases=args.cases, seed=seed)
    suites = [r.to_json_dict() for r in results]
    ok = all(r.ok for r in results)
    payload = {
        "schema": _schema("verify"),
        "status": "ok" if ok else "error",
        "seed": seed,
        "suites": suites,
    }
    for r in results:
        _note(f"verify[{r.suite}]: {r.passed}/{len(r.cases)} passed")
        for c in r.cases:
            if not c.ok:
                _note(f"  FAIL {c.name}: {c.detail}")
    _emit(payload, args)
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


# -- wiring ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscillax",
        description=(
            "Exact classification, factorization, planar networks, and "
            "exponents for totally nonnegative matrices."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", help="also write the payload to this path")
        p.add_argument(
            "--format", choices=("json", "text"), default="json",
            help="stdout format (default json)",
        )
        p.add_argument(
            "--seed", type=int,
            help="seed for any randomized work (overrides OSCILLAX_SEED); "
            "deterministic subcommands ignore it",
        )

    p = sub.add_parser("classify", help="TN/TP/oscillatory report for a matrix")
    p.add_argument("--input", required=True, help="matrix file (JSON or CSV)")
    p.add_argument(
        "--method",
        choices=("definition", "gk", "irreducible", "seb", "all"),
        default="all",
    )
    p.add_argument("--cap", type=int, default=8, help="minor-scan dimension cap")
    common(p)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("factorize", help="successive bidiagonal factorization")
    p.add_argument("--input", required=True, help="matrix file (JSON or CSV)")
    p.add_argument("--form", choices=("flat", "wq"), default="flat")
    common(p)
    p.set_defaults(fn=cmd_factorize)

    p = sub.add_parser("exponent", help="exponent of an oscillatory matrix")
    p.add_argument("--input", required=True, help="matrix file (JSON or CSV)")
    p.add_argument("--method", choices=("brute", "theorem", "predict"), default="brute")
    p.add_argument("--cap", type=int, default=8)
    common(p)
    p.set_defaults(fn=cmd_exponent)

    p = sub.add_parser("network", help="planar network of a factorization")
    p.add_argument("--input", required=True, help="factorization file (JSON or text)")
    p.add_argument(
        "--copies", type=int,
        help="report corner reachability; DOT shows the concatenated copies",
    )
    p.add_argument("--dot", help="write Graphviz output to this path")
    common(p)
    p.set_defaults(fn=cmd_network)

    p = sub.add_parser("generate", help="seeded class-shaped factorizations")
    p.add_argument("--class", dest="cls", choices=("z1", "z2"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--psi", help="partial chain, e.g. 'L4' or 'L4,L5' or 'random'")
    p.add_argument(
        "--full", action="store_true",
        help="pair with the transposed upper part and a diagonal",
    )
    common(p)
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument(
        "--suite",
        choices=("paper", "z1", "z2", "products", "bounds", "all"),
        default="all",
    )
    p.add_argument("--nmax", type=int)
    p.add_argument("--cases", type=int)
    common(p)
    p.set_defaults(fn=cmd_verify)

    return parser


_ERROR_EXIT = (
    (
        (
            MalformedNumber,
            ZeroDenominator,
            ShapeMismatch,
            NotNormalizable,
            json.JSONDecodeError,
        ),
        EXIT_PARSE,
    ),
    ((FeasibilityExceeded,), EXIT_FEASIBILITY),
    ((NotITN,), EXIT_NOT_ITN),
    ((NotOscillatory,), EXIT_NOT_OSCILLATORY),
    (
        (
            ParamOutOfRange,
            InvalidPsiPattern,
            Unpredictable,
            ClassMismatch,
            IndexOutOfRange,
            OrderOutOfRange,
        ),
        EXIT_BAD_PARAMS,
    ),
)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (OscillaxError, json.JSONDecodeError) as err:
        for kinds, code in _ERROR_EXIT:
            if isinstance(err, kinds):
                payload = {
                    "schema": _schema("error"),
                    "status": "error",
                    "error": {"type": type(err).__name__, "message": str(err)},
                }
                sys.stdout.write(json.dumps(payload, indent=2) + "\n")
                _note(f"error: {type(err).__name__}: {err}")
                return code
        raise  # internal invariants and disagreements are bugs, not exits


if __name__ == "__main__":
    sys.exit(main())
