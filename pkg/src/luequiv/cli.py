"""Command line front end.

Subcommands::

    luequiv validate STATE                 check a state file
    luequiv fingerprint STATE              print the invariant signature
    luequiv compare A B                    decide equivalence, print a report
    luequiv orbit STATE --out OUT          conjugate by seeded local unitaries
    luequiv oracle A B                     brute-force optimization oracle
    luequiv certify REPORT A B             re-verify a report's certificate

Exit codes (stable):

    0  success / states equivalent
    1  states not equivalent / certificate check failed
    2  inconclusive
    3  parse or I/O error
    4  not Hermitian          5  trace differs from one
    6  not positive semidefinite
    7  dimension mismatch     8  not unitary
    9  other library error
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import DEFAULT_TOL, Tolerances
from .decider import EQUIVALENT, INCONCLUSIVE, NOT_EQUIVALENT, certify, decide
from .errors import (
    DimensionMismatch,
    LuequivError,
    NotHermitian,
    NotPositiveSemidefinite,
    NotUnitary,
    NotUnitTrace,
    ParseError,
)
from .invariants import fingerprint
from .io import (
    REPORT_SCHEMA_VERSION,
    complex_to_pair,
    dump_json,
    file_digest,
    load_state,
    matrix_to_pairs,
    pairs_to_matrix,
    save_state,
)
from .states import apply_local_unitary
from .testkit import brute_force_oracle, haar_unitary

EXIT_OK = 0
EXIT_NOT_EQUIVALENT = 1
EXIT_INCONCLUSIVE = 2
EXIT_PARSE = 3
EXIT_NOT_HERMITIAN = 4
EXIT_NOT_UNIT_TRACE = 5
EXIT_NOT_PSD = 6
EXIT_DIMENSION = 7
EXIT_NOT_UNITARY = 8
EXIT_LIBRARY = 9

_ERROR_CODES = [
    (ParseError, EXIT_PARSE),
    (NotHermitian, EXIT_NOT_HERMITIAN),
    (NotUnitTrace, EXIT_NOT_UNIT_TRACE),
    (NotPositiveSemidefinite, EXIT_NOT_PSD),
    (DimensionMismatch, EXIT_DIMENSION),
    (NotUnitary, EXIT_NOT_UNITARY),
    (LuequivError, EXIT_LIBRARY),
]


def _error_code(exc: Exception) -> int:
    for cls, code in _ERROR_CODES:
        if isinstance(exc, cls):
            return code
    return EXIT_LIBRARY


def _tolerances(args) -> Tolerances:
    overrides = {}
    if getattr(args, "eps_inv", None) is not None:
        overrides["eps_inv"] = args.eps_inv
    if getattr(args, "eps_cert", None) is not None:
        overrides["eps_cert"] = args.eps_cert
    if getattr(args, "eps_deg", None) is not None:
        overrides["eps_deg"] = args.eps_deg
    if getattr(args, "tau_cap", None) is not None:
        overrides["tau_cap"] = args.tau_cap
    if getattr(args, "seed", None) is not None:
        overrides["search_seed"] = args.seed
    return DEFAULT_TOL.replace(**overrides) if overrides else DEFAULT_TOL


def _tol_doc(tol: Tolerances) -> dict:
    return {k: v for k, v in tol.as_dict().items()}


def _signature_doc(path: str, tol: Tolerances, validate: bool) -> dict:
    rho, label = load_state(path, tol, validate=validate)
    sig = fingerprint(rho, tol)
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "kind": "fingerprint",
        "tool_version": __version__,
        "input_digest": file_digest(path),
        "label": label,
        "local_dim": sig.dim_local,
        "rank": sig.rank,
        "block_sizes": list(sig.block_sizes),
        "power_traces": [float(x) for x in sig.power_traces],
        "balanced_words": {k: complex_to_pair(v) for k, v in sig.balanced_words.items()},
        "block_invariants": {k: complex_to_pair(v) for k, v in sig.block_invariants.items()},
        "tau_balanced": sig.tau_balanced,
        "tau_block": sig.tau_block,
        "tolerances": _tol_doc(tol),
    }


def cmd_validate(args) -> int:
    tol = _tolerances(args)
    rho, label = load_state(args.state, tol, validate=True)
    print(f"valid density matrix: N={rho.dim_local}" + (f" label={label!r}" if label else ""))
    return EXIT_OK


def cmd_fingerprint(args) -> int:
    doc = _signature_doc(args.state, _tolerances(args), not args.no_validate)
    sys.stdout.write(dump_json(doc))
    return EXIT_OK


def cmd_compare(args) -> int:
    tol = _tolerances(args)
    rho_a, label_a = load_state(args.state_a, tol, validate=not args.no_validate)
    rho_b, label_b = load_state(args.state_b, tol, validate=not args.no_validate)
    verdict = decide(rho_a, rho_b, tol)
    doc = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "kind": "verdict",
        "tool_version": __version__,
        "inputs": {
            "a": {"digest": file_digest(args.state_a), "label": label_a},
            "b": {"digest": file_digest(args.state_b), "label": label_b},
        },
        "outcome": verdict.outcome,
        "reason": verdict.reason,
        "witness": None,
        "certificate": None,
        "tolerances": _tol_doc(tol),
        "details": verdict.details,
    }
    if verdict.witness is not None:
        doc["witness"] = {
            "kind": verdict.witness.kind,
            "key": verdict.witness.key,
            "value_a": complex_to_pair(verdict.witness.value_a),
            "value_b": complex_to_pair(verdict.witness.value_b),
        }
    if verdict.certificate is not None:
        doc["certificate"] = {
            "u": matrix_to_pairs(verdict.certificate.u),
            "w": matrix_to_pairs(verdict.certificate.w),
            "residual": verdict.certificate.residual,
        }
    text = dump_json(doc)
    if args.report:
        Path(args.report).write_text(text)
    if args.json:
        sys.stdout.write(text)
    else:
        print(f"outcome: {verdict.outcome} ({verdict.reason})")
        if verdict.witness is not None:
            w = verdict.witness
            print(f"witness: {w.kind} {w.key} values {w.value_a:.9g} vs {w.value_b:.9g}")
        if verdict.certificate is not None:
            print(f"certificate residual: {verdict.certificate.residual:.3e}")
    return {
        EQUIVALENT: EXIT_OK,
        NOT_EQUIVALENT: EXIT_NOT_EQUIVALENT,
        INCONCLUSIVE: EXIT_INCONCLUSIVE,
    }[verdict.outcome]


def cmd_orbit(args) -> int:
    tol = _tolerances(args)
    rho, label = load_state(args.state, tol, validate=not args.no_validate)
    rng = np.random.default_rng(args.seed)
    u1 = haar_unitary(rho.dim_local, rng)
    u2 = haar_unitary(rho.dim_local, rng)
    out = apply_local_unitary(rho, u1, u2, tol)
    out_label = f"{label or 'state'} orbit seed={args.seed}"
    save_state(args.out, out.matrix, out.dim_local, label=out_label)
    doc = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "kind": "orbit",
        "tool_version": __version__,
        "seed": args.seed,
        "input_digest": file_digest(args.state),
        "output_digest": file_digest(args.out),
        "u1": matrix_to_pairs(u1),
        "u2": matrix_to_pairs(u2),
    }
    sys.stdout.write(dump_json(doc))
    return EXIT_OK


def cmd_oracle(args) -> int:
    tol = _tolerances(args)
    rho_a, _ = load_state(args.state_a, tol, validate=not args.no_validate)
    rho_b, _ = load_state(args.state_b, tol, validate=not args.no_validate)
    if rho_a.dim_local > 3:
        print("warning: the oracle is intended for N <= 3", file=sys.stderr)
    result = brute_force_oracle(
        rho_a, rho_b, restarts=args.restarts, iters=args.iters, seed=args.seed, tol=tol
    )
    doc = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "kind": "oracle",
        "tool_version": __version__,
        "best_distance": result.best_distance,
        "converged": result.converged,
        "restarts_used": result.restarts_used,
        "restarts": args.restarts,
        "iters": args.iters,
        "seed": args.seed,
        "eps_oracle": tol.eps_oracle,
        "u1": matrix_to_pairs(result.best_pair[0]),
        "u2": matrix_to_pairs(result.best_pair[1]),
    }
    sys.stdout.write(dump_json(doc))
    return EXIT_OK


def cmd_certify(args) -> int:
    tol = _tolerances(args)
    try:
        report = json.loads(Path(args.report).read_text())
        cert = report["certificate"]
        u = pairs_to_matrix(cert["u"])
        w = pairs_to_matrix(cert["w"])
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ParseError(f"{args.report}: no readable certificate ({exc})") from exc
    rho_a, _ = load_state(args.state_a, tol, validate=not args.no_validate)
    rho_b, _ = load_state(args.state_b, tol, validate=not args.no_validate)
    residual = certify(rho_a, rho_b, u, w, tol)
    ok = residual <= tol.eps_cert
    sys.stdout.write(dump_json({
        "kind": "certify",
        "residual": residual,
        "eps_cert": tol.eps_cert,
        "pass": bool(ok),
    }))
    return EXIT_OK if ok else EXIT_NOT_EQUIVALENT


def _add_common(p: argparse.ArgumentParser, seed_default=None) -> None:
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--no-validate", action="store_true", help="skip density-matrix validation")
    p.add_argument("--tau-cap", type=int, default=None, help="maximum word length")
    p.add_argument("--seed", type=int, default=seed_default, help="random seed")
    p.add_argument("--eps-inv", type=float, default=None, help="invariant comparison tolerance")
    p.add_argument("--eps-cert", type=float, default=None, help="certificate residual tolerance")
    p.add_argument("--eps-deg", type=float, default=None, help="degeneracy gap tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="luequiv",
        description="Local-unitary equivalence of bipartite density matrices.",
        epilog=__doc__.split("Exit codes")[1].join(["Exit codes", ""]),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"luequiv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a state file")
    p.add_argument("state")
    _add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("fingerprint", help="print the invariant signature")
    p.add_argument("state")
    _add_common(p)
    p.set_defaults(func=cmd_fingerprint)

    p = sub.add_parser("compare", help="decide local-unitary equivalence")
    p.add_argument("state_a")
    p.add_argument("state_b")
    p.add_argument("--report", default=None, help="also write the JSON report here")
    _add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("orbit", help="conjugate a state by seeded local unitaries")
    p.add_argument("state")
    p.add_argument("--out", required=True, help="output state file")
    _add_common(p, seed_default=0)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("oracle", help="brute-force equivalence oracle")
    p.add_argument("state_a")
    p.add_argument("state_b")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--iters", type=int, default=2000)
    _add_common(p, seed_default=0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("certify", help="re-verify a report's certificate")
    p.add_argument("report")
    p.add_argument("state_a")
    p.add_argument("state_b")
    _add_common(p)
    p.set_defaults(func=cmd_certify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LuequivError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _error_code(exc)


def entrypoint() -> None:  # console script
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
