"""Command line interface.

Commands operate on state files: JSON documents with a mandatory convention
block pinning hbar = 1, quadrature ordering ``q1 p1 q2 p2`` and vacuum
variance 0.5, a 4x4 ``cov`` array and an optional ``mean`` (default zero).
Files using any other convention are rejected rather than reinterpreted.

Exit codes: 0 separable (or success for non-classifying commands),
1 entangled (or selftest failure), 2 unphysical, 3 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from ._sweeps import run_selftest
from .covariance import invariants, to_standard_form
from .errors import CvsepError, StateFileError
from .matcore import DEFAULT_TOL, norm_inf, scale_of
from .separability import VerdictKind, decide, find_witness
from .states import (
    GaussianState,
    random_physical,
    random_separable,
    thermal,
    two_mode_squeezed,
    vacuum,
)
from .symplectic import embed_local
from .wigner import partial_transpose_eval, wigner_eval

CONVENTION = {"hbar": 1, "ordering": "q1 p1 q2 p2", "vacuum_variance": 0.5}

_EXIT_BY_KIND = {
    VerdictKind.SEPARABLE: 0,
    VerdictKind.ENTANGLED: 1,
    VerdictKind.UNPHYSICAL: 2,
}


def canonical_state_json(state: GaussianState) -> str:
    """Serialize a state in the canonical file layout.

    ``json.dumps`` renders floats with ``repr``, the shortest decimal that
    round-trips, so serializing a parsed file reproduces it byte for byte.
    """
    payload = {
        "convention": dict(CONVENTION),
        "mean": [float(x) for x in state.mean],
        "cov": [[float(x) for x in row] for row in state.cov.matrix],
    }
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def _require_numbers(obj, shape, what: str) -> np.ndarray:
    try:
        arr = np.array(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"{what} must be an array of numbers") from exc
    if arr.shape != shape:
        raise StateFileError(f"{what} must have shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise StateFileError(f"{what} contains non-finite values")
    return arr


def parse_state_payload(payload, tol: float = DEFAULT_TOL) -> GaussianState:
    """Validate a decoded state file and build the state it describes.

    The covariance is checked for shape and symmetry only; classifying
    unphysical matrices is the job of ``check``, not the parser.
    """
    if not isinstance(payload, dict):
        raise StateFileError("state file must be a JSON object")
    conv = payload.get("convention")
    if conv is None:
        raise StateFileError("state file is missing the convention block")
    if not isinstance(conv, dict) or set(conv) != set(CONVENTION):
        raise StateFileError(
            "convention block must contain exactly hbar, ordering, vacuum_variance"
        )
    if not (
        conv["hbar"] == 1
        and conv["ordering"] == CONVENTION["ordering"]
        and conv["vacuum_variance"] == 0.5
    ):
        raise StateFileError(f"unsupported convention {conv!r}; need {CONVENTION!r}")
    if "cov" not in payload:
        raise StateFileError("state file is missing cov")
    cov = _require_numbers(payload["cov"], (4, 4), "cov")
    mean = (
        _require_numbers(payload["mean"], (4,), "mean")
        if "mean" in payload
        else np.zeros(4)
    )
    try:
        return GaussianState(mean, cov)
    except CvsepError as exc:
        raise StateFileError(str(exc)) from exc


def load_state(path: str, tol: float = DEFAULT_TOL) -> GaussianState:
    """Read a state file from ``path`` ('-' for stdin)."""
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from exc
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path} is not valid JSON: {exc}") from exc
    return parse_state_payload(payload, tol)


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2, allow_nan=False))


def _verdict_label(verdict, gaussian: bool) -> str:
    if verdict.kind is VerdictKind.SEPARABLE and not gaussian:
        # Moments alone cannot rule out non-Gaussian entanglement; all the
        # second-moment tests can assert is consistency with PPT.
        return "ppt-consistent"
    return verdict.kind.value


def cmd_check(args) -> int:
    state = load_state(args.state, args.tol)
    budget = args.witness_budget if args.witness else 0
    verdict = decide(state.cov, tol=args.tol, witness_budget=budget)
    inv = invariants(state.cov)
    label = _verdict_label(verdict, args.gaussian)
    if args.json:
        payload = {
            "verdict": label,
            "marginal": verdict.marginal,
            "invariants": {
                "i1": inv.i1,
                "i2": inv.i2,
                "i3": inv.i3,
                "i4": inv.i4,
                "det_v": inv.det_v,
            },
            "physical_margin": verdict.physical_margin,
            "ppt_residual": verdict.ppt_residual,
            "certificate": None
            if verdict.certificate is None
            else {
                "mirrored": verdict.certificate.mirrored,
                "classical_margin": verdict.certificate.classical_margin,
            },
            "witness": None
            if verdict.witness is None
            else {
                "d": [float(x) for x in verdict.witness.d],
                "dp": [float(x) for x in verdict.witness.dp],
                "violation": verdict.witness.violation,
            },
        }
        _print_json(payload)
    else:
        flag = " (marginal)" if verdict.marginal else ""
        print(f"verdict: {label}{flag}")
        print(f"I1 (det A): {inv.i1!r}")
        print(f"I2 (det B): {inv.i2!r}")
        print(f"I3 (det C): {inv.i3!r}")
        print(f"I4: {inv.i4!r}")
        print(f"det V: {inv.det_v!r}")
        print(f"physical margin: {verdict.physical_margin!r}")
        print(f"ppt residual: {verdict.ppt_residual!r}")
        if verdict.certificate is not None:
            cert = verdict.certificate
            via = "mirror image" if cert.mirrored else "input"
            print(f"certificate: classical margin {cert.classical_margin!r} via {via}")
        if verdict.witness is not None:
            print(f"witness d: {verdict.witness.d.tolist()}")
            print(f"witness dp: {verdict.witness.dp.tolist()}")
            print(f"witness violation: {verdict.witness.violation!r}")
    return _EXIT_BY_KIND[verdict.kind]


def cmd_reduce(args) -> int:
    state = load_state(args.state, args.tol)
    verdict = decide(state.cov, tol=args.tol, witness_budget=0)
    if verdict.kind is VerdictKind.UNPHYSICAL:
        print(f"unphysical covariance (margin {verdict.physical_margin!r})", file=sys.stderr)
        return 2
    sf = to_standard_form(state.cov, args.tol)
    recon = embed_local(sf.to_standard) @ state.cov.matrix @ embed_local(sf.to_standard).T
    err = norm_inf(recon - sf.matrix().matrix) / scale_of(state.cov.matrix)
    if args.json:
        _print_json(
            {
                "a": sf.a,
                "b": sf.b,
                "c1": sf.c1,
                "c2": sf.c2,
                "s1": [[float(x) for x in row] for row in sf.to_standard.s1],
                "s2": [[float(x) for x in row] for row in sf.to_standard.s2],
                "reconstruction_error": err,
            }
        )
    else:
        print(f"a: {sf.a!r}")
        print(f"b: {sf.b!r}")
        print(f"c1: {sf.c1!r}")
        print(f"c2: {sf.c2!r}")
        print(f"s1: {sf.to_standard.s1.tolist()}")
        print(f"s2: {sf.to_standard.s2.tolist()}")
        print(f"reconstruction error: {err!r}")
    return 0


def cmd_generate(args) -> int:
    name = args.name
    if name == "vacuum":
        state = vacuum()
    elif name == "thermal":
        state = thermal(args.n1, args.n2)
    elif name == "tmsv":
        state = two_mode_squeezed(args.r)
    elif name == "random-physical":
        state = random_physical(args.seed, args.mixedness)
    elif name == "random-separable":
        state = random_separable(args.seed, args.components)
    else:
        print(
            f"unknown state name {name!r}; choose from vacuum, thermal, tmsv, "
            "random-physical, random-separable",
            file=sys.stderr,
        )
        return 3
    sys.stdout.write(canonical_state_json(state))
    return 0


def cmd_witness(args) -> int:
    state = load_state(args.state, args.tol)
    verdict = decide(state.cov, tol=args.tol, witness_budget=0)
    witness = (
        find_witness(state.cov, budget=args.witness_budget, tol=args.tol)
        if verdict.kind is VerdictKind.ENTANGLED
        else None
    )
    if args.json:
        _print_json(
            {
                "verdict": _verdict_label(verdict, args.gaussian),
                "witness": None
                if witness is None
                else {
                    "d": [float(x) for x in witness.d],
                    "dp": [float(x) for x in witness.dp],
                    "violation": witness.violation,
                },
            }
        )
    elif witness is None:
        print(f"no witness ({_verdict_label(verdict, args.gaussian)})")
    else:
        print(f"witness d: {witness.d.tolist()}")
        print(f"witness dp: {witness.dp.tolist()}")
        print(f"witness violation: {witness.violation!r}")
    return _EXIT_BY_KIND[verdict.kind]


def cmd_wigner(args) -> int:
    state = load_state(args.state, args.tol)
    xi = np.array(args.at, dtype=float) if args.at is not None else state.mean
    value = wigner_eval(state, xi)
    if args.json:
        payload = {"at": [float(x) for x in xi], "wigner": value}
        if args.mirror:
            payload["partial_transpose"] = partial_transpose_eval(state, xi)
        _print_json(payload)
    else:
        print(f"W({', '.join(repr(float(x)) for x in xi)}) = {value!r}")
        if args.mirror:
            print(f"partial transpose value: {partial_transpose_eval(state, xi)!r}")
    return 0


def cmd_selftest(args) -> int:
    reports = run_selftest(args.samples, args.seed, args.tol)
    for report in reports:
        print(report.line())
        for note in report.notes:
            print(f"  {note}")
    bad = sum(0 if r.ok else 1 for r in reports)
    print(f"selftest: {len(reports) - bad}/{len(reports)} suites ok")
    return 0 if bad == 0 else 1


def _add_common(parser: argparse.ArgumentParser, state_arg: bool = True) -> None:
    if state_arg:
        parser.add_argument("state", help="state file path, or - for stdin")
    parser.add_argument("--tol", type=float, default=DEFAULT_TOL, help="base tolerance")
    parser.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvsep",
        description="Separability analysis of two-mode Gaussian states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="classify a state file")
    _add_common(p)
    p.add_argument("--gaussian", action=argparse.BooleanOptionalAction, default=True,
                   help="treat the moments as a Gaussian state (--no-gaussian reports "
                        "ppt-consistent instead of separable)")
    p.add_argument("--witness", action="store_true", help="search for a witness if entangled")
    p.add_argument("--witness-budget", type=int, default=2000,
                   help="objective evaluations for the witness search")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("reduce", help="report the standard form of a state file")
    _add_common(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("generate", help="write a catalog state to stdout")
    p.add_argument("name", help="vacuum | thermal | tmsv | random-physical | random-separable")
    p.add_argument("--r", type=float, default=1.0, help="tmsv squeeze parameter")
    p.add_argument("--n1", type=float, default=0.0, help="thermal occupation, mode 1")
    p.add_argument("--n2", type=float, default=0.0, help="thermal occupation, mode 2")
    p.add_argument("--mixedness", type=float, default=1.0, help="random-physical spread")
    p.add_argument("--components", type=int, default=3, help="random-separable mixture size")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("witness", help="search for an entanglement witness")
    _add_common(p)
    p.add_argument("--gaussian", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--witness-budget", type=int, default=2000)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("wigner", help="evaluate the Wigner function of a state file")
    _add_common(p)
    p.add_argument("--at", type=float, nargs=4, metavar=("Q1", "P1", "Q2", "P2"),
                   help="phase-space point (default: the state mean)")
    p.add_argument("--mirror", action="store_true",
                   help="also evaluate the partially transposed state")
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("selftest", help="run the built-in property sweeps")
    p.add_argument("--samples", type=int, default=10000, help="sweep sample count")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; 2 means "unphysical" here,
        # so fold usage problems into the input-error code.
        return 0 if exc.code in (0, None) else 3
    try:
        return args.func(args)
    except CvsepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def entry_point() -> None:  # pragma: no cover - thin wrapper
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
