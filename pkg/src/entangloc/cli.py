"""Command-line front end.

Exit codes for ``analyze``: 0 completely separable, 1 partially entangled,
2 completely entangled, 3 usage or input error. ``verify`` exits 0 when the
report checks out, 1 on the first disagreement, 3 on unreadable input.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import __version__
from .bruteforce import BRUTE_FORCE_CAP, brute_finest_partition
from .generators import SpecError, parse_spec
from .io import FormatError, digest, dumps, load_report, load_state, report_to_dict, state_to_dict
from .linalg import SCHMIDT_TOL, reduce_to_bipartition, schmidt_decompose
from .mixed import localize_mixed
from .oracles import DEFAULT_ORACLES, REGISTRY, OracleConflictError
from .partitions import (
    Bipartition,
    Partition,
    bell_number,
    enumerate_partitions,
    iter_bipartitions,
    stirling2,
)
from .pure import localize
from .states import DensityMatrix, PureState, density_from_pure, embed_product, fidelity

EXIT_SEPARABLE, EXIT_PARTIAL, EXIT_ENTANGLED, EXIT_ERROR = 0, 1, 2, 3
EXIT_OK, EXIT_MISMATCH = 0, 1

CERTIFICATE_TOL = 1e-10


def _emit(text: str, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _err(msg):
    print(f"entangloc: {msg}", file=sys.stderr)


def cmd_generate(args) -> int:
    try:
        state = parse_spec(args.spec, seed=args.seed)
    except SpecError as exc:
        _err(f"bad state spec: {exc}")
        return EXIT_ERROR
    _emit(dumps(state_to_dict(state)), args.out)
    return EXIT_OK


def _analyze(state, args):
    if isinstance(state, PureState) and not args.force_mixed:
        return localize(state, tol=args.tol, threads=args.threads)
    if isinstance(state, PureState):
        state = density_from_pure(state)
    return localize_mixed(state, oracles=args.oracle, tol=args.tol, policy=args.policy, threads=args.threads)


def exit_code_for(partition: Partition) -> int:
    if partition.is_finest():
        return EXIT_SEPARABLE
    if partition.is_coarsest():
        return EXIT_ENTANGLED
    return EXIT_PARTIAL


def cmd_analyze(args) -> int:
    try:
        state = load_state(args.input, validate=not args.no_validate)
    except (OSError, ValueError) as exc:
        _err(f"cannot read state: {exc}")
        return EXIT_ERROR
    start = time.perf_counter()
    try:
        report = _analyze(state, args)
    except (ValueError, OracleConflictError) as exc:
        _err(f"analysis failed: {exc}")
        return EXIT_ERROR
    elapsed = time.perf_counter() - start
    doc = report_to_dict(report, state.dims, input_digest=digest(args.input))
    if args.timing:
        doc["wall_time_s"] = elapsed
    _emit(dumps(doc), args.out)
    return exit_code_for(report.partition)


def cmd_partitions(args) -> int:
    n = args.n
    try:
        if args.mode == "all":
            for p in enumerate_partitions(n):
                print(p.to_list())
        elif args.mode == "bipartitions":
            for bp in iter_bipartitions(range(1, n + 1)):
                print(bp.to_list())
        else:
            print(f"B({n}) = {bell_number(n)}")
            print(f"S({n},k) k=1..{n}: " + " ".join(str(stirling2(n, k)) for k in range(1, n + 1)))
    except ValueError as exc:
        _err(str(exc))
        return EXIT_ERROR
    return EXIT_OK


def _complement(left, n):
    return tuple(i for i in range(1, n + 1) if i not in left)


def _verify_pure(psi: PureState, doc) -> str | None:
    """Return a description of the first disagreement, or None."""
    tol = doc["tolerances"].get("schmidt", SCHMIDT_TOL)
    n = psi.n
    for rec in doc["evidence"]:
        left = tuple(rec["bipartition"][0])
        # the block is a tensor factor of psi, so the cut (left | rest of system) has the same rank
        rank = schmidt_decompose(psi, bp=Bipartition(left, _complement(left, n)), tol=tol).rank
        if rank != rec["schmidt_rank"] or rec["split"] != (rank == 1):
            return f"evidence record {rec}: recomputed Schmidt rank {rank}"
    claimed = Partition.from_list(doc["partition"])
    fresh = localize(psi, tol=tol).partition
    if claimed != fresh:
        return f"partition {claimed.to_list()} differs from recomputed {fresh.to_list()}"
    if n <= BRUTE_FORCE_CAP:
        brute = brute_finest_partition(psi)
        if brute != claimed:
            return f"partition {claimed.to_list()} differs from brute force {brute.to_list()}"
    else:
        print(f"notice: n={n} above brute-force cap {BRUTE_FORCE_CAP}; brute force skipped", file=sys.stderr)
    factors = [PureState(_pairs_to_complex(f["amplitudes"]), tuple(f["dims"])) for f in doc.get("factors", [])]
    if factors:
        rebuilt = embed_product(factors, claimed)
        if fidelity(rebuilt, psi) < 1 - 1e-8:
            return "factor states do not rebuild the input"
    return None


def _pairs_to_complex(pairs):
    return [complex(re, im) for re, im in pairs]


def _verify_mixed(rho: DensityMatrix, doc) -> str | None:
    print("notice: mixed-state report; brute-force partition check skipped", file=sys.stderr)
    tol = doc["tolerances"].get("oracle")
    for rec in doc["evidence"]:
        if rec["verdict"] == "INCONCLUSIVE":
            continue
        left, right = (tuple(x) for x in rec["bipartition"])
        red, d_a, d_b = reduce_to_bipartition(rho.matrix, rho.dims, Bipartition(left, right))
        oracle = REGISTRY.get(rec["oracle"])
        if oracle is None:
            return f"evidence record {rec}: unknown oracle"
        again = oracle(red, d_a, d_b, tol)
        if again.verdict.value != rec["verdict"]:
            return f"evidence record {rec}: recomputed verdict {again.verdict.value}"
        for key, value in rec["certificate"].items():
            got = again.certificate.get(key)
            if isinstance(value, (int, float)) and not abs(got - value) <= CERTIFICATE_TOL * max(1.0, abs(value)):
                return f"evidence record {rec}: certificate {key} recomputed as {got}"
            if not isinstance(value, (int, float)) and got != value:
                return f"evidence record {rec}: certificate {key} recomputed as {got}"
    claimed = Partition.from_list(doc["partition"])
    fresh = localize_mixed(rho, oracles=doc.get("oracles", DEFAULT_ORACLES), tol=tol, policy=doc.get("policy", "definite"))
    if claimed != fresh.partition:
        return f"partition {claimed.to_list()} differs from recomputed {fresh.partition.to_list()}"
    return None


def cmd_verify(args) -> int:
    try:
        state = load_state(args.state, validate=not args.no_validate)
        doc = load_report(args.report)
    except (OSError, ValueError) as exc:
        _err(f"cannot read input: {exc}")
        return EXIT_ERROR
    if doc.get("input_digest") not in (None, digest(args.state)):
        print("FAIL: report digest does not match the state file", file=sys.stderr)
        return EXIT_MISMATCH
    try:
        if doc["path"] == "pure" and isinstance(state, PureState):
            problem = _verify_pure(state, doc)
        else:
            rho = density_from_pure(state) if isinstance(state, PureState) else state
            problem = _verify_mixed(rho, doc)
    except (KeyError, TypeError, ValueError) as exc:
        _err(f"malformed report: {exc}")
        return EXIT_ERROR
    if problem:
        print(f"FAIL: {problem}", file=sys.stderr)
        return EXIT_MISMATCH
    print("OK")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entangloc", description="Localize partial entanglement in multipartite states.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a state file from a state spec")
    g.add_argument("spec", help="e.g. ghz:3, product:(bell,random:2:42), werner:0.5")
    g.add_argument("-o", "--out", help="output path (default stdout)")
    g.add_argument("--seed", type=int, default=None, help="seed for random:DIMS specs without an explicit seed")
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="find the finest separable partition of a state file")
    a.add_argument("input")
    a.add_argument("-o", "--out", help="report path (default stdout)")
    a.add_argument("--tol", type=float, default=SCHMIDT_TOL)
    a.add_argument("--oracle", default=",".join(DEFAULT_ORACLES), help="comma list in priority order")
    a.add_argument("--policy", choices=["definite", "heuristic"], default="definite")
    a.add_argument("--threads", type=int, default=1)
    a.add_argument("--no-validate", action="store_true")
    a.add_argument("--force-mixed", action="store_true", help="analyze a pure state on the density-matrix path")
    a.add_argument("--timing", action="store_true", help="record wall time in the report")
    a.add_argument("--seed", type=int, default=None, help="accepted for symmetry; analysis is deterministic")
    a.set_defaults(func=cmd_analyze)

    p = sub.add_parser("partitions", help="enumerate partitions or print counts")
    p.add_argument("n", type=int)
    p.add_argument("--mode", choices=["all", "bipartitions", "counts"], default="counts")
    p.set_defaults(func=cmd_partitions)

    v = sub.add_parser("verify", help="re-check a report against its state file")
    v.add_argument("state")
    v.add_argument("report")
    v.add_argument("--no-validate", action="store_true")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, which would collide with "completely entangled"
        return EXIT_ERROR if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
