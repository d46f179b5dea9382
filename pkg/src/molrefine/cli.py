"""Command-line interface.

Exit codes: 0 success, 1 usage error (bad flags or configuration),
2 runtime failure. Reporting an invalid molecule from `parse` is a
successful run; the classification is the result.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .agent import LoopConfig, run_loop
from .bench import BenchConfig, aggregate_traces, run_benchmark, write_report
from .descriptors import REGISTERED_PROPERTIES, compute_properties
from .exceptions import ConfigurationError, UsageError
from .fingerprint import DEFAULT_NBITS, DEFAULT_RADIUS, morgan_fingerprint, tanimoto
from .molgraph import graph_signature, parse_smiles
from .objective import resolve_objective
from .proposer import build_proposer_factory
from .retrieval import build_index, load_database, retrieve_example


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage problems exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _parse_outcome_dict(smiles: str) -> dict:
    outcome = parse_smiles(smiles)
    if outcome.valid:
        mol = outcome.mol
        return {
            "valid": True,
            "atoms": len(mol.atoms),
            "bonds": len(mol.bonds),
            "rings": len(mol.rings),
            "signature": graph_signature(mol),
        }
    return {
        "valid": False,
        "category": outcome.error.category.value,
        "message": outcome.error.render(),
        "position": outcome.error.position,
    }


def _proposer_factory_from_arg(text: str):
    if ":" not in text:
        raise UsageError(
            "proposer must be 'scripted:<file.json>' or 'remote:<config.json>'"
        )
    kind, _, path = text.partition(":")
    if kind == "scripted":
        return build_proposer_factory({"kind": "scripted", "path": path})
    if kind == "remote":
        raw = json.loads(Path(path).read_text())
        raw.setdefault("kind", "remote_chat")
        return build_proposer_factory(raw)
    raise UsageError(f"unknown proposer kind {kind!r}")


_MODE_FLAGS = {
    "full": {},
    "no-inner": {"inner_loop_enabled": False},
    "generic": {"gradient_feedback": False},
    "no-retrieval": {"retrieval_enabled": False},
}


def cmd_parse(args) -> int:
    print(json.dumps(_parse_outcome_dict(args.smiles), indent=2))
    return 0


def cmd_props(args) -> int:
    outcome = parse_smiles(args.smiles)
    if not outcome.valid:
        raise UsageError(f"molecule does not parse: {outcome.error.render()}")
    ids = tuple(args.properties.split(",")) if args.properties else REGISTERED_PROPERTIES
    print(json.dumps(compute_properties(outcome.mol, ids), indent=2, sort_keys=True))
    return 0


def cmd_sim(args) -> int:
    mols = []
    for smiles in (args.smiles_a, args.smiles_b):
        outcome = parse_smiles(smiles)
        if not outcome.valid:
            raise UsageError(f"{smiles!r} does not parse: {outcome.error.render()}")
        mols.append(outcome.mol)
    fps = [morgan_fingerprint(m, args.radius, args.nbits) for m in mols]
    print(f"{tanimoto(fps[0], fps[1]):.6f}")
    return 0


def cmd_db_build(args) -> int:
    db = build_index(
        args.input, args.out, nbits=args.nbits, radius=args.radius,
        property_ids=tuple(args.properties.split(",")) if args.properties else REGISTERED_PROPERTIES,
    )
    print(json.dumps({"records": db.header.count, "out": args.out}, indent=2))
    return 0


def cmd_db_stats(args) -> int:
    db = load_database(args.index)
    print(json.dumps({
        "version": db.header.version,
        "count": db.header.count,
        "nbits": db.header.nbits,
        "radius": db.header.radius,
        "properties": list(db.header.properties),
        "asset_hashes": db.header.asset_hashes,
    }, indent=2, sort_keys=True))
    return 0


def cmd_db_query(args) -> int:
    db = load_database(args.index)
    spec = resolve_objective(args.objective)
    given = parse_smiles(args.given)
    if not given.valid:
        raise UsageError(f"given molecule does not parse: {given.error.render()}")
    query = parse_smiles(args.smiles)
    if not query.valid:
        raise UsageError(f"query molecule does not parse: {query.error.render()}")
    props_m = compute_properties(given.mol, tuple(spec.property_ids()))
    fp = morgan_fingerprint(query.mol, db.header.radius, db.header.nbits)
    record = retrieve_example(db, spec, props_m, fp, exclude={
        graph_signature(given.mol), graph_signature(query.mol),
    })
    if record is None:
        print(json.dumps({"found": False}))
    else:
        print(json.dumps({
            "found": True,
            "smiles": record.smiles,
            "similarity": tanimoto(record.fingerprint, fp),
            "properties": record.properties,
        }, indent=2, sort_keys=True))
    return 0


def cmd_db_sample(args) -> int:
    lines = [
        line.strip() for line in Path(args.input).read_text().splitlines()
        if line.strip() and not line.startswith("#")
    ]
    if args.n > len(lines):
        raise UsageError(f"cannot sample {args.n} from {len(lines)} molecules")
    rng = random.Random(args.seed)
    sample = rng.sample(lines, args.n)
    Path(args.out).write_text("\n".join(sample) + "\n")
    print(json.dumps({"sampled": args.n, "out": args.out}))
    return 0


def cmd_optimize(args) -> int:
    spec = resolve_objective(args.objective)
    factory = _proposer_factory_from_arg(args.proposer)
    flags = _MODE_FLAGS.get(args.mode)
    if flags is None:
        raise UsageError(f"unknown mode {args.mode!r}")
    config = LoopConfig(max_iterations=args.iterations, **flags)
    db = load_database(args.db) if args.db else None
    trace = run_loop(config, args.smiles, spec, factory(), db=db)
    print(json.dumps(trace.to_dict(), indent=2, sort_keys=True))
    return 0


def cmd_bench(args) -> int:
    config = BenchConfig.from_file(args.config)
    result = run_benchmark(config)
    written = write_report(result, config.output_dir, figures=False)
    print(json.dumps({
        "traces": result.traces_path,
        "reports": [str(p) for p in written],
        "objectives": len(result.rows),
    }, indent=2))
    return 0


def cmd_report(args) -> int:
    results_dir = Path(args.results_dir)
    trace_path = results_dir / "traces.jsonl"
    if not trace_path.exists():
        raise UsageError(f"no traces.jsonl under {results_dir}")
    result = aggregate_traces(trace_path)
    written = write_report(result, results_dir, figures=not args.no_figures)
    print(json.dumps({"reports": [str(p) for p in written]}, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="molrefine", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a SMILES string, print the outcome as JSON")
    p.add_argument("smiles")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("props", help="compute properties of a molecule")
    p.add_argument("smiles")
    p.add_argument("--properties", default="", help="comma-separated ids (default: all)")
    p.set_defaults(func=cmd_props)

    p = sub.add_parser("sim", help="Tanimoto similarity of two molecules")
    p.add_argument("smiles_a")
    p.add_argument("smiles_b")
    p.add_argument("--radius", type=int, default=DEFAULT_RADIUS)
    p.add_argument("--nbits", type=int, default=DEFAULT_NBITS)
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("db", help="example-molecule database")
    db_sub = p.add_subparsers(dest="db_command", required=True)

    b = db_sub.add_parser("build", help="build an index from a SMILES file")
    b.add_argument("--input", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--nbits", type=int, default=DEFAULT_NBITS)
    b.add_argument("--radius", type=int, default=DEFAULT_RADIUS)
    b.add_argument("--properties", default="")
    b.set_defaults(func=cmd_db_build)

    s = db_sub.add_parser("stats", help="print index header")
    s.add_argument("index")
    s.set_defaults(func=cmd_db_stats)

    q = db_sub.add_parser("query", help="retrieve the best example molecule")
    q.add_argument("index")
    q.add_argument("--smiles", required=True, help="modified molecule (similarity query)")
    q.add_argument("--given", required=True, help="given molecule (objective reference)")
    q.add_argument("--objective", required=True)
    q.set_defaults(func=cmd_db_query)

    m = db_sub.add_parser("sample", help="seeded sample of N molecules from a SMILES file")
    m.add_argument("--input", required=True)
    m.add_argument("--out", required=True)
    m.add_argument("--n", type=int, default=500)
    m.add_argument("--seed", type=int, default=0)
    m.set_defaults(func=cmd_db_sample)

    p = sub.add_parser("optimize", help="run the refinement loop on one molecule")
    p.add_argument("smiles")
    p.add_argument("--objective", required=True)
    p.add_argument("--proposer", required=True, help="scripted:<file> or remote:<config.json>")
    p.add_argument("--mode", default="full", choices=sorted(_MODE_FLAGS))
    p.add_argument("--iterations", "-T", type=int, default=3)
    p.add_argument("--db", default="")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("bench", help="run a benchmark from a JSON config")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", help="re-aggregate traces and render reports/figures")
    p.add_argument("results_dir")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.func(args)
    except (UsageError, ConfigurationError) as exc:
        print(f"molrefine: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failure
        print(f"molrefine: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
