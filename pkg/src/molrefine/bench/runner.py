"""Batch evaluation: objectives x molecules, streamed traces, metrics.

Work fans out over (objective, molecule) pairs to a bounded thread
pool; a single writer appends traces to traces.jsonl in pair order, so
two runs of the same config are byte-identical and a killed run can
resume by skipping the pairs already present (a torn final line is
truncated and redone).
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from ..agent import LoopConfig, run_loop
from ..exceptions import ConfigurationError
from ..objective import ObjectiveSpec, resolve_objective
from ..proposer import build_proposer_factory
from ..retrieval import Database, load_database

_FSYNC_EVERY = 8


@dataclass(frozen=True)
class BenchConfig:
    molecules_file: str
    objectives: tuple[str, ...]
    loop: LoopConfig
    proposer: dict
    output_dir: str
    database: str | None = None
    parallelism: int | None = None  # None: one worker per core
    seed: int = 0

    def __post_init__(self) -> None:
        if self.parallelism is not None and self.parallelism < 1:
            raise ConfigurationError("parallelism must be >= 1")
        if not self.objectives:
            raise ConfigurationError("at least one objective is required")

    def worker_count(self) -> int:
        workers = self.parallelism or os.cpu_count() or 1
        rps = self.proposer.get("rate_limit_rps")
        if rps:
            workers = min(workers, max(1, int(rps)))
        return workers

    @classmethod
    def from_file(cls, path: str | Path) -> "BenchConfig":
        raw = json.loads(Path(path).read_text())
        loop_raw = raw.get("loop", {})
        loop = LoopConfig(
            max_iterations=loop_raw.get("max_iterations", 3),
            inner_loop_enabled=loop_raw.get("inner_loop_enabled", True),
            gradient_feedback=loop_raw.get("gradient_feedback", True),
            retrieval_enabled=loop_raw.get("retrieval_enabled", True),
        )
        return cls(
            molecules_file=raw["molecules_file"],
            objectives=tuple(raw["objectives"]),
            loop=loop,
            proposer=raw["proposer"],
            output_dir=raw["output_dir"],
            database=raw.get("database"),
            parallelism=raw.get("parallelism"),
            seed=raw.get("seed", 0),
        )

    def echo(self) -> dict:
        return {
            "molecules_file": self.molecules_file,
            "objectives": list(self.objectives),
            "loop": {
                "max_iterations": self.loop.max_iterations,
                "inner_loop_enabled": self.loop.inner_loop_enabled,
                "gradient_feedback": self.loop.gradient_feedback,
                "retrieval_enabled": self.loop.retrieval_enabled,
            },
            "proposer": self.proposer,
            "database": self.database,
            "parallelism": self.parallelism,
            "seed": self.seed,
        }


def _pair_id(objective_name: str, molecule_index: int) -> str:
    return f"{objective_name}#{molecule_index}"


def read_molecules(path: str | Path) -> list[str]:
    molecules = []
    for line in Path(path).read_text().splitlines():
        text = line.strip()
        if text and not text.startswith("#"):
            molecules.append(text.split()[0])
    if not molecules:
        raise ConfigurationError(f"no molecules in {path}")
    return molecules


def _completed_pairs(trace_path: Path) -> set[str]:
    """Pair ids already present; truncates a torn final line in place."""
    if not trace_path.exists():
        return set()
    done: set[str] = set()
    good_bytes = 0
    with open(trace_path, "rb") as fh:
        for raw in fh:
            try:
                obj = json.loads(raw.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError):
                break
            if not raw.endswith(b"\n"):
                break
            done.add(_pair_id(obj["objective"]["key"], obj["molecule_index"]))
            good_bytes += len(raw)
    with open(trace_path, "rb+") as fh:
        fh.truncate(good_bytes)
    return done


def run_benchmark(config: BenchConfig):
    """Run all pairs, stream traces, and return the aggregated result.

    Returns a BenchResult (see bench.report) aggregated from the full
    trace stream, never from in-memory state, so a resumed run and an
    uninterrupted run agree exactly.
    """
    from .report import aggregate_traces  # local import to avoid a cycle

    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    trace_path = out_dir / "traces.jsonl"

    molecules = read_molecules(config.molecules_file)
    specs: list[ObjectiveSpec] = [resolve_objective(text) for text in config.objectives]
    db: Database | None = load_database(config.database) if config.database else None
    factory = build_proposer_factory(config.proposer)

    pairs: list[tuple[str, ObjectiveSpec, int, str]] = []
    for key, spec in zip(config.objectives, specs):
        for mol_idx, smiles in enumerate(molecules):
            pairs.append((key, spec, mol_idx, smiles))

    done = _completed_pairs(trace_path)
    pending = [p for p in pairs if _pair_id(p[0], p[2]) not in done]

    def run_pair(pair) -> dict:
        key, spec, mol_idx, smiles = pair
        try:
            trace = run_loop(config.loop, smiles, spec, factory(), db=db)
            record = trace.to_dict()
        except Exception as exc:  # trace-level failures never kill the run
            record = {
                "schema": 1,
                "given": {"smiles": smiles, "properties": {}},
                "objective": {"name": spec.name, "compact": spec.compact()},
                "mode": config.loop.mode_label,
                "max_iterations": config.loop.max_iterations,
                "steps": [],
                "final": {"smiles": "", "valid": False, "hit": False, "similarity": None},
                "aborted": True,
                "error": f"{type(exc).__name__}: {exc}",
            }
        record["objective"]["key"] = key
        record["molecule_index"] = mol_idx
        return record

    if pending:
        with ThreadPoolExecutor(max_workers=config.worker_count()) as pool:
            futures = [pool.submit(run_pair, pair) for pair in pending]
            with open(trace_path, "a") as fh:
                for count, future in enumerate(futures, start=1):
                    fh.write(json.dumps(future.result(), sort_keys=True) + "\n")
                    fh.flush()
                    if count % _FSYNC_EVERY == 0:
                        os.fsync(fh.fileno())
                os.fsync(fh.fileno())

    from ..descriptors import default_tables

    echo = config.echo()
    echo["asset_hashes"] = default_tables().asset_hashes
    (out_dir / "config.json").write_text(json.dumps(echo, indent=2, sort_keys=True) + "\n")
    return aggregate_traces(trace_path)
