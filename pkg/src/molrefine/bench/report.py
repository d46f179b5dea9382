"""Aggregation and report writing.

aggregate_traces re-derives every metric from trace primitives (it
re-parses the final molecule, recomputes its properties, re-evaluates
the objective, and recomputes the similarity) and cross-checks the
recorded flags, so the summary is reproducible from traces.jsonl alone
and any drift between recorded and recomputed state raises.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..descriptors import compute_properties
from ..fingerprint import morgan_fingerprint, tanimoto
from ..molgraph import parse_smiles
from ..objective import evaluate, resolve_objective

_UNDEFINED = "NA"


@dataclass(frozen=True)
class ObjectiveRow:
    key: str
    n: int
    validity_pct: float
    hit_pct: float
    similarity_all: float | None
    similarity_valid: float | None
    similarity_hits: float | None
    aborted: int
    mode: str


@dataclass(frozen=True)
class BenchResult:
    rows: tuple[ObjectiveRow, ...]
    traces_path: str


def _recompute(record: dict) -> tuple[bool, bool, float | None]:
    """Validity, hit, and similarity re-derived from trace primitives."""
    final_smiles = record["final"]["smiles"]
    outcome = parse_smiles(final_smiles) if final_smiles else None
    if outcome is None or not outcome.valid:
        return False, False, None
    spec = resolve_objective(record["objective"]["compact"])
    given_props = record["given"]["properties"]
    props = compute_properties(outcome.mol, tuple(spec.property_ids()))
    hit = evaluate(spec, given_props, props).overall
    fp_conf = record.get("fp", {"radius": 2, "nbits": 2048})
    given = parse_smiles(record["given"]["smiles"]).mol
    sim = tanimoto(
        morgan_fingerprint(given, fp_conf["radius"], fp_conf["nbits"]),
        morgan_fingerprint(outcome.mol, fp_conf["radius"], fp_conf["nbits"]),
    )
    return True, hit, sim


def read_traces(trace_path: str | Path) -> list[dict]:
    records = []
    for line in Path(trace_path).read_text().splitlines():
        if line.strip():
            records.append(json.loads(line))
    return records


def aggregate_traces(trace_path: str | Path) -> BenchResult:
    records = read_traces(trace_path)
    by_objective: dict[str, list[dict]] = {}
    order: list[str] = []
    for record in records:
        key = record["objective"].get("key", record["objective"]["compact"])
        if key not in by_objective:
            by_objective[key] = []
            order.append(key)
        by_objective[key].append(record)

    rows = []
    for key in order:
        group = sorted(by_objective[key], key=lambda r: r.get("molecule_index", 0))
        n = len(group)
        sims_all: list[float] = []
        sims_valid: list[float] = []
        sims_hits: list[float] = []
        n_valid = 0
        n_hit = 0
        n_aborted = 0
        mode = group[0].get("mode", "full")
        for record in group:
            if record.get("aborted"):
                n_aborted += 1
            if record.get("aborted") and not record["final"]["smiles"]:
                valid, hit, sim = False, False, None
            else:
                valid, hit, sim = _recompute(record)
                recorded = record["final"]
                if (valid, hit) != (recorded["valid"], recorded["hit"]) or not _close(
                    sim, recorded["similarity"]
                ):
                    raise ValueError(
                        f"trace/recompute mismatch for {key} "
                        f"molecule {record.get('molecule_index')}: "
                        f"recomputed (valid={valid}, hit={hit}, sim={sim}) vs "
                        f"recorded {recorded}"
                    )
            n_valid += valid
            n_hit += hit
            sims_all.append(sim if valid and sim is not None else 0.0)
            if valid and sim is not None:
                sims_valid.append(sim)
                if hit:
                    sims_hits.append(sim)
        rows.append(ObjectiveRow(
            key=key,
            n=n,
            validity_pct=100.0 * n_valid / n,
            hit_pct=100.0 * n_hit / n,
            similarity_all=_mean(sims_all),
            similarity_valid=_mean(sims_valid),
            similarity_hits=_mean(sims_hits),
            aborted=n_aborted,
            mode=mode,
        ))
    return BenchResult(rows=tuple(rows), traces_path=str(trace_path))


def _mean(values: list[float]) -> float | None:
    if not values:
        return None
    return sum(values) / len(values)


def _close(a: float | None, b: float | None) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return a == b


def _fmt_pct(value: float) -> str:
    return f"{value:.4f}"


def _fmt_sim(value: float | None) -> str:
    return _UNDEFINED if value is None else f"{value:.6f}"


def write_summary_csv(result: BenchResult, path: str | Path) -> None:
    lines = ["objective,mode,n,validity_pct,hit_pct,similarity_all,similarity_valid,similarity_hits,aborted"]
    for row in result.rows:
        lines.append(",".join([
            row.key,
            row.mode,
            str(row.n),
            _fmt_pct(row.validity_pct),
            _fmt_pct(row.hit_pct),
            _fmt_sim(row.similarity_all),
            _fmt_sim(row.similarity_valid),
            _fmt_sim(row.similarity_hits),
            str(row.aborted),
        ]))
    Path(path).write_text("\n".join(lines) + "\n")


def write_plotdata_csv(result: BenchResult, path: str | Path) -> None:
    lines = ["objective,mode,hit,similarity"]
    for row in result.rows:
        lines.append(",".join([
            row.key, row.mode, _fmt_pct(row.hit_pct), _fmt_sim(row.similarity_valid),
        ]))
    Path(path).write_text("\n".join(lines) + "\n")


def _preset_group(key: str) -> tuple[str, str, str]:
    """(family, base objective, threshold level) for table grouping."""
    parts = key.split("/")
    if len(parts) == 3 and parts[0] in ("single", "multi") and parts[1] in ("loose", "strict"):
        return parts[0], parts[2], parts[1]
    family = "multi" if "," in key else "single"
    return family, key, "-"


def write_summary_text(result: BenchResult, path: str | Path) -> None:
    """Text table grouped single/multi with loose rows above strict."""
    groups: dict[tuple[str, str], dict[str, ObjectiveRow]] = {}
    order: list[tuple[str, str]] = []
    for row in result.rows:
        family, base, level = _preset_group(row.key)
        bucket = (family, base)
        if bucket not in groups:
            groups[bucket] = {}
            order.append(bucket)
        groups[bucket][level] = row

    header = f"{'objective':28s} {'threshold':9s} {'n':>5s} {'valid%':>8s} {'hit%':>8s} {'similarity':>11s}"
    lines: list[str] = []
    for family in ("single", "multi"):
        members = [b for b in order if b[0] == family]
        if not members:
            continue
        lines.append(f"== {family}-property objectives ==")
        lines.append(header)
        lines.append("-" * len(header))
        for bucket in members:
            for level in ("loose", "strict", "-"):
                row = groups[bucket].get(level)
                if row is None:
                    continue
                lines.append(
                    f"{bucket[1]:28s} {level:9s} {row.n:>5d} "
                    f"{row.validity_pct:>8.1f} {row.hit_pct:>8.1f} "
                    f"{_fmt_sim(row.similarity_valid):>11s}"
                )
        lines.append("")
    Path(path).write_text("\n".join(lines).rstrip("\n") + "\n")


def write_report(result: BenchResult, out_dir: str | Path, figures: bool = False) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    write_summary_csv(result, out / "summary.csv")
    written.append(out / "summary.csv")
    write_summary_text(result, out / "summary.txt")
    written.append(out / "summary.txt")
    write_plotdata_csv(result, out / "plotdata.csv")
    written.append(out / "plotdata.csv")
    if figures:
        written.extend(render_figures(result, out))
    return written


def render_figures(result: BenchResult, out_dir: str | Path) -> list[Path]:
    """Hit-vs-similarity scatter and per-objective validity/hit bars."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out = Path(out_dir)
    written = []

    fig, ax = plt.subplots(figsize=(6, 5))
    for row in result.rows:
        if row.similarity_valid is None:
            continue
        ax.scatter(row.similarity_valid * 100.0, row.hit_pct, label=row.key)
    ax.set_xlabel("similarity of valid molecules (%)")
    ax.set_ylabel("hit ratio (%)")
    ax.set_title("hit ratio vs. similarity")
    if result.rows:
        ax.legend(fontsize=7, loc="best")
    fig.tight_layout()
    scatter_path = out / "fig_hit_vs_similarity.png"
    fig.savefig(scatter_path, dpi=150)
    plt.close(fig)
    written.append(scatter_path)

    fig, ax = plt.subplots(figsize=(max(6, len(result.rows) * 0.9), 4.5))
    keys = [row.key for row in result.rows]
    xs = range(len(keys))
    width = 0.4
    ax.bar([x - width / 2 for x in xs], [r.validity_pct for r in result.rows],
           width=width, label="validity %")
    ax.bar([x + width / 2 for x in xs], [r.hit_pct for r in result.rows],
           width=width, label="hit %")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(keys, rotation=45, ha="right", fontsize=7)
    ax.set_ylabel("percent")
    ax.set_ylim(0, 100)
    ax.legend()
    fig.tight_layout()
    bars_path = out / "fig_validity_hit.png"
    fig.savefig(bars_path, dpi=150)
    plt.close(fig)
    written.append(bars_path)
    return written
