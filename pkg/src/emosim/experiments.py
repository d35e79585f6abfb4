"""Reproducible parameter sweeps producing tidy CSV tables.

Four experiment families: threshold sweep with the default posting
priors, the same sweep with all priors equalized, the joy-anger prior-gap
sweep at a fixed threshold, and per-user vitality snapshots. Runs within
a sweep are independent; rows are keyed and ordered by (value, seed), so
output bytes do not depend on scheduling.
"""

from __future__ import annotations

import csv
import hashlib
import json
import multiprocessing
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence, Union

from . import engine, metrics
from .emotions import (
    EMOTIONS,
    Emotion,
    SimulationConfig,
    config_to_dict,
    params_with_proportions,
)
from .errors import ValidationError
from .graph import GeneratorParams, NetworkGraph, generate_network, load_edge_list

GraphSource = Union[str, Path, GeneratorParams]

# Desk-scale defaults: a 10k-node synthetic follower graph and runs of
# 10 steps per node.
DEFAULT_GRAPH_PARAMS = GeneratorParams(node_count=10_000, seed=1)
DEFAULT_TAUS = (0.0, 0.02, 0.04, 0.06, 0.08)
DEFAULT_GAPS = tuple(round(0.04 * i, 2) for i in range(11))  # 0.00 .. 0.40
DEFAULT_SEEDS = (1, 2, 3, 4, 5)
DEFAULT_GAP_TAU = 0.06


@dataclass(frozen=True)
class SweepSpec:
    """One experiment: vary ``variable`` over ``values`` across ``seeds``."""

    base_config: SimulationConfig
    variable: str  # "tau" or "gap"
    values: tuple[float, ...]
    seeds: tuple[int, ...]
    graph_source: GraphSource = DEFAULT_GRAPH_PARAMS

    def validate(self) -> None:
        if self.variable not in ("tau", "gap"):
            raise ValidationError(f"variable must be 'tau' or 'gap', got {self.variable!r}")
        if not self.values:
            raise ValidationError("values must be non-empty")
        if list(self.values) != sorted(self.values):
            raise ValidationError("values must be sorted ascending")
        if not self.seeds:
            raise ValidationError("seeds must be non-empty")


@dataclass(frozen=True)
class SweepRow:
    """All aggregates of one (value, seed) run."""

    value: float
    seed: int
    preferences: dict[Emotion, metrics.StrengthPreference]
    report: metrics.ProportionReport

    @property
    def diff_joy_anger_cf(self) -> Optional[float]:
        """Mean common-friends strength of joy minus anger retweets."""
        joy = self.preferences[Emotion.JOY].mean_common_friends
        anger = self.preferences[Emotion.ANGER].mean_common_friends
        if joy is None or anger is None:
            return None
        return joy - anger


def resolve_graph(source: GraphSource) -> NetworkGraph:
    if isinstance(source, GeneratorParams):
        return generate_network(source)
    return load_edge_list(source)


def run_cell(graph: NetworkGraph, config: SimulationConfig, value: float) -> SweepRow:
    """Run once and reduce to a SweepRow; the event log is discarded."""
    result = engine.run(graph, config)
    prefs = metrics.strength_preferences(result.events, graph)
    report = metrics.proportion_report(result.events, result.post_counts)
    return SweepRow(value=value, seed=config.seed, preferences=prefs, report=report)


# Fork-shared graph for worker processes; set only while a pool is alive.
_SHARED_GRAPH: Optional[NetworkGraph] = None


def _labeled_cell(graph: NetworkGraph, task) -> SweepRow:
    variable, value, config = task
    try:
        return run_cell(graph, config, value)
    except Exception as exc:
        raise RuntimeError(
            f"run failed at {variable}={value} seed={config.seed}: {exc}"
        ) from exc


def _pool_cell(task):
    return _labeled_cell(_SHARED_GRAPH, task)


def _run_cells(graph: NetworkGraph, tasks, workers: int) -> list[SweepRow]:
    """tasks: list of (variable, value, config); result order matches."""
    labeled = list(tasks)
    if workers <= 1 or len(labeled) <= 1:
        return [_labeled_cell(graph, task) for task in labeled]
    global _SHARED_GRAPH
    ctx = multiprocessing.get_context("fork")
    _SHARED_GRAPH = graph
    try:
        with ctx.Pool(min(workers, len(labeled))) as pool:
            return pool.map(_pool_cell, labeled, chunksize=1)
    finally:
        _SHARED_GRAPH = None


def _sweep(spec: SweepSpec, configs_for_value, graph: Optional[NetworkGraph],
           workers: int) -> list[SweepRow]:
    spec.validate()
    if graph is None:
        graph = resolve_graph(spec.graph_source)
    tasks = []
    for value in spec.values:
        for seed in spec.seeds:
            tasks.append((spec.variable, value, configs_for_value(value, seed)))
    rows = _run_cells(graph, tasks, workers)
    return sorted(rows, key=lambda r: (r.value, r.seed))


def sweep_tau(spec: SweepSpec, graph: Optional[NetworkGraph] = None,
              workers: int = 1) -> list[SweepRow]:
    """One run per (tau, seed) with the spec's posting priors."""
    if spec.variable != "tau":
        raise ValidationError(f"sweep_tau needs variable='tau', got {spec.variable!r}")

    def configure(value: float, seed: int) -> SimulationConfig:
        return replace(spec.base_config, tau=value, seed=seed)

    return _sweep(spec, configure, graph, workers)


def gap_proportions(gap: float):
    """Posting priors for one joy-anger gap: joy/anger straddle 0.25 symmetrically."""
    if not (0.0 <= gap <= 0.5):
        raise ValidationError(f"gap = {gap} must be in [0, 0.5]")
    return params_with_proportions(
        anger=0.25 - gap / 2.0, joy=0.25 + gap / 2.0, disgust=0.25, sadness=0.25,
    )


@dataclass(frozen=True)
class GapSweepResult:
    rows: list[SweepRow]
    crossover_tweets: Optional[float]  # largest gap where anger tweet share > joy's
    crossover_users: Optional[float]   # likewise for dominated-user share


def sweep_gap(spec: SweepSpec, tau: float = DEFAULT_GAP_TAU,
              graph: Optional[NetworkGraph] = None, workers: int = 1) -> GapSweepResult:
    """One run per (gap, seed) at fixed tau, plus crossover summaries."""
    if spec.variable != "gap":
        raise ValidationError(f"sweep_gap needs variable='gap', got {spec.variable!r}")
    for g in spec.values:
        gap_proportions(g)  # reject out-of-range gaps before any run

    def configure(value: float, seed: int) -> SimulationConfig:
        return replace(spec.base_config, emotion_params=gap_proportions(value),
                       tau=tau, seed=seed)

    rows = _sweep(spec, configure, graph, workers)
    return GapSweepResult(
        rows=rows,
        crossover_tweets=crossover_value(rows, "tweet_share"),
        crossover_users=crossover_value(rows, "user_share"),
    )


def equal_prior_run(base_config: SimulationConfig, taus: Sequence[float],
                    seeds: Sequence[int] = DEFAULT_SEEDS,
                    graph_source: GraphSource = DEFAULT_GRAPH_PARAMS,
                    graph: Optional[NetworkGraph] = None,
                    workers: int = 1) -> list[SweepRow]:
    """Threshold sweep with all four posting priors fixed at 0.25."""
    for e in EMOTIONS:
        if abs(base_config.emotion_params.proportion[e] - 0.25) > 1e-12:
            raise ValidationError(
                f"equal_prior_run needs all proportions = 0.25, got "
                f"{base_config.emotion_params.proportion[e]} for {e.label}"
            )
    spec = SweepSpec(base_config=base_config, variable="tau",
                     values=tuple(taus), seeds=tuple(seeds), graph_source=graph_source)
    return sweep_tau(spec, graph=graph, workers=workers)


def mean_share_curve(rows: Sequence[SweepRow], emotion: Emotion, share_attr: str) -> dict[float, float]:
    """Mean over seeds of one share, keyed by sweep value."""
    sums: dict[float, float] = {}
    counts: dict[float, int] = {}
    for r in rows:
        share = getattr(r.report, share_attr)[emotion]
        sums[r.value] = sums.get(r.value, 0.0) + share
        counts[r.value] = counts.get(r.value, 0) + 1
    return {v: sums[v] / counts[v] for v in sorted(sums)}


def crossover_value(rows: Sequence[SweepRow], share_attr: str) -> Optional[float]:
    """Largest sweep value where anger's mean share strictly exceeds joy's.

    Ties break toward the smaller value because equality does not count
    as exceeding. None when anger never leads.
    """
    anger = mean_share_curve(rows, Emotion.ANGER, share_attr)
    joy = mean_share_curve(rows, Emotion.JOY, share_attr)
    winning = [v for v in anger if anger[v] > joy[v]]
    return max(winning) if winning else None


_METRIC_COLUMNS = ("mean_cf", "recip", "retw_norm", "events",
                   "retweet_share", "tweet_share", "user_share")


def sweep_columns(variable: str) -> list[str]:
    cols = [variable, "seed", "total_posts", "total_retweets", "classified_users"]
    for e in EMOTIONS:
        cols.extend(f"{e.label}_{m}" for m in _METRIC_COLUMNS)
    cols.append("diff_joy_anger_cf")
    return cols


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_sweep_csv(rows: Sequence[SweepRow], path, variable: str) -> None:
    """Fixed column order, documented in a leading comment line."""
    cols = sweep_columns(variable)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("# columns: " + ",".join(cols) + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(cols)
        for r in sorted(rows, key=lambda r: (r.value, r.seed)):
            record = [r.value, r.seed, r.report.total_posts,
                      r.report.total_retweets, r.report.classified_users]
            for e in EMOTIONS:
                p = r.preferences[e]
                record.extend([
                    p.mean_common_friends, p.reciprocity_proportion,
                    p.mean_normalized_retweet_strength, p.event_count,
                    r.report.retweet_share[e], r.report.tweet_share[e],
                    r.report.user_share[e],
                ])
            record.append(r.diff_joy_anger_cf)
            writer.writerow([_cell(v) for v in record])


def read_sweep_csv(path) -> list[SweepRow]:
    """Inverse of write_sweep_csv; reconstructs rows for recomputation checks."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    rows = []
    for record in reader:
        d = dict(zip(header, record))
        opt = lambda s: None if s == "" else float(s)
        prefs = {}
        for e in EMOTIONS:
            prefs[e] = metrics.StrengthPreference(
                emotion=e,
                mean_common_friends=opt(d[f"{e.label}_mean_cf"]),
                reciprocity_proportion=opt(d[f"{e.label}_recip"]),
                mean_normalized_retweet_strength=opt(d[f"{e.label}_retw_norm"]),
                event_count=int(d[f"{e.label}_events"]),
            )
        report = metrics.ProportionReport(
            retweet_share={e: float(d[f"{e.label}_retweet_share"]) for e in EMOTIONS},
            tweet_share={e: float(d[f"{e.label}_tweet_share"]) for e in EMOTIONS},
            user_share={e: float(d[f"{e.label}_user_share"]) for e in EMOTIONS},
            total_posts=int(d["total_posts"]),
            total_retweets=int(d["total_retweets"]),
            classified_users=int(d["classified_users"]),
        )
        rows.append(SweepRow(value=float(d[header[0]]), seed=int(d["seed"]),
                             preferences=prefs, report=report))
    return rows


def config_hash(config: SimulationConfig) -> str:
    payload = json.dumps(config_to_dict(config), sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()


def write_sweep_manifest(path, *, experiment: str, variable: str,
                         values: Sequence[float], seeds: Sequence[int],
                         config: SimulationConfig, graph: NetworkGraph,
                         extra: Optional[dict] = None) -> None:
    """Provenance record: what was swept, on which graph, from which seeds."""
    manifest = {
        "experiment": experiment,
        "variable": variable,
        "values": list(values),
        "seeds": list(seeds),
        "config_hash": config_hash(config),
        "config": config_to_dict(config),
        "graph_hash": graph.content_hash(),
        "rng_algorithm": engine.RNG_ALGORITHM,
    }
    if extra:
        manifest.update(extra)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
