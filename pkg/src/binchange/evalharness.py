"""Experiment runner: detection delay, change counts, approximation ratios,
candidate counts and timing over synthetic workloads."""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

from binchange.blockseq import BlockSequence
from binchange.detector import ChangeEvent, Detector, DetectorConfig
from binchange.solver import ChangeResult, exact_change_block, find_change
from binchange.synthgen import WorkloadSpec, generate

CSV_COLUMNS = (
    "workload",
    "length",
    "segment",
    "seed",
    "tau",
    "eps",
    "query_period",
    "exact_below",
    "queries",
    "detected",
    "false_positives",
    "missed",
    "mean_delay",
    "min_ratio",
    "avg_ratio",
    "cand_frac_n",
    "cand_frac_k",
    "mean_tested",
    "mean_blocks",
    "query_time",
    "wall_time",
)


@dataclass
class RunMetrics:
    """Aggregates of one detector run.

    Ratio and candidate statistics are taken over every (query, polarity)
    pair; ratios skip pairs whose exact score is 0. ``query_time`` is the
    time spent inside the approximate search only.
    """

    detected: list[ChangeEvent] = field(default_factory=list)
    delays: list[int] = field(default_factory=list)
    false_positives: int = 0
    missed: int = 0
    queries: int = 0
    min_ratio: float = math.nan
    avg_ratio: float = math.nan
    cand_frac_n: float = 0.0
    cand_frac_k: float = 0.0
    mean_tested: float = 0.0
    mean_blocks: float = 0.0
    query_time: float = 0.0
    wall_time: float = 0.0

    @property
    def mean_delay(self) -> float:
        return sum(self.delays) / len(self.delays) if self.delays else math.nan


class _Recorder(Detector):
    def __init__(self, config: DetectorConfig, ratios: bool) -> None:
        super().__init__(config)
        self.ratios = ratios
        self.ratio_min = math.inf
        self.ratio_sum = 0.0
        self.ratio_count = 0
        self.frac_n = 0.0
        self.frac_k = 0.0
        self.tested = 0
        self.blocks = 0
        self.solves = 0
        self.query_time = 0.0

    def _solve(self, seq: BlockSequence) -> ChangeResult:
        t0 = time.perf_counter()
        approx = find_change(seq, self.config.eps)
        self.query_time += time.perf_counter() - t0
        k = seq.k
        self.solves += 1
        self.tested += approx.tested
        self.blocks += k
        if k:
            self.frac_n += approx.tested / seq.n
            self.frac_k += approx.tested / k
        exact = None
        if self.ratios:
            exact = approx if self.config.eps == 0.0 else exact_change_block(seq)
            if exact.score > 0.0:
                r = approx.score / exact.score
                self.ratio_min = min(self.ratio_min, r)
                self.ratio_sum += r
                self.ratio_count += 1
        if k <= self.config.exact_below:
            return exact if exact is not None else exact_change_block(seq)
        return approx


def match_detections(
    true_changes: Sequence[int], detections: Sequence[int]
) -> tuple[list[int], int, int]:
    """Pair each detection with the latest true change at or before it.

    A detection counts towards delay only if that true change is still
    unmatched; otherwise it is a false positive. Returns
    ``(delays, false_positives, missed)``.
    """
    truth = sorted(true_changes)
    matched = [False] * len(truth)
    delays: list[int] = []
    fp = 0
    t = -1
    for d in sorted(detections):
        while t + 1 < len(truth) and truth[t + 1] <= d:
            t += 1
        if t >= 0 and not matched[t]:
            matched[t] = True
            delays.append(d - truth[t])
        else:
            fp += 1
    return delays, fp, matched.count(False)


def run_bits(
    bits: Iterable[int],
    config: DetectorConfig,
    true_changes: Sequence[int] = (),
    ratios: bool = True,
) -> RunMetrics:
    rec = _Recorder(config, ratios)
    t0 = time.perf_counter()
    for bit in bits:
        rec.observe(bit)
    wall = time.perf_counter() - t0
    delays, fp, missed = match_detections(true_changes, [e.detected_at for e in rec.events])
    m = RunMetrics(
        detected=list(rec.events),
        delays=delays,
        false_positives=fp,
        missed=missed,
        queries=rec.solves // 2,
        query_time=rec.query_time,
        wall_time=wall,
    )
    if rec.ratio_count:
        m.min_ratio = rec.ratio_min
        m.avg_ratio = rec.ratio_sum / rec.ratio_count
    if rec.solves:
        m.cand_frac_n = rec.frac_n / rec.solves
        m.cand_frac_k = rec.frac_k / rec.solves
        m.mean_tested = rec.tested / rec.solves
        m.mean_blocks = rec.blocks / rec.solves
    return m


def run_experiment(spec: WorkloadSpec, config: DetectorConfig, ratios: bool = True) -> RunMetrics:
    """Stream a synthetic workload through an instrumented detector."""
    bits, changes = generate(spec)
    return run_bits(bits.tolist(), config, changes, ratios)


def metrics_row(spec: WorkloadSpec, config: DetectorConfig, m: RunMetrics) -> dict:
    return {
        "workload": spec.kind,
        "length": spec.length,
        "segment": spec.segment,
        "seed": spec.seed,
        "tau": config.tau,
        "eps": config.eps,
        "query_period": config.query_period,
        "exact_below": config.exact_below,
        "queries": m.queries,
        "detected": len(m.detected),
        "false_positives": m.false_positives,
        "missed": m.missed,
        "mean_delay": m.mean_delay,
        "min_ratio": m.min_ratio,
        "avg_ratio": m.avg_ratio,
        "cand_frac_n": m.cand_frac_n,
        "cand_frac_k": m.cand_frac_k,
        "mean_tested": m.mean_tested,
        "mean_blocks": m.mean_blocks,
        "query_time": m.query_time,
        "wall_time": m.wall_time,
    }


def _cell(args: tuple[WorkloadSpec, DetectorConfig, bool]) -> dict:
    spec, config, ratios = args
    return metrics_row(spec, config, run_experiment(spec, config, ratios))


def run_grid(
    specs: Iterable[WorkloadSpec],
    taus: Iterable[float],
    epss: Iterable[float],
    query_period: int = 1,
    exact_below: int = 64,
    ratios: bool = True,
    jobs: int = 1,
) -> list[dict]:
    """One metrics row per (workload spec, tau, eps), in grid order."""
    taus = list(taus)
    epss = list(epss)
    cells = [
        (spec, DetectorConfig(tau=tau, eps=eps, query_period=query_period, exact_below=exact_below), ratios)
        for spec in specs
        for tau in taus
        for eps in epss
    ]
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_cell, cells))
    return [_cell(c) for c in cells]


def write_csv(rows: Iterable[dict], fh: TextIO) -> None:
    writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
        fh.flush()
