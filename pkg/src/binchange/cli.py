"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 input error.
"""

from __future__ import annotations

import csv
import math
import sys
import time
from contextlib import contextmanager
from typing import Iterator, TextIO

import click
import numpy as np

from binchange.blockseq import BlockSequence
from binchange.detector import Detector, DetectorConfig
from binchange.evalharness import run_grid, write_csv
from binchange.solver import find_change
from binchange.synthgen import KINDS, WorkloadSpec, generate, write_bits, write_truth

EVENT_COLUMNS = ("detected_at", "split_at", "score", "direction", "window_len")
EXIT_USAGE = 1
EXIT_INPUT = 2


class InputError(click.ClickException):
    exit_code = EXIT_INPUT


@contextmanager
def _open(path: str, mode: str) -> Iterator[TextIO]:
    if path == "-":
        yield sys.stdin if "r" in mode else sys.stdout
        return
    try:
        fh = open(path, mode, newline="" if "w" in mode else None)
    except OSError as exc:
        raise InputError(f"cannot open {path}: {exc.strerror}") from exc
    with fh:
        yield fh


def parse_list(text: str, kind=float, default_step=None) -> list:
    """Parse ``"a,b,c"``, ``"a..b"`` or ``"a..b:step"``; empty text gives ``[]``.

    Ranges are inclusive. Without an explicit step the step is
    ``default_step``, or the start value when that is ``None``.
    """
    text = text.strip()
    if not text:
        return []
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            span, _, step_text = part.partition(":")
            lo_text, hi_text = span.split("..", 1)
            lo, hi = kind(lo_text), kind(hi_text)
            step = kind(step_text) if step_text else (default_step if default_step is not None else lo)
            if step <= 0:
                raise click.BadParameter(f"range {part!r} needs a positive step")
            count = int(math.floor((hi - lo) / step + 1e-9)) + 1
            vals = (lo + i * step for i in range(max(count, 0)))
            out.extend(round(v, 12) if kind is float else kind(v) for v in vals)
        else:
            out.append(kind(part))
    return out


def _grid(kind, default_step=None, check=None):
    """Click callback parsing a list/range option; ``None`` passes through."""

    def convert(ctx, param, value):
        if value is None:
            return None
        try:
            values = parse_list(value, kind, default_step)
        except ValueError as exc:
            raise click.BadParameter(str(exc)) from exc
        if check is not None:
            for v in values:
                check(v)
        return values

    return convert


def _check_eps(eps: float) -> None:
    if not 0.0 <= eps < 1.0:
        raise click.BadParameter(f"eps must lie in [0, 1), got {eps}")


def _check_tau(tau: float) -> None:
    if tau < 0:
        raise click.BadParameter(f"tau must be >= 0, got {tau}")


def _scalar(check):
    def convert(ctx, param, value):
        check(value)
        return value

    return convert


@click.group()
def cli():
    """Change-point detection for streams of 0/1 values."""


@cli.command()
@click.option("--kind", type=click.Choice(KINDS, case_sensitive=False), default="step", show_default=True)
@click.option("--length", type=click.IntRange(min=1), default=200_000, show_default=True)
@click.option("--segment", type=click.IntRange(min=1), default=10_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", "-o", default="-", show_default=True, help="Bit file, one 0/1 per line.")
@click.option("--truth", default=None, help="Truth CSV path (default: <output>.truth.csv).")
def synth(kind, length, segment, seed, output, truth):
    """Generate a synthetic bit stream and its true change positions."""
    try:
        spec = WorkloadSpec(kind, length, seed, segment)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    bits, changes = generate(spec)
    with _open(output, "w") as fh:
        write_bits(bits, fh)
    if truth is None and output != "-":
        truth = output + ".truth.csv"
    if truth is not None:
        with _open(truth, "w") as fh:
            write_truth(changes, fh)


def read_bits(fh: TextIO) -> Iterator[int]:
    for lineno, line in enumerate(fh, start=1):
        s = line.rstrip("\r\n")
        if s == "1":
            yield 1
        elif s == "0":
            yield 0
        else:
            raise InputError(f"line {lineno}: expected '0' or '1', got {s!r}")


@cli.command()
@click.option("--input", "-i", "input_path", default="-", show_default=True)
@click.option("--output", "-o", default="-", show_default=True)
@click.option("--tau", type=float, default=6.0, show_default=True, callback=_scalar(_check_tau))
@click.option("--eps", type=float, default=0.0, show_default=True, callback=_scalar(_check_eps))
@click.option("--query-period", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--exact-below", type=click.IntRange(min=0), default=64, show_default=True)
def detect(input_path, output, tau, eps, query_period, exact_below):
    """Detect changes in a bit stream; writes one CSV row per event."""
    det = Detector(DetectorConfig(tau=tau, eps=eps, query_period=query_period, exact_below=exact_below))
    with _open(input_path, "r") as src, _open(output, "w") as dst:
        writer = csv.writer(dst, lineterminator="\n")
        writer.writerow(EVENT_COLUMNS)
        dst.flush()
        for ev in det.run(read_bits(src)):
            writer.writerow([ev.detected_at, ev.split_at, repr(ev.score), ev.direction, ev.window_len])
            dst.flush()


@cli.command()
@click.option("--workload", type=click.Choice(KINDS, case_sensitive=False), default="step", show_default=True)
@click.option("--length", type=click.IntRange(min=1), default=200_000, show_default=True)
@click.option("--lengths", default=None, callback=_grid(int),
              help="Length grid, e.g. 100000..1000000 (step defaults to the start); overrides --length.")
@click.option("--segment", type=click.IntRange(min=1), default=10_000, show_default=True)
@click.option("--seeds", "--seed", default="0", show_default=True, callback=_grid(int, 1))
@click.option("--tau", default="6", show_default=True, callback=_grid(float, 1, _check_tau),
              help="Threshold grid, e.g. 1..10.")
@click.option("--eps", default="0", show_default=True, callback=_grid(float, 0.1, _check_eps),
              help="Approximation grid, e.g. 0,0.1,0.5,0.9.")
@click.option("--query-period", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--exact-below", type=click.IntRange(min=0), default=64, show_default=True)
@click.option("--ratios/--no-ratios", default=True, show_default=True,
              help="Also run the exact search at every query to measure approximation ratios.")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--output", "-o", default="-", show_default=True)
def experiment(workload, length, lengths, segment, seeds, tau, eps, query_period, exact_below, ratios, jobs, output):
    """Run the detector over a (length, seed, tau, eps) grid; one CSV row per cell."""
    if lengths is None:
        lengths = [length]
    try:
        specs = [WorkloadSpec(workload, n, s, segment) for n in lengths for s in seeds]
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    rows = run_grid(specs, tau, eps, query_period=query_period, exact_below=exact_below, ratios=ratios, jobs=jobs)
    with _open(output, "w") as fh:
        write_csv(rows, fh)


def bench_pushes(pushes: int, seed: int, query_period: int, eps: float) -> dict:
    if pushes == 0:
        return {"pushes": 0, "seconds": 0.0, "ns_per_push": 0.0, "merges_per_push": 0.0, "events": 0}
    seg = 10_000
    length = -(-pushes // seg) * seg
    bits, _ = generate(WorkloadSpec("step", length, seed, seg))
    bits = bits[:pushes].tolist()
    det = Detector(DetectorConfig(tau=6.0, eps=eps, query_period=query_period or pushes + 1))
    t0 = time.perf_counter()
    for b in bits:
        det.observe(b)
    dt = time.perf_counter() - t0
    merges = det.up.merges + det.down.merges
    return {
        "pushes": pushes,
        "seconds": dt,
        "ns_per_push": 1e9 * dt / pushes,
        "merges_per_push": merges / (2 * pushes),
        "events": len(det.events),
    }


def bench_queries(lengths: list[int], epss: list[float], seed: int, repeats: int) -> list[dict]:
    rows = []
    for n in lengths:
        bits, _ = generate(WorkloadSpec("hill", n, seed))
        seq = BlockSequence.from_bits(bits.tolist())
        for eps in epss:
            best = math.inf
            calls = 0
            res = None
            for _ in range(repeats):
                t0 = time.perf_counter()
                calls = 0
                while True:
                    res = find_change(seq, eps)
                    calls += 1
                    dt = time.perf_counter() - t0
                    if dt > 0.02:
                        break
                best = min(best, dt / calls)
            rows.append({"n": n, "k": seq.k, "eps": eps, "latency_us": best * 1e6, "tested": res.tested})
    return rows


def fit_exponents(rows: list[dict]) -> dict[float, float]:
    """Slope of log latency against log n, per eps."""
    out = {}
    for eps in sorted({r["eps"] for r in rows}):
        pts = [(r["n"], r["latency_us"]) for r in rows if r["eps"] == eps]
        if len(pts) >= 2 and len({n for n, _ in pts}) >= 2:
            x = np.log([n for n, _ in pts])
            y = np.log([t for _, t in pts])
            out[eps] = float(np.polyfit(x, y, 1)[0])
    return out


@cli.command()
@click.option("--pushes", type=click.IntRange(min=0), default=1_000_000, show_default=True)
@click.option("--query-period", type=click.IntRange(min=0), default=0, show_default=True,
              help="Query period during the push benchmark; 0 disables queries.")
@click.option("--lengths", default="100000,1000000", show_default=True, callback=_grid(int),
              help="Hill lengths for the query-latency benchmark.")
@click.option("--eps", default="0,0.1,0.5,0.9", show_default=True,
              callback=_grid(float, 0.1, _check_eps))
@click.option("--repeats", type=click.IntRange(min=1), default=3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "csv"]), default="text", show_default=True)
@click.option("--output", "-o", default="-", show_default=True)
def bench(pushes, query_period, lengths, eps, repeats, seed, fmt, output):
    """Measure push throughput and query latency against window size."""
    push = bench_pushes(pushes, seed, query_period, eps[0] if eps else 0.0)
    rows = bench_queries(lengths, eps, seed, repeats)
    exps = fit_exponents(rows)
    with _open(output, "w") as fh:
        if fmt == "csv":
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["kind", "n", "k", "eps", "value", "unit"])
            w.writerow(["push", push["pushes"], "", "", push["ns_per_push"], "ns/push"])
            w.writerow(["merges", push["pushes"], "", "", push["merges_per_push"], "merges/push"])
            for r in rows:
                w.writerow(["query", r["n"], r["k"], r["eps"], r["latency_us"], "us/query"])
            for e, slope in exps.items():
                w.writerow(["exponent", "", "", e, slope, "d log latency / d log n"])
        else:
            fh.write(
                f"pushes: {push['pushes']}  time: {push['seconds']:.3f}s  "
                f"{push['ns_per_push']:.0f} ns/push  {push['merges_per_push']:.3f} merges/push  "
                f"events: {push['events']}\n"
            )
            for r in rows:
                fh.write(
                    f"n={r['n']:>9}  k={r['k']:>5}  eps={r['eps']:<4}  "
                    f"{r['latency_us']:10.1f} us/query  tested={r['tested']}\n"
                )
            for e, slope in exps.items():
                fh.write(f"eps={e}: latency ~ n^{slope:.3f}\n")


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, prog_name="binchange", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_USAGE
    except InputError as exc:
        exc.show()
        return EXIT_INPUT
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
