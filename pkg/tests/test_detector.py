import math

import numpy as np
import pytest

from binchange.blockseq import BlockSequence
from binchange.detector import DECREASE, INCREASE, Detector, DetectorConfig, detect
from binchange.solver import exact_change_block


def two_segment(p_a, p_b, n=10_000, seed=0):
    rng = np.random.default_rng(seed)
    a = (rng.random(n) < p_a).astype(int)
    b = (rng.random(n) < p_b).astype(int)
    return np.concatenate([a, b]).tolist()


def test_single_increase_detected():
    bits = two_segment(0.25, 0.75, seed=42)
    events = detect(bits, tau=6, eps=0, query_period=1)
    assert len(events) == 1
    ev = events[0]
    assert ev.direction == INCREASE
    assert abs(ev.split_at - 10_001) <= 500
    assert ev.split_at <= ev.detected_at
    assert ev.score > 6 + math.log(ev.window_len)


def test_decrease_mirrors_increase():
    bits = two_segment(0.25, 0.75, seed=42)
    flipped = [1 - b for b in bits]
    up = detect(bits, tau=6, eps=0)
    down = detect(flipped, tau=6, eps=0)
    assert [e.direction for e in down] == [DECREASE]
    assert [(e.detected_at, e.split_at, e.window_len) for e in down] == [
        (e.detected_at, e.split_at, e.window_len) for e in up
    ]
    assert down[0].score == pytest.approx(up[0].score, rel=1e-12)


def test_constant_stream_never_fires():
    assert detect([0] * 5000, tau=0) == []
    assert detect([1] * 5000, tau=0) == []


def test_sigma():
    det = Detector(tau=6)
    with pytest.raises(ValueError):
        det.sigma()
    det.up.n = 20_000
    assert det.sigma() == pytest.approx(15.9035, abs=1e-4)
    det = Detector(tau=0)
    det.observe(0)
    assert det.sigma() == 0.0
    prev = -math.inf
    for _ in range(50):
        det.observe(0)
        s = det.sigma()
        assert s >= prev
        prev = s


@pytest.mark.parametrize(
    "kwargs",
    [dict(tau=-1), dict(eps=1.0), dict(eps=-0.1), dict(query_period=0), dict(query_period=1.5), dict(exact_below=-1)],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        DetectorConfig(**kwargs)


def test_events_clear_window_and_do_not_leak():
    rng = np.random.default_rng(8)
    bits = np.concatenate(
        [(rng.random(3000) < p).astype(int) for p in (0.1, 0.6, 0.2, 0.9)]
    ).tolist()
    det = Detector(tau=4)
    events = []
    for b in bits:
        ev = det.observe(b)
        if ev is not None:
            events.append(ev)
            assert det.up.k == 0 and det.down.k == 0 and det.n == 0
    assert len(events) >= 2
    # continuing after the first event is identical to a fresh detector
    cut = events[0].detected_at
    rest = detect(bits[cut:], tau=4)
    shifted = [(e.detected_at - cut, e.split_at - cut, e.direction, e.window_len) for e in events[1:]]
    assert shifted == [(e.detected_at, e.split_at, e.direction, e.window_len) for e in rest]


def test_event_scores_against_exact_rescoring():
    rng = np.random.default_rng(9)
    bits = np.concatenate([(rng.random(4000) < p).astype(int) for p in (0.3, 0.7, 0.4)]).tolist()
    for eps in (0.0, 0.5):
        cfg = DetectorConfig(tau=6, eps=eps, exact_below=0)
        start = 0
        for ev in detect(bits, cfg):
            window = bits[start : ev.detected_at]
            assert len(window) == ev.window_len
            seq_bits = window if ev.direction == INCREASE else [1 - b for b in window]
            opt = exact_change_block(BlockSequence.from_bits(seq_bits)).score
            assert ev.score > 6 + math.log(ev.window_len)
            assert (1 - eps) * opt - 1e-12 <= ev.score <= opt + 1e-12
            start = ev.detected_at


def test_deterministic_repeat():
    bits = two_segment(0.3, 0.6, n=5000, seed=3)
    a = detect(bits, tau=3)
    b = detect(bits, tau=3)
    assert a == b


def test_first_event_not_earlier_with_larger_tau():
    bits = two_segment(0.3, 0.6, n=5000, seed=4)
    firsts = []
    for tau in range(0, 10):
        ev = detect(bits, tau=tau)
        firsts.append(ev[0].detected_at if ev else math.inf)
    assert firsts == sorted(firsts)


def test_query_period_gates_detection():
    bits = two_segment(0.2, 0.8, n=2000, seed=5)
    events = detect(bits, tau=6, query_period=50)
    assert events
    assert all(e.detected_at % 50 == 0 for e in events)


def test_run_yields_in_stream_order():
    rng = np.random.default_rng(12)
    bits = np.concatenate([(rng.random(2000) < p).astype(int) for p in (0.1, 0.9) * 3]).tolist()
    events = list(Detector(tau=6).run(bits))
    pos = [e.detected_at for e in events]
    assert pos == sorted(pos) and len(set(pos)) == len(pos)


def test_config_or_kwargs_not_both():
    with pytest.raises(TypeError):
        Detector(DetectorConfig(), tau=3)
