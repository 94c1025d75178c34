"""Online two-sided change detector for bit streams."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

from binchange.blockseq import BlockSequence
from binchange.solver import ChangeResult, exact_change_block, find_change

INCREASE = "increase"
DECREASE = "decrease"


@dataclass(frozen=True)
class DetectorConfig:
    """Detection parameters.

    Attributes:
        tau: slack added to the ``ln n`` penalty; a split is declared when its
            score exceeds ``tau + ln n``.
        eps: approximation slack for the split search, in ``[0, 1)``.
        query_period: run the split search on every ``query_period``-th bit.
        exact_below: windows with at most this many blocks are scanned
            exhaustively regardless of ``eps``. Set to 0 to always use the
            approximate search.
    """

    tau: float = 6.0
    eps: float = 0.0
    query_period: int = 1
    exact_below: int = 64

    def __post_init__(self) -> None:
        if not self.tau >= 0.0:
            raise ValueError(f"tau must be >= 0, got {self.tau!r}")
        if not 0.0 <= self.eps < 1.0:
            raise ValueError(f"eps must lie in [0, 1), got {self.eps!r}")
        if int(self.query_period) != self.query_period or self.query_period < 1:
            raise ValueError(f"query_period must be a positive integer, got {self.query_period!r}")
        if self.exact_below < 0:
            raise ValueError(f"exact_below must be >= 0, got {self.exact_below!r}")


@dataclass(frozen=True)
class ChangeEvent:
    """A declared change. Positions are 1-based over the whole stream."""

    detected_at: int
    split_at: int
    score: float
    direction: str
    window_len: int


class Detector:
    """Feeds bits into two mirrored block sequences and tests for a split.

    The ``up`` sequence sees the bits as given and catches increases in the
    rate of ones; ``down`` sees the complemented bits and catches decreases.
    Both are cleared whenever a change is declared.
    """

    def __init__(self, config: DetectorConfig | None = None, **kwargs) -> None:
        if config is None:
            config = DetectorConfig(**kwargs)
        elif kwargs:
            raise TypeError("pass either a DetectorConfig or keyword parameters, not both")
        self.config = config
        self.up = BlockSequence()
        self.down = BlockSequence()
        self.position = 0
        self.window_start = 1
        self.events: list[ChangeEvent] = []

    @property
    def n(self) -> int:
        return self.up.n

    def sigma(self) -> float:
        """Current detection threshold ``tau + ln n``."""
        n = self.up.n
        if n < 1:
            raise ValueError("threshold undefined for an empty window")
        return self.config.tau + math.log(n)

    def _solve(self, seq: BlockSequence) -> ChangeResult:
        if seq.k <= self.config.exact_below:
            return exact_change_block(seq)
        return find_change(seq, self.config.eps)

    def observe(self, bit: int) -> ChangeEvent | None:
        bit = 1 if bit else 0
        self.up.push(bit)
        self.down.push(1 - bit)
        self.position += 1
        if self.position % self.config.query_period:
            return None
        inc = self._solve(self.up)
        dec = self._solve(self.down)
        best, direction = (inc, INCREASE) if inc.score >= dec.score else (dec, DECREASE)
        if not best.found or best.score <= self.sigma():
            return None
        event = ChangeEvent(
            detected_at=self.position,
            split_at=self.window_start + best.raw_index - 1,
            score=best.score,
            direction=direction,
            window_len=self.up.n,
        )
        self.events.append(event)
        self.reset_window()
        return event

    def reset_window(self) -> None:
        self.up.reset()
        self.down.reset()
        self.window_start = self.position + 1

    def run(self, bits: Iterable[int]) -> Iterator[ChangeEvent]:
        """Observe every bit, yielding events in stream order."""
        for bit in bits:
            event = self.observe(bit)
            if event is not None:
                yield event


def detect(bits: Iterable[int], config: DetectorConfig | None = None, **kwargs) -> list[ChangeEvent]:
    return list(Detector(config, **kwargs).run(bits))
