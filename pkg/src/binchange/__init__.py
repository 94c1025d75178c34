"""Streaming change-point detection for binary sequences."""

from binchange.blockseq import BlockSequence, UndefinedFrequencyError
from binchange.detector import ChangeEvent, Detector, DetectorConfig
from binchange.likelihood import (
    CountPair,
    log_likelihood,
    ml_log_likelihood,
    split_score,
    split_score_fixed,
)
from binchange.solver import (
    ChangeResult,
    exact_change_block,
    find_cands,
    find_cands_prime,
    find_change,
    find_segment,
    naive_change_raw,
)

__all__ = [
    "BlockSequence",
    "ChangeEvent",
    "ChangeResult",
    "CountPair",
    "Detector",
    "DetectorConfig",
    "UndefinedFrequencyError",
    "exact_change_block",
    "find_cands",
    "find_cands_prime",
    "find_change",
    "find_segment",
    "log_likelihood",
    "ml_log_likelihood",
    "naive_change_raw",
    "split_score",
    "split_score_fixed",
]
