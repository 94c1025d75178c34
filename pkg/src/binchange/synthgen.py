"""Seeded synthetic bit streams: Ind, Step, Slope and Hill.

Bits are drawn as ``u < p(t)`` where ``u`` are 53-bit uniforms built from the
raw 64-bit output of numpy's PCG64 bit generator. Only the bit generator's
raw stream is used (numpy keeps it stable across releases), so a given
(kind, length, segment, seed) always produces the same bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RNG_ID = "numpy.random.PCG64.random_raw -> (x >> 11) * 2**-53, generator v1"

KINDS = ("ind", "step", "slope", "hill")
LOW = 0.25
HIGH = 0.75


@dataclass(frozen=True)
class WorkloadSpec:
    """Synthetic workload description.

    ``segment`` is the length of one constant-rate run for Step and of one
    monotone ramp for Slope; it is ignored by Ind and Hill.
    """

    kind: str
    length: int
    seed: int = 0
    segment: int = 10_000

    def __post_init__(self) -> None:
        kind = self.kind.lower()
        object.__setattr__(self, "kind", kind)
        if kind not in KINDS:
            raise ValueError(f"unknown workload kind {self.kind!r}; expected one of {KINDS}")
        if self.length < 1:
            raise ValueError("length must be >= 1")
        if kind in ("step", "slope"):
            if self.segment < 1:
                raise ValueError("segment must be >= 1")
            if self.length % self.segment:
                raise ValueError(f"{kind} length {self.length} is not a multiple of segment {self.segment}")


def uniforms(seed: int, size: int) -> np.ndarray:
    raw = np.random.PCG64(seed).random_raw(size)
    return (raw >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


def probabilities(spec: WorkloadSpec) -> np.ndarray:
    """Per-position probability of a one."""
    n = spec.length
    if spec.kind == "ind":
        return np.full(n, 0.5)
    if spec.kind == "hill":
        return np.linspace(LOW, HIGH, n)
    seg = spec.segment
    nseg = n // seg
    if spec.kind == "step":
        levels = np.where(np.arange(nseg) % 2 == 0, LOW, HIGH)
        return np.repeat(levels, seg)
    up = np.linspace(LOW, HIGH, seg)
    ramp = np.concatenate([up, up[::-1]])
    return np.resize(ramp, n)


def generate(spec: WorkloadSpec) -> tuple[np.ndarray, list[int]]:
    """Return ``(bits, true_changes)``.

    ``bits`` is a uint8 array; ``true_changes`` lists the 1-based positions
    where a new Step segment starts (empty for the other kinds, which have
    no abrupt changes).
    """
    p = probabilities(spec)
    bits = (uniforms(spec.seed, spec.length) < p).astype(np.uint8)
    if spec.kind == "step":
        changes = list(range(spec.segment + 1, spec.length + 1, spec.segment))
    else:
        changes = []
    return bits, changes


def write_bits(bits, fh) -> None:
    fh.write("".join("1\n" if b else "0\n" for b in bits))


def write_truth(changes, fh) -> None:
    fh.write("position\n")
    for c in changes:
        fh.write(f"{c}\n")
