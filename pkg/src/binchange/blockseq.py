"""Border-index block sequence maintained under streaming appends.

Blocks are the maximal runs between border indices of the current window.
Their one-fractions are strictly increasing, and appending a bit merges
tail blocks (pool adjacent violators) in amortized constant time.

Block indices are 1-based throughout, as are raw stream offsets: block ``i``
starts at window position ``offset(i)`` and ``offset(1) == 1``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from binchange.likelihood import CountPair


class UndefinedFrequencyError(ValueError):
    """Raised when asking for the one-fraction of an empty range."""


class BlockSequence:
    """Window state since the last detected change.

    Only cumulative counts are stored: ``_p1[j]`` and ``_p0[j]`` hold the
    number of ones and zeros in blocks ``1..j`` (``_p1[0] == 0``). A tail merge
    therefore just drops the boundary between the last two blocks.
    """

    __slots__ = ("_p1", "_p0", "_start", "n", "merges")

    def __init__(self) -> None:
        self._p1: list[int] = [0]
        self._p0: list[int] = [0]
        self._start: list[int] = []
        self.n = 0
        self.merges = 0

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BlockSequence":
        seq = cls()
        for bit in bits:
            seq.push(bit)
        return seq

    @classmethod
    def from_blocks(
        cls, blocks: Sequence[tuple[int, int]], offsets: Sequence[int] | None = None
    ) -> "BlockSequence":
        """Build a sequence directly from ``(ones, zeros)`` pairs.

        Raises ``ValueError`` if a block is empty or the fractions are not
        strictly increasing.
        """
        seq = cls()
        pos = 1
        for idx, (u, v) in enumerate(blocks):
            if u < 0 or v < 0 or u + v == 0:
                raise ValueError(f"block {idx + 1} must have non-negative counts and be non-empty")
            if idx:
                pu, pv = blocks[idx - 1]
                if u * (pu + pv) <= pu * (u + v):
                    raise ValueError(f"block fractions not strictly increasing at block {idx + 1}")
            seq._p1.append(seq._p1[-1] + u)
            seq._p0.append(seq._p0[-1] + v)
            seq._start.append(pos)
            pos += u + v
        seq.n = pos - 1
        if offsets is not None and list(offsets) != seq._start:
            raise ValueError("offsets do not match block totals")
        return seq

    def push(self, bit: int) -> "BlockSequence":
        """Append one bit and restore the strictly increasing block fractions."""
        bit = 1 if bit else 0
        self.n += 1
        p1 = self._p1
        p0 = self._p0
        starts = self._start
        a = p1[-1] + bit
        b = p0[-1] + 1 - bit
        start = self.n
        while len(p1) > 1:
            # tail block (a - p1[-1], b - p0[-1]) against block before it
            ta = a - p1[-1]
            tt = a + b - p1[-1] - p0[-1]
            pa = p1[-1] - p1[-2]
            pt = p1[-1] + p0[-1] - p1[-2] - p0[-2]
            if ta * pt > pa * tt:
                break
            p1.pop()
            p0.pop()
            start = starts.pop()
            self.merges += 1
        p1.append(a)
        p0.append(b)
        starts.append(start)
        return self

    def reset(self) -> "BlockSequence":
        self._p1 = [0]
        self._p0 = [0]
        self._start = []
        self.n = 0
        return self

    def __len__(self) -> int:
        return len(self._start)

    @property
    def k(self) -> int:
        return len(self._start)

    def _check(self, i: int) -> None:
        if not 1 <= i <= len(self._start):
            raise IndexError(f"block index {i} outside 1..{len(self._start)}")

    def block(self, i: int) -> CountPair:
        self._check(i)
        return CountPair(self._p1[i] - self._p1[i - 1], self._p0[i] - self._p0[i - 1])

    @property
    def blocks(self) -> list[CountPair]:
        p1, p0 = self._p1, self._p0
        return [CountPair(p1[i] - p1[i - 1], p0[i] - p0[i - 1]) for i in range(1, len(p1))]

    @property
    def offsets(self) -> list[int]:
        return list(self._start)

    def offset(self, i: int) -> int:
        """Window position (1-based) of the first entry of block ``i``."""
        self._check(i)
        return self._start[i - 1]

    @property
    def prefix_ones(self) -> list[int]:
        return self._p1[1:]

    @property
    def prefix_zeros(self) -> list[int]:
        return self._p0[1:]

    def totals(self) -> CountPair:
        return CountPair(self._p1[-1], self._p0[-1])

    def range_counts(self, i: int, j: int) -> CountPair:
        """Counts over blocks ``i..j`` inclusive.

        ``i = j + 1`` is the empty range, so ``range_counts(1, 0)`` and
        ``range_counts(k + 1, k)`` are both ``(0, 0)``.
        """
        if i == j + 1 and 0 <= j <= len(self._start):
            return CountPair(0, 0)
        self._check(i)
        self._check(j)
        if i > j:
            return CountPair(0, 0)
        return CountPair(self._p1[j] - self._p1[i - 1], self._p0[j] - self._p0[i - 1])

    def freq_fraction(self, i: int, j: int) -> Fraction:
        a, b = self.range_counts(i, j)
        if a + b == 0:
            raise UndefinedFrequencyError(f"empty block range {i}..{j}")
        return Fraction(a, a + b)

    def freq(self, i: int, j: int) -> float:
        a, b = self.range_counts(i, j)
        if a + b == 0:
            raise UndefinedFrequencyError(f"empty block range {i}..{j}")
        return a / (a + b)

    def flipped_reversed(self) -> "BlockSequence":
        """Label-swapped blocks in reverse order; again a valid block sequence."""
        return BlockSequence.from_blocks([(v, u) for u, v in reversed(self.blocks)])

    def dump(self) -> str:
        """One block per line: ``ones zeros raw_offset``."""
        return "".join(f"{u} {v} {s}\n" for (u, v), s in zip(self.blocks, self._start))

    @classmethod
    def load(cls, text: str) -> "BlockSequence":
        blocks = []
        offsets = []
        for line in text.splitlines():
            if not line.strip():
                continue
            u, v, s = (int(x) for x in line.split())
            blocks.append((u, v))
            offsets.append(s)
        return cls.from_blocks(blocks, offsets)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BlockSequence):
            return NotImplemented
        return self._p1 == other._p1 and self._p0 == other._p0 and self._start == other._start

    def __repr__(self) -> str:
        return f"BlockSequence(n={self.n}, blocks={[tuple(b) for b in self.blocks]})"
