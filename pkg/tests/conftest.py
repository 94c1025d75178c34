import numpy as np
import pytest

from binchange.blockseq import BlockSequence

_ACCEPTANCE: list[tuple[str, bool, str]] = []


def random_blocks(rng: np.random.Generator, k_max: int = 200, count_max: int = 40) -> list[tuple[int, int]]:
    """Random pairs sorted by one-fraction; equal fractions are pooled."""
    k = int(rng.integers(1, k_max + 1))
    pairs = []
    for _ in range(k):
        u, v = (int(x) for x in rng.integers(0, count_max + 1, size=2))
        if u + v == 0:
            u = 1
        pairs.append((u, v))
    pairs.sort(key=lambda p: p[0] / (p[0] + p[1]))
    out: list[tuple[int, int]] = []
    for u, v in pairs:
        if out:
            pu, pv = out[-1]
            if u * (pu + pv) == pu * (u + v):
                out[-1] = (pu + u, pv + v)
                continue
        out.append((u, v))
    return out


def random_block_sequence(rng: np.random.Generator, k_max: int = 200) -> BlockSequence:
    return BlockSequence.from_blocks(random_blocks(rng, k_max))


def random_stream(rng: np.random.Generator, n_max: int = 2000) -> list[int]:
    """Ind-, Step- or Slope-style bits with random rates and length."""
    n = int(rng.integers(1, n_max + 1))
    style = rng.integers(0, 3)
    if style == 0:
        p = np.full(n, rng.uniform(0.05, 0.95))
    elif style == 1:
        cut = int(rng.integers(0, n + 1))
        p = np.where(np.arange(n) < cut, rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95))
    else:
        p = np.linspace(rng.uniform(0, 1), rng.uniform(0, 1), n)
    return (rng.random(n) < p).astype(int).tolist()


def border_indices(bits: list[int]) -> list[int]:
    """Border indices straight from the definition (1-based, O(n^2)).

    ``j`` is a border if every interval ending at ``j - 1`` has a strictly
    smaller mean than every interval starting at ``j``.
    """
    s = np.asarray(bits, dtype=np.int64)
    n = len(s)
    c = np.concatenate([[0], np.cumsum(s)])
    out = [1] if n else []
    for j in range(2, n + 1):
        x = np.arange(1, j)
        left = (c[j - 1] - c[x - 1]) / (j - x)
        y = np.arange(j + 1, n + 2)
        right = (c[y - 1] - c[j - 1]) / (y - j)
        if left.max() < right.min():
            out.append(j)
    return out


@pytest.fixture
def acceptance():
    def record(name: str, passed: bool, detail: str = "") -> None:
        _ACCEPTANCE.append((name, passed, detail))
        assert passed, f"{name}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")
