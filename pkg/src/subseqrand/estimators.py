"""Finite-scale estimators.

None of these compute Kolmogorov complexity.  Block statistics and the LZ78
rate measure finite-state compressibility, which is why a computable but
normal sequence such as Champernowne's reads as incompressible here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import kernels
from .bitseq import BitString
from .errors import RejectedInputError, UndefinedInformationError
from .measures import Measure

__all__ = [
    "EmpiricalBlockMeasure",
    "ComplexityReport",
    "block_frequencies",
    "normality_deviation",
    "normality_deviations",
    "plugin_entropy_rate",
    "distinct_blocks",
    "lz78_parse",
    "lz78_rate",
    "conditional_test_level",
    "estimate_bernoulli_q",
    "analyze",
    "default_entropy_schedule",
]

DENSE_K = 22  # above this, blocks are counted with np.unique instead of bincount


def _check_k(x: BitString, k: int) -> None:
    if k < 1:
        raise RejectedInputError(f"block length must be positive, got {k}")
    if k > len(x):
        raise RejectedInputError(f"block length {k} exceeds string length {len(x)}")


def _block_ids(x: BitString, k: int) -> np.ndarray:
    """One comparable id per sliding window (int64 codes, or void rows for k > 62)."""
    if k <= 62:
        return kernels.block_codes(x.bits, k)
    windows = np.lib.stride_tricks.sliding_window_view(x.bits, k)
    packed = np.packbits(windows, axis=1)
    return packed.view(np.dtype((np.void, packed.shape[1]))).ravel()


@dataclass(frozen=True)
class EmpiricalBlockMeasure:
    """Sliding-window counts of k-blocks.  Only occurring blocks are stored.

    For k <= 62 ``blocks`` holds integer codes (first bit most significant).
    """

    k: int
    blocks: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)
    windows: int

    @property
    def frequencies(self) -> np.ndarray:
        return self.counts / self.windows

    def __getitem__(self, block: str | BitString) -> int:
        s = str(block)
        if len(s) != self.k or self.k > 62:
            raise KeyError(block)
        i = np.searchsorted(self.blocks, int(s, 2))
        if i < self.blocks.size and self.blocks[i] == int(s, 2):
            return int(self.counts[i])
        return 0

    def as_dict(self) -> dict[str, int]:
        if self.k > 62:
            raise ValueError("as_dict is only available for k <= 62")
        return {format(int(b), f"0{self.k}b"): int(c) for b, c in zip(self.blocks, self.counts)}


def block_frequencies(x: BitString, k: int) -> EmpiricalBlockMeasure:
    _check_k(x, k)
    ids = _block_ids(x, k)
    if k <= DENSE_K:
        dense = np.bincount(ids, minlength=1 << k)
        blocks = np.flatnonzero(dense).astype(np.int64)
        counts = dense[blocks]
    else:
        blocks, counts = np.unique(ids, return_counts=True)
    return EmpiricalBlockMeasure(k, blocks, counts.astype(np.int64), len(x) - k + 1)


def _deviation_at(x: BitString, k: int) -> float:
    bfm = block_frequencies(x, k)
    expected = 2.0**-k
    worst = float(np.max(np.abs(bfm.frequencies - expected)))
    if bfm.blocks.size < (1 << k):  # some block never occurs
        worst = max(worst, expected)
    return worst


def normality_deviations(x: BitString, k_max: int) -> dict[int, float]:
    """Per-k value of max_s |freq(s) - 2^-k| for k = 1..k_max."""
    _check_k(x, k_max)
    return {k: _deviation_at(x, k) for k in range(1, k_max + 1)}


def normality_deviation(x: BitString, k_max: int) -> float:
    return max(normality_deviations(x, k_max).values())


def plugin_entropy_rate(x: BitString, k: int) -> float:
    """(1/k) times the Shannon entropy (bits) of the empirical k-block distribution."""
    p = block_frequencies(x, k).frequencies
    h = float(-np.sum(p * np.log2(p))) + 0.0  # no negative zero for constant strings
    return min(max(h / k, 0.0), 1.0)


def distinct_blocks(x: BitString, k: int) -> int:
    return int(block_frequencies(x, k).blocks.size)


def lz78_parse(x: BitString) -> tuple[np.ndarray, np.ndarray]:
    """Incremental LZ78 parse as (prefix phrase index, appended bit) pairs.

    Phrase j (1-based) is phrase ``prefix[j-1]`` followed by ``last[j-1]``;
    phrase 0 is empty.  A trailing incomplete phrase is reported as a repeat
    of the existing phrase it matched.
    """
    return kernels.lz78(x.bits)


def lz78_rate(x: BitString) -> tuple[float, int]:
    """(c * (ceil(log2(c+1)) + 1) / n, c) for the c phrases of the LZ78 parse.

    Overshoots 1 at small n by construction.
    """
    if len(x) < 1:
        raise RejectedInputError("lz78_rate needs a non-empty string")
    prefix, _ = lz78_parse(x)
    c = int(prefix.size)
    return c * (c.bit_length() + 1) / len(x), c


def conditional_test_level(M: Measure, y: BitString) -> tuple[Fraction, int]:
    """Smallest conditional along ``y`` and the deepest level m with min_cond < 2^-m."""
    if len(y) == 0:
        raise RejectedInputError("conditional_test_level needs a non-empty string")
    states = M.state_sequence(y)
    pairs = set(zip(states.tolist(), y.bits.tolist()))
    min_cond = None
    for state, bit in pairs:
        p = M.p1(state)
        c = p if bit else 1 - p
        if c == 0:
            pos = next(
                i + 1
                for i, (s, b) in enumerate(zip(states.tolist(), y.bits.tolist()))
                if (s, b) == (state, bit)
            )
            raise UndefinedInformationError(f"zero conditional at position {pos}", pos)
        if min_cond is None or c < min_cond:
            min_cond = c
    level = 0
    while min_cond < Fraction(1, 2 ** (level + 1)):
        level += 1
    return min_cond, level


def estimate_bernoulli_q(x: BitString) -> tuple[Fraction, tuple[float, float]]:
    """Law-of-large-numbers estimate popcount/n with a 3-sigma interval."""
    if len(x) < 1:
        raise RejectedInputError("estimate_bernoulli_q needs a non-empty string")
    q_hat = Fraction(x.popcount, len(x))
    radius = 3.0 * math.sqrt(float(q_hat * (1 - q_hat)) / len(x))
    return q_hat, (float(q_hat) - radius, float(q_hat) + radius)


# --------------------------------------------------------------------------

def default_entropy_schedule(n: int) -> list[int]:
    """Block lengths 1..floor(log2(n)/2) (at least 1)."""
    top = max(1, int(math.log2(n) / 2)) if n > 1 else 1
    return list(range(1, min(top, n) + 1))


@dataclass
class ComplexityReport:
    n: int
    normality_dev: dict[int, float]
    plugin_entropy: dict[int, float]
    lz78_rate: float
    lz78_phrases: int
    conditional_test: tuple[Fraction, int] | None = None
    q_hat: tuple[Fraction, tuple[float, float]] | None = None

    def to_dict(self) -> dict:
        out: dict = {
            "normality_dev": {str(k): v for k, v in self.normality_dev.items()},
            "plugin_entropy": {str(k): v for k, v in self.plugin_entropy.items()},
            "lz78": {"rate": self.lz78_rate, "phrases": self.lz78_phrases},
        }
        if self.conditional_test is not None:
            mc, level = self.conditional_test
            out["conditional_test"] = {"min_cond": str(mc), "level": level}
        if self.q_hat is not None:
            q, (lo, hi) = self.q_hat
            out["q_hat"] = {"value": str(q), "value_float": float(q), "ci3": [lo, hi]}
        return out


def analyze(
    x: BitString,
    k_max: int = 3,
    entropy_k: Iterable[int] | None = None,
    measure: Measure | None = None,
    estimate_q: bool = False,
) -> ComplexityReport:
    if len(x) == 0:
        raise RejectedInputError("cannot analyze an empty string")
    ks = default_entropy_schedule(len(x)) if entropy_k is None else sorted(set(entropy_k))
    rate, phrases = lz78_rate(x)
    return ComplexityReport(
        n=len(x),
        normality_dev=normality_deviations(x, k_max),
        plugin_entropy={k: plugin_entropy_rate(x, k) for k in ks},
        lz78_rate=rate,
        lz78_phrases=phrases,
        conditional_test=conditional_test_level(measure, x) if measure is not None else None,
        q_hat=estimate_bernoulli_q(x) if estimate_q else None,
    )
