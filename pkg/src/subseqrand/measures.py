"""Computable measures on binary strings, given by exact next-bit conditionals.

Both shipped families are finite-state sources: the conditional of the next
bit depends on the prefix only through a small state.  That view is what the
coder consumes (``Measure.table()``); ``cond`` / ``prob`` are the exact
rational semantics.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any

import numpy as np

from .bitseq import BitString
from .errors import RejectedInputError, UndefinedInformationError
from .generators import check_probability, parse_fraction

__all__ = [
    "Measure",
    "bernoulli_measure",
    "markov_measure",
    "measure_from_descriptor",
    "prob",
    "prob_q",
    "neg_log2_prob",
    "quantize",
]

QUANT_BITS = 32
QUANT_ONE = 1 << QUANT_BITS


def quantize(p1: Fraction) -> int:
    """Map P(1) to an integer k with P_Q(1) = k / 2**32.

    Rounds to nearest; a conditional strictly inside (0, 1) never quantizes
    to 0 or 1, so the support is preserved.
    """
    if p1 == 0:
        return 0
    if p1 == 1:
        return QUANT_ONE
    k = math.floor(p1 * QUANT_ONE + Fraction(1, 2))
    return min(max(k, 1), QUANT_ONE - 1)


class Measure:
    """Finite-state measure.

    Subclasses provide ``initial_state``, ``p1(state)`` and
    ``next_state(state, bit)`` plus a JSON-able ``descriptor``.
    """

    n_states: int = 1
    initial_state: int = 0

    def p1(self, state: int) -> Fraction:
        raise NotImplementedError

    def next_state(self, state: int, bit: int) -> int:
        raise NotImplementedError

    @property
    def descriptor(self) -> dict:
        raise NotImplementedError

    def cond(self, prefix: BitString, bit: int) -> Fraction:
        state = self.initial_state
        for b in prefix:
            state = self.next_state(state, b)
        p = self.p1(state)
        return p if bit else 1 - p

    def table(self) -> tuple[np.ndarray, np.ndarray, int]:
        """Quantized coder table: (k1 per state, next_state[state, bit], start state)."""
        k1 = np.array([quantize(self.p1(s)) for s in range(self.n_states)], dtype=np.int64)
        nxt = np.array(
            [[self.next_state(s, 0), self.next_state(s, 1)] for s in range(self.n_states)],
            dtype=np.int64,
        )
        return k1, nxt, self.initial_state

    def transition_counts(self, s: BitString) -> np.ndarray:
        """counts[state, bit] = how often ``bit`` is emitted from ``state`` along ``s``."""
        counts = np.zeros((self.n_states, 2), dtype=np.int64)
        if len(s) == 0:
            return counts
        states = self.state_sequence(s)
        np.add.at(counts, (states, s.bits.astype(np.int64)), 1)
        return counts

    def state_sequence(self, s: BitString) -> np.ndarray:
        """State in force before each symbol of ``s``."""
        out = np.empty(len(s), dtype=np.int64)
        state = self.initial_state
        for i, b in enumerate(s.bits.tolist()):
            out[i] = state
            state = self.next_state(state, b)
        return out

    def is_uniform(self) -> bool:
        return all(self.p1(s) == Fraction(1, 2) for s in range(self.n_states))

    def __eq__(self, other) -> bool:
        return isinstance(other, Measure) and self.descriptor == other.descriptor

    def __hash__(self) -> int:
        return hash(repr(self.descriptor))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.descriptor})"


class BernoulliMeasure(Measure):
    def __init__(self, q: Fraction):
        self.q = q

    def p1(self, state):
        return self.q

    def next_state(self, state, bit):
        return 0

    def state_sequence(self, s):
        return np.zeros(len(s), dtype=np.int64)

    @property
    def descriptor(self):
        return {"bernoulli": {"q": str(self.q)}}


class MarkovMeasure(Measure):
    """First-order chain.  States: 0 = start, 1 = last bit 0, 2 = last bit 1."""

    n_states = 3

    def __init__(self, p01: Fraction, p11: Fraction, initial_p1: Fraction):
        self.p01 = p01
        self.p11 = p11
        self.initial_p1 = initial_p1

    def p1(self, state):
        return (self.initial_p1, self.p01, self.p11)[state]

    def next_state(self, state, bit):
        return 2 if bit else 1

    def state_sequence(self, s):
        states = np.empty(len(s), dtype=np.int64)
        if len(s):
            states[0] = 0
            states[1:] = s.bits[:-1].astype(np.int64) + 1
        return states

    @property
    def descriptor(self):
        return {
            "markov": {
                "p01": str(self.p01),
                "p11": str(self.p11),
                "initial_p1": str(self.initial_p1),
            }
        }


def bernoulli_measure(q: Fraction | str) -> BernoulliMeasure:
    """i.i.d. measure with P(1) = q."""
    return BernoulliMeasure(check_probability("q", parse_fraction(q)))


def markov_measure(p01, p11, initial_p1) -> MarkovMeasure:
    """Markov chain with P(1 | last 0) = p01, P(1 | last 1) = p11, P(first = 1) = initial_p1."""
    return MarkovMeasure(
        check_probability("p01", parse_fraction(p01)),
        check_probability("p11", parse_fraction(p11)),
        check_probability("initial_p1", parse_fraction(initial_p1)),
    )


def measure_from_descriptor(desc: Any) -> Measure:
    """Inverse of ``Measure.descriptor``."""
    if not isinstance(desc, dict) or len(desc) != 1:
        raise RejectedInputError(f"measure descriptor must be a one-key object, got {desc!r}")
    (family, params), = desc.items()
    if not isinstance(params, dict):
        raise RejectedInputError(f"measure parameters must be an object, got {params!r}")
    if family == "bernoulli":
        if set(params) != {"q"}:
            raise RejectedInputError("bernoulli descriptor takes exactly 'q'")
        return bernoulli_measure(params["q"])
    if family == "markov":
        if set(params) != {"p01", "p11", "initial_p1"}:
            raise RejectedInputError("markov descriptor takes 'p01', 'p11', 'initial_p1'")
        return markov_measure(params["p01"], params["p11"], params["initial_p1"])
    raise RejectedInputError(f"unknown measure family {family!r}")


# --------------------------------------------------------------------------

def _factors(M: Measure, s: BitString, quantized: bool):
    counts = M.transition_counts(s)
    for state in range(M.n_states):
        p = M.p1(state)
        if quantized:
            p = Fraction(quantize(p), QUANT_ONE)
        for bit, c in ((0, counts[state, 0]), (1, counts[state, 1])):
            if c:
                yield (p if bit else 1 - p), int(c)


def prob(M: Measure, s: BitString) -> Fraction:
    """Exact P(s) as the product of conditionals; P(empty) = 1."""
    out = Fraction(1)
    for factor, power in _factors(M, s, quantized=False):
        out *= factor**power
    return out


def prob_q(M: Measure, s: BitString) -> Fraction:
    """P_Q(s): the same product with every conditional replaced by its 32-bit quantization."""
    out = Fraction(1)
    for factor, power in _factors(M, s, quantized=True):
        out *= factor**power
    return out


def _log2_fraction(f: Fraction) -> float:
    return math.log2(f.numerator) - math.log2(f.denominator)


def neg_log2_prob(M: Measure, s: BitString, quantized: bool = False) -> float:
    """-log2 P(s) in bits.

    Accumulated per (state, bit) class, so the error is a few ulps per class
    regardless of ``len(s)``.
    """
    terms = []
    for factor, power in _factors(M, s, quantized):
        if factor == 0:
            raise UndefinedInformationError(
                f"string has zero probability under {M!r}", _first_zero(M, s)
            )
        terms.append(-power * _log2_fraction(factor))
    return math.fsum(terms) + 0.0


def _first_zero(M: Measure, s: BitString) -> int:
    states = M.state_sequence(s)
    for i, (state, b) in enumerate(zip(states.tolist(), s.bits.tolist())):
        p = M.p1(state)
        if (p if b else 1 - p) == 0:
            return i + 1
    return 0  # pragma: no cover
