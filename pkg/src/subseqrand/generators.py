"""Reproducible producers of example sequences.

Every generator is a pure function of its parameters and the requested
length, and ``gen(spec, n)`` is always a prefix of ``gen(spec, m)`` for
``n <= m``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import kernels
from .bitseq import BitString
from .errors import RejectedInputError

__all__ = [
    "GeneratorSpec",
    "champernowne",
    "sturmian",
    "bernoulli_sample",
    "periodic",
    "splitmix64",
    "convergents",
    "slope_cf_above",
    "FIBONACCI_CF",
]

MAX_DENOMINATOR = 1 << 32
FIBONACCI_CF = (2, 1)  # [0; 2, 1, 1, 1, ...] = 2 - golden ratio


def parse_fraction(value: Any) -> Fraction:
    """Accept ``Fraction``, ints, or ``"p/q"`` strings.  Floats are refused."""
    if isinstance(value, bool):
        raise RejectedInputError(f"not a rational: {value!r}")
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise RejectedInputError(f"not a rational: {value!r}") from exc
    raise RejectedInputError(f"rationals must be given as 'p/q' strings, got {value!r}")


def check_probability(name: str, q: Fraction) -> Fraction:
    if not 0 <= q <= 1:
        raise RejectedInputError(f"{name} must lie in [0, 1], got {q}")
    if q.denominator > MAX_DENOMINATOR:
        raise RejectedInputError(f"{name} denominator exceeds 2**32: {q}")
    return q


def _check_n(n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise RejectedInputError(f"n must be a positive integer, got {n!r}")
    return int(n)


# --------------------------------------------------------------------------

def champernowne(n: int) -> BitString:
    """First ``n`` bits of 1 10 11 100 101 ... (binary numerals, concatenated)."""
    n = _check_n(n)
    parts = []
    total = 0
    i = 1
    while total < n:
        numeral = format(i, "b")
        parts.append(numeral)
        total += len(numeral)
        i += 1
    text = "".join(parts)[:n]
    return BitString.from_array(np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0"))


def convergents(cf: Sequence[int]):
    """Yield convergents (p, q) of [0; a1, a2, ...], the last coefficient repeating forever."""
    if not cf:
        raise RejectedInputError("continued fraction needs at least one coefficient")
    if any(int(a) != a or a < 1 for a in cf):
        raise RejectedInputError(f"continued-fraction coefficients must be positive integers: {cf}")
    p_prev, q_prev, p, q = 1, 0, 0, 1
    i = 0
    while True:
        a = int(cf[min(i, len(cf) - 1)])
        p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
        yield p, q
        i += 1


def cf_value(cf: Sequence[int], depth: int = 60) -> Fraction:
    """Rational approximation of the slope from its ``depth``-th convergent."""
    for i, (p, q) in enumerate(convergents(cf)):
        if i >= depth:
            return Fraction(p, q)
    raise AssertionError("unreachable")


def sturmian(alpha_cf: Sequence[int], n: int) -> BitString:
    """Beatty-difference Sturmian word y_i = floor((i+1)a) - floor(ia), i = 1..n.

    Computed exactly: for any convergent p/q of the slope with q > n + 1,
    floor(i a) = floor(i p / q) for every 1 <= i <= n + 1, so the word is the
    orbit of a rotation by p on Z_q.
    """
    n = _check_n(n)
    for p, q in convergents(alpha_cf):
        if q > n + 1:
            break
    if q < (1 << 62):
        bits = kernels.rotation_bits(p, q, n)
    else:
        bits = kernels.rotation_bits_np(p, q, n)
    return BitString.from_array(bits)


def slope_cf_above(target: Fraction, tail: int = 16) -> list[int]:
    """Continued fraction of an irrational slope just above ``target`` in (0, 1).

    Takes the expansion of ``target`` and continues it with the coefficient
    ``tail`` repeated forever, choosing whichever of the two finite expansions
    of ``target`` puts the result on the upper side.
    """
    target = Fraction(target)
    if not 0 < target < 1:
        raise RejectedInputError(f"slope target must lie in (0, 1), got {target}")
    coeffs = []
    x = 1 / target
    while True:
        a = int(x)
        coeffs.append(a)
        frac = x - a
        if frac == 0:
            break
        x = 1 / frac
    candidates = [coeffs + [tail]]
    if coeffs[-1] > 1:
        candidates.append(coeffs[:-1] + [coeffs[-1] - 1, 1, tail])
    for cf in candidates:
        if cf_value(cf) > target:
            return cf
    raise AssertionError("no expansion lies above the target")  # pragma: no cover


def splitmix64(seed: int, n: int) -> np.ndarray:
    """First ``n`` outputs of SplitMix64 started from ``seed``."""
    return kernels.splitmix64_np(int(seed), int(n))


def bernoulli_sample(q: Fraction | str, seed: int, n: int) -> BitString:
    """i.i.d. bits with P(1) = q: bit i is 1 iff the i-th SplitMix64 output < floor(q * 2**64)."""
    n = _check_n(n)
    q = check_probability("q", parse_fraction(q))
    threshold = (q.numerator << 64) // q.denominator
    if threshold > kernels.MASK64:
        return BitString.ones(n)
    bits = kernels.threshold_bits(np.uint64(int(seed) & kernels.MASK64), n, np.uint64(threshold))
    return BitString.from_array(bits)


def periodic(pattern: BitString | str, n: int) -> BitString:
    n = _check_n(n)
    if isinstance(pattern, str):
        pattern = BitString.from_str(pattern)
    if len(pattern) == 0:
        raise RejectedInputError("periodic pattern must be non-empty")
    reps = -(-n // len(pattern))
    return BitString.from_array(np.tile(pattern.bits, reps)[:n])


# --------------------------------------------------------------------------

KINDS = ("champernowne", "sturmian", "bernoulli", "periodic")


@dataclass(frozen=True)
class GeneratorSpec:
    """Serializable description of a sequence source.

    ``params`` by kind: sturmian ``{"cf": [a1, a2, ...]}``; bernoulli
    ``{"q": "p/q", "seed": int}``; periodic ``{"pattern": "0101"}``;
    champernowne takes none.
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise RejectedInputError(f"unknown generator kind {self.kind!r}; expected one of {KINDS}")
        p = self.params
        if self.kind == "sturmian":
            cf = p.get("cf")
            if not cf:
                raise RejectedInputError("sturmian spec needs a non-empty 'cf' coefficient list")
            list(zip(range(1), convergents(cf)))  # validates coefficients
        elif self.kind == "bernoulli":
            if "q" not in p or "seed" not in p:
                raise RejectedInputError("bernoulli spec needs 'q' and 'seed'")
            check_probability("q", parse_fraction(p["q"]))
            if isinstance(p["seed"], bool) or not isinstance(p["seed"], int):
                raise RejectedInputError("bernoulli seed must be an integer")
        elif self.kind == "periodic":
            pat = p.get("pattern")
            if not isinstance(pat, str) or not pat or pat.strip("01"):
                raise RejectedInputError("periodic spec needs a non-empty '0'/'1' pattern string")

    def generate(self, n: int) -> BitString:
        p = self.params
        if self.kind == "champernowne":
            return champernowne(n)
        if self.kind == "sturmian":
            return sturmian(p["cf"], n)
        if self.kind == "bernoulli":
            return bernoulli_sample(parse_fraction(p["q"]), p["seed"], n)
        return periodic(p["pattern"], n)

    @property
    def computable_selector(self) -> bool:
        """True for the deterministic kinds (usable as computable masks)."""
        return self.kind != "bernoulli"

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        for key, value in self.params.items():
            out[key] = str(value) if isinstance(value, Fraction) else value
        if "cf" in out:
            out["cf"] = [int(a) for a in out["cf"]]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "GeneratorSpec":
        if not isinstance(data, dict) or "kind" not in data:
            raise RejectedInputError(f"generator spec must be an object with a 'kind': {data!r}")
        params = {k: v for k, v in data.items() if k != "kind"}
        return cls(data["kind"], params)
