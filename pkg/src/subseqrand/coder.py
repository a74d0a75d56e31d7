"""Arithmetic coding of a string under a given measure, with a monotone decoder.

``length_trace[i-1]`` is l_i = ceil(-log2 W_i), where W_i is the exact width
of the coder's interval after i symbols.  Because the coder's widths are
quantized conditionals (32-bit) with floor rounding, l_i differs from
ceil(-log2 P_Q(y_1^i)) by at most one bit, and l_{i+1} - l_i is bounded by
ceil(-log2 cond_Q) + 2.

``decode_trace[i-1]`` is the operational counterpart: the least number of
code bits whose every extension decodes to y_1^i.  It is
never below l_i but can run ahead of it when the code point sits near an
interval boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .bitseq import BitString, select
from .errors import RejectedInputError, TruncatedCodeError, UndefinedInformationError
from .measures import Measure, measure_from_descriptor, neg_log2_prob, prob_q

__all__ = [
    "CodeStream",
    "arith_encode",
    "arith_decode",
    "reconstruct_selected",
    "pad_or_truncate",
    "ideal_length",
]


@dataclass(frozen=True)
class CodeStream:
    code: BitString
    source_length: int
    measure_descriptor: dict
    length_trace: np.ndarray = field(repr=False)
    decode_trace: np.ndarray = field(repr=False)
    quantization_penalty_bits: float = 0.0

    @property
    def max_increment(self) -> int:
        """max_i (l_{i+1} - l_i), with l_0 = 0."""
        if self.source_length == 0:
            return 0
        return int(np.diff(self.length_trace, prepend=0).max())

    def summary(self) -> dict:
        n = self.source_length
        lt = self.length_trace
        dt = self.decode_trace
        return {
            "measure": self.measure_descriptor,
            "n": n,
            "code_length": len(self.code),
            "l_n": int(lt[-1]) if n else 0,
            "max_increment": self.max_increment,
            "decode_delay_final": int(dt[-1]) if n else 0,
            "max_decode_lag": int((dt - lt).max()) if n else 0,
            "quantization_penalty_bits": self.quantization_penalty_bits,
        }


def _capacity(k1: np.ndarray, n: int) -> int:
    """Upper bound on code length: per symbol at most 33 bits, usually far fewer."""
    smallest = min(
        (min(int(k), kernels.ONE - int(k)) for k in k1 if 0 < k < kernels.ONE),
        default=kernels.ONE // 2,
    )
    per_symbol = kernels.ONE.bit_length() - smallest.bit_length() + 2
    return n * per_symbol + kernels.PREC + 8


def arith_encode(M: Measure, y: BitString) -> CodeStream:
    """Encode ``y`` under ``M``; the result decodes back to ``y`` from any extension of the code."""
    k1, nxt, s0 = M.table()
    n = len(y)
    out, nout, trace, err = kernels.encode(y.bits, k1, nxt, s0, _capacity(k1, n))
    if err >= 0:
        raise UndefinedInformationError(
            f"symbol {err + 1} of the input has zero probability under {M!r}", err + 1
        )
    code = BitString.from_array(out[:nout])
    _, _, delays = kernels.decode(out[:nout], nout, n, k1, nxt, s0, True)
    penalty = neg_log2_prob(M, y, quantized=True) - neg_log2_prob(M, y) if n else 0.0
    return CodeStream(
        code=code,
        source_length=n,
        measure_descriptor=M.descriptor,
        length_trace=np.asarray(trace),
        decode_trace=np.asarray(delays),
        quantization_penalty_bits=penalty,
    )


def arith_decode(M: Measure, z: BitString, n: int) -> BitString:
    """The monotone decoder: the n symbols determined by ``z`` (every extension of it).

    Raises :class:`TruncatedCodeError` when ``z`` pins down fewer than ``n`` symbols.
    """
    if n < 0:
        raise RejectedInputError("n must be non-negative")
    k1, nxt, s0 = M.table()
    y, count, _ = kernels.decode(z.bits, len(z), n, k1, nxt, s0, False)
    if count < n:
        raise TruncatedCodeError(
            f"code of {len(z)} bits determines only {count} of {n} symbols", int(count)
        )
    return BitString.from_array(y)


def pad_or_truncate(z: BitString, n: int) -> tuple[BitString, int]:
    """``z`` cut or zero-padded to exactly ``n`` bits, plus the number of padding bits added."""
    if len(z) >= n:
        return z[:n], 0
    pad = n - len(z)
    return z + BitString.zeros(pad), pad


def reconstruct_selected(M: Measure, y: BitString, mask_len: int | None = None) -> BitString:
    """z/y computed from (M, y) alone: select(pad_or_truncate(encode(M, y).code, n), y_1^n)."""
    n = len(y) if mask_len is None else mask_len
    if n > len(y):
        raise RejectedInputError(f"mask_len {n} exceeds |y| = {len(y)}")
    z = arith_encode(M, y).code
    zp, _ = pad_or_truncate(z, n)
    return select(zp, y[:n])


def stream_from_sidecar(sidecar: dict) -> tuple[Measure, int]:
    """Measure and source length recorded in an encode sidecar."""
    try:
        return measure_from_descriptor(sidecar["measure"]), int(sidecar["n"])
    except KeyError as exc:
        raise RejectedInputError(f"sidecar lacks field {exc}") from exc


def ideal_length(M: Measure, y: BitString) -> int:
    """ceil(-log2 P_Q(y)), computed exactly from the rational P_Q(y)."""
    p = prob_q(M, y)
    if p == 0:
        raise UndefinedInformationError("zero probability", None)
    num, den = p.numerator, p.denominator
    L = max(0, den.bit_length() - num.bit_length() - 1)
    while (num << L) < den:
        L += 1
    return L
