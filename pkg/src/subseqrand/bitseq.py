"""Finite binary strings and the selection operator x/y.

Positions exposed by this module (``tau_indices``) are 1-based.  Python
indexing on a :class:`BitString` (``x[i]``, slicing) stays 0-based like any
other sequence.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Union

import numpy as np

from . import kernels
from .errors import RejectedInputError

__all__ = [
    "BitString",
    "SelectionMask",
    "select",
    "complement",
    "tau_indices",
    "merge",
    "ones_density",
]


class BitString:
    """Immutable finite binary word.

    Storage is a packed byte payload, MSB-first within each byte, with the
    unused tail of the last byte held at zero.
    """

    def __init__(self, packed: bytes | np.ndarray, length: int):
        payload = np.frombuffer(bytes(packed), dtype=np.uint8).copy()
        if length < 0:
            raise RejectedInputError("length must be non-negative")
        nbytes = (length + 7) // 8
        if payload.size != nbytes:
            raise RejectedInputError(
                f"payload holds {payload.size} bytes, {nbytes} needed for {length} bits"
            )
        spare = nbytes * 8 - length
        if spare:
            payload[-1] &= (0xFF << spare) & 0xFF
        payload.flags.writeable = False
        self._packed = payload
        self._length = length

    # construction -------------------------------------------------------

    @classmethod
    def from_array(cls, bits: Iterable[int] | np.ndarray) -> "BitString":
        arr = np.asarray(bits if isinstance(bits, np.ndarray) else list(bits))
        if arr.ndim != 1:
            raise RejectedInputError("bits must be one-dimensional")
        if arr.size and not np.all((arr == 0) | (arr == 1)):
            raise RejectedInputError("bits must be 0 or 1")
        arr = arr.astype(np.uint8, copy=False)
        return cls(np.packbits(arr, bitorder="big").tobytes(), int(arr.size))

    @classmethod
    def _adopt(cls, arr: np.ndarray) -> "BitString":
        """Wrap a fresh 1-D uint8 array already known to hold only 0/1.

        The array becomes the cached ``bits`` view, so the caller must not keep
        a writable reference to it.
        """
        obj = cls.__new__(cls)
        packed = np.packbits(arr, bitorder="big")
        packed.flags.writeable = False
        obj._packed = packed
        obj._length = int(arr.size)
        arr.flags.writeable = False
        obj.__dict__["bits"] = arr
        return obj

    @classmethod
    def from_str(cls, text: str) -> "BitString":
        """Parse '0'/'1' characters; whitespace is ignored."""
        cleaned = "".join(text.split())
        if cleaned.strip("01"):
            raise RejectedInputError("text bit strings may only contain '0', '1' and whitespace")
        arr = np.frombuffer(cleaned.encode("ascii"), dtype=np.uint8) - ord("0")
        return cls.from_array(arr)

    @classmethod
    def zeros(cls, n: int) -> "BitString":
        return cls(bytes((n + 7) // 8), n)

    @classmethod
    def ones(cls, n: int) -> "BitString":
        return cls.from_array(np.ones(n, dtype=np.uint8))

    # views ----------------------------------------------------------------

    @property
    def length(self) -> int:
        return self._length

    @property
    def packed(self) -> bytes:
        return self._packed.tobytes()

    @cached_property
    def bits(self) -> np.ndarray:
        """Read-only uint8 array of 0/1 symbols."""
        arr = np.unpackbits(self._packed, count=self._length, bitorder="big")
        arr.flags.writeable = False
        return arr

    @cached_property
    def popcount(self) -> int:
        return int(np.count_nonzero(self.bits))

    def __len__(self) -> int:
        return self._length

    def __iter__(self):
        return iter(self.bits.tolist())

    def __getitem__(self, item):
        if isinstance(item, slice):
            return BitString.from_array(self.bits[item])
        return int(self.bits[item])

    def __add__(self, other: "BitString") -> "BitString":
        return BitString.from_array(np.concatenate([self.bits, other.bits]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return self._length == other._length and np.array_equal(self._packed, other._packed)

    def __hash__(self) -> int:
        return hash((self._length, self.packed))

    def __str__(self) -> str:
        return (self.bits + ord("0")).tobytes().decode("ascii")

    def __repr__(self) -> str:
        if self._length <= 64:
            return f"BitString('{self}')"
        return f"BitString(<{self._length} bits>)"

    def is_prefix_of(self, other: "BitString") -> bool:
        return self._length <= other._length and np.array_equal(
            self.bits, other.bits[: self._length]
        )


class SelectionMask:
    """A :class:`BitString` acting as a selector y."""


    def __init__(self, mask: BitString):
        self.mask = mask

    @classmethod
    def from_str(cls, text: str) -> "SelectionMask":
        return cls(BitString.from_str(text))

    @property
    def ones(self) -> int:
        return self.mask.popcount

    @cached_property
    def tau(self) -> np.ndarray:
        """1-based positions of the ones, strictly increasing."""
        idx = np.flatnonzero(self.mask.bits).astype(np.int64) + 1
        idx.flags.writeable = False
        return idx

    def __len__(self) -> int:
        return len(self.mask)

    def __eq__(self, other) -> bool:
        return isinstance(other, SelectionMask) and self.mask == other.mask

    def __hash__(self) -> int:
        return hash(self.mask)

    def __repr__(self) -> str:
        return f"SelectionMask({self.mask!r})"


MaskLike = Union[SelectionMask, BitString]


def _as_mask(y: MaskLike) -> SelectionMask:
    return y if isinstance(y, SelectionMask) else SelectionMask(y)


def select(x: BitString, y: MaskLike) -> BitString:
    """Subsequence of ``x`` at the positions where ``y`` has a one."""
    y = _as_mask(y)
    if len(x) != len(y):
        raise RejectedInputError(f"select needs equal lengths, got |x|={len(x)} and |y|={len(y)}")
    return BitString._adopt(kernels.select_bits(x.bits, y.mask.bits))


def complement(y: MaskLike) -> SelectionMask:
    y = _as_mask(y)
    return SelectionMask(BitString._adopt(1 - y.mask.bits))


def tau_indices(y: MaskLike) -> list[int]:
    return _as_mask(y).tau.tolist()


def merge(a: BitString, b: BitString, y: MaskLike) -> BitString:
    """Interleave ``a`` (at the ones of y) and ``b`` (at the zeros).

    Inverse of the pair ``(select(x, y), select(x, complement(y)))``.
    """
    y = _as_mask(y)
    if len(a) != y.ones or len(b) != len(y) - y.ones:
        raise RejectedInputError(
            f"merge needs |a|={y.ones} and |b|={len(y) - y.ones}, got {len(a)} and {len(b)}"
        )
    return BitString._adopt(kernels.merge_bits(a.bits, b.bits, y.mask.bits))


def ones_density(y: MaskLike, n: int) -> Fraction:
    """Exact fraction of ones among the first ``n`` symbols of ``y``."""
    y = _as_mask(y)
    if n <= 0 or n > len(y):
        raise RejectedInputError(f"n must lie in 1..{len(y)}, got {n}")
    return Fraction(int(np.count_nonzero(y.mask.bits[:n])), n)
