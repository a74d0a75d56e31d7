"""Hot inner loops, each in a numba flavour (``*_nb``) and a numpy/Python flavour (``*_np``).

The public name (without suffix) is bound at import time according to
:mod:`subseqrand._accel`.  Both flavours must agree bit for bit; the test suite
checks this directly.

Arithmetic-coder layout
-----------------------
Binary Witten-Neal-Cleary coder on a ``PREC``-bit window with pending
(underflow) bits instead of carries.  Conditionals arrive as integers
``k1 = round(P(1 | state) * 2**32)``; the sub-interval of symbol 0 has width
``floor(range * (2**32 - k1) / 2**32)`` and symbol 1 takes the remainder.
A measure is handed over as a finite-state table: ``k1_table[state]`` and
``next_state[state, bit]``.
"""

from __future__ import annotations

import numpy as np

from ._accel import HAVE_NUMBA, USE_NUMBA, njit

PREC = 61
TOP = 1 << PREC
HALF = 1 << (PREC - 1)
QUARTER = 1 << (PREC - 2)
THREE_Q = HALF + QUARTER
ONE = 1 << 32

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1


# --------------------------------------------------------------------------
# SplitMix64

def splitmix64_np(seed: int, n: int) -> np.ndarray:
    steps = np.arange(1, n + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & MASK64) + steps * np.uint64(GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
        z = z ^ (z >> np.uint64(31))
    return z


def _splitmix64_nb(seed, n):
    out = np.empty(n, dtype=np.uint64)
    state = np.uint64(seed)
    gamma = np.uint64(GOLDEN_GAMMA)
    m1 = np.uint64(MIX1)
    m2 = np.uint64(MIX2)
    s30 = np.uint64(30)
    s27 = np.uint64(27)
    s31 = np.uint64(31)
    for i in range(n):
        state = state + gamma
        z = state
        z = (z ^ (z >> s30)) * m1
        z = (z ^ (z >> s27)) * m2
        out[i] = z ^ (z >> s31)
    return out


def _threshold_bits_nb(seed, n, threshold):
    out = np.empty(n, dtype=np.uint8)
    state = np.uint64(seed)
    gamma = np.uint64(GOLDEN_GAMMA)
    m1 = np.uint64(MIX1)
    m2 = np.uint64(MIX2)
    s30 = np.uint64(30)
    s27 = np.uint64(27)
    s31 = np.uint64(31)
    thr = np.uint64(threshold)
    for i in range(n):
        state = state + gamma
        z = state
        z = (z ^ (z >> s30)) * m1
        z = (z ^ (z >> s27)) * m2
        z = z ^ (z >> s31)
        out[i] = 1 if z < thr else 0
    return out


def _threshold_bits_np(seed, n, threshold):
    return (splitmix64_np(seed, n) < np.uint64(threshold)).astype(np.uint8)


# --------------------------------------------------------------------------
# Beatty / rotation bits: y_i = floor((i+1)p/q) - floor(ip/q), i = 1..n

def _rotation_bits_nb(p, q, n):
    out = np.empty(n, dtype=np.uint8)
    r = p % q
    for i in range(n):
        if r + p >= q:
            out[i] = 1
            r = r + p - q
        else:
            out[i] = 0
            r = r + p
    return out


def _rotation_bits_np(p, q, n):
    if (n + 2) * max(p, 1) < (1 << 62):
        i = np.arange(1, n + 2, dtype=np.int64)
        floors = (i * p) // q
    else:
        i = np.arange(1, n + 2, dtype=object)
        floors = (i * p) // q
    return np.diff(floors).astype(np.uint8)


# --------------------------------------------------------------------------
# Sliding-window block codes (k <= 62)

def _block_codes_nb(bits, k):
    n = bits.shape[0]
    m = n - k + 1
    out = np.empty(m, dtype=np.int64)
    mask = (np.int64(1) << k) - 1
    code = np.int64(0)
    for i in range(k - 1):
        code = (code << 1) | bits[i]
    for i in range(m):
        code = ((code << 1) | bits[i + k - 1]) & mask
        out[i] = code
    return out


def _block_codes_np(bits, k):
    m = bits.shape[0] - k + 1
    code = np.zeros(m, dtype=np.int64)
    for j in range(k):
        code = (code << 1) | bits[j : j + m].astype(np.int64)
    return code


# --------------------------------------------------------------------------
# LZ78 incremental parse.  Phrase j (1-based) = phrase[prefix[j-1]] + last[j-1],
# phrase 0 being empty.  A trailing partial phrase repeats an existing one.

def _lz78_nb(bits):
    n = bits.shape[0]
    child = np.full((n + 1, 2), -1, dtype=np.int32)
    prefix = np.empty(n + 1, dtype=np.int64)
    last = np.empty(n + 1, dtype=np.uint8)
    c = 0
    cur = 0
    for i in range(n):
        b = bits[i]
        nxt = child[cur, b]
        if nxt >= 0:
            cur = nxt
        else:
            c += 1
            child[cur, b] = c
            prefix[c - 1] = cur
            last[c - 1] = b
            cur = 0
    if cur != 0:
        prefix[c] = prefix[cur - 1]
        last[c] = last[cur - 1]
        c += 1
    return prefix[:c].copy(), last[:c].copy()


def _lz78_np(bits):
    trie: dict[tuple[int, int], int] = {}
    prefix: list[int] = []
    last: list[int] = []
    cur = 0
    for b in bits.tolist():
        nxt = trie.get((cur, b))
        if nxt is not None:
            cur = nxt
        else:
            prefix.append(cur)
            last.append(b)
            trie[(cur, b)] = len(prefix)
            cur = 0
    if cur != 0:
        prefix.append(prefix[cur - 1])
        last.append(last[cur - 1])
    return np.array(prefix, dtype=np.int64), np.array(last, dtype=np.uint8)


# --------------------------------------------------------------------------
# Selection and its inverse on unpacked 0/1 arrays

def _select_nb(x, m):
    out = np.empty(x.shape[0], dtype=np.uint8)
    k = 0
    for i in range(x.shape[0]):
        out[k] = x[i]
        k += m[i]
    return out[:k].copy()


def _select_np(x, m):
    return x[m.view(bool)]


def _merge_nb(a, b, m):
    out = np.empty(m.shape[0], dtype=np.uint8)
    i = 0
    j = 0
    for t in range(m.shape[0]):
        if m[t]:
            out[t] = a[i]
            i += 1
        else:
            out[t] = b[j]
            j += 1
    return out


def _merge_np(a, b, m):
    chosen = m.view(bool)
    out = np.empty(m.shape[0], dtype=np.uint8)
    out[chosen] = a
    out[~chosen] = b
    return out


# --------------------------------------------------------------------------
# Arithmetic coder

def _mulshift_nb(rng, k):
    # floor(rng * k / 2**32) for rng <= 2**61, k <= 2**32 without int64 overflow
    hi = rng >> 31
    lo = rng & 0x7FFFFFFF
    return (hi * k + ((lo * k) >> 31)) >> 1


def _encode_nb(y, k1_table, next_state, state0, capacity):
    n = y.shape[0]
    out = np.zeros(capacity, dtype=np.uint8)
    trace = np.zeros(n, dtype=np.int64)
    low = np.int64(0)
    high = np.int64(TOP - 1)
    pending = 0
    shifts = 0
    nout = 0
    state = state0
    for i in range(n):
        b = y[i]
        rng = high - low + 1
        r0 = _mulshift(rng, ONE - k1_table[state])
        if b == 0:
            if r0 == 0:
                return out, nout, trace, i
            high = low + r0 - 1
        else:
            if r0 == rng:
                return out, nout, trace, i
            low = low + r0
        state = next_state[state, b]
        while True:
            if high < HALF:
                out[nout] = 0
                nout += 1
                for _ in range(pending):
                    out[nout] = 1
                    nout += 1
                pending = 0
            elif low >= HALF:
                out[nout] = 1
                nout += 1
                for _ in range(pending):
                    out[nout] = 0
                    nout += 1
                pending = 0
                low -= HALF
                high -= HALF
            elif low >= QUARTER and high < THREE_Q:
                pending += 1
                low -= QUARTER
                high -= QUARTER
            else:
                break
            low = low << 1
            high = (high << 1) | 1
            shifts += 1
        rng = high - low + 1
        # ceil(-log2(width)) with width = rng * 2**-(shifts + PREC); rng > 2**59 here
        if rng >= TOP:
            trace[i] = shifts
        elif rng >= HALF:
            trace[i] = shifts + 1
        else:
            trace[i] = shifts + 2
    # shortest dyadic cylinder inside the final interval
    if pending == 0 and low == 0 and high == TOP - 1:
        return out, nout, trace, -1
    t = 1
    m = np.int64(0)
    while t <= PREC:
        step = np.int64(1) << (PREC - t)
        m = (low + step - 1) >> (PREC - t)
        if (m + 1) * step <= high + 1:
            break
        t += 1
    first = (m >> (t - 1)) & 1
    out[nout] = first
    nout += 1
    for _ in range(pending):
        out[nout] = 1 - first
        nout += 1
    for j in range(t - 2, -1, -1):
        out[nout] = (m >> j) & 1
        nout += 1
    return out, nout, trace, -1


def _decode_nb(code, avail, n, k1_table, next_state, state0, want_trace):
    ncode = code.shape[0]
    y = np.zeros(n, dtype=np.uint8)
    trace = np.zeros(n, dtype=np.int64)
    reg = np.int64(0)
    for j in range(PREC):
        bit = 0
        if j < avail and j < ncode:
            bit = code[j]
        reg = (reg << 1) | bit
    pos = PREC
    low = np.int64(0)
    high = np.int64(TOP - 1)
    shifts = 0
    state = state0
    need = 0
    for i in range(n):
        rng = high - low + 1
        thr = low + _mulshift(rng, ONE - k1_table[state])
        j = avail - shifts
        if j >= PREC:
            b = 0 if reg < thr else 1
        elif j < 0:
            return y, i, trace
        else:
            width = np.int64(1) << (PREC - j)
            base = reg & ~(width - 1)
            if base + width <= thr:
                b = 0
            elif base >= thr:
                b = 1
            else:
                return y, i, trace
        if want_trace:
            jj = 0
            while jj < PREC:
                width = np.int64(1) << (PREC - jj)
                base = reg & ~(width - 1)
                if b == 0:
                    if base + width <= thr:
                        break
                elif base >= thr:
                    break
                jj += 1
            if shifts + jj > need:
                need = shifts + jj
            trace[i] = need
        y[i] = b
        if b == 0:
            high = thr - 1
        else:
            low = thr
        state = next_state[state, b]
        while True:
            if high < HALF:
                pass
            elif low >= HALF:
                low -= HALF
                high -= HALF
                reg -= HALF
            elif low >= QUARTER and high < THREE_Q:
                low -= QUARTER
                high -= QUARTER
                reg -= QUARTER
            else:
                break
            low = low << 1
            high = (high << 1) | 1
            bit = 0
            if pos < avail and pos < ncode:
                bit = code[pos]
            reg = (reg << 1) | bit
            pos += 1
            shifts += 1
    return y, n, trace


# Python-int twins of the coder.  Kept structurally parallel to the numba
# versions but written against plain ints and lists.

def _encode_np(y, k1_table, next_state, state0, capacity):
    k1s = [int(v) for v in k1_table]
    nxt = [[int(a), int(b)] for a, b in next_state]
    out: list[int] = []
    trace = np.zeros(len(y), dtype=np.int64)
    low, high, pending, shifts, state = 0, TOP - 1, 0, 0, int(state0)
    for i, b in enumerate(y.tolist()):
        rng = high - low + 1
        r0 = (rng * (ONE - k1s[state])) >> 32
        if b == 0:
            if r0 == 0:
                return _pad(out, capacity), len(out), trace, i
            high = low + r0 - 1
        else:
            if r0 == rng:
                return _pad(out, capacity), len(out), trace, i
            low += r0
        state = nxt[state][b]
        while True:
            if high < HALF:
                out.append(0)
                out.extend([1] * pending)
                pending = 0
            elif low >= HALF:
                out.append(1)
                out.extend([0] * pending)
                pending = 0
                low -= HALF
                high -= HALF
            elif low >= QUARTER and high < THREE_Q:
                pending += 1
                low -= QUARTER
                high -= QUARTER
            else:
                break
            low <<= 1
            high = (high << 1) | 1
            shifts += 1
        trace[i] = shifts + PREC - ((high - low + 1).bit_length() - 1)
    if not (pending == 0 and low == 0 and high == TOP - 1):
        for t in range(1, PREC + 1):
            step = 1 << (PREC - t)
            m = -(-low // step)
            if (m + 1) * step <= high + 1:
                break
        first = (m >> (t - 1)) & 1
        out.append(first)
        out.extend([1 - first] * pending)
        out.extend((m >> j) & 1 for j in range(t - 2, -1, -1))
    return _pad(out, capacity), len(out), trace, -1


def _pad(bits, capacity):
    arr = np.zeros(max(capacity, len(bits)), dtype=np.uint8)
    arr[: len(bits)] = bits
    return arr


def _decode_np(code, avail, n, k1_table, next_state, state0, want_trace):
    k1s = [int(v) for v in k1_table]
    nxt = [[int(a), int(b)] for a, b in next_state]
    bits = code[: min(avail, code.shape[0])].tolist()
    avail = len(bits)

    def bit_at(p):
        return bits[p] if p < avail else 0

    y = np.zeros(n, dtype=np.uint8)
    trace = np.zeros(n, dtype=np.int64)
    reg = 0
    for j in range(PREC):
        reg = (reg << 1) | bit_at(j)
    pos, low, high, shifts, state, need = PREC, 0, TOP - 1, 0, int(state0), 0
    for i in range(n):
        thr = low + (((high - low + 1) * (ONE - k1s[state])) >> 32)
        j = avail - shifts
        if j >= PREC:
            b = 0 if reg < thr else 1
        elif j < 0:
            return y, i, trace
        else:
            width = 1 << (PREC - j)
            base = reg & ~(width - 1)
            if base + width <= thr:
                b = 0
            elif base >= thr:
                b = 1
            else:
                return y, i, trace
        if want_trace:
            for jj in range(PREC + 1):
                width = 1 << (PREC - jj)
                base = reg & ~(width - 1)
                if (b == 0 and base + width <= thr) or (b == 1 and base >= thr):
                    break
            need = max(need, shifts + jj)
            trace[i] = need
        y[i] = b
        if b == 0:
            high = thr - 1
        else:
            low = thr
        state = nxt[state][b]
        while True:
            if high < HALF:
                pass
            elif low >= HALF:
                low -= HALF
                high -= HALF
                reg -= HALF
            elif low >= QUARTER and high < THREE_Q:
                low -= QUARTER
                high -= QUARTER
                reg -= QUARTER
            else:
                break
            low <<= 1
            high = (high << 1) | 1
            reg = (reg << 1) | bit_at(pos)
            pos += 1
            shifts += 1
    return y, n, trace


# --------------------------------------------------------------------------
# compile + dispatch

if HAVE_NUMBA:
    _mulshift = njit(_mulshift_nb)
    splitmix64_nb = njit(_splitmix64_nb)
    threshold_bits_nb = njit(_threshold_bits_nb)
    rotation_bits_nb = njit(_rotation_bits_nb)
    block_codes_nb = njit(_block_codes_nb)
    lz78_nb = njit(_lz78_nb)
    select_nb = njit(_select_nb)
    merge_nb = njit(_merge_nb)
    encode_nb = njit(_encode_nb)
    decode_nb = njit(_decode_nb)
else:  # pragma: no cover
    splitmix64_nb = threshold_bits_nb = rotation_bits_nb = None
    block_codes_nb = lz78_nb = encode_nb = decode_nb = None
    select_nb = merge_nb = None

threshold_bits_np = _threshold_bits_np
rotation_bits_np = _rotation_bits_np
block_codes_np = _block_codes_np
lz78_np = _lz78_np
select_np = _select_np
merge_np = _merge_np
encode_np = _encode_np
decode_np = _decode_np

if USE_NUMBA:
    threshold_bits = threshold_bits_nb
    rotation_bits = rotation_bits_nb
    block_codes = block_codes_nb
    lz78 = lz78_nb
    select_bits = select_nb
    merge_bits = merge_nb
    encode = encode_nb
    decode = decode_nb
else:
    threshold_bits = threshold_bits_np
    rotation_bits = rotation_bits_np
    block_codes = block_codes_np
    lz78 = lz78_np
    select_bits = select_np
    merge_bits = merge_np
    encode = encode_np
    decode = decode_np
