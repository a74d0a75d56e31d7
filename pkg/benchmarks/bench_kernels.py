"""Compare the numba kernels with their numpy twins.

    python benchmarks/bench_kernels.py [--n 1000000] [--repeat 3]

Prints one line per kernel with the best-of-repeat wall time for each backend
and checks that both backends return identical output.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from subseqrand import bernoulli_measure
from subseqrand import kernels as K
from subseqrand.coder import _capacity


def cases(n: int):
    rng = np.random.default_rng(1)
    x = (rng.random(n) < 0.5).astype(np.uint8)
    m = (rng.random(n) < 0.7).astype(np.uint8)
    a, b = K.select_np(x, m), K.select_np(x, 1 - m)
    small = max(1, n // 10)  # the Python-int twins are slow; keep them to n/10
    k1, nxt, s0 = bernoulli_measure("1/3").table()
    y = x[:small]
    cap = _capacity(k1, small)
    code, ncode, _, _ = K.encode_np(y, k1, nxt, s0, cap)
    code = code[:ncode]
    return [
        ("threshold_bits", n, (np.uint64(42), n, np.uint64(1 << 63)), K.threshold_bits_nb, K.threshold_bits_np),
        ("rotation_bits", n, (377, 987, n), K.rotation_bits_nb, K.rotation_bits_np),
        ("block_codes k=10", n, (x, 10), K.block_codes_nb, K.block_codes_np),
        ("select", n, (x, m), K.select_nb, K.select_np),
        ("merge", n, (a, b, m), K.merge_nb, K.merge_np),
        ("lz78", small, (x[:small],), K.lz78_nb, K.lz78_np),
        ("encode u1/3", small, (y, k1, nxt, s0, cap), K.encode_nb, K.encode_np),
        ("decode u1/3", small, (code, ncode, small, k1, nxt, s0, False), K.decode_nb, K.decode_np),
    ]


def same(u, v) -> bool:
    if isinstance(u, tuple):
        return all(same(p, q) for p, q in zip(u, v))
    return np.array_equal(np.asarray(u), np.asarray(v))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10**6)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not K.HAVE_NUMBA:
        raise SystemExit("numba is not installed")
    print(f"{'kernel':<18}{'n':>9}{'numba ms':>11}{'numpy ms':>11}{'speedup':>9}  match")
    for name, n, call_args, nb, np_ in cases(args.n):
        nb(*call_args)  # compile outside the timing
        t_nb = min(timeit.repeat(lambda: nb(*call_args), number=1, repeat=args.repeat))
        t_np = min(timeit.repeat(lambda: np_(*call_args), number=1, repeat=args.repeat))
        match = same(nb(*call_args), np_(*call_args))
        print(f"{name:<18}{n:>9}{t_nb * 1e3:>11.2f}{t_np * 1e3:>11.2f}{t_np / t_nb:>8.1f}x  {match}")


if __name__ == "__main__":
    main()
