from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import all_strings, naive_merge, naive_select
from subseqrand import BitString, RejectedInputError, SelectionMask, complement, merge, ones_density, select, tau_indices

B = BitString.from_str
bitstrings = st.text(alphabet="01", max_size=200)


def pair(n):
    return st.tuples(st.text(alphabet="01", min_size=n, max_size=n), st.text(alphabet="01", min_size=n, max_size=n))


same_length = st.integers(0, 150).flatmap(pair)


class TestBitString:
    def test_text_round_trip(self):
        assert str(B("0011 0101\n")) == "00110101"

    @pytest.mark.parametrize("n", range(0, 20))
    def test_padding_is_zero(self, n):
        b = BitString.ones(n)
        assert len(b.packed) == (n + 7) // 8
        if n % 8:
            assert b.packed[-1] & ((1 << (8 - n % 8)) - 1) == 0

    def test_padding_is_cleared_on_construction(self):
        assert BitString(b"\xff", 3) == B("111")
        assert BitString(b"\xff", 3).packed == b"\xe0"

    def test_msb_first(self):
        assert B("10000000").packed == b"\x80"
        assert B("0000000101").packed == b"\x01\x40"

    def test_indexing_and_slicing(self):
        b = B("0110")
        assert [b[i] for i in range(4)] == [0, 1, 1, 0]
        assert b[1:3] == B("11")
        assert b[-1] == 0

    def test_concat_and_prefix(self):
        assert B("01") + B("1") == B("011")
        assert B("01").is_prefix_of(B("011"))
        assert not B("00").is_prefix_of(B("011"))

    def test_bits_view_is_read_only(self):
        with pytest.raises(ValueError):
            B("01").bits[0] = 1

    def test_hash_and_eq(self):
        assert {B("01"), B("01"), B("10")} == {B("01"), B("10")}
        assert B("0") != B("00")

    def test_rejects_non_binary(self):
        with pytest.raises(RejectedInputError):
            B("012")
        with pytest.raises(RejectedInputError):
            BitString.from_array([0, 2])

    @given(bitstrings)
    def test_popcount(self, s):
        assert B(s).popcount == s.count("1")


class TestSelect:
    @pytest.mark.parametrize("x,y,want", [("0011", "0101", "01"), ("1010", "1111", "1010"), ("10110", "00100", "1")])
    def test_examples(self, x, y, want):
        assert str(select(B(x), B(y))) == want

    def test_selection_mask_argument(self):
        assert str(select(B("0011"), SelectionMask.from_str("0101"))) == "01"

    def test_length_mismatch(self):
        with pytest.raises(RejectedInputError, match="3.*4"):
            select(B("001"), B("0101"))

    def test_exhaustive_small(self):
        # lengths 0..10 exhaustively here; the acceptance suite goes to 16
        for n in range(0, 11):
            strings = list(all_strings(n))
            for x in strings[:: max(1, len(strings) // 64)]:
                for y in strings:
                    assert str(select(B(x), B(y))) == naive_select(x, y)

    @given(same_length)
    def test_matches_oracle(self, xy):
        x, y = xy
        assert str(select(B(x), B(y))) == naive_select(x, y)

    @given(same_length)
    def test_lengths_add_up(self, xy):
        x, y = map(B, xy)
        assert len(select(x, y)) + len(select(x, complement(y))) == len(x)

    @given(same_length)
    def test_tau_positions(self, xy):
        x, y = map(B, xy)
        tau = tau_indices(y)
        assert all(a < b for a, b in zip(tau, tau[1:]))
        assert len(tau) == y.popcount
        sub = select(x, y)
        assert all(sub[j] == x[t - 1] for j, t in enumerate(tau))


class TestComplementTau:
    @pytest.mark.parametrize("y,want", [("0101", "1010"), ("1111", "0000"), ("00100", "11011")])
    def test_complement(self, y, want):
        assert str(complement(B(y)).mask) == want

    @pytest.mark.parametrize("y,want", [("0101", [2, 4]), ("0000", []), ("110", [1, 2])])
    def test_tau(self, y, want):
        assert tau_indices(B(y)) == want

    def test_tau_is_one_based_array(self):
        m = SelectionMask.from_str("0101")
        assert m.tau.dtype == np.int64 and m.tau.tolist() == [2, 4]
        assert m.ones == 2


class TestMerge:
    @pytest.mark.parametrize(
        "a,b,y,want",
        [("01", "01", "0101", "0011"), ("1011", "", "1111", "1011"), ("1", "1011", "00100", "10111")],
    )
    def test_examples(self, a, b, y, want):
        assert str(merge(B(a), B(b), B(y))) == want

    @given(same_length)
    def test_inverse_of_split(self, xy):
        x, y = map(B, xy)
        assert merge(select(x, y), select(x, complement(y)), y) == x

    @given(same_length)
    def test_matches_oracle(self, xy):
        x, y = xy
        a, b = naive_select(x, y), naive_select(x, "".join("1" if c == "0" else "0" for c in y))
        assert str(merge(B(a), B(b), B(y))) == naive_merge(a, b, y)

    def test_wrong_part_lengths(self):
        with pytest.raises(RejectedInputError):
            merge(B("11"), B("1"), B("0101"))

    def test_seeded_long_pairs(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            x = BitString.from_array(rng.integers(0, 2, 10_000))
            y = BitString.from_array(rng.integers(0, 2, 10_000))
            assert merge(select(x, y), select(x, complement(y)), y) == x


class TestDensity:
    @pytest.mark.parametrize("y,n,want", [("1111", 4, 1), ("0101", 4, Fraction(1, 2)), ("00100", 5, Fraction(1, 5))])
    def test_examples(self, y, n, want):
        assert ones_density(B(y), n) == want

    def test_prefix_density(self):
        assert ones_density(B("1100"), 2) == 1

    def test_bad_n(self):
        with pytest.raises(RejectedInputError):
            ones_density(B("11"), 3)
