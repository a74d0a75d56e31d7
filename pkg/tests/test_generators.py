from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import beatty_text, champernowne_text, factors, splitmix64_ref
from subseqrand import GeneratorSpec, RejectedInputError, bernoulli_sample, champernowne, distinct_blocks, periodic, sturmian
from subseqrand.generators import FIBONACCI_CF, cf_value, convergents, slope_cf_above, splitmix64

GOLDEN_SLOPE = 2 - (1 + math.sqrt(5)) / 2


class TestChampernowne:
    def test_examples(self):
        assert str(champernowne(1)) == "1"
        assert str(champernowne(10)) == "1101110010"

    def test_matches_oracle(self):
        assert str(champernowne(5000)) == champernowne_text(5000)


class TestSturmian:
    def test_fibonacci_prefix(self):
        assert str(sturmian(FIBONACCI_CF, 5)) == "01001"

    def test_fibonacci_word(self):
        # with this slope the Beatty differences spell the Fibonacci word 0100101001001...
        fib = ["0", "01"]
        while len(fib[-1]) < 3000:
            fib.append(fib[-1] + fib[-2])
        assert str(sturmian(FIBONACCI_CF, 2000)) == fib[-1][:2000]

    def test_tiny_slope(self):
        assert str(sturmian([1000], 5)) == "00000"

    def test_slope_value(self):
        assert abs(float(cf_value(FIBONACCI_CF)) - GOLDEN_SLOPE) < 1e-15

    @pytest.mark.parametrize("cf", [(2, 1), (1, 3, 2), (5,), (1, 1, 7), (3, 16)])
    def test_matches_exact_beatty(self, cf):
        # any convergent with denominator beyond n + 1 gives the exact floors
        for p, q in convergents(cf):
            if q > 10**9:
                break
        assert str(sturmian(list(cf), 3000)) == beatty_text(Fraction(p, q), 3000)

    def test_density_within_two_over_n(self):
        alpha = cf_value(FIBONACCI_CF)
        for n in (10, 999, 10**5, 10**6):
            y = sturmian(FIBONACCI_CF, n)
            assert abs(Fraction(y.popcount, n) - alpha) <= Fraction(2, n)

    def test_factor_complexity(self):
        y = sturmian(FIBONACCI_CF, 10**5)
        text = str(y)
        for k in range(1, 21):
            assert distinct_blocks(y, k) == k + 1 == len(factors(text, k))

    def test_balance(self):
        bits = sturmian((1, 2, 3), 20_000).bits.astype(np.int64)
        cs = np.concatenate([[0], np.cumsum(bits)])
        for ell in range(1, 101):
            sums = cs[ell:] - cs[:-ell]
            assert sums.max() - sums.min() <= 1

    def test_large_denominator_path(self):
        # large partial quotients push the convergent denominators past 2**62
        a = sturmian([10**6, 10**6, 10**6, 10**6], 50)
        assert a == sturmian([10**6] * 4, 60)[:50]

    @pytest.mark.parametrize("cf", [[], [0], [2, -1], [1.5]])
    def test_rejects_bad_cf(self, cf):
        with pytest.raises(RejectedInputError):
            sturmian(cf, 5)


class TestSlopeAbove:
    @pytest.mark.parametrize("target", [Fraction(1, 2), Fraction(4, 5), Fraction(9, 10), Fraction(19, 20), Fraction(3, 7)])
    def test_slope_just_above(self, target):
        cf = slope_cf_above(target)
        alpha = cf_value(cf)
        assert target < alpha < target + Fraction(1, 10)
        y = sturmian(cf, 10**5)
        assert y.popcount / 10**5 >= target


class TestBernoulli:
    def test_splitmix_reference(self):
        assert splitmix64(42, 50).tolist() == splitmix64_ref(42, 50)
        assert splitmix64(2**64 - 1, 5).tolist() == splitmix64_ref(2**64 - 1, 5)

    def test_threshold_rule(self):
        outs = splitmix64_ref(42, 200)
        thr = (1 << 64) // 3
        want = "".join("1" if v < thr else "0" for v in outs)
        assert str(bernoulli_sample("1/3", 42, 200)) == want

    def test_frozen_prefix(self):
        assert str(bernoulli_sample("1/2", 42, 16)) == "0111101010110001"
        assert str(bernoulli_sample("1/2", 42, 8)) == "01111010"

    def test_degenerate(self):
        assert str(bernoulli_sample(0, 5, 8)) == "00000000"
        assert str(bernoulli_sample(1, 5, 8)) == "11111111"

    def test_frequency(self):
        x = bernoulli_sample("1/2", 42, 10**6)
        assert 0.4985 <= x.popcount / 10**6 <= 0.5015

    @pytest.mark.parametrize("q", [0.5, "2", "-1/2", "1/" + str(2**33), True])
    def test_rejects(self, q):
        with pytest.raises(RejectedInputError):
            bernoulli_sample(q, 1, 4)


class TestPeriodic:
    @pytest.mark.parametrize("pat,n,want", [("01", 5, "01010"), ("1", 3, "111"), ("0010", 8, "00100010")])
    def test_examples(self, pat, n, want):
        assert str(periodic(pat, n)) == want

    def test_empty_pattern(self):
        with pytest.raises(RejectedInputError):
            periodic("", 3)


specs = st.one_of(
    st.builds(lambda cf: GeneratorSpec("sturmian", {"cf": cf}), st.lists(st.integers(1, 9), min_size=1, max_size=4)),
    st.builds(
        lambda a, b, s: GeneratorSpec("bernoulli", {"q": f"{a}/{a + b}", "seed": s}),
        st.integers(0, 20), st.integers(1, 20), st.integers(0, 2**64 - 1),
    ),
    st.builds(lambda p: GeneratorSpec("periodic", {"pattern": p}), st.text("01", min_size=1, max_size=9)),
    st.just(GeneratorSpec("champernowne")),
)


class TestSpec:
    @settings(max_examples=60)
    @given(specs, st.integers(1, 400), st.integers(0, 400))
    def test_prefix_coherence(self, spec, n, extra):
        assert spec.generate(n).is_prefix_of(spec.generate(n + extra))

    @given(specs)
    def test_round_trip(self, spec):
        assert GeneratorSpec.from_dict(spec.to_dict()) == spec

    @given(specs)
    def test_determinism(self, spec):
        assert spec.generate(300) == spec.generate(300)

    def test_computable_kinds(self):
        assert GeneratorSpec("sturmian", {"cf": [2, 1]}).computable_selector
        assert not GeneratorSpec("bernoulli", {"q": "1/2", "seed": 1}).computable_selector

    @pytest.mark.parametrize(
        "data",
        [{"kind": "nope"}, {"kind": "sturmian"}, {"kind": "bernoulli", "q": "1/2"},
         {"kind": "bernoulli", "q": 0.5, "seed": 1}, {"kind": "periodic", "pattern": "012"}, ["kind"]],
    )
    def test_invalid(self, data):
        with pytest.raises(RejectedInputError):
            GeneratorSpec.from_dict(data)

    def test_bad_length(self):
        with pytest.raises(RejectedInputError):
            GeneratorSpec("champernowne").generate(0)
