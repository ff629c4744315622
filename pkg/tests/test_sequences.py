import math

import pytest
from hypothesis import given, settings, strategies as st

from src.engine.sequences import (alpha, alpha_diff, alpha_diff2, b_gap, check_condition_c1, convexity_margin,
                                  index_cap, make_sequence, min_valid_index)
from src.models.enums import SequenceCase
from src.models.errors import ConditionError, SequenceError


class TestMakeSequence:
    """Scale constants and parameter validation"""

    @pytest.mark.parametrize("case,kwargs", [
        ("A", {"q": 1.0}),
        ("A", {"q": 2.5}),
        ("B", {"lam": 0.5}),
        ("B", {"lam": 0.1}),
        ("C", {"lam": 0.4}),
        ("C", {"lam": 0.7}),
    ])
    def test_first_angle_is_right_angle(self, case, kwargs):
        seq = make_sequence(case, **kwargs)
        assert alpha(seq, 1) == pytest.approx(math.pi / 2, rel=1e-15)

    def test_scale_constants(self, seq_a, seq_b, seq_c):
        assert seq_a.c == pytest.approx(math.pi / 2)
        assert seq_b.c == pytest.approx(math.pi)
        assert seq_c.c == pytest.approx(math.pi / 0.8)

    def test_labels(self, seq_a, seq_b):
        assert seq_a.label == "A(q=1)"
        assert seq_b.label == "B(lambda=0.5)"

    @pytest.mark.parametrize("case,kwargs", [
        ("B", {"lam": 1.2}),
        ("B", {"lam": 0.0}),
        ("B", {}),
        ("C", {"lam": 1.0}),
        ("C", {"lam": float("nan")}),
        ("A", {"q": 0.0}),
        ("A", {"q": -1.0}),
        ("A", {}),
    ])
    def test_invalid_parameters(self, case, kwargs):
        with pytest.raises(SequenceError):
            make_sequence(case, **kwargs)

    def test_case_is_coerced(self):
        assert make_sequence("B", lam=0.5).case == SequenceCase.B

    def test_index_must_be_positive(self, seq_b):
        with pytest.raises(SequenceError):
            alpha(seq_b, 0)


class TestValues:
    """Closed-form values of the three families"""

    def test_case_b_powers(self, seq_b):
        assert alpha(seq_b, 2) == pytest.approx(math.pi / 4, rel=1e-15)
        assert alpha(seq_b, 3) == pytest.approx(math.pi / 8, rel=1e-15)

    def test_case_a_harmonic(self, seq_a):
        assert alpha(seq_a, 4) == pytest.approx(math.pi / 8, rel=1e-15)

    def test_case_c_values(self, seq_c):
        assert alpha(seq_c, 2) == pytest.approx(0.10053096, rel=1e-6)
        assert alpha(seq_c, 5) == pytest.approx(seq_c.c * 0.4 ** 25, rel=1e-13)

    def test_case_c_difference_keeps_relative_precision(self, seq_c):
        expected = seq_c.c * (0.4 ** 16 - 0.4 ** 25)
        assert alpha_diff(seq_c, 4, 5) == pytest.approx(expected, rel=1e-12)
        assert alpha_diff(seq_c, 4, 5) == pytest.approx(1.6862e-6, rel=1e-4)

    def test_difference_needs_ordered_indices(self, seq_b):
        with pytest.raises(SequenceError):
            alpha_diff(seq_b, 3, 3)
        with pytest.raises(SequenceError):
            alpha_diff(seq_b, 4, 3)

    def test_b_gap(self, seq_b):
        assert b_gap(seq_b, 3) == pytest.approx(math.pi / 8, rel=1e-14)

    @pytest.mark.parametrize("n", [5, 20, 400])
    def test_second_difference_case_a(self, seq_a, n):
        # For q = 1: 2 c / ((n - 1) n (n + 1))
        expected = math.pi / ((n - 1) * n * (n + 1))
        assert alpha_diff2(seq_a, n) == pytest.approx(expected, rel=1e-12)

    def test_second_difference_case_b(self, seq_b):
        assert alpha_diff2(seq_b, 4) == pytest.approx(alpha(seq_b, 3) * 0.25, rel=1e-15)

    def test_second_difference_case_c(self, seq_c):
        direct = alpha(seq_c, 2) - 2 * alpha(seq_c, 3) + alpha(seq_c, 4)
        assert alpha_diff2(seq_c, 3) == pytest.approx(direct, rel=1e-12)

    def test_second_difference_needs_n_at_least_two(self, seq_b):
        with pytest.raises(SequenceError):
            alpha_diff2(seq_b, 1)

    @given(lam=st.floats(min_value=0.05, max_value=0.95), n=st.integers(min_value=1, max_value=200))
    @settings(max_examples=200, deadline=None)
    def test_case_b_differences_match_direct(self, lam, n):
        seq = make_sequence("B", lam=lam)
        diff = alpha_diff(seq, n, n + 1)
        assert diff > 0.0
        assert diff == pytest.approx(alpha(seq, n) * (1.0 - lam), rel=1e-12)

    @given(q=st.floats(min_value=0.25, max_value=4.0), n=st.integers(min_value=2, max_value=5000))
    @settings(max_examples=200, deadline=None)
    def test_case_a_second_difference_positive(self, q, n):
        seq = make_sequence("A", q=q)
        assert alpha_diff2(seq, n) > 0.0
        assert alpha(seq, n + 1) < alpha(seq, n)


class TestCondition:
    """Monotonicity and midpoint convexity"""

    def test_case_b_always_holds(self, seq_b):
        report = check_condition_c1(seq_b, 60)
        assert report.passed
        assert convexity_margin(seq_b, 7) == pytest.approx(0.25)

    def test_case_a_holds(self, seq_a):
        assert check_condition_c1(seq_a, 500).passed

    def test_horizon_too_short(self, seq_b):
        with pytest.raises(SequenceError):
            check_condition_c1(seq_b, 2)

    @pytest.mark.parametrize("lam,n_min", [(0.4, 1), (0.7, 1), (0.9, 2), (0.95, 3)])
    def test_case_c_first_valid_index(self, lam, n_min):
        seq = make_sequence("C", lam=lam)
        assert seq.n_min == n_min
        assert check_condition_c1(seq, 40).passed

    def test_case_c_index_before_n_min_fails(self):
        seq = make_sequence("C", lam=0.9)
        assert convexity_margin(seq, 1) < 0.0
        assert convexity_margin(seq, 2) > 0.0

    def test_case_c_unresolvable_within_horizon(self):
        with pytest.raises(ConditionError) as info:
            make_sequence("C", lam=0.999, horizon=10)
        assert info.value.first_failure == 1

    def test_min_valid_index_other_cases(self, seq_a, seq_b):
        assert min_valid_index(seq_a) == 1
        assert min_valid_index(seq_b) == 1

    def test_index_caps(self, seq_a, seq_b, seq_c):
        assert index_cap(seq_a) == 10_000
        assert index_cap(seq_b) == 498
        assert index_cap(seq_c) == 12
