import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codedrill import rating
from codedrill.rating import Transition, check_transition, probability_correct, select_k, update, update_raw

# frozen with a 40-digit evaluation of the logistic
SIGMA_035 = 0.5866175789


class TestProbabilityCorrect:
    def test_even_match_is_half(self):
        assert probability_correct(0.0, 0.0) == 0.5

    def test_known_values(self):
        assert probability_correct(0.35, 0.0) == pytest.approx(SIGMA_035, abs=1e-5)
        assert probability_correct(0.0, 0.35) == pytest.approx(1 - SIGMA_035, abs=1e-5)

    def test_monotone_in_skill_and_difficulty(self):
        grid = [i / 10 for i in range(-30, 31)]
        probs_theta = [probability_correct(x, 0.3) for x in grid]
        assert all(a < b for a, b in zip(probs_theta, probs_theta[1:]))
        probs_d = [probability_correct(0.3, x) for x in grid]
        assert all(a > b for a, b in zip(probs_d, probs_d[1:]))

    @given(
        a=st.floats(min_value=-30, max_value=30),
        b=st.floats(min_value=-30, max_value=30),
    )
    def test_antisymmetry(self, a, b):
        assert probability_correct(a, b) + probability_correct(b, a) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_extreme_gaps_stay_finite(self):
        assert 0.0 <= probability_correct(-500.0, 500.0) < 0.5
        assert 0.5 < probability_correct(500.0, -500.0) <= 1.0


class TestUpdate:
    def test_correct_from_scratch(self):
        theta, d = update(0.0, 0.0, 0.7, 1)
        assert theta == pytest.approx(0.35, abs=1e-12)
        assert d == pytest.approx(-0.35, abs=1e-12)

    def test_incorrect_from_scratch_clamps(self):
        theta, d = update(0.0, 0.0, 0.7, 0)
        assert theta == 0.0
        assert d == pytest.approx(0.35, abs=1e-12)
        raw, _ = update_raw(0.0, 0.0, 0.7, 0)
        assert raw == pytest.approx(-0.35, abs=1e-12)

    def test_zero_rate_is_identity(self):
        assert update(0.6, 0.2, 0.0, 1) == (0.6, 0.2)

    def test_rejects_non_binary_outcome(self):
        with pytest.raises(ValueError):
            update(0.0, 0.0, 0.7, 2)

    @given(
        theta=st.floats(min_value=0, max_value=1),
        d=st.floats(min_value=-1.5, max_value=1.5),
        k=st.floats(min_value=0.05, max_value=0.9),
        outcome=st.sampled_from([0, 1]),
    )
    @settings(max_examples=300)
    def test_conservation_within_one_ulp(self, theta, d, k, outcome):
        # ulp measured at the magnitude of the conserved sum, floored at the
        # unit scale the skill lives on
        raw_theta, new_d = update_raw(theta, d, k, outcome)
        pre, post = theta + d, raw_theta + new_d
        assert abs(post - pre) <= math.ulp(max(abs(pre), abs(post), 1.0))

    @given(
        theta=st.floats(min_value=0, max_value=1),
        d=st.floats(min_value=-1.5, max_value=1.5),
        k=st.floats(min_value=0.05, max_value=0.9),
    )
    def test_monotone_response(self, theta, d, k):
        up_theta, up_d = update(theta, d, k, 1)
        assert up_theta >= theta
        assert up_d <= d
        down_theta, down_d = update(theta, d, k, 0)
        assert down_theta <= theta
        assert down_d >= d

    @given(
        theta=st.floats(min_value=0, max_value=1),
        d=st.floats(min_value=-1.5, max_value=1.5),
        k=st.floats(min_value=0.05, max_value=0.9),
        outcome=st.sampled_from([0, 1]),
    )
    def test_skill_stays_clamped(self, theta, d, k, outcome):
        new_theta, _ = update(theta, d, k, outcome)
        assert 0.0 <= new_theta <= 1.0

    def test_consecutive_correct_against_fixed_item(self):
        # skill strictly climbs until mastery; the clamp at 1.0 flattens it after
        theta, d = 0.0, 0.0
        while theta < rating.MASTERY_THRESHOLD:
            new_theta, new_d = update(theta, d, 0.7, 1)
            assert new_theta > theta
            theta, d = new_theta, new_d
        # the item's difficulty strictly falls with every correct answer
        theta, d = 0.0, 0.0
        for _ in range(20):
            new_theta, new_d = update(theta, d, 0.7, 1)
            assert new_d < d
            theta, d = new_theta, new_d


class TestSelectK:
    @pytest.mark.parametrize(
        "count,expected",
        [(4, 0.7), (5, 0.7), (6, 0.6), (7, 0.5), (8, 0.5), (9, 0.4), (12, 0.4), (40, 0.4)],
    )
    def test_table_rows(self, count, expected):
        assert select_k(count) == expected

    def test_under_minimum_warns_and_falls_back(self, caplog):
        with caplog.at_level("WARNING"):
            assert select_k(3) == 0.7
        assert "at least 4 recommended" in caplog.text

    def test_total_and_deterministic(self):
        first = [select_k(n) for n in range(1, 60)]
        second = [select_k(n) for n in range(1, 60)]
        assert first == second
        assert all(k in (0.4, 0.5, 0.6, 0.7) for k in first)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            select_k(0)


class TestCheckTransition:
    def test_reaching_threshold_promotes(self):
        assert check_transition(0.86) is Transition.PROMOTE
        assert check_transition(0.85) is Transition.PROMOTE

    def test_zero_demotes(self):
        assert check_transition(0.0) is Transition.DEMOTE

    def test_interior_stays(self):
        assert check_transition(0.5) is Transition.STAY

    def test_custom_threshold(self):
        assert check_transition(0.7, threshold=0.6) is Transition.PROMOTE
        assert check_transition(0.5, threshold=0.6) is Transition.STAY

    def test_threshold_constant(self):
        assert rating.MASTERY_THRESHOLD == 0.85
