import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codedrill import analytics
from codedrill.errors import CorruptLog
from codedrill.scheduler import AssignmentMode
from codedrill.session import LogEvent
from codedrill.simulator import LearnerPolicy, run_cohort


def submitted(learner, all_correct=False, missing=False, ts=0.0):
    return LogEvent(
        ts,
        learner,
        "submitted",
        {"question_id": 1, "all_correct": all_correct, "missing_logic": missing},
    )


def skipped(learner, ts=0.0):
    return LogEvent(ts, learner, "skipped", {"question_id": 1})


def selected(learner, concept, ts=0.0):
    return LogEvent(ts, learner, "concept_selected", {"concept": concept, "first_time": True})


def completed(learner, concept, ts=0.0):
    return LogEvent(ts, learner, "concept_completed", {"concept": concept, "rule": "x"})


class TestComputeFeatures:
    def test_rate_partition(self):
        # 10 submissions: 6 correct, 1 missing-logic, 3 incorrect
        log = (
            [submitted("a", all_correct=True) for _ in range(6)]
            + [submitted("a", missing=True)]
            + [submitted("a") for _ in range(3)]
        )
        feats = analytics.compute_features(log)
        assert feats.correct_submission_rate == pytest.approx(60.0)
        assert feats.missing_logic_rate == pytest.approx(10.0)
        assert feats.incorrect_submission_rate == pytest.approx(30.0)

    def test_empty_log_is_all_zeros(self):
        assert analytics.compute_features([]) == analytics.ZERO_FEATURES

    def test_unsuccessful_concepts(self):
        log = [
            selected("a", "conditionals"),
            selected("a", "functions"),
            completed("a", "conditionals"),
        ]
        feats = analytics.compute_features(log)
        assert feats.successful_concepts == 1
        assert feats.unsuccessful_concepts == 1

    def test_learner_filter(self):
        log = [submitted("a", all_correct=True), submitted("b"), skipped("b")]
        a = analytics.compute_features(log, "a")
        b = analytics.compute_features(log, "b")
        assert a.correct_submission_rate == 100.0 and a.skip_count == 0
        assert b.correct_submission_rate == 0.0 and b.skip_count == 1

    def test_group_totals_sum_like_the_cohort_sizes(self):
        # three groups contributing 127 + 936 + 123 = 1186 submissions
        logs = {
            "preliminary": [submitted(f"p{i % 15}", ts=i) for i in range(127)],
            "experimental": [submitted(f"e{i % 26}", ts=i) for i in range(936)],
            "control": [submitted(f"c{i % 15}", ts=i) for i in range(123)],
        }
        total = sum(analytics.submission_count(log) for log in logs.values())
        assert total == 1186

    def test_corrupt_entry_raises(self):
        with pytest.raises(CorruptLog):
            analytics.compute_features([{"timestamp": 0, "learner_id": "a", "kind": "bad_kind"}])
        with pytest.raises(CorruptLog):
            analytics.compute_features(["not an event"])


EVENT_KINDS = ["correct", "incorrect", "missing", "skip", "select", "complete"]


@st.composite
def random_logs(draw):
    n = draw(st.integers(min_value=0, max_value=60))
    learners = ["a", "b", "c"]
    concepts = ["conditionals", "functions", "list"]
    log = []
    selected_pairs = set()
    for i in range(n):
        kind = draw(st.sampled_from(EVENT_KINDS))
        learner = draw(st.sampled_from(learners))
        if kind == "correct":
            log.append(submitted(learner, all_correct=True, ts=i))
        elif kind == "incorrect":
            log.append(submitted(learner, ts=i))
        elif kind == "missing":
            log.append(submitted(learner, missing=True, ts=i))
        elif kind == "skip":
            log.append(skipped(learner, ts=i))
        elif kind == "select":
            concept = draw(st.sampled_from(concepts))
            selected_pairs.add((learner, concept))
            log.append(selected(learner, concept, ts=i))
        else:
            if selected_pairs:
                learner, concept = draw(st.sampled_from(sorted(selected_pairs)))
                log.append(completed(learner, concept, ts=i))
    return log


class TestFeatureProperties:
    @given(log=random_logs())
    @settings(max_examples=150)
    def test_counts_match_brute_force(self, log):
        feats = analytics.compute_features(log)
        subs = [e for e in log if e.kind == "submitted"]
        n = len(subs)
        n_correct = sum(1 for e in subs if e.payload["all_correct"])
        n_missing = sum(
            1 for e in subs if e.payload["missing_logic"] and not e.payload["all_correct"]
        )
        if n:
            assert feats.correct_submission_rate == pytest.approx(100 * n_correct / n)
            assert feats.missing_logic_rate == pytest.approx(100 * n_missing / n)
            assert feats.incorrect_submission_rate == pytest.approx(
                100 * (n - n_correct - n_missing) / n
            )
        assert feats.skip_count == sum(1 for e in log if e.kind == "skipped")
        assert feats.successful_concepts == sum(1 for e in log if e.kind == "concept_completed")

    @given(log=random_logs())
    @settings(max_examples=100)
    def test_rates_partition_to_100(self, log):
        feats = analytics.compute_features(log)
        total = (
            feats.correct_submission_rate
            + feats.incorrect_submission_rate
            + feats.missing_logic_rate
        )
        if any(e.kind == "submitted" for e in log):
            assert total == pytest.approx(100.0)
        else:
            assert total == 0.0

    @given(log=random_logs())
    @settings(max_examples=100)
    def test_invariant_under_reserialization(self, log):
        redecoded = [LogEvent.from_dict(json.loads(ev.to_json())) for ev in log]
        assert analytics.compute_features(redecoded) == analytics.compute_features(log)


class TestTablesAndCsv:
    def cohort_log(self, graph, bank, seed=4):
        return run_cohort(
            4,
            [LearnerPolicy.bernoulli(0.7, pretest_score=0.0, skip_rate=0.1, sloppy_rate=0.6)],
            bank,
            graph,
            AssignmentMode.adaptive(),
            seed=seed,
            max_steps=40,
        )

    def test_per_learner_rows(self, graph, bank):
        log = self.cohort_log(graph, bank)
        rows = analytics.per_learner_table(log, group="exp")
        assert [r["learner_id"] for r in rows] == sorted({e.learner_id for e in log})
        for row in rows:
            assert row["group"] == "exp"
            assert set(analytics.FEATURE_NAMES) <= set(row)

    def test_csv_deterministic_and_complete(self, graph, bank):
        log = self.cohort_log(graph, bank)
        rows = analytics.per_learner_table(log, group="exp")
        text_a = analytics.table_to_csv(rows)
        text_b = analytics.table_to_csv(analytics.per_learner_table(log, group="exp"))
        assert text_a == text_b
        header = text_a.splitlines()[0].split(",")
        assert header == list(analytics.CSV_COLUMNS)
        assert len(text_a.splitlines()) == len(rows) + 1

    def test_single_group_summary_sd_zero_for_constant(self):
        log = [submitted("a", all_correct=True), submitted("b", all_correct=True)]
        table = analytics.summarize_groups({"g": log})
        row = table[0]
        assert row["correct_submission_rate_mean"] == 100.0
        assert row["correct_submission_rate_sd"] == 0.0

    def test_identical_groups_identical_rows(self):
        log = [submitted("a", all_correct=True), submitted("a"), skipped("a")]
        table = analytics.summarize_groups({"g1": list(log), "g2": list(log)})
        a, b = table
        a_values = {k: v for k, v in a.items() if k != "group"}
        b_values = {k: v for k, v in b.items() if k != "group"}
        assert a_values == b_values

    def test_simulated_cohort_summary_row(self, graph, bank):
        log = self.cohort_log(graph, bank)
        table = analytics.summarize_groups({"sim": log})
        assert table[0]["learners"] == len({e.learner_id for e in log})
        assert table[0]["correct_submission_rate_mean"] > 0
        assert analytics.summary_to_csv(table).startswith("group,")
