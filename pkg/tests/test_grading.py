import shutil

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codedrill.errors import MissingTranscript
from codedrill.grading import (
    CommandExecutor,
    GradeOptions,
    Submission,
    VERDICT_CORRECT,
    VERDICT_INCORRECT,
    detect_missing_logic,
    grade,
    normalize_output,
    render_feedback,
    strip_comments,
)

from conftest import make_bank, make_question


@pytest.fixture()
def range_check_question():
    """Two floats; True iff both strictly between 0 and 1."""
    bank = make_bank(
        [
            make_question(
                18,
                ["conditionals"],
                "easy",
                cases=[(["0.1", "1"], ["False"]), (["0.5", "0.3"], ["True"])],
            )
        ]
    )
    return bank[18]


@pytest.fixture()
def voting_age_question():
    """Eligible to vote at age >= 18; otherwise print the missing years."""
    bank = make_bank(
        [
            make_question(
                20,
                ["conditionals"],
                "easy",
                cases=[(["18"], ["True"]), (["12"], ["6"])],
            )
        ]
    )
    return bank[20]


FLOAT_SOLUTION = (
    "num1 = float(input())\n"
    "num2 = float(input())\n"
    "if (num1 > 0 and num1 < 1 and num2 > 0 and num2 < 1):\n"
    "    print(True)\nelse:\n    print(False)\n"
)
INT_SOLUTION = FLOAT_SOLUTION.replace("float(", "int(")
STRICT_AGE_SOLUTION = (
    "age = int(input())\n"
    "if age > 18:\n    print(True)\nelse:\n    print(18 - age)\n"
)


class TestTranscriptGrading:
    def test_correct_solution_both_cases_pass(self, range_check_question):
        submission = Submission(source=FLOAT_SOLUTION, outputs=[["False"], ["True"]])
        report = grade(submission, range_check_question)
        assert [c.verdict for c in report.per_case] == [VERDICT_CORRECT, VERDICT_CORRECT]
        assert report.all_correct

    def test_crashed_runs_render_null(self, range_check_question):
        # int() on "0.1" raises, so both recorded runs are null
        submission = Submission(source=INT_SOLUTION, outputs=[None, None])
        report = grade(submission, range_check_question)
        assert [c.verdict for c in report.per_case] == [VERDICT_INCORRECT, VERDICT_INCORRECT]
        assert all(c.actual_shown is None for c in report.per_case)
        assert not report.all_correct

    def test_off_by_one_boundary_mix(self, voting_age_question):
        # strict > 18 prints 0 for the first case and 6 for the second
        submission = Submission(source=STRICT_AGE_SOLUTION, outputs=[["0"], ["6"]])
        report = grade(submission, voting_age_question)
        assert report.per_case[0].verdict == VERDICT_INCORRECT
        assert report.per_case[0].expected_shown == ("True",)
        assert report.per_case[0].actual_shown == ("0",)
        assert report.per_case[1].verdict == VERDICT_CORRECT

    def test_deterministic(self, range_check_question):
        submission = Submission(source=FLOAT_SOLUTION, outputs=[["False"], ["True"]])
        assert grade(submission, range_check_question) == grade(submission, range_check_question)

    def test_missing_transcripts(self, range_check_question):
        with pytest.raises(MissingTranscript):
            grade(Submission(source="x"), range_check_question)
        with pytest.raises(MissingTranscript):
            grade(Submission(source="x", outputs=[["False"]]), range_check_question)


class TestNormalization:
    def test_trailing_whitespace_and_final_newline_ignored(self):
        assert normalize_output("True  \n") == ("True",)
        assert normalize_output("True\n\n") == ("True",)
        assert normalize_output(["True  ", ""]) == ("True",)

    def test_everything_else_sensitive(self):
        assert normalize_output("  True") != ("True",)
        assert normalize_output("true") != ("True",)
        assert normalize_output("Tru e") != ("True",)
        assert normalize_output(["a", "", "b"]) == ("a", "", "b")

    @given(
        expected=st.lists(
            st.text(
                alphabet=st.characters(whitelist_categories=["Ll", "Lu", "Nd"]),
                min_size=1,
                max_size=8,
            ),
            min_size=1,
            max_size=4,
        ),
        trailing=st.sampled_from(["", " ", "\t", "  "]),
        extra_final_newlines=st.integers(min_value=0, max_value=3),
    )
    @settings(max_examples=100)
    def test_normalized_forms_grade_correct(self, expected, trailing, extra_final_newlines):
        q = make_bank([make_question(1, ["variables"], cases=[([], expected)])])[1]
        transcript = "\n".join(line + trailing for line in expected)
        transcript += "\n" * extra_final_newlines
        report = grade(Submission(source="", outputs=[transcript]), q)
        assert report.all_correct

    @given(
        expected=st.lists(st.sampled_from(["alpha", "Beta", "42"]), min_size=1, max_size=3),
        mutation=st.sampled_from(["case", "prefix", "drop", "extra"]),
    )
    @settings(max_examples=100)
    def test_mutated_transcripts_grade_incorrect(self, expected, mutation):
        q = make_bank([make_question(1, ["variables"], cases=[([], expected)])])[1]
        lines = list(expected)
        if mutation == "case":
            lines[0] = lines[0].swapcase()
        elif mutation == "prefix":
            lines[0] = " " + lines[0]
        elif mutation == "drop":
            lines = lines[:-1]
        else:
            lines.append("extra")
        if lines == expected or (mutation == "drop" and not lines and not expected):
            return  # mutation was a no-op (e.g. swapcase of digits)
        report = grade(Submission(source="", outputs=[lines]), q)
        assert not report.all_correct

    def test_flexibility_knobs_default_off(self):
        q = make_bank([make_question(1, ["variables"], cases=[([], ["True"])])])[1]
        assert not grade(Submission(source="", outputs=[["true"]]), q).all_correct
        relaxed = grade(
            Submission(source="", outputs=[["true"]]), q, options=GradeOptions(case_insensitive=True)
        )
        assert relaxed.all_correct

    def test_numeric_tolerance_knob(self):
        q = make_bank([make_question(1, ["variables"], cases=[([], ["1.00"])])])[1]
        assert not grade(Submission(source="", outputs=[["1.001"]]), q).all_correct
        relaxed = grade(
            Submission(source="", outputs=[["1.001"]]),
            q,
            options=GradeOptions(numeric_tolerance=0.01),
        )
        assert relaxed.all_correct


@pytest.mark.skipif(shutil.which("python3") is None, reason="needs a python3 runner")
class TestExecutorAdapter:
    EXECUTOR = CommandExecutor(["python3", "{source}"], timeout=10.0)

    def test_executes_correct_solution(self, range_check_question):
        report = grade(Submission(source=FLOAT_SOLUTION), range_check_question, self.EXECUTOR)
        assert report.all_correct

    def test_crash_becomes_null_incorrect(self, range_check_question):
        report = grade(Submission(source=INT_SOLUTION), range_check_question, self.EXECUTOR)
        assert [c.verdict for c in report.per_case] == [VERDICT_INCORRECT, VERDICT_INCORRECT]
        assert report.per_case[0].actual_shown is None
        assert report.executor_failures == 2

    def test_boundary_bug_reproduced_live(self, voting_age_question):
        report = grade(Submission(source=STRICT_AGE_SOLUTION), voting_age_question, self.EXECUTOR)
        assert [c.verdict for c in report.per_case] == [VERDICT_INCORRECT, VERDICT_CORRECT]
        assert report.per_case[0].actual_shown == ("0",)


class TestMissingLogic:
    def failing(self):
        return False  # grade outcome shorthand

    def test_absent_marker_on_failure(self, graph):
        q = make_bank([make_question(1, ["conditionals"])])[1]
        assert detect_missing_logic("x = 1\nprint(x)", q, graph, all_correct=False)

    def test_marker_present(self, graph):
        q = make_bank([make_question(1, ["conditionals"])])[1]
        assert not detect_missing_logic("if x:\n    pass", q, graph, all_correct=False)

    def test_correct_submission_never_flagged(self, graph):
        q = make_bank([make_question(1, ["conditionals"])])[1]
        assert not detect_missing_logic("x = 1", q, graph, all_correct=True)

    def test_abstains_without_markers(self, graph):
        q = make_bank([make_question(1, ["variables", "array"])])[1]
        assert not detect_missing_logic("anything at all", q, graph, all_correct=False)

    def test_marker_inside_comment_does_not_count(self, graph):
        q = make_bank([make_question(1, ["conditionals"])])[1]
        source = "# if only this were code\nx = 1\n"
        assert detect_missing_logic(source, q, graph, all_correct=False)

    def test_marker_inside_identifier_does_not_count(self, graph):
        q = make_bank([make_question(1, ["conditionals"])])[1]
        assert detect_missing_logic("gift = 1\nshift = 2\n", q, graph, all_correct=False)

    def test_any_tagged_concept_marker_suffices(self, graph):
        q = make_bank([make_question(1, ["conditionals", "repetition"])])[1]
        assert not detect_missing_logic("for i in range(3):\n    x = i\n", q, graph, all_correct=False)

    def test_strip_comments_block_and_line(self, graph):
        source = '"""if for while"""\nx = 1  # if\n'
        stripped = strip_comments(source, graph, "python")
        assert "if" not in stripped


class TestRenderFeedback:
    def test_all_correct_blocks_are_verdict_only(self, range_check_question):
        report = grade(
            Submission(source="", outputs=[["False"], ["True"]]), range_check_question
        )
        doc = render_feedback(report)
        assert doc["all_correct"] is True
        assert doc["cases"] == [{"verdict": "Correct"}, {"verdict": "Correct"}]

    def test_incorrect_block_carries_three_sections(self, voting_age_question):
        report = grade(Submission(source="", outputs=[["0"], ["6"]]), voting_age_question)
        doc = render_feedback(report)
        first = doc["cases"][0]
        assert first["verdict"] == "Incorrect"
        assert first["input"] == ["18"]
        assert first["expected"] == ["True"]
        assert first["actual"] == ["0"]
        assert doc["cases"][1] == {"verdict": "Correct"}

    def test_null_actual_serializes_as_none(self, range_check_question):
        report = grade(Submission(source="", outputs=[None, None]), range_check_question)
        doc = render_feedback(report)
        assert doc["cases"][0]["actual"] is None

    @given(verdicts=st.lists(st.booleans(), min_size=1, max_size=6))
    def test_all_correct_is_conjunction(self, verdicts):
        cases = [([], ["ok"]) for _ in verdicts]
        q = make_bank([make_question(1, ["variables"], cases=cases)])[1]
        outputs = [["ok"] if v else ["no"] for v in verdicts]
        report = grade(Submission(source="", outputs=outputs), q)
        assert report.all_correct == all(verdicts)
        assert len(report.per_case) == len(verdicts)
