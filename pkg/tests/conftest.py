import pytest

import codedrill
from codedrill.bank import QuestionBank, parse_bank
from codedrill.ontology import load_ontology


@pytest.fixture(scope="session")
def graph():
    return load_ontology(codedrill.sample_ontology_path())


@pytest.fixture(scope="session")
def bank():
    return codedrill.load_bank(codedrill.sample_bank_path())


def make_question(
    qid: int,
    tags: list[str],
    level: str = "easy",
    cases: "list[tuple[list[str], list[str]]] | None" = None,
    language: str = "python",
) -> dict:
    if cases is None:
        cases = [(["1"], ["1"])]
    return {
        "id": qid,
        "language": language,
        "level": level,
        "concept_tags": tags,
        "prompt_en": f"exercise {qid}",
        "test_cases": [{"stdin": i, "expected_stdout": o} for i, o in cases],
    }


def make_bank(questions: list[dict], pretests: "dict | None" = None) -> QuestionBank:
    return parse_bank({"questions": questions, "pretests": pretests or {}})


@pytest.fixture()
def ladder_bank():
    """One concept, five questions per level: k = 0.7 everywhere."""
    questions = []
    qid = 1
    for level in ("easy", "standard", "difficult"):
        for _ in range(5):
            questions.append(make_question(qid, ["conditionals"], level))
            qid += 1
    pretests = {
        "conditionals": [
            make_question(901, ["conditionals"], "easy", [(["1"], ["ok1"])]),
            make_question(902, ["conditionals"], "easy", [(["2"], ["ok2"])]),
            make_question(903, ["conditionals"], "easy", [(["3"], ["ok3"])]),
        ]
    }
    return make_bank(questions, pretests)
