"""Record real API payloads from the engine for the frontend snapshot tests.

Writes JSON fixtures: concept graph with statuses, adaptive and random
exercise assignments, success and mixed feedback documents, and a completion
page whose lists exercise the hover-detail rendering.
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

import codedrill
from codedrill.bank import load_bank, parse_bank
from codedrill.ontology import ConceptStatus, load_ontology
from codedrill.scheduler import AssignmentMode
from codedrill.service import ServiceConfig, create_app
from codedrill.session import SessionEngine

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"


def ace_pretest_payload(bank, concept, n_correct):
    answers = []
    for i, q in enumerate(bank.pretests[concept]):
        if i < n_correct:
            answers.append([list(c.expected_stdout_lines) for c in q.test_cases])
        else:
            answers.append([["__nope__"] for _ in q.test_cases])
    return {"answers": answers}


def record_service_payloads(tmp_dir: Path) -> dict:
    bank = load_bank(codedrill.sample_bank_path())
    payloads = {}

    adaptive_dir = tmp_dir / "adaptive"
    adaptive_dir.mkdir(parents=True)
    config = ServiceConfig(
        ontology_path=str(codedrill.sample_ontology_path()),
        bank_path=str(codedrill.sample_bank_path()),
        data_dir=str(adaptive_dir),
    )
    headers = {"X-Learner-Id": "demo"}
    with TestClient(create_app(config)) as client:
        client.post("/session", json={"learner_id": "demo", "has_programming_experience": False})
        client.post("/concepts/conditionals/select", headers=headers)
        client.post(
            "/concepts/conditionals/pretest",
            headers=headers,
            json=ace_pretest_payload(bank, "conditionals", 0),
        )
        view = client.get(
            "/exercise/next", params={"concept": "conditionals"}, headers=headers
        ).json()
        payloads["exercise_adaptive"] = view
        qid = view["question"]["id"]
        question = bank[qid]

        good = [list(c.expected_stdout_lines) for c in question.test_cases]
        payloads["feedback_success"] = client.post(
            "/submission",
            headers=headers,
            json={"question_id": qid, "source": "if x:\n    pass\n", "outputs": good},
        ).json()

        view = client.get(
            "/exercise/next", params={"concept": "conditionals"}, headers=headers
        ).json()
        qid = view["question"]["id"]
        question = bank[qid]
        mixed = [["0"]] + [list(c.expected_stdout_lines) for c in question.test_cases[1:]]
        payloads["feedback_mixed"] = client.post(
            "/submission",
            headers=headers,
            json={"question_id": qid, "source": "x = 1\n", "outputs": mixed},
        ).json()

        # finish the concept and open another so the graph fixture carries
        # complete, in-progress, and untouched statuses
        completed = False
        while not completed:
            view = client.get(
                "/exercise/next", params={"concept": "conditionals"}, headers=headers
            ).json()
            qid = view["question"]["id"]
            good = [list(c.expected_stdout_lines) for c in bank[qid].test_cases]
            body = client.post(
                "/submission",
                headers=headers,
                json={"question_id": qid, "source": "if x:\n    pass\n", "outputs": good},
            ).json()
            completed = body["concept_completed"]
        client.post("/concepts/variables/select", headers=headers)
        payloads["concepts"] = client.get("/concepts", params={"learner": "demo"}).json()

    random_dir = tmp_dir / "random"
    random_dir.mkdir(parents=True)
    config = ServiceConfig(
        ontology_path=str(codedrill.sample_ontology_path()),
        bank_path=str(codedrill.sample_bank_path()),
        mode="random",
        seed=23,
        data_dir=str(random_dir),
    )
    headers = {"X-Learner-Id": "ray"}
    with TestClient(create_app(config)) as client:
        client.post("/session", json={"learner_id": "ray", "has_programming_experience": False})
        client.post("/concepts/conditionals/select", headers=headers)
        client.post(
            "/concepts/conditionals/pretest",
            headers=headers,
            json=ace_pretest_payload(bank, "conditionals", 0),
        )
        payloads["exercise_random"] = client.get(
            "/exercise/next", params={"concept": "conditionals"}, headers=headers
        ).json()

    return payloads


def record_completion_payload() -> dict:
    """Completion page whose id lists span untouched and unfinished questions."""
    graph = load_ontology(codedrill.sample_ontology_path())
    doc = json.loads(codedrill.sample_bank_path().read_text())
    next_cases = [{"stdin": ["1"], "expected_stdout": ["1"]}]
    for qid in (61, 64, 65, 66, 67):
        doc["questions"].append(
            {
                "id": qid,
                "language": "python",
                "level": "difficult",
                "concept_tags": ["conditionals"],
                "prompt_en": f"Practice exercise {qid}: combine conditionals with earlier topics.",
                "test_cases": next_cases,
            }
        )
    bank = parse_bank(doc)
    engine = SessionEngine(graph, bank, AssignmentMode.adaptive(), initial_concept="conditionals")
    engine.start_session("demo", False)
    engine.select_concept("demo", "conditionals")
    state = engine.states[("demo", "conditionals")]
    state.pretest_done = True
    pool = set(bank.concept_pool("conditionals"))
    state.correct_qs = pool - {48, 64, 65, 66, 67, 58, 61}
    state.incorrect_qs = {58}
    state.skipped_qs = {61}
    engine.statuses[("demo", "conditionals")] = ConceptStatus.COMPLETE
    return engine.completion_page("demo", "conditionals")


def main() -> None:
    import tempfile

    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        payloads = record_service_payloads(Path(tmp))
    payloads["completion"] = record_completion_payload()
    for name, payload in payloads.items():
        path = FIXTURE_DIR / f"{name}.json"
        path.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
        print("wrote", path)


if __name__ == "__main__":
    main()
