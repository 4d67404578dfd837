import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codedrill.errors import CycleError, DanglingParent, ParseError, UnknownConcept
from codedrill.ontology import (
    ConceptStatus,
    cooccurrence_table,
    hint_list,
    load_ontology,
    one_to_one_partners,
    suggest_next,
    validate_bank,
)

from conftest import make_bank, make_question

# Reference co-occurrence frequencies for the "conditionals" anchor
CONDITIONALS_FREQS = {
    "arithmetic_operators": 5,
    "array": 3,
    "array_methods": 4,
    "assignment_with_operators": 3,
    "definite_loop": 8,
    "dictionary": 4,
    "dictionary_methods": 1,
    "exception": 3,
    "functions": 11,
    "indefinite_loop": 2,
    "jump_statement": 1,
    "jump_statements": 5,
    "list": 3,
    "list_method": 1,
    "list_methods": 3,
    "map": 2,
    "nested_control": 14,
    "repetition": 13,
    "standard_input": 6,
    "standard_output": 2,
}


class TestLoadOntology:
    def test_sample_parent_link(self, graph):
        assert graph.parent("standard_input") == "built-in_function"

    def test_empty_document(self):
        g = load_ontology({"concepts": []})
        assert g.concepts == {}
        assert g.roots == ()

    def test_two_cycle_rejected(self):
        doc = {
            "concepts": [
                {"id": "a", "parent": "b", "languages": ["python"]},
                {"id": "b", "parent": "a", "languages": ["python"]},
            ]
        }
        with pytest.raises(CycleError):
            load_ontology(doc)

    def test_dangling_parent_rejected(self):
        doc = {"concepts": [{"id": "a", "parent": "ghost", "languages": ["python"]}]}
        with pytest.raises(DanglingParent):
            load_ontology(doc)

    def test_bad_id_rejected(self):
        with pytest.raises(ParseError):
            load_ontology({"concepts": [{"id": "Bad Id!", "languages": []}]})

    def test_duplicate_id_rejected(self):
        doc = {"concepts": [{"id": "a", "languages": []}, {"id": "a", "languages": []}]}
        with pytest.raises(ParseError):
            load_ontology(doc)

    def test_malformed_json_text(self):
        with pytest.raises(ParseError):
            load_ontology("{not json")

    def test_roots_have_no_parent(self, graph):
        for root in graph.roots:
            assert graph.parent(root) is None

    def test_language_specs_loaded(self, graph):
        assert graph.language_spec("python").line_comment == "#"
        assert graph.language_spec("java").line_comment == "//"


class TestHintList:
    def test_selected_tag_with_parent(self, graph):
        bank = make_bank([make_question(1, ["standard_input"])])
        hints = hint_list(bank[1], graph, "standard_input")
        assert len(hints) == 1
        assert hints[0].concept_id == "standard_input"
        assert hints[0].parent_id == "built-in_function"
        assert hints[0].emphasized

    def test_root_tag_has_no_parent(self, graph):
        bank = make_bank([make_question(1, ["conditionals"])])
        (hint,) = hint_list(bank[1], graph, "conditionals")
        assert hint.parent_id is None
        assert hint.emphasized

    def test_emphasis_only_on_selected(self, graph):
        bank = make_bank([make_question(1, ["functions", "conditionals"])])
        hints = hint_list(bank[1], graph, "conditionals")
        assert [h.concept_id for h in hints] == ["functions", "conditionals"]
        assert [h.emphasized for h in hints] == [False, True]

    def test_unknown_tag(self, graph):
        bank = make_bank([make_question(1, ["functions"])])
        bank[1].concept_tags.append("no_such_concept")
        with pytest.raises(UnknownConcept):
            hint_list(bank[1], graph, "functions")

    def test_length_and_emphasis_counts(self, graph, bank):
        for q in bank:
            for selected in (q.concept_tags[0], "variables"):
                hints = hint_list(q, graph, selected)
                assert len(hints) == len(q.concept_tags)
                emphasized = sum(h.emphasized for h in hints)
                assert emphasized == (1 if selected in q.concept_tags else 0)


class TestCooccurrence:
    def test_reference_rows(self, bank):
        table = cooccurrence_table(list(bank), "conditionals").as_dict()
        assert table["functions"] == 11
        assert table["arithmetic_operators"] == 5
        assert table["nested_control"] == 14
        assert table == CONDITIONALS_FREQS

    def test_absent_anchor_is_empty(self, bank):
        assert cooccurrence_table(list(bank), "variables").rows == ()

    def test_single_pair_bank(self):
        bank = make_bank([make_question(1, ["variables", "functions"])])
        table = cooccurrence_table(list(bank), "variables")
        assert table.rows == (("functions", 1),)

    def test_frequencies_never_below_one(self, bank):
        for anchor in CONDITIONALS_FREQS:
            for _, freq in cooccurrence_table(list(bank), anchor).rows:
                assert freq >= 1

    def test_anchor_never_its_own_row(self, bank):
        table = cooccurrence_table(list(bank), "conditionals").as_dict()
        assert "conditionals" not in table


TAG_POOL = ["variables", "functions", "conditionals", "repetition", "list", "exception"]


@st.composite
def small_banks(draw):
    n = draw(st.integers(min_value=1, max_value=50))
    questions = []
    for i in range(n):
        tags = draw(
            st.lists(st.sampled_from(TAG_POOL), min_size=1, max_size=4, unique=True)
        )
        questions.append(make_question(i + 1, tags))
    return make_bank(questions)


class TestCooccurrenceProperties:
    @given(bank=small_banks(), anchor=st.sampled_from(TAG_POOL))
    @settings(max_examples=150)
    def test_matches_brute_force(self, bank, anchor):
        table = cooccurrence_table(list(bank), anchor).as_dict()
        brute: dict = {}
        for q in bank:
            if anchor in q.concept_tags:
                for other in q.concept_tags:
                    if other != anchor:
                        brute[other] = brute.get(other, 0) + 1
        assert table == brute

    @given(bank=small_banks(), anchor=st.sampled_from(TAG_POOL))
    @settings(max_examples=150)
    def test_suggestions_subset_chain(self, bank, anchor):
        rows = set(cooccurrence_table(list(bank), anchor).as_dict())
        partners = one_to_one_partners(list(bank), anchor)
        suggested = set(suggest_next(list(bank), anchor, {}))
        assert suggested <= partners <= rows

    @given(
        bank=small_banks(),
        anchor=st.sampled_from(TAG_POOL),
        done=st.lists(st.sampled_from(TAG_POOL), unique=True),
    )
    @settings(max_examples=150)
    def test_never_suggests_complete_or_anchor(self, bank, anchor, done):
        progress = {c: ConceptStatus.COMPLETE for c in done}
        result = suggest_next(list(bank), anchor, progress)
        assert anchor not in result
        assert not (set(result) & set(done))


class TestSuggestNext:
    def test_reference_suggestions(self, bank):
        assert suggest_next(list(bank), "conditionals", {}) == [
            "functions",
            "arithmetic_operators",
            "exception",
        ]

    def test_completed_partner_filtered(self, bank):
        progress = {"functions": ConceptStatus.COMPLETE}
        assert suggest_next(list(bank), "conditionals", progress) == [
            "arithmetic_operators",
            "exception",
        ]

    def test_in_progress_partner_kept(self, bank):
        progress = {"functions": ConceptStatus.IN_PROGRESS}
        assert "functions" in suggest_next(list(bank), "conditionals", progress)

    def test_no_one_to_one_partners(self):
        bank = make_bank([make_question(1, ["variables", "functions", "list"])])
        assert suggest_next(list(bank), "variables", {}) == []

    def test_single_occurrence_partner_excluded(self):
        # one-to-one partner seen only once overall is not suggested
        bank = make_bank(
            [
                make_question(1, ["conditionals", "exception"]),
                make_question(2, ["conditionals", "functions"]),
                make_question(3, ["conditionals", "functions", "list"]),
            ]
        )
        assert suggest_next(list(bank), "conditionals", {}) == ["functions"]

    def test_unknown_anchor_with_graph(self, graph, bank):
        with pytest.raises(UnknownConcept):
            suggest_next(list(bank), "no_such_concept", {}, graph)


class TestValidateBank:
    def test_sample_bank_has_near_duplicate_warnings(self, graph, bank):
        report = validate_bank(graph, bank)
        assert report.ok
        text = " ".join(report.warnings)
        assert "jump_statement" in text and "jump_statements" in text
        assert "list_method" in text and "list_methods" in text

    def test_clean_bank(self, graph):
        questions = [make_question(i, ["variables"], "easy") for i in range(1, 6)]
        report = validate_bank(graph, make_bank(questions))
        assert report.clean

    def test_under_minimum_level_warning(self, graph):
        questions = [make_question(i, ["variables"], "easy") for i in range(1, 4)]
        report = validate_bank(graph, make_bank(questions))
        assert report.ok
        assert any("minimum of 4" in w for w in report.warnings)

    def test_unknown_tag_is_error(self, graph):
        bank = make_bank([make_question(1, ["functions"])])
        bank[1].concept_tags.append("made_up")
        report = validate_bank(graph, bank)
        assert not report.ok
        assert any("made_up" in e for e in report.errors)
