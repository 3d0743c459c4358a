"""Acceptance suite.

One test per acceptance criterion, each printing a PASS/FAIL line (run
with ``pytest tests/test_acceptance.py -v -s`` to see them). Tolerances
are pinned in the assertions; nothing is deferred to calibration.
"""

from __future__ import annotations

import itertools
import json
import os
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

import test_cli as cli_helpers
from conftest import run_trace
from policygen import data as _data
from policygen.completeness import (
    PRECONDITION_NOT_SATISFIED,
    SATISFIED,
    UNSATISFIED,
    evaluate_completeness,
    evaluate_criterion,
)
from policygen.engine import amend_answer, start_session, submit_answer
from policygen.errors import SlotError
from policygen.generator import generate, render
from policygen.placeholders import TOKEN_RE, substitute
from policygen.presence import MetadataPresence, build_presence
from policygen.readability import fre_from_counts, fre_score
from policygen.slots import normalize_slot, parse_slot, serialize_slot

FIXTURE_DIR = Path(__file__).parent / "fixtures"


class _Criterion:
    """Context manager printing one PASS/FAIL line per criterion."""

    def __init__(self, name: str):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "PASS" if exc_type is None else "FAIL"
        print(f"\nACCEPTANCE [{self.name}]: {status}")
        return False


# 1. ---------------------------------------------------------------------------

def test_flow_trace_reproduction(sample_bank):
    with _Criterion("flow-trace reproduction"):
        started = time.perf_counter()

        def next_after(prefix, value):
            session = run_trace(sample_bank, prefix)
            result = submit_answer(sample_bank, session, value)
            return result if isinstance(result, str) else result.qnum

        q1 = [("Q1", "Acme Learning Ltd")]
        assert next_after(q1, "YES") == "Q166"
        assert next_after(q1, "NO") == "Q3"

        to_q88 = q1 + [("Q2", "NO"), ("Q3", "addr"), ("Q4", "a@b.example"),
                       ("Q5", "YES"), ("Q6", "NO")]
        assert next_after(to_q88, "YES") == "Q89"
        assert next_after(to_q88, "NO") == "Q93"

        to_q90 = to_q88 + [("Q88", "YES"), ("Q89", ["To resolve disputes"])]
        assert next_after(to_q90, "YES") == "Q91"
        assert next_after(to_q90, "NO") == "Q92"

        elapsed = time.perf_counter() - started
        assert elapsed < 1.0, f"flow traces took {elapsed:.3f}s, budget 1s"


# 2. ---------------------------------------------------------------------------

def test_clause_binding_reproduction(sample_bank):
    with _Criterion("clause binding reproduction"):
        session = start_session(sample_bank)
        submit_answer(sample_bank, session, "Acme Learning Ltd")  # Q1
        assert session.selected_clauses == ["C2", "C3"]

        submit_answer(sample_bank, session, "YES")  # Q2
        submit_answer(sample_bank, session, "8324083")  # Q166
        assert session.selected_clauses == ["C2", "C3", "C4"]
        assert session.selected_clauses[2:] == ["C4"]

        submit_answer(sample_bank, session, "1 Main Street")  # Q3
        submit_answer(sample_bank, session, "a@b.example")  # Q4
        submit_answer(sample_bank, session, "YES")  # Q5
        assert session.selected_clauses == ["C2", "C3", "C4", "C5", "C6"]
        assert session.selected_clauses[3:] == ["C5", "C6"]


# 3. ---------------------------------------------------------------------------

CANONICAL_NOTATIONS = [
    "[Q3-INFO→[CONTROLLER'S LEGAL ADDRESS]→Q4]",
    "[Q88-BOOL.YES→Q89]",
    "[Q88-BOOL.NO→Q93]",
    "[Q166-INFO→[CONTROLLER'S REGISTER NUMBER]→C4→Q3]",
]


def test_slot_notation_round_trip():
    with _Criterion("slot-notation round-trip"):
        for notation in CANONICAL_NOTATIONS:
            slot = parse_slot(notation)
            assert serialize_slot(slot) == notation
            assert normalize_slot(notation) == notation

        rng = random.Random(7)
        alphabet = "[]→->QBOLINFMTPC0123456789.,' ABCxyz \t"
        for _ in range(2000):
            text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 40)))
            try:
                slot = parse_slot(text)
            except SlotError:
                continue
            except Exception as exc:  # anything else is a defect
                raise AssertionError(f"non-SlotError escape on {text!r}: {exc!r}")
            assert parse_slot(serialize_slot(slot)) == slot


# 4. ---------------------------------------------------------------------------

def test_placeholder_substitution(clean_seed_session, seed_template, library):
    with _Criterion("placeholder substitution"):
        sentence = "Our registration number is [CONTROLLER'S REGISTER NUMBER]."
        out = substitute(sentence, {"CONTROLLER'S REGISTER NUMBER": "8324083"}, strict=True)
        assert out == "Our registration number is 8324083."

        doc = generate(seed_template, clean_seed_session, library, strict=True)
        for item in doc.items():
            assert not TOKEN_RE.search(item.text)
        rendered = render(doc, "plain").decode("utf-8")
        assert not TOKEN_RE.search(rendered)
        assert "Our registration number is 8324083." in rendered


# 5. ---------------------------------------------------------------------------

MOODLE_PRESENCE = {
    "present": [
        "CONTROLLER.IDENTITY.LEGAL NAME",
        "CONTROLLER.CONTACT.E-MAIL",
        "CONTROLLER.CONTACT.LEGAL ADDRESS",
        "DATA SUBJECT RIGHT.COMPLAINT",
        "DATA SUBJECT RIGHT.COMPLAINT.SA",
        "PD ORIGIN.DIRECT",
    ],
    "conditions": {
        "controller located outside Europe": True,
        "personal data is collected indirectly": False,
    },
}


def test_completeness_table_reproduction(criteria, library, fact_registry):
    with _Criterion("completeness table reproduction"):
        presence = build_presence(
            MOODLE_PRESENCE["present"], MOODLE_PRESENCE["conditions"],
            library.taxonomy, fact_registry,
        )
        report = evaluate_completeness(criteria, presence)
        assert report.ratings == {
            "C2": SATISFIED,
            "C3": UNSATISFIED,
            "C6": SATISFIED,
            "C15": PRECONDITION_NOT_SATISFIED,
            "C16": PRECONDITION_NOT_SATISFIED,
        }
        assert report.complete is False


# 6. ---------------------------------------------------------------------------

def test_completeness_oracle_equivalence(criteria):
    with _Criterion("completeness oracle equivalence"):
        from test_completeness import FACT_ATOMS, PATH_ATOMS, _oracle

        started = time.perf_counter()
        combos = 0
        for bits in itertools.product([False, True], repeat=len(PATH_ATOMS)):
            present = frozenset(p for p, bit in zip(PATH_ATOMS, bits) if bit)
            for f1 in (False, True):
                for f2 in (False, True):
                    facts = {FACT_ATOMS[0]: f1, FACT_ATOMS[1]: f2}
                    presence = MetadataPresence(present=present, conditions=facts)
                    for criterion in criteria:
                        assert evaluate_criterion(criterion, presence) == _oracle(
                            criterion.id, present, facts
                        )
                    combos += 1
        elapsed = time.perf_counter() - started
        assert combos == 2 ** 12
        assert elapsed < 5.0, f"truth table took {elapsed:.3f}s, budget 5s"


# 7. ---------------------------------------------------------------------------

def test_fre_formula_and_monotonicity():
    with _Criterion("reading-ease formula"):
        report = fre_score("The cat sat.")
        assert (report.words, report.sentences, report.syllables) == (3, 1, 3)
        assert abs(report.fre - 119.19) <= 1e-6

        rng = random.Random(2024)
        for _ in range(1000):
            words = rng.randint(5, 5000)
            sentences = rng.randint(1, max(1, words // 4))
            syllables = rng.randint(words, words * 4)
            bump = rng.randint(1, 100)
            assert fre_from_counts(words, sentences, syllables + bump) < fre_from_counts(
                words, sentences, syllables
            )


# 8. ---------------------------------------------------------------------------

def test_fre_fixture_check():
    """Reference-policy fixtures: FRE within 3.0, words within 5 percent.

    The reference policy texts (the original Moodle policy and a
    generated counterpart) are distributed separately. When the fixture
    files are absent this criterion downgrades to the formula and
    monotonicity checks above (see test_fre_formula_and_monotonicity).
    """
    original = FIXTURE_DIR / "moodle_original.txt"
    generated = FIXTURE_DIR / "moodle_generated.txt"
    if not (original.exists() and generated.exists()):
        print("\nACCEPTANCE [reading-ease fixtures]: DOWNGRADED "
              "(reference policy texts not available; "
              "formula and monotonicity checks cover this criterion)")
        pytest.skip("reference policy text fixtures not available")
    with _Criterion("reading-ease fixtures"):
        original_report = fre_score(original.read_text(encoding="utf-8"))
        generated_report = fre_score(generated.read_text(encoding="utf-8"))
        assert abs(original_report.fre - 45.5) <= 3.0
        assert abs(generated_report.fre - 37.4) <= 3.0
        assert abs(original_report.words - 2475) <= 2475 * 0.05
        assert abs(generated_report.words - 2578) <= 2578 * 0.05


# 9. ---------------------------------------------------------------------------

def test_non_compliance_injection(tmp_path, non_compliant_seed_session, seed_template, library):
    with _Criterion("non-compliance injection"):
        doc = generate(seed_template, non_compliant_seed_session, library, strict=True)
        rendered = render(doc, "plain").decode("utf-8")
        first = "NON-COMPLIANT: Your system does not comply with the GDPR - notification of a personal data breach."
        second = ("NON-COMPLIANT: Your system does not comply with the GDPR - "
                  "not notifying a security breach to affected users within 72 hours.")
        assert first in rendered
        assert second in rendered

        answers = tmp_path / "answers.json"
        answers.write_text(json.dumps({"answers": cli_helpers.BREACH_ANSWERS}), encoding="utf-8")
        out = tmp_path / "policy.txt"
        result = subprocess.run(
            [sys.executable, "-m", "policygen", "batch",
             "--answers", str(answers), "--out", str(out), "--no-timestamp"],
            capture_output=True, text=True, cwd=cli_helpers.PKG_ROOT,
        )
        assert result.returncode == 2, result.stderr
        assert first in out.read_text(encoding="utf-8")


# 10. --------------------------------------------------------------------------

def test_end_to_end_determinism(tmp_path):
    with _Criterion("end-to-end determinism"):
        answers = tmp_path / "answers.json"
        answers.write_text(
            json.dumps({"answers": cli_helpers.SAMPLE_ANSWERS}), encoding="utf-8"
        )
        payloads = []
        for name in ("one.txt", "two.txt"):
            out = tmp_path / name
            result = subprocess.run(
                [sys.executable, "-m", "policygen", "batch",
                 "--bank", str(_data.sample_bank_path()),
                 "--template", str(_data.sample_template_path()),
                 "--answers", str(answers), "--out", str(out), "--no-timestamp"],
                capture_output=True, text=True, cwd=cli_helpers.PKG_ROOT,
            )
            assert result.returncode == 0, result.stderr
            payloads.append(out.read_bytes())
        assert payloads[0] == payloads[1]

        returncode, output, stderr, wizard_out, transcript = cli_helpers._run_wizard(
            tmp_path, cli_helpers.WIZARD_INPUT
        )
        assert returncode == 0, (output[-2000:], stderr)
        batch_out = tmp_path / "wizard_replay.txt"
        result = subprocess.run(
            [sys.executable, "-m", "policygen", "batch",
             "--answers", str(transcript), "--out", str(batch_out), "--no-timestamp"],
            capture_output=True, text=True, cwd=cli_helpers.PKG_ROOT,
        )
        assert result.returncode == 0, result.stderr
        assert batch_out.read_bytes() == wizard_out.read_bytes()


# 11. --------------------------------------------------------------------------

def test_bank_lint_mutations(sample_bank_dict):
    with _Criterion("bank lint"):
        import copy

        from policygen.bank import lint_bank
        from policygen.issues import errors_only

        doc = copy.deepcopy(sample_bank_dict)
        by_qnum = {q["qnum"]: q for q in doc["questions"]}
        by_qnum["Q2"]["flow"]["YES"] = "Q999"  # dangling edge
        by_qnum["Q3"]["flow"]["ANY"] = "Q1"  # cycle Q1 -> Q2 -> Q3 -> Q1
        del by_qnum["Q90"]["flow"]["NO"]  # BOOL missing its NO edge

        issues = errors_only(lint_bank(doc))
        assert len(issues) == 3
        assert {i.code for i in issues} == {"dangling-flow", "flow-cycle", "bad-flow"}
        dangling = next(i for i in issues if i.code == "dangling-flow")
        assert "Q2" in dangling.message and "Q999" in dangling.message
        cycle = next(i for i in issues if i.code == "flow-cycle")
        assert "Q1" in cycle.message and "Q2" in cycle.message and "Q3" in cycle.message
        arity = next(i for i in issues if i.code == "bad-flow")
        assert arity.subject == "Q90"
