from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from policygen.errors import SlotError
from policygen.slots import TemplateSlot, normalize_slot, parse_slot, serialize_slot

# Canonical notation strings covering every slot shape.
CANONICAL = [
    "[Q3-INFO→[CONTROLLER'S LEGAL ADDRESS]→Q4]",
    "[Q88-BOOL.YES→Q89]",
    "[Q88-BOOL.NO→Q93]",
    "[Q89-MTPC→[PD TIME STORED CRITERIA]→Q90]",
    "[Q166-INFO→[CONTROLLER'S REGISTER NUMBER]→C4→Q3]",
]


def test_parse_info_slot_with_placeholder_only():
    slot = parse_slot(CANONICAL[0])
    assert slot == TemplateSlot(
        qnum="Q3", qtype="INFO", selector="ANY",
        placeholder="CONTROLLER'S LEGAL ADDRESS", clauses=(), target="Q4",
    )


def test_parse_bool_pair():
    yes = parse_slot(CANONICAL[1])
    no = parse_slot(CANONICAL[2])
    assert (yes.qnum, yes.selector, yes.target) == ("Q88", "YES", "Q89")
    assert (no.qnum, no.selector, no.target) == ("Q88", "NO", "Q93")
    assert yes.placeholder is None and yes.clauses == ()


def test_parse_info_slot_with_clause():
    slot = parse_slot(CANONICAL[4])
    assert slot.qnum == "Q166"
    assert slot.placeholder == "CONTROLLER'S REGISTER NUMBER"
    assert slot.clauses == ("C4",)
    assert slot.target == "Q3"


@pytest.mark.parametrize("notation", CANONICAL)
def test_canonical_strings_round_trip_to_themselves(notation):
    assert normalize_slot(notation) == notation


def test_ascii_arrows_normalize_to_canonical():
    assert normalize_slot("[Q88-BOOL.NO->Q93]") == CANONICAL[2]


def test_whitespace_normalizes():
    assert normalize_slot("[ Q3-INFO → [CONTROLLER'S LEGAL ADDRESS] → Q4 ]") == CANONICAL[0]


def test_multi_clause_list():
    slot = parse_slot("[Q5-BOOL.YES→C5, C6→Q6]")
    assert slot.clauses == ("C5", "C6")
    assert serialize_slot(slot) == "[Q5-BOOL.YES→C5,C6→Q6]"


def test_end_target():
    assert parse_slot("[Q162-BOOL.YES→CH3→END]").target == "END"


@pytest.mark.parametrize(
    "notation,fragment",
    [
        ("[Q3-FOO→Q4]", "unknown question type FOO"),
        ("[Q3-INFO]", "missing arrow"),
        ("Q3-INFO→Q4", "bracketed"),
        ("[Q3-INFO→[unclosed→Q4]", "placeholder"),
        ("[Q3-INFO→[bad name]→Q4]", "placeholder"),
        ("[Q88-BOOL→Q89]", "selector"),
        ("[Q88-BOOL.MAYBE→Q89]", "selector"),
        ("[Q3-INFO.YES→Q4]", "selector"),
        ("[Q3-INFO→C1→C2→Q4]", "too many segments"),
        ("[Q3-INFO→[A]→[B]→Q4]", "misplaced"),
        ("[Q3-INFO→q4]", "flow target"),
        ("[Q3-INFO→END→Q4]", "clause id"),
        ("[Q88-BOOL.YES→[PLACEHOLDER]→Q89]", "placeholder"),
        ("", "bracketed"),
        ("[]", "missing arrow"),
    ],
)
def test_malformed_notations_raise_named_errors(notation, fragment):
    with pytest.raises(SlotError, match=fragment):
        parse_slot(notation)


def test_shipped_template_corpus_round_trips(seed_template, sample_template):
    from policygen.generator import template_to_dict

    for template in (seed_template, sample_template):
        for section in template_to_dict(template)["sections"]:
            for notation in section["slots"]:
                assert normalize_slot(notation) == notation
                again = parse_slot(serialize_slot(parse_slot(notation)))
                assert again == parse_slot(notation)


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=60))
def test_fuzzed_strings_never_crash(text):
    try:
        slot = parse_slot(text)
    except SlotError:
        return
    assert serialize_slot(slot)


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="[]→->QBOLINFMTPC0123456789.,' ABC", max_size=50))
def test_fuzzed_slotlike_strings_never_crash(text):
    try:
        slot = parse_slot(text)
    except SlotError:
        return
    assert parse_slot(serialize_slot(slot)) == slot
