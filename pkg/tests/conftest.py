from __future__ import annotations

import json

import pytest

from policygen import data as _data
from policygen.bank import load_bank
from policygen.completeness import load_criteria
from policygen.coverage import load_checklist
from policygen.generator import load_template
from policygen.library import load_library
from policygen.presence import load_fact_rules


def _read(path) -> bytes:
    return path.read_bytes()


@pytest.fixture(scope="session")
def library():
    return load_library(_read(_data.default_library_path()))


@pytest.fixture(scope="session")
def seed_bank():
    return load_bank(_read(_data.default_bank_path()))


@pytest.fixture(scope="session")
def sample_bank():
    return load_bank(_read(_data.sample_bank_path()))


@pytest.fixture(scope="session")
def seed_template(seed_bank):
    return load_template(_read(_data.default_template_path()), seed_bank)


@pytest.fixture(scope="session")
def sample_template(sample_bank):
    return load_template(_read(_data.sample_template_path()), sample_bank)


@pytest.fixture(scope="session")
def criteria_and_facts(library):
    return load_criteria(_read(_data.default_criteria_path()), library.taxonomy)


@pytest.fixture(scope="session")
def criteria(criteria_and_facts):
    return criteria_and_facts[0]


@pytest.fixture(scope="session")
def fact_registry(criteria_and_facts):
    return criteria_and_facts[1]


@pytest.fixture(scope="session")
def checklist(library, fact_registry):
    return load_checklist(_read(_data.default_checklist_path()), library.taxonomy, fact_registry)


@pytest.fixture(scope="session")
def fact_rules():
    return load_fact_rules(_read(_data.default_fact_rules_path()))


@pytest.fixture(scope="session")
def sample_bank_dict():
    return json.loads(_read(_data.sample_bank_path()))


# Answer trace for the seed bank that completes the interview without any
# non-compliant or warning clause (used wherever a clean policy is needed).
CLEAN_SEED_TRACE = [
    ("Q104", "YES"),
    ("Q1", "Acme Learning Ltd"),
    ("Q2", "YES"),
    ("Q166", "8324083"),
    ("Q3", "1 Main Street, Dublin 8, Ireland"),
    ("Q4", "privacy@acme.example"),
    ("Q5", "YES"),
    ("Q6", "NO"),
    ("Q9", "YES"),
    ("Q10", "Bird & Bird DPO Services SRL"),
    ("Q30", "YES"),
    ("Q31", "YES"),
    ("Q32", "YES"),
    ("Q33", "YES"),
    ("Q34", "YES"),
    ("Q88", "YES"),
    ("Q89", ["To resolve disputes", "To comply with legal obligations"]),
    ("Q90", "NO"),
    ("Q92", "YES"),
    ("Q120", "YES"),
    ("Q121", "YES"),
    ("Q130", "YES"),
    ("Q131", "YES"),
    ("Q132", "YES"),
    ("Q135", "YES"),
    ("Q140", ["Create an account", "Contact our support team"]),
    ("Q141", "NO"),
    ("Q150", "NO"),
    ("Q160", "NO"),
    ("Q162", "YES"),
]

# Variant that answers the breach-notification questions negatively and
# leaves the controller representative unidentified while located outside
# Europe (injects N1, N2 and W1).
NON_COMPLIANT_SEED_TRACE = [
    ("Q104", "YES"),
    ("Q1", "Acme Learning Ltd"),
    ("Q2", "YES"),
    ("Q166", "8324083"),
    ("Q3", "1 Main Street, Dublin 8, Ireland"),
    ("Q4", "privacy@acme.example"),
    ("Q5", "YES"),
    ("Q6", "YES"),
    ("Q7", "NO"),
    ("Q9", "NO"),
    ("Q30", "YES"),
    ("Q31", "YES"),
    ("Q32", "YES"),
    ("Q33", "YES"),
    ("Q34", "YES"),
    ("Q88", "YES"),
    ("Q89", ["To resolve disputes"]),
    ("Q90", "NO"),
    ("Q92", "YES"),
    ("Q120", "YES"),
    ("Q121", "YES"),
    ("Q130", "YES"),
    ("Q131", "NO"),
    ("Q132", "NO"),
    ("Q135", "YES"),
    ("Q140", ["Create an account"]),
    ("Q141", "NO"),
    ("Q150", "NO"),
    ("Q160", "NO"),
    ("Q162", "YES"),
]


def run_trace(bank, trace):
    """Submit a (qnum, value) trace, asserting the cursor matches each step."""
    from policygen.engine import start_session, submit_answer

    session = start_session(bank)
    for qnum, value in trace:
        assert session.cursor == qnum, f"expected cursor {qnum}, got {session.cursor}"
        submit_answer(bank, session, value)
    return session


@pytest.fixture
def clean_seed_session(seed_bank):
    return run_trace(seed_bank, CLEAN_SEED_TRACE)


@pytest.fixture
def non_compliant_seed_session(seed_bank):
    return run_trace(seed_bank, NON_COMPLIANT_SEED_TRACE)
