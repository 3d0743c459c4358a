"""Interactive GDPR privacy policy generation and evaluation.

The package is organized around the data that drives it: a clause
library (taxonomy plus categorized privacy clauses), a question bank
(the interview flow), a ten-section policy template (slot notation), and
evaluation data (completeness criteria, coverage checklist). Sessions
replay deterministically, so the same answers always produce the same
policy bytes.
"""

from __future__ import annotations

from .bank import QuestionBank, lint_bank, load_bank, load_bank_file
from .completeness import (
    CompletenessCriterion,
    evaluate_completeness,
    evaluate_criterion,
    load_criteria,
    load_criteria_file,
)
from .coverage import CoverageTopic, evaluate_coverage, load_checklist, load_checklist_file
from .engine import (
    COMPLETED,
    Session,
    active_outputs,
    amend_answer,
    serialize_session,
    start_session,
    submit_answer,
)
from .errors import PolicygenError
from .generator import (
    PolicyDocument,
    PolicyTemplate,
    generate,
    load_template,
    load_template_file,
    render,
)
from .library import (
    ClauseLibrary,
    clauses_for_category,
    lint_library,
    load_library,
    load_library_file,
    serialize_library,
)
from .placeholders import extract_placeholders, substitute
from .presence import MetadataPresence, load_fact_rules, load_presence, presence_from_session
from .readability import count_syllables, fre_score, segment
from .slots import TemplateSlot, normalize_slot, parse_slot, serialize_slot
from .store import SessionStore

__version__ = "0.1.0"

__all__ = [
    "COMPLETED",
    "ClauseLibrary",
    "CompletenessCriterion",
    "CoverageTopic",
    "MetadataPresence",
    "PolicyDocument",
    "PolicyTemplate",
    "PolicygenError",
    "QuestionBank",
    "Session",
    "SessionStore",
    "TemplateSlot",
    "active_outputs",
    "amend_answer",
    "clauses_for_category",
    "count_syllables",
    "evaluate_completeness",
    "evaluate_coverage",
    "evaluate_criterion",
    "extract_placeholders",
    "fre_score",
    "generate",
    "lint_bank",
    "lint_library",
    "load_bank",
    "load_bank_file",
    "load_checklist",
    "load_checklist_file",
    "load_criteria",
    "load_criteria_file",
    "load_fact_rules",
    "load_library",
    "load_library_file",
    "load_presence",
    "load_template",
    "load_template_file",
    "normalize_slot",
    "parse_slot",
    "presence_from_session",
    "render",
    "segment",
    "serialize_library",
    "serialize_session",
    "serialize_slot",
    "start_session",
    "submit_answer",
    "substitute",
]
