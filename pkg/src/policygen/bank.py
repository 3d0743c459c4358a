"""Question bank: interview questions, answer-conditioned flow, bindings.

A bank document is UTF-8 JSON with keys ``version``, ``entry``,
``sections`` and ``questions``. Flow edges are keyed YES/NO for closed
(BOOL) questions and ANY for open (INFO) and multiple-choice (MTPC)
questions; the target is another question number or the sentinel END.

``load_bank`` rejects structurally broken banks; ``lint_bank`` returns
every finding (errors plus warnings such as unreachable questions) so a
bank author can fix them in one pass.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Mapping, Optional, Union

from .errors import BankError
from .issues import ERROR, WARNING, LintIssue, errors_only
from .placeholders import is_valid_name

QTYPES = ("BOOL", "INFO", "MTPC")
END = "END"
SECTION_LETTERS = "ABCDEFGHIJ"

_QNUM_RE = re.compile(r"Q\d+\Z")

# Binding matchers: YES/NO for BOOL questions, ANSWERED for INFO and MTPC,
# OPTION (with the option text) for MTPC.
ON_YES = "YES"
ON_NO = "NO"
ON_ANSWERED = "ANSWERED"
ON_OPTION = "OPTION"


@dataclass(frozen=True)
class ClauseBinding:
    on: str
    clauses: tuple[str, ...]
    option: Optional[str] = None


@dataclass(frozen=True)
class Question:
    qnum: str
    section: str
    text: str
    qtype: str
    flow: Mapping[str, str]  # {"YES": .., "NO": ..} or {"ANY": ..}
    options: tuple[str, ...] = ()
    placeholder: Optional[str] = None
    bindings: tuple[ClauseBinding, ...] = ()
    referred: Optional[str] = None  # stored, not interpreted

    def edge(self, key: str) -> str:
        return self.flow[key]


@dataclass(frozen=True)
class Section:
    letter: str
    name: str
    expected_questions: Optional[int] = None


@dataclass(frozen=True)
class QuestionBank:
    version: str
    entry: str
    sections: Mapping[str, Section]
    questions: Mapping[str, Question]  # insertion order = document order

    def question(self, qnum: str) -> Question:
        try:
            return self.questions[qnum]
        except KeyError:
            raise BankError([f"unknown question {qnum}"]) from None


def _issue(code: str, subject: str, message: str, severity: str = ERROR) -> LintIssue:
    return LintIssue(code, severity, subject, message)


def _parse_binding(raw, q: Mapping, where: str, issues: list[LintIssue]) -> Optional[ClauseBinding]:
    if not isinstance(raw, Mapping):
        issues.append(_issue("bad-binding", where, "binding is not an object"))
        return None
    on = raw.get("on")
    option = None
    if isinstance(on, Mapping):
        option = on.get("option")
        on = ON_OPTION
    clauses = raw.get("clauses")
    if not isinstance(clauses, list) or not all(isinstance(c, str) and c for c in clauses):
        issues.append(_issue("bad-binding", where, "clauses must be a list of ids"))
        return None
    qtype = q.get("qtype")
    allowed = {
        "BOOL": {ON_YES, ON_NO},
        "INFO": {ON_ANSWERED},
        "MTPC": {ON_ANSWERED, ON_OPTION},
    }.get(qtype, set())
    if on not in allowed:
        issues.append(
            _issue("bad-binding", where, f"matcher {on!r} not valid for a {qtype} question")
        )
        return None
    if on == ON_OPTION:
        if not isinstance(option, str) or option not in (q.get("options") or []):
            issues.append(
                _issue("bad-binding", where, f"option matcher {option!r} is not a declared option")
            )
            return None
    return ClauseBinding(on=on, clauses=tuple(clauses), option=option)


def _parse_question(raw, idx: int, issues: list[LintIssue]) -> Optional[Question]:
    where = f"questions[{idx}]"
    if not isinstance(raw, Mapping):
        issues.append(_issue("bad-question", where, "not an object"))
        return None
    qnum = raw.get("qnum")
    if not isinstance(qnum, str) or not _QNUM_RE.match(qnum):
        issues.append(_issue("bad-question", where, f"qnum {qnum!r} must look like 'Q12'"))
        return None
    where = qnum
    qtype = raw.get("qtype")
    if qtype not in QTYPES:
        issues.append(_issue("bad-question", where, f"qtype {qtype!r} not one of {QTYPES}"))
        return None
    section = raw.get("section")
    if not isinstance(section, str) or section not in SECTION_LETTERS:
        issues.append(_issue("bad-question", where, f"section {section!r} must be a letter A-J"))
        return None
    text = raw.get("text")
    if not isinstance(text, str) or not text.strip():
        issues.append(_issue("bad-question", where, "text missing or empty"))
        return None

    flow = raw.get("flow")
    if not isinstance(flow, Mapping):
        issues.append(_issue("bad-flow", where, "flow missing or not an object"))
        return None
    # Arity problems are reported but the question is kept with whatever
    # edges it has, so one defect does not cascade into dangling-edge
    # errors at its neighbours.
    keys = set(flow)
    if qtype == "BOOL":
        if keys != {"YES", "NO"}:
            missing = sorted({"YES", "NO"} - keys)
            extra = sorted(keys - {"YES", "NO"})
            detail = []
            if missing:
                detail.append("missing " + ",".join(missing))
            if extra:
                detail.append("unexpected " + ",".join(extra))
            issues.append(
                _issue("bad-flow", where, "BOOL question must define exactly YES and NO edges"
                       + (" (" + "; ".join(detail) + ")" if detail else ""))
            )
    else:
        if keys != {"ANY"}:
            issues.append(_issue("bad-flow", where, f"{qtype} question must define exactly one ANY edge"))
    flow = {k: v for k, v in flow.items() if k in ("YES", "NO", "ANY")}
    for key, target in list(flow.items()):
        if not isinstance(target, str) or (target != END and not _QNUM_RE.match(target)):
            issues.append(_issue("bad-flow", where, f"edge {key} target {target!r} must be a qnum or END"))
            del flow[key]

    options: tuple[str, ...] = ()
    if qtype == "MTPC":
        raw_options = raw.get("options")
        if (
            not isinstance(raw_options, list)
            or not raw_options
            or not all(isinstance(o, str) and o.strip() for o in raw_options)
            or len(set(raw_options)) != len(raw_options)
        ):
            issues.append(_issue("bad-question", where, "MTPC question needs a non-empty list of distinct options"))
            return None
        options = tuple(raw_options)
    elif raw.get("options"):
        issues.append(_issue("bad-question", where, f"{qtype} question must not declare options"))
        return None

    placeholder = raw.get("placeholder")
    if qtype in ("INFO", "MTPC"):
        if not isinstance(placeholder, str) or not is_valid_name(placeholder):
            issues.append(_issue("bad-question", where, f"{qtype} question must declare a valid placeholder name"))
            return None
    elif placeholder is not None:
        issues.append(_issue("bad-question", where, "BOOL question must not declare a placeholder"))
        return None

    bindings: list[ClauseBinding] = []
    for b_idx, raw_binding in enumerate(raw.get("clause_bindings", []) or []):
        binding = _parse_binding(raw_binding, raw, f"{where}.clause_bindings[{b_idx}]", issues)
        if binding is None:
            return None
        bindings.append(binding)

    referred = raw.get("referred")
    if referred is not None and not isinstance(referred, str):
        issues.append(_issue("bad-question", where, "referred must be a string"))
        return None

    return Question(
        qnum=qnum,
        section=section,
        text=text,
        qtype=qtype,
        flow=dict(flow),
        options=options,
        placeholder=placeholder,
        bindings=tuple(bindings),
        referred=referred,
    )


def _find_cycles(questions: Mapping[str, Question], entry: str) -> list[list[str]]:
    """Cycles reachable from *entry*; dangling edges are skipped."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {q: WHITE for q in questions}
    cycles: list[list[str]] = []
    stack: list[tuple[str, list[str]]] = []
    path: list[str] = []

    def targets(qnum: str) -> list[str]:
        return [t for t in questions[qnum].flow.values() if t != END and t in questions]

    if entry not in questions:
        return cycles
    stack = [(entry, targets(entry))]
    color[entry] = GRAY
    path = [entry]
    while stack:
        node, outgoing = stack[-1]
        if outgoing:
            nxt = outgoing.pop(0)
            if color[nxt] == GRAY:
                cycle = path[path.index(nxt):] + [nxt]
                cycles.append(cycle)
            elif color[nxt] == WHITE:
                color[nxt] = GRAY
                stack.append((nxt, targets(nxt)))
                path.append(nxt)
        else:
            color[node] = BLACK
            stack.pop()
            path.pop()
    return cycles


def _validate(data: Mapping) -> tuple[Optional[QuestionBank], list[LintIssue]]:
    issues: list[LintIssue] = []

    version = data.get("version")
    if not isinstance(version, str) or not version:
        issues.append(_issue("bad-bank", "version", "missing or not a string"))
        version = ""

    sections: dict[str, Section] = {}
    raw_sections = data.get("sections", {})
    if not isinstance(raw_sections, Mapping):
        issues.append(_issue("bad-bank", "sections", "not an object"))
        raw_sections = {}
    for letter, raw in raw_sections.items():
        if letter not in SECTION_LETTERS or not isinstance(raw, Mapping):
            issues.append(_issue("bad-bank", f"sections.{letter}", "invalid section entry"))
            continue
        expected = raw.get("expected_questions")
        if expected is not None and (not isinstance(expected, int) or expected < 0):
            issues.append(_issue("bad-bank", f"sections.{letter}", "expected_questions must be a non-negative integer"))
            expected = None
        sections[letter] = Section(letter=letter, name=str(raw.get("name", "")), expected_questions=expected)

    questions: dict[str, Question] = {}
    raw_questions = data.get("questions")
    if not isinstance(raw_questions, list):
        issues.append(_issue("bad-bank", "questions", "missing or not a list"))
        raw_questions = []
    for idx, raw in enumerate(raw_questions):
        q = _parse_question(raw, idx, issues)
        if q is None:
            continue
        if q.qnum in questions:
            issues.append(_issue("duplicate-question", q.qnum, "question number appears twice"))
            continue
        questions[q.qnum] = q

    entry = data.get("entry")
    if not isinstance(entry, str) or entry not in questions:
        issues.append(_issue("missing-entry", str(entry), "entry question does not exist"))
        entry = ""

    for q in questions.values():
        for key, target in q.flow.items():
            if target != END and target not in questions:
                issues.append(
                    _issue("dangling-flow", q.qnum, f"dangling flow target {target} from {q.qnum}/{key}")
                )
        if q.section not in sections:
            issues.append(_issue("unknown-section", q.qnum, f"section {q.section!r} not declared", WARNING))

    if entry:
        for cycle in _find_cycles(questions, entry):
            issues.append(_issue("flow-cycle", cycle[0], "flow cycle: " + " -> ".join(cycle)))

        reachable = {entry}
        frontier = [entry]
        while frontier:
            node = frontier.pop()
            for target in questions[node].flow.values():
                if target != END and target in questions and target not in reachable:
                    reachable.add(target)
                    frontier.append(target)
        for qnum in questions:
            if qnum not in reachable:
                issues.append(_issue("unreachable", qnum, "question can never be reached from entry", WARNING))

    counts: dict[str, int] = {}
    for q in questions.values():
        counts[q.section] = counts.get(q.section, 0) + 1
    for letter, section in sections.items():
        if section.expected_questions is not None and counts.get(letter, 0) != section.expected_questions:
            issues.append(
                _issue(
                    "section-count",
                    letter,
                    f"section {letter} declares {section.expected_questions} questions, found {counts.get(letter, 0)}",
                    WARNING,
                )
            )

    if errors_only(issues):
        return None, issues
    bank = QuestionBank(version=version, entry=entry, sections=sections, questions=questions)
    return bank, issues


def _as_document(source: Union[bytes, str, Mapping]) -> Mapping:
    if isinstance(source, (bytes, str)):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise BankError([f"bank document is not valid JSON: {exc}"]) from exc
    else:
        data = source
    if not isinstance(data, Mapping):
        raise BankError(["bank document must be a JSON object"])
    return data


def load_bank(source: Union[bytes, str, Mapping]) -> QuestionBank:
    """Parse and validate a bank; raise BankError listing every defect."""
    bank, issues = _validate(_as_document(source))
    bad = errors_only(issues)
    if bad:
        raise BankError(bad)
    assert bank is not None
    return bank


def load_bank_file(path) -> QuestionBank:
    with open(path, "rb") as fh:
        return load_bank(fh.read())


def lint_bank(source: Union[bytes, str, Mapping, QuestionBank]) -> list[LintIssue]:
    """All findings for a bank document: errors and warnings."""
    if isinstance(source, QuestionBank):
        source = bank_to_dict(source)
    _bank, issues = _validate(_as_document(source))
    return issues


def bank_to_dict(bank: QuestionBank) -> dict:
    questions = []
    for q in bank.questions.values():
        raw: dict = {
            "qnum": q.qnum,
            "section": q.section,
            "text": q.text,
            "qtype": q.qtype,
            "flow": dict(q.flow),
        }
        if q.options:
            raw["options"] = list(q.options)
        if q.placeholder is not None:
            raw["placeholder"] = q.placeholder
        if q.bindings:
            raw["clause_bindings"] = [
                {
                    "on": {"option": b.option} if b.on == ON_OPTION else b.on,
                    "clauses": list(b.clauses),
                }
                for b in q.bindings
            ]
        if q.referred is not None:
            raw["referred"] = q.referred
        questions.append(raw)
    return {
        "version": bank.version,
        "entry": bank.entry,
        "sections": {
            letter: {
                "name": s.name,
                **({"expected_questions": s.expected_questions} if s.expected_questions is not None else {}),
            }
            for letter, s in bank.sections.items()
        },
        "questions": questions,
    }
