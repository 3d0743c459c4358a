"""Metadata presence: what a policy identifies, plus named condition facts.

``present`` holds taxonomy paths (internal nodes allowed); a path counts
as *identified* when it or any descendant is present. ``conditions`` maps
registered fact names to True/False; a missing or null entry is unknown.

``presence_from_session`` bridges the interview to the evaluators: every
standard clause selected on the active trail asserts its category, and
fact rules translate registered question answers into condition facts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from .bank import ON_ANSWERED, ON_OPTION, QuestionBank
from .engine import Session
from .errors import EvaluationError
from .library import ClauseLibrary, Path, parse_path, path_str

#: Condition facts understood by the shipped criteria and fact rules.
DEFAULT_CONDITION_FACTS = frozenset(
    {
        "controller located outside Europe",
        "personal data is collected indirectly",
    }
)


@dataclass(frozen=True)
class MetadataPresence:
    present: frozenset[Path] = frozenset()
    conditions: Mapping[str, Optional[bool]] = field(default_factory=dict)

    def identified(self, path: Path) -> bool:
        """True if *path* or any descendant of it is present."""
        n = len(path)
        return any(p[:n] == path for p in self.present)

    def fact(self, name: str) -> Optional[bool]:
        return self.conditions.get(name)

    def to_dict(self) -> dict:
        return {
            "present": sorted(path_str(p) for p in self.present),
            "conditions": {k: self.conditions[k] for k in sorted(self.conditions)},
        }


def build_presence(
    present: Iterable[Union[str, tuple]],
    conditions: Mapping[str, Optional[bool]],
    taxonomy=None,
    facts: frozenset[str] = DEFAULT_CONDITION_FACTS,
) -> MetadataPresence:
    """Validate and freeze a presence record.

    With a taxonomy given, every path must exist in it; every condition
    name must be registered in *facts*.
    """
    paths = set()
    for raw in present:
        p = parse_path(raw)
        if taxonomy is not None and p not in taxonomy:
            raise EvaluationError(f"presence path {path_str(p)!r} not in taxonomy")
        paths.add(p)
    cond: dict[str, Optional[bool]] = {}
    for name, value in conditions.items():
        if name not in facts:
            raise EvaluationError(f"unregistered condition fact {name!r}")
        if value is not None and not isinstance(value, bool):
            raise EvaluationError(f"condition {name!r} must be true, false or null")
        cond[name] = value
    return MetadataPresence(present=frozenset(paths), conditions=cond)


def load_presence(
    source: Union[bytes, str, Mapping],
    taxonomy=None,
    facts: frozenset[str] = DEFAULT_CONDITION_FACTS,
) -> MetadataPresence:
    if isinstance(source, (bytes, str)):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise EvaluationError(f"presence document is not valid JSON: {exc}") from exc
    else:
        data = source
    if not isinstance(data, Mapping):
        raise EvaluationError("presence document must be a JSON object")
    present = data.get("present", [])
    conditions = data.get("conditions", {})
    if not isinstance(present, list) or not isinstance(conditions, Mapping):
        raise EvaluationError("presence document needs 'present' list and 'conditions' object")
    return build_presence(present, conditions, taxonomy, facts)


@dataclass(frozen=True)
class FactRule:
    """Maps one question's answer to a condition fact value."""

    fact: str
    qnum: str
    on: str  # YES | NO | ANSWERED | OPTION
    value: bool
    option: Optional[str] = None


def load_fact_rules(source: Union[bytes, str, list], facts: frozenset[str] = DEFAULT_CONDITION_FACTS) -> tuple[FactRule, ...]:
    if isinstance(source, (bytes, str)):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise EvaluationError(f"fact rules document is not valid JSON: {exc}") from exc
    else:
        data = source
    if isinstance(data, Mapping):
        data = data.get("rules", [])
    if not isinstance(data, list):
        raise EvaluationError("fact rules document must be a list or {'rules': [...]}")
    rules: list[FactRule] = []
    for i, raw in enumerate(data):
        if not isinstance(raw, Mapping):
            raise EvaluationError(f"rules[{i}]: not an object")
        fact = raw.get("fact")
        if not isinstance(fact, str) or fact not in facts:
            raise EvaluationError(f"rules[{i}].fact: unregistered condition fact {fact!r}")
        qnum = raw.get("qnum")
        if not isinstance(qnum, str) or not qnum:
            raise EvaluationError(f"rules[{i}].qnum: missing")
        on = raw.get("on")
        option = None
        if isinstance(on, Mapping):
            option = on.get("option")
            on = ON_OPTION
        if on not in ("YES", "NO", ON_ANSWERED, ON_OPTION):
            raise EvaluationError(f"rules[{i}].on: bad matcher {on!r}")
        value = raw.get("value")
        if not isinstance(value, bool):
            raise EvaluationError(f"rules[{i}].value: must be true or false")
        rules.append(FactRule(fact=fact, qnum=qnum, on=on, value=value, option=option))
    return tuple(rules)


def _rule_matches(rule: FactRule, qtype: str, value) -> bool:
    if rule.on == ON_ANSWERED:
        return True
    if qtype == "BOOL":
        return rule.on == value
    if rule.on == ON_OPTION and qtype == "MTPC":
        return rule.option in value
    return False


def presence_from_session(
    session: Session,
    bank: QuestionBank,
    library: ClauseLibrary,
    fact_rules: Iterable[FactRule] = (),
) -> MetadataPresence:
    """Presence asserted by the session's active trail.

    A standard clause selected under category X asserts X; non-compliant
    and warning clauses assert nothing. Fact rules fire on active answers
    in rule order; the last matching rule wins per fact.
    """
    present: set[Path] = set()
    for cid in session.selected_clauses:
        clause = library.clauses.get(cid)
        if clause is not None and clause.kind == "standard":
            present.add(clause.category)
    conditions: dict[str, Optional[bool]] = {}
    active = {q: session.answers[q] for q in session.active_qnums()}
    for rule in fact_rules:
        answer = active.get(rule.qnum)
        if answer is None:
            continue
        question = bank.questions.get(rule.qnum)
        if question is None:
            continue
        if _rule_matches(rule, question.qtype, answer.value):
            conditions[rule.fact] = rule.value
    return MetadataPresence(present=frozenset(present), conditions=conditions)
