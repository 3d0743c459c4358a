"""Completeness checking: precondition/postcondition criteria.

Each criterion is a pair ``[precondition], <postcondition>`` with a
``must`` or ``should`` strength. Preconditions are boolean expressions
over identified metadata paths and condition facts, evaluated in Kleene
three-valued logic; a false or unknown precondition rates the criterion
``precondition_not_satisfied`` without looking at the postcondition.
Postconditions are all-of / any-of groups over metadata paths only.

A policy is *complete* when no must-strength criterion rates unsatisfied.

Criteria files are JSON: ``{"facts": [...], "criteria": [{id, strength,
precondition?, postcondition}]}``. Expressions nest ``{"fact": name,
"equals": bool}``, ``{"identified": path}``, ``{"all_of": [...]}`` and
``{"any_of": [...]}``; postconditions may list bare path strings inside
the groups.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Optional, Union

from .errors import EvaluationError
from .library import Path, Taxonomy, parse_path, path_str
from .presence import DEFAULT_CONDITION_FACTS, MetadataPresence

SATISFIED = "satisfied"
UNSATISFIED = "unsatisfied"
PRECONDITION_NOT_SATISFIED = "precondition_not_satisfied"
RATINGS = (SATISFIED, UNSATISFIED, PRECONDITION_NOT_SATISFIED)

MUST = "must"
SHOULD = "should"


@dataclass(frozen=True)
class FactIs:
    name: str
    equals: bool

    def evaluate(self, presence: MetadataPresence) -> Optional[bool]:
        value = presence.fact(self.name)
        if value is None:
            return None
        return value == self.equals


@dataclass(frozen=True)
class Identified:
    path: Path

    def evaluate(self, presence: MetadataPresence) -> Optional[bool]:
        return presence.identified(self.path)


@dataclass(frozen=True)
class AllOf:
    items: tuple

    def evaluate(self, presence: MetadataPresence) -> Optional[bool]:
        results = [item.evaluate(presence) for item in self.items]
        if any(r is False for r in results):
            return False
        if any(r is None for r in results):
            return None
        return True


@dataclass(frozen=True)
class AnyOf:
    items: tuple

    def evaluate(self, presence: MetadataPresence) -> Optional[bool]:
        results = [item.evaluate(presence) for item in self.items]
        if any(r is True for r in results):
            return True
        if any(r is None for r in results):
            return None
        return False


Expr = Union[FactIs, Identified, AllOf, AnyOf]


def parse_expr(
    data,
    taxonomy: Optional[Taxonomy],
    facts: frozenset[str],
    paths_only: bool = False,
    where: str = "expression",
) -> Expr:
    """Parse and validate one expression node.

    Unregistered fact names and paths missing from the taxonomy are
    rejected here, so evaluation never meets an unknown name.
    """
    if isinstance(data, str):
        data = {"identified": data}
    if not isinstance(data, Mapping):
        raise EvaluationError(f"{where}: expression must be an object or path string")
    keys = set(data)
    if "fact" in keys:
        if paths_only:
            raise EvaluationError(f"{where}: postconditions may only reference metadata paths")
        name = data["fact"]
        equals = data.get("equals", True)
        if not isinstance(name, str) or name not in facts:
            raise EvaluationError(f"{where}: unregistered condition fact {name!r}")
        if not isinstance(equals, bool):
            raise EvaluationError(f"{where}: 'equals' must be true or false")
        return FactIs(name=name, equals=equals)
    if "identified" in keys:
        path = parse_path(data["identified"])
        if taxonomy is not None and path not in taxonomy:
            raise EvaluationError(f"{where}: unknown metadata path {path_str(path)!r}")
        return Identified(path=path)
    if "all_of" in keys or "any_of" in keys:
        key = "all_of" if "all_of" in keys else "any_of"
        items = data[key]
        if not isinstance(items, list) or not items:
            raise EvaluationError(f"{where}.{key}: must be a non-empty list")
        parsed = tuple(
            parse_expr(item, taxonomy, facts, paths_only, f"{where}.{key}[{i}]")
            for i, item in enumerate(items)
        )
        return AllOf(parsed) if key == "all_of" else AnyOf(parsed)
    raise EvaluationError(f"{where}: expected one of fact/identified/all_of/any_of")


@dataclass(frozen=True)
class CompletenessCriterion:
    id: str
    strength: str  # must | should
    precondition: Optional[Expr]  # None = always applies
    postcondition: Expr
    description: str = ""


def load_criteria(
    source: Union[bytes, str, Mapping, list],
    taxonomy: Optional[Taxonomy] = None,
    facts: frozenset[str] = DEFAULT_CONDITION_FACTS,
) -> tuple[tuple[CompletenessCriterion, ...], frozenset[str]]:
    """Load criteria; returns (criteria, fact registry incl. declared names)."""
    if isinstance(source, (bytes, str)):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise EvaluationError(f"criteria document is not valid JSON: {exc}") from exc
    else:
        data = source
    if isinstance(data, Mapping):
        declared = data.get("facts", [])
        if not isinstance(declared, list) or not all(isinstance(f, str) for f in declared):
            raise EvaluationError("criteria 'facts' must be a list of names")
        facts = facts | frozenset(declared)
        data = data.get("criteria", [])
    if not isinstance(data, list):
        raise EvaluationError("criteria document must be a list or {'criteria': [...]}")
    criteria: list[CompletenessCriterion] = []
    seen: set[str] = set()
    for i, raw in enumerate(data):
        where = f"criteria[{i}]"
        if not isinstance(raw, Mapping):
            raise EvaluationError(f"{where}: not an object")
        cid = raw.get("id")
        if not isinstance(cid, str) or not cid or cid in seen:
            raise EvaluationError(f"{where}.id: missing or duplicate")
        seen.add(cid)
        strength = raw.get("strength")
        if strength not in (MUST, SHOULD):
            raise EvaluationError(f"{where}.strength: must be 'must' or 'should'")
        pre = raw.get("precondition")
        precondition = None
        if pre is not None:
            precondition = parse_expr(pre, taxonomy, facts, False, f"{where}.precondition")
        post = raw.get("postcondition")
        if post is None:
            raise EvaluationError(f"{where}.postcondition: missing")
        postcondition = parse_expr(post, taxonomy, facts, True, f"{where}.postcondition")
        criteria.append(
            CompletenessCriterion(
                id=cid,
                strength=strength,
                precondition=precondition,
                postcondition=postcondition,
                description=str(raw.get("description", "")),
            )
        )
    return tuple(criteria), facts


def load_criteria_file(path, taxonomy=None, facts=DEFAULT_CONDITION_FACTS):
    with open(path, "rb") as fh:
        return load_criteria(fh.read(), taxonomy, facts)


def evaluate_criterion(criterion: CompletenessCriterion, presence: MetadataPresence) -> str:
    """Three-valued rating of one criterion against a presence record."""
    if criterion.precondition is not None:
        pre = criterion.precondition.evaluate(presence)
        if pre is not True:  # false or unknown
            return PRECONDITION_NOT_SATISFIED
    post = criterion.postcondition.evaluate(presence)
    return SATISFIED if post is True else UNSATISFIED


@dataclass(frozen=True)
class CompletenessReport:
    ratings: dict[str, str]
    complete: bool
    tally: dict[str, int]

    def to_dict(self) -> dict:
        return {"ratings": dict(self.ratings), "complete": self.complete, "tally": dict(self.tally)}


def evaluate_completeness(criteria, presence: MetadataPresence) -> CompletenessReport:
    ratings: dict[str, str] = {}
    tally = {SATISFIED: 0, UNSATISFIED: 0, PRECONDITION_NOT_SATISFIED: 0}
    complete = True
    for criterion in criteria:
        rating = evaluate_criterion(criterion, presence)
        ratings[criterion.id] = rating
        tally[rating] += 1
        if criterion.strength == MUST and rating == UNSATISFIED:
            complete = False
    return CompletenessReport(ratings=ratings, complete=complete, tally=tally)
