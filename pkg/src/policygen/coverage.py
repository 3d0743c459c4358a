"""Coverage checklist: topics rated Y (covered), N (missing) or W (review).

A topic is covered when any of its evidence items holds: a metadata path
that is identified, or a condition fact that is true. Topics flagged for
policymaker review rate W instead of N when their evidence is absent.

Checklist files are JSON: ``{"facts": [...], "topics": [{id, category,
description, evidence: [path | {"fact": name}]}]}`` with category 1-10.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

from .errors import EvaluationError
from .library import Path, Taxonomy, parse_path, path_str
from .presence import DEFAULT_CONDITION_FACTS, MetadataPresence

COVERED = "Y"
MISSING = "N"
REVIEW = "W"

CATEGORY_RANGE = range(1, 11)


@dataclass(frozen=True)
class Evidence:
    path: Optional[Path] = None
    fact: Optional[str] = None

    def holds(self, presence: MetadataPresence) -> bool:
        if self.path is not None:
            return presence.identified(self.path)
        return presence.fact(self.fact) is True


@dataclass(frozen=True)
class CoverageTopic:
    id: str
    category: int
    description: str
    evidence: tuple[Evidence, ...]


def load_checklist(
    source: Union[bytes, str, Mapping, list],
    taxonomy: Optional[Taxonomy] = None,
    facts: frozenset[str] = DEFAULT_CONDITION_FACTS,
) -> tuple[CoverageTopic, ...]:
    if isinstance(source, (bytes, str)):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise EvaluationError(f"checklist document is not valid JSON: {exc}") from exc
    else:
        data = source
    if isinstance(data, Mapping):
        declared = data.get("facts", [])
        if not isinstance(declared, list) or not all(isinstance(f, str) for f in declared):
            raise EvaluationError("checklist 'facts' must be a list of names")
        facts = facts | frozenset(declared)
        data = data.get("topics", [])
    if not isinstance(data, list):
        raise EvaluationError("checklist document must be a list or {'topics': [...]}")
    topics: list[CoverageTopic] = []
    seen: set[str] = set()
    for i, raw in enumerate(data):
        where = f"topics[{i}]"
        if not isinstance(raw, Mapping):
            raise EvaluationError(f"{where}: not an object")
        tid = raw.get("id")
        if not isinstance(tid, str) or not tid or tid in seen:
            raise EvaluationError(f"{where}.id: missing or duplicate")
        seen.add(tid)
        category = raw.get("category")
        if not isinstance(category, int) or category not in CATEGORY_RANGE:
            raise EvaluationError(f"{where}.category: must be an integer 1-10")
        description = raw.get("description", "")
        if not isinstance(description, str):
            raise EvaluationError(f"{where}.description: not a string")
        raw_evidence = raw.get("evidence")
        if not isinstance(raw_evidence, list) or not raw_evidence:
            raise EvaluationError(f"{where}.evidence: must be a non-empty list")
        evidence: list[Evidence] = []
        for j, item in enumerate(raw_evidence):
            if isinstance(item, str) or isinstance(item, list):
                path = parse_path(item)
                if taxonomy is not None and path not in taxonomy:
                    raise EvaluationError(
                        f"{where}.evidence[{j}]: unknown metadata path {path_str(path)!r}"
                    )
                evidence.append(Evidence(path=path))
            elif isinstance(item, Mapping) and isinstance(item.get("fact"), str):
                name = item["fact"]
                if name not in facts:
                    raise EvaluationError(f"{where}.evidence[{j}]: unregistered condition fact {name!r}")
                evidence.append(Evidence(fact=name))
            else:
                raise EvaluationError(f"{where}.evidence[{j}]: expected a path or {{'fact': name}}")
        topics.append(
            CoverageTopic(id=tid, category=category, description=description, evidence=tuple(evidence))
        )
    return tuple(topics)


def load_checklist_file(path, taxonomy=None, facts=DEFAULT_CONDITION_FACTS):
    with open(path, "rb") as fh:
        return load_checklist(fh.read(), taxonomy, facts)


@dataclass(frozen=True)
class CoverageReport:
    ratings: dict[str, str]
    covered_count: int

    def to_dict(self) -> dict:
        return {"ratings": dict(self.ratings), "covered_count": self.covered_count}


def evaluate_coverage(
    checklist: Iterable[CoverageTopic],
    presence: MetadataPresence,
    review_flags: Iterable[str] = (),
) -> CoverageReport:
    """Rate each topic; evidence wins over a review flag."""
    flags = set(review_flags)
    ratings: dict[str, str] = {}
    for topic in checklist:
        if any(e.holds(presence) for e in topic.evidence):
            ratings[topic.id] = COVERED
        elif topic.id in flags:
            ratings[topic.id] = REVIEW
        else:
            ratings[topic.id] = MISSING
    covered = sum(1 for r in ratings.values() if r == COVERED)
    return CoverageReport(ratings=ratings, covered_count=covered)
