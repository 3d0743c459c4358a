"""Clause library: the metadata-type taxonomy and the categorized clauses.

The taxonomy is a forest of up to three levels. Leaf paths are the only
valid categories for standard clauses; non-compliant and warning clauses
live under the reserved single-segment category ``COMPLIANCE``, which is
not part of the taxonomy itself.

Library documents are UTF-8 JSON with top-level keys ``version``,
``taxonomy`` (list of path arrays, internal nodes included) and
``clauses`` (list of objects). See docs/file-formats.md.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from .errors import LibraryError
from .issues import ERROR, WARNING, LintIssue
from .placeholders import extract_placeholders

Path = tuple[str, ...]

COMPLIANCE_CATEGORY: Path = ("COMPLIANCE",)
CLAUSE_KINDS = ("standard", "non_compliant", "warning")
MAX_LEVEL = 3

# Segment alphabet: uppercase, digits, space, apostrophe, hyphen. Dots are
# reserved as the path separator in the dotted string form.
_SEGMENT_CHARS = frozenset("ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 '-")


def parse_path(value: Union[str, Sequence[str]]) -> Path:
    """Accept a dotted string or a sequence of segments; return a tuple."""
    if isinstance(value, str):
        parts = tuple(seg.strip() for seg in value.split("."))
    else:
        parts = tuple(str(seg).strip() for seg in value)
    if not parts or any(not seg for seg in parts):
        raise LibraryError(f"invalid metadata path {value!r}: empty segment")
    return parts


def path_str(path: Path) -> str:
    return ".".join(path)


def _check_segment(seg: str, where: str) -> None:
    if not seg or not set(seg) <= _SEGMENT_CHARS:
        raise LibraryError(f"{where}: invalid path segment {seg!r}")


@dataclass(frozen=True)
class MetadataType:
    """One node of the taxonomy; ``children`` lists direct child paths."""

    path: Path
    children: tuple[Path, ...] = ()

    @property
    def level(self) -> int:
        return len(self.path)

    @property
    def is_leaf(self) -> bool:
        return not self.children


class Taxonomy:
    """Validated forest of metadata types, keyed by path."""

    def __init__(self, paths: Iterable[Union[str, Sequence[str]]]):
        parsed: list[Path] = []
        seen: set[Path] = set()
        for raw in paths:
            p = parse_path(raw)
            for seg in p:
                _check_segment(seg, f"taxonomy path {raw!r}")
            if len(p) > MAX_LEVEL:
                raise LibraryError(f"taxonomy path {path_str(p)!r}: deeper than level {MAX_LEVEL}")
            if p == COMPLIANCE_CATEGORY or p[0] == "COMPLIANCE":
                raise LibraryError("taxonomy must not declare the reserved COMPLIANCE root")
            if p in seen:
                raise LibraryError(f"duplicate taxonomy path {path_str(p)!r}")
            seen.add(p)
            parsed.append(p)
        children: dict[Path, list[Path]] = {p: [] for p in parsed}
        for p in parsed:
            if len(p) > 1:
                parent = p[:-1]
                if parent not in children:
                    raise LibraryError(
                        f"taxonomy path {path_str(p)!r}: parent {path_str(parent)!r} missing"
                    )
                children[parent].append(p)
        self._nodes: dict[Path, MetadataType] = {
            p: MetadataType(path=p, children=tuple(children[p])) for p in parsed
        }

    def __contains__(self, path: Path) -> bool:
        return path in self._nodes

    def __len__(self) -> int:
        return len(self._nodes)

    def node(self, path: Path) -> MetadataType:
        try:
            return self._nodes[path]
        except KeyError:
            raise LibraryError(f"unknown metadata path {path_str(path)!r}") from None

    def paths(self) -> list[Path]:
        return list(self._nodes)

    def leaves(self) -> list[Path]:
        return [p for p, n in self._nodes.items() if n.is_leaf]

    def is_leaf(self, path: Path) -> bool:
        return self.node(path).is_leaf

    def __eq__(self, other) -> bool:
        return isinstance(other, Taxonomy) and self._nodes == other._nodes


@dataclass(frozen=True)
class PrivacyClause:
    """A reusable policy sentence, possibly containing placeholders."""

    id: str
    category: Path
    kind: str
    text: str
    source: str = ""
    placeholders: tuple[str, ...] = field(default=())


@dataclass(frozen=True)
class ClauseLibrary:
    version: str
    taxonomy: Taxonomy
    clauses: Mapping[str, PrivacyClause]  # insertion order = library order
    category_count: int

    def clause(self, clause_id: str) -> PrivacyClause:
        try:
            return self.clauses[clause_id]
        except KeyError:
            raise LibraryError(f"unknown clause id {clause_id!r}") from None


def _as_document(source: Union[bytes, str, Mapping]) -> Mapping:
    if isinstance(source, (bytes, str)):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise LibraryError(f"library document is not valid JSON: {exc}") from exc
    else:
        data = source
    if not isinstance(data, Mapping):
        raise LibraryError("library document must be a JSON object")
    return data


def load_library(source: Union[bytes, str, Mapping]) -> ClauseLibrary:
    """Parse and fully validate a library document.

    Raises LibraryError naming the offending field or path on the first
    violation: bad schema, duplicate clause id, malformed placeholder,
    unknown or non-leaf category.
    """
    data = _as_document(source)
    version = data.get("version")
    if not isinstance(version, str) or not version:
        raise LibraryError("version: missing or not a string")
    raw_taxonomy = data.get("taxonomy")
    if not isinstance(raw_taxonomy, list):
        raise LibraryError("taxonomy: missing or not a list")
    taxonomy = Taxonomy(raw_taxonomy)

    declared = data.get("category_count", len(taxonomy.leaves()))
    if not isinstance(declared, int) or declared < 0:
        raise LibraryError("category_count: not a non-negative integer")
    actual = len(taxonomy.leaves())
    if actual != declared:
        raise LibraryError(
            f"category_count: taxonomy has {actual} leaf categories, document declares {declared}"
        )

    raw_clauses = data.get("clauses")
    if not isinstance(raw_clauses, list):
        raise LibraryError("clauses: missing or not a list")
    clauses: dict[str, PrivacyClause] = {}
    for i, raw in enumerate(raw_clauses):
        where = f"clauses[{i}]"
        if not isinstance(raw, Mapping):
            raise LibraryError(f"{where}: not an object")
        cid = raw.get("id")
        if not isinstance(cid, str) or not cid:
            raise LibraryError(f"{where}.id: missing or empty")
        if cid in clauses:
            raise LibraryError(f"{where}.id: duplicate clause id {cid!r}")
        kind = raw.get("kind", "standard")
        if kind not in CLAUSE_KINDS:
            raise LibraryError(f"{where}.kind: {kind!r} not one of {CLAUSE_KINDS}")
        text = raw.get("text")
        if not isinstance(text, str) or not text.strip():
            raise LibraryError(f"{where}.text: missing or empty")
        try:
            names = tuple(sorted(extract_placeholders(text)))
        except Exception as exc:
            raise LibraryError(f"{where}.text: {exc}") from exc
        category = parse_path(raw.get("category", ""))
        if kind == "standard":
            if category not in taxonomy:
                raise LibraryError(
                    f"{where}.category: unknown category {path_str(category)!r}"
                )
            if not taxonomy.is_leaf(category):
                raise LibraryError(
                    f"{where}.category: {path_str(category)!r} is not a leaf category"
                )
        elif category != COMPLIANCE_CATEGORY:
            raise LibraryError(
                f"{where}.category: {kind} clauses must use category 'COMPLIANCE'"
            )
        source_note = raw.get("source", "")
        if not isinstance(source_note, str):
            raise LibraryError(f"{where}.source: not a string")
        clauses[cid] = PrivacyClause(
            id=cid,
            category=category,
            kind=kind,
            text=text,
            source=source_note,
            placeholders=names,
        )
    return ClauseLibrary(
        version=version, taxonomy=taxonomy, clauses=clauses, category_count=declared
    )


def load_library_file(path) -> ClauseLibrary:
    with open(path, "rb") as fh:
        return load_library(fh.read())


def library_to_dict(lib: ClauseLibrary) -> dict:
    """Serializable form; ``load_library`` on the result round-trips."""
    return {
        "version": lib.version,
        "category_count": lib.category_count,
        "taxonomy": [list(p) for p in lib.taxonomy.paths()],
        "clauses": [
            {
                "id": c.id,
                "category": path_str(c.category),
                "kind": c.kind,
                "text": c.text,
                "source": c.source,
            }
            for c in lib.clauses.values()
        ],
    }


def serialize_library(lib: ClauseLibrary) -> bytes:
    return json.dumps(library_to_dict(lib), ensure_ascii=False, indent=2).encode("utf-8")


def clauses_for_category(lib: ClauseLibrary, path: Union[str, Sequence[str]]) -> list[PrivacyClause]:
    """Clauses whose category equals *path*, in library order.

    The path must exist in the taxonomy (the reserved COMPLIANCE category
    is also queryable); unknown paths raise LibraryError.
    """
    p = parse_path(path)
    if p != COMPLIANCE_CATEGORY and p not in lib.taxonomy:
        raise LibraryError(f"unknown metadata path {path_str(p)!r}")
    return [c for c in lib.clauses.values() if c.category == p]


# Placeholder names that count as a capture route for the contact/identity
# coverage checks below, next to an actual clause in the category.
_CONTACT_HINTS = ("LEGAL ADDRESS", "EMAIL", "E-MAIL", "PHONE")
_IDENTITY_HINTS = ("LEGAL NAME", "REGISTER NUMBER")


def lint_library(lib: ClauseLibrary, bank=None) -> list[LintIssue]:
    """Non-fatal quality checks over a validated library.

    Emitted issues:
      duplicate-clause   exact-duplicate texts within one category
      orphan-placeholder clause placeholder never captured by any bank
                         question (only when *bank* is given)
      contact-coverage / identity-coverage
                         no clause and no placeholder route under
                         CONTROLLER.CONTACT.* / CONTROLLER.IDENTITY.*
    """
    issues: list[LintIssue] = []

    by_category_text: dict[tuple[Path, str], list[str]] = {}
    for c in lib.clauses.values():
        by_category_text.setdefault((c.category, c.text.strip()), []).append(c.id)
    for (category, _text), ids in by_category_text.items():
        if len(ids) > 1:
            issues.append(
                LintIssue(
                    "duplicate-clause",
                    ERROR,
                    ",".join(ids),
                    f"identical clause text appears {len(ids)} times in {path_str(category)}",
                )
            )

    if bank is not None:
        declared = {
            q.placeholder for q in bank.questions.values() if q.placeholder is not None
        }
        for c in lib.clauses.values():
            for name in c.placeholders:
                if name not in declared:
                    issues.append(
                        LintIssue(
                            "orphan-placeholder",
                            WARNING,
                            c.id,
                            f"placeholder [{name}] is never captured by any bank question",
                        )
                    )

    def _has_route(prefix: Path, hints: tuple[str, ...]) -> bool:
        for c in lib.clauses.values():
            if c.category[: len(prefix)] == prefix:
                return True
            if any(any(h in name for h in hints) for name in c.placeholders):
                return True
        return False

    if not _has_route(("CONTROLLER", "CONTACT"), _CONTACT_HINTS):
        issues.append(
            LintIssue(
                "contact-coverage",
                WARNING,
                "CONTROLLER.CONTACT",
                "no clause or placeholder route covers any controller contact category",
            )
        )
    if not _has_route(("CONTROLLER", "IDENTITY"), _IDENTITY_HINTS):
        issues.append(
            LintIssue(
                "identity-coverage",
                WARNING,
                "CONTROLLER.IDENTITY",
                "no clause or placeholder route covers any controller identity category",
            )
        )
    return issues
