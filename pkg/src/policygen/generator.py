"""Policy template and document assembly.

A template has exactly ten ordered sections, each with a heading, static
guide text and an ordered slot list (stored as notation strings, see
slots.py). Generation walks the slots in order: a slot contributes its
clauses when the session's active answer for the slot's question matches
the selector. Clause text is substituted from the session's captured
placeholder values; the same clause arriving from two slots is kept only
at its first position.
"""

from __future__ import annotations

import html as _html
import json
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

from .bank import QuestionBank
from .engine import COMPLETED, Session
from .errors import GenerationError, TemplateError, UnresolvedPlaceholderError
from .library import ClauseLibrary
from .placeholders import find_tokens, substitute
from .slots import SELECTOR_ANY, TemplateSlot, parse_slot, serialize_slot

SECTION_COUNT = 10
RENDER_FORMATS = ("plain", "markdown", "html")

NON_COMPLIANT_PREFIX = "NON-COMPLIANT:"
WARNING_PREFIX = "REVIEW:"


@dataclass(frozen=True)
class TemplateSection:
    index: int
    heading: str
    guide: str
    slots: tuple[TemplateSlot, ...]


@dataclass(frozen=True)
class PolicyTemplate:
    version: str
    sections: tuple[TemplateSection, ...]

    def all_slots(self) -> list[TemplateSlot]:
        return [slot for section in self.sections for slot in section.slots]


def load_template(source: Union[bytes, str, Mapping], bank: Optional[QuestionBank] = None) -> PolicyTemplate:
    """Parse a template document; with *bank* given, cross-check slots.

    Every slot's question must exist in the companion bank and agree on
    the question type.
    """
    if isinstance(source, (bytes, str)):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise TemplateError(f"template document is not valid JSON: {exc}") from exc
    else:
        data = source
    if not isinstance(data, Mapping):
        raise TemplateError("template document must be a JSON object")
    version = data.get("version")
    if not isinstance(version, str) or not version:
        raise TemplateError("version: missing or not a string")
    raw_sections = data.get("sections")
    if not isinstance(raw_sections, list):
        raise TemplateError("sections: missing or not a list")
    if len(raw_sections) != SECTION_COUNT:
        raise TemplateError(f"template must have exactly {SECTION_COUNT} sections, found {len(raw_sections)}")
    sections: list[TemplateSection] = []
    for i, raw in enumerate(raw_sections):
        where = f"sections[{i}]"
        if not isinstance(raw, Mapping):
            raise TemplateError(f"{where}: not an object")
        index = raw.get("index")
        if index != i + 1:
            raise TemplateError(f"{where}.index: expected {i + 1}, found {index!r}")
        heading = raw.get("heading")
        if not isinstance(heading, str) or not heading.strip():
            raise TemplateError(f"{where}.heading: missing or empty")
        guide = raw.get("guide", "")
        if not isinstance(guide, str):
            raise TemplateError(f"{where}.guide: not a string")
        slots: list[TemplateSlot] = []
        for j, notation in enumerate(raw.get("slots", []) or []):
            try:
                slot = parse_slot(notation)
            except Exception as exc:
                raise TemplateError(f"{where}.slots[{j}]: {exc}") from exc
            if bank is not None:
                question = bank.questions.get(slot.qnum)
                if question is None:
                    raise TemplateError(f"{where}.slots[{j}]: question {slot.qnum} not in bank")
                if question.qtype != slot.qtype:
                    raise TemplateError(
                        f"{where}.slots[{j}]: slot says {slot.qtype}, bank says {question.qtype} for {slot.qnum}"
                    )
            slots.append(slot)
        sections.append(
            TemplateSection(index=i + 1, heading=heading.strip(), guide=guide.strip(), slots=tuple(slots))
        )
    return PolicyTemplate(version=version, sections=tuple(sections))


def load_template_file(path, bank: Optional[QuestionBank] = None) -> PolicyTemplate:
    with open(path, "rb") as fh:
        return load_template(fh.read(), bank)


def template_to_dict(template: PolicyTemplate) -> dict:
    return {
        "version": template.version,
        "sections": [
            {
                "index": s.index,
                "heading": s.heading,
                "guide": s.guide,
                "slots": [serialize_slot(slot) for slot in s.slots],
            }
            for s in template.sections
        ],
    }


@dataclass(frozen=True)
class PolicyItem:
    text: str
    origin: str  # clause id, or "static" for guide text
    kind: str  # standard | non_compliant | warning


@dataclass(frozen=True)
class DocumentSection:
    index: int
    heading: str
    items: tuple[PolicyItem, ...]


@dataclass(frozen=True)
class PolicyDocument:
    metadata: dict
    sections: tuple[DocumentSection, ...]

    def items(self) -> list[PolicyItem]:
        return [item for section in self.sections for item in section.items]

    def has_non_compliant(self) -> bool:
        return any(item.kind == "non_compliant" for item in self.items())

    def has_warnings(self) -> bool:
        return any(item.kind == "warning" for item in self.items())


def document_to_dict(doc: PolicyDocument) -> dict:
    return {
        "metadata": dict(doc.metadata),
        "sections": [
            {
                "index": s.index,
                "heading": s.heading,
                "items": [
                    {"text": i.text, "origin": i.origin, "kind": i.kind} for i in s.items
                ],
            }
            for s in doc.sections
        ],
    }


def _slot_matches(slot: TemplateSlot, session: Session) -> bool:
    answer = session.answers.get(slot.qnum)
    if answer is None or slot.qnum not in session.trail:
        return False  # unanswered, or answered on an abandoned branch
    if slot.selector == SELECTOR_ANY:
        return True
    return answer.value == slot.selector


def generate(
    template: PolicyTemplate,
    session: Session,
    library: ClauseLibrary,
    strict: bool = True,
    generated_at: Optional[str] = None,
) -> PolicyDocument:
    """Assemble the policy document from the session's active answers.

    Strict mode requires a completed session and fails on the first
    unresolved placeholder; lenient mode (previews) keeps leftover tokens
    and lists their names in metadata. A clause id missing from the
    library is an error in both modes.
    """
    if strict and not session.completed:
        raise GenerationError(
            f"session is not completed (cursor at {session.cursor}); strict generation refused"
        )
    values = session.placeholder_values
    seen: set[str] = set()
    collapsed: list[str] = []
    unresolved: set[str] = set()
    sections: list[DocumentSection] = []
    for tsec in template.sections:
        items: list[PolicyItem] = []
        if tsec.guide:
            items.append(PolicyItem(text=tsec.guide, origin="static", kind="standard"))
        for slot in tsec.slots:
            if not slot.clauses or not _slot_matches(slot, session):
                continue
            for cid in slot.clauses:
                clause = library.clauses.get(cid)
                if clause is None:
                    raise GenerationError(f"clause {cid} referenced by slot {slot.qnum} is not in the library")
                if cid in seen:
                    collapsed.append(cid)
                    continue
                seen.add(cid)
                if strict:
                    try:
                        text = substitute(clause.text, values, strict=True)
                    except UnresolvedPlaceholderError as exc:
                        raise GenerationError(
                            f"unresolved placeholder {', '.join(exc.names)} in clause {cid}"
                        ) from exc
                else:
                    text = substitute(clause.text, values, strict=False)
                    unresolved.update(find_tokens(text))
                items.append(PolicyItem(text=text, origin=cid, kind=clause.kind))
        sections.append(DocumentSection(index=tsec.index, heading=tsec.heading, items=tuple(items)))
    metadata = {
        "generated_at": generated_at,
        "bank_version": session.bank_version,
        "library_version": library.version,
        "template_version": template.version,
        "strict": strict,
        "unresolved": sorted(unresolved),
        "duplicates_collapsed": collapsed,
    }
    return PolicyDocument(metadata=metadata, sections=tuple(sections))


def _prefix_for(kind: str, bold: bool) -> str:
    if kind == "non_compliant":
        return f"**{NON_COMPLIANT_PREFIX}** " if bold else f"{NON_COMPLIANT_PREFIX} "
    if kind == "warning":
        return f"**{WARNING_PREFIX}** " if bold else f"{WARNING_PREFIX} "
    return ""


def _render_plain(doc: PolicyDocument) -> str:
    blocks: list[str] = []
    if doc.metadata.get("generated_at"):
        blocks.append(f"Generated: {doc.metadata['generated_at']}")
    for section in doc.sections:
        blocks.append(f"{section.index}. {section.heading}")
        for item in section.items:
            blocks.append(_prefix_for(item.kind, bold=False) + item.text)
    return "\n\n".join(blocks) + "\n"


def _render_markdown(doc: PolicyDocument) -> str:
    blocks: list[str] = []
    if doc.metadata.get("generated_at"):
        blocks.append(f"*Generated: {doc.metadata['generated_at']}*")
    for section in doc.sections:
        blocks.append(f"## {section.index}. {section.heading}")
        for item in section.items:
            blocks.append(_prefix_for(item.kind, bold=True) + item.text)
    return "\n\n".join(blocks) + "\n"


_HTML_CLASS = {"standard": "clause", "non_compliant": "non-compliant", "warning": "warning"}


def _render_html(doc: PolicyDocument) -> str:
    lines = [
        "<!DOCTYPE html>",
        '<html lang="en">',
        '<head><meta charset="utf-8"><title>Privacy Policy</title></head>',
        "<body>",
    ]
    if doc.metadata.get("generated_at"):
        lines.append(f"<p class=\"meta\">Generated: {_html.escape(str(doc.metadata['generated_at']))}</p>")
    for section in doc.sections:
        lines.append(f"<h2>{section.index}. {_html.escape(section.heading)}</h2>")
        for item in section.items:
            marker = ""
            if item.kind == "non_compliant":
                marker = f"<strong>{NON_COMPLIANT_PREFIX}</strong> "
            elif item.kind == "warning":
                marker = f"<strong>{WARNING_PREFIX}</strong> "
            text = _html.escape(item.text).replace("\n", "<br>")
            lines.append(f'<p class="{_HTML_CLASS[item.kind]}">{marker}{text}</p>')
    lines.append("</body>")
    lines.append("</html>")
    return "\n".join(lines) + "\n"


def render(doc: PolicyDocument, fmt: str = "plain") -> bytes:
    """Deterministic rendering; same document, same bytes."""
    if fmt == "plain":
        text = _render_plain(doc)
    elif fmt == "markdown":
        text = _render_markdown(doc)
    elif fmt == "html":
        text = _render_html(doc)
    else:
        raise GenerationError(f"unknown render format {fmt!r}; choose from {RENDER_FORMATS}")
    return text.encode("utf-8")
