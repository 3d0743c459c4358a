"""Template slot notation.

A slot places one question's output in the policy template. The string
form is arrow-separated inside brackets:

    [Q166-INFO→[CONTROLLER'S REGISTER NUMBER]→C4→Q3]
    [Q88-BOOL.NO→Q93]
    [Q89-MTPC→[PD TIME STORED CRITERIA]→Q90]

Head: question number, dash, question type; BOOL carries the answer
selector (.YES or .NO). Optional middle segments: a bracketed placeholder
name (INFO/MTPC only), then a comma-separated clause id list. The last
segment is the next question or END. ASCII ``->`` is accepted on input;
the canonical form uses ``→``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .errors import SlotError
from .placeholders import is_valid_name

ARROW = "→"
_HEAD_RE = re.compile(r"(Q\d+)-([A-Z]+)(?:\.([A-Z]+))?\Z")
_QNUM_RE = re.compile(r"Q\d+\Z")
_CLAUSE_ID_RE = re.compile(r"[A-Z][A-Z0-9_-]*\Z")

_QTYPES = ("BOOL", "INFO", "MTPC")
SELECTOR_ANY = "ANY"


@dataclass(frozen=True)
class TemplateSlot:
    qnum: str
    qtype: str
    selector: str  # YES | NO | ANY
    placeholder: Optional[str]
    clauses: tuple[str, ...]
    target: str  # next qnum or END


def parse_slot(notation: str) -> TemplateSlot:
    """Parse a notation string; raises SlotError on any malformation."""
    if not isinstance(notation, str):
        raise SlotError("slot notation must be a string")
    s = notation.strip().replace("->", ARROW)
    if len(s) < 2 or not s.startswith("[") or not s.endswith("]"):
        raise SlotError(f"slot must be bracketed: {notation!r}")
    segments = [seg.strip() for seg in s[1:-1].split(ARROW)]
    if len(segments) < 2:
        raise SlotError(f"missing arrow segment in {notation!r}")
    head, *middle, target = segments

    m = _HEAD_RE.match(head)
    if not m:
        raise SlotError(f"malformed slot head {head!r}")
    qnum, qtype, selector = m.group(1), m.group(2), m.group(3)
    if qtype not in _QTYPES:
        raise SlotError(f"unknown question type {qtype}")
    if qtype == "BOOL":
        if selector not in ("YES", "NO"):
            raise SlotError(f"BOOL slot {qnum} requires a .YES or .NO selector")
    else:
        if selector is not None:
            raise SlotError(f"{qtype} slot {qnum} must not carry a selector")
        selector = SELECTOR_ANY

    placeholder: Optional[str] = None
    clauses: tuple[str, ...] = ()
    for i, seg in enumerate(middle):
        if not seg:
            raise SlotError(f"empty segment in {notation!r}")
        if seg.startswith("["):
            if not seg.endswith("]"):
                raise SlotError(f"malformed placeholder segment {seg!r}")
            name = seg[1:-1]
            if not is_valid_name(name):
                raise SlotError(f"malformed placeholder name {name!r}")
            if placeholder is not None or i != 0:
                raise SlotError(f"placeholder segment misplaced in {notation!r}")
            if qtype == "BOOL":
                raise SlotError(f"BOOL slot {qnum} must not carry a placeholder")
            placeholder = name
        else:
            if clauses:
                raise SlotError(f"too many segments in {notation!r}")
            ids = tuple(part.strip() for part in seg.split(","))
            for cid in ids:
                if cid == "END" or not _CLAUSE_ID_RE.match(cid):
                    raise SlotError(f"bad clause id {cid!r} in {notation!r}")
            clauses = ids

    if target != "END" and not _QNUM_RE.match(target):
        raise SlotError(f"bad flow target {target!r} in {notation!r}")

    return TemplateSlot(
        qnum=qnum,
        qtype=qtype,
        selector=selector,
        placeholder=placeholder,
        clauses=clauses,
        target=target,
    )


def serialize_slot(slot: TemplateSlot) -> str:
    """Canonical notation string; parse(serialize(s)) == s."""
    head = f"{slot.qnum}-{slot.qtype}"
    if slot.qtype == "BOOL":
        head += f".{slot.selector}"
    parts = [head]
    if slot.placeholder is not None:
        parts.append(f"[{slot.placeholder}]")
    if slot.clauses:
        parts.append(",".join(slot.clauses))
    parts.append(slot.target)
    return "[" + ARROW.join(parts) + "]"


def normalize_slot(notation: str) -> str:
    return serialize_slot(parse_slot(notation))
