"""Interview engine: session state, answer capture and flow replay.

A session keeps the full answer history. After every mutation the trail,
cursor, captured placeholders and selected clauses are recomputed by
replaying the history from the bank's entry question, so the derived
state is always exactly the path induced by the current answers. Answers
on questions that fall off the trail stay in history (flipping a branch
back restores them) but contribute nothing to the outputs.

Answer shapes: BOOL takes "YES"/"NO"; INFO takes non-empty free text
(stored trimmed); MTPC takes a non-empty subset of the declared options,
canonicalized to declaration order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

from .bank import END, ON_ANSWERED, ON_OPTION, Question, QuestionBank
from .errors import AnswerError, SessionStateError, SnapshotError
from .placeholders import find_tokens

COMPLETED = "COMPLETED"

AnswerValue = Union[str, tuple[str, ...]]

# Selected MTPC options render as a bulleted list after the owning clause
# sentence; "comma" joins them inline instead.
MTPC_STYLES = ("bullets", "comma")


def join_mtpc(options: Sequence[str], style: str = "bullets") -> str:
    if style == "comma":
        return ", ".join(options)
    if style == "bullets":
        return "\n" + "\n".join(f"- {opt}" for opt in options)
    raise ValueError(f"unknown MTPC join style {style!r}")


@dataclass(frozen=True)
class Answer:
    qnum: str
    value: AnswerValue
    answered_at: int  # monotonic sequence number, not wall clock


@dataclass
class Session:
    bank_version: str
    answers: dict[str, Answer] = field(default_factory=dict)
    trail: list[str] = field(default_factory=list)
    cursor: str = ""
    placeholder_values: dict[str, str] = field(default_factory=dict)
    selected_clauses: list[str] = field(default_factory=list)
    seq: int = 0
    mtpc_style: str = "bullets"

    @property
    def completed(self) -> bool:
        return self.cursor == COMPLETED

    def active_qnums(self) -> list[str]:
        """Answered questions on the current trail, in trail order."""
        return [q for q in self.trail if q in self.answers]


@dataclass(frozen=True)
class EngineOutputs:
    placeholders: dict[str, str]
    clauses: list[str]


def normalize_value(question: Question, value) -> AnswerValue:
    """Validate and canonicalize an answer for *question*.

    Raises AnswerError on shape mismatch (wrong type, empty INFO text,
    MTPC selection outside the declared options).
    """
    if question.qtype == "BOOL":
        if isinstance(value, bool):
            value = "YES" if value else "NO"
        if not isinstance(value, str) or value.strip().upper() not in ("YES", "NO"):
            raise AnswerError(f"{question.qnum} is a closed question: answer YES or NO")
        return value.strip().upper()
    if question.qtype == "INFO":
        if isinstance(value, bool) or not isinstance(value, str):
            raise AnswerError(f"{question.qnum} is an open question: answer with free text")
        text = value.strip()
        if not text:
            raise AnswerError(f"{question.qnum}: answer text must not be empty")
        # A bare yes/no here is a mis-routed closed-question answer.
        if text.upper() in ("YES", "NO"):
            raise AnswerError(
                f"{question.qnum} is an open question; {text!r} looks like a closed-question answer"
            )
        # Bracketed tokens would read as unresolved placeholders in the
        # generated document; strict documents must contain none.
        if find_tokens(text):
            raise AnswerError(
                f"{question.qnum}: answer must not contain a bracketed placeholder token"
            )
        return text
    if question.qtype == "MTPC":
        if isinstance(value, str) or not isinstance(value, (list, tuple, set, frozenset)):
            raise AnswerError(f"{question.qnum} is a multiple choice question: answer with a list of options")
        chosen = set(value)
        if not chosen:
            raise AnswerError(f"{question.qnum}: select at least one option")
        unknown = chosen - set(question.options)
        if unknown:
            raise AnswerError(
                f"{question.qnum}: {sorted(unknown)!r} not among the declared options"
            )
        return tuple(opt for opt in question.options if opt in chosen)
    raise AnswerError(f"{question.qnum}: unsupported question type {question.qtype!r}")


def _flow_target(question: Question, value: AnswerValue) -> str:
    if question.qtype == "BOOL":
        return question.flow[value]  # value is "YES" or "NO"
    return question.flow["ANY"]


def _binding_matches(binding, question: Question, value: AnswerValue) -> bool:
    if question.qtype == "BOOL":
        return binding.on == value
    if binding.on == ON_ANSWERED:
        return True
    if binding.on == ON_OPTION and question.qtype == "MTPC":
        return binding.option in value
    return False


@dataclass(frozen=True)
class ReplayState:
    trail: tuple[str, ...]
    cursor: str
    placeholders: dict[str, str]
    clauses: tuple[str, ...]


def replay(bank: QuestionBank, answers: Mapping[str, Answer], mtpc_style: str = "bullets") -> ReplayState:
    """Walk the flow from entry, consuming answers from history.

    Stops at the first unanswered question (cursor) or at END (COMPLETED).
    Placeholders and clauses accumulate in trail order, bindings in
    declaration order.
    """
    trail: list[str] = [bank.entry]
    placeholders: dict[str, str] = {}
    clauses: list[str] = []
    current = bank.entry
    visited: set[str] = set()
    while True:
        if current in visited:  # defensive: load_bank already rejects cycles
            raise SessionStateError(f"flow revisits {current}; bank has a cycle")
        visited.add(current)
        question = bank.questions[current]
        answer = answers.get(current)
        if answer is None:
            return ReplayState(tuple(trail), current, placeholders, tuple(clauses))
        if question.placeholder is not None:
            if question.qtype == "MTPC":
                placeholders[question.placeholder] = join_mtpc(answer.value, mtpc_style)
            else:
                placeholders[question.placeholder] = answer.value
        for binding in question.bindings:
            if _binding_matches(binding, question, answer.value):
                clauses.extend(binding.clauses)
        target = _flow_target(question, answer.value)
        if target == END:
            return ReplayState(tuple(trail), COMPLETED, placeholders, tuple(clauses))
        trail.append(target)
        current = target


def _refresh(bank: QuestionBank, session: Session) -> None:
    state = replay(bank, session.answers, session.mtpc_style)
    session.trail = list(state.trail)
    session.cursor = state.cursor
    session.placeholder_values = dict(state.placeholders)
    session.selected_clauses = list(state.clauses)


def start_session(bank: QuestionBank) -> Session:
    """Fresh session positioned at the bank's entry question."""
    session = Session(bank_version=bank.version)
    _refresh(bank, session)
    return session


def current_question(bank: QuestionBank, session: Session) -> Question:
    if session.completed:
        raise SessionStateError("session is already completed")
    return bank.questions[session.cursor]


def submit_answer(bank: QuestionBank, session: Session, value) -> Union[Question, str]:
    """Answer the cursor question; returns the next Question or COMPLETED.

    Previously answered questions further along the branch are consumed
    during replay, so the cursor can advance past them.
    """
    question = current_question(bank, session)
    canonical = normalize_value(question, value)
    session.answers[question.qnum] = Answer(
        qnum=question.qnum, value=canonical, answered_at=session.seq
    )
    session.seq += 1
    _refresh(bank, session)
    if session.completed:
        return COMPLETED
    return bank.questions[session.cursor]


def amend_answer(bank: QuestionBank, session: Session, qnum: str, value) -> Session:
    """Replace an existing answer and replay the flow from entry.

    Amending to the identical canonical value leaves the session unchanged
    field-wise (no new sequence number).
    """
    if qnum not in session.answers:
        raise SessionStateError(f"{qnum} was never answered")
    question = bank.question(qnum)
    canonical = normalize_value(question, value)
    if session.answers[qnum].value == canonical:
        return session
    session.answers[qnum] = Answer(qnum=qnum, value=canonical, answered_at=session.seq)
    session.seq += 1
    _refresh(bank, session)
    return session


def active_outputs(session: Session) -> EngineOutputs:
    """Placeholders and clause ids contributed by answers on the trail."""
    return EngineOutputs(
        placeholders=dict(session.placeholder_values),
        clauses=list(session.selected_clauses),
    )


SNAPSHOT_SCHEMA = 1


def session_to_dict(session: Session) -> dict:
    return {
        "schema": SNAPSHOT_SCHEMA,
        "bank_version": session.bank_version,
        "mtpc_style": session.mtpc_style,
        "seq": session.seq,
        "answers": {
            qnum: {
                "value": list(a.value) if isinstance(a.value, tuple) else a.value,
                "answered_at": a.answered_at,
            }
            for qnum, a in session.answers.items()
        },
        "trail": list(session.trail),
        "cursor": session.cursor,
        "placeholder_values": dict(session.placeholder_values),
        "selected_clauses": list(session.selected_clauses),
    }


def serialize_session(session: Session) -> bytes:
    """Stable byte form: sorted keys, no whitespace variance."""
    return json.dumps(
        session_to_dict(session), ensure_ascii=False, sort_keys=True, separators=(",", ":")
    ).encode("utf-8")


def session_from_dict(bank: QuestionBank, data: Mapping, verify: bool = True) -> Session:
    """Rebuild a session from a snapshot; re-verifies replay equivalence.

    Fails closed: any shape problem or divergence between the stored
    derived state and a fresh replay raises SnapshotError.
    """
    try:
        if data.get("schema") != SNAPSHOT_SCHEMA:
            raise SnapshotError(f"unsupported snapshot schema {data.get('schema')!r}")
        answers: dict[str, Answer] = {}
        raw_answers = data["answers"]
        for qnum in sorted(raw_answers, key=lambda q: raw_answers[q]["answered_at"]):
            raw = raw_answers[qnum]
            value = raw["value"]
            if isinstance(value, list):
                value = tuple(value)
            answers[qnum] = Answer(qnum=qnum, value=value, answered_at=int(raw["answered_at"]))
        session = Session(
            bank_version=str(data["bank_version"]),
            answers=answers,
            trail=list(data["trail"]),
            cursor=str(data["cursor"]),
            placeholder_values=dict(data["placeholder_values"]),
            selected_clauses=list(data["selected_clauses"]),
            seq=int(data["seq"]),
            mtpc_style=str(data.get("mtpc_style", "bullets")),
        )
    except SnapshotError:
        raise
    except Exception as exc:
        raise SnapshotError(f"snapshot is malformed: {exc}") from exc
    if verify:
        if session.bank_version != bank.version:
            raise SnapshotError(
                f"snapshot was taken against bank {session.bank_version!r}, not {bank.version!r}"
            )
        for qnum, answer in session.answers.items():
            if qnum not in bank.questions:
                raise SnapshotError(f"snapshot answers unknown question {qnum}")
            if normalize_value(bank.questions[qnum], answer.value) != answer.value:
                raise SnapshotError(f"snapshot answer for {qnum} is not canonical")
        state = replay(bank, session.answers, session.mtpc_style)
        if (
            list(state.trail) != session.trail
            or state.cursor != session.cursor
            or dict(state.placeholders) != session.placeholder_values
            or list(state.clauses) != session.selected_clauses
        ):
            raise SnapshotError("snapshot derived state does not match replay")
    return session


def load_session(bank: QuestionBank, raw: Union[bytes, str]) -> Session:
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SnapshotError(f"snapshot is not valid JSON: {exc}") from exc
    if not isinstance(data, Mapping):
        raise SnapshotError("snapshot must be a JSON object")
    return session_from_dict(bank, data)
