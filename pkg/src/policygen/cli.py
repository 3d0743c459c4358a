"""Command line entry point.

Exit codes for policy-producing commands: 0 on success, 2 when the
policy was generated but contains non-compliant items (CI can gate on
compliance), 1 on any error. Lint commands exit 1 when errors are found;
warnings alone keep exit 0.
"""

from __future__ import annotations

import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from . import data as _data
from .bank import lint_bank, load_bank_file
from .completeness import evaluate_completeness, load_criteria
from .coverage import evaluate_coverage, load_checklist
from .engine import (
    COMPLETED,
    Session,
    amend_answer,
    start_session,
    submit_answer,
)
from .errors import PolicygenError
from .generator import generate, load_template_file, render
from .issues import errors_only
from .library import lint_library, load_library_file
from .presence import load_presence
from .readability import fre_score

_FORMAT_ALIASES = {"plain": "plain", "md": "markdown", "markdown": "markdown", "html": "html"}


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _load_artifacts(bank_path, library_path, template_path):
    try:
        library = load_library_file(library_path or _data.default_library_path())
        bank = load_bank_file(bank_path or _data.default_bank_path())
        template = load_template_file(template_path or _data.default_template_path(), bank)
    except PolicygenError as exc:
        _fail(str(exc))
    return bank, library, template


def _common_options(fn):
    fn = click.option("--bank", "bank_path", envvar="POLICYGEN_BANK", type=click.Path(), default=None, help="Question bank JSON (default: packaged seed bank).")(fn)
    fn = click.option("--library", "library_path", envvar="POLICYGEN_LIBRARY", type=click.Path(), default=None, help="Clause library JSON (default: packaged library).")(fn)
    fn = click.option("--template", "template_path", envvar="POLICYGEN_TEMPLATE", type=click.Path(), default=None, help="Policy template JSON (default: packaged template).")(fn)
    return fn


@click.group()
@click.version_option(package_name="policygen")
def main():
    """Generate and evaluate GDPR privacy policies."""


def _load_answers_file(path) -> list[dict]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        _fail(f"cannot read answers file: {exc}")
    items = data.get("answers") if isinstance(data, dict) else data
    if not isinstance(items, list):
        _fail("answers file must be a list or {'answers': [...]}")
    for i, item in enumerate(items):
        if not isinstance(item, dict) or "qnum" not in item or "value" not in item:
            _fail(f"answers[{i}] must be an object with qnum and value")
    return items


def _replay_answers(bank, session: Session, items: list[dict]) -> None:
    for item in items:
        qnum = item["qnum"]
        if session.cursor == COMPLETED:
            _fail(f"invalid replay: {qnum} answered after the interview completed")
        if qnum != session.cursor:
            _fail(f"invalid replay: answer for {qnum} but the interview is at {session.cursor}")
        value = item["value"]
        try:
            submit_answer(bank, session, value)
        except PolicygenError as exc:
            _fail(str(exc))


def _write_policy(doc, fmt: str, out_path) -> None:
    payload = render(doc, fmt)
    if out_path == "-":
        sys.stdout.buffer.write(payload)
    else:
        Path(out_path).write_bytes(payload)


def _transcript(session: Session) -> dict:
    answers = []
    for qnum in session.active_qnums():
        answer = session.answers[qnum]
        value = list(answer.value) if isinstance(answer.value, tuple) else answer.value
        answers.append({"qnum": qnum, "value": value})
    return {"bank_version": session.bank_version, "answers": answers}


@main.command()
@_common_options
@click.option("--answers", "answers_path", required=True, type=click.Path(exists=True), help="Answers file to replay.")
@click.option("--out", "out_path", required=True, help="Output file, or - for stdout.")
@click.option("--format", "fmt", default="plain", type=click.Choice(sorted(set(_FORMAT_ALIASES))), help="Render format.")
@click.option("--strict/--lenient", "strict", default=True, help="Strict mode requires a completed interview and resolves every placeholder.")
@click.option("--no-timestamp", is_flag=True, help="Omit the generation timestamp (for byte-stable output).")
def batch(bank_path, library_path, template_path, answers_path, out_path, fmt, strict, no_timestamp):
    """Generate a policy non-interactively from an answers file."""
    bank, library, template = _load_artifacts(bank_path, library_path, template_path)
    items = _load_answers_file(answers_path)
    session = start_session(bank)
    _replay_answers(bank, session, items)
    if strict and session.cursor != COMPLETED:
        _fail(f"interview stopped at {session.cursor}; answers file is incomplete")
    stamp = None if no_timestamp else datetime.now(timezone.utc).isoformat(timespec="seconds")
    try:
        doc = generate(template, session, library, strict=strict, generated_at=stamp)
    except PolicygenError as exc:
        _fail(str(exc))
    _write_policy(doc, _FORMAT_ALIASES[fmt], out_path)
    if doc.has_non_compliant():
        click.echo("policy generated with NON-COMPLIANT items", err=True)
        sys.exit(2)


def _prompt_bool(question) -> str:
    while True:
        raw = click.prompt(f"{question.qnum} [yes/no]", type=str).strip().lower()
        if raw in ("y", "yes"):
            return "YES"
        if raw in ("n", "no"):
            return "NO"
        click.echo("Please answer yes or no (this is a closed question).")


def _prompt_info(question) -> str:
    while True:
        raw = click.prompt(f"{question.qnum}", type=str).strip()
        if raw:
            return raw
        click.echo("An answer is required (free text).")


def _prompt_mtpc(question) -> list[str]:
    for i, option in enumerate(question.options, start=1):
        click.echo(f"  {i}. {option}")
    while True:
        raw = click.prompt(f"{question.qnum} [numbers, comma-separated]", type=str)
        picks: list[str] = []
        try:
            for part in raw.split(","):
                part = part.strip()
                if not part:
                    continue
                index = int(part)
                if not 1 <= index <= len(question.options):
                    raise ValueError
                picks.append(question.options[index - 1])
        except ValueError:
            click.echo(f"Enter numbers between 1 and {len(question.options)}, comma-separated.")
            continue
        if picks:
            return picks
        click.echo("Select at least one option.")


@main.command()
@_common_options
@click.option("--out", "out_path", required=True, help="Policy output file.")
@click.option("--transcript", "transcript_path", default=None, help="Answers transcript path (default: OUT.answers.json).")
@click.option("--answers", "resume_path", default=None, type=click.Path(exists=True), help="Resume from a saved transcript.")
@click.option("--format", "fmt", default="plain", type=click.Choice(sorted(set(_FORMAT_ALIASES))))
@click.option("--no-timestamp", is_flag=True)
def wizard(bank_path, library_path, template_path, out_path, transcript_path, resume_path, fmt, no_timestamp):
    """Run the interview in the terminal, question by question.

    Type :back to change the previous answer and :quit to save the
    transcript and leave (resume later with --answers).
    """
    if not sys.stdin.isatty():
        _fail("wizard needs an interactive terminal; use 'policygen batch --answers FILE' instead")
    bank, library, template = _load_artifacts(bank_path, library_path, template_path)
    transcript_path = transcript_path or f"{out_path}.answers.json"
    session = start_session(bank)
    if resume_path:
        _replay_answers(bank, session, _load_answers_file(resume_path))

    def save_transcript():
        Path(transcript_path).write_text(
            json.dumps(_transcript(session), ensure_ascii=False, indent=2) + "\n",
            encoding="utf-8",
        )

    current_section = None
    while session.cursor != COMPLETED:
        question = bank.questions[session.cursor]
        if question.section != current_section:
            current_section = question.section
            section = bank.sections.get(current_section)
            name = section.name if section else current_section
            click.echo(f"\n--- Section {current_section}: {name} ---")
        click.echo(f"\n{question.text}")
        click.echo("(:back to change the previous answer, :quit to save and exit)")
        peek = click.prompt("answer", type=str, default="", show_default=False).strip()
        if peek == ":quit":
            save_transcript()
            click.echo(f"transcript saved to {transcript_path}; resume with --answers")
            return
        if peek == ":back":
            answered = session.active_qnums()
            if not answered:
                click.echo("Nothing to go back to.")
                continue
            target = bank.questions[answered[-1]]
            click.echo(f"Re-answering {target.qnum}: {target.text}")
            value = _prompt_value(target)
            amend_answer(bank, session, target.qnum, value)
            continue
        if peek:
            # First input line doubles as the answer for BOOL/INFO questions.
            try:
                submit_answer(bank, session, _coerce_inline(question, peek))
                continue
            except PolicygenError as exc:
                click.echo(str(exc))
        value = _prompt_value(question)
        submit_answer(bank, session, value)

    save_transcript()
    stamp = None if no_timestamp else datetime.now(timezone.utc).isoformat(timespec="seconds")
    doc = generate(template, session, library, strict=True, generated_at=stamp)
    _write_policy(doc, _FORMAT_ALIASES[fmt], out_path)
    click.echo(f"policy written to {out_path}; transcript saved to {transcript_path}")
    if doc.has_non_compliant():
        click.echo("policy contains NON-COMPLIANT items", err=True)
        sys.exit(2)


def _coerce_inline(question, raw: str):
    if question.qtype == "BOOL":
        lowered = raw.lower()
        if lowered in ("y", "yes"):
            return "YES"
        if lowered in ("n", "no"):
            return "NO"
        raise PolicygenError(f"{question.qnum} is a closed question: answer yes or no")
    if question.qtype == "INFO":
        return raw
    raise PolicygenError("select options by number")


def _prompt_value(question):
    if question.qtype == "BOOL":
        return _prompt_bool(question)
    if question.qtype == "INFO":
        return _prompt_info(question)
    return _prompt_mtpc(question)


@main.command("lint-bank")
@click.option("--bank", "bank_path", envvar="POLICYGEN_BANK", type=click.Path(), default=None)
def lint_bank_cmd(bank_path):
    """Validate a question bank and report every issue."""
    path = bank_path or _data.default_bank_path()
    try:
        raw = Path(str(path)).read_bytes() if bank_path else path.read_bytes()
    except OSError as exc:
        _fail(f"cannot read bank: {exc}")
    try:
        issues = lint_bank(raw)
    except PolicygenError as exc:
        _fail(str(exc))
    for issue in issues:
        click.echo(str(issue))
    bad = errors_only(issues)
    click.echo(f"{len(bad)} error(s), {len(issues) - len(bad)} warning(s)")
    sys.exit(1 if bad else 0)


@main.command("lint-library")
@click.option("--library", "library_path", envvar="POLICYGEN_LIBRARY", type=click.Path(), default=None)
@click.option("--bank", "bank_path", envvar="POLICYGEN_BANK", type=click.Path(), default=None, help="Cross-check clause placeholders against this bank.")
def lint_library_cmd(library_path, bank_path):
    """Validate a clause library and report lint findings."""
    try:
        library = load_library_file(library_path or _data.default_library_path())
        bank = load_bank_file(bank_path or _data.default_bank_path())
    except PolicygenError as exc:
        _fail(str(exc))
    issues = lint_library(library, bank)
    for issue in issues:
        click.echo(str(issue))
    bad = errors_only(issues)
    click.echo(f"{len(bad)} error(s), {len(issues) - len(bad)} warning(s)")
    sys.exit(1 if bad else 0)


@main.group(name="eval")
def eval_group():
    """Evaluate policies: readability, completeness, coverage."""


@eval_group.command("readability")
@click.argument("text_file", type=click.Path(exists=True))
@click.option("--wpm", default=275.0, show_default=True, help="Words per minute for the reading-time estimate.")
@click.option("--json", "as_json", is_flag=True, help="Emit the report as JSON.")
def eval_readability(text_file, wpm, as_json):
    """Score a text file with the reading-ease formula."""
    text = Path(text_file).read_text(encoding="utf-8")
    try:
        report = fre_score(text, words_per_minute=wpm)
    except PolicygenError as exc:
        _fail(str(exc))
    if as_json:
        click.echo(json.dumps(report.to_dict(), indent=2))
        return
    minutes, seconds = divmod(round(report.reading_time_seconds), 60)
    click.echo(f"words         {report.words}")
    click.echo(f"sentences     {report.sentences}")
    click.echo(f"syllables     {report.syllables}")
    click.echo(f"ASL           {report.asl:.2f}")
    click.echo(f"ASW           {report.asw:.2f}")
    click.echo(f"FRE score     {report.fre:.1f}")
    click.echo(f"reading time  {minutes}m {seconds}s")


@eval_group.command("completeness")
@click.option("--presence", "presence_path", required=True, type=click.Path(exists=True))
@click.option("--criteria", "criteria_path", default=None, type=click.Path(exists=True))
@click.option("--library", "library_path", envvar="POLICYGEN_LIBRARY", type=click.Path(), default=None)
@click.option("--json", "as_json", is_flag=True)
def eval_completeness(presence_path, criteria_path, library_path, as_json):
    """Rate completeness criteria against a presence file."""
    try:
        library = load_library_file(library_path or _data.default_library_path())
        criteria_raw = Path(criteria_path).read_bytes() if criteria_path else _data.default_criteria_path().read_bytes()
        criteria, facts = load_criteria(criteria_raw, library.taxonomy)
        presence = load_presence(Path(presence_path).read_bytes(), library.taxonomy, facts)
    except PolicygenError as exc:
        _fail(str(exc))
    report = evaluate_completeness(criteria, presence)
    if as_json:
        click.echo(json.dumps(report.to_dict(), indent=2))
    else:
        for criterion in criteria:
            click.echo(f"{criterion.id:6s} {report.ratings[criterion.id]}")
        click.echo(f"complete: {'yes' if report.complete else 'no'}")
    sys.exit(0 if report.complete else 2)


@eval_group.command("coverage")
@click.option("--presence", "presence_path", required=True, type=click.Path(exists=True))
@click.option("--checklist", "checklist_path", default=None, type=click.Path(exists=True))
@click.option("--review-flags", "review_flags", default="", help="Comma-separated topic ids needing policymaker review.")
@click.option("--library", "library_path", envvar="POLICYGEN_LIBRARY", type=click.Path(), default=None)
@click.option("--json", "as_json", is_flag=True)
def eval_coverage(presence_path, checklist_path, review_flags, library_path, as_json):
    """Rate coverage checklist topics against a presence file."""
    try:
        library = load_library_file(library_path or _data.default_library_path())
        checklist_raw = Path(checklist_path).read_bytes() if checklist_path else _data.default_checklist_path().read_bytes()
        checklist = load_checklist(checklist_raw, library.taxonomy)
        presence = load_presence(Path(presence_path).read_bytes(), library.taxonomy)
    except PolicygenError as exc:
        _fail(str(exc))
    flags = [f.strip() for f in review_flags.split(",") if f.strip()]
    report = evaluate_coverage(checklist, presence, flags)
    if as_json:
        click.echo(json.dumps(report.to_dict(), indent=2))
    else:
        for topic in checklist:
            click.echo(f"{report.ratings[topic.id]}  {topic.id} ({topic.description})")
        click.echo(f"covered: {report.covered_count}/{len(checklist)}")


@main.command()
@_common_options
@click.option("--listen", envvar="POLICYGEN_LISTEN", default="127.0.0.1:8000", show_default=True, help="host:port to bind.")
@click.option("--store", "store_dir", envvar="POLICYGEN_STORE", default="sessions", show_default=True, help="Directory for session snapshots.")
@click.option("--criteria", "criteria_path", type=click.Path(), default=None)
@click.option("--checklist", "checklist_path", type=click.Path(), default=None)
@click.option("--fact-rules", "fact_rules_path", type=click.Path(), default=None)
@click.option("--ui-dir", "ui_dir", type=click.Path(exists=True, file_okay=False), default=None, help="Static UI bundle to serve at /ui.")
def serve(bank_path, library_path, template_path, listen, store_dir, criteria_path, checklist_path, fact_rules_path, ui_dir):
    """Run the HTTP service."""
    import uvicorn

    from .service import ServiceConfig, create_app

    host, _, port = listen.rpartition(":")
    if not host or not port.isdigit():
        _fail("--listen must look like HOST:PORT")
    config = ServiceConfig(
        bank_path=bank_path,
        library_path=library_path,
        template_path=template_path,
        store_dir=store_dir,
        criteria_path=criteria_path,
        checklist_path=checklist_path,
        fact_rules_path=fact_rules_path,
        ui_dir=ui_dir,
    )
    try:
        app = create_app(config)
    except PolicygenError as exc:
        _fail(str(exc))
    uvicorn.run(app, host=host, port=int(port), log_level="info")


if __name__ == "__main__":
    main()
