"""Placeholder token grammar and substitution.

A placeholder is a bracketed name embedded in clause text, e.g.
``[CONTROLLER'S REGISTER NUMBER]``. The name consists of one or more of:
uppercase A-Z, digits, space, apostrophe, hyphen and dot. Within clause
text every ``[`` must open a well-formed token; a stray ``]`` on its own
is plain text.
"""

from __future__ import annotations

import re
from typing import Mapping

from .errors import PlaceholderError, UnresolvedPlaceholderError

_NAME_RE = re.compile(r"[A-Z0-9 '.\-]+\Z")

#: Lenient pattern matching any well-formed placeholder token. Used to
#: scan rendered documents for leftovers; does not validate bad brackets.
TOKEN_RE = re.compile(r"\[([A-Z0-9 '.\-]+)\]")


def is_valid_name(name: str) -> bool:
    """True if *name* is a legal placeholder name (grammar above)."""
    return bool(_NAME_RE.match(name)) if name else False


def extract_placeholders(text: str) -> set[str]:
    """Return the distinct placeholder names appearing in *text*.

    Raises PlaceholderError for an unclosed ``[`` or a bracketed span
    whose content violates the name grammar.
    """
    names: set[str] = set()
    i = 0
    while True:
        start = text.find("[", i)
        if start == -1:
            return names
        end = text.find("]", start + 1)
        if end == -1:
            raise PlaceholderError(
                f"malformed placeholder: unclosed '[' at index {start}"
            )
        name = text[start + 1 : end]
        if not is_valid_name(name):
            raise PlaceholderError(
                f"malformed placeholder {text[start:end + 1]!r} at index {start}"
            )
        names.add(name)
        i = end + 1


def find_tokens(text: str) -> list[str]:
    """Names of well-formed tokens left in *text*, without validating it."""
    return TOKEN_RE.findall(text)


def substitute(text: str, values: Mapping[str, str], strict: bool = False) -> str:
    """Replace every placeholder that has a value in *values*, verbatim.

    Replacement is a single pass: substituted values are never rescanned.
    In strict mode any placeholder without a value raises
    UnresolvedPlaceholderError; in lenient mode the token is left in place.
    """
    names = extract_placeholders(text)
    if strict:
        missing = [n for n in names if n not in values]
        if missing:
            raise UnresolvedPlaceholderError(missing)
    if not names:
        return text
    return TOKEN_RE.sub(lambda m: values.get(m.group(1), m.group(0)), text)
