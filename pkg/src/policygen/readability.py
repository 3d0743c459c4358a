"""Readability metrics: tokenization, syllable counting, reading ease.

The score is 206.835 - 1.015*ASL - 84.6*ASW on a 100-point scale, where
ASL is words per sentence and ASW is syllables per word. It is reported
unclamped.

Tokenization rules (deterministic, documented here and in the README):

  * Lines are processed independently; the end of a non-empty line always
    closes the open sentence, so bullets and headings count as sentences.
  * Within a line, a sentence ends at '.', '!' or '?' (closing quotes,
    brackets and parentheses may follow) when the next token starts with
    an uppercase letter or a digit. A '.' does not end a sentence when
    the token before it is on the abbreviation list below.
  * Words are whitespace-separated tokens containing at least one letter
    or digit; punctuation stays attached and is ignored by the counters.

Syllable rules (letters only; the count is never below 1):

  * Count maximal runs of vowels a e i o u y; 'y' is a consonant at the
    start of a word.
  * A final 'e' that forms its own run is silent (subtract one) unless it
    ends a consonant+'le' pair ("table") or it is the only run ("the").

Tokens without letters (numbers) count as one syllable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EvaluationError

FRE_BASE = 206.835
FRE_ASL_WEIGHT = 1.015
FRE_ASW_WEIGHT = 84.6

DEFAULT_WORDS_PER_MINUTE = 275.0

ABBREVIATIONS = frozenset(
    {
        "e.g", "i.e", "etc", "cf", "vs", "al",
        "mr", "mrs", "ms", "dr", "prof", "rev", "hon", "jr", "sr", "st",
        "inc", "ltd", "co", "corp", "dept", "est",
        "no", "art", "fig", "sec", "para", "approx",
        "u.s", "u.k", "e.u",
    }
)

_CLOSERS = "\"')]}»’”"
_TERMINATORS = ".!?"
_VOWELS = "aeiouy"


@dataclass(frozen=True)
class Segmentation:
    sentences: list[str]
    words: list[str]


def _is_word(token: str) -> bool:
    return any(ch.isalnum() for ch in token)


def _boundary_after(token: str, next_token: str | None) -> bool:
    core = token.rstrip(_CLOSERS)
    if not core or core[-1] not in _TERMINATORS:
        return False
    if core[-1] == ".":
        base = core.rstrip(".").lstrip("(\"'[{").lower()
        if base in ABBREVIATIONS:
            return False
    if next_token is None:
        return True
    lead = next_token.lstrip("(\"'[{«‘“")
    return bool(lead) and (lead[0].isupper() or lead[0].isdigit())


def segment(text: str) -> Segmentation:
    """Split *text* into sentences and word tokens per the module rules."""
    if not isinstance(text, str) or not text.strip():
        raise EvaluationError("cannot segment empty text")
    sentences: list[str] = []
    words: list[str] = []
    for line in text.splitlines():
        tokens = line.split()
        if not tokens:
            continue
        current: list[str] = []
        for i, token in enumerate(tokens):
            current.append(token)
            nxt = tokens[i + 1] if i + 1 < len(tokens) else None
            if nxt is not None and _boundary_after(token, nxt):
                sentences.append(" ".join(current))
                current = []
        if current:
            sentences.append(" ".join(current))
    for sentence in sentences:
        words.extend(t for t in sentence.split() if _is_word(t))
    return Segmentation(sentences=sentences, words=words)


def count_syllables(word: str) -> int:
    """Heuristic syllable count for one word; requires at least one letter."""
    letters = "".join(ch for ch in word.lower() if ch.isalpha())
    if not letters:
        raise EvaluationError(f"word {word!r} contains no letters")
    groups = 0
    prev_vowel = False
    for i, ch in enumerate(letters):
        is_vowel = ch in _VOWELS and not (ch == "y" and i == 0)
        if is_vowel and not prev_vowel:
            groups += 1
        prev_vowel = is_vowel
    if groups > 1 and letters.endswith("e") and letters[-2] not in _VOWELS:
        consonant_le = (
            len(letters) >= 3 and letters.endswith("le") and letters[-3] not in _VOWELS
        )
        if not consonant_le:
            groups -= 1
    return max(groups, 1)


@dataclass(frozen=True)
class ReadabilityReport:
    words: int
    sentences: int
    syllables: int
    asl: float
    asw: float
    fre: float
    reading_time_seconds: float

    def to_dict(self) -> dict:
        return {
            "words": self.words,
            "sentences": self.sentences,
            "syllables": self.syllables,
            "asl": self.asl,
            "asw": self.asw,
            "fre": self.fre,
            "reading_time_seconds": self.reading_time_seconds,
        }


def fre_from_counts(words: int, sentences: int, syllables: int) -> float:
    """The reading-ease formula over raw counts; unclamped."""
    if words < 1 or sentences < 1:
        raise EvaluationError("need at least one word and one sentence")
    asl = words / sentences
    asw = syllables / words
    return FRE_BASE - FRE_ASL_WEIGHT * asl - FRE_ASW_WEIGHT * asw


def fre_score(text: str, words_per_minute: float = DEFAULT_WORDS_PER_MINUTE) -> ReadabilityReport:
    """Full readability report for *text*."""
    seg = segment(text)
    if not seg.words:
        raise EvaluationError("text contains no words")
    syllables = 0
    for token in seg.words:
        if any(ch.isalpha() for ch in token):
            syllables += count_syllables(token)
        else:
            syllables += 1
    word_count = len(seg.words)
    sentence_count = len(seg.sentences)
    asl = word_count / sentence_count
    asw = syllables / word_count
    return ReadabilityReport(
        words=word_count,
        sentences=sentence_count,
        syllables=syllables,
        asl=asl,
        asw=asw,
        fre=FRE_BASE - FRE_ASL_WEIGHT * asl - FRE_ASW_WEIGHT * asw,
        reading_time_seconds=word_count / words_per_minute * 60.0,
    )
