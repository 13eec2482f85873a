"""Deterministic text normalization, sentence splitting, tokenization,
stopword flagging and stemming shared by every other module.

All functions are pure; identical input bytes give identical output on every
run and platform. Offsets in a ``TokenizedText`` refer to the normalized
text stored alongside the tokens.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

from .porter import stem as porter_stem
from .stopwords import STOPWORDS

# alphanumeric runs joined by internal hyphens, apostrophes or abbreviation
# periods ("well-known", "don't", "u.s.a")
_TOKEN_RE = re.compile(r"[^\W_]+(?:[-'.][^\W_]+)*", re.UNICODE)

_TERMINALS = set(".!?")


@dataclass(frozen=True)
class Token:
    surface: str
    stem: str
    char_offset: int
    is_stopword: bool
    orig: str = ""

    def __post_init__(self):
        if not self.orig:
            object.__setattr__(self, "orig", self.surface)


@dataclass(frozen=True)
class TokenizedText:
    """Sentence-segmented token stream plus the normalized text it indexes."""

    text: str
    sentences: tuple[tuple[Token, ...], ...] = field(default_factory=tuple)

    def tokens(self) -> list[Token]:
        return [t for sent in self.sentences for t in sent]

    def stems(self) -> list[str]:
        return [t.stem for t in self.tokens()]

    def content_stems(self) -> list[str]:
        return [t.stem for t in self.tokens() if not t.is_stopword]

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens()]


def _strip_controls(text: str) -> str:
    return "".join(
        ch
        for ch in text
        if ch in "\t\n\r\v\f" or not unicodedata.category(ch).startswith("C")
    )


def normalize(raw: str) -> str:
    """Canonical-compose, lowercase, strip controls, collapse whitespace."""
    text = unicodedata.normalize("NFC", raw)
    text = unicodedata.normalize("NFC", text.lower())
    text = _strip_controls(text)
    return " ".join(text.split())


def normalize_keep_case(raw: str) -> str:
    """The normalize() pipeline without lowercasing, for capitalization cues."""
    text = unicodedata.normalize("NFC", raw)
    text = _strip_controls(text)
    return " ".join(text.split())


def stem_surface(surface: str) -> str:
    """Stem one token surface; possessive 's is dropped first."""
    base = surface[:-2] if surface.endswith("'s") else surface
    return porter_stem(base)


def tokenize(text: str, case_text: str | None = None) -> TokenizedText:
    """Tokenize normalized text into sentences of Token records.

    Sentences split on terminal punctuation followed by a space or end of
    text; the trailing period of a dotted abbreviation ("u.s.a.") is not a
    sentence boundary. When ``case_text`` is a same-length original-case
    rendering of ``text``, tokens carry their original-case surfaces.
    """
    has_case = case_text is not None and len(case_text) == len(text)
    matches = list(_TOKEN_RE.finditer(text))
    sentences: list[tuple[Token, ...]] = []
    current: list[Token] = []
    for i, m in enumerate(matches):
        surface = m.group()
        orig = case_text[m.start() : m.end()] if has_case else surface
        current.append(
            Token(
                surface=surface,
                stem=stem_surface(surface),
                char_offset=m.start(),
                is_stopword=surface in STOPWORDS,
                orig=orig,
            )
        )
        sep_start = m.end()
        sep_end = matches[i + 1].start() if i + 1 < len(matches) else len(text)
        sep = text[sep_start:sep_end]
        if "." in surface and sep.startswith("."):
            sep = sep[1:]  # abbreviation terminator, not a boundary
        if any(ch in _TERMINALS for ch in sep) and current:
            sentences.append(tuple(current))
            current = []
    if current:
        sentences.append(tuple(current))
    return TokenizedText(text=text, sentences=tuple(sentences))


def preprocess(raw: str) -> TokenizedText:
    """normalize + tokenize, retaining a parallel original-case view."""
    case_text = normalize_keep_case(raw)
    norm_text = normalize(raw)
    if len(case_text) == len(norm_text):
        return tokenize(norm_text, case_text)
    return tokenize(norm_text)
