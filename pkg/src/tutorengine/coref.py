"""Rule-based pronoun resolution for student answers.

Pronouns come from a closed lexicon; entity mentions come from ner spans
with gender/number features read off gazetteer annotations (UNKNOWN when
unannotated, and UNKNOWN agrees with anything). Each pronoun is replaced
by the nearest preceding agreeing entity mention within the current plus
two previous sentences. Replacements immediately become candidate
mentions for later pronouns, which is what makes a single pass reach the
fixed point.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ner import EntitySpan, Gazetteer
from .stopwords import STOPWORDS
from .textprep import Token, TokenizedText, stem_surface

PRONOUN = "PRONOUN"
ENTITY = "ENTITY"

# surface -> (gender, number, is_possessive)
PRONOUN_LEXICON = {
    "he": ("MASC", "SING", False),
    "him": ("MASC", "SING", False),
    "his": ("MASC", "SING", True),
    "she": ("FEM", "SING", False),
    "her": ("FEM", "SING", False),
    "hers": ("FEM", "SING", True),
    "it": ("NEUTER", "SING", False),
    "its": ("NEUTER", "SING", True),
    "they": ("UNKNOWN", "PLUR", False),
    "them": ("UNKNOWN", "PLUR", False),
    "their": ("UNKNOWN", "PLUR", True),
    "theirs": ("UNKNOWN", "PLUR", True),
    "this": ("NEUTER", "SING", False),
    "that": ("NEUTER", "SING", False),
    "these": ("NEUTER", "PLUR", False),
    "those": ("NEUTER", "PLUR", False),
}

_DEFAULT_GENDER = {
    "PERSON": "UNKNOWN",
    "LOCATION": "NEUTER",
    "ORGANIZATION": "NEUTER",
    "DATE": "NEUTER",
    "OTHER": "NEUTER",
}

_DEFAULT_NUMBER = {"DATE": "SING"}


@dataclass(frozen=True)
class Mention:
    sentence_index: int
    start: int
    end: int
    kind: str  # PRONOUN or ENTITY
    gender: str
    number: str
    surface: str
    tokens: tuple[str, ...] = ()


def _agree(a: str, b: str) -> bool:
    return a == b or "UNKNOWN" in (a, b)


def agrees(pronoun: Mention, candidate: Mention) -> bool:
    return _agree(pronoun.gender, candidate.gender) and _agree(
        pronoun.number, candidate.number
    )


def pronoun_mention(sentence_index: int, position: int, surface: str) -> Mention:
    gender, number, _ = PRONOUN_LEXICON[surface]
    return Mention(sentence_index, position, position + 1, PRONOUN,
                   gender, number, surface, (surface,))


def entity_mention(text: TokenizedText, span: EntitySpan,
                   gazetteer: Gazetteer | None = None) -> Mention:
    sentence = text.sentences[span.sentence_index]
    tokens = tuple(t.surface for t in sentence[span.start : span.end])
    entry = gazetteer.lookup(tokens) if gazetteer else None
    gender = _DEFAULT_GENDER.get(span.label, "NEUTER")
    number = _DEFAULT_NUMBER.get(span.label, "UNKNOWN")
    if entry is not None:
        if entry.gender != "UNKNOWN":
            gender = entry.gender
        if entry.number != "UNKNOWN":
            number = entry.number
    return Mention(span.sentence_index, span.start, span.end, ENTITY,
                   gender, number, " ".join(tokens), tokens)


def find_antecedent(pronoun: Mention, candidates: list[Mention],
                    window: int = 2) -> Mention | None:
    """Nearest preceding agreeing entity mention within the sentence window."""
    best: Mention | None = None
    for cand in candidates:
        if cand.kind != ENTITY:
            continue
        if cand.sentence_index < pronoun.sentence_index - window:
            continue
        if cand.sentence_index > pronoun.sentence_index:
            continue
        if (cand.sentence_index == pronoun.sentence_index
                and cand.end > pronoun.start):
            continue
        if not agrees(pronoun, cand):
            continue
        if best is None or (cand.sentence_index, cand.start) > (
            best.sentence_index, best.start
        ):
            best = cand
    return best


def _replacement_surfaces(antecedent: Mention, possessive: bool) -> list[str]:
    surfaces = list(antecedent.tokens)
    if possessive:
        surfaces[-1] = surfaces[-1] + "'s"
    return surfaces


def _rebuild(sentence_surfaces: list[list[str]],
             sentence_origins: list[list[int]]) -> tuple[TokenizedText, list[int]]:
    sentences = []
    origins: list[int] = []
    offset = 0
    parts: list[str] = []
    for surfaces, origin_row in zip(sentence_surfaces, sentence_origins):
        toks = []
        for surface, origin in zip(surfaces, origin_row):
            toks.append(Token(
                surface=surface,
                stem=stem_surface(surface),
                char_offset=offset,
                is_stopword=surface in STOPWORDS,
            ))
            origins.append(origin)
            parts.append(surface)
            offset += len(surface) + 1
        if toks:
            sentences.append(tuple(toks))
    return TokenizedText(text=" ".join(parts), sentences=tuple(sentences)), origins


def resolve_mapped(answer: TokenizedText, entities: list[EntitySpan],
                   gazetteer: Gazetteer | None = None,
                   window: int = 2) -> tuple[TokenizedText, list[int]]:
    """resolve() plus a flat map from output tokens to original token indices.

    Replacement tokens map back to the pronoun position they replaced, so
    grading feedback can highlight the student's own words.
    """
    mentions = [entity_mention(answer, span, gazetteer) for span in entities]
    covered = {
        (m.sentence_index, i) for m in mentions for i in range(m.start, m.end)
    }
    replacements: dict[tuple[int, int], list[str]] = {}
    for s_idx, sentence in enumerate(answer.sentences):
        for t_idx, token in enumerate(sentence):
            surface = token.surface
            if surface not in PRONOUN_LEXICON or (s_idx, t_idx) in covered:
                continue
            pmention = pronoun_mention(s_idx, t_idx, surface)
            antecedent = find_antecedent(pmention, mentions, window)
            if antecedent is None:
                continue
            possessive = PRONOUN_LEXICON[surface][2]
            replacements[(s_idx, t_idx)] = _replacement_surfaces(
                antecedent, possessive
            )
            mentions.append(Mention(
                s_idx, t_idx, t_idx + 1, ENTITY, antecedent.gender,
                antecedent.number, antecedent.surface, antecedent.tokens,
            ))

    flat_index = 0
    sentence_surfaces: list[list[str]] = []
    sentence_origins: list[list[int]] = []
    for s_idx, sentence in enumerate(answer.sentences):
        surfaces: list[str] = []
        origin_row: list[int] = []
        for t_idx, token in enumerate(sentence):
            repl = replacements.get((s_idx, t_idx))
            if repl is None:
                surfaces.append(token.surface)
                origin_row.append(flat_index)
            else:
                surfaces.extend(repl)
                origin_row.extend([flat_index] * len(repl))
            flat_index += 1
        sentence_surfaces.append(surfaces)
        sentence_origins.append(origin_row)
    return _rebuild(sentence_surfaces, sentence_origins)


def resolve(answer: TokenizedText, entities: list[EntitySpan],
            gazetteer: Gazetteer | None = None, window: int = 2) -> TokenizedText:
    """Replace every resolvable pronoun with its antecedent's tokens."""
    rebuilt, _ = resolve_mapped(answer, entities, gazetteer, window)
    return rebuilt
