"""Template question drafting from the highest-scoring source sentences.

Sentences are scored by summing the scores of the concepts they contain
(each concept once per sentence), the top n are selected with document
order breaking ties, and each becomes one draft built from a rotating
template set. Drafts start unapproved and stay invisible to students
until a teacher approves them.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .scoring import ConceptScore, _find_run
from .textprep import TokenizedText

DEFAULT_TEMPLATES = (
    "What is the significance of <concept>?",
    "Fill in: <blanked>",
)

BLANK = "____"


@dataclass(frozen=True)
class ScoredSentence:
    index: int
    text: str
    score: float
    tokens: tuple[str, ...] = ()
    stems: tuple[str, ...] = ()


@dataclass(frozen=True)
class DraftQuestion:
    text: str
    source_sentence: str
    sentence_score: float
    target_concept: ConceptScore
    approved: bool = False

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "source_sentence": self.source_sentence,
            "sentence_score": self.sentence_score,
            "target_concept": self.target_concept.to_dict(),
            "approved": self.approved,
        }


def load_templates(path: str | Path) -> tuple[str, ...]:
    lines = [
        ln.strip()
        for ln in Path(path).read_text(encoding="utf-8").splitlines()
        if ln.strip() and not ln.startswith("#")
    ]
    return tuple(lines) if lines else DEFAULT_TEMPLATES


def score_sentences(text: TokenizedText,
                    concepts: list[ConceptScore]) -> list[ScoredSentence]:
    """Sum the scores of concepts whose stem runs occur in each sentence."""
    scored = []
    for idx, sentence in enumerate(text.sentences):
        stems = [t.stem for t in sentence]
        total = sum(
            c.score for c in concepts if _find_run(stems, c.stems) is not None
        )
        scored.append(ScoredSentence(
            index=idx,
            text=" ".join(t.surface for t in sentence),
            score=total,
            tokens=tuple(t.surface for t in sentence),
            stems=tuple(stems),
        ))
    return scored


def select_top(scored: list[ScoredSentence], n: int = 5) -> list[ScoredSentence]:
    """Top-n sentences by score; equal scores keep document order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ranked = sorted(scored, key=lambda s: (-s.score, s.index))
    return ranked[:n]


def _blank_concept(sentence: ScoredSentence, concept: ConceptScore) -> str:
    start = _find_run(list(sentence.stems), concept.stems)
    if start is None:
        return sentence.text
    tokens = list(sentence.tokens)
    tokens[start : start + len(concept.stems)] = [BLANK]
    return " ".join(tokens)


def draft_questions(sentences: list[ScoredSentence],
                    concepts: list[ConceptScore],
                    templates: tuple[str, ...] = DEFAULT_TEMPLATES) -> list[DraftQuestion]:
    """One unapproved draft per sentence targeting its top contained concept.

    Sentences containing no concept are skipped; templates rotate in
    sentence order; only the target concept is ever blanked.
    """
    drafts = []
    for i, sentence in enumerate(sentences):
        stems = list(sentence.stems)
        contained = [
            c for c in concepts if _find_run(stems, c.stems) is not None
        ]
        if not contained:
            continue
        target = min(contained, key=lambda c: (-c.score, c.stems))
        template = templates[i % len(templates)]
        text = template.replace("<concept>", target.display)
        if "<blanked>" in template:
            text = text.replace("<blanked>", _blank_concept(sentence, target))
        drafts.append(DraftQuestion(
            text=text,
            source_sentence=sentence.text,
            sentence_score=sentence.score,
            target_concept=target,
        ))
    return drafts
