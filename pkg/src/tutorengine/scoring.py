"""Word scoring, phrase merging, teacher concept lists and answer grading.

A word's score combines its tf-idf weight with bonuses for membership in
the key-concept and named-entity sets:

    score(w) = tf(w) * idf(w) + alpha * [w in KC] + beta * [w in NE]

tf comes from the question's own source tokens, idf from the subject
index. Multiword key concepts and entity spans merge into phrase concepts
scoring the sum of member word scores. Grading matches teacher-approved
concepts against the (pronoun-resolved) answer stem stream, crediting a
concept's full score on a contiguous run or on any single non-stopword
member stem (partial hit), at most once per concept.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import coref
from .keyconcepts import KeyconceptConfig, extract_keyphrases
from .ner import Gazetteer, recognize
from .textprep import TokenizedText, preprocess
from .tfidf import SubjectIndex, tf_map


class NoSourceMaterialError(ValueError):
    pass


@dataclass(frozen=True)
class ScoringConfig:
    alpha: float = 1.0
    beta: float = 1.0
    max_concepts: int = 20


@dataclass(frozen=True)
class ConceptSets:
    kc: frozenset[tuple[str, ...]]
    ne: frozenset[tuple[str, ...]]

    @property
    def kc_words(self) -> frozenset[str]:
        return frozenset(s for phrase in self.kc for s in phrase)

    @property
    def ne_words(self) -> frozenset[str]:
        return frozenset(s for phrase in self.ne for s in phrase)


@dataclass(frozen=True)
class ConceptScore:
    stems: tuple[str, ...]
    display: str
    score: float
    in_kc: bool
    in_ne: bool
    teacher_edited: bool = False
    # member stems that may trigger a partial hit (never stopwords)
    content_stems: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.stems:
            raise ValueError("concept needs at least one stem")
        if self.score < 0:
            raise ValueError("concept score must be non-negative")
        if not self.content_stems:
            object.__setattr__(self, "content_stems", self.stems)

    def to_dict(self) -> dict:
        return {
            "stems": list(self.stems),
            "display": self.display,
            "score": self.score,
            "in_kc": self.in_kc,
            "in_ne": self.in_ne,
            "teacher_edited": self.teacher_edited,
            "content_stems": list(self.content_stems),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ConceptScore":
        return cls(
            stems=tuple(payload["stems"]),
            display=payload["display"],
            score=float(payload["score"]),
            in_kc=bool(payload["in_kc"]),
            in_ne=bool(payload["in_ne"]),
            teacher_edited=bool(payload.get("teacher_edited", False)),
            content_stems=tuple(payload.get("content_stems", ())),
        )


@dataclass(frozen=True)
class MatchedConcept:
    display: str
    stems: tuple[str, ...]
    score: float
    token_indices: tuple[int, ...]  # into the answer's own token stream

    def to_dict(self) -> dict:
        return {
            "display": self.display,
            "stems": list(self.stems),
            "score": self.score,
            "token_indices": list(self.token_indices),
        }


@dataclass(frozen=True)
class AnswerResult:
    question_id: str
    transcript: str
    tokens: tuple[str, ...]
    matched: tuple[MatchedConcept, ...]
    total_score: float
    max_score: float
    normalized: float

    def to_dict(self) -> dict:
        return {
            "question_id": self.question_id,
            "transcript": self.transcript,
            "tokens": list(self.tokens),
            "matched": [m.to_dict() for m in self.matched],
            "total_score": self.total_score,
            "max_score": self.max_score,
            "normalized": self.normalized,
        }


def word_score(stem: str, tf: float, idf: float, sets: ConceptSets,
               cfg: ScoringConfig = ScoringConfig()) -> float:
    score = tf * idf
    if stem in sets.kc_words:
        score += cfg.alpha
    if stem in sets.ne_words:
        score += cfg.beta
    return score


def merge_phrases(text: TokenizedText, sets: ConceptSets,
                  word_scores: dict[str, float]) -> list[ConceptScore]:
    """Collapse token runs matching KC phrases or NE spans; the rest of the
    scored words become unigram concepts. Duplicates keep the max score."""
    multiword = {p for p in (sets.kc | sets.ne) if len(p) >= 2}
    max_len = max((len(p) for p in multiword), default=0)
    found: dict[tuple[str, ...], ConceptScore] = {}

    def record(concept: ConceptScore) -> None:
        prior = found.get(concept.stems)
        if prior is None or concept.score > prior.score:
            found[concept.stems] = concept

    for sentence in text.sentences:
        stems = [t.stem for t in sentence]
        i = 0
        while i < len(sentence):
            run = None
            for length in range(min(max_len, len(sentence) - i), 1, -1):
                candidate = tuple(stems[i : i + length])
                if candidate in multiword:
                    run = candidate
                    break
            if run is not None:
                members = sentence[i : i + len(run)]
                record(ConceptScore(
                    stems=run,
                    display=" ".join(t.orig for t in members),
                    score=sum(word_scores.get(s, 0.0) for s in run),
                    in_kc=run in sets.kc,
                    in_ne=run in sets.ne,
                    content_stems=tuple(
                        t.stem for t in members if not t.is_stopword
                    ),
                ))
                i += len(run)
                continue
            token = sentence[i]
            if not token.is_stopword and token.stem in word_scores:
                record(ConceptScore(
                    stems=(token.stem,),
                    display=token.orig,
                    score=word_scores[token.stem],
                    in_kc=token.stem in sets.kc_words,
                    in_ne=token.stem in sets.ne_words,
                    content_stems=(token.stem,),
                ))
            i += 1
    return sorted(found.values(), key=lambda c: (-c.score, c.stems))


def build_concept_list(sources: list[str], index: SubjectIndex,
                       cfg: ScoringConfig = ScoringConfig(),
                       gazetteer: Gazetteer | None = None,
                       kc_cfg: KeyconceptConfig = KeyconceptConfig()) -> list[ConceptScore]:
    """Full pipeline: concatenate sources, extract KC and NE, score, merge,
    truncate to cfg.max_concepts."""
    sources = [s for s in sources if s and s.strip()]
    if not sources:
        raise NoSourceMaterialError("no source material")
    text = preprocess(". ".join(sources))
    content = text.content_stems()
    if not content:
        return []
    kc = frozenset(p.stems for p in extract_keyphrases(text, kc_cfg))
    spans = recognize(text, gazetteer)
    ne = frozenset(
        tuple(t.stem for t in text.sentences[s.sentence_index][s.start : s.end])
        for s in spans
    )
    sets = ConceptSets(kc=kc, ne=ne)
    tfs = tf_map(content)
    word_scores = {
        stem: word_score(stem, tfs[stem], index.idf(stem), sets, cfg)
        for stem in tfs
    }
    concepts = merge_phrases(text, sets, word_scores)
    return concepts[: cfg.max_concepts]


def _find_run(stems: list[str], run: tuple[str, ...]) -> int | None:
    n = len(run)
    for i in range(len(stems) - n + 1):
        if tuple(stems[i : i + n]) == run:
            return i
    return None


def grade_answer(transcript: str, concepts: list[ConceptScore],
                 gazetteer: Gazetteer | None = None,
                 cfg: ScoringConfig = ScoringConfig(),
                 question_id: str = "",
                 use_coref: bool = True) -> AnswerResult:
    """Tokenize, resolve pronouns, and credit matched concepts once each."""
    answer = preprocess(transcript)
    tokens = tuple(answer.surfaces())
    if use_coref:
        spans = recognize(answer, gazetteer)
        resolved, origins = coref.resolve_mapped(answer, spans, gazetteer)
    else:
        resolved = answer
        origins = list(range(len(tokens)))
    stems = resolved.stems()

    matched: list[MatchedConcept] = []
    total = 0.0
    for concept in concepts:
        content = set(concept.content_stems)
        hit_positions = [p for p, s in enumerate(stems) if s in content]
        is_full = _find_run(stems, concept.stems) is not None
        if not is_full and not hit_positions:
            continue
        indices = tuple(sorted({origins[p] for p in hit_positions}))
        matched.append(MatchedConcept(
            display=concept.display,
            stems=concept.stems,
            score=concept.score,
            token_indices=indices,
        ))
        total += concept.score
    max_score = sum(c.score for c in concepts)
    normalized = total / max_score if max_score > 0 else 0.0
    return AnswerResult(
        question_id=question_id,
        transcript=transcript,
        tokens=tokens,
        matched=tuple(matched),
        total_score=total,
        max_score=max_score,
        normalized=normalized,
    )
