"""Graph-based keyword extraction over word co-occurrence.

Candidate terms (non-stopword tokens with at least three letters by
default; the filter is pluggable) become vertices keyed by stem. Edges
count co-occurrences within a sliding window inside one sentence. A
damped ranking fixed point scores the vertices, the top fraction are kept
as keywords, and keywords adjacent in the original text collapse into
multiword phrases whose score is the sum of member vertex scores.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .textprep import Token, TokenizedText


@dataclass(frozen=True)
class KeyconceptConfig:
    window: int = 2
    damping: float = 0.85
    tol: float = 1e-6
    max_iter: int = 100
    keep_ratio: float = 1 / 3
    min_letters: int = 3
    candidate_filter: Callable[[Token], bool] | None = None


@dataclass
class CooccurrenceGraph:
    vertices: list[str]
    # symmetric: both (i, j) and (j, i) present, no self-loops
    edges: dict[tuple[str, str], int] = field(default_factory=dict)
    window: int = 2

    def weight(self, a: str, b: str) -> int:
        return self.edges.get((a, b), 0)

    def neighbors(self, v: str) -> list[str]:
        return [b for (a, b) in self.edges if a == v]


@dataclass
class RankScores:
    scores: dict[str, float]
    iterations_used: int
    converged: bool


@dataclass(frozen=True)
class Keyphrase:
    stems: tuple[str, ...]
    surface: str
    score: float


def default_candidate(token: Token, min_letters: int = 3) -> bool:
    if token.is_stopword:
        return False
    return sum(ch.isalpha() for ch in token.surface) >= min_letters


def build_graph(tokens: TokenizedText, window: int = 2,
                candidate_filter: Callable[[Token], bool] | None = None,
                min_letters: int = 3) -> CooccurrenceGraph:
    """Count pairwise co-occurrences of candidate stems within ``window``."""
    if window < 2:
        raise ValueError("window must be >= 2")
    is_candidate = candidate_filter or (lambda t: default_candidate(t, min_letters))
    vertices: set[str] = set()
    edges: dict[tuple[str, str], int] = {}
    for sentence in tokens.sentences:
        flags = [is_candidate(t) for t in sentence]
        for t, ok in zip(sentence, flags):
            if ok:
                vertices.add(t.stem)
        for p in range(len(sentence)):
            if not flags[p]:
                continue
            for q in range(p + 1, min(p + window, len(sentence))):
                if not flags[q]:
                    continue
                a, b = sentence[p].stem, sentence[q].stem
                if a == b:
                    continue
                edges[(a, b)] = edges.get((a, b), 0) + 1
                edges[(b, a)] = edges.get((b, a), 0) + 1
    return CooccurrenceGraph(vertices=sorted(vertices), edges=edges, window=window)


def pagerank(graph: CooccurrenceGraph, damping: float = 0.85,
             tol: float = 1e-6, max_iter: int = 100) -> RankScores:
    """Damped weighted ranking iterated from all-ones to the fixed point.

    score(v) = (1 - d) + d * sum over incoming u of
               weight(u, v) / outweight(u) * score(u)

    Isolated vertices receive (1 - d). Non-convergence within ``max_iter``
    is reported, not raised.
    """
    if not 0.0 < damping < 1.0:
        raise ValueError("damping must lie in (0, 1)")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    vertices = graph.vertices
    out_sum: dict[str, float] = {v: 0.0 for v in vertices}
    incoming: dict[str, list[tuple[str, int]]] = {v: [] for v in vertices}
    for (a, b), w in graph.edges.items():
        out_sum[a] += w
        incoming[b].append((a, w))
    for v in incoming:
        incoming[v].sort()
    scores = {v: 1.0 for v in vertices}
    iterations = 0
    converged = False
    for iterations in range(1, max_iter + 1):
        new_scores = {}
        for v in vertices:
            rank = sum(w / out_sum[u] * scores[u] for u, w in incoming[v])
            new_scores[v] = (1.0 - damping) + damping * rank
        delta = max(
            (abs(new_scores[v] - scores[v]) for v in vertices), default=0.0
        )
        scores = new_scores
        if delta < tol:
            converged = True
            break
    return RankScores(scores=scores, iterations_used=iterations if vertices else 0,
                      converged=converged if vertices else True)


def extract_keyphrases(text: TokenizedText,
                       cfg: KeyconceptConfig = KeyconceptConfig()) -> list[Keyphrase]:
    """Rank candidates, keep the top fraction, collapse adjacent keywords."""
    is_candidate = cfg.candidate_filter or (
        lambda t: default_candidate(t, cfg.min_letters)
    )
    graph = build_graph(text, cfg.window, is_candidate)
    if not graph.vertices:
        return []
    ranks = pagerank(graph, cfg.damping, cfg.tol, cfg.max_iter)
    n_keep = math.ceil(cfg.keep_ratio * len(graph.vertices))
    by_rank = sorted(ranks.scores.items(), key=lambda kv: (-kv[1], kv[0]))
    kept = {stem for stem, _ in by_rank[:n_keep]}

    phrases: dict[tuple[str, ...], Keyphrase] = {}
    for sentence in text.sentences:
        run: list[Token] = []
        for token in list(sentence) + [None]:  # sentinel flushes the last run
            if token is not None and token.stem in kept and is_candidate(token):
                run.append(token)
                continue
            if run:
                stems = tuple(t.stem for t in run)
                if stems not in phrases:
                    phrases[stems] = Keyphrase(
                        stems=stems,
                        surface=" ".join(t.orig for t in run),
                        score=sum(ranks.scores[s] for s in stems),
                    )
                run = []
    return sorted(phrases.values(), key=lambda p: (-p.score, p.stems))
