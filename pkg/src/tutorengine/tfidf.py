"""Per-subject document-frequency statistics and tf-idf weights.

The index stores only corpus-level statistics (document count and
per-stem document frequency); term frequency is always computed against
the token stream of the material being scored. Unseen terms get the
highest idf rather than a division error, since teacher sources routinely
contain terms absent from the crawl.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path


class EmptyCorpusError(ValueError):
    pass


class EmptySourceError(ValueError):
    pass


@dataclass(frozen=True)
class SubjectIndex:
    subject: str
    n_docs: int
    df: dict[str, int] = field(default_factory=dict)

    @property
    def vocab_size(self) -> int:
        return len(self.df)

    def idf(self, term: str) -> float:
        """Smoothed inverse document frequency, defined for unseen terms."""
        return math.log((1 + self.n_docs) / (1 + self.df.get(term, 0))) + 1.0

    def to_json(self) -> str:
        payload = {
            "subject": self.subject,
            "n_docs": self.n_docs,
            "df": {t: self.df[t] for t in sorted(self.df)},
        }
        return json.dumps(payload, indent=1, sort_keys=False)

    @classmethod
    def from_json(cls, text: str) -> "SubjectIndex":
        payload = json.loads(text)
        return cls(
            subject=payload["subject"],
            n_docs=int(payload["n_docs"]),
            df={str(k): int(v) for k, v in payload["df"].items()},
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "SubjectIndex":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def build_index(subject: str, doc_tokens: list[list[str]]) -> SubjectIndex:
    """Count document frequencies over stemmed, stopword-filtered token lists."""
    if not doc_tokens:
        raise EmptyCorpusError("empty corpus")
    df: dict[str, int] = {}
    for tokens in doc_tokens:
        for term in set(tokens):
            df[term] = df.get(term, 0) + 1
    return SubjectIndex(subject=subject, n_docs=len(doc_tokens), df=df)


def tf(doc_tokens: list[str], term: str) -> float:
    """Length-normalized raw frequency of ``term`` in one source's tokens."""
    if not doc_tokens:
        raise EmptySourceError("empty source")
    return doc_tokens.count(term) / len(doc_tokens)


def tf_map(doc_tokens: list[str]) -> dict[str, float]:
    """tf() for every distinct term in one pass."""
    if not doc_tokens:
        raise EmptySourceError("empty source")
    counts: dict[str, int] = {}
    for t in doc_tokens:
        counts[t] = counts.get(t, 0) + 1
    n = len(doc_tokens)
    return {t: c / n for t, c in counts.items()}
