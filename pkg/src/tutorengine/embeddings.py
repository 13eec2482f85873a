"""Paragraph-vector training (PV-DBOW with negative sampling), inference
and cosine nearest-neighbor recommendation.

Each document holds a trainable vector optimized to predict its own words
against negatives drawn from the unigram^0.75 noise distribution:

    loss = -log s(v_doc . u_word) - sum_k log s(-v_doc . u_neg_k)

Training is single-threaded and fully seeded, so identical inputs give
bit-identical matrices. Only the word-output matrix and vocabulary are
persisted; question vectors are re-inferred against the frozen matrix.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

MAGIC = b"PVDB"
FORMAT_VERSION = 1


class DegenerateCorpusError(ValueError):
    pass


class OutOfVocabularyError(ValueError):
    pass


class DegenerateVectorError(ValueError):
    pass


@dataclass(frozen=True)
class Hyperparams:
    dim: int = 50
    negatives: int = 5
    epochs: int = 40
    initial_lr: float = 0.025
    min_count: int = 2
    seed: int = 1


@dataclass
class EmbeddingModel:
    hp: Hyperparams
    vocab: dict[str, int]
    counts: np.ndarray  # per-index corpus frequency
    word_output: np.ndarray  # (V, dim) float64 in memory
    doc_vectors: np.ndarray | None = None  # train-time only
    epoch_losses: list[float] = field(default_factory=list)

    _noise_cdf: np.ndarray | None = None
    _version: str | None = None

    def noise_cdf(self) -> np.ndarray:
        if self._noise_cdf is None:
            weights = self.counts.astype(np.float64) ** 0.75
            self._noise_cdf = np.cumsum(weights / weights.sum())
        return self._noise_cdf

    def version(self) -> str:
        if self._version is None:
            self._version = hashlib.sha256(serialize(self)).hexdigest()[:12]
        return self._version


@dataclass(frozen=True)
class QuestionEmbedding:
    question_id: str
    vector: tuple[float, ...]
    model_version: str


def _log_sigmoid(x: float) -> float:
    return -np.logaddexp(0.0, -x)


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-np.clip(x, -60.0, 60.0)))


def pair_loss(v: np.ndarray, u_pos: np.ndarray, u_negs: np.ndarray):
    """Loss and gradients for one (doc, word, negatives) training pair.

    Returns (loss, grad_v, grad_u_pos, grad_u_negs); the gradients are the
    exact analytic derivatives of the loss.
    """
    pos_x = float(v @ u_pos)
    neg_x = u_negs @ v if len(u_negs) else np.zeros(0)
    loss = -_log_sigmoid(pos_x) - sum(_log_sigmoid(-x) for x in neg_x)
    pos_err = _sigmoid(pos_x) - 1.0
    neg_err = _sigmoid(neg_x)
    grad_v = pos_err * u_pos + (neg_err @ u_negs if len(u_negs) else 0.0)
    grad_u_pos = pos_err * v
    grad_u_negs = np.outer(neg_err, v)
    return loss, grad_v, grad_u_pos, grad_u_negs


def _sample_negatives(rng, cdf: np.ndarray, k: int, exclude: int) -> np.ndarray:
    draws = np.searchsorted(cdf, rng.random(k))
    return draws[draws != exclude]


def _lr_at(initial_lr: float, progress: float) -> float:
    # linear decay to initial_lr / 100 at progress 1
    return initial_lr * (1.0 - 0.99 * min(progress, 1.0))


def train(docs: list[list[str]], hp: Hyperparams = Hyperparams()) -> EmbeddingModel:
    """Fit doc vectors and the word-output matrix over stemmed token lists."""
    if len(docs) < 2:
        raise DegenerateCorpusError("need at least 2 documents")
    freq: dict[str, int] = {}
    for doc in docs:
        for tok in doc:
            freq[tok] = freq.get(tok, 0) + 1
    terms = sorted(t for t, c in freq.items() if c >= hp.min_count)
    if not terms:
        raise DegenerateCorpusError("degenerate corpus")
    vocab = {t: i for i, t in enumerate(terms)}
    counts = np.array([freq[t] for t in terms], dtype=np.int64)

    doc_ids = [
        np.array([vocab[t] for t in doc if t in vocab], dtype=np.int64)
        for doc in docs
    ]
    rng = np.random.default_rng(hp.seed)
    doc_vectors = (rng.random((len(docs), hp.dim)) - 0.5) / hp.dim
    word_output = np.zeros((len(vocab), hp.dim))
    model = EmbeddingModel(hp=hp, vocab=vocab, counts=counts,
                           word_output=word_output, doc_vectors=doc_vectors)
    cdf = model.noise_cdf()

    total_steps = hp.epochs * sum(len(ids) for ids in doc_ids)
    step = 0
    for _ in range(hp.epochs):
        epoch_loss = 0.0
        epoch_pairs = 0
        for d_idx, ids in enumerate(doc_ids):
            v = doc_vectors[d_idx]
            for w_id in ids:
                lr = _lr_at(hp.initial_lr, step / total_steps)
                step += 1
                negs = _sample_negatives(rng, cdf, hp.negatives, w_id)
                u_pos = word_output[w_id]
                u_negs = word_output[negs]
                loss, g_v, g_pos, g_negs = pair_loss(v, u_pos, u_negs)
                epoch_loss += loss
                epoch_pairs += 1
                v -= lr * g_v
                word_output[w_id] -= lr * g_pos
                if len(negs):
                    np.subtract.at(word_output, negs, lr * g_negs)
        model.epoch_losses.append(epoch_loss / max(epoch_pairs, 1))
    if not np.all(np.isfinite(word_output)) or not np.all(np.isfinite(doc_vectors)):
        raise FloatingPointError("non-finite values after training")
    return model


def infer(model: EmbeddingModel, tokens: list[str]) -> np.ndarray:
    """Optimize a fresh doc vector against the frozen word-output matrix."""
    ids = np.array([model.vocab[t] for t in tokens if t in model.vocab],
                   dtype=np.int64)
    if len(ids) == 0:
        raise OutOfVocabularyError("out-of-vocabulary source")
    hp = model.hp
    rng = np.random.default_rng(hp.seed)
    v = (rng.random(hp.dim) - 0.5) / hp.dim
    cdf = model.noise_cdf()
    total_steps = hp.epochs * len(ids)
    step = 0
    for _ in range(hp.epochs):
        for w_id in ids:
            lr = _lr_at(hp.initial_lr, step / total_steps)
            step += 1
            negs = _sample_negatives(rng, cdf, hp.negatives, w_id)
            _, g_v, _, _ = pair_loss(v, model.word_output[w_id],
                                     model.word_output[negs])
            v -= lr * g_v
    return v


def cosine(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError("dimension mismatch")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise DegenerateVectorError("degenerate vector")
    return float(np.dot(a, b) / (na * nb))


def recommend(question_id: str, store: list[QuestionEmbedding], k: int = 3) -> list[str]:
    """The k most cosine-similar other questions, ties by ascending id."""
    by_id = {qe.question_id: qe for qe in store}
    if question_id not in by_id:
        raise KeyError(f"unknown question {question_id!r}")
    query = by_id[question_id]
    ranked = sorted(
        (
            (-cosine(query.vector, qe.vector), qe.question_id)
            for qe in store
            if qe.question_id != question_id
        ),
    )
    return [qid for _, qid in ranked[:k]]


def serialize(model: EmbeddingModel) -> bytes:
    """Binary model image: header, vocab table, float32 LE output matrix."""
    hp = model.hp
    parts = [struct.pack(
        "<4sIIIIIdIQ",
        MAGIC, FORMAT_VERSION, hp.dim, len(model.vocab),
        hp.negatives, hp.epochs, hp.initial_lr, hp.min_count, hp.seed,
    )]
    terms = sorted(model.vocab, key=model.vocab.get)
    for term, count in zip(terms, model.counts):
        raw = term.encode("utf-8")
        parts.append(struct.pack("<H", len(raw)))
        parts.append(raw)
        parts.append(struct.pack("<Q", int(count)))
    matrix = np.ascontiguousarray(model.word_output, dtype="<f4")
    parts.append(matrix.tobytes())
    return b"".join(parts)


def save(model: EmbeddingModel, path: str | Path) -> None:
    Path(path).write_bytes(serialize(model))


def load(path: str | Path) -> EmbeddingModel:
    blob = Path(path).read_bytes()
    magic, version, dim, vsize, negatives, epochs, lr, min_count, seed = (
        struct.unpack_from("<4sIIIIIdIQ", blob, 0)
    )
    if magic != MAGIC:
        raise ValueError("not a model file")
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported model version {version}")
    offset = struct.calcsize("<4sIIIIIdIQ")
    vocab: dict[str, int] = {}
    counts = np.zeros(vsize, dtype=np.int64)
    for i in range(vsize):
        (tlen,) = struct.unpack_from("<H", blob, offset)
        offset += 2
        term = blob[offset : offset + tlen].decode("utf-8")
        offset += tlen
        (count,) = struct.unpack_from("<Q", blob, offset)
        offset += 8
        vocab[term] = i
        counts[i] = count
    matrix = np.frombuffer(
        blob, dtype="<f4", count=vsize * dim, offset=offset
    ).reshape(vsize, dim).astype(np.float64)
    hp = Hyperparams(dim=dim, negatives=negatives, epochs=epochs,
                     initial_lr=lr, min_count=min_count, seed=seed)
    return EmbeddingModel(hp=hp, vocab=vocab, counts=counts, word_output=matrix)
