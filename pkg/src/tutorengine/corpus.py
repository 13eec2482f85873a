"""Corpus-level operations behind the CLI: crawling a subject, building
its tf-idf index, and training its embedding model."""

from __future__ import annotations

from . import embeddings
from .config import ServiceConfig
from .crawler import CrawlJob, CrawlReport, DocumentStore, crawl
from .textprep import preprocess
from .tfidf import SubjectIndex, build_index


def crawl_subject(config: ServiceConfig, subject: str, seeds: list[str],
                  max_depth: int = 1, max_pages: int = 100,
                  same_host_only: bool = False, session=None) -> CrawlReport:
    store = DocumentStore(config.corpus_path(subject))
    job = CrawlJob(
        seeds=tuple(seeds),
        subject=subject,
        max_depth=max_depth,
        max_pages=max_pages,
        same_host_only=same_host_only,
        politeness_delay=config.politeness_delay,
    )
    return crawl(job, store, session=session)


def corpus_token_lists(config: ServiceConfig, subject: str) -> list[list[str]]:
    store = DocumentStore(config.corpus_path(subject))
    return [preprocess(doc.raw_text).content_stems() for doc in store.documents]


def build_subject_index(config: ServiceConfig, subject: str) -> SubjectIndex:
    tokens = corpus_token_lists(config, subject)
    index = build_index(subject, [t for t in tokens if t])
    path = config.index_path(subject)
    path.parent.mkdir(parents=True, exist_ok=True)
    index.save(path)
    return index


def train_subject_model(config: ServiceConfig, subject: str,
                        hp: embeddings.Hyperparams | None = None) -> embeddings.EmbeddingModel:
    if hp is None:
        hp = embeddings.Hyperparams(
            dim=config.embedding_dim,
            epochs=config.embedding_epochs,
            min_count=config.embedding_min_count,
            seed=config.embedding_seed,
        )
    tokens = [t for t in corpus_token_lists(config, subject) if t]
    model = embeddings.train(tokens, hp)
    path = config.model_path(subject)
    path.parent.mkdir(parents=True, exist_ok=True)
    embeddings.save(model, path)
    return model
