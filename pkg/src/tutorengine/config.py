"""Deployment configuration: data paths, subjects, and tuning knobs."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path


@dataclass(frozen=True)
class ServiceConfig:
    data_dir: str = "data"
    subjects: tuple[str, ...] = ()
    alpha: float = 1.0
    beta: float = 1.0
    max_concepts: int = 20
    recommend_k: int = 3
    top_sentences: int = 5
    politeness_delay: float = 0.2
    embedding_dim: int = 50
    embedding_epochs: int = 40
    embedding_min_count: int = 2
    embedding_seed: int = 1
    selfstudy_subject: str = ""

    @property
    def root(self) -> Path:
        return Path(self.data_dir)

    def store_path(self) -> Path:
        return self.root / "store.db"

    def corpus_path(self, subject: str) -> Path:
        return self.root / "corpus" / f"{subject}.jsonl"

    def index_path(self, subject: str) -> Path:
        return self.root / "indices" / f"{subject}.json"

    def model_path(self, subject: str) -> Path:
        return self.root / "models" / f"{subject}.pv"

    def gazetteer_path(self, subject: str) -> Path:
        return self.root / "gazetteers" / f"{subject}.tsv"

    def seeds_path(self, subject: str) -> Path:
        return self.root / "seeds" / f"{subject}.txt"

    def templates_path(self) -> Path:
        return self.root / "qgen" / "templates.txt"

    def credentials_path(self) -> Path:
        return self.root / "credentials.json"

    def to_file(self, path: str | Path) -> None:
        payload = asdict(self)
        payload["subjects"] = list(self.subjects)
        Path(path).write_text(json.dumps(payload, indent=2), encoding="utf-8")

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceConfig":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        payload["subjects"] = tuple(payload.get("subjects", ()))
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(payload) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**payload)
