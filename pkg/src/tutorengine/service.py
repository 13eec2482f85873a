"""Persistence and orchestration: class/question lifecycle, teacher
review, answer grading, recommendations and class statistics.

Storage is a single embedded key-value file keyed ``class/<id>``,
``question/<id>``, ``answer/<question>/<seq>``, ``doc/<id>`` and
``stats/<class>``. Indices, embedding models and gazetteers load lazily
per subject and are cached as immutable snapshots.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass
from datetime import datetime, timezone

from . import crawler, embeddings, qgen, scoring
from .config import ServiceConfig
from .ner import Gazetteer
from .scoring import ConceptScore, ScoringConfig
from .store import KVStore
from .textprep import preprocess
from .tfidf import SubjectIndex


class NotFoundError(KeyError):
    pass


class ValidationFailure(ValueError):
    pass


class NotAvailableError(ValueError):
    pass


@dataclass
class SubjectAssets:
    index: SubjectIndex
    gazetteer: Gazetteer
    model: embeddings.EmbeddingModel | None = None
    model_version: str = ""


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _new_id(prefix: str) -> str:
    return f"{prefix}-{uuid.uuid4().hex[:12]}"


class TutorEngine:
    def __init__(self, config: ServiceConfig, store: KVStore | None = None):
        self.config = config
        self.store = store if store is not None else KVStore(config.store_path())
        self._assets: dict[str, SubjectAssets] = {}
        templates_file = config.templates_path()
        self.templates = (
            qgen.load_templates(templates_file)
            if templates_file.exists()
            else qgen.DEFAULT_TEMPLATES
        )

    # -- subject assets ----------------------------------------------------

    def assets(self, subject: str) -> SubjectAssets:
        cached = self._assets.get(subject)
        if cached is not None:
            return cached
        index_path = self.config.index_path(subject)
        if not index_path.exists():
            raise ValidationFailure(f"subject {subject!r} has no built index")
        index = SubjectIndex.load(index_path)
        gz_path = self.config.gazetteer_path(subject)
        gazetteer = Gazetteer.from_tsv(gz_path) if gz_path.exists() else Gazetteer.empty()
        model = None
        version = ""
        model_path = self.config.model_path(subject)
        if model_path.exists():
            model = embeddings.load(model_path)
            version = model.version()
        assets = SubjectAssets(index=index, gazetteer=gazetteer,
                               model=model, model_version=version)
        self._assets[subject] = assets
        return assets

    def invalidate_assets(self, subject: str | None = None) -> None:
        if subject is None:
            self._assets.clear()
        else:
            self._assets.pop(subject, None)

    def scoring_config(self) -> ScoringConfig:
        return ScoringConfig(alpha=self.config.alpha, beta=self.config.beta,
                             max_concepts=self.config.max_concepts)

    # -- classes -----------------------------------------------------------

    def create_class(self, name: str, subject: str,
                     roster: list[str] | None = None) -> dict:
        self.assets(subject)  # validates the index exists
        record = {
            "id": _new_id("class"),
            "name": name,
            "subject": subject,
            "roster": sorted(roster or []),
        }
        self.store.put(f"class/{record['id']}", record)
        return record

    def get_class(self, class_id: str) -> dict:
        record = self.store.get(f"class/{class_id}")
        if record is None:
            raise NotFoundError(f"unknown class {class_id!r}")
        return record

    # -- questions ---------------------------------------------------------

    def _ingest_sources(self, subject: str, sources: list[str]):
        texts: list[str] = []
        doc_ids: list[str] = []
        warnings: list[dict] = []
        for source in sources:
            stripped = source.strip()
            if not stripped:
                continue
            if stripped.startswith(("http://", "https://")):
                try:
                    text = crawler.fetch_source(stripped)
                except Exception as exc:
                    warnings.append({"source": stripped, "error": str(exc)})
                    continue
            else:
                text = stripped
            doc = crawler.Document.from_text(
                stripped if stripped.startswith(("http:", "https:")) else "inline:text",
                subject, text,
            )
            self.store.put(f"doc/{doc.id}", doc.to_dict())
            texts.append(text)
            doc_ids.append(doc.id)
        return texts, doc_ids, warnings

    def create_question(self, class_id: str, title: str, sources: list[str],
                        generated: bool = False, owner: str | None = None,
                        auto_approve: bool = False) -> dict:
        cls = self.get_class(class_id)
        if not sources:
            raise ValidationFailure("at least one source is required")
        assets = self.assets(cls["subject"])
        texts, doc_ids, warnings = self._ingest_sources(cls["subject"], sources)
        if not texts:
            raise ValidationFailure("all sources failed")
        cfg = self.scoring_config()
        concepts = scoring.build_concept_list(
            texts, assets.index, cfg=cfg, gazetteer=assets.gazetteer,
        )
        embedding = None
        if assets.model is not None:
            tokens = preprocess(". ".join(texts)).content_stems()
            try:
                vector = embeddings.infer(assets.model, tokens)
                embedding = {
                    "vector": [float(x) for x in vector],
                    "model_version": assets.model_version,
                }
            except embeddings.OutOfVocabularyError:
                embedding = None
        text_tt = preprocess(". ".join(texts))
        scored = qgen.score_sentences(text_tt, concepts)
        top = qgen.select_top(scored, n=self.config.top_sentences)
        drafts = qgen.draft_questions(top, concepts, templates=self.templates)
        question = {
            "id": _new_id("question"),
            "class_id": class_id,
            "title": title,
            "sources": doc_ids,
            "concepts": [c.to_dict() for c in concepts],
            "drafts": [d.to_dict() for d in drafts],
            "embedding": embedding,
            "approved": bool(auto_approve),
            "generated": bool(generated),
            "owner": owner,
            "created_at": _now(),
        }
        self.store.put(f"question/{question['id']}", question)
        return {"question": question, "warnings": warnings}

    def get_question(self, question_id: str) -> dict:
        record = self.store.get(f"question/{question_id}")
        if record is None:
            raise NotFoundError(f"unknown question {question_id!r}")
        return record

    def list_questions(self, class_id: str, role: str = "teacher") -> list[dict]:
        self.get_class(class_id)
        rows = [
            q for _, q in self.store.scan("question/")
            if q["class_id"] == class_id
        ]
        rows.sort(key=lambda q: q["created_at"])
        if role == "student":
            # titles only, approved only: sources and concepts stay hidden
            return [
                {"id": q["id"], "title": q["title"]}
                for q in rows
                if q["approved"]
            ]
        return rows

    def update_concepts(self, question_id: str, edits: list[dict]) -> dict:
        question = self.get_question(question_id)
        concepts = {
            tuple(c["stems"]): ConceptScore.from_dict(c)
            for c in question["concepts"]
        }
        for edit in edits:
            action = edit.get("action")
            if action == "add":
                phrase = edit.get("phrase", "").strip()
                score = float(edit.get("score", 0.0))
                if not phrase:
                    raise ValidationFailure("add requires a phrase")
                if score < 0:
                    raise ValidationFailure("score must be non-negative")
                tokens = preprocess(phrase).tokens()
                if not tokens:
                    raise ValidationFailure(f"phrase {phrase!r} has no tokens")
                stems = tuple(t.stem for t in tokens)
                concepts[stems] = ConceptScore(
                    stems=stems, display=phrase.lower(), score=score,
                    in_kc=False, in_ne=False, teacher_edited=True,
                    content_stems=tuple(
                        t.stem for t in tokens if not t.is_stopword
                    ) or stems,
                )
                continue
            stems = tuple(edit.get("stems", ()))
            if stems not in concepts:
                raise ValidationFailure(f"unknown concept {list(stems)!r}")
            if action == "delete":
                del concepts[stems]
            elif action == "set":
                score = float(edit.get("score", -1.0))
                if score < 0:
                    raise ValidationFailure("score must be non-negative")
                prior = concepts[stems]
                concepts[stems] = ConceptScore(
                    stems=prior.stems, display=prior.display, score=score,
                    in_kc=prior.in_kc, in_ne=prior.in_ne, teacher_edited=True,
                    content_stems=prior.content_stems,
                )
            else:
                raise ValidationFailure(f"unknown edit action {action!r}")
        if not concepts:
            raise ValidationFailure("question needs at least one concept")
        ordered = sorted(concepts.values(), key=lambda c: (-c.score, c.stems))
        question["concepts"] = [c.to_dict() for c in ordered]
        question["approved"] = True
        self.store.put(f"question/{question_id}", question)
        return question

    def approve_question(self, question_id: str, drafts: list[int] | None = None) -> dict:
        """Approve the question; optionally promote draft indices to questions."""
        question = self.get_question(question_id)
        if not question["concepts"]:
            raise ValidationFailure("question needs at least one concept")
        question["approved"] = True
        self.store.put(f"question/{question_id}", question)
        promoted = []
        for idx in drafts or []:
            try:
                draft = question["drafts"][idx]
            except IndexError:
                raise ValidationFailure(f"no draft at index {idx}")
            created = self.create_question(
                question["class_id"], draft["text"],
                [self.store.get(f"doc/{d}")["raw_text"] for d in question["sources"]],
                generated=True, auto_approve=True,
            )
            promoted.append(created["question"])
        return {"question": question, "promoted": promoted}

    # -- answers -----------------------------------------------------------

    def grade_transcript(self, question_id: str, transcript: str) -> scoring.AnswerResult:
        """The one grading path shared by the service and the CLI."""
        question = self.get_question(question_id)
        cls = self.get_class(question["class_id"])
        assets = self.assets(cls["subject"])
        concepts = [ConceptScore.from_dict(c) for c in question["concepts"]]
        return scoring.grade_answer(
            transcript, concepts, gazetteer=assets.gazetteer,
            cfg=self.scoring_config(), question_id=question_id,
        )

    def submit_answer(self, question_id: str, student_id: str,
                      transcript: str) -> dict:
        question = self.get_question(question_id)
        if not question["approved"]:
            raise NotAvailableError("not available")
        cls = self.get_class(question["class_id"])
        if cls["roster"] and student_id not in cls["roster"] and (
            question.get("owner") != student_id
        ):
            raise NotAvailableError(f"student {student_id!r} not enrolled")
        result = self.grade_transcript(question_id, transcript)
        seq = len(self.store.scan(f"answer/{question_id}/"))
        while True:
            record = {
                "seq": seq,
                "student_id": student_id,
                "submitted_at": _now(),
                "result": result.to_dict(),
            }
            if self.store.put_new(f"answer/{question_id}/{seq:08d}", record):
                break
            seq += 1
        self._update_stats_incremental(question, result)
        return {
            "result": result.to_dict(),
            "recommendations": self.recommendations(question_id),
        }

    def recommendations(self, question_id: str, k: int | None = None) -> list[str]:
        question = self.get_question(question_id)
        if question.get("embedding") is None:
            return []
        candidates = [
            embeddings.QuestionEmbedding(
                question_id=q["id"],
                vector=tuple(q["embedding"]["vector"]),
                model_version=q["embedding"]["model_version"],
            )
            for _, q in self.store.scan("question/")
            if q["class_id"] == question["class_id"]
            and q["embedding"] is not None
            and (q["approved"] or q["id"] == question_id)
        ]
        return embeddings.recommend(
            question_id, candidates, k=k if k is not None else self.config.recommend_k
        )

    # -- statistics ----------------------------------------------------------

    def _update_stats_incremental(self, question: dict,
                                  result: scoring.AnswerResult) -> None:
        class_id = question["class_id"]
        key = f"stats/{class_id}"
        stats = self.store.get(key) or {"per_question": {}, "per_concept": {}}
        qstats = stats["per_question"].setdefault(
            question["id"],
            {"attempts": 0, "sum_normalized": 0.0, "histogram": [0] * 10},
        )
        qstats["attempts"] += 1
        qstats["sum_normalized"] += result.normalized
        qstats["histogram"][_bin(result.normalized)] += 1
        matched = {tuple(m.stems) for m in result.matched}
        for concept in question["concepts"]:
            ckey = " ".join(concept["stems"])
            centry = stats["per_concept"].setdefault(
                ckey, {"display": concept["display"], "attempts": 0, "hits": 0}
            )
            centry["attempts"] += 1
            if tuple(concept["stems"]) in matched:
                centry["hits"] += 1
        self.store.put(key, stats)

    def get_stats(self, class_id: str) -> dict:
        """Aggregate over all persisted answers (recomputed, not cached)."""
        self.get_class(class_id)
        per_question: dict[str, dict] = {}
        per_concept: dict[str, dict] = {}
        questions = {
            q["id"]: q for _, q in self.store.scan("question/")
            if q["class_id"] == class_id
        }
        for qid, question in questions.items():
            answers = [rec for _, rec in self.store.scan(f"answer/{qid}/")]
            histogram = [0] * 10
            total = 0.0
            for rec in answers:
                histogram[_bin(rec["result"]["normalized"])] += 1
                total += rec["result"]["normalized"]
            per_question[qid] = {
                "attempts": len(answers),
                "mean_normalized": total / len(answers) if answers else 0.0,
                "histogram": histogram,
            }
            for concept in question["concepts"]:
                ckey = " ".join(concept["stems"])
                entry = per_concept.setdefault(
                    ckey, {"display": concept["display"], "attempts": 0, "hits": 0}
                )
                for rec in answers:
                    entry["attempts"] += 1
                    matched = {
                        " ".join(m["stems"]) for m in rec["result"]["matched"]
                    }
                    if ckey in matched:
                        entry["hits"] += 1
        for entry in per_concept.values():
            entry["hit_rate"] = (
                entry["hits"] / entry["attempts"] if entry["attempts"] else 0.0
            )
        weakest = sorted(
            (
                {"concept": key, "display": entry["display"],
                 "hit_rate": entry["hit_rate"], "attempts": entry["attempts"]}
                for key, entry in per_concept.items()
                if entry["attempts"] >= 3
            ),
            key=lambda e: (e["hit_rate"], e["concept"]),
        )[:5]
        return {
            "class_id": class_id,
            "per_question": per_question,
            "per_concept": per_concept,
            "weakest_concepts": weakest,
        }

    def get_stats_incremental(self, class_id: str) -> dict:
        """The maintained counters, shaped like get_stats() output."""
        self.get_class(class_id)
        stats = self.store.get(f"stats/{class_id}") or {
            "per_question": {}, "per_concept": {},
        }
        per_question = {
            qid: {
                "attempts": entry["attempts"],
                "mean_normalized": (
                    entry["sum_normalized"] / entry["attempts"]
                    if entry["attempts"] else 0.0
                ),
                "histogram": entry["histogram"],
            }
            for qid, entry in stats["per_question"].items()
        }
        per_concept = {
            key: {
                "display": entry["display"],
                "attempts": entry["attempts"],
                "hits": entry["hits"],
                "hit_rate": (
                    entry["hits"] / entry["attempts"] if entry["attempts"] else 0.0
                ),
            }
            for key, entry in stats["per_concept"].items()
        }
        weakest = sorted(
            (
                {"concept": key, "display": entry["display"],
                 "hit_rate": entry["hit_rate"], "attempts": entry["attempts"]}
                for key, entry in per_concept.items()
                if entry["attempts"] >= 3
            ),
            key=lambda e: (e["hit_rate"], e["concept"]),
        )[:5]
        return {
            "class_id": class_id,
            "per_question": per_question,
            "per_concept": per_concept,
            "weakest_concepts": weakest,
        }

    # -- self-study ----------------------------------------------------------

    def self_study_create(self, student_id: str, title: str,
                          sources: list[str], subject: str | None = None) -> dict:
        subject = subject or self.config.selfstudy_subject or (
            self.config.subjects[0] if self.config.subjects else ""
        )
        if not subject:
            raise ValidationFailure("no subject available for self-study")
        class_id = f"self-{student_id}"
        if self.store.get(f"class/{class_id}") is None:
            self.assets(subject)
            self.store.put(f"class/{class_id}", {
                "id": class_id,
                "name": f"self-study ({student_id})",
                "subject": subject,
                "roster": [student_id],
            })
        return self.create_question(
            class_id, title, sources, owner=student_id, auto_approve=True,
        )

    def close(self) -> None:
        self.store.close()


def _bin(normalized: float) -> int:
    return min(int(normalized * 10), 9)
