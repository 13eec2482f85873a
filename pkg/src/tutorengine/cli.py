"""Operator command line: corpus building, index/embedding training,
pipeline debugging and serving.

Exit codes: 0 success, 1 domain error, 2 usage error. Progress goes to
stderr; machine-readable results go to stdout when --json is set.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus as corpus_ops
from . import embeddings
from .config import ServiceConfig
from .crawler import InvalidSeedError
from .keyconcepts import KeyconceptConfig, extract_keyphrases
from .ner import Gazetteer
from .scoring import NoSourceMaterialError, build_concept_list
from .service import (
    NotAvailableError,
    NotFoundError,
    TutorEngine,
    ValidationFailure,
)
from .store import KVStore
from .textprep import preprocess
from .tfidf import EmptyCorpusError, SubjectIndex, build_index

_DOMAIN_ERRORS = (
    ValidationFailure, NotFoundError, NotAvailableError, InvalidSeedError,
    EmptyCorpusError, NoSourceMaterialError, embeddings.DegenerateCorpusError,
    embeddings.OutOfVocabularyError, FileNotFoundError, ValueError, KeyError,
)


def _progress(message: str) -> None:
    print(message, file=sys.stderr)


def _load_config(args) -> ServiceConfig:
    path = Path(args.config)
    if path.exists():
        return ServiceConfig.from_file(path)
    return ServiceConfig()


def cmd_crawl(args) -> int:
    config = _load_config(args)
    seeds = [
        line.strip()
        for line in Path(args.seeds).read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.startswith("#")
    ]
    report = corpus_ops.crawl_subject(
        config, args.subject, seeds,
        max_depth=args.depth, max_pages=args.max_pages,
        same_host_only=args.same_host,
    )
    _progress(
        f"crawl {args.subject}: fetched={report.fetched} "
        f"skipped={report.skipped} errors={len(report.errors)}"
    )
    if args.json:
        print(json.dumps({
            "fetched": report.fetched,
            "skipped": report.skipped,
            "errors": report.errors,
        }, indent=2))
    return 0


def cmd_index(args) -> int:
    if args.index_command != "build":
        raise ValidationFailure(f"unknown index subcommand {args.index_command!r}")
    config = _load_config(args)
    index = corpus_ops.build_subject_index(config, args.subject)
    _progress(
        f"index {args.subject}: {index.n_docs} docs, {index.vocab_size} terms "
        f"-> {config.index_path(args.subject)}"
    )
    if args.json:
        print(json.dumps({"subject": index.subject, "n_docs": index.n_docs,
                          "vocab_size": index.vocab_size}))
    return 0


def cmd_train(args) -> int:
    config = _load_config(args)
    hp = embeddings.Hyperparams(
        dim=args.dim or config.embedding_dim,
        epochs=args.epochs or config.embedding_epochs,
        min_count=args.min_count or config.embedding_min_count,
        seed=args.seed if args.seed is not None else config.embedding_seed,
    )
    model = corpus_ops.train_subject_model(config, args.subject, hp)
    _progress(
        f"train {args.subject}: |V|={len(model.vocab)} dim={hp.dim} "
        f"loss {model.epoch_losses[0]:.4f} -> {model.epoch_losses[-1]:.4f}"
    )
    if args.json:
        print(json.dumps({
            "subject": args.subject,
            "vocab_size": len(model.vocab),
            "dim": hp.dim,
            "first_epoch_loss": model.epoch_losses[0],
            "final_epoch_loss": model.epoch_losses[-1],
            "version": model.version(),
        }))
    return 0


def cmd_concepts(args) -> int:
    if args.concepts_command != "extract":
        raise ValidationFailure(
            f"unknown concepts subcommand {args.concepts_command!r}"
        )
    config = _load_config(args)
    text = Path(args.file).read_text(encoding="utf-8")
    if args.subject and config.index_path(args.subject).exists():
        index = SubjectIndex.load(config.index_path(args.subject))
        gz_path = config.gazetteer_path(args.subject)
        gazetteer = (
            Gazetteer.from_tsv(gz_path) if gz_path.exists() else Gazetteer.empty()
        )
    else:
        # debugging without a built subject: the file is its own corpus
        _progress("no subject index; using the file as a one-document corpus")
        index = build_index("adhoc", [preprocess(text).content_stems()])
        gazetteer = Gazetteer.empty()
    concepts = build_concept_list([text], index, gazetteer=gazetteer)
    if args.json:
        print(json.dumps([c.to_dict() for c in concepts], indent=2))
    else:
        for concept in concepts:
            print(f"{concept.score:8.4f}  {concept.display}")
    keyphrases = extract_keyphrases(preprocess(text), KeyconceptConfig())
    _progress(f"{len(concepts)} concepts ({len(keyphrases)} raw keyphrases)")
    return 0


def cmd_grade(args) -> int:
    config = _load_config(args)
    engine = TutorEngine(config, KVStore(config.store_path()))
    try:
        transcript = Path(args.transcript_file).read_text(encoding="utf-8")
        result = engine.grade_transcript(args.question_id, transcript)
        payload = result.to_dict()
        if args.json:
            print(json.dumps(payload, sort_keys=True))
        else:
            print(f"score {result.total_score:.4f} / {result.max_score:.4f} "
                  f"(normalized {result.normalized:.4f})")
            for m in result.matched:
                print(f"  matched: {m.display} (+{m.score:.4f})")
        return 0
    finally:
        engine.close()


def cmd_serve(args) -> int:
    import uvicorn

    from .api import Credentials, create_app

    config = _load_config(args)
    credentials_path = config.credentials_path()
    if not credentials_path.exists():
        raise ValidationFailure(f"credentials file missing: {credentials_path}")
    engine = TutorEngine(config)
    app = create_app(engine, Credentials.from_file(credentials_path))
    _progress(f"serving on {args.host}:{args.port} (data: {config.data_dir})")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tutorengine",
        description="concept extraction, answer grading and recommendation engine",
    )
    parser.add_argument("--config", default="config.json",
                        help="path to the JSON config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("crawl", help="spider seed URLs into a subject corpus")
    p.add_argument("--subject", required=True)
    p.add_argument("--seeds", required=True, help="file with one seed URL per line")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--max-pages", type=int, default=100)
    p.add_argument("--same-host", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_crawl)

    p = sub.add_parser("index", help="subject index operations")
    p.add_argument("index_command", choices=["build"])
    p.add_argument("--subject", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("train", help="train the subject embedding model")
    p.add_argument("--subject", required=True)
    p.add_argument("--dim", type=int, default=0)
    p.add_argument("--epochs", type=int, default=0)
    p.add_argument("--min-count", type=int, default=0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("concepts", help="pipeline debugging")
    p.add_argument("concepts_command", choices=["extract"])
    p.add_argument("--file", required=True)
    p.add_argument("--subject", default="")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_concepts)

    p = sub.add_parser("grade", help="grade a transcript against a question")
    p.add_argument("--question-id", required=True)
    p.add_argument("--transcript-file", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_grade)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _DOMAIN_ERRORS as exc:
        message = exc.args[0] if exc.args else str(exc)
        print(f"error: {message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
