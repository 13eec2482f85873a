"""Concept extraction, answer grading and question recommendation for
tutoring workflows: text preprocessing, a depth-limited crawler, per-subject
tf-idf indices, graph-ranked keyphrases, rule-based entity and pronoun
handling, paragraph-vector embeddings, and the service tying them together.
"""

from .config import ServiceConfig
from .crawler import CrawlJob, Document, DocumentStore
from .keyconcepts import KeyconceptConfig, extract_keyphrases
from .ner import Gazetteer
from .scoring import (
    AnswerResult,
    ConceptScore,
    ScoringConfig,
    build_concept_list,
    grade_answer,
)
from .service import TutorEngine
from .textprep import TokenizedText, normalize, preprocess, tokenize
from .tfidf import SubjectIndex, build_index

__version__ = "0.1.0"

__all__ = [
    "AnswerResult",
    "ConceptScore",
    "CrawlJob",
    "Document",
    "DocumentStore",
    "Gazetteer",
    "KeyconceptConfig",
    "ScoringConfig",
    "ServiceConfig",
    "SubjectIndex",
    "TokenizedText",
    "TutorEngine",
    "build_concept_list",
    "build_index",
    "extract_keyphrases",
    "grade_answer",
    "normalize",
    "preprocess",
    "tokenize",
    "__version__",
]
