"""Concept scoring and answer grading
=====================================

Builds the teacher's (concept, score) list from source text, then grades
student transcripts: full credit per concept on a contiguous stem run or
any single non-stopword member stem, each concept at most once, with
pronouns resolved before matching.
"""

from tutorengine.ner import Gazetteer
from tutorengine.scoring import build_concept_list, grade_answer
from tutorengine.textprep import preprocess
from tutorengine.tfidf import build_index

SOURCES = [
    "george washington led the continental army across the delaware river. "
    "the crossing happened in 1776 before the battle of trenton.",
    "the continental army camped through the winter and kept its strength.",
]

GAZETTEER = Gazetteer.from_pairs([
    ("george washington", "PERSON", "MASC"),
    ("continental army", "ORGANIZATION"),
    ("delaware river", "LOCATION"),
    ("trenton", "LOCATION"),
])

# a background corpus supplies idf; real deployments crawl one per subject
corpus = [
    "the war began in 1775 with militia skirmishes",
    "armies marched and camped along rivers",
    "winter campaigns tested every army",
    "treaties ended the fighting in 1783",
]
index = build_index("demo", [preprocess(d).content_stems() for d in corpus])

concepts = build_concept_list(SOURCES, index, gazetteer=GAZETTEER)
print("teacher review list:")
for c in concepts:
    tags = "/".join(t for t, on in (("KC", c.in_kc), ("NE", c.in_ne)) if on)
    print(f"  {c.score:7.4f}  {c.display:<22} {tags}")

answers = [
    "washington crossed the delaware",                      # partial hits
    "the continental army fought at trenton in 1776",       # several concepts
    "george washington led his men. he reached trenton.",   # pronouns
    "i do not remember anything about this",                # nothing
]
print("\ngraded transcripts:")
for transcript in answers:
    result = grade_answer(transcript, concepts, GAZETTEER)
    hits = ", ".join(m.display for m in result.matched) or "-"
    print(f"  {result.normalized:5.1%}  {transcript!r}")
    print(f"         matched: {hits}")

# pronoun resolution maps credit back onto the student's own words
result = grade_answer(
    "george washington and the delaware river. he crossed it.",
    concepts, GAZETTEER,
)
print("\ntoken highlighting for the pronoun answer:")
for m in result.matched:
    words = [result.tokens[i] for i in m.token_indices]
    print(f"  {m.display:<18} <- tokens {list(m.token_indices)} {words}")
