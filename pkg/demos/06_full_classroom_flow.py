"""End-to-end classroom flow
============================

Prepares a deployment directory (corpus, index, embedding model,
gazetteer), then walks the full lifecycle: create a class, create a
question from sources, review concepts, approve, collect student answers,
read recommendations and class statistics.
"""

import tempfile
from pathlib import Path

from tutorengine import corpus as corpus_ops
from tutorengine.config import ServiceConfig
from tutorengine.crawler import Document, DocumentStore
from tutorengine.service import TutorEngine

SUBJECT = "us-history"
CORPUS = [
    "george washington led the continental army across the delaware river in 1776",
    "the continental army camped at valley forge during a harsh winter",
    "the battle of trenton surprised the hessian garrison",
    "the treaty of paris ended the revolutionary war in 1783",
    "benjamin franklin represented the colonies in paris",
]

workdir = Path(tempfile.mkdtemp(prefix="tutorengine-demo-"))
config = ServiceConfig(
    data_dir=str(workdir), subjects=(SUBJECT,), selfstudy_subject=SUBJECT,
    embedding_dim=16, embedding_epochs=20, embedding_min_count=1,
)

# operator setup: corpus -> index -> embedding model -> gazetteer
store = DocumentStore(config.corpus_path(SUBJECT))
for i, text in enumerate(CORPUS):
    store.add(Document.from_text(f"demo:{i}", SUBJECT, text))
corpus_ops.build_subject_index(config, SUBJECT)
corpus_ops.train_subject_model(config, SUBJECT)
gz = config.gazetteer_path(SUBJECT)
gz.parent.mkdir(parents=True, exist_ok=True)
gz.write_text(
    "george washington\tPERSON\tMASC\ncontinental army\tORGANIZATION\n"
    "delaware river\tLOCATION\ntrenton\tLOCATION\nvalley forge\tLOCATION\n",
    encoding="utf-8",
)

engine = TutorEngine(config)
cls = engine.create_class("ap us history, period 3", SUBJECT, ["bob", "carol"])
print("class:", cls["id"])

created = engine.create_question(cls["id"], "Describe the Delaware crossing.", [
    "george washington led the continental army across the delaware river. "
    "the crossing happened in 1776 before the battle of trenton.",
])
question = created["question"]
print(f"\nextracted {len(question['concepts'])} concepts:")
for c in question["concepts"][:6]:
    print(f"  {c['score']:7.4f}  {c['display']}")
print("drafted questions for review:")
for d in question["drafts"]:
    print(f"  - {d['text']}")

# the teacher boosts one concept and approves (edits grade immediately)
top = question["concepts"][0]
engine.update_concepts(question["id"], [
    {"action": "set", "stems": top["stems"], "score": round(top["score"] + 1, 4)},
    {"action": "add", "phrase": "surprise attack", "score": 1.0},
])

# a second question makes recommendations possible
other = engine.create_question(cls["id"], "What happened at Valley Forge?", [
    "the continental army camped at valley forge during a harsh winter. "
    "washington kept the army together through the cold.",
])
engine.approve_question(other["question"]["id"])

print("\nstudent answers:")
for student, transcript in [
    ("bob", "george washington crossed the delaware river and surprised trenton"),
    ("carol", "washington led his army. he attacked trenton."),
    ("bob", "i think it was about a boat"),
]:
    outcome = engine.submit_answer(question["id"], student, transcript)
    result = outcome["result"]
    print(f"  {student:<6} {result['normalized']:5.1%}  recommends {outcome['recommendations']}")

stats = engine.get_stats(cls["id"])
qstats = stats["per_question"][question["id"]]
print(f"\nclass stats: {qstats['attempts']} attempts, "
      f"mean {qstats['mean_normalized']:.2f}")
print("weakest concepts (min 3 attempts):")
for row in stats["weakest_concepts"]:
    print(f"  {row['hit_rate']:5.1%}  {row['display']}")

engine.close()
print(f"\ndata directory: {workdir} (delete when done)")
