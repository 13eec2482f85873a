"""Document embeddings and nearest-neighbor recommendation
==========================================================

Trains paragraph vectors with negative sampling on a toy corpus of three
themes, re-infers vectors against the frozen word matrix, and ranks
questions by cosine similarity the way the recommender does.
"""

import numpy as np

from tutorengine.embeddings import (
    Hyperparams,
    QuestionEmbedding,
    cosine,
    infer,
    recommend,
    train,
)

rng = np.random.default_rng(3)
THEMES = {
    "rivers": ["river", "crossing", "boat", "current", "bank"],
    "winters": ["winter", "snow", "cold", "camp", "frost"],
    "treaties": ["treaty", "peace", "diplomat", "signature", "paris"],
}

docs = []
labels = []
for theme, words in THEMES.items():
    for i in range(6):
        doc = list(rng.choice(words, 12)) + ["war", "army"]
        rng.shuffle(doc)
        docs.append([str(w) for w in doc])
        labels.append(f"{theme}-{i}")

hp = Hyperparams(dim=16, epochs=30, min_count=1, seed=9)
model = train(docs, hp)
print(f"trained |V|={len(model.vocab)} docs={len(docs)}")
print(f"epoch loss {model.epoch_losses[0]:.4f} -> {model.epoch_losses[-1]:.4f}")

# same-theme documents end up closer than cross-theme ones
same = cosine(model.doc_vectors[0], model.doc_vectors[1])
cross = cosine(model.doc_vectors[0], model.doc_vectors[7])
print(f"\ncosine(rivers-0, rivers-1)  = {same:.3f}")
print(f"cosine(rivers-0, winters-1) = {cross:.3f}")

# inference re-optimizes a fresh vector against the frozen word matrix;
# theme docs here are near-duplicates, so any same-theme hit is a success
vec = infer(model, docs[0])
sims = [cosine(vec, model.doc_vectors[j]) for j in range(len(docs))]
print(f"\nre-inferred rivers-0 lands nearest to: {labels[int(np.argmax(sims))]}")

# the question recommender is an exact cosine scan, ties by ascending id
store = [
    QuestionEmbedding(labels[i], tuple(model.doc_vectors[i]), model.version())
    for i in range(len(docs))
]
print("\nnearest 3 to rivers-0:", recommend("rivers-0", store, k=3))
print("nearest 3 to treaties-2:", recommend("treaties-2", store, k=3))
