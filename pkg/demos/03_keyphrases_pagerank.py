"""Keyword extraction over a co-occurrence graph
================================================

Candidate stems become graph vertices, co-occurrence within a window
builds weighted edges, a damped ranking fixed point scores the vertices,
and adjacent keywords collapse into phrases.
"""

from tutorengine.keyconcepts import (
    KeyconceptConfig,
    build_graph,
    extract_keyphrases,
    pagerank,
)
from tutorengine.textprep import preprocess

PARAGRAPH = (
    "the french revolution changed french society. "
    "the revolution abolished the monarchy. "
    "french armies carried revolutionary ideas across europe. "
    "europe resisted the revolution for a generation."
)

text = preprocess(PARAGRAPH)
graph = build_graph(text, window=2)
print(f"graph: {len(graph.vertices)} vertices, {len(graph.edges) // 2} edges")
for (a, b), w in sorted(graph.edges.items()):
    if a < b:
        print(f"  {a} -- {b}  weight {w}")

ranks = pagerank(graph, damping=0.85, tol=1e-6, max_iter=100)
print(f"\nconverged={ranks.converged} after {ranks.iterations_used} iterations")
for stem, score in sorted(ranks.scores.items(), key=lambda kv: -kv[1]):
    print(f"  {stem:<10} {score:.4f}")

# the kept third of the vertices, with adjacent keywords collapsed
phrases = extract_keyphrases(text, KeyconceptConfig())
print("\nkeyphrases:")
for phrase in phrases:
    print(f"  {phrase.score:7.4f}  {phrase.surface}")
