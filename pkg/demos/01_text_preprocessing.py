"""Text preprocessing walkthrough
================================

Every stage of the engine consumes the same deterministic token stream:
normalized text, sentence splits, Porter stems and stopword flags.
"""

from tutorengine.textprep import normalize, preprocess

raw = "  George WASHINGTON crossed the Delaware\tRiver in 1776!  Was it cold? "

# normalization lowercases, strips controls, collapses whitespace
print("normalized:", repr(normalize(raw)))

# preprocessing keeps a parallel original-case view for entity rules
text = preprocess(raw)
print("\nsentences:", len(text.sentences))
for i, sentence in enumerate(text.sentences):
    print(f"  [{i}]", " ".join(t.surface for t in sentence))

print("\n  surface        stem           stopword  original")
for token in text.tokens():
    print(f"  {token.surface:<14} {token.stem:<14} {str(token.is_stopword):<9} {token.orig}")

# stems unify morphological variants, which is what answer matching uses
variants = preprocess("revolution revolutions revolutionary armies army")
print("\nstems:", variants.stems())
