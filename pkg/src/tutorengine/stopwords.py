"""Embedded English stopword list.

The list is fixed at 179 entries and versioned with the repository so that
token streams, indices and concept lists stay reproducible across
deployments. Matching is by exact lowercase surface form.
"""

STOPWORDS = frozenset({
    "a", "about", "above", "after", "again", "against", "all",
    "almost", "already", "also", "although", "am", "among", "an",
    "and", "another", "any", "anyone", "anything", "are", "around",
    "as", "at", "be", "became", "because", "become", "becomes",
    "been", "before", "being", "below", "between", "both", "but",
    "by", "can", "cannot", "could", "did", "do", "does",
    "doing", "down", "during", "each", "either", "else",
    "ever", "every", "everyone", "everything", "few", "for", "from",
    "further", "had", "has", "have", "having", "he", "her",
    "here", "hers", "herself", "him", "himself", "his", "how",
    "however", "i", "if", "in", "into", "is", "it",
    "its", "itself", "just", "many", "may", "me", "might",
    "more", "most", "much", "must", "my", "myself", "neither",
    "no", "nobody", "none", "nor", "not", "nothing", "now",
    "of", "off", "often", "on", "once", "one", "only",
    "onto", "or", "other", "otherwise", "our", "ours", "ourselves",
    "out", "over", "own", "per", "perhaps", "quite", "rather",
    "really", "same", "several", "shall", "she", "should",
    "since", "so", "some", "something", "sometimes", "such",
    "than", "that", "the", "their", "theirs", "them", "themselves",
    "then", "there", "these", "they", "this", "those", "though",
    "through", "throughout", "to", "too", "toward", "towards", "under",
    "until", "up", "upon", "very", "via", "was", "we",
    "were", "what", "when", "where", "whether", "which", "while",
    "who", "whom", "why", "will", "with", "within", "without",
    "would", "yet", "you", "your", "yours", "yourself", "yourselves",
})


def is_stopword(surface: str) -> bool:
    return surface in STOPWORDS
