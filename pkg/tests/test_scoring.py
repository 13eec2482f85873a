import math
import random

import pytest

from tutorengine.ner import Gazetteer
from tutorengine.scoring import (
    AnswerResult,
    ConceptScore,
    ConceptSets,
    NoSourceMaterialError,
    ScoringConfig,
    build_concept_list,
    grade_answer,
    merge_phrases,
    word_score,
)
from tutorengine.textprep import preprocess
from tutorengine.tfidf import SubjectIndex, build_index

GW = ConceptScore(stems=("georg", "washington"), display="george washington",
                  score=2.5, in_kc=False, in_ne=True)
CA = ConceptScore(stems=("continent", "armi"), display="continental army",
                  score=1.8, in_kc=True, in_ne=True)
DE = ConceptScore(stems=("delawar",), display="delaware",
                  score=0.9, in_kc=True, in_ne=False)
SPEC_CONCEPTS = [GW, CA, DE]


def sets(kc=(), ne=()):
    return ConceptSets(kc=frozenset(kc), ne=frozenset(ne))


class TestWordScore:
    def test_kc_only(self):
        cfg = ScoringConfig(alpha=0.5, beta=0.7)
        s = sets(kc=[("w",)])
        assert word_score("w", 0.3, 1.0, s, cfg) == pytest.approx(0.80)

    def test_membership_in_neither(self):
        cfg = ScoringConfig(alpha=0.5, beta=0.7)
        assert word_score("w", 0.25, 2.0, sets(), cfg) == pytest.approx(0.5)

    def test_both_sets_zero_tfidf(self):
        cfg = ScoringConfig(alpha=0.5, beta=0.7)
        s = sets(kc=[("w",)], ne=[("w",)])
        assert word_score("w", 0.0, 3.0, s, cfg) == pytest.approx(1.20)

    def test_phrase_membership_counts(self):
        # membership via a multiword phrase still earns the bonus
        s = sets(kc=[("a", "b")])
        assert word_score("a", 0.0, 1.0, s, ScoringConfig()) == pytest.approx(1.0)

    def test_alpha_beta_zero_degenerates_to_tfidf(self):
        s = sets(kc=[("w",)], ne=[("w",)])
        cfg = ScoringConfig(alpha=0.0, beta=0.0)
        assert word_score("w", 0.4, 1.5, s, cfg) == pytest.approx(0.6)

    def test_eq_oracle_randomized(self):
        rng = random.Random(13)
        for _ in range(500):
            tf = rng.uniform(0, 1)
            idf = rng.uniform(0, 4)
            in_kc = rng.random() < 0.5
            in_ne = rng.random() < 0.5
            alpha = rng.uniform(0, 2)
            beta = rng.uniform(0, 2)
            s = sets(kc=[("w",)] if in_kc else [], ne=[("w",)] if in_ne else [])
            got = word_score("w", tf, idf, s, ScoringConfig(alpha=alpha, beta=beta))
            expected = tf * idf + (alpha if in_kc else 0.0) + (beta if in_ne else 0.0)
            assert abs(got - expected) < 1e-12


class TestMergePhrases:
    def test_adjacent_ne_pair_sums(self):
        text = preprocess("george washington led")
        s = sets(ne=[("georg", "washington")])
        scores = {"georg": 1.1, "washington": 1.3, "led": 0.5}
        concepts = merge_phrases(text, s, scores)
        phrase = next(c for c in concepts if len(c.stems) == 2)
        assert phrase.score == pytest.approx(2.4)
        assert phrase.in_ne and not phrase.in_kc

    def test_no_multiword_matches_all_unigrams(self):
        text = preprocess("alpha bravo charlie")
        concepts = merge_phrases(text, sets(), {"alpha": 1.0, "bravo": 0.5, "charli": 0.2})
        assert all(len(c.stems) == 1 for c in concepts)

    def test_fixture_golden_merge(self):
        # hand-applied merge rule over two sentences
        text = preprocess(
            "george washington led the continental army. "
            "the army crossed the delaware."
        )
        s = sets(
            kc=[("armi",), ("led",)],
            ne=[("georg", "washington"), ("continent", "armi"), ("delawar",)],
        )
        scores = {"georg": 1.1, "washington": 1.3, "led": 0.5,
                  "continent": 0.8, "armi": 0.9, "cross": 0.4, "delawar": 0.6}
        concepts = merge_phrases(text, s, scores)
        golden = [
            (("georg", "washington"), 2.4),
            (("continent", "armi"), 1.7),
            (("armi",), 0.9),
            (("delawar",), 0.6),
            (("led",), 0.5),
            (("cross",), 0.4),
        ]
        assert [(c.stems, round(c.score, 6)) for c in concepts] == golden

    def test_duplicates_keep_max_score(self):
        text = preprocess("alpha beta. alpha beta.")
        concepts = merge_phrases(text, sets(), {"alpha": 1.0, "beta": 0.5})
        assert len([c for c in concepts if c.stems == ("alpha",)]) == 1

    def test_stopwords_never_become_unigrams(self):
        text = preprocess("the alpha")
        concepts = merge_phrases(text, sets(), {"the": 9.0, "alpha": 1.0})
        assert [c.stems for c in concepts] == [("alpha",)]

    def test_phrase_content_stems_exclude_stopwords(self):
        text = preprocess("statue of liberty")
        s = sets(ne=[("statu", "of", "liberti")])
        concepts = merge_phrases(text, s, {"statu": 1.0, "liberti": 1.0})
        phrase = concepts[0]
        assert phrase.stems == ("statu", "of", "liberti")
        assert phrase.content_stems == ("statu", "liberti")


FIXTURE_SOURCES = [
    "george washington led the continental army",
    "the continental army crossed the delaware",
]
FIXTURE_INDEX = build_index("us-history", [
    ["georg", "washington"], ["continent", "armi"],
    ["delawar", "river"], ["georg", "armi"],
])
FIXTURE_GAZETTEER = Gazetteer.from_pairs([
    ("george washington", "PERSON"),
    ("continental army", "ORGANIZATION"),
    ("delaware", "LOCATION"),
])


def fixture_concepts():
    return build_concept_list(
        FIXTURE_SOURCES, FIXTURE_INDEX, gazetteer=FIXTURE_GAZETTEER
    )


class TestBuildConceptList:
    def test_default_max_concepts_is_20(self):
        assert ScoringConfig().max_concepts == 20

    def test_stopword_only_source_gives_empty_list(self):
        idx = build_index("s", [["x"]])
        assert build_concept_list(["the of and"], idx) == []

    def test_empty_sources_rejected(self):
        idx = build_index("s", [["x"]])
        with pytest.raises(NoSourceMaterialError):
            build_concept_list([], idx)
        with pytest.raises(NoSourceMaterialError):
            build_concept_list(["", "  "], idx)

    def test_fixture_golden_pairs(self):
        # composed from the per-module oracles: hand-enumerated windows,
        # linear-solve ranking (kept = armi, washington, continent),
        # closed-form idf over the 4-doc index, and the hand-applied merge
        concepts = fixture_concepts()
        ln = math.log
        idf = {t: ln(5 / (1 + df)) + 1 for t, df in
               {"georg": 2, "washington": 1, "continent": 1,
                "armi": 2, "delawar": 1}.items()}
        idf["led"] = idf["cross"] = ln(5.0) + 1
        ws = {
            "georg": idf["georg"] / 9 + 1.0,
            "washington": idf["washington"] / 9 + 2.0,
            "continent": 2 * idf["continent"] / 9 + 2.0,
            "armi": 2 * idf["armi"] / 9 + 2.0,
            "delawar": idf["delawar"] / 9 + 1.0,
            "led": idf["led"] / 9,
            "cross": idf["cross"] / 9,
        }
        golden = [
            (("continent", "armi"), "continental army", ws["continent"] + ws["armi"]),
            (("georg", "washington"), "george washington", ws["georg"] + ws["washington"]),
            (("delawar",), "delaware", ws["delawar"]),
            (("cross",), "crossed", ws["cross"]),
            (("led",), "led", ws["led"]),
        ]
        assert len(concepts) == len(golden)
        for concept, (stems, display, score) in zip(concepts, golden):
            assert concept.stems == stems
            assert concept.display == display
            assert concept.score == pytest.approx(score, abs=1e-9)

    def test_scores_descending_and_truncated(self):
        concepts = build_concept_list(
            FIXTURE_SOURCES, FIXTURE_INDEX,
            cfg=ScoringConfig(max_concepts=3), gazetteer=FIXTURE_GAZETTEER,
        )
        assert len(concepts) == 3
        assert [c.score for c in concepts] == sorted(
            (c.score for c in concepts), reverse=True
        )


class TestGradeAnswer:
    def test_partial_hits_earn_full_scores(self):
        result = grade_answer(
            "washington reached the delaware", SPEC_CONCEPTS, use_coref=False
        )
        assert result.total_score == pytest.approx(3.4)
        assert result.max_score == pytest.approx(5.2)
        assert result.normalized == pytest.approx(0.6538, abs=1e-4)
        assert {m.display for m in result.matched} == {
            "george washington", "delaware"
        }

    def test_full_restatement_scores_one(self):
        result = grade_answer(
            "the continental army and george washington crossed the delaware",
            SPEC_CONCEPTS,
        )
        assert result.normalized == pytest.approx(1.0)

    def test_empty_transcript_valid_zero(self):
        result = grade_answer("", SPEC_CONCEPTS)
        assert result.total_score == 0.0
        assert result.max_score == pytest.approx(5.2)
        assert result.normalized == 0.0
        assert result.matched == ()

    def test_concept_credited_once(self):
        result = grade_answer(
            "delaware delaware delaware", SPEC_CONCEPTS, use_coref=False
        )
        assert result.total_score == pytest.approx(0.9)
        assert len(result.matched) == 1

    def test_stopword_member_never_triggers_hit(self):
        concept = ConceptScore(
            stems=("the", "delawar"), display="the delaware", score=1.0,
            in_kc=False, in_ne=True, content_stems=("delawar",),
        )
        result = grade_answer("the river froze", [concept], use_coref=False)
        assert result.total_score == 0.0

    def test_matched_indices_point_at_answer_tokens(self):
        result = grade_answer(
            "washington reached the delaware", SPEC_CONCEPTS, use_coref=False
        )
        by_display = {m.display: m.token_indices for m in result.matched}
        assert by_display["george washington"] == (0,)
        assert by_display["delaware"] == (3,)

    def test_stems_match_morphological_variants(self):
        result = grade_answer(
            "several revolutions",
            [ConceptScore(stems=("revolut",), display="revolution", score=1.0,
                          in_kc=True, in_ne=False)],
            use_coref=False,
        )
        assert result.total_score == pytest.approx(1.0)


COREF_GAZETTEER = Gazetteer.from_pairs([
    ("george washington", "PERSON", "MASC"),
    ("delaware river", "LOCATION"),
    ("trenton", "LOCATION"),
])
COREF_CONCEPTS = [
    ConceptScore(stems=("georg", "washington"), display="george washington",
                 score=2.0, in_kc=False, in_ne=True),
    ConceptScore(stems=("delawar", "river"), display="delaware river",
                 score=1.5, in_kc=True, in_ne=True),
    ConceptScore(stems=("trenton",), display="trenton",
                 score=1.0, in_kc=False, in_ne=True),
]
COREF_ANSWERS = [
    "george washington was bold. he crossed the delaware river.",
    "the delaware river froze. it stayed solid.",
    "george washington led. his army followed him to trenton.",
    "trenton fell. that shocked everyone.",
    "george washington and the delaware river. he crossed it.",
    "the army reached trenton. they rested there.",
    "george washington planned. he attacked trenton. it surrendered.",
    "the delaware river ran high. george washington crossed it anyway.",
    "trenton mattered. george washington knew its value.",
    "george washington won. he celebrated. he rested.",
]


class TestCorefGrading:
    @pytest.mark.parametrize("answer", COREF_ANSWERS)
    def test_resolve_never_lowers_score(self, answer):
        with_coref = grade_answer(answer, COREF_CONCEPTS, COREF_GAZETTEER)
        without = grade_answer(answer, COREF_CONCEPTS, COREF_GAZETTEER,
                               use_coref=False)
        assert with_coref.total_score >= without.total_score

    def test_pronoun_positions_join_the_feedback(self):
        # "he crossed it": resolution maps the pronouns back onto the
        # matched concepts so the student sees why they earned credit
        answer = "george washington and the delaware river. he crossed it."
        result = grade_answer(answer, COREF_CONCEPTS, COREF_GAZETTEER)
        tokens = list(result.tokens)
        he_idx = tokens.index("he")
        it_idx = tokens.index("it")
        by_display = {m.display: m.token_indices for m in result.matched}
        assert he_idx in by_display["george washington"]
        assert it_idx in by_display["delaware river"]


class TestInvariants:
    def test_append_concept_stem_monotonic(self):
        rng = random.Random(5)
        words = ["battle", "winter", "valley", "musket", "treaty", "harbor"]
        for _ in range(50):
            concepts = [
                ConceptScore(stems=(w,), display=w, score=rng.uniform(0.1, 3),
                             in_kc=True, in_ne=False)
                for w in rng.sample(words, 3)
            ]
            transcript = " ".join(rng.choices(words, k=rng.randint(0, 6)))
            base = grade_answer(transcript, concepts, use_coref=False)
            appended = grade_answer(
                (transcript + " " + concepts[0].stems[0]).strip(),
                concepts, use_coref=False,
            )
            assert appended.total_score >= base.total_score - 1e-12

    def test_sentence_permutation_invariance_without_coref(self):
        sentences = ["washington led the army.", "the delaware froze.",
                     "trenton fell."]
        a = grade_answer(" ".join(sentences), SPEC_CONCEPTS, use_coref=False)
        b = grade_answer(" ".join(reversed(sentences)), SPEC_CONCEPTS,
                         use_coref=False)
        assert a.total_score == pytest.approx(b.total_score)
        assert {m.display for m in a.matched} == {m.display for m in b.matched}

    def test_score_scaling_invariance(self):
        answer = "washington crossed the delaware"
        base = grade_answer(answer, SPEC_CONCEPTS, use_coref=False)
        for c_factor in (0.5, 3.0, 10.0):
            scaled_concepts = [
                ConceptScore(stems=c.stems, display=c.display,
                             score=c.score * c_factor, in_kc=c.in_kc,
                             in_ne=c.in_ne, content_stems=c.content_stems)
                for c in SPEC_CONCEPTS
            ]
            scaled = grade_answer(answer, scaled_concepts, use_coref=False)
            assert scaled.total_score == pytest.approx(base.total_score * c_factor)
            assert scaled.max_score == pytest.approx(base.max_score * c_factor)
            assert scaled.normalized == pytest.approx(base.normalized)
            assert [m.stems for m in scaled.matched] == [
                m.stems for m in base.matched
            ]

    def test_total_equals_sum_of_matched(self):
        rng = random.Random(21)
        words = ["battle", "winter", "valley", "musket", "treaty"]
        for _ in range(50):
            concepts = [
                ConceptScore(stems=(w,), display=w, score=rng.uniform(0, 2),
                             in_kc=True, in_ne=False)
                for w in words
            ]
            transcript = " ".join(rng.choices(words + ["noise"], k=8))
            result = grade_answer(transcript, concepts, use_coref=False)
            assert result.total_score == pytest.approx(
                sum(m.score for m in result.matched)
            )
            assert result.total_score <= result.max_score + 1e-12

    def test_negative_score_rejected(self):
        with pytest.raises(ValueError):
            ConceptScore(stems=("x",), display="x", score=-1.0,
                         in_kc=False, in_ne=False)

    def test_empty_stems_rejected(self):
        with pytest.raises(ValueError):
            ConceptScore(stems=(), display="", score=1.0,
                         in_kc=False, in_ne=False)


class TestSerialization:
    def test_concept_round_trip(self):
        for concept in SPEC_CONCEPTS:
            assert ConceptScore.from_dict(concept.to_dict()) == concept

    def test_answer_result_dict(self):
        result = grade_answer("washington", SPEC_CONCEPTS, use_coref=False)
        payload = result.to_dict()
        assert payload["total_score"] == result.total_score
        assert payload["tokens"] == ["washington"]
        assert isinstance(payload["matched"], list)
