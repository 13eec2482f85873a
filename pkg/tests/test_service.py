import pytest

from envfixtures import SUBJECT, build_engine
from sitefixtures import page, serve
from tutorengine.embeddings import QuestionEmbedding, recommend
from tutorengine.service import (
    NotAvailableError,
    NotFoundError,
    TutorEngine,
    ValidationFailure,
)
from tutorengine.store import KVStore

SOURCE_A = (
    "george washington led the continental army across the delaware river. "
    "the crossing happened in 1776 before the battle of trenton."
)
SOURCE_B = (
    "valley forge was the winter camp of the continental army. "
    "washington kept the army together through the cold."
)
SOURCE_C = (
    "the treaty of paris ended the war in 1783. "
    "benjamin franklin negotiated in paris for the colonies."
)


@pytest.fixture
def engine(tmp_path):
    eng = build_engine(tmp_path)
    yield eng
    eng.close()


def make_class(engine, roster=("bob", "carol")):
    return engine.create_class("period 3", SUBJECT, list(roster))


def make_question(engine, cls, title="crossing", sources=(SOURCE_A,),
                  approve=True):
    created = engine.create_question(cls["id"], title, list(sources))
    question = created["question"]
    if approve:
        engine.approve_question(question["id"])
        question = engine.get_question(question["id"])
    return question


class TestClasses:
    def test_create_class(self, engine):
        cls = make_class(engine)
        assert cls["subject"] == SUBJECT
        assert engine.get_class(cls["id"]) == cls

    def test_unknown_subject_rejected(self, engine):
        with pytest.raises(ValidationFailure):
            engine.create_class("x", "no-such-subject", [])

    def test_unknown_class(self, engine):
        with pytest.raises(NotFoundError):
            engine.get_class("missing")


class TestCreateQuestion:
    def test_concepts_image_and_truncation(self, engine):
        cls = make_class(engine)
        created = engine.create_question(cls["id"], "t", [SOURCE_A])
        question = created["question"]
        assert 0 < len(question["concepts"]) <= engine.config.max_concepts
        scores = [c["score"] for c in question["concepts"]]
        assert scores == sorted(scores, reverse=True)
        assert not question["approved"]
        assert question["embedding"] is not None
        assert question["drafts"]

    def test_same_request_twice_distinct_ids(self, engine):
        cls = make_class(engine)
        q1 = engine.create_question(cls["id"], "t", [SOURCE_A])["question"]
        q2 = engine.create_question(cls["id"], "t", [SOURCE_A])["question"]
        assert q1["id"] != q2["id"]

    def test_url_sources_fetched_through_crawler(self, engine):
        pages = {"/article": page("delaware crossing details")}
        with serve(pages) as (base, _):
            created = engine.create_question(
                make_class(engine)["id"], "t", [base + "/article"]
            )
        assert created["warnings"] == []
        assert created["question"]["sources"]

    def test_unreachable_url_warns_but_survives(self, engine):
        cls = make_class(engine)
        created = engine.create_question(
            cls["id"], "t",
            ["http://127.0.0.1:9/unreachable", SOURCE_A],
        )
        assert len(created["warnings"]) == 1
        assert created["question"]["concepts"]

    def test_all_sources_failed_rejected(self, engine):
        cls = make_class(engine)
        with pytest.raises(ValidationFailure, match="all sources failed"):
            engine.create_question(cls["id"], "t", ["http://127.0.0.1:9/x"])

    def test_no_sources_rejected(self, engine):
        with pytest.raises(ValidationFailure):
            engine.create_question(make_class(engine)["id"], "t", [])


class TestUpdateConcepts:
    def test_edit_visible_in_grading(self, engine):
        cls = make_class(engine)
        question = make_question(engine, cls)
        target = question["concepts"][0]
        engine.update_concepts(question["id"], [
            {"action": "set", "stems": target["stems"], "score": 3.0},
        ])
        outcome = engine.submit_answer(
            question["id"], "bob", target["display"]
        )
        matched = {
            tuple(m["stems"]): m["score"]
            for m in outcome["result"]["matched"]
        }
        assert matched[tuple(target["stems"])] == 3.0

    def test_delete_all_rejected(self, engine):
        question = make_question(engine, make_class(engine))
        edits = [
            {"action": "delete", "stems": c["stems"]}
            for c in question["concepts"]
        ]
        with pytest.raises(ValidationFailure):
            engine.update_concepts(question["id"], edits)

    def test_add_concept_absent_from_sources(self, engine):
        question = make_question(engine, make_class(engine))
        updated = engine.update_concepts(question["id"], [
            {"action": "add", "phrase": "yorktown siege", "score": 2.0},
        ])
        added = next(
            c for c in updated["concepts"] if c["display"] == "yorktown siege"
        )
        assert added["in_kc"] is False
        assert added["in_ne"] is False
        assert added["teacher_edited"] is True

    def test_negative_score_rejected(self, engine):
        question = make_question(engine, make_class(engine))
        with pytest.raises(ValidationFailure):
            engine.update_concepts(question["id"], [
                {"action": "set",
                 "stems": question["concepts"][0]["stems"], "score": -1},
            ])

    def test_unknown_question_rejected(self, engine):
        with pytest.raises(NotFoundError):
            engine.update_concepts("missing", [])

    def test_update_marks_approved(self, engine):
        question = make_question(engine, make_class(engine), approve=False)
        assert not question["approved"]
        updated = engine.update_concepts(question["id"], [])
        assert updated["approved"]


class TestApproval:
    def test_draft_promotion(self, engine):
        cls = make_class(engine)
        question = make_question(engine, cls, approve=False)
        outcome = engine.approve_question(question["id"], drafts=[0])
        assert outcome["question"]["approved"]
        promoted = outcome["promoted"][0]
        assert promoted["generated"] is True
        assert promoted["approved"] is True
        assert promoted["title"] == question["drafts"][0]["text"]

    def test_bad_draft_index(self, engine):
        question = make_question(engine, make_class(engine), approve=False)
        with pytest.raises(ValidationFailure):
            engine.approve_question(question["id"], drafts=[99])


class TestStudentView:
    def test_student_sees_only_approved_titles(self, engine):
        cls = make_class(engine)
        approved = make_question(engine, cls, title="visible")
        make_question(engine, cls, title="hidden", approve=False)
        rows = engine.list_questions(cls["id"], role="student")
        assert rows == [{"id": approved["id"], "title": "visible"}]

    def test_teacher_sees_everything(self, engine):
        cls = make_class(engine)
        make_question(engine, cls, approve=False)
        rows = engine.list_questions(cls["id"], role="teacher")
        assert len(rows) == 1
        assert "concepts" in rows[0]


class TestSubmitAnswer:
    def test_unapproved_question_not_available(self, engine):
        question = make_question(engine, make_class(engine), approve=False)
        with pytest.raises(NotAvailableError, match="not available"):
            engine.submit_answer(question["id"], "bob", "anything")

    def test_unenrolled_student_rejected(self, engine):
        question = make_question(engine, make_class(engine, roster=("bob",)))
        with pytest.raises(NotAvailableError):
            engine.submit_answer(question["id"], "mallory", "anything")

    def test_answer_persisted(self, engine):
        question = make_question(engine, make_class(engine))
        engine.submit_answer(question["id"], "bob", "washington crossed")
        answers = engine.store.scan(f"answer/{question['id']}/")
        assert len(answers) == 1
        assert answers[0][1]["student_id"] == "bob"

    def test_recommendations_bounded_by_class(self, engine):
        cls = make_class(engine)
        q1 = make_question(engine, cls, "crossing", [SOURCE_A])
        make_question(engine, cls, "forge", [SOURCE_B])
        outcome = engine.submit_answer(q1["id"], "bob", "washington")
        assert len(outcome["recommendations"]) <= 1

    def test_recommendations_match_knn_oracle(self, engine):
        cls = make_class(engine)
        questions = [
            make_question(engine, cls, f"q{i}", [src])
            for i, src in enumerate([SOURCE_A, SOURCE_B, SOURCE_C, SOURCE_A + " again"])
        ]
        target = questions[0]
        store = [
            QuestionEmbedding(
                q["id"], tuple(q["embedding"]["vector"]),
                q["embedding"]["model_version"],
            )
            for q in (engine.get_question(q["id"]) for q in questions)
        ]
        expected = recommend(target["id"], store, k=3)
        got = engine.recommendations(target["id"])
        assert got == expected
        assert len(got) == 3

    def test_unapproved_questions_never_recommended(self, engine):
        cls = make_class(engine)
        q1 = make_question(engine, cls, "a", [SOURCE_A])
        make_question(engine, cls, "b", [SOURCE_B], approve=False)
        assert engine.recommendations(q1["id"]) == []


class TestStats:
    def test_mean_and_histogram(self, engine):
        cls = make_class(engine)
        question = make_question(engine, cls)
        top = question["concepts"][0]["display"]
        engine.submit_answer(question["id"], "bob", " ".join(
            c["display"] for c in question["concepts"]
        ))
        engine.submit_answer(question["id"], "carol", top)
        engine.submit_answer(question["id"], "bob", "")
        stats = engine.get_stats(cls["id"])
        qstats = stats["per_question"][question["id"]]
        assert qstats["attempts"] == 3
        assert sum(qstats["histogram"]) == 3
        assert qstats["histogram"][9] >= 1  # the full restatement
        assert qstats["histogram"][0] >= 1  # the empty answer

    def test_hit_rate(self, engine):
        cls = make_class(engine)
        question = make_question(engine, cls)
        top = question["concepts"][0]
        for student, text in [("bob", top["display"]), ("carol", top["display"]),
                              ("bob", "nothing relevant"), ("carol", "unrelated")]:
            engine.submit_answer(question["id"], student, text)
        stats = engine.get_stats(cls["id"])
        entry = stats["per_concept"][" ".join(top["stems"])]
        assert entry["attempts"] == 4
        assert entry["hits"] == 2
        assert entry["hit_rate"] == pytest.approx(0.5)

    def test_incremental_equals_recomputed(self, engine):
        cls = make_class(engine)
        q1 = make_question(engine, cls, "a", [SOURCE_A])
        q2 = make_question(engine, cls, "b", [SOURCE_B])
        answers = ["washington led the army", "", "valley forge winter",
                   "the continental army crossed the delaware river",
                   "trenton and the hessian garrison"]
        for i, text in enumerate(answers):
            engine.submit_answer((q1 if i % 2 else q2)["id"], "bob", text)
        assert engine.get_stats(cls["id"]) == engine.get_stats_incremental(cls["id"])

    def test_empty_class_zeroed(self, engine):
        cls = make_class(engine)
        stats = engine.get_stats(cls["id"])
        assert stats["per_question"] == {}
        assert stats["weakest_concepts"] == []

    def test_weakest_needs_three_attempts(self, engine):
        cls = make_class(engine)
        question = make_question(engine, cls)
        engine.submit_answer(question["id"], "bob", "")
        engine.submit_answer(question["id"], "carol", "")
        assert engine.get_stats(cls["id"])["weakest_concepts"] == []
        engine.submit_answer(question["id"], "bob", "")
        weakest = engine.get_stats(cls["id"])["weakest_concepts"]
        assert 0 < len(weakest) <= 5
        rates = [w["hit_rate"] for w in weakest]
        assert rates == sorted(rates)


class TestSelfStudy:
    def test_pipeline_reuse(self, engine):
        created = engine.self_study_create("bob", "my topic", [SOURCE_C])
        question = created["question"]
        assert question["approved"] is True
        assert question["owner"] == "bob"
        assert question["concepts"]
        assert question["class_id"] == "self-bob"
        # owner can answer immediately
        outcome = engine.submit_answer(question["id"], "bob", "franklin in paris")
        assert outcome["result"]["total_score"] > 0

    def test_empty_sources_rejected(self, engine):
        with pytest.raises(ValidationFailure):
            engine.self_study_create("bob", "t", [])


class TestPersistence:
    def test_round_trip_byte_identical(self, tmp_path):
        engine = build_engine(tmp_path)
        cls = make_class(engine)
        question = make_question(engine, cls)
        for text in ["washington", "the delaware river", "", "trenton fell",
                     "the continental army crossed"]:
            engine.submit_answer(question["id"], "bob", text)
        before = engine.store.dump()
        config = engine.config
        engine.close()

        reopened = TutorEngine(config, KVStore(config.store_path()))
        after = reopened.store.dump()
        assert after == before
        # stats recompute identically after restart
        assert reopened.get_stats(cls["id"]) == reopened.get_stats_incremental(cls["id"])
        reopened.close()

    def test_custom_templates_file_honored(self, tmp_path):
        from envfixtures import build_env

        config = build_env(tmp_path)
        templates = config.templates_path()
        templates.parent.mkdir(parents=True, exist_ok=True)
        templates.write_text("Explain <concept> in one sentence.\n",
                             encoding="utf-8")
        engine = TutorEngine(config)
        question = make_question(engine, make_class(engine), approve=False)
        assert all(
            d["text"].startswith("Explain ") for d in question["drafts"]
        )
        engine.close()

    def test_no_model_degrades_gracefully(self, tmp_path):
        engine = build_engine(tmp_path, with_model=False)
        cls = make_class(engine)
        question = make_question(engine, cls)
        assert question["embedding"] is None
        outcome = engine.submit_answer(question["id"], "bob", "washington")
        assert outcome["recommendations"] == []
        engine.close()
