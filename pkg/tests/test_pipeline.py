import json
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from chefmind.errors import EmptyQuery
from chefmind.graph import EDGE_MATCHES, Candidate, RetrievalPath
from chefmind.pipeline import MODES, PipelineConfig, Stores, dedup_and_rank, run_pipeline


def _run(stores, query, **overrides):
    return run_pipeline(query, PipelineConfig(**overrides), stores)


def _cand(rid, score, level):
    path = RetrievalPath(hops=((rid, EDGE_MATCHES, rid),), satisfied_conditions=("测试",))
    return Candidate(recipe_id=rid, match_score=score, level_id=level, path=path)


class TestPipelineConfig:
    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError, match="unknown mode"):
            PipelineConfig(mode="hybrid")

    @pytest.mark.parametrize("kwargs", [{"candidate_limit": 0}, {"fragments_per_candidate": 0}])
    def test_positive_limits_enforced(self, kwargs):
        with pytest.raises(ValueError):
            PipelineConfig(**kwargs)

    def test_mode_names_are_fixed(self):
        assert MODES == ("full", "llm_kg", "llm_rag")


class TestDedupAndRank:
    def test_lowest_level_owns_the_recipe(self):
        got = dedup_and_rank([_cand("r1", 0.5, 2), _cand("r1", 0.9, 1), _cand("r2", 0.4, 2)])
        assert [(c.recipe_id, c.level_id) for c in got] == [("r1", 1), ("r2", 2)]

    def test_same_level_keeps_higher_score(self):
        got = dedup_and_rank([_cand("r1", 0.3, 2), _cand("r1", 0.8, 2)])
        assert [(c.recipe_id, c.match_score) for c in got] == [("r1", 0.8)]

    def test_idempotent(self):
        cands = [_cand("r2", 0.5, 2), _cand("r1", 0.5, 2), _cand("r1", 1.0, 1)]
        once = dedup_and_rank(cands)
        assert dedup_and_rank(once) == once

    @settings(max_examples=200)
    @given(
        st.lists(
            st.builds(
                _cand,
                st.sampled_from(["r1", "r2", "r3"]),
                st.sampled_from([0.25, 0.5, 0.75, 1.0]),
                st.integers(min_value=1, max_value=5),
            ),
            max_size=12,
        )
    )
    def test_output_is_unique_ordered_and_dominant(self, cands):
        got = dedup_and_rank(cands)
        ids = [c.recipe_id for c in got]
        assert len(ids) == len(set(ids)) == len({c.recipe_id for c in cands})
        keys = [(c.level_id, -c.match_score, c.recipe_id) for c in got]
        assert keys == sorted(keys)
        for kept in got:
            rivals = [c for c in cands if c.recipe_id == kept.recipe_id]
            assert (kept.level_id, -kept.match_score) == min((c.level_id, -c.match_score) for c in rivals)


class TestFullMode:
    def test_clear_query_answers_from_the_graph(self, fixture_stores):
        response, trace = _run(fixture_stores, "番茄炒蛋的做法")
        assert response.demand_kind == "clear"
        assert [r.recipe_id for r in response.recipes] == ["f01"]
        top = response.recipes[0]
        assert top.name == "番茄炒蛋"
        assert top.level == 1
        assert top.score == 1.0
        assert top.reason.startswith("符合：")
        assert trace.outcome == "answered"
        assert trace.graph_screenings == 1
        assert not trace.used_fallback

    def test_snippets_are_anchored_to_their_own_recipe(self, fixture_stores):
        response, trace = _run(fixture_stores, "来个快手菜")
        assert response.recipes
        for entry in response.recipes:
            assert entry.snippets, entry.recipe_id
            for fid, _ in trace.fragments[entry.recipe_id]:
                assert fid.startswith(entry.recipe_id + "#")
        # one per-candidate vector search on the recipe's own fragments
        assert trace.vector_searches == len(response.recipes)

    def test_fuzzy_query_walks_the_levels(self, fixture_stores):
        response, trace = _run(fixture_stores, "来个快手菜")
        assert response.demand_kind == "fuzzy"
        assert [(r.recipe_id, r.level) for r in response.recipes] == [
            ("f01", 3),
            ("f06", 3),
            ("f03", 5),
            ("f05", 5),
        ]
        assert trace.conditions.max_prep_minutes == 20
        assert trace.conditions.required_keywords == ("快手",)

    def test_candidate_limit_cuts_the_list(self, fixture_stores):
        response, _ = _run(fixture_stores, "来个快手菜", candidate_limit=2)
        assert len(response.recipes) == 2

    def test_exclusion_respected_end_to_end(self, fixture_stores):
        response, trace = _run(fixture_stores, "不吃鸡蛋随便来")
        assert trace.conditions.excluded_ingredients == ("鸡蛋",)
        banned = {"f01", "f05"}
        assert banned.isdisjoint({r.recipe_id for r in response.recipes})
        assert response.recipes

    def test_refinement_failure_falls_back_to_fragments(self, fixture_stores):
        # a verbatim cooking step: derivation finds nothing, vectors do
        response, trace = _run(fixture_stores, "大火快炒两分钟")
        assert trace.conditions is None
        assert trace.used_fallback
        assert trace.outcome == "answered"
        assert [r.recipe_id for r in response.recipes] == ["f03"]
        assert response.recipes[0].level == 5
        assert "相似度" in response.recipes[0].reason

    def test_fallback_can_be_disabled(self, fixture_stores):
        response, trace = _run(fixture_stores, "大火快炒两分钟", rag_fallback=False)
        assert trace.outcome == "unprocessed"
        assert trace.unprocessed_reason == "RefinementFailed"
        assert trace.vector_searches == 0
        assert response.recipes == ()

    def test_empty_fallback_still_reports_no_candidates(self, fixture_stores):
        query = "不放番茄不放土豆不吃鸡蛋不要豆腐随便"
        response, trace = _run(fixture_stores, query)
        assert trace.outcome == "unprocessed"
        assert trace.unprocessed_reason == "NoCandidates"
        assert trace.vector_searches == 1
        assert not trace.used_fallback
        assert response.recipes == ()
        assert "未能找到" in response.narrative

    def test_blank_query_is_a_caller_error(self, fixture_stores):
        with pytest.raises(EmptyQuery):
            _run(fixture_stores, "   ")


class TestKgOnlyMode:
    def test_no_vector_leg_at_all(self, fixture_stores):
        response, trace = _run(fixture_stores, "来个快手菜", mode="llm_kg")
        assert trace.vector_searches == 0
        assert trace.fragments == {"f01": [], "f06": [], "f03": [], "f05": []}
        assert all(r.snippets == () for r in response.recipes)

    def test_same_candidates_as_full_mode(self, fixture_stores):
        kg, _ = _run(fixture_stores, "来个快手菜", mode="llm_kg")
        full, _ = _run(fixture_stores, "来个快手菜", mode="full")
        assert [r.recipe_id for r in kg.recipes] == [r.recipe_id for r in full.recipes]

    def test_no_fallback_without_the_vector_leg(self, fixture_stores):
        response, trace = _run(fixture_stores, "大火快炒两分钟", mode="llm_kg")
        assert trace.outcome == "unprocessed"
        assert trace.unprocessed_reason == "RefinementFailed"
        assert trace.vector_searches == 0


class TestRagOnlyMode:
    def test_query_anchored_retrieval(self, fixture_stores):
        response, trace = _run(fixture_stores, "番茄炒蛋", mode="llm_rag")
        assert trace.graph_screenings == 0
        assert trace.conditions is None
        assert trace.vector_searches == 1
        assert [r.recipe_id for r in response.recipes] == ["f01", "f02"]
        assert all(r.level == 5 for r in response.recipes)

    def test_fragments_group_under_their_recipe(self, fixture_stores):
        response, trace = _run(fixture_stores, "番茄炒蛋", mode="llm_rag")
        assert [fid for fid, _ in trace.fragments["f01"]] == ["f01#1", "f01#0"]
        assert len(response.recipes[0].snippets) == 2
        scores = [r.score for r in response.recipes]
        assert scores == sorted(scores, reverse=True)

    def test_nonsense_query_is_unprocessed(self, fixture_stores):
        response, trace = _run(fixture_stores, "zzq", mode="llm_rag")
        assert trace.outcome == "unprocessed"
        assert trace.unprocessed_reason == "BelowSimilarityFloor"
        assert response.recipes == ()
        assert "未能找到" in response.narrative

    def test_floor_is_configurable(self, fixture_stores):
        _, strict = _run(fixture_stores, "番茄炒蛋", mode="llm_rag", similarity_floor=0.25)
        kept = {rid for rid in strict.fragments}
        assert kept == {"f01"}


class TestTraceShape:
    def test_json_object_round_trips(self, fixture_stores):
        _, trace = _run(fixture_stores, "来个快手菜")
        obj = trace.to_json_obj()
        again = json.loads(json.dumps(obj, ensure_ascii=False))
        assert again == obj
        assert obj["mode"] == "full"
        assert obj["verdict"] == {
            "is_fuzzy": True,
            "triggered_terms": ["快手"],
            "length_triggered": False,
        }
        assert obj["conditions"]["max_prep_minutes"] == 20
        assert {c["recipe_id"] for c in obj["candidates"]} == set(obj["fragments"])
        for cand in obj["candidates"]:
            assert cand["satisfied_conditions"]
            assert all(len(hop) == 3 for hop in cand["hops"])

    def test_runs_are_deterministic(self, fixture_stores):
        first = _run(fixture_stores, "来个快手菜")
        second = _run(fixture_stores, "来个快手菜")
        assert first[0] == second[0]
        a = json.dumps(first[1].to_json_obj(), sort_keys=True, ensure_ascii=False)
        b = json.dumps(second[1].to_json_obj(), sort_keys=True, ensure_ascii=False)
        assert a == b


class TestStructuralHonesty:
    @pytest.mark.parametrize("mode", MODES)
    def test_every_returned_recipe_is_in_the_trace(self, fixture_stores, mode):
        queries = ["来个快手菜", "番茄炒蛋的做法", "想吃土豆和青椒", "随便", "大火快炒两分钟", "喝汤"]
        for query in queries:
            response, trace = _run(fixture_stores, query, mode=mode)
            traced = {c.recipe_id for c in trace.candidates}
            assert {r.recipe_id for r in response.recipes} <= traced


class TestStores:
    def test_prebuilt_index_is_reused(self, fixture_corpus, embedder, fixture_lexicon, fixture_rules, fixture_stores):
        stores = Stores.build(
            fixture_corpus, embedder, fixture_lexicon, fixture_rules, index=fixture_stores.index
        )
        assert stores.index is fixture_stores.index

    def test_chunk_size_changes_fragmentation(self, fixture_corpus, embedder, fixture_lexicon):
        fine = Stores.build(fixture_corpus, embedder, fixture_lexicon, chunk_size=2)
        coarse = Stores.build(fixture_corpus, embedder, fixture_lexicon, chunk_size=5)
        assert len(fine.index.fragments) > len(coarse.index.fragments)
