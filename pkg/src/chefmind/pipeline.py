"""End-to-end recommendation workflow and its ablation configurations.

One entry point, three modes. The full mode routes by the fuzzy verdict,
screens candidates in the graph, attaches per-candidate fragment details,
and integrates via the generator; llm_kg drops the vector leg entirely;
llm_rag drops graph screening and retrieves by query vector alone. Every
run yields a trace sufficient to audit each stage, including a counter of
vector searches and graph screenings so mode containment is checkable.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from chefmind.analyzer import (
    FuzzyVerdict,
    Query,
    ScenarioRule,
    ScreeningConditions,
    build_search_plan,
    derive_clear_conditions,
    detect_fuzzy,
    refine_fuzzy,
)
from chefmind.corpus import Corpus, build_fragments, recipe_profile_text
from chefmind.errors import NoCandidates, RefinementFailed
from chefmind.gateway import (
    Generator,
    MockGenerator,
    RecommendationResponse,
    compose_prompt,
    integrate,
)
from chefmind.graph import (
    EDGE_MATCHES,
    Candidate,
    GraphStore,
    LevelScores,
    RetrievalPath,
    build_graph,
    screen_candidates,
)
from chefmind.vectors import Embedder, VectorIndex, embed_fragments, index_fragments, search_topk

MODES = ("full", "llm_kg", "llm_rag")

_NO_RESULT_NARRATIVE = "未能找到符合需求的菜谱，请尝试补充菜名、食材或口味偏好。"


@dataclass(frozen=True)
class PipelineConfig:
    mode: str = "full"
    candidate_limit: int = 10
    fragments_per_candidate: int = 3
    similarity_floor: float = 0.15
    home_tag: str = "家常"
    quick_minutes_default: int = 30
    prompt_length_cap: int = 8000
    rag_fallback: bool = True
    level_scores: LevelScores = field(default_factory=LevelScores)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.candidate_limit < 1 or self.fragments_per_candidate < 1:
            raise ValueError("candidate_limit and fragments_per_candidate must be >= 1")


@dataclass(frozen=True)
class Stores:
    """One consistent generation of everything a pipeline run reads."""

    corpus: Corpus
    graph: GraphStore
    index: VectorIndex
    embedder: Embedder
    lexicon: frozenset[str]
    rules: tuple[ScenarioRule, ...]
    recipe_vectors: dict[str, np.ndarray] = field(repr=False)
    generator: Generator = field(default_factory=MockGenerator)

    @staticmethod
    def build(
        corpus: Corpus,
        embedder: Embedder,
        lexicon: frozenset[str],
        rules: Sequence[ScenarioRule] = (),
        *,
        generator: Optional[Generator] = None,
        chunk_size: int = 3,
        index: Optional[VectorIndex] = None,
    ) -> "Stores":
        graph = build_graph(corpus)
        if index is None:
            fragments = embed_fragments(build_fragments(corpus, chunk_size=chunk_size), embedder)
            index = index_fragments(fragments, dimension=embedder.dimension)
        recipe_vectors = {
            rid: embedder.embed(recipe_profile_text(corpus.recipes[rid], corpus))
            for rid in sorted(corpus.recipes)
        }
        return Stores(
            corpus=corpus,
            graph=graph,
            index=index,
            embedder=embedder,
            lexicon=lexicon,
            rules=tuple(rules),
            recipe_vectors=recipe_vectors,
            generator=generator or MockGenerator(),
        )


@dataclass(frozen=True)
class EnrichedCandidate:
    candidate: Candidate
    details: tuple[tuple, ...]  # (Fragment, score) pairs, score desc
    name: str
    ingredient_names: tuple[str, ...]

    def with_details(self, details) -> "EnrichedCandidate":
        return replace(self, details=tuple(details))


@dataclass
class PipelineTrace:
    query: str
    mode: str
    verdict: Optional[FuzzyVerdict] = None
    conditions: Optional[ScreeningConditions] = None
    candidates: list[Candidate] = field(default_factory=list)
    fragments: dict[str, list[tuple[str, float]]] = field(default_factory=dict)
    outcome: str = "answered"
    unprocessed_reason: Optional[str] = None
    vector_searches: int = 0
    graph_screenings: int = 0
    used_fallback: bool = False

    def to_json_obj(self) -> dict:
        return {
            "query": self.query,
            "mode": self.mode,
            "verdict": None
            if self.verdict is None
            else {
                "is_fuzzy": self.verdict.is_fuzzy,
                "triggered_terms": list(self.verdict.triggered_terms),
                "length_triggered": self.verdict.length_triggered,
            },
            "conditions": None
            if self.conditions is None
            else {
                "name_pattern": self.conditions.name_pattern,
                "required_ingredients": list(self.conditions.required_ingredients),
                "excluded_ingredients": list(self.conditions.excluded_ingredients),
                "required_keywords": list(self.conditions.required_keywords),
                "dish_type": self.conditions.dish_type,
                "max_prep_minutes": self.conditions.max_prep_minutes,
                "broad_terms": list(self.conditions.broad_terms),
            },
            "candidates": [
                {
                    "recipe_id": c.recipe_id,
                    "match_score": c.match_score,
                    "level_id": c.level_id,
                    "hops": [list(h) for h in c.path.hops],
                    "satisfied_conditions": list(c.path.satisfied_conditions),
                }
                for c in self.candidates
            ],
            "fragments": {rid: [[fid, score] for fid, score in pairs] for rid, pairs in self.fragments.items()},
            "outcome": self.outcome,
            "unprocessed_reason": self.unprocessed_reason,
            "vector_searches": self.vector_searches,
            "graph_screenings": self.graph_screenings,
            "used_fallback": self.used_fallback,
        }


def dedup_and_rank(candidates: Sequence[Candidate]) -> list[Candidate]:
    """One candidate per recipe, most specific evidence kept, total order.

    Keeps the lowest level (then highest score) per recipe and sorts by
    (level asc, score desc, recipe id asc). Idempotent by construction.
    """
    ordered = sorted(candidates, key=lambda c: (c.level_id, -c.match_score, c.recipe_id))
    kept: dict[str, Candidate] = {}
    for c in ordered:
        kept.setdefault(c.recipe_id, c)
    return sorted(kept.values(), key=lambda c: (c.level_id, -c.match_score, c.recipe_id))


def _enrich(c: Candidate, details, stores: Stores) -> EnrichedCandidate:
    node = stores.graph.recipes[c.recipe_id]
    return EnrichedCandidate(
        candidate=c,
        details=tuple(details),
        name=node.name,
        ingredient_names=tuple(sorted(stores.graph.recipe_ingredient_names[c.recipe_id])),
    )


def _rag_retrieve(query_text: str, config: PipelineConfig, stores: Stores, trace: PipelineTrace) -> list[EnrichedCandidate]:
    """Query-anchored retrieval: top fragments over the whole index.

    Fragments below the similarity floor are dropped; the owning recipes of
    the survivors become level-5 candidates scored by their best fragment.
    Shared by llm_rag mode and the full-mode fallback so both legs answer
    exactly the same queries.
    """
    trace.vector_searches += 1
    query_vec = stores.embedder.embed(query_text)
    pool = config.candidate_limit * config.fragments_per_candidate
    hits = [
        (f, s)
        for f, s in search_topk(stores.index, query_vec, pool)
        if s >= config.similarity_floor
    ]
    by_recipe: dict[str, list] = {}
    for f, s in hits:
        by_recipe.setdefault(f.recipe_id, []).append((f, s))

    ranked = sorted(
        by_recipe.items(),
        key=lambda kv: (-max(s for _, s in kv[1]), kv[0]),
    )[: config.candidate_limit]

    out = []
    for rid, pairs in ranked:
        pairs.sort(key=lambda p: (-p[1], p[0].fragment_id))
        best = min(1.0, pairs[0][1])
        path = RetrievalPath(
            hops=((rid, EDGE_MATCHES, rid),),
            satisfied_conditions=(f"做法片段与查询相似度 {best:.3f}",),
        )
        cand = Candidate(recipe_id=rid, match_score=best, level_id=5, path=path)
        out.append(_enrich(cand, pairs[: config.fragments_per_candidate], stores))
    return out


def _unprocessed(trace: PipelineTrace, reason: str, demand_kind: str) -> RecommendationResponse:
    trace.outcome = "unprocessed"
    trace.unprocessed_reason = reason
    return RecommendationResponse(
        recipes=(),
        narrative=_NO_RESULT_NARRATIVE,
        demand_kind=demand_kind,
        degraded=False,
    )


def _answer(
    enriched: list[EnrichedCandidate],
    verdict: FuzzyVerdict,
    query_text: str,
    config: PipelineConfig,
    stores: Stores,
    trace: PipelineTrace,
) -> RecommendationResponse:
    bundle = compose_prompt(enriched, verdict, query_text, length_cap=config.prompt_length_cap)
    trace.candidates = [ec.candidate for ec in bundle.candidates]
    trace.fragments = {
        ec.candidate.recipe_id: [(f.fragment_id, s) for f, s in ec.details] for ec in bundle.candidates
    }
    trace.outcome = "answered"
    return integrate(bundle, stores.generator)


def run_pipeline(
    query_text: str, config: PipelineConfig, stores: Stores
) -> tuple[RecommendationResponse, PipelineTrace]:
    """Answer one query under the configured mode.

    Raises EmptyQuery for blank input (a caller contract violation); every
    other failure to answer is encoded as outcome="unprocessed" with a
    reason, never an exception, so batch evaluation can count robustness.
    """
    q = Query.from_text(query_text)
    trace = PipelineTrace(query=q.text, mode=config.mode)
    verdict = detect_fuzzy(q, stores.lexicon)
    trace.verdict = verdict
    demand_kind = "fuzzy" if verdict.is_fuzzy else "clear"

    if config.mode == "llm_rag":
        enriched = _rag_retrieve(q.text, config, stores, trace)
        if not enriched:
            return _unprocessed(trace, "BelowSimilarityFloor", demand_kind), trace
        return _answer(enriched, verdict, q.text, config, stores, trace), trace

    # full and llm_kg share the graph leg
    try:
        if verdict.is_fuzzy:
            conditions = refine_fuzzy(q, verdict, stores.corpus, stores.rules)
        else:
            conditions = derive_clear_conditions(q, stores.corpus)
        trace.conditions = conditions
    except RefinementFailed:
        conditions = None

    candidates: list[Candidate] = []
    if conditions is not None:
        plan = build_search_plan(
            conditions,
            verdict,
            home_tag=config.home_tag,
            quick_minutes_default=config.quick_minutes_default,
        )
        trace.graph_screenings += 1
        try:
            candidates = screen_candidates(
                stores.graph, plan, conditions, config.candidate_limit, config.level_scores
            )
        except NoCandidates:
            candidates = []

    if candidates:
        candidates = dedup_and_rank(candidates)
        enriched = []
        for c in candidates:
            details = []
            if config.mode == "full":
                trace.vector_searches += 1
                details = search_topk(
                    stores.index,
                    stores.recipe_vectors[c.recipe_id],
                    config.fragments_per_candidate,
                    recipe_filter={c.recipe_id},
                )
            enriched.append(_enrich(c, details, stores))
        return _answer(enriched, verdict, q.text, config, stores, trace), trace

    reason = "RefinementFailed" if conditions is None else "NoCandidates"
    if config.mode == "full" and config.rag_fallback:
        enriched = _rag_retrieve(q.text, config, stores, trace)
        if enriched:
            trace.used_fallback = True
            return _answer(enriched, verdict, q.text, config, stores, trace), trace
    return _unprocessed(trace, reason, demand_kind), trace


def fallback_rag(query_text: str, config: PipelineConfig, stores: Stores) -> list[EnrichedCandidate]:
    """Standalone access to the full-mode RAG fallback, mainly for tests."""
    trace = PipelineTrace(query=query_text, mode=config.mode)
    return _rag_retrieve(query_text, config, stores, trace)
