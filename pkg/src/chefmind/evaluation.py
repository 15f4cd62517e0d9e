"""Batch evaluation: four-dimension scoring, unprocessed counting, reports.

Scores are computed per query, averaged per batch, and aggregated into an
overall row weighted by processed-query counts. All rounding is half-up to
one decimal place, done in decimal arithmetic so that ties like 8.725 round
the same way on every platform. Unprocessed queries contribute no score;
they are counted, not averaged.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Optional, Protocol, Sequence

from chefmind.errors import GeneratorTimeout, GeneratorUnavailable, MalformedRecord
from chefmind.gateway import PromptBundle, RecommendationResponse
from chefmind.pipeline import PipelineConfig, Stores, run_pipeline

_TENTH = Decimal("0.1")


def round1(x) -> float:
    """Round half-up to one decimal; 6.75 -> 6.8, never banker's 6.7 or 6.6."""
    d = x if isinstance(x, Decimal) else Decimal(repr(float(x)))
    return float(d.quantize(_TENTH, rounding=ROUND_HALF_UP))


def _decimal_mean(values: Sequence[float]) -> Decimal:
    total = sum((Decimal(repr(float(v))) for v in values), Decimal(0))
    return total / Decimal(len(values))


@dataclass(frozen=True)
class LabeledQuery:
    id: str
    text: str
    kind: str  # explicit | fuzzy
    expected: Optional[tuple[str, ...]]
    batch_no: int


@dataclass(frozen=True)
class JudgeScore:
    accuracy: float
    relevance: float
    completeness: float
    clarity: float
    total: float = field(default=0.0)
    fallback: bool = False

    def __post_init__(self):
        for dim in (self.accuracy, self.relevance, self.completeness, self.clarity):
            assert 1.0 <= dim <= 10.0
        object.__setattr__(
            self,
            "total",
            round1(_decimal_mean((self.accuracy, self.relevance, self.completeness, self.clarity))),
        )


@dataclass(frozen=True)
class BatchReport:
    batch_no: int
    total_queries: int
    avg_score: float
    unprocessed: int
    avg_undefined: bool = False


@dataclass(frozen=True)
class OverallReport:
    total_queries: int
    avg_score: float
    unprocessed: int
    unprocessed_pct: float
    avg_undefined: bool = False


@dataclass(frozen=True)
class QueryRecord:
    query_id: str
    batch_no: int
    text: str
    kind: str
    outcome: str
    reason: Optional[str]
    returned_ids: tuple[str, ...]
    score: Optional[JudgeScore]


@dataclass(frozen=True)
class EvalRun:
    mode: str
    batches: tuple[BatchReport, ...]
    overall: OverallReport
    records: tuple[QueryRecord, ...]


class Judge(Protocol):
    def score(self, query: LabeledQuery, response: RecommendationResponse) -> JudgeScore: ...


class HeuristicJudge:
    """Deterministic judge mirroring the four scoring dimensions.

    accuracy: recall of the expected recipe set when ground truth exists,
    else a neutral 5.5. relevance: mean candidate match score. completeness:
    per-recipe presence of name, ingredients, a snippet, and a reason.
    clarity: a three-item checklist over the response shape. Each fraction f
    maps onto the 1..10 band as 1 + 9f.
    """

    def score(self, query: LabeledQuery, response: RecommendationResponse) -> JudgeScore:
        returned = [r.recipe_id for r in response.recipes]
        if query.expected:
            expected = set(query.expected)
            recall = len(expected & set(returned)) / len(expected)
            accuracy = 1.0 + 9.0 * recall
        else:
            accuracy = 5.5

        if response.recipes:
            relevance = 1.0 + 9.0 * (sum(r.score for r in response.recipes) / len(response.recipes))
            fractions = []
            for r in response.recipes:
                present = sum(
                    (
                        bool(r.name),
                        bool(r.ingredient_names),
                        bool(r.snippets),
                        bool(r.reason),
                    )
                )
                fractions.append(present / 4)
            completeness = 1.0 + 9.0 * (sum(fractions) / len(fractions))
        else:
            relevance = 1.0
            completeness = 1.0

        checks = (
            bool(response.recipes),
            all(r.reason for r in response.recipes),
            bool(response.narrative),
        )
        clarity = 1.0 + 9.0 * (sum(checks) / 3)
        return JudgeScore(
            accuracy=min(accuracy, 10.0),
            relevance=min(relevance, 10.0),
            completeness=min(completeness, 10.0),
            clarity=min(clarity, 10.0),
        )


_JUDGE_PREAMBLE = (
    "你是一位严格的菜谱推荐评审。请对下面的推荐结果打分，"
    '只输出一个 JSON 对象：{"accuracy": 1-10, "relevance": 1-10, '
    '"completeness": 1-10, "clarity": 1-10}。'
)


class LLMJudge:
    """LLM-as-judge with a deterministic safety net.

    Asks the generator for a strict JSON object of the four dimensions;
    a parse failure is retried once, then the heuristic judge's score is
    used with fallback=True so reports can disclose it.
    """

    def __init__(self, generator, fallback: Optional[HeuristicJudge] = None):
        self._generator = generator
        self._fallback = fallback or HeuristicJudge()

    def _render(self, query: LabeledQuery, response: RecommendationResponse) -> PromptBundle:
        listing = "\n".join(
            f"{i}. {r.name}: {r.reason}" for i, r in enumerate(response.recipes, start=1)
        )
        body = f"{_JUDGE_PREAMBLE}\n[查询] {query.text}\n[推荐] {listing}\n[说明] {response.narrative}"
        return PromptBundle(
            system_preamble=_JUDGE_PREAMBLE,
            demand_kind="clear",
            kg_block=listing,
            rag_block="",
            user_query=query.text,
            prompt=body,
            candidates=(),
        )

    @staticmethod
    def _parse(text: str) -> Optional[dict]:
        match = re.search(r"\{.*\}", text, re.DOTALL)
        if not match:
            return None
        try:
            obj = json.loads(match.group(0))
        except json.JSONDecodeError:
            return None
        dims = {}
        for key in ("accuracy", "relevance", "completeness", "clarity"):
            value = obj.get(key)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                return None
            dims[key] = min(10.0, max(1.0, float(value)))
        return dims

    def score(self, query: LabeledQuery, response: RecommendationResponse) -> JudgeScore:
        bundle = self._render(query, response)
        for _ in range(2):
            try:
                dims = self._parse(self._generator.generate(bundle))
            except (GeneratorTimeout, GeneratorUnavailable):
                dims = None
            if dims is not None:
                return JudgeScore(**dims)
        heuristic = self._fallback.score(query, response)
        return JudgeScore(
            accuracy=heuristic.accuracy,
            relevance=heuristic.relevance,
            completeness=heuristic.completeness,
            clarity=heuristic.clarity,
            fallback=True,
        )


def load_queries(path: str | Path) -> list[LabeledQuery]:
    """Query set: one JSON object per line with id, text, kind, expected, batch."""
    queries = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise MalformedRecord(line_no, f"invalid JSON: {e.msg}") from e
            if not isinstance(obj.get("id"), str) or not isinstance(obj.get("text"), str):
                raise MalformedRecord(line_no, "query record needs string id and text")
            kind = obj.get("kind", "explicit")
            if kind not in ("explicit", "fuzzy"):
                raise MalformedRecord(line_no, f"unknown query kind {kind!r}")
            batch = obj.get("batch")
            if not isinstance(batch, int) or isinstance(batch, bool) or batch < 1:
                raise MalformedRecord(line_no, "batch must be a positive integer")
            expected = obj.get("expected")
            queries.append(
                LabeledQuery(
                    id=obj["id"],
                    text=obj["text"],
                    kind=kind,
                    expected=tuple(expected) if expected else None,
                    batch_no=batch,
                )
            )
    return queries


def aggregate_overall(batches: Sequence[BatchReport]) -> OverallReport:
    """Overall row: processed-weighted mean of batch averages plus counts.

    Weighting by processed count makes the overall average equal the mean
    over all scored queries (up to the one-decimal rounding of batch rows).
    """
    total = sum(b.total_queries for b in batches)
    unprocessed = sum(b.unprocessed for b in batches)
    weighted = Decimal(0)
    processed_total = 0
    for b in batches:
        processed = b.total_queries - b.unprocessed
        if b.avg_undefined or processed == 0:
            continue
        weighted += Decimal(repr(b.avg_score)) * processed
        processed_total += processed
    if processed_total == 0:
        avg, undefined = 0.0, True
    else:
        avg, undefined = round1(weighted / processed_total), False
    pct = round1(Decimal(unprocessed * 100) / Decimal(total)) if total else 0.0
    return OverallReport(
        total_queries=total,
        avg_score=avg,
        unprocessed=unprocessed,
        unprocessed_pct=pct,
        avg_undefined=undefined,
    )


def run_batches(
    queries: Sequence[LabeledQuery],
    config: PipelineConfig,
    stores: Stores,
    judge: Judge,
) -> EvalRun:
    """Run every query through the pipeline and fold results into batch rows."""
    records = []
    by_batch: dict[int, list[QueryRecord]] = {}
    for query in sorted(queries, key=lambda q: (q.batch_no, q.id)):
        response, trace = run_pipeline(query.text, config, stores)
        if trace.outcome == "unprocessed":
            record = QueryRecord(
                query_id=query.id,
                batch_no=query.batch_no,
                text=query.text,
                kind=query.kind,
                outcome="unprocessed",
                reason=trace.unprocessed_reason,
                returned_ids=(),
                score=None,
            )
        else:
            record = QueryRecord(
                query_id=query.id,
                batch_no=query.batch_no,
                text=query.text,
                kind=query.kind,
                outcome="answered",
                reason=None,
                returned_ids=tuple(r.recipe_id for r in response.recipes),
                score=judge.score(query, response),
            )
        records.append(record)
        by_batch.setdefault(query.batch_no, []).append(record)

    batches = []
    for batch_no in sorted(by_batch):
        batch_records = by_batch[batch_no]
        scored = [r.score.total for r in batch_records if r.score is not None]
        unprocessed = sum(1 for r in batch_records if r.outcome == "unprocessed")
        if scored:
            avg, undefined = round1(_decimal_mean(scored)), False
        else:
            avg, undefined = 0.0, True
        batches.append(
            BatchReport(
                batch_no=batch_no,
                total_queries=len(batch_records),
                avg_score=avg,
                unprocessed=unprocessed,
                avg_undefined=undefined,
            )
        )
    overall = aggregate_overall(batches)
    return EvalRun(mode=config.mode, batches=tuple(batches), overall=overall, records=tuple(records))


def render_report(
    batches: Sequence[BatchReport],
    overall: Optional[OverallReport] = None,
    records: Sequence[QueryRecord] = (),
    mode: str = "",
) -> tuple[str, str]:
    """Render (table text, line-delimited JSON) for a set of batch rows.

    Pure function of its inputs: feeding the same rows always yields the
    same bytes, which is what makes report files diffable across runs.
    """
    if overall is None:
        overall = aggregate_overall(list(batches))

    header = f"{'Batch':>7}  {'Queries':>7}  {'Avg Score':>9}  {'Unprocessed':>11}"
    lines = []
    if mode:
        lines.append(f"mode: {mode}")
    lines.append(header)
    lines.append("-" * len(header))
    for b in batches:
        avg_cell = "n/a" if b.avg_undefined else f"{b.avg_score:.1f}"
        lines.append(f"{b.batch_no:>7}  {b.total_queries:>7}  {avg_cell:>9}  {b.unprocessed:>11}")
    avg_cell = "n/a" if overall.avg_undefined else f"{overall.avg_score:.1f}"
    unproc_cell = f"{overall.unprocessed} ({overall.unprocessed_pct:.1f}%)"
    lines.append(f"{'Overall':>7}  {overall.total_queries:>7}  {avg_cell:>9}  {unproc_cell:>11}")
    table = "\n".join(lines) + "\n"

    json_lines = []
    for r in records:
        json_lines.append(
            json.dumps(
                {
                    "kind": "query",
                    "id": r.query_id,
                    "batch": r.batch_no,
                    "text": r.text,
                    "query_kind": r.kind,
                    "outcome": r.outcome,
                    "reason": r.reason,
                    "returned": list(r.returned_ids),
                    "score": None
                    if r.score is None
                    else {
                        "accuracy": r.score.accuracy,
                        "relevance": r.score.relevance,
                        "completeness": r.score.completeness,
                        "clarity": r.score.clarity,
                        "total": r.score.total,
                        "fallback": r.score.fallback,
                    },
                },
                ensure_ascii=False,
            )
        )
    for b in batches:
        json_lines.append(
            json.dumps(
                {
                    "kind": "batch",
                    "batch": b.batch_no,
                    "queries": b.total_queries,
                    "avg_score": b.avg_score,
                    "unprocessed": b.unprocessed,
                    "avg_undefined": b.avg_undefined,
                },
                ensure_ascii=False,
            )
        )
    json_lines.append(
        json.dumps(
            {
                "kind": "overall",
                "mode": mode,
                "queries": overall.total_queries,
                "avg_score": overall.avg_score,
                "unprocessed": overall.unprocessed,
                "unprocessed_pct": overall.unprocessed_pct,
                "avg_undefined": overall.avg_undefined,
            },
            ensure_ascii=False,
        )
    )
    return table, "\n".join(json_lines) + "\n"
