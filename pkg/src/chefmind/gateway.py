"""Prompt composition and narrative generation.

The generator contributes prose only. The structured recipe list in every
response is assembled from pipeline candidates, never parsed out of
generated text, so a response can never name a recipe the retrieval stages
did not produce. A deterministic mock generator keeps the whole stack
offline-testable; the remote generator speaks a chat-completions style
HTTP contract.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Protocol, Sequence

from chefmind.errors import EmptyCandidates, GeneratorTimeout, GeneratorUnavailable
from chefmind.graph import RetrievalPath

if TYPE_CHECKING:
    from chefmind.analyzer import FuzzyVerdict
    from chefmind.pipeline import EnrichedCandidate

DEFAULT_PROMPT_CAP = 8000

_BASE_PREAMBLE = (
    "你是一位菜谱推荐助手。根据下面给出的候选菜谱与做法片段，"
    "生成一段连贯的推荐说明，不得编造列表之外的菜谱。"
)
_FUZZY_INSTRUCTION = "用户需求较为模糊：请逐一说明每道候选菜谱满足了哪些筛选条件。"
_CLEAR_INSTRUCTION = "用户需求明确：请直接回应其问题并给出推荐理由。"


@dataclass(frozen=True)
class PromptBundle:
    system_preamble: str
    demand_kind: str
    kg_block: str
    rag_block: str
    user_query: str
    prompt: str
    candidates: tuple = field(compare=False)


@dataclass(frozen=True)
class RecipeEntry:
    recipe_id: str
    name: str
    reason: str
    path: RetrievalPath
    snippets: tuple[str, ...]
    score: float
    level: int
    ingredient_names: tuple[str, ...] = ()


@dataclass(frozen=True)
class RecommendationResponse:
    recipes: tuple[RecipeEntry, ...]
    narrative: str
    demand_kind: str
    degraded: bool = False


class Generator(Protocol):
    tag: str

    def generate(self, bundle: PromptBundle) -> str: ...


def _render_prompt(system_preamble: str, demand_kind: str, kg_block: str, rag_block: str, user_query: str) -> str:
    # Character-count section headers make the rendering injective: two
    # distinct field tuples can never produce the same string.
    return (
        f"{system_preamble}\n"
        f"[需求类型:{demand_kind}]\n"
        f"[图谱候选:{len(kg_block)}字]\n{kg_block}\n"
        f"[做法片段:{len(rag_block)}字]\n{rag_block}\n"
        f"[用户提问:{len(user_query)}字]\n{user_query}\n"
    )


def _render_kg_block(candidates: Sequence["EnrichedCandidate"]) -> str:
    lines = []
    for i, ec in enumerate(candidates, start=1):
        c = ec.candidate
        lines.append(f"{i}. {ec.name} (编号 {c.recipe_id}, 层级 {c.level_id}, 匹配度 {c.match_score:.3f})")
        for cond in c.path.satisfied_conditions:
            lines.append(f"   - {cond}")
    return "\n".join(lines)


def _render_rag_block(details: Sequence[tuple[str, str, float]]) -> str:
    # entries: (owner recipe id, fragment text, score), already in render order
    return "\n".join(f"- ({score:.3f}) [{rid}] {text}" for rid, text, score in details)


def compose_prompt(
    candidates: Sequence["EnrichedCandidate"],
    verdict: "FuzzyVerdict",
    query: str,
    *,
    length_cap: int = DEFAULT_PROMPT_CAP,
) -> PromptBundle:
    """Render the demand-based prompt from graph candidates and fragment details.

    Fuzzy demands get an instruction block asking the generator to walk
    through satisfied conditions; clear demands get a direct-answer
    instruction. If the rendered prompt exceeds the length cap, fragment
    details are dropped lowest-score-first (never graph candidates) until it
    fits or none remain.
    """
    if not candidates:
        raise EmptyCandidates()
    demand_kind = "fuzzy" if verdict.is_fuzzy else "clear"
    preamble = _BASE_PREAMBLE + "\n" + (_FUZZY_INSTRUCTION if verdict.is_fuzzy else _CLEAR_INSTRUCTION)
    kg_block = _render_kg_block(candidates)

    details = []
    for ec in candidates:
        for fragment, score in ec.details:
            details.append({"rid": ec.candidate.recipe_id, "fid": fragment.fragment_id,
                            "text": fragment.text, "score": score})

    def render(kept) -> str:
        rag = _render_rag_block([(d["rid"], d["text"], d["score"]) for d in kept])
        return _render_prompt(preamble, demand_kind, kg_block, rag, query)

    kept = list(details)
    prompt = render(kept)
    while len(prompt) > length_cap and kept:
        # drop the weakest detail; on equal scores the later fragment id goes first
        victim = min(range(len(kept)), key=lambda i: (kept[i]["score"], _desc(kept[i]["fid"])))
        kept.pop(victim)
        prompt = render(kept)

    kept_ids = {d["fid"] for d in kept}
    trimmed = tuple(ec.with_details([(f, s) for f, s in ec.details if f.fragment_id in kept_ids])
                    for ec in candidates)
    rag_block = _render_rag_block([(d["rid"], d["text"], d["score"]) for d in kept])
    return PromptBundle(
        system_preamble=preamble,
        demand_kind=demand_kind,
        kg_block=kg_block,
        rag_block=rag_block,
        user_query=query,
        prompt=prompt,
        candidates=trimmed,
    )


class _desc(str):
    """Inverts string comparison, for use inside ascending min()."""

    def __lt__(self, other):  # type: ignore[override]
        return str.__gt__(self, other)


def candidate_reason(ec: "EnrichedCandidate", max_conditions: int = 3) -> str:
    conds = list(ec.candidate.path.satisfied_conditions[:max_conditions])
    reason = "符合：" + "；".join(conds)
    if ec.details:
        reason += "；并附做法片段供参考"
    return reason


def template_narrative(bundle: PromptBundle) -> str:
    """Deterministic narrative naming every candidate in rank order."""
    parts = []
    for ec in bundle.candidates:
        line = f"推荐「{ec.name}」：{candidate_reason(ec)}"
        if ec.details:
            top_fragment = ec.details[0][0]
            line += f"。小贴士：{top_fragment.text}"
        parts.append(line)
    if bundle.demand_kind == "fuzzy":
        head = "根据您的需求筛选如下。"
    else:
        head = "为您找到以下菜谱。"
    return head + " ".join(parts)


class MockGenerator:
    """Pure template fill; identical bundle gives identical text."""

    tag = "mock"

    def generate(self, bundle: PromptBundle) -> str:
        return template_narrative(bundle)


class FixtureGenerator:
    """Replays recorded narratives keyed by SHA-256 of the prompt."""

    tag = "fixture"

    def __init__(self, path):
        with open(path, encoding="utf-8") as fh:
            self._responses: dict[str, str] = json.load(fh)

    def generate(self, bundle: PromptBundle) -> str:
        key = hashlib.sha256(bundle.prompt.encode("utf-8")).hexdigest()
        try:
            return self._responses[key]
        except KeyError:
            raise GeneratorUnavailable(f"no recorded response for prompt {key[:12]}")


class RemoteGenerator:
    """Chat-completions HTTP client with bounded concurrency and retries.

    Two retries with doubling backoff, then the error propagates so the
    caller can degrade to the template narrative. At most ``max_inflight``
    calls run concurrently; excess callers queue on the semaphore.
    """

    tag = "remote"

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key: str = "",
        *,
        timeout: float = 30.0,
        retries: int = 2,
        backoff: float = 0.5,
        max_inflight: int = 4,
        client=None,
    ):
        import httpx

        self.endpoint = endpoint
        self.model = model
        self._retries = retries
        self._backoff = backoff
        self._semaphore = threading.BoundedSemaphore(max_inflight)
        headers = {"Authorization": f"Bearer {api_key}"} if api_key else {}
        self._client = client or httpx.Client(timeout=timeout, headers=headers)

    def generate(self, bundle: PromptBundle) -> str:
        import httpx

        body = {
            "model": self.model,
            "messages": [
                {"role": "system", "content": bundle.system_preamble},
                {"role": "user", "content": bundle.prompt},
            ],
            "temperature": 0,
        }
        last_error: Exception = GeneratorUnavailable("no attempt made")
        with self._semaphore:
            for attempt in range(self._retries + 1):
                if attempt:
                    time.sleep(self._backoff * (2 ** (attempt - 1)))
                try:
                    resp = self._client.post(self.endpoint, json=body)
                except httpx.TimeoutException as e:
                    last_error = GeneratorTimeout(str(e))
                    continue
                except httpx.HTTPError as e:
                    last_error = GeneratorUnavailable(str(e))
                    continue
                if resp.status_code != 200:
                    last_error = GeneratorUnavailable(f"generator returned {resp.status_code}")
                    continue
                try:
                    return resp.json()["choices"][0]["message"]["content"]
                except (KeyError, IndexError, TypeError, ValueError) as e:
                    last_error = GeneratorUnavailable(f"malformed generator response: {e}")
        raise last_error


def integrate(bundle: PromptBundle, gen: Generator) -> RecommendationResponse:
    """Produce the final response: structured list from candidates, prose from the generator.

    Generator timeouts and outages degrade to the deterministic template
    narrative with degraded=True; the structured list is unaffected, so an
    unavailable provider never turns an answerable query into an unprocessed
    one.
    """
    recipes = tuple(
        RecipeEntry(
            recipe_id=ec.candidate.recipe_id,
            name=ec.name,
            reason=candidate_reason(ec),
            path=ec.candidate.path,
            snippets=tuple(fragment.text for fragment, _ in ec.details),
            score=ec.candidate.match_score,
            level=ec.candidate.level_id,
            ingredient_names=ec.ingredient_names,
        )
        for ec in bundle.candidates
    )
    degraded = False
    try:
        narrative = gen.generate(bundle)
    except (GeneratorTimeout, GeneratorUnavailable):
        narrative = template_narrative(bundle)
        degraded = True
    return RecommendationResponse(
        recipes=recipes,
        narrative=narrative,
        demand_kind=bundle.demand_kind,
        degraded=degraded,
    )
