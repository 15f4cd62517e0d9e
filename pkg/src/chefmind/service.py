"""HTTP service, configuration, and store lifecycle.

Configuration merges (in increasing priority) built-in defaults, an optional
JSON config file, and CHEFMIND_* environment variables. The engine handle
owns one immutable generation of stores at a time; a reload builds the next
generation off to the side and swaps it in with a single reference
assignment, so every request sees exactly one consistent generation.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from collections import OrderedDict
from dataclasses import dataclass, field, fields, replace
from importlib import resources
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import Response

from chefmind.analyzer import load_lexicon, load_scenario_rules
from chefmind.corpus import load_corpus
from chefmind.errors import ChefMindError, ConfigError, EmbedderUnavailable, EmptyQuery
from chefmind.gateway import MockGenerator, RecommendationResponse, RemoteGenerator
from chefmind.pipeline import MODES, PipelineConfig, PipelineTrace, Stores, run_pipeline
from chefmind.vectors import HashEmbedder, RemoteEmbedder

ENV_PREFIX = "CHEFMIND_"

_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


def packaged_data_path(name: str) -> str:
    return str(resources.files("chefmind").joinpath("data", name))


@dataclass(frozen=True)
class ServiceConfig:
    corpus_path: str = ""
    aliases_path: Optional[str] = None
    lexicon_path: str = ""
    rules_path: str = ""
    queries_path: str = ""
    dimension: int = 768
    chunk_size: int = 3
    embedder: str = "hash"  # hash | remote
    embedder_endpoint: str = ""
    embedder_model: str = ""
    generator: str = "mock"  # mock | remote
    llm_endpoint: str = ""
    llm_model: str = ""
    llm_api_key: str = ""
    mode: str = "full"
    candidate_limit: int = 10
    fragments_per_candidate: int = 3
    similarity_floor: float = 0.15
    home_tag: str = "家常"
    quick_minutes_default: int = 30
    prompt_length_cap: int = 8000
    rag_fallback: bool = True
    host: str = "127.0.0.1"
    port: int = 8420
    request_timeout: float = 30.0
    max_body_bytes: int = 1_000_000
    console_dir: Optional[str] = None

    def __post_init__(self):
        # fall back to the packaged sample data for any path left empty
        defaults = {
            "corpus_path": "recipes.jsonl",
            "lexicon_path": "lexicon.txt",
            "rules_path": "scenario_rules.jsonl",
            "queries_path": "queries.jsonl",
        }
        for attr, filename in defaults.items():
            if not getattr(self, attr):
                object.__setattr__(self, attr, packaged_data_path(filename))
        if self.aliases_path is None:
            object.__setattr__(self, "aliases_path", packaged_data_path("aliases.tsv"))

    def validated(self) -> "ServiceConfig":
        """Fail at startup, not first request, when remote settings are incomplete."""
        if self.embedder not in ("hash", "remote"):
            raise ConfigError(f"unknown embedder {self.embedder!r}")
        if self.generator not in ("mock", "remote"):
            raise ConfigError(f"unknown generator {self.generator!r}")
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.embedder == "remote" and not (self.embedder_endpoint and self.embedder_model):
            raise ConfigError("remote embedder requires embedder_endpoint and embedder_model")
        if self.generator == "remote" and not (self.llm_endpoint and self.llm_model):
            raise ConfigError("remote generator requires llm_endpoint and llm_model")
        if self.dimension < 8:
            raise ConfigError("dimension must be >= 8")
        return self

    def pipeline_config(self, mode: Optional[str] = None, candidate_limit: Optional[int] = None) -> PipelineConfig:
        return PipelineConfig(
            mode=mode or self.mode,
            candidate_limit=candidate_limit or self.candidate_limit,
            fragments_per_candidate=self.fragments_per_candidate,
            similarity_floor=self.similarity_floor,
            home_tag=self.home_tag,
            quick_minutes_default=self.quick_minutes_default,
            prompt_length_cap=self.prompt_length_cap,
            rag_fallback=self.rag_fallback,
        )

    def build_embedder(self):
        if self.embedder == "remote":
            return RemoteEmbedder(
                self.embedder_endpoint,
                self.embedder_model,
                self.dimension,
                timeout=self.request_timeout,
            )
        return HashEmbedder(self.dimension)

    def build_generator(self):
        if self.generator == "remote":
            return RemoteGenerator(
                self.llm_endpoint,
                self.llm_model,
                self.llm_api_key,
                timeout=self.request_timeout,
            )
        return MockGenerator()

    def build_stores(self) -> Stores:
        corpus = load_corpus(self.corpus_path, aliases_path=self.aliases_path)
        return Stores.build(
            corpus,
            self.build_embedder(),
            load_lexicon(self.lexicon_path),
            load_scenario_rules(self.rules_path),
            generator=self.build_generator(),
            chunk_size=self.chunk_size,
        )


def _coerce(name: str, kind: type, raw: str):
    if kind is bool:
        lowered = raw.strip().lower()
        if lowered in _BOOL_TRUE:
            return True
        if lowered in _BOOL_FALSE:
            return False
        raise ConfigError(f"{name}: expected a boolean, got {raw!r}")
    try:
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
    except ValueError:
        raise ConfigError(f"{name}: expected {kind.__name__}, got {raw!r}")
    return raw


def load_config(path: Optional[str] = None, env: Optional[dict] = None) -> ServiceConfig:
    """Defaults, then the JSON config file, then CHEFMIND_* variables."""
    env = os.environ if env is None else env
    values: dict = {}
    known = {f.name: f for f in fields(ServiceConfig)}

    if path:
        with open(path, encoding="utf-8") as fh:
            try:
                file_values = json.load(fh)
            except json.JSONDecodeError as e:
                raise ConfigError(f"config file {path}: invalid JSON: {e.msg}")
        if not isinstance(file_values, dict):
            raise ConfigError(f"config file {path}: expected a JSON object")
        for key, value in file_values.items():
            if key not in known:
                raise ConfigError(f"config file {path}: unknown key {key!r}")
            values[key] = value

    for name in known:
        raw = env.get(ENV_PREFIX + name.upper())
        if raw is None:
            continue
        target = known[name].type
        kind = {"int": int, "float": float, "bool": bool}.get(str(target), str)
        if name in ("dimension", "chunk_size", "candidate_limit", "fragments_per_candidate",
                    "prompt_length_cap", "port", "max_body_bytes", "quick_minutes_default"):
            kind = int
        elif name in ("similarity_floor", "request_timeout"):
            kind = float
        elif name == "rag_fallback":
            kind = bool
        values[name] = _coerce(name, kind, raw)

    return ServiceConfig(**values).validated()


class EngineHandle:
    """Holds the current store generation; swaps are atomic reference writes."""

    def __init__(self, config: ServiceConfig):
        self._config = config
        self._lock = threading.Lock()
        self._current: tuple[int, Stores] = (1, config.build_stores())

    @property
    def generation(self) -> int:
        return self._current[0]

    def current(self) -> tuple[int, Stores]:
        return self._current

    def reload(self) -> int:
        """Build the next generation, then publish it in one assignment."""
        with self._lock:
            generation, _ = self._current
            fresh = self._config.build_stores()
            self._current = (generation + 1, fresh)
            return generation + 1


def canonical_json(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def response_to_obj(response: RecommendationResponse) -> dict:
    return {
        "recipes": [
            {
                "id": r.recipe_id,
                "name": r.name,
                "reason": r.reason,
                "score": r.score,
                "level": r.level,
                "path": {
                    "hops": [list(h) for h in r.path.hops],
                    "satisfied_conditions": list(r.path.satisfied_conditions),
                },
                "snippets": list(r.snippets),
            }
            for r in response.recipes
        ],
        "narrative": response.narrative,
        "demand_kind": response.demand_kind,
        "degraded": response.degraded,
    }


def compute_trace_id(generation: int, mode: str, k: int, query: str) -> str:
    seed = f"{generation}|{mode}|{k}|{query}".encode("utf-8")
    return hashlib.sha256(seed).hexdigest()


class _TraceStore:
    """Bounded insertion-ordered cache of recent pipeline traces."""

    def __init__(self, capacity: int = 1000):
        self._capacity = capacity
        self._traces: OrderedDict[str, dict] = OrderedDict()
        self._lock = threading.Lock()

    def put(self, trace_id: str, trace: PipelineTrace) -> None:
        with self._lock:
            self._traces[trace_id] = trace.to_json_obj()
            self._traces.move_to_end(trace_id)
            while len(self._traces) > self._capacity:
                self._traces.popitem(last=False)

    def get(self, trace_id: str) -> Optional[dict]:
        with self._lock:
            return self._traces.get(trace_id)


def create_app(config: ServiceConfig, engine: Optional[EngineHandle] = None):
    config = config.validated()
    app = FastAPI(title="chefmind", docs_url=None, redoc_url=None)
    handle = engine or EngineHandle(config)
    traces = _TraceStore()
    app.state.engine = handle

    def json_response(obj, status: int = 200) -> Response:
        return Response(content=canonical_json(obj), status_code=status, media_type="application/json")

    @app.middleware("http")
    async def body_size_guard(request: Request, call_next):
        length = request.headers.get("content-length")
        if length is not None:
            try:
                declared = int(length)
            except ValueError:
                return json_response({"error": "invalid Content-Length"}, 400)
            if declared > config.max_body_bytes:
                return json_response({"error": "request body too large"}, 413)
        return await call_next(request)

    @app.get("/healthz")
    async def healthz():
        generation, _ = handle.current()
        return json_response({"status": "ok", "generation": generation})

    @app.get("/api/recipes/{recipe_id}")
    async def get_recipe(recipe_id: str):
        generation, stores = handle.current()
        recipe = stores.corpus.recipes.get(recipe_id)
        if recipe is None:
            return json_response({"error": f"unknown recipe id {recipe_id!r}"}, 404)
        return json_response(
            {
                "id": recipe.id,
                "name": recipe.name,
                "dish_type": recipe.dish_type,
                "steps": list(recipe.steps),
                "author": recipe.author,
                "ingredients": [
                    {
                        "id": ref.ingredient_id,
                        "name": stores.corpus.ingredients[ref.ingredient_id].canonical_name,
                        "qty": ref.quantity,
                        "unit": ref.unit,
                    }
                    for ref in recipe.ingredient_refs
                ],
                "keywords": [stores.corpus.keywords[k].label for k in recipe.keyword_refs],
                "prep_minutes": recipe.prep_minutes,
                "generation": generation,
            }
        )

    @app.post("/api/recommend")
    async def recommend(request: Request):
        try:
            body = json.loads(await request.body())
        except (json.JSONDecodeError, UnicodeDecodeError):
            return json_response({"error": "malformed JSON body"}, 400)
        if not isinstance(body, dict):
            return json_response({"error": "body must be a JSON object"}, 400)

        query = body.get("query")
        if not isinstance(query, str) or not query.strip():
            return json_response({"error": "EmptyQuery"}, 400)
        k = body.get("k", config.candidate_limit)
        if not isinstance(k, int) or isinstance(k, bool) or k < 1:
            return json_response({"error": "k must be a positive integer"}, 400)
        mode = body.get("mode", config.mode)
        if mode not in MODES:
            return json_response({"error": f"unknown mode {mode!r}"}, 400)

        generation, stores = handle.current()
        pipeline_config = config.pipeline_config(mode=mode, candidate_limit=k)
        try:
            response, trace = run_pipeline(query, pipeline_config, stores)
        except EmptyQuery:
            return json_response({"error": "EmptyQuery"}, 400)
        except EmbedderUnavailable as e:
            return json_response({"error": f"embedding backend unavailable: {e}"}, 503)

        trace_id = compute_trace_id(generation, mode, k, query.strip())
        traces.put(trace_id, trace)
        payload = response_to_obj(response)
        payload["generation"] = generation
        payload["trace_id"] = trace_id
        return json_response(payload)

    @app.get("/api/trace/{trace_id}")
    async def get_trace(trace_id: str):
        trace = traces.get(trace_id)
        if trace is None:
            return json_response({"error": f"unknown trace id {trace_id!r}"}, 404)
        return json_response(trace)

    console_dir = config.console_dir or "frontend/dist"
    if Path(console_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/console", StaticFiles(directory=console_dir, html=True), name="console")

    return app


def serve(config: ServiceConfig) -> None:
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
