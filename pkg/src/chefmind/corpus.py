"""Recipe corpus: loading, validation, normalization, and text chunking.

The corpus is the single source both downstream stores are built from: the
property graph indexes its node/edge structure, the vector index embeds the
fragments produced here. A built corpus is immutable and safe to share.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from chefmind.errors import DanglingReference, DuplicateId, MalformedRecord

_MAX_NORMALIZE_PASSES = 8


def normalize_text(raw: str) -> str:
    """Canonical text form: NFKC, case-folded, whitespace-collapsed.

    Applied to ingredient names, keyword labels, recipe names, and queries so
    that mixed Chinese/Latin text compares consistently. Iterates to a fixed
    point because a single NFKC+casefold pass is not guaranteed idempotent
    for some Unicode edge cases.
    """
    prev = raw
    for _ in range(_MAX_NORMALIZE_PASSES):
        cur = " ".join(unicodedata.normalize("NFKC", prev).casefold().split())
        if cur == prev:
            return cur
        prev = cur
    return prev


def normalize_ingredient(raw: str) -> str:
    """Normalized form of an ingredient name; empty input yields empty output."""
    return normalize_text(raw)


@dataclass(frozen=True)
class IngredientRef:
    ingredient_id: str
    quantity: Optional[float] = None
    unit: str = ""


@dataclass(frozen=True)
class Recipe:
    id: str
    name: str
    dish_type: str
    steps: tuple[str, ...]
    author: str = ""
    ingredient_refs: tuple[IngredientRef, ...] = ()
    keyword_refs: tuple[str, ...] = ()
    prep_minutes: Optional[int] = None


@dataclass(frozen=True)
class Ingredient:
    id: str
    canonical_name: str
    aliases: tuple[str, ...] = ()


@dataclass(frozen=True)
class Keyword:
    id: str
    label: str


@dataclass(frozen=True)
class LoadStats:
    recipe_count: int = 0
    ingredient_count: int = 0
    keyword_count: int = 0
    skipped: tuple[tuple[int, str], ...] = ()


@dataclass(frozen=True)
class Corpus:
    """Referentially complete, id-indexed recipe collection."""

    recipes: dict[str, Recipe] = field(default_factory=dict)
    ingredients: dict[str, Ingredient] = field(default_factory=dict)
    keywords: dict[str, Keyword] = field(default_factory=dict)
    stats: LoadStats = field(default_factory=LoadStats, compare=False)

    def ingredient_by_name(self, name: str) -> Optional[Ingredient]:
        """Resolve a canonical name or registered alias to its node."""
        norm = normalize_text(name)
        for ing in self.ingredients.values():
            if ing.canonical_name == norm or norm in ing.aliases:
                return ing
        return None

    def canonical_jsonl(self) -> str:
        """Order-independent serialization: identical corpora give identical bytes."""
        lines = []
        for rid in sorted(self.recipes):
            r = self.recipes[rid]
            lines.append(
                json.dumps(
                    {
                        "id": r.id,
                        "name": r.name,
                        "dish_type": r.dish_type,
                        "steps": list(r.steps),
                        "author": r.author,
                        "ingredients": [
                            {
                                "id": ref.ingredient_id,
                                "name": self.ingredients[ref.ingredient_id].canonical_name,
                                "qty": ref.quantity,
                                "unit": ref.unit,
                            }
                            for ref in r.ingredient_refs
                        ],
                        "keywords": [self.keywords[k].label for k in r.keyword_refs],
                        "prep_minutes": r.prep_minutes,
                    },
                    ensure_ascii=False,
                    sort_keys=True,
                )
            )
        for iid in sorted(self.ingredients):
            ing = self.ingredients[iid]
            lines.append(
                json.dumps(
                    {"ingredient": iid, "name": ing.canonical_name, "aliases": sorted(ing.aliases)},
                    ensure_ascii=False,
                    sort_keys=True,
                )
            )
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Fragment:
    """A contiguous run of recipe steps, prefixed by the recipe name.

    The unit of vector retrieval. ``vector`` is attached by the embedding
    stage and is None until then.
    """

    fragment_id: str
    recipe_id: str
    text: str
    steps: tuple[str, ...]
    step_start: int
    vector: Optional[np.ndarray] = None

    def with_vector(self, vector: np.ndarray) -> "Fragment":
        return Fragment(self.fragment_id, self.recipe_id, self.text, self.steps, self.step_start, vector)


class _RecordError(Exception):
    def __init__(self, cause: str):
        super().__init__(cause)
        self.cause = cause


def _parse_record(obj: dict) -> dict:
    if not isinstance(obj, dict):
        raise _RecordError("record is not a JSON object")
    rid = obj.get("id")
    if not isinstance(rid, str) or not rid:
        raise _RecordError("missing or empty id")
    name = obj.get("name", "")
    if not isinstance(name, str):
        raise _RecordError("name must be a string")
    steps_raw = obj.get("steps")
    if not isinstance(steps_raw, list) or not steps_raw:
        raise _RecordError("steps must be a non-empty list")
    steps = []
    for s in steps_raw:
        if not isinstance(s, str) or not s.strip():
            raise _RecordError("every step must be a non-empty string")
        steps.append(s.strip())
    prep = obj.get("prep_minutes")
    if prep is not None:
        if not isinstance(prep, int) or isinstance(prep, bool) or prep < 0:
            raise _RecordError("prep_minutes must be a non-negative integer")
    ingredients = []
    for entry in obj.get("ingredients", []) or []:
        if not isinstance(entry, dict):
            raise _RecordError("ingredient entry must be an object")
        iid = entry.get("id")
        if not isinstance(iid, str) or not iid:
            raise _RecordError("ingredient entry missing id")
        qty = entry.get("qty")
        if qty is not None:
            if isinstance(qty, bool) or not isinstance(qty, (int, float)) or not qty > 0:
                raise _RecordError(f"ingredient {iid}: qty must be > 0")
            qty = float(qty)
        iname = entry.get("name")
        if iname is not None and not isinstance(iname, str):
            raise _RecordError(f"ingredient {iid}: name must be a string")
        ingredients.append(
            {"id": iid, "name": iname, "qty": qty, "unit": str(entry.get("unit") or "")}
        )
    keywords = []
    for label in obj.get("keywords", []) or []:
        if not isinstance(label, str) or not normalize_text(label):
            raise _RecordError("keyword labels must be non-empty strings")
        keywords.append(label.strip())
    return {
        "id": rid,
        "name": name.strip(),
        "dish_type": str(obj.get("dish_type") or "").strip(),
        "steps": steps,
        "author": str(obj.get("author") or "").strip(),
        "ingredients": ingredients,
        "keywords": keywords,
        "prep_minutes": prep,
    }


def keyword_id(label: str) -> str:
    return "kw:" + normalize_text(label)


def load_corpus_records(
    records: Iterable[tuple[int, dict]],
    *,
    strict: bool = True,
    alias_pairs: Sequence[tuple[int, str, str]] = (),
) -> Corpus:
    """Build a Corpus from (line_no, decoded record) pairs.

    Ingredient and keyword nodes are created on first named reference; an
    ingredient referenced by id alone must be defined in some other record or
    loading fails with DanglingReference. In lenient mode offending records
    are skipped and counted instead of failing the load.
    """
    recipes: dict[str, Recipe] = {}
    ingredients: dict[str, Ingredient] = {}
    canon_to_id: dict[str, str] = {}
    keywords: dict[str, Keyword] = {}
    referenced: dict[str, str] = {}  # ingredient_id -> first referencing recipe
    skipped: list[tuple[int, str]] = []

    def fail(line_no: int, exc: Exception, cause: str):
        if strict:
            raise exc
        skipped.append((line_no, cause))

    for line_no, obj in records:
        try:
            rec = _parse_record(obj)
        except _RecordError as e:
            fail(line_no, MalformedRecord(line_no, e.cause), e.cause)
            continue
        rid = rec["id"]
        if rid in recipes:
            fail(line_no, DuplicateId(rid), f"duplicate recipe id {rid}")
            continue

        new_nodes: dict[str, Ingredient] = {}
        bad = None
        for entry in rec["ingredients"]:
            iid = entry["id"]
            if entry["name"] is not None:
                canon = normalize_text(entry["name"])
                if not canon:
                    bad = (MalformedRecord(line_no, f"ingredient {iid}: empty name"), "empty ingredient name")
                    break
                existing = ingredients.get(iid) or new_nodes.get(iid)
                if existing is not None:
                    if existing.canonical_name != canon:
                        bad = (DuplicateId(iid), f"ingredient {iid} redefined as {canon!r}")
                        break
                else:
                    owner = canon_to_id.get(canon)
                    if owner is not None and owner != iid:
                        bad = (DuplicateId(iid), f"canonical name {canon!r} already owned by {owner}")
                        break
                    new_nodes[iid] = Ingredient(id=iid, canonical_name=canon)
        if bad is not None:
            fail(line_no, bad[0], bad[1])
            continue

        for iid, node in new_nodes.items():
            ingredients[iid] = node
            canon_to_id[node.canonical_name] = iid
        for entry in rec["ingredients"]:
            referenced.setdefault(entry["id"], rid)
        kw_ids = []
        for label in rec["keywords"]:
            kid = keyword_id(label)
            if kid not in keywords:
                keywords[kid] = Keyword(id=kid, label=label)
            kw_ids.append(kid)

        recipes[rid] = Recipe(
            id=rid,
            name=rec["name"],
            dish_type=rec["dish_type"],
            steps=tuple(rec["steps"]),
            author=rec["author"],
            ingredient_refs=tuple(
                IngredientRef(e["id"], e["qty"], e["unit"]) for e in rec["ingredients"]
            ),
            keyword_refs=tuple(kw_ids),
            prep_minutes=rec["prep_minutes"],
        )

    # Referential integrity: every referenced ingredient must exist.
    dangling = {iid: rid for iid, rid in referenced.items() if iid not in ingredients}
    if dangling:
        if strict:
            iid = min(dangling)
            raise DanglingReference(dangling[iid], iid)
        dropped = {
            rid
            for rid, r in recipes.items()
            if any(ref.ingredient_id in dangling for ref in r.ingredient_refs)
        }
        for rid in dropped:
            skipped.append((0, f"recipe {rid} dropped: dangling ingredient reference"))
            del recipes[rid]

    # Alias sidecar: alias -> canonical name of an existing ingredient.
    alias_map: dict[str, tuple[str, ...]] = {}
    claimed_aliases: dict[str, str] = {}
    for line_no, alias_raw, target_raw in alias_pairs:
        alias = normalize_text(alias_raw)
        target = normalize_text(target_raw)
        if not alias or not target:
            fail(line_no, MalformedRecord(line_no, "empty alias pair"), "empty alias pair")
            continue
        owner = canon_to_id.get(target)
        if owner is None:
            fail(
                line_no,
                MalformedRecord(line_no, f"alias target {target!r} is not a known ingredient"),
                f"unknown alias target {target!r}",
            )
            continue
        if alias in canon_to_id:
            fail(
                line_no,
                MalformedRecord(line_no, f"alias {alias!r} collides with a canonical name"),
                f"alias collides with canonical {alias!r}",
            )
            continue
        prior = claimed_aliases.get(alias)
        if prior is not None and prior != owner:
            fail(
                line_no,
                MalformedRecord(line_no, f"alias {alias!r} claimed by two ingredients"),
                f"ambiguous alias {alias!r}",
            )
            continue
        claimed_aliases[alias] = owner
        if alias != target:
            alias_map[owner] = tuple(sorted(set(alias_map.get(owner, ())) | {alias}))
    for iid, aliases in alias_map.items():
        node = ingredients[iid]
        ingredients[iid] = Ingredient(id=node.id, canonical_name=node.canonical_name, aliases=aliases)

    stats = LoadStats(
        recipe_count=len(recipes),
        ingredient_count=len(ingredients),
        keyword_count=len(keywords),
        skipped=tuple(skipped),
    )
    return Corpus(recipes=recipes, ingredients=ingredients, keywords=keywords, stats=stats)


def load_corpus(
    path: str | Path,
    *,
    strict: bool = True,
    aliases_path: str | Path | None = None,
) -> Corpus:
    """Load a corpus from a line-delimited JSON recipe file.

    One JSON object per line; blank lines are ignored; unknown fields are
    ignored. Strict mode raises on the first bad line, lenient mode skips bad
    lines and records them in ``corpus.stats.skipped``.
    """
    path = Path(path)

    def iter_records():
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as e:
                    if strict:
                        raise MalformedRecord(line_no, f"invalid JSON: {e.msg}") from e
                    yield line_no, {"__bad__": True}
                    continue
                yield line_no, obj

    alias_pairs: list[tuple[int, str, str]] = []
    if aliases_path is not None:
        with open(aliases_path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    if strict:
                        raise MalformedRecord(line_no, "alias line must be alias<TAB>canonical")
                    alias_pairs.append((line_no, "", ""))
                    continue
                alias_pairs.append((line_no, parts[0], parts[1]))

    records = []
    for line_no, obj in iter_records():
        if obj.get("__bad__"):
            records.append((line_no, {"id": None}))  # fails validation, counted as skipped
        else:
            records.append((line_no, obj))
    return load_corpus_records(records, strict=strict, alias_pairs=alias_pairs)


def build_fragments(corpus: Corpus, chunk_size: int = 3) -> list[Fragment]:
    """Chunk every recipe into fragments of at most ``chunk_size`` steps.

    Fragments cover all steps in order with no overlap, each prefixed by the
    recipe name. Iteration is by sorted recipe id so the result does not
    depend on record order.
    """
    if chunk_size < 1:
        raise ValueError("chunk_size must be >= 1")
    fragments: list[Fragment] = []
    for rid in sorted(corpus.recipes):
        recipe = corpus.recipes[rid]
        for idx, start in enumerate(range(0, len(recipe.steps), chunk_size)):
            run = recipe.steps[start : start + chunk_size]
            text = f"{recipe.name}：" + "；".join(run)
            fragments.append(
                Fragment(
                    fragment_id=f"{rid}#{idx}",
                    recipe_id=rid,
                    text=text,
                    steps=run,
                    step_start=start,
                )
            )
    return fragments


def recipe_profile_text(recipe: Recipe, corpus: Corpus) -> str:
    """Text used to embed a recipe itself (candidate-anchored retrieval)."""
    parts = [recipe.name]
    if recipe.dish_type:
        parts.append(recipe.dish_type)
    parts.extend(
        corpus.ingredients[ref.ingredient_id].canonical_name for ref in recipe.ingredient_refs
    )
    parts.extend(corpus.keywords[k].label for k in recipe.keyword_refs)
    return "，".join(parts)
