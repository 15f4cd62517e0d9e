"""Embedded property graph over the corpus, with condition-based screening.

Nodes are recipes, ingredients, and keywords; edges are CONTAINS
(recipe to ingredient, carrying quantity and unit) and HAS_KEYWORD
(recipe to keyword). Screening walks the graph level by level per the
search plan and returns candidates whose retrieval paths explain, hop by
hop, why each recipe matched.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from chefmind.analyzer import ScreeningConditions, SearchPlan
from chefmind.corpus import Corpus, normalize_text
from chefmind.errors import DuplicateId, NoCandidates

EDGE_CONTAINS = "CONTAINS"
EDGE_HAS_KEYWORD = "HAS_KEYWORD"
# Self-hop label for matches justified by a node attribute (name, dish type)
# rather than an edge.
EDGE_MATCHES = "MATCHES"


@dataclass(frozen=True)
class LevelScores:
    exact: float = 1.0
    prefix: float = 0.9
    homestyle: float = 0.8
    cuisine: float = 0.7
    broad: float = 0.5


@dataclass(frozen=True)
class RecipeNode:
    id: str
    name: str
    name_norm: str
    dish_type_norm: str
    prep_minutes: Optional[int]


@dataclass(frozen=True)
class IngredientNode:
    id: str
    name: str


@dataclass(frozen=True)
class KeywordNode:
    id: str
    label: str
    label_norm: str


@dataclass(frozen=True)
class ContainsEdge:
    recipe_id: str
    ingredient_id: str
    quantity: Optional[float]
    unit: str


@dataclass(frozen=True)
class RetrievalPath:
    hops: tuple[tuple[str, str, str], ...]
    satisfied_conditions: tuple[str, ...]

    def __post_init__(self):
        assert self.satisfied_conditions, "a path must satisfy at least one condition"
        for prev, cur in zip(self.hops, self.hops[1:]):
            assert prev[2] == cur[0], "consecutive hops must chain"


@dataclass(frozen=True)
class Candidate:
    recipe_id: str
    match_score: float
    level_id: int
    path: RetrievalPath

    def __post_init__(self):
        assert 0.0 <= self.match_score <= 1.0
        assert self.level_id in (1, 2, 3, 4, 5)


@dataclass(frozen=True)
class GraphStore:
    recipes: dict[str, RecipeNode]
    ingredients: dict[str, IngredientNode]
    keywords: dict[str, KeywordNode]
    contains: dict[str, tuple[ContainsEdge, ...]]
    has_keyword: dict[str, tuple[str, ...]]
    contains_rev: dict[str, tuple[str, ...]]
    keyword_rev: dict[str, tuple[str, ...]]
    # canonical ingredient name (and each alias) -> ingredient id
    ingredient_name_index: dict[str, str] = field(repr=False)
    # recipe id -> canonical names of its ingredients, for set screening
    recipe_ingredient_names: dict[str, frozenset[str]] = field(repr=False)

    @property
    def node_count(self) -> int:
        return len(self.recipes) + len(self.ingredients) + len(self.keywords)

    @property
    def edge_count(self) -> int:
        return sum(len(v) for v in self.contains.values()) + sum(
            len(v) for v in self.has_keyword.values()
        )

    def has_edge(self, src: str, label: str, dst: str) -> bool:
        """True when the hop traverses a real edge, in either direction."""
        if label == EDGE_CONTAINS:
            return any(e.ingredient_id == dst for e in self.contains.get(src, ())) or any(
                e.ingredient_id == src for e in self.contains.get(dst, ())
            )
        if label == EDGE_HAS_KEYWORD:
            return dst in self.has_keyword.get(src, ()) or src in self.has_keyword.get(dst, ())
        if label == EDGE_MATCHES:
            return src == dst and (src in self.recipes or src in self.ingredients or src in self.keywords)
        return False


def build_graph(corpus: Corpus) -> GraphStore:
    recipes: dict[str, RecipeNode] = {}
    ingredients: dict[str, IngredientNode] = {}
    keywords: dict[str, KeywordNode] = {}
    contains: dict[str, tuple[ContainsEdge, ...]] = {}
    has_keyword: dict[str, tuple[str, ...]] = {}
    contains_rev: dict[str, list[str]] = {}
    keyword_rev: dict[str, list[str]] = {}
    name_index: dict[str, str] = {}
    recipe_ing_names: dict[str, frozenset[str]] = {}

    for iid in sorted(corpus.ingredients):
        ing = corpus.ingredients[iid]
        ingredients[iid] = IngredientNode(id=iid, name=ing.canonical_name)
        name_index[ing.canonical_name] = iid
        for alias in ing.aliases:
            name_index[alias] = iid
    for kid in sorted(corpus.keywords):
        kw = corpus.keywords[kid]
        keywords[kid] = KeywordNode(id=kid, label=kw.label, label_norm=normalize_text(kw.label))

    for rid in sorted(corpus.recipes):
        recipe = corpus.recipes[rid]
        if rid in ingredients or rid in keywords:
            raise DuplicateId(rid)
        recipes[rid] = RecipeNode(
            id=rid,
            name=recipe.name,
            name_norm=normalize_text(recipe.name),
            dish_type_norm=normalize_text(recipe.dish_type),
            prep_minutes=recipe.prep_minutes,
        )
        edges = tuple(
            ContainsEdge(rid, ref.ingredient_id, ref.quantity, ref.unit)
            for ref in recipe.ingredient_refs
        )
        contains[rid] = edges
        for e in edges:
            contains_rev.setdefault(e.ingredient_id, []).append(rid)
        has_keyword[rid] = tuple(recipe.keyword_refs)
        for kid in recipe.keyword_refs:
            keyword_rev.setdefault(kid, []).append(rid)
        recipe_ing_names[rid] = frozenset(
            corpus.ingredients[ref.ingredient_id].canonical_name for ref in recipe.ingredient_refs
        )

    return GraphStore(
        recipes=recipes,
        ingredients=ingredients,
        keywords=keywords,
        contains=contains,
        has_keyword=has_keyword,
        contains_rev={k: tuple(sorted(set(v))) for k, v in contains_rev.items()},
        keyword_rev={k: tuple(sorted(set(v))) for k, v in keyword_rev.items()},
        ingredient_name_index=name_index,
        recipe_ingredient_names=recipe_ing_names,
    )


def _excluded_prune(g: GraphStore, conditions: ScreeningConditions) -> frozenset[str]:
    """Recipe ids containing any excluded ingredient; ineligible at every level."""
    if not conditions.excluded_ingredients:
        return frozenset()
    banned_names = set(conditions.excluded_ingredients)
    return frozenset(
        rid for rid, names in g.recipe_ingredient_names.items() if names & banned_names
    )


def _bounce_hops(anchor: str, label: str, others: Sequence[str]) -> tuple[tuple[str, str, str], ...]:
    """Chain k leaf nodes through their shared anchor: l1->A, A->l2, l2->A, ..."""
    if not others:
        return ()
    hops = [(others[0], label, anchor)]
    for leaf in others[1:]:
        hops.append((anchor, label, leaf))
        hops.append((leaf, label, anchor))
    return tuple(hops)


def _level1(g: GraphStore, params: dict, scores: LevelScores) -> list[Candidate]:
    pattern = params.get("name_pattern")
    out = []
    for rid in sorted(g.recipes):
        node = g.recipes[rid]
        if node.name_norm == pattern:
            score, how = scores.exact, "exact"
        elif node.name_norm.startswith(pattern):
            score, how = scores.prefix, "prefix"
        else:
            continue
        path = RetrievalPath(
            hops=((rid, EDGE_MATCHES, rid),),
            satisfied_conditions=(f"name_pattern {pattern!r} ({how} match on {node.name!r})",),
        )
        out.append(Candidate(rid, score, 1, path))
    return out


def _level2(g: GraphStore, params: dict, scores: LevelScores) -> list[Candidate]:
    del scores  # level 2 scores by overlap, not by a fixed constant
    required = tuple(params.get("required_ingredients") or ())
    required_set = set(required)
    out = []
    for rid in sorted(g.recipes):
        have = g.recipe_ingredient_names[rid]
        inter = have & required_set
        if not inter:
            continue
        union = have | required_set
        score = len(inter) / len(union)
        matched_ids = sorted(g.ingredient_name_index[name] for name in inter)
        path = RetrievalPath(
            hops=_bounce_hops(rid, EDGE_CONTAINS, matched_ids),
            satisfied_conditions=tuple(
                f"required ingredient {name!r} present" for name in sorted(inter)
            )
            + (f"ingredient overlap {len(inter)}/{len(union)}",),
        )
        out.append(Candidate(rid, score, 2, path))
    return out


def _level3(g: GraphStore, params: dict, scores: LevelScores) -> list[Candidate]:
    home = params.get("home_tag") or ""
    bound = params.get("max_prep_minutes")
    out = []
    for rid in sorted(g.recipes):
        node = g.recipes[rid]
        home_kw = next(
            (kid for kid in g.has_keyword.get(rid, ()) if g.keywords[kid].label_norm == home),
            None,
        )
        if home_kw is None:
            continue
        if node.prep_minutes is None or node.prep_minutes > bound:
            continue
        path = RetrievalPath(
            hops=((home_kw, EDGE_HAS_KEYWORD, rid),),
            satisfied_conditions=(
                f"keyword {home!r} present",
                f"prep_minutes {node.prep_minutes} <= {bound}",
            ),
        )
        out.append(Candidate(rid, scores.homestyle, 3, path))
    return out


def _level4(g: GraphStore, params: dict, scores: LevelScores) -> list[Candidate]:
    dish_type = params.get("dish_type")
    out = []
    for rid in sorted(g.recipes):
        node = g.recipes[rid]
        if node.dish_type_norm and node.dish_type_norm == dish_type:
            path = RetrievalPath(
                hops=((rid, EDGE_MATCHES, rid),),
                satisfied_conditions=(f"dish_type {dish_type!r} matches recipe attribute",),
            )
        else:
            kw = next(
                (kid for kid in g.has_keyword.get(rid, ()) if g.keywords[kid].label_norm == dish_type),
                None,
            )
            if kw is None:
                continue
            path = RetrievalPath(
                hops=((kw, EDGE_HAS_KEYWORD, rid),),
                satisfied_conditions=(f"dish_type {dish_type!r} matches keyword",),
            )
        out.append(Candidate(rid, scores.cuisine, 4, path))
    return out


def _level5(g: GraphStore, params: dict, scores: LevelScores) -> list[Candidate]:
    terms = tuple(params.get("terms") or ())
    out = []
    for rid in sorted(g.recipes):
        node = g.recipes[rid]
        name_hits = sorted(t for t in terms if t and t in node.name_norm)
        kw_hits: list[tuple[str, str]] = []
        for kid in g.has_keyword.get(rid, ()):
            label = g.keywords[kid].label_norm
            for t in terms:
                if t and t in label:
                    kw_hits.append((t, kid))
        kw_hits.sort()
        if not name_hits and not kw_hits:
            continue
        matched_kw_ids = sorted({kid for _, kid in kw_hits})
        hops = _bounce_hops(rid, EDGE_HAS_KEYWORD, matched_kw_ids) or ((rid, EDGE_MATCHES, rid),)
        conds = tuple(f"term {t!r} occurs in name" for t in name_hits) + tuple(
            f"term {t!r} occurs in keyword {g.keywords[kid].label!r}" for t, kid in kw_hits
        )
        out.append(Candidate(rid, scores.broad, 5, path=RetrievalPath(hops=hops, satisfied_conditions=conds)))
    return out


_LEVEL_IMPLS = {1: _level1, 2: _level2, 3: _level3, 4: _level4, 5: _level5}


def screen_candidates(
    g: GraphStore,
    plan: SearchPlan,
    conditions: ScreeningConditions,
    limit: int,
    scores: LevelScores = LevelScores(),
) -> list[Candidate]:
    """Run the plan's active levels in order and collect explained candidates.

    The first level to find a recipe owns it. Later levels stop running once
    the limit is reached, but the level in progress always completes so the
    final ordering (level asc, score desc, recipe id asc) is a pure function
    of the inputs. Recipes containing excluded ingredients never appear.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    banned = _excluded_prune(g, conditions)
    found: dict[str, Candidate] = {}
    for level in plan.levels:
        if not level.active:
            continue
        for cand in _LEVEL_IMPLS[level.level_id](g, level.params, scores):
            if cand.recipe_id in banned or cand.recipe_id in found:
                continue
            found[cand.recipe_id] = cand
        if len(found) >= limit:
            break
    if not found:
        raise NoCandidates()
    ranked = sorted(found.values(), key=lambda c: (c.level_id, -c.match_score, c.recipe_id))
    return ranked[:limit]


def validate_path(g: GraphStore, path: RetrievalPath) -> bool:
    """Every hop must traverse a real edge (or be a node self-match)."""
    return all(g.has_edge(src, label, dst) for src, label, dst in path.hops)


def explain(c: Candidate) -> str:
    """Render a candidate's retrieval path without touching the graph."""
    lines = [f"recipe {c.recipe_id} matched at level {c.level_id} (score {c.match_score:.3f})"]
    for src, label, dst in c.path.hops:
        lines.append(f"  {src} -[{label}]-> {dst}")
    for cond in c.path.satisfied_conditions:
        lines.append(f"  satisfies: {cond}")
    return "\n".join(lines)


def export_snapshot(g: GraphStore) -> str:
    """Line-delimited JSON dump of nodes and edges, for debugging tools."""
    import json

    lines = []
    for rid in sorted(g.recipes):
        n = g.recipes[rid]
        lines.append(
            json.dumps(
                {"node": rid, "kind": "recipe", "name": n.name, "dish_type": n.dish_type_norm,
                 "prep_minutes": n.prep_minutes},
                ensure_ascii=False,
                sort_keys=True,
            )
        )
    for iid in sorted(g.ingredients):
        lines.append(
            json.dumps(
                {"node": iid, "kind": "ingredient", "name": g.ingredients[iid].name},
                ensure_ascii=False,
                sort_keys=True,
            )
        )
    for kid in sorted(g.keywords):
        lines.append(
            json.dumps(
                {"node": kid, "kind": "keyword", "label": g.keywords[kid].label},
                ensure_ascii=False,
                sort_keys=True,
            )
        )
    for rid in sorted(g.contains):
        for e in g.contains[rid]:
            lines.append(
                json.dumps(
                    {"edge": EDGE_CONTAINS, "from": rid, "to": e.ingredient_id,
                     "qty": e.quantity, "unit": e.unit},
                    ensure_ascii=False,
                    sort_keys=True,
                )
            )
    for rid in sorted(g.has_keyword):
        for kid in g.has_keyword[rid]:
            lines.append(
                json.dumps(
                    {"edge": EDGE_HAS_KEYWORD, "from": rid, "to": kid},
                    ensure_ascii=False,
                    sort_keys=True,
                )
            )
    return "\n".join(lines) + "\n"
