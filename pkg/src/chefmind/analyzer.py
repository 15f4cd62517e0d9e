"""Query analysis: fuzzy/clear classification, refinement, and search planning.

A query is either answerable as stated (clear) or needs refinement into
structured screening conditions first (fuzzy). Classification is a pure
predicate: the query contains a known ambiguous term, or is shorter than
five characters. Refinement runs three deterministic steps so the whole
frontend is testable offline with no model calls.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from chefmind.corpus import Corpus, normalize_text
from chefmind.errors import EmptyQuery, MalformedRecord, RefinementFailed

LENGTH_THRESHOLD = 5

LEVEL_STRATEGIES = {
    1: "exact_name",
    2: "ingredient_similarity",
    3: "quick_homestyle",
    4: "cuisine_flavor",
    5: "broad_keyword",
}

# A mention of an ingredient directly preceded by one of these marks it as
# unwanted rather than wanted.
NEGATION_MARKERS = ("不要", "不吃", "不放", "不加", "别放", "忌")

_COOCCURRENCE_LIMIT = 5


@dataclass(frozen=True)
class Query:
    """Raw user input. char_count is recomputed from text, never cached."""

    text: str

    @property
    def char_count(self) -> int:
        return len(self.text)

    @staticmethod
    def from_text(raw: str) -> "Query":
        text = raw.strip()
        if not text:
            raise EmptyQuery()
        return Query(text=text)


@dataclass(frozen=True)
class FuzzyVerdict:
    is_fuzzy: bool
    triggered_terms: tuple[str, ...]
    length_triggered: bool

    def __post_init__(self):
        # The verdict must be exactly the disjunction of its two evidence fields.
        assert self.is_fuzzy == (bool(self.triggered_terms) or self.length_triggered)


@dataclass(frozen=True)
class ScreeningConditions:
    name_pattern: Optional[str] = None
    required_ingredients: tuple[str, ...] = ()
    excluded_ingredients: tuple[str, ...] = ()
    required_keywords: tuple[str, ...] = ()
    dish_type: Optional[str] = None
    max_prep_minutes: Optional[int] = None
    broad_terms: tuple[str, ...] = ()

    def is_empty(self) -> bool:
        return not (
            self.name_pattern
            or self.required_ingredients
            or self.excluded_ingredients
            or self.required_keywords
            or self.dish_type
            or self.max_prep_minutes is not None
            or self.broad_terms
        )


@dataclass(frozen=True)
class ScenarioRule:
    trigger: str
    dish_type: str = ""
    keywords: tuple[str, ...] = ()
    max_prep_minutes: Optional[int] = None


@dataclass(frozen=True)
class SearchLevel:
    level_id: int
    strategy: str
    params: dict
    active: bool


@dataclass(frozen=True)
class SearchPlan:
    levels: tuple[SearchLevel, ...]
    source_verdict: FuzzyVerdict

    def __post_init__(self):
        assert tuple(lv.level_id for lv in self.levels) == (1, 2, 3, 4, 5)


def load_lexicon(path: str | Path) -> frozenset[str]:
    """Ambiguous-term set: UTF-8, one term per line, '#' starts a comment."""
    terms = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            term = line.split("#", 1)[0].strip()
            if term:
                terms.add(normalize_text(term))
    return frozenset(terms)


def load_scenario_rules(path: str | Path) -> tuple[ScenarioRule, ...]:
    """Rule table, one JSON object per line; file order is priority order."""
    rules = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise MalformedRecord(line_no, f"invalid JSON: {e.msg}") from e
            trigger = normalize_text(str(obj.get("trigger") or ""))
            if not trigger:
                raise MalformedRecord(line_no, "rule missing trigger")
            maxm = obj.get("max_prep_minutes")
            if maxm is not None and (not isinstance(maxm, int) or isinstance(maxm, bool) or maxm <= 0):
                raise MalformedRecord(line_no, "max_prep_minutes must be a positive integer")
            rules.append(
                ScenarioRule(
                    trigger=trigger,
                    dish_type=normalize_text(str(obj.get("dish_type") or "")),
                    keywords=tuple(normalize_text(k) for k in obj.get("keywords", []) if normalize_text(k)),
                    max_prep_minutes=maxm,
                )
            )
    return tuple(rules)


def detect_fuzzy(q: Query, lexicon: frozenset[str]) -> FuzzyVerdict:
    """Classify a query as fuzzy or clear.

    Fuzzy iff any lexicon term occurs as a substring of the normalized query,
    or the query is shorter than five Unicode scalar values. Both pieces of
    evidence are reported so callers can explain the verdict.
    """
    if not q.text.strip():
        raise EmptyQuery()
    normalized = normalize_text(q.text)
    triggered = tuple(sorted(term for term in lexicon if term and term in normalized))
    length_triggered = q.char_count < LENGTH_THRESHOLD
    return FuzzyVerdict(
        is_fuzzy=bool(triggered) or length_triggered,
        triggered_terms=triggered,
        length_triggered=length_triggered,
    )


@dataclass(frozen=True)
class _Vocabulary:
    """Corpus-derived match tables, all keys normalized."""

    ingredient_terms: tuple[tuple[str, str], ...]  # (surface term, canonical name)
    keyword_labels: tuple[str, ...]
    dish_types: tuple[str, ...]
    recipe_names: tuple[str, ...]


def _build_vocabulary(corpus: Corpus) -> _Vocabulary:
    ingredient_terms = []
    for iid in sorted(corpus.ingredients):
        ing = corpus.ingredients[iid]
        ingredient_terms.append((ing.canonical_name, ing.canonical_name))
        for alias in sorted(ing.aliases):
            ingredient_terms.append((alias, ing.canonical_name))
    # Longer surface forms first so 西红柿 wins over 红柿 if both are known.
    ingredient_terms.sort(key=lambda t: (-len(t[0]), t[0]))
    keyword_labels = tuple(sorted({normalize_text(k.label) for k in corpus.keywords.values()}))
    dish_types = tuple(
        sorted(
            {normalize_text(r.dish_type) for r in corpus.recipes.values() if r.dish_type},
            key=lambda s: (-len(s), s),
        )
    )
    recipe_names = tuple(sorted({normalize_text(r.name) for r in corpus.recipes.values()}))
    return _Vocabulary(tuple(ingredient_terms), keyword_labels, dish_types, recipe_names)


def _is_negated(normalized_query: str, pos: int) -> bool:
    for marker in NEGATION_MARKERS:
        start = pos - len(marker)
        if start >= 0 and normalized_query[start:pos] == marker:
            return True
    return False


def _extract_vocabulary_terms(
    normalized_query: str, corpus: Corpus
) -> tuple[tuple[str, ...], tuple[str, ...], tuple[str, ...], Optional[str]]:
    """Step 2: pull corpus-known mentions out of the query.

    Returns (required_ingredients, excluded_ingredients, keywords, dish_type).
    An ingredient mention directly preceded by a negation marker is excluded;
    exclusion wins when the same ingredient is mentioned both ways.
    """
    vocab = _build_vocabulary(corpus)
    required: set[str] = set()
    excluded: set[str] = set()
    for surface, canonical in vocab.ingredient_terms:
        start = 0
        while True:
            pos = normalized_query.find(surface, start)
            if pos < 0:
                break
            if _is_negated(normalized_query, pos):
                excluded.add(canonical)
            else:
                required.add(canonical)
            start = pos + 1
    required -= excluded

    keywords = tuple(sorted(label for label in vocab.keyword_labels if label and label in normalized_query))

    dish_type = None
    best_pos = None
    for dt in vocab.dish_types:
        pos = normalized_query.find(dt)
        if pos >= 0 and (best_pos is None or pos < best_pos):
            dish_type = dt
            best_pos = pos
    return tuple(sorted(required)), tuple(sorted(excluded)), keywords, dish_type


def _expand_cooccurring_keywords(
    corpus: Corpus, required_ingredients: Sequence[str], required_keywords: Sequence[str]
) -> tuple[str, ...]:
    """Step 3: corpus keywords that co-occur with the extracted terms.

    Counts keyword labels over recipes containing any extracted ingredient or
    keyword, drops labels already required, and keeps the top few by count
    (ties by label) as broad fallback terms.
    """
    ingredient_ids = set()
    for name in required_ingredients:
        ing = corpus.ingredient_by_name(name)
        if ing is not None:
            ingredient_ids.add(ing.id)
    wanted_keywords = set(required_keywords)

    counts: dict[str, int] = {}
    for rid in sorted(corpus.recipes):
        recipe = corpus.recipes[rid]
        labels = {normalize_text(corpus.keywords[k].label) for k in recipe.keyword_refs}
        hits_ingredient = any(ref.ingredient_id in ingredient_ids for ref in recipe.ingredient_refs)
        hits_keyword = bool(labels & wanted_keywords)
        if not (hits_ingredient or hits_keyword):
            continue
        for label in labels:
            if label and label not in wanted_keywords:
                counts[label] = counts.get(label, 0) + 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return tuple(label for label, _ in ranked[:_COOCCURRENCE_LIMIT])


def _apply_scenario_rules(
    normalized_query: str, rules: Sequence[ScenarioRule]
) -> tuple[tuple[str, ...], Optional[str], Optional[int]]:
    """Step 1: rule-table lookup over trigger substrings.

    Keywords from every matching rule are unioned; for the scalar fields the
    first matching rule that sets them wins (file order is priority order).
    """
    keywords: list[str] = []
    dish_type: Optional[str] = None
    max_prep: Optional[int] = None
    for rule in rules:
        if rule.trigger not in normalized_query:
            continue
        for kw in rule.keywords:
            if kw not in keywords:
                keywords.append(kw)
        if dish_type is None and rule.dish_type:
            dish_type = rule.dish_type
        if max_prep is None and rule.max_prep_minutes is not None:
            max_prep = rule.max_prep_minutes
    return tuple(keywords), dish_type, max_prep


def refine_fuzzy(
    q: Query,
    verdict: FuzzyVerdict,
    corpus: Corpus,
    rules: Sequence[ScenarioRule] = (),
) -> ScreeningConditions:
    """Turn a fuzzy query into screening conditions via three fixed steps.

    (1) scenario rules map trigger terms to dish type, keywords, and a time
    bound; (2) vocabulary extraction pulls corpus-known ingredient and keyword
    mentions (with negation handling) out of the text; (3) co-occurrence
    expansion adds related corpus keywords as broad fallback terms. Raises
    RefinementFailed when all three steps come up empty.
    """
    if not verdict.is_fuzzy:
        raise ValueError("refine_fuzzy requires a fuzzy verdict")
    normalized = normalize_text(q.text)

    rule_keywords, rule_dish_type, rule_max_prep = _apply_scenario_rules(normalized, rules)
    required, excluded, mention_keywords, mention_dish_type = _extract_vocabulary_terms(normalized, corpus)

    required_keywords = tuple(dict.fromkeys(list(rule_keywords) + list(mention_keywords)))
    dish_type = rule_dish_type or mention_dish_type
    broad_terms = _expand_cooccurring_keywords(corpus, required, required_keywords)

    conditions = ScreeningConditions(
        name_pattern=None,
        required_ingredients=required,
        excluded_ingredients=excluded,
        required_keywords=required_keywords,
        dish_type=dish_type,
        max_prep_minutes=rule_max_prep,
        broad_terms=broad_terms,
    )
    if conditions.is_empty():
        raise RefinementFailed(q.text)
    return conditions


def derive_clear_conditions(
    q: Query, corpus: Corpus, rules: Sequence[ScenarioRule] = ()
) -> ScreeningConditions:
    """Condition derivation for clear queries: name matching plus extraction.

    The query itself may name a dish exactly or as a prefix, or contain a
    known recipe name; otherwise the same vocabulary extraction used for
    refinement applies. Raises RefinementFailed when nothing can be derived.
    """
    del rules  # clear queries skip the scenario table by design
    normalized = normalize_text(q.text)

    name_pattern = None
    vocab_names = _build_vocabulary(corpus).recipe_names
    if any(name == normalized or name.startswith(normalized) for name in vocab_names):
        name_pattern = normalized
    else:
        contained = [name for name in vocab_names if name and name in normalized]
        if contained:
            # Longest mention wins; earliest position breaks length ties.
            contained.sort(key=lambda n: (-len(n), normalized.find(n), n))
            name_pattern = contained[0]

    # A dish name is a single demand; the ingredient words inside it must not
    # be re-read as separate constraints, so the matched span is masked before
    # extraction ("红烧排骨的做法" asks for one dish, not any rib recipe).
    extraction_text = normalized
    if name_pattern:
        extraction_text = normalize_text(normalized.replace(name_pattern, " "))
    required, excluded, mention_keywords, dish_type = _extract_vocabulary_terms(extraction_text, corpus)
    broad_terms = _expand_cooccurring_keywords(corpus, required, mention_keywords)
    conditions = ScreeningConditions(
        name_pattern=name_pattern,
        required_ingredients=required,
        excluded_ingredients=excluded,
        required_keywords=mention_keywords,
        dish_type=dish_type,
        max_prep_minutes=None,
        broad_terms=broad_terms,
    )
    if conditions.is_empty():
        raise RefinementFailed(q.text)
    return conditions


def build_search_plan(
    conditions: ScreeningConditions,
    verdict: FuzzyVerdict,
    *,
    home_tag: str = "家常",
    quick_minutes_default: int = 30,
) -> SearchPlan:
    """Compile conditions into the five-level plan.

    All five levels are always present in ascending order; a level without
    applicable parameters is marked inactive rather than omitted. Level 5
    treats required keywords and broad terms alike: both are last-resort
    match terms once the more specific levels have had their chance.
    """
    if conditions.is_empty():
        raise ValueError("conditions must populate at least one field")
    home = normalize_text(home_tag)
    keywordish = tuple(dict.fromkeys(list(conditions.required_keywords) + list(conditions.broad_terms)))
    home_implied = home in keywordish

    levels = (
        SearchLevel(1, LEVEL_STRATEGIES[1], {"name_pattern": conditions.name_pattern}, bool(conditions.name_pattern)),
        SearchLevel(
            2,
            LEVEL_STRATEGIES[2],
            {"required_ingredients": conditions.required_ingredients},
            bool(conditions.required_ingredients),
        ),
        SearchLevel(
            3,
            LEVEL_STRATEGIES[3],
            {
                "home_tag": home,
                "max_prep_minutes": (
                    conditions.max_prep_minutes
                    if conditions.max_prep_minutes is not None
                    else quick_minutes_default
                ),
            },
            conditions.max_prep_minutes is not None or home_implied,
        ),
        SearchLevel(4, LEVEL_STRATEGIES[4], {"dish_type": conditions.dish_type}, bool(conditions.dish_type)),
        SearchLevel(5, LEVEL_STRATEGIES[5], {"terms": keywordish}, bool(keywordish)),
    )
    return SearchPlan(levels=levels, source_verdict=verdict)
