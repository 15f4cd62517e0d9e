import pytest
from hypothesis import given, settings, strategies as st

from chefmind.analyzer import (
    LEVEL_STRATEGIES,
    Query,
    ScenarioRule,
    ScreeningConditions,
    build_search_plan,
    derive_clear_conditions,
    detect_fuzzy,
    load_lexicon,
    load_scenario_rules,
    refine_fuzzy,
)
from chefmind.errors import EmptyQuery, MalformedRecord, RefinementFailed

import oracles

# alphabet rich in lexicon terms, vocabulary words, and filler
_TEXT_ALPHABET = "随便都行无所谓清淡快手好吃滋补番茄鸡蛋土豆青椒不要放加汤菜的做法呢 abc"


def _fuzzy_verdict():
    return detect_fuzzy(Query.from_text("随便"), frozenset({"随便"}))


def _clear_verdict():
    return detect_fuzzy(Query.from_text("青椒土豆丝的做法"), frozenset())


class TestQuery:
    def test_from_text_strips(self):
        q = Query.from_text("  汤  ")
        assert q.text == "汤"
        assert q.char_count == 1

    @pytest.mark.parametrize("raw", ["", "   ", "\n\t"])
    def test_blank_input_rejected(self, raw):
        with pytest.raises(EmptyQuery):
            Query.from_text(raw)


class TestDetectFuzzy:
    def test_single_character_is_fuzzy_by_length(self, fixture_lexicon):
        verdict = detect_fuzzy(Query.from_text("汤"), fixture_lexicon)
        assert verdict.is_fuzzy
        assert verdict.length_triggered
        assert verdict.triggered_terms == ()

    def test_long_specific_query_is_clear(self, fixture_lexicon):
        q = Query.from_text("青椒土豆丝的家常做法大全集")
        assert q.char_count == 13
        verdict = detect_fuzzy(q, fixture_lexicon)
        assert not verdict.is_fuzzy
        assert verdict.triggered_terms == ()
        assert not verdict.length_triggered

    def test_lexicon_term_triggers_regardless_of_length(self, fixture_lexicon):
        verdict = detect_fuzzy(Query.from_text("来个快手菜"), fixture_lexicon)
        assert verdict.is_fuzzy
        assert verdict.triggered_terms == ("快手",)
        assert not verdict.length_triggered

    def test_short_lexicon_query_reports_both_triggers(self, fixture_lexicon):
        verdict = detect_fuzzy(Query.from_text("随便"), fixture_lexicon)
        assert verdict.is_fuzzy
        assert verdict.triggered_terms == ("随便",)
        assert verdict.length_triggered

    def test_exactly_five_characters_is_not_short(self, fixture_lexicon):
        verdict = detect_fuzzy(Query.from_text("土豆炒青椒"), fixture_lexicon)
        assert not verdict.is_fuzzy

    def test_triggered_terms_sorted(self, fixture_lexicon):
        verdict = detect_fuzzy(Query.from_text("好吃又快手"), fixture_lexicon)
        assert verdict.triggered_terms == ("好吃", "快手")

    def test_matching_ignores_width_and_case(self):
        lexicon = frozenset({"quick"})
        verdict = detect_fuzzy(Query.from_text("ＱＵＩＣＫ dinner please"), lexicon)
        assert verdict.triggered_terms == ("quick",)

    def test_whitespace_only_query_rejected(self, fixture_lexicon):
        with pytest.raises(EmptyQuery):
            detect_fuzzy(Query(text="   "), fixture_lexicon)

    @settings(max_examples=300)
    @given(st.text(alphabet=_TEXT_ALPHABET, min_size=1, max_size=30))
    def test_matches_reference_predicate(self, raw):
        lexicon = load_fixture_lexicon()
        if not raw.strip():
            return
        verdict = detect_fuzzy(Query.from_text(raw), lexicon)
        assert verdict.is_fuzzy == oracles.brute_fuzzy(raw, lexicon)

    @settings(max_examples=200)
    @given(
        st.text(alphabet=_TEXT_ALPHABET, min_size=1, max_size=30),
        st.sampled_from(["汤", "菜", "做法", "番茄"]),
    )
    def test_growing_the_lexicon_never_clears_a_query(self, raw, extra):
        if not raw.strip():
            return
        small = load_fixture_lexicon()
        large = small | {extra}
        q = Query.from_text(raw)
        if detect_fuzzy(q, small).is_fuzzy:
            assert detect_fuzzy(q, large).is_fuzzy


def load_fixture_lexicon():
    # hypothesis bodies cannot take function-scoped fixtures; rebuild inline
    from fixture_corpus import LEXICON

    return frozenset(LEXICON)


class TestLoadLexicon:
    def test_comments_and_blanks_skipped(self, tmp_path):
        path = tmp_path / "lexicon.txt"
        path.write_text("# header\n随便\n\n都行  # trailing\nＱＵＩＣＫ\n", encoding="utf-8")
        assert load_lexicon(path) == frozenset({"随便", "都行", "quick"})


class TestLoadScenarioRules:
    def test_fields_normalized(self, tmp_path):
        path = tmp_path / "rules.jsonl"
        path.write_text(
            '{"trigger": "ＦＡＳＴ", "keywords": ["快手", ""], "dish_type": "汤羹", "max_prep_minutes": 20}\n',
            encoding="utf-8",
        )
        (rule,) = load_scenario_rules(path)
        assert rule == ScenarioRule(trigger="fast", dish_type="汤羹", keywords=("快手",), max_prep_minutes=20)

    def test_blank_lines_keep_numbering(self, tmp_path):
        path = tmp_path / "rules.jsonl"
        path.write_text('\n{"trigger": ""}\n', encoding="utf-8")
        with pytest.raises(MalformedRecord) as exc:
            load_scenario_rules(path)
        assert exc.value.line_no == 2

    @pytest.mark.parametrize(
        "line",
        [
            "{not json",
            '{"keywords": ["快手"]}',
            '{"trigger": "快", "max_prep_minutes": 0}',
            '{"trigger": "快", "max_prep_minutes": -5}',
            '{"trigger": "快", "max_prep_minutes": true}',
            '{"trigger": "快", "max_prep_minutes": "20"}',
        ],
    )
    def test_malformed_rule_rejected(self, tmp_path, line):
        path = tmp_path / "rules.jsonl"
        path.write_text(line + "\n", encoding="utf-8")
        with pytest.raises(MalformedRecord):
            load_scenario_rules(path)


class TestRefineFuzzy:
    def test_requires_fuzzy_verdict(self, fixture_corpus):
        with pytest.raises(ValueError):
            refine_fuzzy(Query.from_text("青椒土豆丝的做法"), _clear_verdict(), fixture_corpus)

    def test_scenario_rule_sets_keyword_and_time_bound(self, fixture_corpus, fixture_lexicon, fixture_rules):
        q = Query.from_text("来个快手菜")
        conditions = refine_fuzzy(q, detect_fuzzy(q, fixture_lexicon), fixture_corpus, fixture_rules)
        assert conditions.required_keywords == ("快手",)
        assert conditions.max_prep_minutes == 20
        assert conditions.name_pattern is None
        assert conditions.required_ingredients == ()
        # co-occurring tags of the two quick recipes, minus the required one
        assert conditions.broad_terms == ("下饭", "家常", "汤", "清淡")

    def test_first_matching_rule_wins_scalar_fields(self, fixture_corpus, fixture_lexicon):
        rules = (
            ScenarioRule(trigger="补", keywords=("宴客",), max_prep_minutes=60),
            ScenarioRule(trigger="滋补", keywords=("滋补",), dish_type="炖菜", max_prep_minutes=15),
        )
        q = Query.from_text("想要滋补")
        conditions = refine_fuzzy(q, detect_fuzzy(q, fixture_lexicon), fixture_corpus, rules)
        assert conditions.max_prep_minutes == 60
        assert conditions.dish_type == "炖菜"
        assert conditions.required_keywords == ("宴客", "滋补")

    def test_negated_ingredient_is_excluded(self, fixture_corpus, fixture_lexicon, fixture_rules):
        q = Query.from_text("不吃鸡蛋随便来")
        conditions = refine_fuzzy(q, detect_fuzzy(q, fixture_lexicon), fixture_corpus, fixture_rules)
        assert conditions.excluded_ingredients == ("鸡蛋",)
        assert conditions.required_ingredients == ()
        assert conditions.required_keywords == ("家常",)

    def test_exclusion_beats_plain_mention(self, fixture_corpus, fixture_lexicon):
        q = Query.from_text("鸡蛋好吃但不吃鸡蛋")
        conditions = refine_fuzzy(q, detect_fuzzy(q, fixture_lexicon), fixture_corpus)
        assert conditions.excluded_ingredients == ("鸡蛋",)
        assert conditions.required_ingredients == ()

    def test_alias_resolves_to_canonical_ingredient(self, fixture_corpus, fixture_lexicon):
        q = Query.from_text("马铃薯")
        conditions = refine_fuzzy(q, detect_fuzzy(q, fixture_lexicon), fixture_corpus)
        assert conditions.required_ingredients == ("土豆",)
        # both potato dishes are vegetarian, so that tag ranks first
        assert conditions.broad_terms == ("素食", "下饭", "开胃")

    def test_nothing_extractable_raises(self, fixture_corpus, fixture_lexicon, fixture_rules):
        q = Query.from_text("呢呢呢")
        with pytest.raises(RefinementFailed):
            refine_fuzzy(q, detect_fuzzy(q, fixture_lexicon), fixture_corpus, fixture_rules)

    @settings(max_examples=150)
    @given(st.text(alphabet=_TEXT_ALPHABET, min_size=1, max_size=20))
    def test_never_returns_empty_conditions(self, fixture_corpus, raw):
        if not raw.strip():
            return
        lexicon = load_fixture_lexicon()
        q = Query.from_text(raw)
        verdict = detect_fuzzy(q, lexicon)
        if not verdict.is_fuzzy:
            return
        try:
            conditions = refine_fuzzy(q, verdict, fixture_corpus)
        except RefinementFailed:
            return
        assert not conditions.is_empty()
        assert not set(conditions.required_ingredients) & set(conditions.excluded_ingredients)


class TestDeriveClearConditions:
    def test_exact_name_masks_its_own_words(self, fixture_corpus):
        conditions = derive_clear_conditions(Query.from_text("番茄炒蛋"), fixture_corpus)
        assert conditions.name_pattern == "番茄炒蛋"
        assert conditions.required_ingredients == ()
        assert conditions.required_keywords == ()
        assert conditions.broad_terms == ()

    def test_prefix_of_known_name(self, fixture_corpus):
        conditions = derive_clear_conditions(Query.from_text("番茄炒"), fixture_corpus)
        assert conditions.name_pattern == "番茄炒"

    def test_name_contained_in_longer_query(self, fixture_corpus):
        conditions = derive_clear_conditions(Query.from_text("番茄炒蛋的做法"), fixture_corpus)
        assert conditions.name_pattern == "番茄炒蛋"
        assert conditions.required_ingredients == ()

    def test_longest_contained_name_wins(self, fixture_corpus):
        conditions = derive_clear_conditions(Query.from_text("家常豆腐和紫菜蛋花汤的做法"), fixture_corpus)
        assert conditions.name_pattern == "紫菜蛋花汤"
        # the unmasked shorter name still contributes its words
        assert conditions.required_ingredients == ("豆腐",)
        assert conditions.required_keywords == ("家常",)

    def test_ingredient_mentions_without_name(self, fixture_corpus):
        conditions = derive_clear_conditions(Query.from_text("想吃土豆和青椒"), fixture_corpus)
        assert conditions.name_pattern is None
        assert conditions.required_ingredients == ("土豆", "青椒")
        assert conditions.broad_terms == ("下饭", "素食", "家常", "开胃")

    def test_dish_type_mention(self, fixture_corpus):
        conditions = derive_clear_conditions(Query.from_text("来一道炒菜"), fixture_corpus)
        assert conditions.dish_type == "炒菜"
        assert conditions.max_prep_minutes is None

    def test_scenario_rules_have_no_effect(self, fixture_corpus, fixture_rules):
        q = Query.from_text("来一道清淡的炒菜")
        assert derive_clear_conditions(q, fixture_corpus, fixture_rules) == derive_clear_conditions(q, fixture_corpus)

    def test_nothing_derivable_raises(self, fixture_corpus):
        with pytest.raises(RefinementFailed):
            derive_clear_conditions(Query.from_text("今天天气真好啊"), fixture_corpus)


class TestBuildSearchPlan:
    def test_all_levels_active_with_full_conditions(self):
        conditions = ScreeningConditions(
            name_pattern="番茄炒蛋",
            required_ingredients=("番茄",),
            excluded_ingredients=("青椒",),
            required_keywords=("快手",),
            dish_type="炒菜",
            max_prep_minutes=25,
            broad_terms=("下饭",),
        )
        plan = build_search_plan(conditions, _fuzzy_verdict())
        assert [lv.active for lv in plan.levels] == [True] * 5
        assert plan.levels[0].params == {"name_pattern": "番茄炒蛋"}
        assert plan.levels[1].params == {"required_ingredients": ("番茄",)}
        assert plan.levels[2].params == {"home_tag": "家常", "max_prep_minutes": 25}
        assert plan.levels[3].params == {"dish_type": "炒菜"}
        assert plan.levels[4].params == {"terms": ("快手", "下饭")}

    def test_levels_always_present_in_order(self):
        plan = build_search_plan(ScreeningConditions(name_pattern="番茄炒蛋"), _clear_verdict())
        assert [lv.level_id for lv in plan.levels] == [1, 2, 3, 4, 5]
        assert [lv.strategy for lv in plan.levels] == [LEVEL_STRATEGIES[i] for i in range(1, 6)]
        assert [lv.active for lv in plan.levels] == [True, False, False, False, False]

    def test_home_tag_in_broad_terms_activates_level_three(self):
        plan = build_search_plan(ScreeningConditions(broad_terms=("家常",)), _fuzzy_verdict())
        level = plan.levels[2]
        assert level.active
        assert level.params["max_prep_minutes"] == 30

    def test_quick_minutes_default_is_configurable(self):
        plan = build_search_plan(
            ScreeningConditions(broad_terms=("家常",)), _fuzzy_verdict(), quick_minutes_default=15
        )
        assert plan.levels[2].params["max_prep_minutes"] == 15

    def test_explicit_time_bound_beats_default(self):
        conditions = ScreeningConditions(required_keywords=("家常",), max_prep_minutes=45)
        plan = build_search_plan(conditions, _fuzzy_verdict())
        assert plan.levels[2].active
        assert plan.levels[2].params["max_prep_minutes"] == 45

    def test_custom_home_tag(self):
        plan = build_search_plan(ScreeningConditions(required_keywords=("招牌",)), _fuzzy_verdict(), home_tag="招牌")
        assert plan.levels[2].active
        assert plan.levels[2].params["home_tag"] == "招牌"

    def test_level_five_merges_keywords_and_broad_terms(self):
        conditions = ScreeningConditions(required_keywords=("快手", "家常"), broad_terms=("下饭", "快手"))
        plan = build_search_plan(conditions, _fuzzy_verdict())
        assert plan.levels[4].params["terms"] == ("快手", "家常", "下饭")

    def test_empty_conditions_rejected(self):
        with pytest.raises(ValueError):
            build_search_plan(ScreeningConditions(), _fuzzy_verdict())

    def test_source_verdict_carried(self):
        verdict = _fuzzy_verdict()
        plan = build_search_plan(ScreeningConditions(dish_type="炒菜"), verdict)
        assert plan.source_verdict is verdict
