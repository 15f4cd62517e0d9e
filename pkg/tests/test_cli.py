import json

import pytest

from chefmind.cli import main
from chefmind.vectors import load_index


@pytest.fixture(scope="module")
def data_args(fixture_paths):
    return [
        "--data", str(fixture_paths["recipes"]),
        "--aliases", str(fixture_paths["aliases"]),
        "--lexicon", str(fixture_paths["lexicon"]),
        "--rules", str(fixture_paths["rules"]),
    ]


class TestParsing:
    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["transmogrify"],
            ["ingest", "--bogus"],
            ["query", "随便", "--mode", "hybrid"],
            ["serve", "--port", "abc"],
        ],
    )
    def test_user_errors_exit_1(self, argv, capsys):
        assert main(argv) == 1
        assert "error" in capsys.readouterr().err


class TestIngest:
    def test_counts(self, data_args, capsys):
        assert main(["ingest"] + data_args) == 0
        out = capsys.readouterr().out
        assert "recipes: 6" in out
        assert "ingredients: 12" in out
        assert "keywords: 9" in out

    def test_positional_data_matches_flag(self, fixture_paths, data_args, capsys):
        main(["ingest"] + data_args)
        via_flag = capsys.readouterr().out
        main(["ingest", str(fixture_paths["recipes"])] + data_args[2:])
        via_positional = capsys.readouterr().out
        assert via_positional == via_flag

    def test_strict_rejects_malformed_line(self, fixture_paths, tmp_path, capsys):
        # f01 and f03 together cover both alias targets, isolating the bad line
        base = fixture_paths["recipes"].read_text(encoding="utf-8").splitlines()[:3]
        bad = tmp_path / "corpus.jsonl"
        bad.write_text("\n".join(base) + "\n{oops\n", encoding="utf-8")
        argv = ["ingest", str(bad), "--aliases", str(fixture_paths["aliases"])]
        assert main(argv) == 1
        assert "error:" in capsys.readouterr().err

    def test_lenient_skips_and_reports(self, fixture_paths, tmp_path, capsys):
        base = fixture_paths["recipes"].read_text(encoding="utf-8").splitlines()[:3]
        bad = tmp_path / "corpus.jsonl"
        bad.write_text("\n".join(base) + '\n{"name": "no id"}\n', encoding="utf-8")
        argv = ["ingest", str(bad), "--aliases", str(fixture_paths["aliases"]), "--lenient"]
        assert main(argv) == 0
        out = capsys.readouterr().out
        assert "recipes: 3" in out
        assert "skipped: 1" in out
        assert "line 4: missing or empty id" in out

    def test_snapshot_written(self, data_args, tmp_path, capsys):
        out_dir = tmp_path / "snap"
        assert main(["ingest"] + data_args + ["--snapshot-dir", str(out_dir)]) == 0
        snapshot = out_dir / "corpus.jsonl"
        assert snapshot.is_file()
        # 6 recipe records plus 12 ingredient records
        lines = snapshot.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 18
        assert '"id": "f01"' in lines[0]

    def test_missing_file_exits_1(self, tmp_path, capsys):
        assert main(["ingest", str(tmp_path / "nope.jsonl")]) == 1
        assert "error:" in capsys.readouterr().err


class TestIndex:
    def test_snapshots_and_counts(self, data_args, tmp_path, capsys):
        out_dir = tmp_path / "snap"
        assert main(["index"] + data_args + ["--snapshot-dir", str(out_dir)]) == 0
        out = capsys.readouterr().out
        assert "graph: 27 nodes, 30 edges" in out
        assert "index: 10 fragments at dimension 768" in out
        for name in ("corpus.jsonl", "graph.jsonl", "index.bin"):
            assert (out_dir / name).is_file()
        index = load_index(out_dir / "index.bin")
        assert len(index) == 10
        assert index.dimension == 768


class TestQuery:
    def test_json_format_wraps_response_and_trace(self, data_args, capsys):
        assert main(["query", "番茄炒蛋的做法", "--format", "json"] + data_args) == 0
        payload = json.loads(capsys.readouterr().out)
        assert set(payload) == {"response", "trace"}
        assert payload["response"]["recipes"][0]["id"] == "f01"
        assert payload["trace"]["outcome"] == "answered"
        assert payload["trace"]["mode"] == "full"

    def test_table_format_answered(self, data_args, capsys):
        assert main(["query", "番茄炒蛋的做法"] + data_args) == 0
        out = capsys.readouterr().out
        assert "为您找到以下菜谱。" in out
        assert "1. [f01] 番茄炒蛋  level=1 score=1.000" in out
        assert "符合：" in out

    def test_table_format_unprocessed(self, data_args, capsys):
        query = "不放番茄不放土豆不吃鸡蛋不要豆腐随便"
        assert main(["query", query] + data_args) == 0
        assert "unprocessed (NoCandidates)" in capsys.readouterr().out

    def test_blank_query_is_user_error(self, data_args, capsys):
        assert main(["query", "   "] + data_args) == 1
        assert "query must not be empty" in capsys.readouterr().err

    def test_k_caps_results(self, data_args, capsys):
        argv = ["query", "来个快手菜", "--k", "1", "--format", "json"] + data_args
        assert main(argv) == 0
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["response"]["recipes"]) == 1

    def test_config_file_applies(self, data_args, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"candidate_limit": 1}), encoding="utf-8")
        argv = ["query", "来个快手菜", "--format", "json", "--config", str(config)] + data_args
        assert main(argv) == 0
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["response"]["recipes"]) == 1

    def test_bad_config_key_is_user_error(self, data_args, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"no_such_key": 1}), encoding="utf-8")
        assert main(["query", "随便", "--config", str(config)] + data_args) == 1
        assert "unknown key" in capsys.readouterr().err

    def test_internal_failure_exits_2(self, data_args, capsys, monkeypatch):
        def boom(*args, **kwargs):
            raise RuntimeError("boom")

        monkeypatch.setattr("chefmind.cli.run_pipeline", boom)
        assert main(["query", "随便"] + data_args) == 2
        assert "internal error: RuntimeError: boom" in capsys.readouterr().err


class TestEval:
    def test_report_and_table(self, data_args, tmp_path, capsys):
        queries = tmp_path / "queries.jsonl"
        queries.write_text(
            "\n".join(
                [
                    json.dumps({"id": "q1", "text": "番茄炒蛋的做法", "kind": "explicit",
                                "expected": ["f01"], "batch": 1}, ensure_ascii=False),
                    json.dumps({"id": "q2", "text": "来个快手菜", "kind": "fuzzy", "batch": 1},
                               ensure_ascii=False),
                    json.dumps({"id": "q3", "text": "不放番茄不放土豆不吃鸡蛋不要豆腐随便",
                                "kind": "fuzzy", "batch": 2}, ensure_ascii=False),
                ]
            )
            + "\n",
            encoding="utf-8",
        )
        report = tmp_path / "report.jsonl"
        argv = ["eval", "--queries", str(queries), "--report", str(report)] + data_args
        assert main(argv) == 0
        out = capsys.readouterr().out
        assert "mode: full" in out
        assert "Overall" in out
        assert f"report: {report}" in out

        rows = [json.loads(line) for line in report.read_text(encoding="utf-8").splitlines()]
        assert [r["kind"] for r in rows] == ["query", "query", "query", "batch", "batch", "overall"]
        assert rows[0]["returned"] == ["f01"]
        assert rows[2]["outcome"] == "unprocessed"
        assert rows[2]["reason"] == "NoCandidates"
        assert rows[-1]["queries"] == 3
        assert rows[-1]["unprocessed"] == 1
