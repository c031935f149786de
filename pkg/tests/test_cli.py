import json
import os
import subprocess
import sys

from graphqa.cli import EXIT_CONFIG, EXIT_CORPUS, EXIT_ENGINE, EXIT_GATEWAY, EXIT_OK, data_path, main

TOWER_QUESTION = "What is the location of tower 4?"
TOWER_ANSWER = "The location of Tower 4 is at 32.58088351° latitude and -106.7533307° longitude."


def test_gen_data_writes_valid_dataset(tmp_path, capsys):
    out = tmp_path / "data.jsonl"
    assert main(["gen-data", "--out", str(out)]) == EXIT_OK
    from graphqa.graph import load_dataset_file

    stats = load_dataset_file(str(out)).stats()
    assert (stats.node_count, stats.relationship_count, stats.property_key_count) == (135, 121, 11)


def test_gen_data_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert main(["gen-data", "--out", str(a), "--seed", "7"]) == EXIT_OK
    assert main(["gen-data", "--out", str(b), "--seed", "7"]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_gen_data_invalid_config_exit_code(tmp_path):
    out = tmp_path / "x.jsonl"
    assert main(["gen-data", "--out", str(out), "--tower-count", "0"]) == EXIT_CONFIG


def test_gen_data_config_file(tmp_path):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"tower_count": 3, "attached_sensors": 5, "spare_sensors": 0}))
    out = tmp_path / "small.jsonl"
    assert main(["gen-data", "--out", str(out), "--config", str(config)]) == EXIT_OK
    from graphqa.graph import load_dataset_file

    assert load_dataset_file(str(out)).stats().node_count == 8


def test_ask_one_shot_replay(capsys):
    code = main(
        [
            "ask",
            TOWER_QUESTION,
            "--replay",
            data_path("transcripts"),
            "--model-task1",
            "llama3.1:8b",
        ]
    )
    assert code == EXIT_OK
    assert TOWER_ANSWER in capsys.readouterr().out


def test_ask_show_query_sections(capsys):
    code = main(
        [
            "ask",
            TOWER_QUESTION,
            "--replay",
            data_path("transcripts"),
            "--model-task1",
            "llama3.1:8b",
            "--show-query",
        ]
    )
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "query:" in out
    assert "db output: [<Record Lat=32.58088351 Long=-106.7533307>]" in out
    assert "answer:" in out


def test_ask_replay_miss_exits_gateway_code(capsys):
    code = main(
        [
            "ask",
            "Completely novel question?",
            "--replay",
            data_path("transcripts"),
            "--model-task1",
            "llama3.1:8b",
        ]
    )
    assert code == EXIT_GATEWAY


def test_ask_requires_gateway_configuration(monkeypatch):
    monkeypatch.delenv("GRAPHQA_ENDPOINT", raising=False)
    assert main(["ask", TOWER_QUESTION]) == EXIT_CONFIG


def test_ask_corrupt_dataset_exits_engine_code(tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"kind": "header", "schema_version": "1"}\n{oops\n')
    code = main(
        ["ask", TOWER_QUESTION, "--data", str(bad), "--replay", data_path("transcripts")]
    )
    assert code == EXIT_ENGINE


def test_interactive_ask_loop(monkeypatch, capsys):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(TOWER_QUESTION + "\n\n"))
    code = main(
        ["ask", "--replay", data_path("transcripts"), "--model-task1", "llama3.1:8b"]
    )
    assert code == EXIT_OK
    assert TOWER_ANSWER in capsys.readouterr().out


def test_eval_missing_corpus_exits_corpus_code(tmp_path):
    code = main(
        [
            "eval",
            "--corpus",
            str(tmp_path / "missing.json"),
            "--models",
            "llama3.1:8b",
            "--out",
            str(tmp_path / "out"),
            "--replay",
            data_path("transcripts"),
        ]
    )
    assert code == EXIT_CORPUS


def test_eval_writes_runs_and_reports(tmp_path, capsys):
    out = tmp_path / "out"
    code = main(
        [
            "eval",
            "--models",
            "llama3.1:8b",
            "--out",
            str(out),
            "--replay",
            data_path("transcripts"),
        ]
    )
    assert code == EXIT_OK
    assert (out / "llama3.1_8b.runs.jsonl").exists()
    report = (out / "report.csv").read_text()
    row = next(line for line in report.splitlines() if line.startswith("llama3.1:8b"))
    cells = row.split(",")
    assert cells[1] == "77"
    assert round(float(cells[2]), 1) == 37.7  # EM
    assert round(float(cells[3]), 1) == 61.0  # Content
    assert round(float(cells[4]), 1) == 96.1  # Output
    assert round(float(cells[6]), 1) == 57.1  # Absolute


def test_eval_originals_only_gives_7_runs(tmp_path):
    out = tmp_path / "out7"
    code = main(
        [
            "eval",
            "--models",
            "llama3.1:8b",
            "--out",
            str(out),
            "--replay",
            data_path("transcripts"),
            "--originals-only",
        ]
    )
    assert code == EXIT_OK
    report = (out / "report.csv").read_text()
    row = next(line for line in report.splitlines() if line.startswith("llama3.1:8b"))
    cells = row.split(",")
    assert cells[1] == "7"
    assert round(float(cells[2]), 1) == 42.9


def test_eval_two_models_two_report_rows(tmp_path):
    out = tmp_path / "two"
    code = main(
        [
            "eval",
            "--models",
            "llama3.1:8b,gemma2:2b",
            "--out",
            str(out),
            "--replay",
            data_path("transcripts"),
        ]
    )
    assert code == EXIT_OK
    lines = (out / "report.csv").read_text().splitlines()
    assert len(lines) == 3  # header + one row per model


def test_report_rebuild_from_runs_is_identical(tmp_path):
    out = tmp_path / "out"
    main(
        [
            "eval",
            "--models",
            "llama3.1:8b",
            "--out",
            str(out),
            "--replay",
            data_path("transcripts"),
        ]
    )
    first = (out / "report.txt").read_bytes()
    assert main(["report", "--runs", str(out), "--format", "table-text"]) == EXIT_OK
    assert (out / "report.txt").read_bytes() == first
    assert main(["report", "--runs", str(out), "--format", "delimited-values"]) == EXIT_OK


def test_report_empty_dir_exits_corpus_code(tmp_path):
    assert main(["report", "--runs", str(tmp_path), "--format", "table-text"]) == EXIT_CORPUS


def test_console_entry_point_subprocess():
    result = subprocess.run(
        [sys.executable, "-m", "graphqa.cli", "gen-data", "--out", os.devnull],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
