import json

from click.testing import CliRunner

from holegames.cli import main


def test_count_holes_square(tmp_path):
    pts = tmp_path / "square.json"
    pts.write_text(json.dumps([["0/1", "0/1"], ["1/1", "0/1"], ["1/1", "1/1"], ["0/1", "1/1"]]))
    runner = CliRunner()
    result = runner.invoke(main, ["count-holes", "--k", "3", str(pts)])
    assert result.exit_code == 0
    assert result.output.strip() == "4"
    result = runner.invoke(main, ["count-holes", "--k", "4", str(pts)])
    assert result.output.strip() == "1"


def test_invalid_bias_usage_error():
    runner = CliRunner()
    result = runner.invoke(main, ["simulate", "--bias", "nonsense"])
    assert result.exit_code == 2


def test_unknown_strategy_usage_error():
    runner = CliRunner()
    result = runner.invoke(main, ["simulate", "--maker", "inventive-nonsense"])
    assert result.exit_code == 2


def test_simulate_verify_render_roundtrip(tmp_path):
    runner = CliRunner()
    result = runner.invoke(
        main,
        [
            "simulate", "--variant", "mono", "--k", "3",
            "--maker", "strips-1-1", "--breaker", "random",
            "--seeds", "0..1", "--theorem-mode", "--trace-dir", str(tmp_path),
        ],
    )
    assert result.exit_code == 0, result.output
    traces = sorted(tmp_path.glob("trace-*.json"))
    assert len(traces) == 2
    result = runner.invoke(main, ["verify", str(traces[0])])
    assert result.exit_code == 0

    data = json.loads(traces[0].read_text())
    data["moves"][0]["points"][0][0] = "999999/7"
    bad = tmp_path / "tampered.json"
    bad.write_text(json.dumps(data))
    result = runner.invoke(main, ["verify", str(bad)])
    assert result.exit_code == 1
    assert "turn 1" in result.output

    svg = tmp_path / "board.svg"
    result = runner.invoke(main, ["render-svg", str(traces[0]), str(svg)])
    assert result.exit_code == 0
    assert svg.read_text().startswith("<svg")


def test_simulate_game_mode(tmp_path):
    runner = CliRunner()
    result = runner.invoke(
        main,
        [
            "simulate", "--variant", "mono", "--k", "3",
            "--maker", "random", "--breaker", "greedy-hull",
            "--seeds", "0,1", "--trace-dir", str(tmp_path),
        ],
    )
    assert result.exit_code == 0, result.output
    assert "maker_won" in result.output


def test_grid_cli(tmp_path):
    runner = CliRunner()
    cfg = tmp_path / "grid.json"
    svg = tmp_path / "grid.svg"
    result = runner.invoke(
        main, ["grid", "build", "--t", "3", "--d", "3", "--out", str(cfg), "--svg", str(svg)]
    )
    assert result.exit_code == 0, result.output
    assert svg.exists()
    result = runner.invoke(main, ["grid", "verify", str(cfg)])
    assert result.exit_code == 0
    result = runner.invoke(main, ["grid", "extract", str(cfg), "--k", "2"])
    assert result.exit_code == 0
    assert json.loads(result.output)
