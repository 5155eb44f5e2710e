import json
import os

import pytest
from click.testing import CliRunner

from bisetkit.cli import main


def _json(output: str):
    # 输出前面可能混有 stderr
    return json.JSONDecoder().raw_decode(output[output.index("{"):])[0]


@pytest.fixture
def runner():
    return CliRunner()


def test_basis_json(runner):
    result = runner.invoke(main, ["basis", "C2", "C2", "--json", "--no-cache"])
    assert result.exit_code == 0
    assert len(_json(result.output)["labels"]) == 5


def test_subgroups_a5(runner):
    result = runner.invoke(main, ["subgroups", "A5", "--json"])
    assert result.exit_code == 0
    data = _json(result.output)
    assert data["order"] == 60
    assert len(data["classes"]) == 9


def test_nv_c2(runner):
    result = runner.invoke(main, ["nv", "C2"])
    assert result.exit_code == 0
    assert "true" in result.output


def test_bad_grammar_exits_2(runner):
    result = runner.invoke(main, ["subgroups", "X5"])
    assert result.exit_code == 2


def test_bound_exceeded_exits_2(runner):
    result = runner.invoke(main, ["subgroups", "S6", "--bound", "100"])
    assert result.exit_code == 2


def test_unknown_label_exits_2(runner):
    result = runner.invoke(main, ["delta", "A4", "S3", "triv"])
    assert result.exit_code == 2


def test_table_is_cached(runner, isolated_settings):
    first = runner.invoke(main, ["table", "C3", "--json"])
    assert first.exit_code == 0
    cache_dir = isolated_settings / "cache"
    assert [n for n in os.listdir(cache_dir) if n.endswith(".json")]
    second = runner.invoke(main, ["table", "C3", "--json"])
    assert _json(second.output) == _json(first.output)


def test_qh_c2(runner):
    result = runner.invoke(main, ["qh", "C2", "--json", "--no-cache"])
    assert result.exit_code == 0
    assert _json(result.output)["verdict"] == "pass"


def test_delta_vanishes_at_a4(runner):
    result = runner.invoke(main, ["delta", "A4", "V4", "2dim", "--json"])
    assert result.exit_code == 0
    data = _json(result.output)
    assert data["dim"] == 0
    assert data["factors"] == []


def test_cache_dir_option(runner, tmp_path):
    target = tmp_path / "elsewhere"
    result = runner.invoke(main, ["nv", "C3", "--json", "--cache-dir", str(target)])
    assert result.exit_code == 0
    assert os.listdir(target)


@pytest.mark.slow
def test_nv_a5(runner):
    result = runner.invoke(main, ["nv", "A5"])
    assert result.exit_code == 0
    assert "false; offenders: (C3, sgn)" in result.output
