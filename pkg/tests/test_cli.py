import json

from click.testing import CliRunner
import pytest

from app.cli import Command, cli, run
from app.services.errors import InvalidParameterError


@pytest.fixture
def runner():
    return CliRunner()


@pytest.mark.parametrize(
    'args, expected',
    (
        (["count", "--family", "symmetric", "--mu", "2", "--gamma", "1", "--n", "10"], "3"),
        (["count", "--family", "b", "--p", "3", "--k", "2", "--n", "6", "--method", "enumerate"], "2"),
        (["count", "--family", "unrestricted", "--n", "100"], "190569292"),
        (["map", "--bijection", "sylvester", "--mu", "2", "--gamma", "1", "--partition", "10"], "5,1^5"),
        (["map", "--bijection", "sylvester", "--mu", "2", "--gamma", "1", "--partition", "5,1^5", "--inverse"], "10"),
        (["map", "--bijection", "glaisher-merge", "--k", "2", "--partition", "3,3,1^4"], "6,4"),
        (["map", "--bijection", "conjugate", "--partition", "3,1"], "2,1^2"),
        (["map", "--bijection", "f-to-r", "--p", "2", "--t", "2", "--partition", "2,2,1"], "4,1"),
    ),
)
def test_plain_output(runner, args, expected):
    result = runner.invoke(cli, args)
    assert result.exit_code == 0, result.output
    assert result.output.strip() == expected


def test_enumerate_plain_and_csv(runner):
    result = runner.invoke(cli, ["enumerate", "--family", "symmetric", "--mu", "2", "--gamma", "1", "--n", "10"])
    assert result.output.splitlines() == ["5,1^5", "4,2^2,1^2", "3^2,2^2"]
    result = runner.invoke(cli, ["enumerate", "--family", "avoid16-even", "--n", "6", "--no-shorthand", "--format", "csv"])
    assert result.output.splitlines() == ["partition", '"4,2"', '"3,3"', '"2,2,2"']


def test_count_json_and_table(runner):
    result = runner.invoke(cli, ["count", "--family", "distinct", "--n", "10", "--format", "json"])
    assert json.loads(result.output) == {"family": "distinct", "params": {}, "n": 10, "count": 10}
    result = runner.invoke(cli, ["count", "--family", "distinct", "--n", "3", "--table", "--format", "csv"])
    assert result.output.splitlines() == ["n,count", "0,1", "1,1", "2,1", "3,2"]


def test_map_correspondence_table(runner):
    args = ["map", "--bijection", "sylvester", "--mu", "2", "--gamma", "1", "--n", "10"]
    result = runner.invoke(cli, args)
    assert result.output.splitlines() == ["10 <-> 5,1^5", "8,2 <-> 4,2^2,1^2", "6,4 <-> 3^2,2^2"]
    result = runner.invoke(cli, args + ["--format", "csv"])
    assert result.output.splitlines()[0] == "distinct,symmetric"


def test_map_json_with_trace(runner):
    result = runner.invoke(cli, ["map", "--bijection", "glaisher-merge", "--k", "2", "--partition", "1^4",
                                 "--trace", "--format", "json"])
    payload = json.loads(result.output)
    assert payload["output"] == "4"
    assert [step["rule"] for step in payload["trace"]] == ["merge2"] * 3


def test_series_and_dissect(runner):
    result = runner.invoke(cli, ["series", "--family", "pentagonal", "--order", "7"])
    assert result.output.strip() == "1 - q - q^2 + q^5 + q^7 + O(q^8)"
    result = runner.invoke(cli, ["series", "--family", "distinct", "--order", "5", "--format", "json"])
    assert json.loads(result.output)["coeffs"] == ["1", "1", "1", "2", "2", "3"]
    result = runner.invoke(cli, ["dissect", "--family", "unrestricted", "--modulus", "5", "--residue", "4",
                                 "--order", "3", "--format", "csv"])
    assert result.output.splitlines() == ["n,coefficient", "0,5", "1,30", "2,135", "3,490"]


def test_verify_classical(runner):
    result = runner.invoke(cli, ["verify", "--suite", "classical", "--order", "30", "--enum-cap", "15"])
    assert result.exit_code == 0, result.output
    assert result.output.splitlines()[-1].endswith("suites pass")
    result = runner.invoke(cli, ["verify", "--suite", "theorem-main", "--order", "30", "--enum-cap", "15",
                                 "--format", "csv"])
    assert result.output.splitlines()[0] == "identity,status,range,first_failure_n"
    assert result.output.splitlines()[1].startswith("theorem-main,pass,")


def test_verify_save(runner, tmp_path, monkeypatch):
    monkeypatch.setattr("app.services.report_svc.RESULTS_DIR", str(tmp_path))
    result = runner.invoke(cli, ["verify", "--suite", "slater", "--order", "30", "--enum-cap", "15", "--save", "corrida"])
    assert result.exit_code == 0, result.output
    assert json.loads((tmp_path / "corrida.json").read_text())["passed"] is True


def test_verify_partial_grid_point_is_an_error(runner):
    result = runner.invoke(cli, ["verify", "--suite", "theomain", "--p", "3", "--order", "10"])
    assert result.exit_code == 1
    assert "Error:" in result.output
    assert "faltan" in result.output


@pytest.mark.parametrize(
    'args, message',
    (
        (["count", "--family", "b", "--p", "1", "--k", "2", "--n", "5"], "p"),
        (["count", "--family", "symmetric", "--mu", "2", "--n", "5"], "gamma"),
        (["map", "--bijection", "phi", "--p", "3", "--k", "2", "--partition", "3,1"], "Error"),
        (["map", "--bijection", "conjugate", "--partition", "1,2"], "Error"),
        (["dissect", "--family", "distinct", "--modulus", "3", "--residue", "3", "--order", "5"], "residue"),
        (["enumerate", "--family", "distinct", "--n", "30", "--cap", "20"], "cap"),
    ),
)
def test_domain_errors_exit_with_one(runner, args, message):
    result = runner.invoke(cli, args)
    assert result.exit_code == 1
    assert "Error:" in result.output
    assert message in result.output


def test_usage_errors_exit_with_two(runner):
    assert runner.invoke(cli, ["count", "--family", "nope", "--n", "3"]).exit_code == 2
    assert runner.invoke(cli, ["map", "--bijection", "conjugate"]).exit_code == 2


def test_run_returns_exit_codes(capsys):
    assert run(["count", "--family", "distinct", "--n", "4"]) == 0
    assert capsys.readouterr().out.strip() == "2"
    assert run(["count", "--family", "b", "--p", "1", "--k", "2", "--n", "5"]) == 1
    assert run(["count", "--n", "5"]) == 2


def test_command_validation():
    assert Command("count", "distinct", {"n": 3}).validate().family().name == "distinct"
    with pytest.raises(InvalidParameterError):
        Command("count", "distinct", {"n": -1}).validate()
    with pytest.raises(InvalidParameterError):
        Command("map", "phi", {"p": 3}).validate()
    with pytest.raises(InvalidParameterError):
        Command("verify", "s2", {"alpha": 3}).validate()
    with pytest.raises(InvalidParameterError):
        Command("series", "unknown", {}).validate()
