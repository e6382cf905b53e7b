import io
import json

import pytest

from ..cli import JobSpec, load_config, main, parse_tolerances, run


def test_hn(capsys):
    assert main(["hn", "--g", "2"]) == 0
    assert capsys.readouterr().out == "1 + t^2 + 4t^3 + t^4 + t^6\n"


def test_betti(capsys):
    assert main(["betti", "--g", "1", "--weights", "9/10,1/10"]) == 0
    assert capsys.readouterr().out.strip() == "1 + 2t^2 + t^4"


def test_betti_json(capsys):
    assert main(["betti", "--g", "2", "--weights", "1/2", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["schema"] == 1
    assert data["command"] == "betti"
    assert data["betti"] == [1, 0, 2, 4, 2, 4, 2, 0, 1]
    assert data["poincare"] == ["1", "0", "2", "4", "2", "4", "2", "0", "1"]
    assert data["base"]["strategy"] == "empty"


def test_irregular_weights(capsys):
    assert main(["regular", "--g", "1", "--weights", "1/2,1/2"]) == 2
    err = capsys.readouterr().err
    assert "J = {1}" in err
    assert main(["regular", "--weights", "1/2,1/2"]) == 2
    assert main(["betti", "--g", "1", "--weights", "1/2,1/2"]) == 2


def test_normalize_and_dim(capsys):
    assert main(["normalize", "--g", "1", "--weights", "1/3,1"]) == 0
    assert "2/3" in capsys.readouterr().out
    assert main(["dim", "--g", "2"]) == 0
    assert capsys.readouterr().out.strip() == "6"
    assert main(["dim", "--g", "0"]) == 2
    assert "no smooth part" in capsys.readouterr().err
    assert main(["strata", "--g", "2", "--weights", "1/2"]) == 0
    assert "end_min" in capsys.readouterr().out


def test_input_errors(capsys):
    assert main(["betti", "--weights", "1/2"]) == 2
    assert main(["betti", "--g", "1", "--weights", "0.5"]) == 2
    assert main(["betti", "--g", "1", "--weights", "1/2", "--base", "poly:1,-1"]) == 2
    assert main(["probe-empty", "--g", "1", "--weights", "1/2"]) == 2
    with pytest.raises(SystemExit) as e:
        main(["betti", "--no-such-flag"])
    assert e.value.code == 2


def test_config_file(tmp_path, capsys):
    config = tmp_path / "job.cfg"
    config.write_text("# job\ng = 2\nformat = json\n")
    assert main(["hn", "--config", str(config)]) == 0
    assert json.loads(capsys.readouterr().out)["g"] == 2
    # explicit flags win over the file
    assert main(["hn", "--config", str(config), "--format", "text", "--g", "1"]) == 0
    assert capsys.readouterr().out.strip() == "1"


def test_config_file_errors(tmp_path):
    config = tmp_path / "job.cfg"
    config.write_text("colour = blue\n")
    with pytest.raises(ValueError):
        load_config(config)
    assert main(["hn", "--config", str(config)]) == 2
    assert main(["hn", "--config", str(tmp_path / "missing.cfg")]) == 2


def test_parse_tolerances():
    assert parse_tolerances([]).rank == 1e-8
    tolerances = parse_tolerances(["1e-3", "rank=1e-6"])
    assert tolerances.residual == 1e-3
    assert tolerances.rank == 1e-6
    with pytest.raises(ValueError):
        parse_tolerances(["bogus=1"])


def test_probe_empty():
    out, err = io.StringIO(), io.StringIO()
    spec = JobSpec("probe-empty", g=0, weights="9/10,1/10")
    assert run(spec, out, err) == 0
    assert out.getvalue().startswith("probably empty")


def test_verify_regular_with_irregular_weights():
    out = io.StringIO()
    spec = JobSpec("verify-regular", g=1, weights="1/2,1/2", format="json")
    assert run(spec, out, io.StringIO()) == 0
    data = json.loads(out.getvalue())
    assert data["passed"] is True
    assert data["checks"][0]["measured"]["witness"] == [1]


def test_failed_checks_exit_with_one():
    out = io.StringIO()
    spec = JobSpec("verify-regular", g=1, weights="1/3,1/4", samples=3, tol=["0"])
    assert run(spec, out, io.StringIO()) == 1
    assert "FAILED" in out.getvalue()


def test_emptiness_json_carries_seed_and_tolerances():
    out = io.StringIO()
    spec = JobSpec("probe-empty", weights="9/10,1/10", seed=3, tol=["rank=1e-6"], format="json")
    assert run(spec, out, io.StringIO()) == 0
    data = json.loads(out.getvalue())
    assert data["seed"] == 3
    assert data["tolerances"]["rank"] == 1e-6
    assert data["verdict"] == "probably_empty"


def test_selftest_command(capsys):
    assert main(["selftest", "--samples", "3", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["passed"] is True
    assert len(data["checks"]) > 20
    # the negative control: nothing passes a zero tolerance
    assert main(["selftest", "--samples", "3", "--tol", "0"]) == 1
    assert "FAILED" in capsys.readouterr().out
