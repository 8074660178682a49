import io
import json

import pytest

from coloredkh import cli, corpus
from coloredkh.bicomplex import cable_of
from coloredkh.diagram import to_json
from coloredkh.poly import ConsistencyError, render
from coloredkh.state import state_sum_jones


def call(argv):
    out, err = io.StringIO(), io.StringIO()
    args = cli.build_parser().parse_args(argv)
    code = cli.run(cli.config_from_args(args), out, err)
    return code, out.getvalue(), err.getvalue()


def test_jones_of_unknot():
    assert call(["jones", "corpus:unknot"])[:2] == (0, "q + q^-1\n")


def test_colored_jones_of_kink_four():
    d = corpus.get("kink")
    want = state_sum_jones(cable_of(d, (4,))) - state_sum_jones(cable_of(d, (2,))) * 3 + 1
    code, out, _ = call(["colored-jones", "corpus:kink", "--n", "4"])
    assert code == 0 and out == render(want) + "\n"


def test_malformed_file_exits_one(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"components": 1, "crossings": [{"id": 0}]}')
    code, out, err = call(["khovanov", str(bad)])
    assert code == 1 and out == "" and "bad crossing" in err
    assert call(["khovanov", str(tmp_path / "missing.json")])[0] == 1
    assert call(["colored-jones", "corpus:hopf", "--n", "2,2,2"])[0] == 1


def test_invalid_diagram_reports_codes(tmp_path):
    doc = json.loads(to_json(corpus.get("trefoil")))
    doc["crossings"][0]["arcs"][0] = 99
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(doc))
    code, out, _ = call(["validate", str(path), "--format", "json"])
    assert code == 1 and json.loads(out)["errors"]


def test_too_large_exits_three():
    code, _, err = call(["khovanov", "corpus:trefoil", "--max-states", "16"])
    assert code == 3 and "infeasible" in err


def test_consistency_failure_exits_two(monkeypatch):
    def broken(cfg, d):
        raise ConsistencyError("d∘d != 0 at (i,j)=(0,1) on generator mask=1 labels=x")

    monkeypatch.setitem(cli.COMMANDS, "khovanov", broken)
    code, _, err = call(["khovanov", "corpus:unknot"])
    assert code == 2 and "mask=1" in err


def test_failed_verification_exits_two(monkeypatch):
    def failing(payload):
        raise ConsistencyError("forced")

    monkeypatch.setattr(cli, "_check_pairing_counts", failing)
    code, out, _ = call(["verify", "corpus:kink", "--n", "2"])
    assert code == 2 and "FAIL" in out


@pytest.mark.parametrize("fmt", ["json", "csv", "text"])
@pytest.mark.parametrize("cmd", [["khovanov", "corpus:trefoil"], ["colored-khovanov", "corpus:hopf", "--n", "2,1"],
                                 ["pairings", "corpus:kink", "--n", "4"], ["bracket", "corpus:figure-eight"]])
def test_output_is_byte_stable(cmd, fmt):
    a = call(cmd + ["--format", fmt])
    b = call(cmd + ["--format", fmt])
    assert a == b and a[0] == 0 and a[1]


def test_cache_hit_matches_cold_run(tmp_path):
    argv = ["colored-khovanov", "corpus:kink", "--n", "3", "--format", "json", "--cache-dir", str(tmp_path)]
    cold = call(argv)
    files = list(tmp_path.glob("*.json"))
    assert len(files) == 1
    assert call(argv) == cold
    # a different version stamp invalidates the entry
    doc = json.loads(files[0].read_text())
    doc["version"] = "0"
    doc["result"] = {"groups": []}
    files[0].write_text(json.dumps(doc))
    assert call(argv) == cold


def test_env_overrides(monkeypatch):
    monkeypatch.setenv("COLOREDKH_FORMAT", "json")
    monkeypatch.setenv("COLOREDKH_N", "2")
    code, out, _ = call(["colored-jones", "corpus:kink"])
    assert code == 0 and "polynomial" in json.loads(out)


def test_csv_has_header():
    out = call(["khovanov", "corpus:trefoil", "--format", "csv"])[1]
    assert out.splitlines()[0] == "i,j,rank,torsion"


def test_verify_small_cases_pass():
    for argv in (["verify", "corpus:kink", "--n", "2"], ["verify", "corpus:kink", "--n", "3"],
                 ["verify", "corpus:hopf", "--n", "2,1", "--jobs", "2"]):
        code, out, _ = call(argv)
        assert code == 0 and "FAIL" not in out


def test_cable_subcommand_outputs_a_diagram():
    code, out, _ = call(["cable", "corpus:hopf", "--n", "2,1", "--format", "json"])
    assert code == 0 and json.loads(out)["components"] == 3


def test_main_entry(capsys):
    assert cli.main(["jones", "corpus:unknot"]) == 0
    assert capsys.readouterr().out == "q + q^-1\n"
