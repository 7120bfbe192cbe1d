import json

import pytest

from projlens.classify import Verdict
from projlens.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_json_round_trip(capsys):
    code, out, _ = run(capsys, "classify", "--family", "E6", "--types", "1,6", "--json")
    d = json.loads(out)
    assert code == 0 and d["n"] == 2 and d["decided_by"] == "DUALITY"
    assert Verdict.from_dict(d).to_dict() == d


def test_unresolved_exit_code(capsys):
    code, out, _ = run(capsys, "classify", "--family", "E8", "--types", "1,6,7", "--json")
    assert code == 2 and json.loads(out)["n"] == "unresolved"


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--family", "E7", "--filter", "polar-closed")
    assert code == 0 and out.splitlines()[0] == "count\t18"
    code, out, _ = run(capsys, "enumerate", "--family", "E", "--rank", "6", "--filter", "self-opposite", "--json")
    assert json.loads(out)["count"] == 14


def test_diagram(capsys):
    code, out, _ = run(capsys, "diagram", "--family", "E", "--rank", "6", "--json")
    d = json.loads(out)
    assert d["polar_type"] == [2] and d["opposition"]["1"] == 6


def test_kernel_command(capsys):
    code, out, _ = run(capsys, "mcor", "--family", "D", "--max-rank", "6")
    assert code == 0 and len(out.splitlines()) == 3
    code, out, _ = run(capsys, "mcor", "--family", "A", "--max-rank", "3", "--mode", "overline")
    assert code == 3


def test_brute_and_levi_and_oracle(capsys):
    code, out, _ = run(capsys, "brute", "--geometry", "A2", "--q", "2", "--cotype", "2", "--budget", "20", "--seed", "1")
    rep = json.loads(out)
    assert code == 0 and rep["domain"] == 3 and rep["pi_order"] == 6
    assert set(rep) >= {"domain", "pi_plus_order", "pi_order", "index", "odd_duality", "seed", "budget"}
    code, out, _ = run(capsys, "brute", "--geometry", "A3", "--q", "2", "--types", "1,3", "--budget", "40", "--stabiliser")
    assert code == 0 and json.loads(out)["stabiliser_equals_pi_plus"]
    code, out, _ = run(capsys, "levi", "--dim", "2", "--flag", "1", "--q", "3")
    assert code == 0 and json.loads(out)["u_order"] == 9
    code, out, _ = run(capsys, "oracle-check", "--geometry", "A2", "--q", "2", "--exhaustive")
    assert code == 0 and json.loads(out)["mismatches"] == 0


def test_stable_output(capsys):
    args = ("brute", "--geometry", "A3", "--q", "2", "--types", "2", "--budget", "30", "--seed", "7")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["classify", "--family", "E6"],
    ["classify", "--family", "E6", "--types", "x"],
    ["classify", "--family", "E9", "--types", "1"],
    ["brute", "--geometry", "A2", "--q", "2", "--budget", "0", "--types", "1"],
    ["brute", "--geometry", "A2", "--q", "2", "--types", "1", "--cotype", "2"],
    ["brute", "--geometry", "A2", "--q", "5", "--types", "1"],
    ["levi", "--dim", "3", "--flag", "2", "--q", "2"],
])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as e:
        raise SystemExit(main(argv))
    assert e.value.code == 1
    assert capsys.readouterr().err
