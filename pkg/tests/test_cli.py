import json
import subprocess
import sys

import pytest

from kothe.cli import EXIT_FAIL, EXIT_REFUSAL, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_norm(capsys):
    code, out, _ = run(capsys, "norm", "--a", '[[1,"1/1"]]', "--weight", "const:1")
    assert code == 0 and json.loads(out) == "1/1"


def test_malformed_rational(capsys):
    code, out, err = run(capsys, "norm", "--a", '[[1,"1/0"]]', "--weight", "const:1")
    assert code == EXIT_USAGE and out == "" and "1/0" in err


def test_unknown_command(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == EXIT_USAGE


def test_product(capsys):
    _, out, _ = run(capsys, "product", "--a", '[[1,"1"],[2,"1"]]', "--b", '[[2,"1"]]')
    assert json.loads(out) == [[1, "1/1"], [2, "1/1"]]
    _, out, _ = run(capsys, "product", "--a", '{"scalar":"1","part":[[2,"-1"]]}',
                    "--b", '{"scalar":"1","part":[[2,"-1"]]}')
    assert json.loads(out) == {"scalar": "1/1", "part": [[2, "-1/1"]]}


def test_cex_commands(capsys):
    _, out, _ = run(capsys, "cex", "phi", "--i", "3", "--j", "4")
    assert json.loads(out)["n"] == 18
    _, out, _ = run(capsys, "cex", "phi-inv", "--n", "6")
    d = json.loads(out)
    assert (d["i"], d["j"]) == (3, 1) and d["phi_convention"]
    _, out, _ = run(capsys, "cex", "weight", "--k", "2", "--n", "18")
    assert json.loads(out)["value"] == "3/1"
    _, out, _ = run(capsys, "cex", "weight-prefix", "--k", "1", "--len", "6")
    assert json.loads(out)["values"] == ["1/1", "2/1", "2/1", "3/1", "2/1", "3/1"]
    _, out, _ = run(capsys, "cex", "witness", "--k", "1", "--count", "3")
    d = json.loads(out)
    assert d["indices"] == [3, 5, 8] and d["ok"]
    code, _, _ = run(capsys, "cex", "phi", "--i", "0", "--j", "1")
    assert code == EXIT_USAGE


def test_certify_lbai_default_bounds(capsys):
    code, out, _ = run(capsys, "certify", "lbai", "--family", '{"weights":["cex:1","cex:2"],"horizon":500}',
                       "--test", '[[[1,"1"],[2,"1"]]]', "--eps", "0")
    d = json.loads(out)
    assert code == 0 and d["ok"]
    assert d["constants"] == {"cex:k=1": "2/1", "cex:k=2": "3/1"}


def test_certify_lbai_bound_too_small_refuses(capsys):
    code, _, err = run(capsys, "certify", "lbai", "--family", '["cex:2"]', "--test", '[[30,"1"]]',
                       "--eps", "0", "--bounds", '{"cex:2": "2"}', "--window", "300")
    assert code == EXIT_REFUSAL and "refused" in err


def test_certify_ai_given_candidate_fails(capsys):
    code, out, _ = run(capsys, "certify", "ai", "--family", '["const:1"]', "--test", '[[3,"1"]]',
                       "--eps", "1", "--b", '[[1,"1"]]')
    d = json.loads(out)
    assert code == EXIT_FAIL and d["records"][0]["defects"] == ["2/1"]


def test_certify_bai(capsys):
    code, out, _ = run(capsys, "certify", "bai", "--family", '["const:1"]', "--test", '[[[5,"1"]],[[2,"3"]]]',
                       "--eps", "0", "--bounds", '{"const:1": "1"}')
    d = json.loads(out)
    assert code == 0 and d["ok"] and d["b"] == [[5, "1/1"]]
    code, _, err = run(capsys, "certify", "bai", "--family", '["cex:1","cex:2"]', "--test", '[[5,"1"]]',
                       "--eps", "0", "--bounds", '{"cex:1": "2"}')
    assert code == EXIT_USAGE and "missing" in err


def test_lp_bound(capsys):
    code, out, _ = run(capsys, "lp-bound", "--delta", "1", "--diagonal", "5", "--dmax", "40", "--kmax", "3")
    d = json.loads(out)
    assert code == 0 and d["value"] == "4/1" and d["matches_closed_form"] and d["dual_ok"]
    code, out, _ = run(capsys, "lp-bound", "--delta", "1", "--floor", "10", "--mmax", "30", "--kmax", "3")
    assert code == 0 and json.loads(out)["value"] == "4/1"
    code, _, _ = run(capsys, "lp-bound", "--delta", "1", "--kmax", "3")
    assert code == EXIT_USAGE


def test_lp_sweep(capsys):
    code, out, _ = run(capsys, "lp-sweep", "--delta", "1", "--dlist", "3..12")
    d = json.loads(out)
    assert code == 0 and d["L"] == [f"{v}/1" for v in range(2, 12)]
    _, out, _ = run(capsys, "lp-sweep", "--delta", "1", "--dlist", "3,4,8", "--krule", "const:2")
    assert json.loads(out)["L"] == ["2/1", "3/1", "3/1"]
    code, _, _ = run(capsys, "lp-sweep", "--delta", "0", "--dlist", "3..5")
    assert code == EXIT_USAGE


def test_bv0(capsys):
    _, out, _ = run(capsys, "bv0", "to", "--x", '[[3,"1"]]')
    assert json.loads(out)["image"] == [[1, "1/1"], [2, "1/1"], [3, "1/1"]]
    _, out, _ = run(capsys, "bv0", "from", "--x", '[[1,"1"],[2,"1"],[3,"1"]]')
    assert json.loads(out)["preimage"] == [[3, "1/1"]]
    code, out, _ = run(capsys, "bv0", "check", "--a", '[[2,"1"]]', "--b", '[[3,"1"]]')
    assert code == 0 and json.loads(out)["ok"]


def test_out_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "--out", str(path), "cex", "phi", "--i", "1", "--j", "1")
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["n"] == 1


def test_reproduce_report(capsys):
    code, out, _ = run(capsys, "reproduce-counterexample", "--kmax", "4", "--dmax", "8", "--horizon", "2000")
    d = json.loads(out)
    assert code == 0
    assert d["verdict"] == {"locally_bounded_ai": True, "no_bounded_ai_at_finite_scale": True}
    assert d["property_ii"]["sweep"]["L"] == ["2/1", "3/1", "4/1", "5/1", "6/1", "7/1"]
    assert d["property_i"]["lbai_certificate"]["constants"] == {f"cex:k={k}": f"{k + 1}/1" for k in range(1, 5)}


def _floats(obj):
    if isinstance(obj, float):
        yield obj
    elif isinstance(obj, dict):
        for v in obj.values():
            yield from _floats(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from _floats(v)


def test_no_floats_in_output(capsys):
    for argv in (
        ["reproduce-counterexample", "--kmax", "3", "--dmax", "6", "--horizon", "500"],
        ["lp-bound", "--delta", "1/2", "--diagonal", "4", "--kmax", "2"],
        ["certify", "lbai", "--family", '["cex:1"]', "--test", '[[2,"1/3"]]', "--eps", "0"],
    ):
        _, out, _ = run(capsys, *argv)
        assert list(_floats(json.loads(out))) == []


@pytest.mark.parametrize("argv", [["cex", "witness", "--k", "2", "--count", "4"]])
def test_module_entry_point(argv):
    res = subprocess.run([sys.executable, "-m", "kothe", *argv], capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["values"] == ["3/1"] * 4
