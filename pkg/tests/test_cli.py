import json
from importlib import resources

import pytest

from gmk.cli import run


def fixture_path(name):
    return str(resources.files("gmk.fixtures").joinpath(name))


def _run(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_fig3(capsys):
    code, out, _ = _run(capsys, "--human", "eval", fixture_path("fig3.json"), "<>~tri(p->q)", "w0")
    assert code == 0 and out.strip() == "1/2"


def test_eval_json(capsys):
    code, out, _ = _run(capsys, "eval", fixture_path("fig6.json"), "[]p", "w0")
    assert code == 0 and json.loads(out)["value"] == ["3/5", "3/4"]


def test_eval_all_worlds(capsys):
    code, out, _ = _run(capsys, "eval", fixture_path("fig3.json"), "p")
    assert json.loads(out)["values"] == {"w0": "0", "w1": "1/3"}


def test_validity_refutes_and_emits(capsys, tmp_path):
    path = tmp_path / "cm.json"
    code, out, _ = _run(capsys, "validity", "--logic", "kg2pm-f", "<>~~p -> ~~<>p", "--emit-countermodel", str(path))
    assert code == 1
    d = json.loads(out)
    assert d["status"] == "refuted" and d["countermodel_path"] == str(path)
    saved = json.loads(path.read_text())
    assert saved["formula"] == "<>~~p -> ~~<>p" and len(saved["worlds"]) == 2


def test_countermodel_files_are_identical_across_runs(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        _run(capsys, "validity", "--logic", "kbig-f", "tri []p -> []tri p", "--emit-countermodel", str(path))
    assert a.read_bytes() == b.read_bytes()


def test_seeded_oracle_output_is_deterministic(capsys):
    argv = ["validity", "p -> []p", "--frame", fixture_path("fig3.json"), "--world", "w0",
            "--oracle-samples", "200", "--seed", "7"]
    first = _run(capsys, *argv)
    second = _run(capsys, *argv)
    assert first == second and first[0] == 1
    assert json.loads(first[1])["oracle"]["refuted"]


def test_validity_exhausted_bounds_exits_zero(capsys):
    code, out, _ = _run(capsys, "validity", "[](p -> q) -> ([]p -> []q)", "--max-worlds", "2")
    assert code == 0 and json.loads(out)["status"] == "exhausted-bounds"


def test_sat(capsys):
    code, out, _ = _run(capsys, "sat", "~tri <>1 & ~[]0")
    assert code == 0 and json.loads(out)["status"] == "satisfiable"
    code, _, _ = _run(capsys, "sat", "p & ~p")
    assert code == 1


def test_fixtures(capsys):
    code, out, _ = _run(capsys, "fixtures")
    d = json.loads(out)
    assert code == 0 and d["all_ok"] and all(r["ok"] for r in d["rows"])


def test_fixtures_human(capsys):
    code, out, _ = _run(capsys, "--human", "fixtures")
    assert code == 0 and "FAIL" not in out


@pytest.mark.parametrize("flag,want", [
    ("--nnf", "<^>neg p"),
    ("--star", "<^>p_star"),
    ("--bang", "tri p & neg ~tri p"),
])
def test_translate(capsys, flag, want):
    src = "p" if flag == "--bang" else "neg []p"
    code, out, _ = _run(capsys, "translate", src, flag)
    assert code == 0 and json.loads(out)[flag[2:]] == want


def test_translate_pair(capsys):
    code, out, _ = _run(capsys, "translate", "[]p", "--pair")
    assert json.loads(out)["pair"] == ["[]p", "~<>2 p_star"]


def test_translate_needs_one_flag(capsys):
    code, _, err = _run(capsys, "translate", "p", "--nnf", "--star")
    assert code == 2 and "exactly one" in err


def test_parse(capsys):
    code, out, _ = _run(capsys, "parse", "~tri(<>p -> <>q)")
    d = json.loads(out)
    assert code == 0 and d["size"] == 7 and d["modal_depth"] == 1 and d["unicode"] == "∼△(◇p→◇q)"


def test_frame_check(capsys):
    code, out, _ = _run(capsys, "frame-check", fixture_path("tau_half.json"), "--property", "tau")
    assert code == 0 and json.loads(out) == {"property": "tau", "worlds": ["u"], "agrees_with_formula": True}
    code, out, _ = _run(capsys, "frame-check", fixture_path("fig3.json"), "--property", "fls:1,1,1,1@w0")
    assert json.loads(out)["holds"] == (code == 0)


def test_frame_check_witness(capsys):
    code, out, _ = _run(capsys, "frame-check", fixture_path("tau_half.json"), "--property", "crisp+")
    d = json.loads(out)
    assert code == 1 and d["witness"]["world"] == "u" and d["agrees_with_formula"]


def test_proof_check(capsys):
    assert _run(capsys, "proof-check", fixture_path("deriv_mp.json"))[0] == 0
    code, out, _ = _run(capsys, "--human", "proof-check", fixture_path("deriv_trinec_blocked.json"))
    assert code == 1 and out.startswith("rejected at step 2")


@pytest.mark.parametrize("argv", [
    ["parse", "p &"],
    ["eval", "/nonexistent.json", "p"],
    ["validity", "neg p", "--logic", "kbig-f"],
    ["frame-check", fixture_path("fig3.json"), "--property", "fls:1,1@w0"],
    ["frame-check", fixture_path("fig3.json"), "--property", "shiny"],
    ["translate", "<>p", "--bang"],
    ["eval", fixture_path("fig3.json"), "p", "nowhere"],
    ["nosuchcommand"],
])
def test_errors_exit_two(capsys, argv):
    assert _run(capsys, *argv)[0] == 2
