import json

import pytest

from ssdlab.cli import ConfigError, ParseError, main, parse_config, parse_map, parse_ring, render_text
from ssdlab.ring_core import RingSpec

from conftest import F2


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def run_json(capsys, *argv):
    status, out, err = run(capsys, *argv, "--format", "json-lines")
    lines = out.splitlines()
    assert len(lines) == (1 if status != 2 else 0), err
    return status, (json.loads(lines[0]) if lines else None), err


# -- grammar --------------------------------------------------------------------

@pytest.mark.parametrize("text, spec", [
    ("zn:6", RingSpec.zn(6)),
    ("m2:zn:2", RingSpec.matrix2(F2)),
    ("ut2:zn:2", RingSpec.ut2(F2)),
    ("prod(zn:2,zn:2)", RingSpec.product(F2, F2)),
    ("prod(zn:2, prod(zn:3,zn:2))", RingSpec.product(F2, RingSpec.product(RingSpec.zn(3), F2))),
    ("qm2", RingSpec.rational_matrix2()),
])
def test_ring_literals(text, spec):
    assert parse_ring(text) == spec
    assert parse_ring(str(spec)) == spec


@pytest.mark.parametrize("text, pos, expected", [
    ("zz:6", 0, "one of"),
    ("zn:", 3, "an integer"),
    ("prod(zn:2;zn:2)", 9, "','"),
    ("prod(zn:2,zn:2", 14, "')'"),
    ("qm2x", 3, "end of input"),
])
def test_ring_parse_errors(text, pos, expected):
    with pytest.raises(ParseError) as info:
        parse_ring(text)
    assert info.value.pos == pos and expected in info.value.expected


def test_map_literals():
    assert parse_map("compose(flip, scaledflip:-3/2)") == ("compose", ("flip",), ("scaledflip", -1.5))
    assert parse_map("table:[0,3,2,1]") == ("table", (0, 3, 2, 1))
    for bad, pos in (("compose(flip)", 12), ("table:[1,]", 9), ("scaledflip:1/0", 13), ("rotate", 0)):
        with pytest.raises(ParseError) as info:
            parse_map(bad)
        assert info.value.pos == pos


# -- configuration ----------------------------------------------------------------

def test_shared_options_either_side():
    a = parse_config(["--ring", "m2:zn:2", "--idempotent", "first-nontrivial", "peirce"])
    b = parse_config(["peirce", "--ring", "m2:zn:2", "--idempotent", "first-nontrivial"])
    assert a == b and a.format == "text" and a.seed == 0 and a.workers == 1


def test_config_file_and_override(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"ring": "ut2:zn:2", "subcommand": "verify-theorem", "workers": 3, "seed": 5}))
    cfg = parse_config(["--config", str(path), "--workers", "2"])
    assert (cfg.subcommand, cfg.ring, cfg.workers, cfg.seed) == ("verify-theorem", "ut2:zn:2", 2, 5)


def test_config_file_rejects_unknown_keys(tmp_path, capsys):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"ring": "zn:6", "colour": "blue"}))
    with pytest.raises(ConfigError, match="colour"):
        parse_config(["--config", str(path), "ring"])
    status, _, err = run(capsys, "--config", str(path), "ring")
    assert status == 2 and "colour" in err


def test_bad_values_exit_2(capsys):
    for argv in (["--ring", "zn:1", "ring"], ["--ring", "zn:6", "ring", "--workers", "0"],
                 ["--ring", "zn:6", "ring", "--budget", "-3"], ["--ring", "zn:6"], ["ring"],
                 ["--ring", "zn:6", "ring", "--format", "xml"], ["--ring", "ut2:zn:2", "search", "--g", "flap"]):
        status, out, err = run(capsys, *argv)
        assert status == 2 and out == ""
    status, _, err = run(capsys, "--ring", "zn:1", "ring")
    assert "n >= 2 required" in err


# -- exit-status contract: one positive and one negative fixture per subcommand ----

CASES = {
    "ring": (["--ring", "ut2:zn:2", "ring"], None),
    "idempotents": (["--ring", "m2:zn:2", "idempotents"], ["--ring", "zn:5", "idempotents"]),
    "peirce": (["--ring", "qm2", "peirce"], None),
    "verify-map": (["--ring", "qm2", "verify-map", "--map", "flip", "--check", "automorphism"],
                   ["--ring", "qm2", "verify-map", "--map", "scaledflip:2", "--check", "endomorphism"]),
    "check-assumptions": (["--ring", "ut2:zn:2", "check-assumptions"],
                          ["--ring", "ut2:zn:2", "check-assumptions", "--g", "zero"]),
    "search": (["--ring", "ut2:zn:2", "search"], ["--ring", "m2:zn:2", "search", "--budget", "100"]),
    "verify-theorem": (["--ring", "ut2:zn:2", "verify-theorem"],
                       ["--ring", "prod(zn:2,zn:2)", "--idempotent", "(1,0)", "verify-theorem",
                        "--g-family", "all-tables"]),
    "hunt": (["--ring", "ut2:zn:2", "hunt", "--relax", "drop_clause_r2"],
             ["--ring", "prod(zn:2,zn:2)", "hunt", "--g-family", "all-tables", "--relax", "drop_assumption"]),
    "reproduce-examples": (["--ring", "qm2", "reproduce-examples"], None),
}


@pytest.mark.parametrize("name", sorted(CASES))
def test_exit_status_contract(name, capsys):
    positive, negative = CASES[name]
    status, report, _ = run_json(capsys, *positive)
    assert status == 0 and report["holds"] is True
    if negative is not None:
        status, report, _ = run_json(capsys, *negative)
        assert status == 1 and report["holds"] is False


def test_negative_fixtures_for_checks_on_broken_input(capsys):
    # ring: a non-idempotent as frame selector is a usage error; peirce on a field has no frame
    status, _, err = run(capsys, "--ring", "zn:5", "peirce")
    assert status == 2 and "idempotent" in err


def test_check_assumptions_zero_g_witness(capsys):
    status, report, _ = run_json(capsys, "--ring", "m2:zn:2", "check-assumptions", "--g", "zero")
    assert status == 1
    clause_i = next(c for c in report["result"]["clauses"] if c["clause"] == "i")
    assert not clause_i["holds"] and clause_i["witness"]["a"] != "[[0,0],[0,0]]"


def test_reproduce_examples_prints_witnesses(capsys):
    status, out, _ = run(capsys, "--ring", "qm2", "reproduce-examples")
    assert status == 0
    for text in ("[[0,0],[2,0]]", "[[0,2],[0,0]]", "[[0,3],[0,0]]"):
        assert text in out


@pytest.mark.parametrize("argv", [v[0] for v in CASES.values()] + [v[1] for v in CASES.values() if v[1]])
def test_json_round_trips_to_identical_text(argv, capsys):
    status_t, text, _ = run(capsys, *argv)
    status_j, report, _ = run_json(capsys, *argv)
    assert status_t == status_j
    assert render_text(report) == text


def test_json_lines_stable(capsys):
    argv = ["--ring", "m2:zn:2", "verify-theorem", "--seed", "7", "--format", "json-lines"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    _, parallel, _ = run(capsys, *argv, "--workers", "3")
    assert first == second == parallel


def test_timing_is_opt_in(capsys):
    _, report, _ = run_json(capsys, "--ring", "ut2:zn:2", "verify-theorem", "--timing")
    assert "elapsed" in report
    _, report, _ = run_json(capsys, "--ring", "ut2:zn:2", "verify-theorem")
    assert "elapsed" not in report
