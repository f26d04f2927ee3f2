import json

import pytest

from slantsum import (a_type, build_id, builder_paper_examples, builder_tstar_grassmannian,
                      SamplePoint, vertex)
from slantsum.cli import main
from slantsum.io import dump, point_to_json, theory_to_json


@pytest.fixture
def files(tmp_path, monkeypatch):
    def put(name, obj):
        (tmp_path / name).write_text(dump(obj))

    a3 = builder_paper_examples("A3-(2,2)")
    g = builder_paper_examples("Gr(2,2)")
    p12 = builder_tstar_grassmannian(1, 2, [1])
    put("a2.json", theory_to_json(a_type([1, 1], [1, 0])))
    put("a3.json", theory_to_json(a3.theory))
    put("a3-point.json", point_to_json(a3, "a3.json"))
    put("gr22.json", theory_to_json(g.theory))
    put("gr22-point.json", point_to_json(g, "gr22.json"))
    put("gr12.json", theory_to_json(p12.theory))
    put("gr12-point.json", point_to_json(p12, "gr12.json"))
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("SLANT_SEED", raising=False)
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_roots_of_a2(files, capsys):
    code, out = run(capsys, "roots", "--quiver", "a2.json", "--height", "2")
    assert code == 0
    assert out.splitlines() == ["α[1]", "α[2]", "α[1] + α[2]"]


def test_vertex_prints_the_normalized_series(files, capsys):
    code, out = run(capsys, "vertex", "--theory", "a3.json", "--point", "a3-point.json",
                    "--order", "6", "--normalized", "--format", "json", "--seed", "2")
    assert code == 0
    obj = json.loads(out)
    a3 = builder_paper_examples("A3-(2,2)")
    V = vertex(a3.theory, a3, 6, SamplePoint.from_seed(2, a3.theory.framing_slots()), normalized=True)
    assert {tuple(t["z"]): t["coefficient"] for t in obj["terms"]} == {
        e: str(c) for e, c in V.terms.items()}
    degs = [sum(t["z"]) for t in obj["terms"]]
    assert degs == sorted(degs)


def test_check_conjecture_on_gr22(files, capsys):
    code, out = run(capsys, "check", "conjecture", "--theory", "gr22.json", "--order", "8")
    assert code == 0 and out.startswith("conjecture: pass")


def test_check_failure_exit_code(files, capsys):
    code, _ = run(capsys, "check", "conjecture", "--theory", "a3.json", "--b", "0,0,0",
                  "--order", "2", "--samples", "1")
    assert code == 1


def test_inconclusive_exit_code(files, capsys):
    code, _ = run(capsys, "check", "conjecture", "--theory", "gr12.json", "--point",
                  "gr12-point.json", "--order", "2")
    assert code == 2


def test_input_errors_exit_3(files, capsys):
    assert main(["dim", "--theory", "missing.json"]) == 3
    (files / "bad.json").write_text('{"vertices": ["1"], "arrows": [], "v": {"2": 1}, "w": {}}')
    assert main(["dim", "--theory", "bad.json"]) == 3
    assert main(["nonsense"]) == 3
    assert main(["vertex", "--theory", "a3.json", "--twist", "oops"]) == 3


def test_version_matches_reports(capsys):
    with pytest.raises(SystemExit):
        from slantsum.cli import build_parser
        build_parser().parse_args(["--version"])
    assert capsys.readouterr().out.strip() == build_id()


def test_seed_from_environment(files, capsys, monkeypatch):
    monkeypatch.setenv("SLANT_SEED", "7")
    code, out = run(capsys, "check", "conjecture", "--theory", "a3.json", "--order", "2",
                    "--format", "json")
    assert json.loads(out)["seeds"] == [7, 8]


def test_jobs_do_not_change_output(files, capsys):
    args = ["vertex", "--theory", "a3.json", "--order", "5", "--format", "json"]
    _, one = run(capsys, *args, "--jobs", "1")
    _, three = run(capsys, *args, "--jobs", "3")
    assert one == three


def test_global_flags_before_or_after_the_subcommand(files, capsys):
    _, a = run(capsys, "--order", "3", "vertex", "--theory", "a3.json")
    _, b = run(capsys, "vertex", "--theory", "a3.json", "--order", "3")
    assert a == b and "O(4)" in a


def test_character_commands(files, capsys):
    code, out = run(capsys, "tangent", "--theory", "a3.json", "--format", "json")
    assert code == 0 and json.loads(out)["count"] == 8
    code, out = run(capsys, "convtangent", "--theory", "a3.json", "a3.json", "--format", "json")
    assert code == 0 and json.loads(out)["count"] == 16
    code, out = run(capsys, "gtchar", "--theory", "gr22.json", "--order", "3")
    assert out.strip() == "1 + (2)*y[1] + (3)*y[1]^2 + (4)*y[1]^3 + O(4)"
    code, out = run(capsys, "pairings", "--theory", "a3.json", "--format", "json")
    assert json.loads(out)["pairings"] == {"1": 0, "2": -1, "3": 0}
    code, out = run(capsys, "dim", "--theory", "gr12.json")
    assert out.strip() == "2"
    code, out = run(capsys, "dimcheck", "--theory", "a3.json")
    assert code == 0 and out.startswith("pass")
    code, out = run(capsys, "dimcheck", "--corpus", "10")
    assert code == 0


def test_slantsum_command(files, capsys):
    code, out = run(capsys, "slantsum", "--first", "a3.json", "--star1", "2", "--second",
                    "gr22.json", "--star2", "1", "--point1", "a3-point.json", "--point2",
                    "gr22-point.json", "--format", "json", "--vertex", "--normalized",
                    "--order", "2")
    assert code == 0
    obj = json.loads(out)
    assert obj["theory"]["v"] == {"1.1": 1, "1.2": 2, "1.3": 1, "2.1": 2}
    assert obj["vertex"]["deformed"] is True
    code, out = run(capsys, "slantsum", "--first", "a3.json", "--star1", "2", "--second",
                    "gr22.json", "--star2", "1", "--point1", "a3-point.json", "--point2",
                    "gr22-point.json", "--kappa")
    assert "V[2.1] = a[1.2,1] + ħ*a[1.2,1]" in out


def test_check_subcommands(files, capsys):
    slant = ["--first", "a3.json", "--star1", "2", "--second", "gr22.json", "--star2", "1",
             "--point1", "a3-point.json", "--point2", "gr22-point.json", "--order", "3",
             "--samples", "1"]
    assert main(["check", "factorization", *slant]) == 0
    assert main(["check", "branching", *slant]) == 0
    assert main(["check", "twistshift", "--theory", "gr12.json", "--point", "gr12-point.json",
                 "--twist", "1.2=1", "--order", "3"]) == 0
    assert main(["check", "ruijsenaars", "--n", "3", "--order", "2"]) == 0
    no_points = [a for a in slant if not a.endswith("-point.json")]
    no_points = [a for a in no_points if a not in ("--point1", "--point2")]
    assert main(["check", "factorization", *no_points]) == 3


def test_sweep_appends_to_the_ledger(files, capsys):
    cfg = {"checks": [["conjecture", "--theory", "gr22.json", "--order", "4"],
                      ["conjecture", "--theory", "a3.json", "--b", "0,0,0", "--order", "2"],
                      ["conjecture", "--theory", "missing.json"]]}
    (files / "cfg.json").write_text(json.dumps(cfg))
    assert main(["sweep", "--config", "cfg.json", "--ledger", "ledger.jsonl", "--jobs", "2"]) == 3
    main(["sweep", "--config", "cfg.json", "--ledger", "ledger.jsonl"])
    lines = [json.loads(x) for x in (files / "ledger.jsonl").read_text().splitlines()]
    assert [r["status"] for r in lines] == ["pass", "fail", "error"] * 2
    assert all(r["version"] == build_id() and "timestamp" in r for r in lines)
