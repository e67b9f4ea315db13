from fractions import Fraction as F
import json

import pytest

from markt.cli import main
from markt.parser import ParseError
from markt.report import Report
from markt.suite import TracePattern, gen_suite, parse_suite

M1 = "main = <g,1>.<a,2>.<b,4>.0 + <g,1>.<a,4>.<d,2>.0;\n"
M2 = "main = <g,1>.<a,4>.<b,2>.0 + <g,1>.<a,2>.<d,4>.0;\n"


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {
        "m1.mpc": M1, "m2.mpc": M2,
        "t1.test": "T1 = <a1>.<a2>.s + <b>.f\n",
        "t2.test": "T2 = <c>.<a2>.s + <b>.f + <b'>.f\n",
        "suite.txt": "# suite\nalphabet: g,a,b,d\nA = <g>.<a>.(<b>.s + <d>.f);\npattern: g.a.d\n",
        "bad.mpc": "main = <g,1>.<a,x>.0;",
    }.items():
        p = tmp_path / name
        p.write_text(text)
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_suite_counts():
    suite = gen_suite(TracePattern.parse("g.a.*", {"g", "a", "b", "d", "d'"}))
    assert len(suite) == 5
    assert all(s.steps[0].failures == {"a", "b", "d", "d'"} for s in suite)
    single = gen_suite(TracePattern.parse("a", {"a"}))
    assert len(single) == 1 and single[0].steps[0].failures == frozenset()
    assert len(gen_suite(TracePattern.parse("*.x.*", {"x", "y", "z"}))) == 9
    with pytest.raises(ValueError):
        TracePattern.parse("a", set())


def test_parse_suite(files):
    named = parse_suite(open(files["suite.txt"]).read())
    assert [n.name for n in named] == ["A", "g.a.d"]
    with pytest.raises(ParseError):
        parse_suite("pattern: g.*")
    with pytest.raises(ParseError):
        parse_suite("# nothing\n")


def test_equiv_fails_with_witness(files, capsys):
    code, out, _ = run(capsys, "equiv", files["m1.mpc"], files["m2.mpc"],
                       "--suite", 'pattern:"g.a.*"', "--alphabet", "g,a,b,d", "--format", "json")
    assert code == 1
    report = json.loads(out)
    assert report["holds"] is False and report["witnesses"]
    w = report["witnesses"][0]
    assert w["prob_left"] != w["prob_right"]


def test_equiv_reflexive(files, capsys):
    code, out, _ = run(capsys, "equiv", files["m1.mpc"], files["m1.mpc"], "--suite", files["suite.txt"])
    assert code == 0 and "holds: yes" in out


def test_prec_rec(files, capsys):
    code, out, _ = run(capsys, "prec-rec", files["t1.test"], files["t2.test"])
    assert code == 0
    assert "precision: 2/3" in out and "recall: 3/4" in out


def test_usage_errors(files, capsys):
    code, _, err = run(capsys, "equiv", files["m1.mpc"], "missing.mpc", "--suite", files["suite.txt"])
    assert code == 2 and "cannot read" in err
    code, _, err = run(capsys, "equiv", files["bad.mpc"], files["m1.mpc"], "--suite", files["suite.txt"])
    assert code == 2 and "line 1" in err
    code, _, _ = run(capsys, "equiv", files["m1.mpc"], files["m2.mpc"])
    assert code == 2
    code, _, _ = run(capsys, "slow", files["m1.mpc"], files["m2.mpc"], "--suite", files["suite.txt"],
                     "--eps", "-1")
    assert code == 2


def test_all_pair_checks_run(files, capsys):
    base = [files["m1.mpc"], files["m2.mpc"], "--suite", files["suite.txt"]]
    for cmd, extra in [
        ("slow", ["--eps", "1/2"]), ("slow-simple", ["--eps", "1/2"]), ("fast", ["--eps", "1/4"]),
        ("temporal", ["--eps", "1/4", "--two-sided"]), ("temporal-pm", ["--eps-vec", "0,1/4,1/4"]),
        ("prob", ["--nu", "1/2"]), ("behavioral", ["--prec", "2/3", "--rec", "2/3"]),
        ("behavioral-timed", []), ("unified", ["--eps", "1/4", "--nu", "0"]),
        ("min-epsilon", ["--mode", "temporal-pm"]),
    ]:
        code, out, _ = run(capsys, cmd, *base, *extra, "--format", "json")
        assert code in (0, 1)
        report = json.loads(out)
        assert report["holds"] == (code == 0)
        assert report["holds"] or report["witnesses"]


def test_min_epsilon_report(files, capsys):
    code, out, _ = run(capsys, "min-epsilon", files["m1.mpc"], files["m2.mpc"],
                       "--suite", files["suite.txt"], "--mode", "temporal-pm", "--format", "json")
    assert code == 0
    assert json.loads(out)["minimal_thresholds"]["epsilon"] == "1/4"


def test_report_round_trip_and_determinism(files, capsys):
    argv = ["slow-simple", files["m1.mpc"], files["m2.mpc"], "--suite", files["suite.txt"],
            "--eps", "1/8", "--format", "json"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)

    def strip(text):
        d = json.loads(text)
        d.pop("timing")
        return d

    assert strip(first) == strip(second)
    report = Report.from_json(first)
    assert Report.from_json(report.to_json()) == report
    assert json.loads(report.to_json()) == json.loads(first)
    for w in report.witnesses:
        assert all(isinstance(t, F) for t in w.theta)


def test_info(files, capsys):
    code, out, _ = run(capsys, "info", files["m1.mpc"], "--format", "json")
    assert code == 0
    info = json.loads(out)
    assert info["states"] == 6 and info["exit_rates"][0] == "2"
