import json
import math
from fractions import Fraction

import pytest

from subshift_lab.cli import main, parse_range
from subshift_lab.spec_io import MalformedSpec, parse_spec


@pytest.fixture(autouse=True)
def cache_dir(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv("SUBSHIFT_LAB_CACHE", str(d))
    return d


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def run(*argv):
    return main([str(a) for a in argv])


def test_analyze_golden(tmp_path):
    spec = write(tmp_path, "gm.json", {"alphabet_size": 2, "forbidden": ["11"]})
    out = tmp_path / "out"
    out.mkdir()
    assert run("analyze", "--spec", spec, "--nrange", "1..14", "--out", out) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert float(summary["h"]) == pytest.approx(0.4812118, abs=1e-7)
    for name in ("language_table.csv", "good_words.csv", "gibbs.csv", "entropy.csv"):
        assert (out / name).exists()
    rows = (out / "language_table.csv").read_text().splitlines()
    assert rows[0] == "n,count,h_n,exact" and rows[5].split(",")[1] == "13"
    assert (out / "gibbs.csv").read_text().splitlines()[0] == "n,min_ratio_good,max_ratio_all,h_n"


def test_analyze_cache_is_byte_identical(tmp_path, cache_dir):
    spec = write(tmp_path, "s.json", {"alphabet_size": 3, "forbidden": ["00", "121"]})
    a, b, c = (tmp_path / x for x in "abc")
    for d in (a, b, c):
        d.mkdir()
    assert run("analyze", "--spec", spec, "--out", a) == 0
    assert any(cache_dir.iterdir())
    assert run("analyze", "--spec", spec, "--out", b) == 0
    assert run("analyze", "--spec", spec, "--out", c, "--no-cache") == 0
    for name in ("language_table.csv", "good_words.csv", "gibbs.csv", "entropy.csv", "summary.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes() == (c / name).read_bytes()


def test_analyze_full_shift(tmp_path):
    spec = write(tmp_path, "f.json", {"alphabet_size": 3, "forbidden": []})
    assert run("analyze", "--spec", spec, "--out", tmp_path) == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["h_exact"] == "ln(3)"
    assert Fraction(summary["h"]) == Fraction(repr(math.log(3)))


@pytest.mark.parametrize("bad", [
    {"alphabet_size": 0, "forbidden": []},
    {"alphabet_size": 2, "forbidden": ["12"]},
    {"forbidden": ["1"]},
    "{not json",
])
def test_malformed_spec_exit_1(tmp_path, bad, capsys):
    spec = write(tmp_path, "bad.json", bad)
    assert run("analyze", "--spec", spec, "--out", tmp_path) == 1
    assert "malformed spec" in capsys.readouterr().err


def test_analyze_too_large(tmp_path):
    spec = write(tmp_path, "big.json", {"alphabet_size": 10, "forbidden": ["00"]})
    assert run("analyze", "--spec", spec, "--nrange", "1..9", "--out", tmp_path) == 2


def test_certify_corollary(tmp_path):
    spec = write(tmp_path, "big.json", {"alphabet_size": 768, "horizon": 40,
                                        "profile": {"geometric": {"C": 1, "r": 2, "from": 14}}})
    assert run("certify", "--spec", spec, "--theorems", "mainthm2,gibbsthm", "--out", tmp_path) == 0
    cert = json.loads((tmp_path / "gibbsthm.json").read_text())
    assert cert["verdict"] == "pass"


def test_certify_golden_fails(tmp_path):
    spec = write(tmp_path, "gm.json", {"alphabet_size": 2, "forbidden": ["11"]})
    assert run("certify", "--spec", spec, "--theorems", "mainthm2", "--out", tmp_path) == 3


def test_certify_inconclusive_without_tail(tmp_path):
    spec = write(tmp_path, "t.json", {"alphabet_size": 8, "profile": {"counts": [0, 0, 1]}})
    assert run("certify", "--spec", spec, "--theorems", "entbound", "--out", tmp_path) == 4


def test_certify_bddthm(tmp_path):
    spec = write(tmp_path, "b.json", {"family": "bounded_density", "k": 25})
    assert run("certify", "--spec", spec, "--theorems", "bddthm", "--out", tmp_path) == 0
    assert json.loads((tmp_path / "bddthm.json").read_text())["verdict"] == "pass"


def test_construct(tmp_path):
    gm = write(tmp_path, "gm.json", {"alphabet_size": 2, "forbidden": ["11"]})
    assert run("construct", "--spec", gm, "--c", "9/10", "--steps", 100, "--out", tmp_path) == 0
    trace = json.loads((tmp_path / "trace.json").read_text())
    assert trace["admissible"] and trace["length"] == 100
    empty = write(tmp_path, "e.json", {"alphabet_size": 2, "forbidden": []})
    assert run("construct", "--spec", empty, "--c", "1", "--steps", 7, "--out", tmp_path) == 0
    assert json.loads((tmp_path / "trace.json").read_text())["length"] == 7
    dead = write(tmp_path, "d.json", {"alphabet_size": 2, "forbidden": ["0", "1"]})
    assert run("construct", "--spec", dead, "--steps", 3, "--out", tmp_path) == 3
    assert run("construct", "--spec", gm, "--strict", "--steps", 3, "--out", tmp_path) == 3


def test_family_round_trip(tmp_path, capsys):
    spec = write(tmp_path, "ab.json", {"family": "alpha_beta", "alpha": "1/5", "beta": "8/5", "depth": 12})
    assert run("family", "--spec", spec, "--out", tmp_path) == 0
    emitted = json.loads((tmp_path / "subshift.json").read_text())
    loaded = parse_spec(emitted)
    assert loaded.alphabet.size == 2 and loaded.forbidden.horizon == 12
    capsys.readouterr()
    ns = write(tmp_path, "ns.json", {"family": "nonsupport", "alphabet": 4, "N": 3})
    assert run("family", "--spec", ns) == 0
    out = json.loads(capsys.readouterr().out)
    assert len(out["forbidden"]) == 6


def test_parse_range():
    assert parse_range("3..9") == (3, 9)
    with pytest.raises(Exception):
        parse_range("9..3")


def test_parse_spec_errors():
    with pytest.raises(MalformedSpec):
        parse_spec({"family": "unknown"})
    with pytest.raises(MalformedSpec):
        parse_spec({"alphabet_size": 2, "forbidden": ["11"], "horizon": 1})
