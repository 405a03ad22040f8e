import json

import pytest

from absorption import __version__
from absorption import cli
from absorption.cli import CertificationReport, UsageError, certify, main, make_params


@pytest.fixture(scope="module")
def report3():
    return certify(r=3, p=13, depth=10, data=(1, 1, 1))


def test_r3_all_pass(report3):
    assert report3.exit_code == 0
    assert all(c.status == "pass" for c in report3.checks)


def test_check_ids_unique_and_schema(report3):
    d = json.loads(report3.to_json())
    assert list(d) == ["params", "checks", "version"]
    assert d["version"] == __version__
    ids = [c["id"] for c in d["checks"]]
    assert len(ids) == len(set(ids))
    for c in d["checks"]:
        assert list(c) == ["id", "anchor", "status", "expected", "got", "ms"]
        assert c["status"] in ("pass", "fail", "skipped")
        assert isinstance(c["ms"], (int, float))


def test_json_round_trip(report3):
    s = report3.to_json()
    back = CertificationReport.from_json(s)
    assert back.to_json() == s
    assert back.to_dict() == report3.to_dict()


def test_deterministic_apart_from_timing(report3):
    again = certify(r=3, p=13, depth=10, data=(1, 1, 1))
    assert again.canonical() == report3.canonical()


def test_r1_degenerate_report():
    rep = certify(r=1)
    assert rep.exit_code == 0
    assert rep.params["degenerate"] is True
    skipped = [c.id for c in rep.checks if c.status == "skipped"]
    assert "pinfty.S1" in skipped
    assert all(c.status in ("pass", "skipped") for c in rep.checks)


@pytest.mark.parametrize("kwargs", [
    dict(r=4, p=2),
    dict(r=3, p=7 * 2),
    dict(r=3, p=11),            # 3 does not divide 10
    dict(r=2, depth=3),
    dict(r=2, data=(1, 1, 1)),
    dict(r=0),
    dict(r=2, trunc=1),
])
def test_usage_errors(kwargs):
    with pytest.raises(UsageError):
        make_params(**kwargs)


def test_cli_exit_codes(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--r", "4", "--p", "2"])
    assert exc.value.code == 2
    out = tmp_path / "r2.json"
    assert main(["--r", "2", "--format", "json", "--out", str(out)]) == 0
    rep = CertificationReport.from_json(out.read_text())
    assert rep.params["r"] == 2 and rep.params["p"] == 101
    printed = capsys.readouterr().out
    assert json.loads(printed) == rep.to_dict()


def test_text_format(capsys):
    assert main(["--r", "2", "--serre-pairs", "5"]) == 0
    text = capsys.readouterr().out
    assert "summary:" in text and "[PASS   ]" in text


def test_falsification_gives_exit_1(monkeypatch):
    # a deliberately wrong expectation must surface as a failing check, not a crash
    monkeypatch.setattr(cli, "expected_simple_ext", lambda r, j, k, n: 0)
    rep = certify(r=2)
    failed = [c.id for c in rep.failed]
    assert failed == ["ext.simples"]
    assert rep.exit_code == 1
    # sibling checks still ran
    assert len(rep.checks) == len(certify(r=2).checks)


def test_default_prime():
    assert cli.smallest_prime_for(1) == 101
    assert cli.smallest_prime_for(3) == 103
    assert cli.smallest_prime_for(6) == 103
    assert cli.smallest_prime_for(4) == 101
