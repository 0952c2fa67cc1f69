import json
from fractions import Fraction

import pytest

from dworkhg.cli import OUTPUT_DIR_ENV, main
from dworkhg.padic import FqSpec, teichmuller
from dworkhg.series import HGParameter, dwork_eval


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_dwork(capsys):
    code, out, _ = run(capsys, "eval", "dwork", "--p", "5", "--a", "1/2", "--d", "1", "--prec", "3", "--point", "teich:2")
    expect = dwork_eval(HGParameter(Fraction(1, 2), 1, 5), teichmuller(FqSpec.default(5), 2, 3), 3)
    assert code == 0
    assert out.strip() == ",".join(map(str, expect.coeffs))


def test_eval_dwork_geometric_lift(capsys):
    code, out, _ = run(capsys, "eval", "dwork", "--p", "5", "--a", "1", "--d", "0", "--any-a", "--point", "lift:7")
    assert code == 0 and out.strip() == str(sum(7**k for k in range(5)) % 25)


def test_eval_dwork_extension_point(capsys):
    code, out, _ = run(capsys, "eval", "dwork", "--p", "3", "--a", "1/2", "--f", "2", "--point", "teich:1,1")
    assert code == 0 and len(out.strip().split(",")) == 2


def test_eval_dwork_not_in_domain(capsys):
    code, _, err = run(capsys, "eval", "dwork", "--p", "5", "--a", "1/3", "--point", "teich:1")
    assert code == 1 and "NotInDomain" in err


def test_eval_dwork_bad_point(capsys):
    code, _, err = run(capsys, "eval", "dwork", "--p", "5", "--a", "1/3", "--point", "seven")
    assert code == 2


def test_eval_dwork_a_out_of_range(capsys):
    code, _, _ = run(capsys, "eval", "dwork", "--p", "5", "--a", "3/2", "--point", "teich:2")
    assert code == 2


def test_eval_ffhg(capsys):
    code, out, _ = run(capsys, "eval", "ffhg", "--q", "3", "--alpha", "1", "--t", "2")
    assert code == 0 and out.strip() == "-1,0"


def test_eval_ffhg_beta_count(capsys):
    code, _, _ = run(capsys, "eval", "ffhg", "--q", "5", "--alpha", "1", "--alpha", "2", "--t", "2")
    assert code == 0
    code, _, _ = run(capsys, "eval", "ffhg", "--q", "5", "--alpha", "1", "--beta", "2", "--t", "2")
    assert code == 2


def test_verify_single_case(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, text, _ = run(capsys, "verify", "--kind", "theorem", "--p", "7", "--a", "1/3", "--d", "2", "--out", str(out))
    assert code == 0 and "0 failed" in text
    doc = json.loads(out.read_text())
    assert doc["summary"] == {"cases": 1, "pass": True}


def test_verify_malformed_config(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("[x]\nkind = theorem\np = 4\nN = 3\noutput = r.json\n")
    code, _, err = run(capsys, "verify", "--config", str(cfg))
    assert code == 2 and "error" in err
    assert list(tmp_path.iterdir()) == [cfg]


def test_verify_missing_config(capsys, tmp_path):
    code, _, _ = run(capsys, "verify", "--config", str(tmp_path / "nope.cfg"))
    assert code == 2


def test_verify_p2_sign_csv(capsys, tmp_path):
    cfg = tmp_path / "p2.cfg"
    cfg.write_text("[report]\nformat = csv\noutput = p2.csv\n[s]\nkind = theorem\np = 2\na = 2/3\nd = 2\nn = 3\n")
    code, _, _ = run(capsys, "verify", "--config", str(cfg), "--out", str(tmp_path / "p2.csv"))
    assert code == 0
    lines = (tmp_path / "p2.csv").read_text().splitlines()
    assert lines[0].startswith("case_id,kind,p,N,r")
    assert all(line.endswith(",true,") for line in lines[1:])


def test_output_dir_override(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "outdir"))
    code, _, _ = run(capsys, "verify", "--kind", "gs-identity", "--q", "9", "--out", "gs.json")
    assert code == 0
    assert (tmp_path / "outdir" / "gs.json").exists()


def test_report_subcommand(capsys, tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--kind", "finite-special", "--q", "5", "--out", str(out)]) == 0
    capsys.readouterr()
    code, text, _ = run(capsys, "report", str(out), "--format", "csv")
    assert code == 0
    rows = text.splitlines()
    assert rows[0].split(",")[:2] == ["case_id", "kind"]
    assert len(rows) == 1 + 3 * 4
    code, text, _ = run(capsys, "report", str(out), "--format", "json")
    assert text.encode() == out.read_bytes()


def test_report_unreadable(capsys, tmp_path):
    bad = tmp_path / "x.json"
    bad.write_text("{")
    assert run(capsys, "report", str(bad))[0] == 2


def test_usage_error_from_argparse(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["eval", "dwork", "--p", "5"])
    assert exc.value.code == 2
