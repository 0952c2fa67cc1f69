import csv
import io
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dworkhg import __version__
from dworkhg.config import ConfigError, bundled_config, parse_config, parse_int_list
from dworkhg.report import CSV_COLUMNS, ReportDocument, emit_report, parse_report
from dworkhg.verify import CaseSpec, run_sweep


def test_int_lists():
    assert parse_int_list("1-3, 7") == [1, 2, 3, 7]
    assert parse_int_list("5") == [5]
    with pytest.raises(ConfigError):
        parse_int_list(" , ")


def test_theorem_block_expansion():
    cfg = parse_config(
        """
[report]
seed = 4
samples = 2

[t]
kind = theorem
p = 3, 5
N = 3, 4
d = 1
n = 1-2
"""
    )
    assert cfg.seed == 4 and cfg.samples == 2 and cfg.format == "json"
    ids = [c.case_id for c in cfg.cases]
    # p = 3 drops N = 3
    assert ids[:3] == ["t:p=3:a=1/4:d=1:n=1", "t:p=3:a=1/4:d=1:n=2", "t:p=3:a=2/4:d=1:n=1"]
    assert len(ids) == 3 * 2 + (2 + 3) * 2
    assert all(c.kind == "theorem" for c in cfg.cases)
    assert cfg.cases[2].a == Fraction(1, 2)
    assert cfg.echo["cases"]["t"]["N"] == "3, 4"


def test_explicit_a_and_corollary_ids():
    cfg = parse_config("[c]\nkind = corollary\np = 3\na = 1/2, 1/3\nf = 2\n")
    assert [c.case_id for c in cfg.cases] == ["c:p=3:a=1/2:d=1:f=2:n=2"]


def test_finite_block_expansion():
    cfg = parse_config("[g]\nkind = gs-identity\nq = 4, 9\n[s]\nkind = finite-special\nq = 5\nd = 0-1\n")
    assert [c.case_id for c in cfg.cases] == ["g:q=4", "g:q=9", "s:q=5:d=0", "s:q=5:d=1"]
    assert (cfg.cases[1].p, cfg.cases[1].f) == (3, 2)


def test_bundled_config_loads():
    cfg = bundled_config()
    kinds = {c.kind for c in cfg.cases}
    assert kinds == {"theorem", "mod-p", "corollary", "gs-identity", "finite-special", "finite-general"}
    assert len({c.case_id for c in cfg.cases}) == len(cfg.cases)


@pytest.mark.parametrize(
    "text",
    [
        "[x\nkind = theorem",
        "[x]\nkind = nonsense\np = 3\n",
        "[x]\nkind = theorem\np = 4\nN = 3\n",
        "[x]\nkind = theorem\np = 3\nN = 2\nn = 0\n",
        "[x]\nkind = theorem\np = 3\na = 3/2\n",
        "[x]\nkind = theorem\np = 3\nN = two\n",
        "[x]\nkind = theorem\np = 3\nN = 2\ncolour = red\n",
        "[x]\nkind = finite-special\nq = 6\n",
        "[x]\nkind = finite-special\nq = 9\ntuples = some\n",
        "[x]\nkind = finite-special\nq = 9\nmodulus = 2, 0, 1\n",
        "[x]\nkind = theorem\np = 3\nN = 2\nmodulus = 1, 0, 1\n",
        "[x]\nkind = theorem\np = 3\nN = 2\ndegree = 3\nmodulus = 1, 0, 1\n",
        "[report]\nformat = xml\n",
        "[x]\nkind = theorem\np = 3\n",
    ],
)
def test_malformed_configs(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_valid_modulus_accepted():
    cfg = parse_config("[x]\nkind = theorem\np = 3\nN = 2\ndegree = 2\npoints = all\nmodulus = 2, 1, 1\n")
    assert cfg.cases[0].modulus == (2, 1, 1)


def test_empty_report_json():
    doc = ReportDocument(config={})
    expect = (
        '{"cases":[],"config":{},"summary":{"cases":0,"pass":true},"version":"%s"}\n' % __version__
    ).encode()
    assert emit_report(doc, "json") == expect
    assert emit_report(doc, "csv") == (",".join(CSV_COLUMNS) + "\n").encode()


def test_unknown_format():
    with pytest.raises(ValueError):
        emit_report(ReportDocument(), "xml")


def test_parse_report_requires_keys():
    with pytest.raises(ValueError):
        parse_report('{"cases": []}')


def test_csv_rows():
    grid = [CaseSpec("c", "theorem", 5, Fraction(1, 3), d=1, n=2, points="all")]
    doc = ReportDocument.from_verification(run_sweep(grid), {})
    rows = list(csv.reader(io.StringIO(emit_report(doc, "csv").decode())))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 5
    assert rows[1][:8] == ["c", "theorem", "5", "3", "1", "1", "1", "2"]
    assert [r[11] for r in rows[1:]] == ["", "true", "true", ""]
    assert rows[1][12] == "h(t) = 0 mod p" and rows[1][9:11] == ["", ""]


point_dicts = st.fixed_dictionaries(
    {"point": st.text(min_size=1, max_size=8)},
    optional={
        "lhs": st.text(max_size=8),
        "rhs": st.text(max_size=8),
        "match": st.booleans(),
        "skipped_reason": st.text(max_size=8),
    },
)
case_dicts = st.fixed_dictionaries(
    {
        "case_id": st.text(min_size=1, max_size=10),
        "kind": st.sampled_from(["theorem", "corollary", "finite-special"]),
        "params": st.fixed_dictionaries({"p": st.integers(2, 13), "d": st.integers(0, 3)}),
        "pass": st.booleans(),
        "points": st.lists(point_dicts, max_size=3),
        "skipped": st.integers(0, 3),
    }
)


@settings(max_examples=10)
@given(st.lists(case_dicts, max_size=4), st.dictionaries(st.text(max_size=5), st.integers()))
def test_report_round_trip(cases, config):
    doc = ReportDocument(__version__, config, cases)
    data = emit_report(doc, "json")
    back = parse_report(data)
    assert back.to_dict() == doc.to_dict()
    assert emit_report(back, "json") == data
    assert json.loads(data)["summary"] == {"pass": all(c["pass"] for c in cases), "cases": len(cases)}
