import json

import pytest

from ffstark.cli import ConfigError, dumps, explain, load_corpus, main, parse_config, report_hash, run, run_corpus

C2 = {"q": 5, "kind": "kummer", "m": 2, "f": [0, 1], "S": [[0, 1], "inf"], "Sigma": [[4, 1]]}


def test_theta_report_for_quadratic_example():
    rep = run(parse_config(dict(C2, statement="theta")))
    assert rep["ok"]
    th = rep["certificate"]["theta"]
    assert th[0]["coeffs"] == {"0": "1"}
    assert th[1]["coeffs"] == {"0": "-3", "1": "2"}
    assert rep["certificate"]["value_at_1"]["coeffs"] == {"0": "-2", "1": "2"}


def test_brumer_stark_report_has_certificate():
    rep = run(parse_config(dict(C2, statement="brumer-stark")))
    assert rep["ok"] and rep["checks"]["fitting_membership"]
    assert "hnf_coefficients" in rep["certificate"]


@pytest.mark.parametrize(
    "patch, field",
    [
        ({"S": [[0, 7], "inf"]}, "S[0]"),
        ({"Sigma": "inf"}, "Sigma"),
        ({"statement": "nonsense"}, "statement"),
        ({"colour": 1}, "colour"),
        ({"Sigma": [[0, 1]]}, "Sigma"),
        ({"ell": "three"}, "ell"),
    ],
)
def test_malformed_config_names_the_field(patch, field):
    doc = dict(C2, statement="theta")
    doc.update(patch)
    with pytest.raises(ConfigError) as exc:
        parse_config(doc)
    assert exc.value.field == field


def test_missing_knob_is_reported():
    with pytest.raises(ConfigError) as exc:
        run(parse_config(dict(C2, statement="coates-sinnott", n=2, k=4)))
    assert exc.value.field == "ell"


def test_same_seed_gives_identical_bytes():
    cfg = dict(C2, statement="picard", seed=7)
    a = dumps(run(parse_config(cfg)))
    b = dumps(run(parse_config(cfg)))
    assert a == b


def test_corpus_covers_required_families():
    names = {e["name"].split("/")[0] for e in load_corpus()}
    assert len(names) >= 12
    kinds = set()
    for e in load_corpus():
        c = e["config"]
        if c.get("kind") == "kummer":
            ms = sorted(L["m"] for L in c["layers"]) if "layers" in c else [c["m"]]
            kinds.add(("kummer", tuple(ms), c.get("constant", 1) > 1))
        else:
            kinds.add((c["kind"], c["q"], c.get("constant", 1) > 1))
    for want in [("kummer", (2,), False), ("kummer", (3,), False), ("kummer", (4,), False), ("kummer", (2, 2), False), ("kummer", (2,), True)]:
        assert want in kinds
    assert ("artin-schreier", 2, False) in kinds and ("artin-schreier", 3, False) in kinds
    assert ("trivial", 5, False) in kinds


def test_single_entry_filter_gives_one_row():
    rows = run_corpus(load_corpus(), only=["c2-f5/theta"])
    assert len(rows) == 1 and rows[0]["status"] == "pass"


def test_corrupted_hash_is_flagged():
    entries = [e for e in load_corpus() if e["name"] == "c2-f5/theta"]
    entries[0] = dict(entries[0], hash="0" * 64)
    rows = run_corpus(entries)
    assert rows[0]["status"] == "diverged"


def test_explain_lists_places_and_coefficients():
    rep = run(parse_config(dict(C2, statement="theta")))
    text = explain(rep)
    assert '"inf" (degree 1): ramified' in text
    assert "[1, 1] (degree 1): sigma = (0,)" in text
    assert "u^1: -3 + 2*[1]" in text
    bs = explain(run(parse_config(dict(C2, statement="brumer-stark"))))
    assert "membership combination coefficients" in bs


def test_main_exit_codes(tmp_path, capsys):
    good = tmp_path / "good.json"
    good.write_text(json.dumps(dict(C2, statement="theta")))
    out = tmp_path / "rep.json"
    assert main(["run", "--config", str(good), "--json", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert report_hash(rep) == report_hash(run(parse_config(dict(C2, statement="theta"))))
    bad = tmp_path / "bad.json"
    bad.write_text('{"q": 5,\n "S": [}')
    assert main(["run", "--config", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err
    assert main(["explain", str(out)]) == 0


def test_failing_check_gives_nonzero_exit(tmp_path, monkeypatch):
    import ffstark.cli as cli

    def fake(cfg):
        return {"ok": False, "checks": {"x": False}, "statement": "theta"}

    monkeypatch.setattr(cli, "run", fake)
    cfgp = tmp_path / "c.json"
    cfgp.write_text(json.dumps(dict(C2, statement="theta")))
    assert cli.main(["run", "--config", str(cfgp)]) == 1
