import json
from importlib import resources

import pytest

from latlab.cli import main

FIXTURES = resources.files("latlab").joinpath("data/fixtures")
DPN = str(resources.files("latlab").joinpath("data/dpn_configs.json"))


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def run_json(capsys, *argv):
    rc, out, err = run(capsys, "--json", *argv)
    return rc, json.loads(out) if out.strip() else None


def strip_timing(obj):
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k != "timing"}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


class TestLat:
    def test_show(self, capsys):
        rc, d = run_json(capsys, "lat", "show", "U + A1")
        assert rc == 0 and d["gram"] == [[0, 1, 0], [1, 0, 0], [0, 0, -2]] and d["det"] == 2
        assert d["signature"] == [1, 0, 2]

    def test_disc(self, capsys):
        rc, d = run_json(capsys, "lat", "disc", "D4")
        assert rc == 0 and d["orders"] == [2, 2] and d["size"] == 4

    def test_order(self, capsys):
        rc, d = run_json(capsys, "lat", "order", "U + A1^6")
        assert rc == 0 and d["order"] == 1440 and d["derivation"] == "both_agree"

    def test_order_human(self, capsys):
        rc, out, _ = run(capsys, "lat", "order", "U + D4^2")
        assert rc == 0 and "72" in out

    def test_invariant(self, capsys):
        rc, d = run_json(capsys, "lat", "invariant", "U(2) + E7")
        assert rc == 0 and (d["r"], d["a"], d["delta"]) == (9, 3, 1)

    def test_invariant_of_odd_lattice(self, capsys):
        rc, _, err = run(capsys, "lat", "invariant", "I(1,1)")
        assert rc == 2 and "error" in err

    def test_isom(self, capsys):
        rc, d = run_json(capsys, "lat", "isom", "U(2) + D4^2", "U + A1^4 + D4")
        assert rc == 0 and "isometric" in d and "route" in d
        rc, d = run_json(capsys, "lat", "isom", "dual2(U^2 + E8(2))", "U(2)^2 + E8")
        assert rc == 0 and d["isometric"] is True
        rc, d = run_json(capsys, "lat", "isom", "U + A1", "U + A1^2")
        assert d["isometric"] is False and d["route"] == "invariants"

    def test_complement(self, capsys):
        rc, d = run_json(capsys, "lat", "complement", "U^2 + D6", "--vector", "0,0,0,0,-1,-1,0,0,0,0")
        assert rc == 0 and d["signature"] == [2, 7] and d["disc_orders"] == [4] and d["norm"] == -4

    def test_heegner(self, capsys):
        rc, d = run_json(capsys, "lat", "heegner", "U^2 + D6", "--norm", "-4", "--half-dual")
        assert rc == 0 and len(d["vectors"]) == 1

    def test_bad_box(self, capsys):
        rc, _, _ = run(capsys, "lat", "heegner", "U", "--norm", "-2", "--box", "0")
        assert rc == 2

    @pytest.mark.parametrize("name", ["quadric_8_6_1.json", "plane_14_2_0.json"])
    def test_build(self, capsys, name):
        rc, d = run_json(capsys, "lat", "build", str(FIXTURES.joinpath(name)))
        assert rc == 0 and d["passed"]

    def test_parse_error(self, capsys):
        rc, out, err = run(capsys, "lat", "show", "A1^0")
        assert rc == 2 and out == "" and "parse error" in err

    def test_bad_vector(self, capsys):
        rc, _, _ = run(capsys, "lat", "complement", "U", "--vector", "1,x")
        assert rc == 2


class TestOther:
    def test_dpn(self, capsys):
        rc, d = run_json(capsys, "dpn", "compute", DPN)
        assert rc == 0 and d["passed"]

    def test_dpn_mismatch(self, capsys, tmp_path):
        p = tmp_path / "c.json"
        p.write_text(json.dumps({"rho_y": 1, "components": 2, "singularities": [{"type": "A", "index": 1, "count": 8}],
                                 "expected": {"r": 9, "a": 5}}))
        rc, d = run_json(capsys, "dpn", "compute", str(p))
        assert rc == 1 and not d["passed"]

    def test_ledger_default(self, capsys):
        rc, d = run_json(capsys, "ledger", "run")
        assert rc == 0 and d["passed"]

    def test_ledger_failure(self, capsys, tmp_path):
        p = tmp_path / "m.json"
        p.write_text(json.dumps({"entries": [dict(id="bad", surface="P2", systems=[{"class": "O(4)"}],
                                                  labeling_order=3, lattice_expr="U + A1^7", expected_order=1,
                                                  expected_r=9)]}))
        rc, d = run_json(capsys, "ledger", "run", str(p))
        assert rc == 1 and d["failures"]

    def test_missing_file(self, capsys, tmp_path):
        rc, _, err = run(capsys, "ledger", "run", str(tmp_path / "nope.json"))
        assert rc == 2 and err

    def test_census_truncated(self, capsys):
        rc, d = run_json(capsys, "census", "--max-r", "3")
        assert rc == 0 and d["expected_count"] is None and [1, 1, 1] in d["invariants"]

    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_verify_alias(self, capsys):
        rc, d = run_json(capsys, "verify-paper", "--skip-census")
        assert rc == 0 and d["passed"] and "census" not in d["sections"]


@pytest.mark.parametrize("argv", [
    ["ledger", "run"],
    ["lat", "disc", "U(2)^2 + E8"],
    ["census"],
])
def test_json_is_deterministic(capsys, argv):
    outs = []
    for _ in range(2):
        rc, d = run_json(capsys, *argv)
        assert rc == 0
        outs.append(json.dumps(strip_timing(d), sort_keys=True))
    assert outs[0] == outs[1]
