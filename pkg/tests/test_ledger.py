import json

import pytest
from hypothesis import given, strategies as st

from latlab import ledger
from latlab.errors import ConfigError


class TestDimensions:
    def test_plane_sextic(self):
        assert ledger.linear_system_dim("P2", "O(6)") == 27

    def test_quadric(self):
        # oracle: bidegree (3,3) monomials
        mons = [(i, j) for i in range(4) for j in range(4)]
        assert ledger.linear_system_dim("Quadric", "O(3,3)") == len(mons) - 1 == 15

    def test_f1(self):
        assert ledger.linear_system_dim("F1", "L(3,2)") == 17

    def test_point(self):
        assert ledger.linear_system_dim("F3", "pt") == 2

    @given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6))
    def test_hirzebruch_pushforward(self, n, a, b):
        # oracle: h0(L_{a,b}) = sum_{i<=a} h0(O_P1(b + i n))
        assert ledger.linear_system_dim(f"F{n}", f"L({a},{b})") == sum(b + i * n + 1 for i in range(a + 1)) - 1

    @given(st.integers(0, 12))
    def test_plane_monomials(self, d):
        assert ledger.linear_system_dim("P2", f"O({d})") == \
            sum(1 for i in range(d + 1) for j in range(d + 1 - i)) - 1

    def test_negative(self):
        with pytest.raises(ConfigError):
            ledger.linear_system_dim("P2", "O(-1)")

    def test_bad_class(self):
        with pytest.raises(ConfigError):
            ledger.linear_system_dim("P2", "L(1,2)")
        with pytest.raises(ConfigError):
            ledger.linear_system_dim("K3", "O(1)")


class TestGenus:
    @given(st.integers(0, 6), st.integers(0, 6))
    def test_trigonal(self, n, b):
        want = 3 * n + 2 * b - 2
        if want < 0:
            with pytest.raises(ConfigError):
                ledger.curve_genus(f"F{n}", f"L(3,{b})")
        else:
            assert ledger.curve_genus(f"F{n}", f"L(3,{b})") == want

    def test_examples(self):
        assert ledger.curve_genus("F1", "L(3,2)") == 5
        assert ledger.curve_genus("P2", "O(6)") == 10
        assert ledger.curve_genus("F4", "L(2,0)") == 3
        assert ledger.curve_genus("Quadric", "O(3,3)") == 4

    @given(st.integers(1, 10))
    def test_plane_formula(self, d):
        assert ledger.curve_genus("P2", f"O({d})") == (d - 1) * (d - 2) // 2

    def test_negative(self):
        with pytest.raises(ConfigError):
            ledger.curve_genus("F2", "L(0,2)")


class TestAut:
    def test_values(self):
        assert ledger.aut_dim("P2") == 8
        assert ledger.aut_dim("Quadric") == 6
        assert ledger.aut_dim("F2") == 3 + (1 + 3)
        assert ledger.aut_dim("F1") == 6


def _entry(**kw):
    base = dict(id="t", surface="P2", systems=(("O(4)", 0), ("O(2)", 0)), labeling_order=40320, aut_index=1,
                lattice_expr="U + A1^7", expected_order=40320, expected_degree=1, expected_r=9,
                expected_invariant=(9, 7, 1))
    base.update(kw)
    return ledger.LedgerEntry(**base)


class TestManifest:
    def test_named_dimensions(self):
        entries = {e.id: e for e in ledger.load_manifest()}
        assert ledger.moduli_dim(entries["quadric-8-6-1"]) == 12
        assert ledger.moduli_dim(entries["f1-9-3-1"]) == 11
        assert ledger.moduli_dim(entries["f2-10-4-0"]) == 10
        assert ledger.moduli_dim(entries["f3-6-2-0"]) == 14

    def test_bundled_passes(self):
        report = ledger.run_manifest(ledger.load_manifest())
        assert report["passed"], [e for e in report["entries"] if not e["passed"]]
        assert report["count"] >= 12
        assert [e["id"] for e in report["entries"]] == sorted(e["id"] for e in report["entries"])
        for e in report["entries"]:
            assert e["moduli_dim"] == e["expected_dim"]

    def test_birational_and_nonbirational(self):
        entries = ledger.load_manifest()
        results = {r["id"]: r for r in ledger.run_manifest(entries)["entries"]}
        for e in entries:
            if e.birational:
                assert results[e.id]["degree"] == "1"
            else:
                assert results[e.id]["degree"] == str(e.expected_degree) != "1"

    def test_detects_wrong_order(self):
        r = ledger.check_entry(_entry(expected_order=40319))
        assert not r["passed"] and any("order" in f for f in r["failures"])

    def test_detects_fractional_degree(self):
        r = ledger.check_entry(_entry(labeling_order=7 * 40320 // 7 * 3))
        assert not r["passed"] and any("not an integer" in f or "degree" in f for f in r["failures"])

    def test_detects_dimension(self):
        r = ledger.check_entry(_entry(systems=(("O(4)", 1), ("O(2)", 0))))
        assert not r["passed"] and any("dimension" in f for f in r["failures"])

    def test_trivial_entry(self):
        r = ledger.check_entry(_entry(systems=(("O(6)", 0),) + (("pt", 0),) * 4, labeling_order=1,
                                      lattice_expr="U + E8 + E8", expected_order=1, expected_r=18,
                                      expected_invariant=(18, 0, 0)))
        assert r["degree"] == "1" and r["order"] == 1

    def test_validation(self):
        with pytest.raises(ConfigError):
            _entry(labeling_order=0)
        with pytest.raises(ConfigError):
            _entry(expected_degree=0)
        with pytest.raises(ConfigError):
            _entry(lattice_role="middle")

    def test_duplicate_ids(self, tmp_path):
        row = dict(id="x", surface="P2", systems=[{"class": "O(1)"}], labeling_order=1,
                   lattice_expr="U", expected_order=1, expected_r=2)
        p = tmp_path / "m.json"
        p.write_text(json.dumps({"entries": [row, row]}))
        with pytest.raises(ConfigError):
            ledger.load_manifest(p)

    def test_parallel_is_deterministic(self, monkeypatch):
        entries = ledger.load_manifest()
        serial = ledger.run_manifest(entries)
        monkeypatch.setenv("LATLAB_THREADS", "4")
        par = ledger.run_manifest(entries)
        assert serial["entries"] == par["entries"]


@pytest.fixture(scope="module")
def census():
    return ledger.nikulin_census()


class TestCensus:
    def test_count(self, census):
        assert census.count == 75

    def test_named_members(self, census):
        members = set(census.invariants)
        assert [t for t in ledger.named_triples() if t not in members] == []

    def test_examples(self, census):
        members = set(census.invariants)
        assert (10, 10, 0) in members and (1, 1, 1) in members
        assert (2, 1, 0) not in members
        assert all((r - a) % 2 == 0 for r, a, _ in members)

    def test_certificates_verified(self, census):
        assert census.verification_failures == []
        assert census.certificates[(1, 1, 1)][0] == "<2>"
        assert census.rejected_blocks == ["D4(2)"]

    def test_report(self, census):
        rep = ledger.census_report(census)
        assert rep["passed"] and rep["count"] == 75

    def test_smaller_catalog_reports_difference(self):
        small = ledger.nikulin_census(blocks=("U", "U(2)", "<2>", "A1", "D4", "E8"), verify=False)
        rep = ledger.census_report(small)
        assert not rep["passed"] and small.count < 75
        assert rep["named_missing"]


def test_weyl_identities():
    results = ledger.weyl_identities()
    assert all(r["passed"] for r in results), results


class TestCriterion:
    def test_count(self):
        assert len(ledger.criterion_triples()) == 75

    def test_agrees_with_search(self, census):
        assert set(ledger.criterion_triples()) == set(census.invariants)

    def test_known_lattices(self):
        # each (signature, a, delta) realised by an explicit even lattice
        from latlab import expr, lattices
        for text in ["U", "U(2)", "A1", "D4", "E7", "E8", "U + A1", "<2>", "U(2) + D4", "I(1,1)(2)", "D6 + A1",
                     "U + E8(2)", "A1^3 + <2>"]:
            L = expr.lattice(text)
            r, a, d = lattices.main_invariant(L).triple()
            p, n = L.signature
            assert ledger.two_elementary_exists(p, n, a, d), text

    def test_rejections(self):
        assert not ledger.two_elementary_exists(1, 1, 1, 0)   # (r - a) odd
        assert not ledger.two_elementary_exists(0, 8, 0, 1)   # unimodular is even type
        assert not ledger.two_elementary_exists(0, 4, 0, 0)   # signature 4 mod 8
        assert ledger.two_elementary_exists(1, 2, 1, 1)       # U + A1
        assert not ledger.two_elementary_exists(3, 0, 1, 1)   # a = 1 needs signature +-1 mod 8

    def test_truncated_report(self):
        small = ledger.nikulin_census(max_r=6, verify=False)
        rep = ledger.census_report(small, max_r=6)
        assert rep["passed"] and rep["symmetric_difference"] == {"search_only": [], "criterion_only": []}

    def test_difference_is_emitted(self):
        small = ledger.nikulin_census(blocks=("U", "U(2)", "<2>", "A1", "D4", "E8"), verify=False)
        rep = ledger.census_report(small)
        missing = set(map(tuple, rep["symmetric_difference"]["criterion_only"]))
        assert missing == set(ledger.criterion_triples()) - set(small.invariants) and missing
