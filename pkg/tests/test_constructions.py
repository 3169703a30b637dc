import json

import pytest

from latlab import constructions, lattices
from latlab.constructions import Construction, _combination
from latlab.errors import ConfigError, LatticeError
from fractions import Fraction as F

NAMES = {"u": (F(1), F(0)), "v": (F(0), F(1))}


class TestCombination:
    def test_basic(self):
        assert _combination("1/2*(3*u - v)", NAMES, 2) == (F(3, 2), F(-1, 2))
        assert _combination("−u + v", NAMES, 2) == (F(-1), F(1))
        assert _combination("(u + v)/2", NAMES, 2) == (F(1, 2), F(1, 2))

    @pytest.mark.parametrize("text", ["u +", "w", "u * v", "u + 1", "u / 0", "u / v", "2", "u ** 2",
                                      "f(u)", "1.5*u"])
    def test_rejects(self, text):
        with pytest.raises(ConfigError):
            _combination(text, NAMES, 2)


class TestFixtures:
    def test_all_pass(self):
        cs = constructions.builtin_constructions()
        assert len(cs) == 4
        for c in cs:
            res = constructions.check(c)
            assert res["invariant_ok"] and res["isometric"], res

    def test_index(self):
        c = constructions.builtin("quadric-8-6-1")
        base = c.base_lattice()
        L = c.build()
        assert base.det == L.det * 4
        assert lattices.main_invariant(L).triple() == (8, 6, 1)

    def test_unknown(self):
        with pytest.raises(LatticeError):
            constructions.builtin("nope")

    def test_label_count(self):
        c = Construction.from_dict({"id": "x", "base": "U + A1", "basis": ["a", "b"]})
        with pytest.raises(ConfigError):
            c.vectors()

    def test_repeated_label(self):
        c = Construction.from_dict({"id": "x", "base": "U", "basis": ["a", "a"]})
        with pytest.raises(ConfigError):
            c.vectors()

    def test_nonintegral_define(self):
        c = Construction.from_dict({"id": "x", "base": "U", "basis": ["a", "b"], "define": [["c", "a/2"]]})
        with pytest.raises(ConfigError):
            c.vectors()

    def test_odd_glue_rejected(self):
        c = Construction.from_dict({"id": "x", "base": "A1^2", "basis": ["a", "b"],
                                    "glue": [["f", "1/2*a"]]})
        with pytest.raises(LatticeError):
            c.build()

    def test_malformed(self, tmp_path):
        with pytest.raises(ConfigError):
            Construction.from_dict({"id": "x"})
        p = tmp_path / "c.json"
        p.write_text("[")
        with pytest.raises(ConfigError):
            constructions.load_construction(p)
        p.write_text(json.dumps({"id": "y", "base": "A1^4", "basis": list("abcd"),
                                 "glue": [["f", "1/2*(a+b+c+d)"]], "isometric_to": "D4"}))
        res = constructions.check(constructions.load_construction(p))
        assert res["isometric"]
