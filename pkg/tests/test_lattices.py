import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from latlab import discforms, expr, linalg
from latlab import lattices as lat
from latlab.constructions import builtin
from latlab.errors import (DegenerateLatticeError, LatticeError, NotEvenError, NotTwoElementaryError,
                           OutOfScopeError)

E = expr.lattice

CATALOG = ["U", "U(2)", "<2>", "<-2>", "A1", "A2", "A3", "D4", "D5", "D6", "E6", "E7", "E8", "E8(2)",
           "I(1,1)(2)", "U + A1^6", "U(2) + E7", "U + D4^2", "<2> + A1 + D4", "U^2 + E8(2)",
           "U(2)^2 + E8", "U + E8 + D4", "D4(2)", "A2 + <6>"]


class TestNamed:
    def test_u2(self):
        assert lat.hyperbolic(2).matrix() == [[0, 2], [2, 0]]

    def test_d4_roots(self):
        D4 = lat.root_d(4)
        assert D4.det == 4 and D4.signature == (0, 4)
        # oracle: D4 roots are the 24 vectors +-e_i +- e_j of Z^4
        assert len(lat.short_vectors(D4, 2)) * 2 == 24
        assert len([v for v in itertools.product((-1, 0, 1), repeat=4) if sum(x * x for x in v) == 2]) == 24

    def test_e8(self):
        E8 = lat.root_e(8)
        assert E8.det == 1 and E8.is_even and E8.signature == (0, 8)

    def test_make_named(self):
        assert lat.make_named("D", 5) == lat.root_d(5)
        assert lat.make_named("U", 2) == lat.hyperbolic(2)
        assert lat.make_named("I", 2, 3).signature == (2, 3)
        with pytest.raises(LatticeError):
            lat.make_named("D", 1)
        with pytest.raises(LatticeError):
            lat.make_named("Z", 3)
        with pytest.raises(LatticeError):
            lat.make_named("A", 0)

    def test_conventions(self):
        assert lat.root_a(1).matrix() == [[-2]]
        assert lat.rank_one(2).matrix() == [[2]]
        assert lat.odd_unimodular(1, 2).matrix() == [[1, 0, 0], [0, -1, 0], [0, 0, -1]]


class TestConstructions:
    def test_direct_sum(self):
        L = E("U + A1")
        assert L.rank == 3 and abs(L.det) == 2

    def test_u_a1_6(self):
        q = E("U + A1^6").discriminant_form
        assert discforms.is_two_elementary(q) and discforms.length(q) == 6

    def test_2_a1_d4(self):
        assert lat.main_invariant(E("<2> + A1 + D4")).triple() == (6, 4, 1)

    def test_rescale(self):
        L = E("E8(2)")
        assert abs(L.det) == 2 ** 8
        assert all(v % 4 == 0 for v in (L.norm(x) for x in itertools.product((-1, 0, 1), repeat=8)))
        assert lat.rescale(E("E7"), 1) == E("E7")
        assert lat.rescale(E("A1"), -1) == lat.rank_one(2)

    def test_dual_rescale_identities(self):
        for a, b in [("U^2 + E8(2)", "U(2)^2 + E8"), ("U(2)^2 + D4", "U^2 + D4")]:
            L = lat.dual_rescale(E(a), 2)
            assert lat.two_elementary_isometric(L, E(b))
        odd = lat.dual_rescale(E("U + I(1,1)(2) + E8(2)"), 2)
        assert not odd.is_even
        assert lat.odd_isometric(odd, E("U(2) + I(1,1) + E8"))

    def test_dual_rescale_not_integral(self):
        with pytest.raises(LatticeError):
            lat.dual_rescale(E("A2"), 2)

    @pytest.mark.parametrize("text", ["U", "U(2)", "A1", "D4", "E7", "U + E8(2)", "U(2) + D4^2", "<2> + A1^3",
                                      "U + D6 + A1", "I(1,1)(2) + A1"])
    def test_dual_rescale_involution(self, text):
        L = E(text)
        back = lat.dual_rescale(lat.dual_rescale(L, 2), 2)
        if L.is_definite:
            assert lat.definite_isometric(back, L)
        else:
            assert lat.two_elementary_isometric(back, L)

    def test_is_even(self):
        assert E("U").is_even and not E("I(2,7)").is_even and E("E8(2)").is_even


class TestEvenPart:
    @pytest.mark.parametrize("n", range(4, 11))
    def test_i0n(self, n):
        L0, x = lat.even_part(lat.odd_unimodular(0, n))
        assert abs(L0.det) == 4
        assert lat.root_type(L0) == [f"D{n}"]
        if n <= 8:
            assert lat.definite_isometric(L0, lat.root_d(n))

    def test_i28(self):
        L0, x = lat.even_part(lat.odd_unimodular(2, 8))
        assert lat.indefinite_isometric(L0, E("U^2 + D6"))

    def test_i27(self):
        L0, x = lat.even_part(lat.odd_unimodular(2, 7))
        assert lat.indefinite_isometric(L0, E("U^2 + D5"))
        assert L0.discriminant_form.orders == (4,)

    def test_rejects_even(self):
        with pytest.raises(LatticeError):
            lat.even_part(E("U"))

    @given(st.integers(0, 4), st.integers(0, 6), st.integers(0, 3))
    def test_index_two_and_glue_norm(self, m, n, extra):
        if m + n == 0:
            return
        parts = [f"I({m},{n})"] + ["A1"] * extra
        L = E(" + ".join(parts))
        L0, x = lat.even_part(L)
        assert L0.is_even
        assert abs(L0.det) == 4 * abs(L.det)
        q = L0.discriminant_form
        c = q.class_of(x)
        assert q.order_of(c) == 2
        assert q.q(c) % 2 == 1


class TestOverlattice:
    def test_example_one(self):
        L = builtin("quadric-8-6-1").build()
        assert lat.main_invariant(L).triple() == (8, 6, 1)

    def test_example_two(self):
        L = builtin("hirzebruch1-9-3-1").build()
        assert lat.main_invariant(L).triple() == (9, 3, 1)
        assert lat.two_elementary_isometric(L, E("U(2) + E7"))

    def test_example_four(self):
        L = builtin("plane-14-2-0").build()
        assert lat.main_invariant(L).triple() == (14, 2, 0)
        assert lat.two_elementary_isometric(L, E("U + E8 + D4"))

    def test_not_in_dual(self):
        with pytest.raises(LatticeError):
            lat.overlattice(E("U"), [[Fraction(1, 2), 0]])

    def test_odd_rejected_when_even_required(self):
        # (e1 + e2)/2 in A1^2 has norm -1
        with pytest.raises(NotEvenError):
            lat.overlattice(E("A1^2"), [[Fraction(1, 2), Fraction(1, 2)]])

    def test_non_integral(self):
        with pytest.raises(LatticeError):
            lat.overlattice(E("A1"), [[Fraction(1, 2)]], require_even=False)

    @given(st.integers(0, 10 ** 6))
    def test_determinant_index(self, seed):
        rng = random.Random(seed)
        L = E(rng.choice(["U(2) + A1^4", "U + A1^8", "U(2)^2 + D4", "A1^8", "U(2) + E8(2)"]))
        q = L.discriminant_form
        iso = [x for x in q.elements() if x and q.q(x) == 0]
        if not iso:
            return
        x = rng.choice(iso)
        gens = discforms.generator_vectors(L)
        v = [sum(Fraction(c) * g[j] for c, g in zip(q.coords(x), gens)) for j in range(L.rank)]
        M = lat.overlattice(L, [v])
        assert abs(L.det) == abs(M.det) * 4


class TestComplementAndGlue:
    def test_heegner_complement(self):
        L = E("U^2 + D6")
        l = [0, 0, 0, 0, 1, 1, 2, 2, 2, 2]
        assert L.norm(l) == -4 and L.in_dual([Fraction(x, 2) for x in l])
        C = lat.orthogonal_complement(L, l)
        q = C.discriminant_form
        assert C.is_even and C.signature == (2, 7) and q.orders == (4,)
        assert q.q(q.generator(0)) == Fraction(3, 4)

    def test_complement_of_root(self):
        assert lat.orthogonal_complement(E("A1^2"), [1, 0]).matrix() == [[-2]]

    def test_complement_in_u(self):
        C = lat.orthogonal_complement(E("U"), [1, 1])
        assert C.matrix() == [[-2]]
        # oracle: solutions of (x, u+v) = x1 + x2 = 0 are multiples of (1,-1)
        assert [v for v in itertools.product(range(-3, 4), repeat=2) if v[0] + v[1] == 0 and v[0] == 1] == [(1, -1)]

    def test_complement_errors(self):
        L = E("U + A1")
        with pytest.raises(LatticeError):
            lat.orthogonal_complement(L, [0, 0, 0])
        with pytest.raises(LatticeError):
            lat.orthogonal_complement(L, [2, 0, 2])
        with pytest.raises(LatticeError):
            lat.orthogonal_complement(L, [1, 0, 0])

    def test_glue_heegner(self):
        L = E("U^2 + D6")
        gd = lat.glue_data(L, [[0, 0, 0, 0, 1, 1, 2, 2, 2, 2]])
        assert gd.index == 2

    def test_glue_direct_summand(self):
        L = E("U + A1^2")
        assert lat.glue_data(L, [[0, 0, 1, 0]]).index == 1

    def test_glue_example_one(self):
        L = builtin("quadric-8-6-1").build()
        inv = linalg.inverse([list(r) for r in L.embedding])
        rows = [[int(x) for x in inv[i]] for i in range(2, 8)]
        gd = lat.glue_data(L, rows)
        # complement is U(2) (det 4), so det(S) det(S^perp) = |G|^2 det(L) forces |G| = 2
        assert lat.definite_isometric(gd.sub, E("A1^6"))
        assert gd.perp.matrix() == [[0, 2], [2, 0]] or lat.two_elementary_isometric(gd.perp, E("U(2)"))
        assert abs(gd.sub.det) * abs(gd.perp.det) == gd.index ** 2 * abs(L.det)
        assert gd.index == 2

    def test_glue_not_primitive(self):
        with pytest.raises(LatticeError):
            lat.glue_data(E("U + A1"), [[2, 0, 0]])

    @settings(max_examples=50)
    @given(st.integers(0, 10 ** 6))
    def test_glue_determinant_identity(self, seed):
        rng = random.Random(seed)
        pieces = rng.sample(["U", "U(2)", "A1", "A2", "D4", "<2>", "A1^2", "<6>"], rng.randint(1, 3))
        L = E(" + ".join(pieces))
        if L.rank > 8:
            return
        k = rng.randint(1, min(3, L.rank - 1)) if L.rank > 1 else 1
        rows = [[rng.randint(-2, 2) for _ in range(L.rank)] for _ in range(k)]
        if linalg.rank(rows) < k:
            return
        perp = linalg.integer_kernel(linalg.transpose(rows))
        sat = linalg.integer_kernel(linalg.transpose(perp)) if perp else linalg.identity(L.rank)
        try:
            gd = lat.glue_data(L, sat)
        except DegenerateLatticeError:
            return
        assert abs(gd.sub.det) * abs(gd.perp.det) == gd.index ** 2 * abs(L.det)
        assert len(gd.glue_sub) == len(gd.glue_perp) == gd.index
        # the gluing is an anti-isometry
        for a, b in gd.gluing.items():
            assert (gd.sub_form.q(a) + gd.perp_form.q(b)) % 2 == 0


class TestInvariants:
    def test_u_a1_7(self):
        assert lat.main_invariant(E("U + A1^7")).triple() == (9, 7, 1)

    def test_u2_d4_2(self):
        inv = lat.main_invariant(E("U(2) + D4^2"))
        assert (inv.a, inv.delta) == (6, 0)

    def test_u_e8(self):
        inv = lat.main_invariant(E("U + E8"))
        assert inv.triple() == (10, 0, 0) and inv.g == 6 and inv.k == 5

    def test_errors(self):
        with pytest.raises(NotEvenError):
            lat.main_invariant(E("I(1,1)"))
        with pytest.raises(NotTwoElementaryError):
            lat.main_invariant(E("A2"))
        with pytest.raises(DegenerateLatticeError):
            lat.main_invariant(lat.Lattice.from_gram([[0, 0], [0, 0]]))

    def test_two_elementary_isometric(self):
        L = builtin("hirzebruch2-10-4-0").build()
        assert lat.two_elementary_isometric(L, E("U + D4^2"))
        assert not lat.two_elementary_isometric(E("U + A1^6"), E("U(2) + E7"))
        assert lat.two_elementary_isometric(E("U + A1"), E("U + A1"))
        with pytest.raises(OutOfScopeError):
            lat.two_elementary_isometric(E("D4"), E("D4"))
        with pytest.raises(NotTwoElementaryError):
            lat.two_elementary_isometric(E("U + A2"), E("U + A2"))

    def test_two_elementary_against_form_search(self):
        # route 2: discriminant form isometry search agrees on a batch of pairs
        pairs = [("U + A1^6", "U(2) + A1^4 + <-2>^2"), ("U(2) + E7", "U + A1 + D4^2"), ("U + D4^2", "U(2) + D4 + D4"),
                 ("U + E8 + D4", "U + D6 + D6"), ("U(2) + A1^2", "U + D4")]
        for a, b in pairs:
            A, B = E(a), E(b)
            if A.signature == B.signature:
                assert lat.two_elementary_isometric(A, B) == discforms.are_isometric(
                    A.discriminant_form, B.discriminant_form)

    @given(st.lists(st.sampled_from(["U", "U(2)", "A1", "<2>", "D4", "D6", "E7", "E8"]), min_size=2, max_size=3))
    def test_direct_sum_invariants(self, parts):
        L = E(" + ".join(parts))
        invs = [lat.main_invariant(E(p)) for p in parts]
        inv = lat.main_invariant(L)
        assert inv.a == sum(i.a for i in invs)
        assert inv.delta == max(i.delta for i in invs)
        assert inv.signature == tuple(map(sum, zip(*(i.signature for i in invs))))
        assert (inv.r - inv.a) % 2 == 0


class TestDefinite:
    def test_even_part_i05(self):
        assert lat.definite_isometric(lat.even_part(lat.odd_unimodular(0, 5))[0], E("D5"))

    def test_a1_pair(self):
        assert lat.definite_isometric(E("A1^2"), E("<-2> + <-2>"))

    def test_a2_vs_a1_pair(self):
        assert not lat.definite_isometric(E("A2"), E("A1^2"))

    def test_rank_bound(self):
        with pytest.raises(OutOfScopeError):
            lat.definite_isometric(E("E8 + D6"), E("E8 + D6"))

    def test_short_vector_counts(self):
        assert len(lat.short_vectors(E("E8"), 2)) * 2 == 240
        assert len(lat.short_vectors(E("D4"), 2)) * 2 == 24
        assert len(lat.short_vectors(E("A1"), 2)) * 2 == 2

    def test_e8_oracle(self):
        # independent count of roots in the coordinate model D8 + half-spin
        full = sum(1 for v in itertools.product((-1, 0, 1), repeat=8) if sum(x * x for x in v) == 2)
        half = sum(1 for v in itertools.product((1, -1), repeat=8) if v.count(-1) % 2 == 0)
        assert full + half == 240

    def test_root_types(self):
        assert lat.root_type(lat.even_part(lat.odd_unimodular(0, 6))[0]) == ["D6"]
        assert lat.root_type(E("A1^3")) == ["A1", "A1", "A1"]
        assert lat.root_type(E("E7 + A1")) == ["A1", "E7"]

    def test_short_vectors_indefinite(self):
        with pytest.raises(LatticeError):
            lat.short_vectors(E("U"), 2)

    @given(st.integers(0, 10 ** 6))
    def test_isometric_under_basis_change(self, seed):
        from conftest import random_unimodular
        rng = random.Random(seed)
        L = E(rng.choice(["D4", "A3 + A1", "E6", "D5", "A2 + A2", "E7"]))
        u = random_unimodular(L.rank, rng)
        M = lat.Lattice.from_gram(linalg.congruent(u, L.matrix()))
        assert lat.definite_isometric(L, M)


class TestHeegner:
    def test_u2_d6(self):
        L = E("U^2 + D6")
        vs = list(lat.heegner_vectors(L, -4, limit=3))
        assert vs
        for v in vs:
            assert L.norm(v) == -4 and L.in_dual([Fraction(x, 2) for x in v])
            assert linalg.vector_gcd(v) == 1

    def test_u_none(self):
        assert list(lat.heegner_vectors(E("U"), -4)) == []

    def test_a1_4(self):
        L = E("A1^4")
        vs = list(lat.heegner_vectors(L, -4, box=1))
        assert vs and all(sum(abs(x) for x in v) == 2 for v in vs)

    def test_empty_box(self):
        with pytest.raises(LatticeError):
            list(lat.heegner_vectors(E("U"), -4, box=0))

    def test_without_half_dual(self):
        L = E("U + A1")
        vs = list(lat.heegner_vectors(L, -2, half_in_dual=False, box=1))
        # oracle: all primitive vectors in the box with norm -2
        want = [v for v in itertools.product(range(-1, 2), repeat=3)
                if L.norm(v) == -2 and linalg.vector_gcd(v) == 1]
        assert sorted(vs) == sorted(want)


@pytest.mark.parametrize("text", CATALOG)
def test_det_equals_discriminant_size(text):
    L = E(text)
    assert abs(L.det) == L.discriminant_form.size
