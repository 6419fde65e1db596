"""Factor engine: atom windows, factorization enumeration against the
brute-force oracle, length sets, atomicity witnesses, and probes."""

import random
from fractions import Fraction

import pytest

from oracles import brute_force_factorizations, minimal_numerical_monoids
from posmon.classify import classify_conductive
from posmon.elements import Z, Z2, Z2_SECOND, lexvec, rational, zero
from posmon.factor import (
    atoms,
    factorizations,
    is_atomic_element,
    length_function_check,
    length_set,
    probe_property,
)
from posmon.monoids import (
    Conductive,
    FIRST_POSITIVE,
    FULL_CONE,
    GeometricPuiseux,
    LexCone,
    NotAMember,
    PrimeReciprocal,
    UnsupportedFamily,
    contains,
    numerical,
    quasi_not_almost_instance,
)
from posmon.primes import first_primes


class TestAtoms:
    def test_conductive_interval(self):
        a = atoms(Conductive(lexvec(Z, 3)))
        assert [x.value for x in a.atoms] == [(3,), (4,), (5,)]
        assert a.complete

    def test_numerical_atoms(self):
        a = atoms(numerical(4, 6, 7))
        assert [x.value for x in a.atoms] == [4, 6, 7]
        assert a.complete

    def test_numerical_redundant_generator(self):
        a = atoms(numerical(3, 5, 8))
        assert [x.value for x in a.atoms] == [3, 5]

    def test_cone_atoms_flagged_incomplete(self):
        a = atoms(LexCone(Z2, FIRST_POSITIVE), depth=5)
        assert [x.value for x in a.atoms] == [(1, n) for n in range(-5, 6)]
        assert not a.complete

    def test_full_cone_single_atom(self):
        a = atoms(LexCone(Z2, FULL_CONE), depth=5)
        assert [x.value for x in a.atoms] == [(0, 1)]
        assert a.complete

    def test_second_priority_cone_atom(self):
        a = atoms(LexCone(Z2_SECOND, FULL_CONE), depth=5)
        assert [x.value for x in a.atoms] == [(1, 0)]
        assert a.complete

    def test_geometric_atoms(self):
        q = Fraction(2, 3)
        a = atoms(GeometricPuiseux(q), depth=6)
        assert [x.value for x in a.atoms] == sorted(q**i for i in range(7))
        assert not a.complete

    def test_prime_reciprocal_atoms(self):
        a = atoms(PrimeReciprocal(), depth=6)
        assert [x.value for x in a.atoms] == sorted(
            Fraction(1, p) for p in first_primes(6)
        )

    def test_conductive_infinite_interval_window(self):
        a = atoms(Conductive(lexvec(Z2, 1, 0)), depth=4)
        assert not a.complete
        for x in a.atoms:
            assert lexvec(Z2, 1, 0) <= x < lexvec(Z2, 2, 0)
        assert lexvec(Z2, 1, 2).value in [x.value for x in a.atoms]
        assert lexvec(Z2, 2, -3).value in [x.value for x in a.atoms]

    def test_conductive_finite_interval_in_upper_class(self):
        a = atoms(Conductive(lexvec(Z2, 0, 3)), depth=4)
        assert [x.value for x in a.atoms] == [(0, 3), (0, 4), (0, 5)]
        assert a.complete

    def test_quasi_atoms_are_triadic(self):
        a = atoms(quasi_not_almost_instance(), depth=4)
        vals = [x.value for x in a.atoms]
        assert Fraction(4, 3) in vals
        for v in vals:
            den = v.denominator
            while den % 3 == 0:
                den //= 3
            assert den == 1
            assert Fraction(4, 3) <= v < Fraction(7, 3)


class TestFactorizations:
    def test_two_generator_example(self):
        s = factorizations(numerical(3, 5), rational(15))
        assert s.complete and not s.truncated
        reps = {tuple((a.value, c) for a, c in f.pairs) for f in s.factorizations}
        assert reps == {((3, 5),), ((5, 3),)}
        assert sorted(f.length for f in s.factorizations) == [3, 5]

    def test_atom_factors_once(self):
        s = factorizations(Conductive(lexvec(Z, 3)), lexvec(Z, 3))
        assert len(s.factorizations) == 1
        assert s.factorizations[0].length == 1
        assert s.complete

    def test_cone_pairs(self):
        s = factorizations(LexCone(Z2, FIRST_POSITIVE), lexvec(Z2, 2, 0), depth=5)
        assert len(s.factorizations) == 6
        assert not s.complete
        for f in s.factorizations:
            assert f.length == 2

    def test_not_a_member(self):
        with pytest.raises(NotAMember):
            factorizations(numerical(3, 5), rational(7))

    def test_antimatter_note(self):
        from posmon.elements import Q2, GroupElement

        m = LexCone(Q2, FIRST_POSITIVE)
        s = factorizations(m, GroupElement(Q2, (1, 0)), depth=3)
        assert s.factorizations == ()
        assert "NotAtomicFamily" in s.note

    def test_truncation_flag(self):
        s = factorizations(
            LexCone(Z2, FIRST_POSITIVE), lexvec(Z2, 2, 0), depth=20, max_count=5
        )
        assert s.truncated and len(s.factorizations) == 5 and not s.complete

    def test_soundness_every_emitted_sums_exactly(self):
        for m, b in [
            (numerical(3, 5, 7), rational(41)),
            (Conductive(lexvec(Z, 4)), lexvec(Z, 30)),
            (GeometricPuiseux(Fraction(2, 3)), rational(3)),
            (PrimeReciprocal(), rational(Fraction(3, 2))),
        ]:
            search = factorizations(m, b, depth=10)
            assert search.factorizations
            for f in search.factorizations:
                total = zero(b.group)
                for atom, mult in f.pairs:
                    total = total + atom.scale(mult)
                assert total == b

    def test_deterministic_order(self):
        a = factorizations(numerical(3, 5, 7), rational(60))
        b = factorizations(numerical(3, 5, 7), rational(60))
        assert a.factorizations == b.factorizations

    def test_zero_has_empty_factorization(self):
        s = factorizations(numerical(3, 5), rational(0))
        assert len(s.factorizations) == 1 and s.factorizations[0].length == 0


class TestOracleAgreement:
    def test_small_monoids_match_nested_loops(self):
        rng = random.Random(13)
        monoids = minimal_numerical_monoids(max_gens=3, max_gen=12)
        for gens in rng.sample(monoids, 25):
            m = numerical(*gens)
            for b in rng.sample(range(1, 61), 12):
                expected = brute_force_factorizations(gens, b)
                if not expected:
                    assert contains(m, rational(b)).is_out
                    continue
                search = factorizations(m, rational(b))
                assert search.complete
                got = set()
                for f in search.factorizations:
                    mult = {a.value: c for a, c in f.pairs}
                    got.add(tuple(mult.get(g, 0) for g in gens))
                assert got == expected, (gens, b)

    def test_geometric_factorizations_of_chain_head(self):
        # derived by enumeration: 3 = 3*1 = 1 + 3*(2/3) = ... over window atoms
        q = Fraction(2, 3)
        s = factorizations(GeometricPuiseux(q), rational(3), depth=8)
        lengths = s.lengths()
        assert 3 in lengths  # 3 = 1+1+1
        for f in s.factorizations:
            assert sum(c * a.value for a, c in f.pairs) == 3


class TestLengthSets:
    def test_prime_window(self):
        ls = length_set(PrimeReciprocal(), rational(1), depth=6)
        assert list(ls.lengths) == [2, 3, 5, 7, 11, 13]
        assert not ls.complete

    def test_atom_length_one(self):
        for m, a in [
            (numerical(3, 5), rational(3)),
            (Conductive(lexvec(Z, 4)), lexvec(Z, 5)),
        ]:
            ls = length_set(m, a)
            assert list(ls.lengths) == [1]

    def test_lengths_subset_under_truncation(self):
        m = numerical(2, 3)
        full = length_set(m, rational(60))
        cut = length_set(m, rational(60), max_count=3)
        assert set(cut.lengths) <= set(full.lengths)
        assert not cut.complete and full.complete


class TestIsAtomicElement:
    def test_quasi_four(self):
        w = is_atomic_element(quasi_not_almost_instance(), rational(4), depth=4)
        assert w.status == "yes"
        assert {(a.value, c) for a, c in w.factorization.pairs} == {(Fraction(4, 3), 3)}

    def test_unreachable_dominant(self):
        w = is_atomic_element(LexCone(Z2, FULL_CONE), lexvec(Z2, 1, 0), depth=6)
        assert w.status == "no"

    def test_zero(self):
        w = is_atomic_element(numerical(3, 5), rational(0))
        assert w.status == "yes" and w.factorization.length == 0

    def test_unknown_when_window_open(self):
        m = GeometricPuiseux(Fraction(2, 3))
        # 1/3 is not a member at all -> raises
        with pytest.raises(NotAMember):
            is_atomic_element(m, rational(Fraction(1, 3)))


class TestProbes:
    def test_hfm_refuted_at_nine(self):
        r = probe_property(Conductive(lexvec(Z, 3)), "HFM", 60)
        assert r.refuted
        assert r.witness["element"].value == (9,)
        f1, f2 = r.witness["factorizations"]
        assert {f1.length, f2.length} == {2, 3}

    def test_lfm_consistent_two_three(self):
        r = probe_property(Conductive(lexvec(Z, 2)), "LFM", 60)
        assert r.consistent

    def test_ufm_consistent_free(self):
        r = probe_property(Conductive(lexvec(Z, 1)), "UFM", 60)
        assert r.consistent

    def test_atm_refuted_in_upper_class(self):
        r = probe_property(Conductive(lexvec(Z2, 0, 1)), "ATM", (2, 6))
        assert r.refuted
        assert r.witness["reason"] == "no factorization into atoms"

    def test_unsupported_family(self):
        with pytest.raises(UnsupportedFamily):
            probe_property(GeometricPuiseux(Fraction(2, 3)), "ATM", 5)

    def test_unknown_property_rejected(self):
        with pytest.raises(ValueError):
            probe_property(numerical(2, 3), "ACCP", 10)

    @pytest.mark.parametrize("a", range(1, 9))
    def test_probe_matches_conductive_classifier(self, a):
        report = classify_conductive(lexvec(Z, a))
        for prop in ("ATM", "BFM", "FFM", "HFM", "LFM", "UFM"):
            r = probe_property(Conductive(lexvec(Z, a)), prop, 30 * a)
            expected = report.status(prop)
            if expected == "Proved":
                assert r.consistent, (a, prop)
            elif expected == "Refuted" and prop in ("HFM", "LFM", "UFM"):
                assert r.refuted, (a, prop)


class TestLengthFunction:
    def test_first_coordinate_on_conductive_plane(self):
        m = Conductive(lexvec(Z2, 1, 0))
        assert length_function_check(m, lambda v: v.value[0], samples=1000, bound=(3, 8))

    def test_zero_map_rejected(self):
        m = numerical(3, 5)
        assert not length_function_check(m, lambda v: 0)

    def test_floor_by_five_rejected(self):
        m = numerical(3, 5)
        assert not length_function_check(m, lambda v: int(v.value) // 5)
