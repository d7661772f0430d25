from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from dgwb.dgalg.algebra import koszul, polynomial_algebra
from dgwb.dgalg.morphism import DgMorphism
from dgwb.io import parse_source, simplicial_from_json, simplicial_to_json, canonical_json
from dgwb.resolution import (constant_simplicial, induced_maps, naturality_failures, resolve)
from dgwb.resolution.matching import latching_object, matching_object, skeleton
from dgwb.resolution.simplicial import (codegeneracy, coface, compose, epi_mono, injections, is_identity,
                                        parse_subset_label, proper_subsets, subset_label, surjections)
from dgwb.resolution.verify import verify_special

from conftest import twin_koszul


# -- simplex category -------------------------------------------------------------------

def test_surjection_counts():
    for n in range(5):
        for p in range(n + 1):
            assert len(surjections(n, p)) == comb(n, p)


def test_cosimplicial_identities_on_maps():
    for n in range(1, 5):
        for j in range(n + 1):
            for i in range(j):
                assert compose(coface(n + 1, j), coface(n, i)) == compose(coface(n + 1, i), coface(n, j - 1))


maps = st.integers(0, 4).flatmap(
    lambda n: st.integers(0, 4).flatmap(
        lambda m: st.lists(st.integers(0, n), min_size=m + 1, max_size=m + 1).map(lambda v: tuple(sorted(v)))))


@settings(max_examples=60, deadline=None)
@given(maps)
def test_epi_mono_factorization(alpha):
    eps, mu = epi_mono(alpha)
    assert compose(mu, eps) == alpha
    assert set(eps) == set(range(len(mu)))
    assert list(mu) == sorted(set(mu))


def test_subset_labels():
    assert subset_label({2, 0}) == "{0,2}"
    assert parse_subset_label("{0,2}") == frozenset({0, 2})
    assert proper_subsets(1) == [frozenset({0}), frozenset({1})]
    assert len(proper_subsets(2)) == 6


def test_degeneracy_and_identity_helpers():
    assert codegeneracy(1, 0) == (0, 0, 1)
    assert is_identity((0, 1, 2))
    assert injections(0, 1) == [(0,), (1,)]


# -- construction ---------------------------------------------------------------------

def test_polynomial_ring_gives_constant_object():
    R = resolve(polynomial_algebra("x"), 3)
    assert all(L.same_structure(R.levels[0]) for L in R.levels)
    assert all(f.is_identity_on_names() for row in R.simplicial.faces[1:] for f in row)


def test_level_zero_is_input(twin):
    for N in (0, 1, 2):
        assert resolve(twin, N).levels[0].same_structure(twin)
    assert len(resolve(twin, 0).levels) == 1


def test_koszul_level_one_block_pattern(kx):
    R = resolve(kx, 1)
    A1 = R.levels[1]
    table = R.generator_table()[1]
    assert table["new"] == {"0": 2, "-1": 2}
    new_e = sorted(g.name for g in R.new[1] if g.kind == "E")
    new_f = sorted(g.name for g in R.new[1] if g.kind == "F")
    for e, f in zip(new_e, new_f):
        assert A1.differential(e) == A1.gen(f)
    d0, d1 = R.simplicial.faces[1]
    e0, e1 = new_e
    f0, f1 = new_f
    assert [d0.images[s].to_string() for s in (e0, e1, f0, f1)] == ["0", "e", "0", "x"]
    assert [d1.images[s].to_string() for s in (e0, e1, f0, f1)] == ["e", "0", "x", "0"]


@pytest.mark.parametrize("name,N", [("kx", 2), ("twin", 2), ("qx", 3)])
def test_identities_and_dg_compatibility(name, N, request):
    from dgwb.resolution.simplicial import check_dg_compatibility
    R = resolve(request.getfixturevalue(name), N)
    assert R.simplicial.check_identities() == []
    assert check_dg_compatibility(R.simplicial) == []
    assert R.block_rule_failures() == []


def test_rank_recursion_up_to_three(kx, twin):
    for A, depth in ((kx, 2), (twin, 1)):
        R = resolve(A, 3, depth)
        for row in R.rank_recursion():
            n, k = row["level"], row["degree"]
            predicted = sum(comb(n + 1, j + 1) * R.top_ranks()[(j, k)] for j in range(n))
            assert row["actual"] == predicted == row["expected"]


def test_koszul_top_ranks(kx):
    R = resolve(kx, 2)
    ranks = R.top_ranks()
    assert ranks[(0, -1)] == 1 and ranks[(1, -1)] == 1


# -- verification --------------------------------------------------------------------------

def test_verify_special_koszul(kx, sample_points):
    rep = verify_special(resolve(kx, 2).simplicial, sample_points, 3)
    assert rep.passed
    assert len(rep.zero_fibers) == 4  # every sample but x = 0


def test_verify_special_twin_first_level(twin, sample_points):
    assert verify_special(resolve(twin, 1).simplicial, sample_points, 3).passed


def test_constant_object_is_not_special(kx, sample_points):
    rep = verify_special(constant_simplicial(kx, 2), sample_points[:1], 3)
    assert not rep.passed
    assert rep.levels[1].surjectivity and rep.levels[1].structural == []


def test_corrupted_face_is_reported(kx, sample_points):
    R = resolve(kx, 1)
    e1 = sorted(g.name for g in R.new[1] if g.kind == "E")[1]
    bad = R.simplicial.mutated(1, 1, e1, "e")
    rep = verify_special(bad, sample_points[:1], 3)
    assert not rep.passed
    assert rep.levels[1].simplicial


def test_threads_do_not_change_report(kx, sample_points):
    S = resolve(kx, 2).simplicial
    a = verify_special(S, sample_points[:2], 2, threads=1).to_dict()
    b = verify_special(S, sample_points[:2], 2, threads=3).to_dict()
    assert canonical_json(a) == canonical_json(b)


# -- functoriality --------------------------------------------------------------------------

@pytest.mark.parametrize("images,src,tgt", [
    ({"x": "x"}, "qx", "twin"),
    ({"x": "x", "e": "e1"}, "kx", "twin"),
    ({"x": "x", "e1": "e", "e2": "e"}, "twin", "kx"),
    ({"x": "x^2"}, "qx", "qx"),
])
def test_naturality(images, src, tgt, request):
    A, B = request.getfixturevalue(src), request.getfixturevalue(tgt)
    phi = DgMorphism(A, B, images)
    RA, RB = resolve(A, 2), resolve(B, 2)
    maps = induced_maps(phi, RA, RB)
    assert naturality_failures(maps, RA, RB) == []
    assert maps[0].equals(phi)


# -- matching, latching, skeleta ------------------------------------------------------------

def test_latching_level_one(kx):
    L = latching_object(resolve(kx, 1).simplicial, 1)
    assert L.algebra.same_structure(kx)


def test_latching_of_constant_object(kx):
    S = constant_simplicial(kx, 2)
    for n in (1, 2):
        assert latching_object(S, n).algebra.same_structure(kx)


def test_skeleton_dimensions_for_constant_polynomial_ring(qx):
    S = constant_simplicial(qx, 2)
    pt = {"x": Fraction(3)}
    assert skeleton(S, 2, 1).fiber_dimension(0, pt) == 1
    assert skeleton(S, 2, 0).fiber_dimension(0, pt) == 3
    assert skeleton(S, 2, 1).faces == matching_object(S, 2).faces


def test_matching_of_constant_koszul(kx):
    M = matching_object(constant_simplicial(kx, 2), 2)
    pt = {"x": Fraction(0)}
    assert [M.fiber_dimension(k, pt) for k in (0, -1, -2)] == [1, 1, 0]
    assert M.universal_failures() == []


def test_matching_range_checked(kx):
    S = resolve(kx, 1).simplicial
    with pytest.raises(ValueError):
        matching_object(S, 2)


# -- serialization --------------------------------------------------------------------------

def test_simplicial_json_roundtrip(kx):
    S = resolve(kx, 2).simplicial
    text = canonical_json(simplicial_to_json(S))
    data, src = parse_source(text)
    T = simplicial_from_json(data, src)
    assert canonical_json(simplicial_to_json(T)) == text
    assert T.check_identities() == []
    assert T.decomposition == S.decomposition
