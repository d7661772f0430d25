import random

from dgwb.dgalg.algebra import koszul, polynomial_algebra
from dgwb.mutation import (hypercover_detects, hypercover_mutations, perturb, simplicial_detects,
                           simplicial_mutations)
from dgwb.resolution import resolve
from dgwb.site import cech_hypercover


def test_perturb_keeps_degree_and_changes_image():
    S = resolve(koszul(), 1).simplicial
    f = S.faces[1][0]
    rng = random.Random(3)
    for sym in f.source.symbols():
        new = perturb(f, sym, rng)
        if new is None:
            continue
        assert new != f.images[sym]
        assert new.is_zero() or new.degree == f.source.degree_of(sym)


def test_mutations_are_seeded():
    S = resolve(koszul(), 1).simplicial
    a = [m.to_dict() for m, _ in simplicial_mutations(S, 7)]
    b = [m.to_dict() for m, _ in simplicial_mutations(S, 7)]
    assert a == b and a


def test_unmutated_objects_are_clean():
    S = resolve(koszul(), 2).simplicial
    assert not simplicial_detects(S)
    H = cech_hypercover(polynomial_algebra("x"), ["x", "1 - x"], 1)
    assert not hypercover_detects(H, 1)


def test_every_resolution_mutation_detected():
    S = resolve(koszul(), 1).simplicial
    found = [simplicial_detects(bad) for _, bad in simplicial_mutations(S, 1)]
    assert found and all(found)


def test_every_hypercover_mutation_detected():
    H = cech_hypercover(polynomial_algebra("x"), ["x", "1 - x"], 1)
    found = [hypercover_detects(bad, m.level) for m, bad in hypercover_mutations(H, 1)]
    assert found and all(found)


def test_mutation_record_has_factor_only_for_hypercovers():
    S = resolve(koszul(), 1).simplicial
    m, _ = next(simplicial_mutations(S))
    assert "factor" not in m.to_dict()
    H = cech_hypercover(polynomial_algebra("x"), ["x", "1 - x"], 1)
    m, _ = next(hypercover_mutations(H))
    assert "factor" in m.to_dict()
