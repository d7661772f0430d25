from hypothesis import HealthCheck, given, settings, strategies as st

from dgwb.dgalg.algebra import DgAlgebra, polynomial_algebra
from dgwb.dgalg.constructions import localize, pushout
from dgwb.dgalg.morphism import DgMorphism, identity
from dgwb.exactalg.base import BaseRing
from dgwb.homotopy import (CERTIFIED, REFUTED, brown_factorize, certify_quasi_iso, path_object,
                           recognize_fibration)


def test_free_extension_is_fibration(qx, kx):
    rec = recognize_fibration(DgMorphism(qx, kx, {}))
    assert rec and rec.witness.free_generators == [("e", -1)]


def test_localization_is_fibration(qx):
    L, phi = localize(qx, "x")
    rec = recognize_fibration(phi)
    assert rec and rec.witness.localizations


def test_non_injective_map_not_recognized(qx):
    assert not recognize_fibration(DgMorphism(qx, qx, {"x": "x^2"}))


def test_identity_is_quasi_iso(kx):
    assert certify_quasi_iso(identity(kx), 3).verdict == CERTIFIED


def test_koszul_inclusion_refuted_on_h0(qx, kx):
    v = certify_quasi_iso(DgMorphism(qx, kx, {}), 3)
    assert v.verdict == REFUTED and v.first_failure().degree == 0


def test_twin_to_koszul_refuted_in_negative_degree(kx, twin):
    phi = DgMorphism(kx, twin, {"e": "e1"})
    v = certify_quasi_iso(phi, 3)
    assert v.verdict == REFUTED and v.first_failure().degree == -1


def test_path_object_shape(qx):
    P = path_object(qx, 3)
    F = P.factorization
    M = F.middle
    assert len(M.base.variables) == 2 and M.names and len(M.names) == 1
    (u,) = M.names
    a, b = M.base.variables
    assert M.differential(u) in (M.parse(f"{a} - {b}"), M.parse(f"{b} - {a}"))
    assert bool(F.first_witness)
    assert F.second_verdict.verdict == CERTIFIED
    comp = F.composite()
    assert all(comp.images[v] == qx.gen("x") for v in comp.source.base.variables)


def test_path_object_degree_zero_part(qx):
    P = path_object(qx, 3)
    assert P.factorization.middle.base.same_ideal(P.tensor.base)


def test_brown_factorization(qx):
    pt = DgAlgebra(BaseRing(()), [])
    phi = DgMorphism(qx, pt, {"x": "0"})
    F = brown_factorize(phi, 3)
    assert F.composite().equals(phi)
    assert F.second.compose(F.section).is_identity_on_names() or not pt.symbols()
    assert bool(F.first_witness) and F.second_verdict.verdict == CERTIFIED
    (u,) = F.middle.names
    assert F.middle.differential(u).degree == 0 and F.middle.differential(u)


def test_brown_factorization_of_koszul_inclusion(qx, kx):
    phi = DgMorphism(qx, kx, {})
    F = brown_factorize(phi, 2)
    assert F.composite().equals(phi)
    assert F.second.compose(F.section).is_identity_on_names()


# -- generated corpus ------------------------------------------------------------------

def _poly(cs):
    a, b, c = cs
    return f"{a}*x^2 + {b}*x + {c}"


coef = st.integers(-3, 3)
polys = st.tuples(coef, coef, coef)


def _kill(A: DgAlgebra, var: str, gen: str, target: str) -> tuple[DgAlgebra, DgMorphism]:
    """A → A[var][gen], δgen = var − target: a quasi-isomorphic free extension."""
    base = A.base.with_variables([var])
    specs = [(n, d) for n, d, _ in A.generator_specs()] + [(gen, -1)]
    diffs = {n: t for n, _, t in A.generator_specs()}
    diffs[gen] = f"{var} - ({target})"
    B = DgAlgebra(base, specs, diffs)
    return B, DgMorphism(A, B, {})


@settings(max_examples=12, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(polys, polys)
def test_two_out_of_three(p1, p2):
    A = polynomial_algebra("x")
    B, f = _kill(A, "y", "u", _poly(p1))
    C, g = _kill(B, "z", "v", _poly(p2))
    vf, vg = certify_quasi_iso(f, 3), certify_quasi_iso(g, 3)
    assert vf.verdict == CERTIFIED and vg.verdict == CERTIFIED
    assert certify_quasi_iso(g.compose(f), 3).verdict != REFUTED


@settings(max_examples=12, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(polys, polys)
def test_pushout_of_fibration_is_fibration(p1, p2):
    A = polynomial_algebra("x")
    B = DgAlgebra(A.base.with_variables(["y"]), [("e", -1)], {"e": f"y*({_poly(p1)})"})
    phi = DgMorphism(A, B, {})
    assert recognize_fibration(phi)
    psi = DgMorphism(A, A, {"x": _poly(p2)})
    po = pushout(psi, phi)
    assert recognize_fibration(po.left)
