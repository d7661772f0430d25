"""Fibrations, quasi-isomorphism verdicts, path objects and Brown factorizations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .dgalg.algebra import DgAlgebra, GradedElement
from .dgalg.cohomology import cohomology, h0_ring
from .dgalg.constructions import _bare_symbol, inclusion_data, pushout, tensor_product
from .dgalg.kahler import relative_kahler
from .dgalg.morphism import DgMorphism
from .exactalg.base import BaseRing
from .exactalg.groebner import BudgetExceeded, buchberger, vec_from_polys, vec_to_polys
from .exactalg.linalg import rank
from .exactalg.modules import Lifter, is_zero_column, module_basis, module_normal_form, reduce_column, syzygies
from .exactalg.polynomial import MonomialOrder, Polynomial

CERTIFIED, REFUTED, INCONCLUSIVE = "certified", "refuted", "inconclusive"


# -- fibrations ------------------------------------------------------------------------

@dataclass
class FibrationWitness:
    variable_map: dict[str, str]
    generator_map: dict[str, str]
    fresh_variables: list[str]
    localizations: list[tuple[str, str]]
    free_generators: list[tuple[str, int]]

    def to_dict(self) -> dict:
        return {"variable_map": self.variable_map, "generator_map": self.generator_map,
                "fresh_variables": self.fresh_variables,
                "localizations": [{"variable": t, "inverts": f} for t, f in self.localizations],
                "free_generators": [{"name": n, "degree": d} for n, d in self.free_generators]}


@dataclass
class Recognition:
    witness: FibrationWitness | None
    reason: str = ""

    def __bool__(self):
        return self.witness is not None


def _localization_relation(rel: Polynomial, t: str) -> Polynomial | None:
    """If rel = ±(f·t − 1) with f free of t, return f."""
    if rel.degree_in(t) != 1:
        return None
    f = rel.derivative(t)
    if t in f.variables_used():
        return None
    rest = rel - f * rel.ring.var(t)
    if rest == rel.ring.const(-1):
        return f
    if rest == rel.ring.const(1):
        return -f
    return None


def recognize_fibration(phi: DgMorphism) -> Recognition:
    """Structural test: target = source base extended by fresh/inverse variables plus free generators."""
    S, T = phi.source, phi.target
    var_map = {}
    for v in S.base.variables:
        name = _bare_symbol(phi.images[v])
        if name is None or name not in T.base.variables:
            return Recognition(None, f"variable {v} is not sent to a target variable")
        var_map[v] = name
    if len(set(var_map.values())) != len(var_map):
        return Recognition(None, "two source variables share an image")
    gen_map = {}
    for g in S.names:
        name = _bare_symbol(phi.images[g])
        if name is None or name not in T.index:
            return Recognition(None, f"generator {g} is not sent to a target generator")
        gen_map[g] = name
    if len(set(gen_map.values())) != len(gen_map):
        return Recognition(None, "two source generators share an image")
    extra = [v for v in T.base.variables if v not in var_map.values()]
    locs, fresh = [], []
    loc_rels = []
    for t in extra:
        found = None
        for r in T.base.relations:
            f = _localization_relation(r, t)
            if f is not None:
                found = (r, f)
                break
        if found is None:
            fresh.append(t)
        else:
            locs.append((t, str(found[1])))
            loc_rels.append(found[0])
    expected = [phi.map_base(r) for r in S.base.relations] + loc_rels
    rebuilt = BaseRing(T.base.variables, tuple(expected), T.base.order)
    if not rebuilt.same_ideal(T.base):
        return Recognition(None, "degree-0 map is not a recognized smooth extension")
    free = [(n, d) for n, d in zip(T.names, T.degrees) if n not in gen_map.values()]
    return Recognition(FibrationWitness(var_map, gen_map, fresh, locs, free))


# -- quasi-isomorphisms --------------------------------------------------------------------

@dataclass
class DegreeVerdict:
    degree: int
    status: str
    witness: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"degree": self.degree, "status": self.status, "witness": self.witness}


@dataclass
class QisoVerdict:
    depth: int
    h0: DegreeVerdict
    degrees: list[DegreeVerdict]
    cotangent: dict | None = None

    @property
    def verdict(self) -> str:
        allv = [self.h0] + self.degrees
        if any(v.status == REFUTED for v in allv):
            return REFUTED
        if all(v.status == CERTIFIED for v in allv) and len(self.degrees) == self.depth:
            return CERTIFIED
        return INCONCLUSIVE

    def first_failure(self) -> DegreeVerdict | None:
        return next((v for v in [self.h0] + self.degrees if v.status != CERTIFIED), None)

    def to_dict(self) -> dict:
        fail = self.first_failure()
        witness: dict[str, Any] = {"h0": self.h0.to_dict(), "degrees": [d.to_dict() for d in self.degrees]}
        if fail is not None:
            witness["failed_degree"] = fail.degree
        if self.cotangent is not None:
            witness["cotangent"] = self.cotangent
        return {"verdict": self.verdict, "depth": self.depth, "witness": witness}


def _h0_comparison(phi: DgMorphism, budget: int | None) -> tuple[DegreeVerdict, BaseRing, BaseRing]:
    S, T = phi.source, phi.target
    S0, T0 = h0_ring(S), h0_ring(T)
    tv = list(T.base.variables)
    used = set(tv)
    sv = []
    for v in S.base.variables:
        name = "s__" + v
        while name in used:
            name += "_"
        used.add(name)
        sv.append(name)
    order = MonomialOrder("degrevlex", None, (len(tv), len(sv)))
    elim = BaseRing(tuple(tv + sv), (), order)
    gens = [g.embed(elim.ring) for g in T0.gb]
    for v, s in zip(S.base.variables, sv):
        img = phi.map_base(S.base.var(v)).embed(elim.ring)
        gens.append(elim.var(s) - img)
    try:
        basis = buchberger((vec_from_polys([g]) for g in gens if g), elim.ring, budget)
    except BudgetExceeded as exc:
        return DegreeVerdict(0, INCONCLUSIVE, {"reason": str(exc)}), S0, T0
    polys = [vec_to_polys(v, elim.ring, 1)[0] for v in basis.elements]
    back = {s: S0.var(v) for v, s in zip(S.base.variables, sv)}
    zero_t = {t: S0.zero() for t in tv}
    # injectivity: the kernel of ℚ[S] → H⁰(T) must lie in the defining ideal of H⁰(S)
    for p in polys:
        if p.variables_used() <= set(sv):
            q = p.substitute({**back, **zero_t}, S0.ring)
            if S0.reduce(q):
                return DegreeVerdict(0, REFUTED, {"reason": "not injective", "kernel_element": str(q)}), S0, T0
    # surjectivity: every target variable has a normal form in the source variables
    inverse = {}
    for t in tv:
        nf = vec_to_polys(basis.reduce(vec_from_polys([elim.var(t)])), elim.ring, 1)[0]
        if not nf.variables_used() <= set(sv):
            return DegreeVerdict(0, REFUTED, {"reason": "not surjective", "variable": t}), S0, T0
        inverse[t] = str(S0.reduce(nf.substitute({**back, **zero_t}, S0.ring)))
    return DegreeVerdict(0, CERTIFIED, {"inverse": inverse}), S0, T0


def _negative_degree(phi: DgMorphism, k: int, T0: BaseRing) -> DegreeVerdict:
    S, T = phi.source, phi.target
    M = cohomology(S, k)
    N = cohomology(T, k)
    cols = []
    for z in M.generators:
        el = phi(S.from_coordinates(z, k))
        c = N.coordinates(T.coordinates(el, k)) if N.rank else []
        if c is None:
            raise RuntimeError("image of a cocycle is not a cocycle")
        cols.append(reduce_column(c, T0))
    q = N.rank
    rels_N = [reduce_column(r, T0) for r in N.relations]
    rels_M = [reduce_column([phi.map_base(x) for x in r], T0) for r in M.relations]
    # cokernel: every generator of N is hit modulo relations
    if q:
        lifter = Lifter([c for c in cols] + rels_N, T0, q) if (cols or rels_N) else None
        for j in range(q):
            e = [T0.one() if i == j else T0.zero() for i in range(q)]
            if is_zero_column(reduce_column(e, T0)):
                continue
            if lifter is None or not lifter.contains(e):
                return DegreeVerdict(k, REFUTED, {"reason": "cokernel nonzero", "target_generator": j})
    # kernel: relations among images come from relations of the source
    r = len(cols)
    if r:
        syz = syzygies(cols + rels_N, T0, q) if q else [[T0.one() if i == j else T0.zero()
                                                        for i in range(r)] for j in range(r)]
        mb = module_basis(rels_M, T0, r) if rels_M else None
        for s in syz:
            v = s[:r]
            if is_zero_column(v):
                continue
            rem = module_normal_form(v, mb, T0, r) if mb is not None else reduce_column(v, T0)
            if not is_zero_column(rem):
                return DegreeVerdict(k, REFUTED, {"reason": "kernel nonzero",
                                                  "source_coordinates": [str(x) for x in v]})
    return DegreeVerdict(k, CERTIFIED, {"source_rank": M.rank, "target_rank": N.rank})


def certify_quasi_iso(phi: DgMorphism, depth: int = 3, budget: int | None = 20000,
                      cotangent: bool = True) -> QisoVerdict:
    """Compare H⁰ exactly and H^k for −depth ≤ k < 0 through the induced map."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    h0, S0, T0 = _h0_comparison(phi, budget)
    degrees = []
    if h0.status == CERTIFIED:
        for k in range(-1, -depth - 1, -1):
            v = _negative_degree(phi, k, T0)
            degrees.append(v)
            if v.status != CERTIFIED:
                break
    cot = None
    if cotangent and recognize_fibration(phi):
        rep = relative_kahler(phi, depth)
        cot = {"acyclic": rep.acyclic, "ranks": {str(k): v for k, v in sorted(rep.ranks.items(), reverse=True)}}
    return QisoVerdict(depth, h0, degrees, cot)


def jacobian_rank_at(alg: DgAlgebra, point: dict[str, Fraction]) -> dict:
    """Advisory pointwise Jacobian rank of the base relations."""
    rows = [[r.derivative(v).evaluate(point) for v in alg.base.variables] for r in alg.base.relations]
    rk = rank(rows) if rows and rows[0] else 0
    return {"rank": rk, "variables": len(alg.base.variables), "relations": len(alg.base.relations)}


# -- factorizations ---------------------------------------------------------------------------

@dataclass
class Factorization:
    middle: DgAlgebra
    first: DgMorphism
    second: DgMorphism
    first_role: str
    second_role: str
    first_witness: Recognition
    second_verdict: QisoVerdict
    section: DgMorphism | None = None
    stages: list[dict] = field(default_factory=list)
    depth: int = 0

    def composite(self) -> DgMorphism:
        return self.second.compose(self.first)

    def to_dict(self) -> dict:
        from .io import algebra_to_json
        out = {
            "algebra": algebra_to_json(self.middle),
            "depth": self.depth,
            "first_leg": {"role": self.first_role, "images": self.first.image_strings(),
                          "fibration": bool(self.first_witness),
                          "witness": self.first_witness.witness.to_dict() if self.first_witness else
                          {"reason": self.first_witness.reason}},
            "second_leg": {"role": self.second_role, "images": self.second.image_strings(),
                           "quasi_isomorphism": self.second_verdict.to_dict()},
            "stages": self.stages,
        }
        if self.section is not None:
            out["section"] = self.section.image_strings()
        return out

    @property
    def verdict(self) -> str:
        if not self.first_witness:
            return INCONCLUSIVE
        return self.second_verdict.verdict


@dataclass
class PathObject:
    factorization: Factorization
    first_copy: DgMorphism   # A → P
    second_copy: DgMorphism  # A → P
    tensor: DgAlgebra


def _cocycle_generators(P: DgAlgebra, k: int) -> list[list[Polynomial]]:
    base = P.base
    if k == 0:
        return [[base.one()]]
    basis = P.graded_basis(k)
    if not basis:
        return []
    if not P.graded_basis(k + 1):
        return [[base.one() if i == j else base.zero() for i in range(len(basis))] for j in range(len(basis))]
    return syzygies(P.differential_matrix(k), base, len(P.graded_basis(k + 1)))


def path_object(A: DgAlgebra, depth: int = 3) -> PathObject:
    """Killing-cocycles factorization A⊗A → P → A of the multiplication map."""
    T = tensor_product(A, A)
    AA = T.algebra
    mult_images = {}
    for n in A.symbols():
        mult_images[n] = A.gen(n)
    for n in A.symbols():
        mult_images[T.right.images[n].to_string()] = A.gen(n)
    P = AA
    p_images: dict[str, GradedElement] = dict(mult_images)
    stages = []
    for k in range(0, -depth - 1, -1):
        p = DgMorphism(P, A, p_images, check=False)
        zgens = _cocycle_generators(P, k)
        a_basis = A.graded_basis(k - 1)
        new = []
        if zgens and not P.is_zero_algebra():
            rank_k = len(A.graded_basis(k)) if k < 0 else 1
            section = T.left
            cols = []
            for z in zgens:
                pz = p(P.from_coordinates(z, k)) if k < 0 else p(P.scalar(z[0]))
                coords = A.coordinates(pz, k) if k < 0 else [pz.base_part()]
                cols.append([section.map_base(c).embed(P.base.ring) for c in coords])
            for col in A.differential_matrix(k - 1) if a_basis else []:
                cols.append([-section.map_base(c).embed(P.base.ring) for c in col])
            ker_p0 = [P.base.var(n) - P.base.var(T.right.images[n].to_string())
                      for n in A.base.variables]
            for g in ker_p0:
                for i in range(rank_k):
                    cols.append([g if j == i else P.base.zero() for j in range(rank_k)])
            syz = syzygies(cols, P.base, rank_k)
            nz, na = len(zgens), len(a_basis)
            for s in syz:
                zc, ac = s[:nz], s[nz:nz + na]
                z_el = P.zero()
                for c, z in zip(zc, zgens):
                    if c:
                        z_el = z_el + (P.from_coordinates([c * x for x in z], k) if k < 0 else P.scalar(c * z[0]))
                if not z_el:
                    continue
                a_el = A.zero()
                for c, m in zip(ac, a_basis):
                    if c:
                        a_el = a_el + A.monomial(m, p.map_base(c))
                lead_c = _leading_coefficient(z_el)
                z_el = z_el * (1 / lead_c)
                a_el = a_el * (1 / lead_c)
                if any(z_el == prev[0] and a_el == prev[1] for prev in new):
                    continue
                new.append((z_el, a_el))
        names = []
        if new:
            specs = []
            used = set(P.symbols())
            for i, (z_el, a_el) in enumerate(new, start=1):
                name = f"u{-k}_{i}"
                while name in used:
                    name += "_"
                used.add(name)
                names.append(name)
                specs.append((name, k - 1, z_el.to_string()))
            P = P.with_generators(specs)
            for name, (_, a_el) in zip(names, new):
                p_images[name] = a_el
        stages.append({"degree": k, "new_generators": [
            {"name": n, "differential": z.to_string(), "image": a.to_string()} for n, (z, a) in zip(names, new)]})
    first = DgMorphism(AA, P, {})
    second = DgMorphism(P, A, p_images)
    fact = Factorization(P, first, second, "fibration", "weak_equivalence",
                         recognize_fibration(first), certify_quasi_iso(second, depth), None, stages, depth)
    return PathObject(fact, DgMorphism(A, P, T.left.images), DgMorphism(A, P, T.right.images), AA)


def _leading_coefficient(el: GradedElement) -> Fraction:
    m = max(el.terms)
    return el.terms[m].leading_coefficient()


def multiplication_map(A: DgAlgebra, tensor: DgAlgebra, right: DgMorphism) -> DgMorphism:
    images = {n: A.gen(n) for n in A.symbols()}
    for n in A.symbols():
        images[right.images[n].to_string()] = A.gen(n)
    return DgMorphism(tensor, A, images)


def brown_factorize(phi: DgMorphism, depth: int = 3) -> Factorization:
    """B → P′ → A with P′ = A ⊗_B path_object(B) and a section A → P′."""
    B, A = phi.source, phi.target
    po = path_object(B, depth)
    P = po.factorization.middle
    glued = pushout(phi, po.first_copy)
    Pp = glued.algebra
    first = glued.right.compose(po.second_copy)
    first = DgMorphism(B, Pp, first.images)
    # P′ → A: identity on A, φ∘p on the path-object part
    p = po.factorization.second
    images: dict[str, GradedElement] = {n: A.gen(n) for n in A.symbols()}
    for n in P.symbols():
        target_name = _bare_symbol(glued.right.images[n]) if glued.right.images[n] else None
        if target_name is not None and target_name not in A.symbols():
            images[target_name] = phi(p.images[n])
    second = DgMorphism(Pp, A, images)
    section = glued.left
    return Factorization(Pp, first, second, "fibration", "weak_equivalence",
                         recognize_fibration(first), certify_quasi_iso(second, depth), section,
                         po.factorization.stages, depth)
