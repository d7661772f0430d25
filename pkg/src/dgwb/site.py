"""Étale coverings, affine shrinking and Čech hypercovers of affine dg manifolds."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Sequence

from .dgalg.algebra import AlgebraError, DgAlgebra
from .dgalg.cohomology import h0_ring
from .dgalg.constructions import _bare_symbol, localize
from .dgalg.morphism import DgMorphism
from .exactalg.base import BaseRing
from .exactalg.modules import Lifter, unit_ideal_certificate
from .exactalg.polynomial import Polynomial
from .homotopy import CERTIFIED, REFUTED, _negative_degree, recognize_fibration
from .resolution.simplicial import (DeltaMap, codegeneracy, coface, compose, epi_mono, surjections)

UNRAMIFIED_ONLY = "unramified-only"
SAMPLED_ONLY = "sampled-only"
CERTIFIED_BY_UNIT = "certified-by-unit-ideal"


# -- étale verdicts -----------------------------------------------------------------------

@dataclass
class EtaleVerdict:
    condition1: str
    condition2: str
    condition3: str | None = None
    witness: dict = field(default_factory=dict)

    @property
    def covering(self) -> bool:
        return (self.condition1 == CERTIFIED and self.condition2 == CERTIFIED
                and self.condition3 == CERTIFIED_BY_UNIT)

    @property
    def verdict(self) -> str:
        conds = [self.condition1, self.condition2] + ([self.condition3] if self.condition3 else [])
        if any(c.startswith(REFUTED) for c in conds):
            return REFUTED
        if self.condition3 is None:
            return CERTIFIED if self.condition1 == CERTIFIED and self.condition2 == CERTIFIED else "inconclusive"
        return CERTIFIED if self.covering else "inconclusive"

    def to_dict(self) -> dict:
        out = {"condition1": self.condition1, "condition2": self.condition2, "verdict": self.verdict,
               "witness": self.witness}
        if self.condition3 is not None:
            out["condition3"] = self.condition3
            out["covering"] = self.covering
        return out


def _is_localization(phi: DgMorphism) -> bool:
    rec = recognize_fibration(phi)
    if not rec:
        return False
    w = rec.witness
    return not w.fresh_variables and not w.free_generators


def _standard_etale(phi: DgMorphism) -> dict | None:
    """B⁰ = A⁰[t]/(p) (possibly with inverses) and p′ a unit in H⁰(B)."""
    S, T = phi.source, phi.target
    var_images = {}
    for v in S.base.variables:
        name = _bare_symbol(phi.images[v])
        if name is None or name not in T.base.variables:
            return None
        var_images[v] = name
    inverses = T.base.all_inverses()
    extra = [v for v in T.base.variables if v not in var_images.values() and v not in inverses]
    if len(extra) != 1 or set(T.names) != {phi.images[g].to_string() for g in S.names}:
        return None
    t = extra[0]
    mapped = [phi.map_base(r) for r in S.base.relations]
    inv_rels = [r for r in T.base.relations if any(tt in r.variables_used() for tt in inverses)]
    candidates = [r for r in T.base.relations if t in r.variables_used() and r not in inv_rels]
    if len(candidates) != 1:
        return None
    p = candidates[0]
    rebuilt = BaseRing(T.base.variables, tuple(mapped + inv_rels + [p]), T.base.order)
    if not rebuilt.same_ideal(T.base):
        return None
    dp = p.derivative(t)
    cert = unit_ideal_certificate([dp], h0_ring(T))
    if cert is None:
        return None
    return {"variable": t, "polynomial": str(p), "derivative": str(dp), "inverse": str(cert[0])}


def omega_h0(phi: DgMorphism):
    """Ω of H⁰(A) → H⁰(B) as generator count and relation columns over H⁰(B)."""
    T0 = h0_ring(phi.target)
    tv = T0.variables
    rels = []
    for v in phi.source.base.variables:
        img = phi.map_base(phi.source.base.var(v)).embed(T0.ring)
        rels.append([T0.reduce(img.derivative(t)) for t in tv])
    for r in T0.gb:
        rels.append([T0.reduce(r.derivative(t)) for t in tv])
    return T0, rels


def omega_vanishes(phi: DgMorphism) -> tuple[bool, list[str]]:
    T0, rels = omega_h0(phi)
    n = len(T0.variables)
    if n == 0:
        return True, []
    lifter = Lifter(rels, T0, n) if rels else None
    missing = []
    for i, t in enumerate(T0.variables):
        e = [T0.one() if j == i else T0.zero() for j in range(n)]
        if lifter is None or not lifter.contains(e):
            missing.append("d" + t)
    return not missing, missing


def etale_verdict(phi: DgMorphism, depth: int = 3) -> EtaleVerdict:
    witness: dict = {}
    if _is_localization(phi):
        c1 = CERTIFIED
        witness["condition1"] = {"shape": "localization"}
    else:
        std = _standard_etale(phi)
        if std is not None:
            c1 = CERTIFIED
            witness["condition1"] = {"shape": "standard-etale", **std}
        else:
            ok, missing = omega_vanishes(phi)
            if ok:
                c1 = UNRAMIFIED_ONLY
                witness["condition1"] = {"shape": "general", "omega": "zero"}
            else:
                c1 = REFUTED
                T0, rels = omega_h0(phi)
                witness["condition1"] = {"shape": "general", "omega_generators": missing,
                                         "omega_relations": [[str(x) for x in r] for r in rels]}
    T0 = h0_ring(phi.target)
    c2 = CERTIFIED
    degs = []
    for k in range(-1, -depth - 1, -1):
        v = _negative_degree(phi, k, T0)
        degs.append(v.to_dict())
        if v.status != CERTIFIED:
            c2 = f"{REFUTED}({k})"
            break
    witness["condition2"] = degs
    return EtaleVerdict(c1, c2, None, witness)


@dataclass
class Member:
    morphism: DgMorphism
    kind: str                      # localization | standard-etale | general
    element: Polynomial | None = None


@dataclass
class CoveringFamily:
    source: DgAlgebra
    members: list[Member]

    def __post_init__(self):
        for m in self.members:
            if m.morphism.source is not self.source and not m.morphism.source.same_structure(self.source):
                raise AlgebraError("covering members must share their source")


def basic_open_family(A: DgAlgebra, elements: Sequence) -> CoveringFamily:
    members = []
    for f in elements:
        f = A.base.coerce(f)
        if not A.base.reduce(f):
            members.append(Member(DgMorphism(A, _zero_like(A), {v: "0" for v in A.symbols()}, check=False),
                                  "localization", f))
            continue
        L, phi = localize(A, f)
        members.append(Member(phi, "localization", f))
    return CoveringFamily(A, members)


def _zero_like(A: DgAlgebra) -> DgAlgebra:
    return DgAlgebra(BaseRing(A.base.variables, ("1",)), [(n, d) for n, d, _ in A.generator_specs()], {})


def _fiber_nonempty(phi: DgMorphism, point: dict) -> bool:
    T0 = h0_ring(phi.target)
    extra = []
    for v in phi.source.base.variables:
        extra.append(phi.map_base(phi.source.base.var(v)).embed(T0.ring) - T0.const(point[v]))
    return not T0.with_relations(extra).is_zero_ring()


def covering_verdict(F: CoveringFamily, depth: int = 3, samples: Sequence[dict] = ()) -> EtaleVerdict:
    A = F.source
    H0 = h0_ring(A)
    if not F.members:
        ok = H0.is_zero_ring()
        return EtaleVerdict(CERTIFIED, CERTIFIED, CERTIFIED_BY_UNIT if ok else REFUTED,
                            {"members": [], "condition3": {"empty_family": True}})
    per = []
    c1s, c2s = [], []
    for m in F.members:
        if m.morphism.target.is_zero_algebra():
            v = EtaleVerdict(CERTIFIED, CERTIFIED, None, {"zero_target": True})
        else:
            v = etale_verdict(m.morphism, depth)
        per.append(v.to_dict())
        c1s.append(v.condition1)
        c2s.append(v.condition2)
    c1 = next((c for c in c1s if c == REFUTED), None) or next((c for c in c1s if c != CERTIFIED), CERTIFIED)
    c2 = next((c for c in c2s if c != CERTIFIED), CERTIFIED)
    w: dict = {"members": per}
    if all(m.kind == "localization" and m.element is not None for m in F.members):
        cert = unit_ideal_certificate([m.element for m in F.members], H0)
        if cert is None:
            c3 = REFUTED
            w["condition3"] = {"unit_ideal": False, "elements": [str(m.element) for m in F.members]}
        else:
            c3 = CERTIFIED_BY_UNIT
            w["condition3"] = {"unit_ideal": True, "cofactors": [str(g) for g in cert]}
    else:
        c3 = SAMPLED_ONLY
        missed = []
        for p in samples:
            if any(g.evaluate(p) != 0 for g in H0.gb):
                continue
            if not any(_fiber_nonempty(m.morphism, p) for m in F.members):
                missed.append({k: str(v) for k, v in sorted(p.items())})
        if missed:
            c3 = REFUTED
        w["condition3"] = {"samples": len(samples), "missed": missed}
    return EtaleVerdict(c1, c2, c3, w)


# -- affine shrinking -------------------------------------------------------------------------

@dataclass
class Shrink:
    h: Polynomial
    cofactors: list[Polynomial]
    unit_cofactor: Polynomial

    def to_dict(self) -> dict:
        return {"h": str(self.h), "cofactors": [str(g) for g in self.cofactors],
                "unit_certificate": str(self.unit_cofactor)}


def affine_shrink(elements: Sequence, A: DgAlgebra) -> Shrink | None:
    """h = Σ g_i f_i invertible in H⁰(A), or None when the f_i miss a point of H⁰."""
    H0 = h0_ring(A)
    fs = [A.base.coerce(f) for f in elements]
    cert = unit_ideal_certificate(fs, H0)
    if cert is None:
        return None
    g = [A.base.reduce(c.embed(A.base.ring)) for c in cert]
    h = A.base.reduce(sum((gi * fi for gi, fi in zip(g, fs)), A.base.zero()))
    unit = unit_ideal_certificate([h], H0)
    if unit is None or A.base.reduce(h - sum((gi * fi for gi, fi in zip(g, fs)), A.base.zero())):
        raise AlgebraError("shrinking certificate failed verification")
    return Shrink(h, g, unit[0])


# -- Čech hypercovers ------------------------------------------------------------------------

Index = tuple[DeltaMap, tuple[int, ...]]


@dataclass
class Factor:
    index: Index
    algebra: DgAlgebra
    inverse: str | None            # name of the inverse variable, if any
    element: Polynomial

    def label(self) -> str:
        phi, s = self.index
        return "phi=" + "".join(map(str, phi)) + ",s={" + ",".join(map(str, s)) + "}"


@dataclass
class ProductMap:
    """Map of products; component c of the target is comp(source factor j(c))."""

    source: int
    target: int
    components: list[tuple[int, DgMorphism]]

    def compose(self, first: "ProductMap") -> "ProductMap":
        """self ∘ first."""
        comps = []
        for j, g in self.components:
            i, f = first.components[j]
            comps.append((i, g.compose(f)))
        return ProductMap(first.source, self.target, comps)

    def equals(self, other: "ProductMap") -> tuple[bool, dict | None]:
        for c, ((i, f), (i2, f2)) in enumerate(zip(self.components, other.components)):
            if i != i2:
                return False, {"factor": c, "detail": f"source factors {i} and {i2} differ"}
            for sym in f.source.symbols():
                if f.images[sym] != f2.images[sym]:
                    return False, {"factor": c, "symbol": sym, "lhs": f.images[sym].to_string(),
                                   "rhs": f2.images[sym].to_string()}
        return True, None


@dataclass
class Hypercover:
    source: DgAlgebra
    elements: list[Polynomial]
    levels: list[list[Factor]]
    absorbed: list[list[str]]
    _maps: dict = field(default_factory=dict)

    @property
    def top(self) -> int:
        return len(self.levels) - 1

    def factor_counts(self) -> list[int]:
        return [len(L) for L in self.levels]

    def expected_counts(self) -> list[int]:
        r = len(self.elements)
        return [sum(comb(n, m) * comb(r, m + 1) for m in range(0, min(n, r - 1) + 1)) for n in range(self.top + 1)]

    def operator(self, alpha: DeltaMap, n: int) -> ProductMap:
        """The algebra map level n' → level n induced by α: [n'] → [n]."""
        key = (alpha, n)
        if key in self._maps:
            return self._maps[key]
        n2 = len(alpha) - 1
        pos = {f.index: i for i, f in enumerate(self.levels[n2])}
        comps = []
        for fac in self.levels[n]:
            phi, s = fac.index
            eps, iota = epi_mono(compose(phi, alpha))
            s2 = tuple(s[i] for i in iota)
            j = pos[(eps, s2)]
            comps.append((j, self.localization_map(self.levels[n2][j], fac)))
        pm = ProductMap(n2, n, comps)
        self._maps[key] = pm
        return pm

    def localization_map(self, small: Factor, big: Factor) -> DgMorphism:
        """A[1/f_{s'}] → A[1/f_s] for s' ⊆ s."""
        images = {}
        if small.inverse is not None:
            rest = big.algebra.base.one()
            for i in big.index[1]:
                if i not in small.index[1]:
                    rest = rest * self.elements[i].embed(big.algebra.base.ring)
            images[small.inverse] = big.algebra.scalar(big.algebra.base.var(big.inverse) * rest)
        return DgMorphism(small.algebra, big.algebra, images, check=False)

    def coface(self, n: int, i: int) -> ProductMap:
        return self.operator(coface(n, i), n)

    def codegeneracy(self, n: int, j: int) -> ProductMap:
        """Level n+1 → level n."""
        return self.operator(codegeneracy(n, j), n)

    def identity(self, n: int) -> ProductMap:
        return self.operator(tuple(range(n + 1)), n)

    def check_identities(self) -> list[dict]:
        fails = []

        def cmp(family, idx, lhs: ProductMap, rhs: ProductMap):
            ok, w = lhs.equals(rhs)
            if not ok:
                fails.append({"family": family, "indices": list(idx), **w})

        N = self.top
        for n in range(1, N):
            for j in range(n + 1):
                for i in range(j):
                    cmp("coface-coface", (n, i, j), self.coface(n + 1, j).compose(self.coface(n, i)),
                        self.coface(n + 1, i).compose(self.coface(n, j - 1)))
        for n in range(0, N):
            for j in range(n + 1):
                for i in range(n + 2):
                    lhs = self.codegeneracy(n, j).compose(self.coface(n + 1, i))
                    if i < j:
                        rhs = self.coface(n, i).compose(self.codegeneracy(n - 1, j - 1))
                    elif i in (j, j + 1):
                        rhs = self.identity(n)
                    else:
                        rhs = self.coface(n, i - 1).compose(self.codegeneracy(n - 1, j))
                    cmp("codegeneracy-coface", (n, i, j), lhs, rhs)
        for n in range(0, N - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    cmp("codegeneracy-codegeneracy", (n, i, j),
                        self.codegeneracy(n, j).compose(self.codegeneracy(n + 1, i)),
                        self.codegeneracy(n, i).compose(self.codegeneracy(n + 1, j + 1)))
        for n in range(0, N + 1):
            for c, (j, f) in enumerate(self.identity(n).components):
                if j != c or not f.is_identity_on_names():
                    fails.append({"family": "identity", "indices": [n], "factor": c})
        return fails

    def mutated(self, n: int, i: int, factor: int, symbol: str, image: str) -> "Hypercover":
        """Copy whose coface (n, i) has one component image replaced."""
        H = Hypercover(self.source, self.elements, self.levels, self.absorbed, dict(self._maps))
        pm = H.coface(n, i)
        j, f = pm.components[factor]
        imgs = dict(f.images)
        imgs[symbol] = f.target.parse(image)
        comps = list(pm.components)
        comps[factor] = (j, DgMorphism(f.source, f.target, imgs, check=False))
        H._maps[(coface(n, i), n)] = ProductMap(pm.source, pm.target, comps)
        return H

    def to_dict(self) -> dict:
        from .io import algebra_to_json
        return {"elements": [str(f) for f in self.elements],
                "factor_counts": self.factor_counts(),
                "absorbed": self.absorbed,
                "levels": [[{"index": {"surjection": list(f.index[0]), "subset": list(f.index[1])},
                             "inverts": str(f.element), "algebra": algebra_to_json(f.algebra)}
                            for f in L] for L in self.levels]}


def cech_hypercover(A: DgAlgebra, elements: Sequence, N: int) -> Hypercover:
    if N < 0:
        raise ValueError("number of levels must be >= 0")
    fs = [A.base.coerce(f) for f in elements]
    r = len(fs)
    cache: dict = {}
    levels, absorbed = [], []
    for n in range(N + 1):
        facs, gone = [], []
        for m in range(0, min(n, r - 1) + 1):
            for phi in surjections(n, m):
                for s in combinations(range(r), m + 1):
                    label = "phi=" + "".join(map(str, phi)) + ",s={" + ",".join(map(str, s)) + "}"
                    if s not in cache:
                        f = A.base.one()
                        for i in s:
                            f = f * fs[i]
                        cache[s] = _chart(A, f)
                    chart = cache[s]
                    if chart is None:
                        gone.append(label)
                        continue
                    alg, inv, f = chart
                    facs.append(Factor((phi, s), alg, inv, f))
        levels.append(facs)
        absorbed.append(gone)
    return Hypercover(A, fs, levels, absorbed)


def _chart(A: DgAlgebra, f: Polynomial):
    if not A.base.reduce(f):
        return None
    L, _ = localize(A, f)
    if L.is_zero_algebra():
        return None
    inv = None if L is A else L.base.variables[-1]
    return L, inv, f


@dataclass
class HypercoverReport:
    level: int
    status: str
    witness: dict

    def to_dict(self) -> dict:
        return {"level": self.level, "status": self.status, "witness": self.witness}


def iterated_localization(A: DgAlgebra, fs: Sequence[Polynomial]) -> tuple[DgAlgebra, list[str | None]]:
    out, names = A, []
    for f in fs:
        L, _ = localize(out, f.embed(out.base.ring))
        names.append(None if L is out else L.base.variables[-1])
        out = L
    return out, names


def coherence_certificate(A: DgAlgebra, fs: Sequence[Polynomial]) -> dict:
    """A[1/f_1]…[1/f_r] ≅ A[1/(f_1⋯f_r)] via t ↦ Π t_i and t_i ↦ t·Π_{j≠i} f_j."""
    prod = A.base.one()
    for f in fs:
        prod = prod * f
    big = localize(A, prod)[0]
    t = None if big is A else big.base.variables[-1]
    it, names = iterated_localization(A, fs)
    forward = {}  # iterated → single
    for i, (f, nm) in enumerate(zip(fs, names)):
        if nm is None:
            continue
        rest = big.base.one()
        for j, g in enumerate(fs):
            if j != i:
                rest = rest * g.embed(big.base.ring)
        forward[nm] = big.scalar(big.base.var(t) * rest)
    back = {}
    if t is not None:
        p = it.scalar(1)
        for f, nm in zip(fs, names):
            p = p * (it.gen(nm) if nm else it.scalar(1 / f.constant_value()))
        back[t] = p
    F = DgMorphism(it, big, forward)
    B = DgMorphism(big, it, back)
    roundtrip = all(B(F(it.gen(s))) == it.gen(s) for s in it.base.variables) and \
        all(F(B(big.gen(s))) == big.gen(s) for s in big.base.variables)
    return {"ok": roundtrip and F.check().ok and B.check().ok,
            "forward": F.image_strings(), "backward": B.image_strings()}


def verify_hypercover(H: Hypercover, n: int, depth: int = 3) -> HypercoverReport:
    if not 0 <= n <= H.top:
        raise ValueError(f"level must lie in 0..{H.top}")
    A = H.source
    if n == 0:
        fam = basic_open_family(A, H.elements)
        v = covering_verdict(fam, depth)
        status = CERTIFIED if v.covering else REFUTED if v.verdict == REFUTED else "inconclusive"
        return HypercoverReport(0, status, {"covering": v.to_dict(), "absorbed": H.absorbed[0]})
    fails = []
    # the factors of level n are the chart intersections indexed by nondecreasing [n] → charts
    seqs = {tuple(s[p] for p in phi) for phi, s in (f.index for f in H.levels[n])}
    expected = {c for c in combinations_with_repetition(len(H.elements), n + 1)}
    expected = {c for c in expected if _chart(A, _product(A, H.elements, set(c))) is not None}
    if seqs != expected:
        fails.append({"check": "factor-indices", "missing": sorted(map(list, expected - seqs)),
                      "extra": sorted(map(list, seqs - expected))})
    certs = []
    for fac in H.levels[n]:
        phi, s = fac.index
        seq = [H.elements[s[p]] for p in phi]
        cert = coherence_certificate(A, seq)
        certs.append({"factor": fac.label(), "ok": cert["ok"]})
        if not cert["ok"]:
            fails.append({"check": "coherence", "factor": fac.label(), **cert})
    # faces are the canonical localizations
    for i in range(n + 1):
        pm = H.coface(n, i)
        for c, (j, f) in enumerate(pm.components):
            small, big = H.levels[n - 1][j], H.levels[n][c]
            if not set(small.index[1]) <= set(big.index[1]):
                fails.append({"check": "face", "coface": i, "factor": big.label(), "detail": "not a sub-chart"})
                continue
            canon = H.localization_map(small, big)
            ok, w = ProductMap(0, 0, [(0, f)]).equals(ProductMap(0, 0, [(0, canon)]))
            if not ok or not f.check().ok:
                fails.append({"check": "face", "coface": i, "factor": big.label(), **(w or {})})
    reach = {"coface-coface": 1, "codegeneracy-coface": 1, "codegeneracy-codegeneracy": 2, "identity": 0}
    ident = [f for f in H.check_identities() if f["indices"][0] + reach[f["family"]] <= n]
    fails += [{"check": "identity", **f} for f in ident]
    status = CERTIFIED if not fails else REFUTED
    return HypercoverReport(n, status, {"coherence": certs, "failures": fails, "absorbed": H.absorbed[n]})


def combinations_with_repetition(r: int, length: int):
    from itertools import combinations_with_replacement
    return combinations_with_replacement(range(r), length)


def _product(A: DgAlgebra, fs, s) -> Polynomial:
    p = A.base.one()
    for i in sorted(s):
        p = p * fs[i]
    return p
