"""The functorial simplicial resolution, level by level.

Level n carries A's own symbols plus, for every 1 ≤ p ≤ n, every surjection
η: [n] ↠ [p] and every non-degenerate pair (ē, f̄) born at level p, the
generators η*ē and η*f̄.  A pair born at level p is indexed by a nonempty
proper subset s ⊆ [p], a degree k < 0 and a basis vector b of the top
component of level |s|-1 in degree k.  Faces and degeneracies are the
pullbacks along the corresponding maps of Δ, computed through the
epi-mono factorization and the block rule on non-degenerate generators.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import comb

from ..dgalg.algebra import AlgebraError, DgAlgebra, GradedElement
from ..dgalg.morphism import DgMorphism
from ..exactalg.modules import Lifter, syzygies
from ..exactalg.polynomial import Polynomial
from .simplicial import (DeltaMap, SimplicialDgAlgebra, codegeneracy, coface, compose, epi_mono,
                         is_identity, proper_subsets, subset_label, surjections)


@dataclass(frozen=True)
class NewGen:
    """A non-degenerate generator born at ``level``."""

    level: int
    kind: str          # "E" or "F"
    degree: int
    subset: frozenset
    k: int             # degree of the E partner
    b: int             # index into the top basis of level |subset|-1, degree k
    name: str

    @property
    def block(self) -> int:
        return len(self.subset) - 1


def _prefixes(A: DgAlgebra) -> tuple[str, str]:
    syms = A.symbols()
    for tag in ("", "r", "rr", "rrr", "q"):
        e, f = "E" + tag, "F" + tag
        pat = re.compile(rf"^({e}|{f})\d")
        if not any(pat.match(s) for s in syms):
            return e, f
    raise AlgebraError("cannot choose fresh generator names")


def _eta_suffix(eta: DeltaMap) -> str:
    return "__s" + "_".join(str(v) for v in eta)


@dataclass
class Resolution:
    """Output of :func:`resolve`: the simplicial object plus its bookkeeping."""

    source: DgAlgebra
    depth: int
    levels: list[DgAlgebra] = field(default_factory=list)
    new: list[list[NewGen]] = field(default_factory=list)          # new[p]: born at level p
    symbols: list[dict] = field(default_factory=list)              # symbols[n][name] = (eta, NewGen)
    top_basis: dict = field(default_factory=dict)                  # (j, k) -> list[GradedElement in A_j]
    top_columns: dict = field(default_factory=dict)                # (j, k) -> coefficient vectors over A.base
    simplicial: SimplicialDgAlgebra | None = None
    _by_key: dict = field(default_factory=dict)
    _pull: dict = field(default_factory=dict)

    # -- lookups ---------------------------------------------------------
    def nondegenerate(self, p: int, kind: str, subset: frozenset, k: int, b: int) -> NewGen:
        return self._by_key[(p, kind, subset, k, b)]

    def level_name(self, eta: DeltaMap, g: NewGen) -> str:
        return g.name if is_identity(eta) else g.name + _eta_suffix(eta)

    def degrees(self) -> range:
        return range(-1, -self.depth - 1, -1)

    # -- Δ action ----------------------------------------------------------
    def pullback(self, alpha: DeltaMap, n: int) -> DgMorphism:
        """α*: A_n → A_m for α: [m] → [n]."""
        key = (alpha, n)
        hit = self._pull.get(key)
        if hit is not None:
            return hit
        m = len(alpha) - 1
        src, tgt = self.levels[n], self.levels[m]
        images: dict[str, GradedElement] = {}
        for name, (eta, g) in self.symbols[n].items():
            eps, mu = epi_mono(compose(eta, alpha))
            q = len(mu) - 1
            if q == g.level:
                images[name] = tgt.gen(self.level_name(eps, g))
                continue
            val = self._face_image(g, mu, q)
            if not is_identity(eps):
                val = self.pullback(eps, q)(val) if val else tgt.zero()
            elif val.alg is not tgt:
                raise AlgebraError("internal level mismatch")
            images[name] = val
        mor = DgMorphism(src, tgt, images, check=False)
        self._pull[key] = mor
        return mor

    def _face_image(self, g: NewGen, mu: DeltaMap, q: int) -> GradedElement:
        """μ*(g) in A_q for an injection μ: [q] → [g.level]."""
        Aq = self.levels[q]
        if is_identity(mu) and q == g.level:
            return Aq.gen(g.name)
        if g.kind == "F":
            partner = self.nondegenerate(g.level, "E", g.subset, g.k, g.b)
            return self._face_image(partner, mu, q).d()
        if not g.subset <= set(mu):
            return Aq.zero()
        pos = {v: i for i, v in enumerate(mu)}
        s2 = frozenset(pos[v] for v in g.subset)
        if len(s2) == q + 1:
            return self.top_basis[(q, g.k)][g.b]
        return Aq.gen(self.nondegenerate(q, "E", s2, g.k, g.b).name)

    def face(self, n: int, i: int) -> DgMorphism:
        return self.pullback(coface(n, i), n)

    def degeneracy(self, n: int, j: int) -> DgMorphism:
        return self.pullback(codegeneracy(n, j), n)

    # -- top components ------------------------------------------------------
    def split(self, el: GradedElement) -> dict:
        """Coordinates {(F-exponents, monomial): polynomial over A.base}."""
        nA = len(self.source.base.variables)
        ring = self.source.base.ring
        out: dict = {}
        for m, c in el.terms.items():
            for e, a in c.terms.items():
                key = (e[nA:], m)
                piece = Polynomial(ring, {e[:nA]: a}, True)
                prev = out.get(key)
                out[key] = piece if prev is None else prev + piece
        return {k: v for k, v in out.items() if v}

    def _compute_top(self, j: int) -> None:
        A = self.source
        Aj = self.levels[j]
        for k in self.degrees():
            if j == 0:
                self.top_basis[(0, k)] = [A.monomial(m) for m in A.graded_basis(k)]
                continue
            monos = Aj.graded_basis(k)
            if not monos:
                self.top_basis[(j, k)] = []
                continue
            faces = [self.face(j, i) for i in range(j + 1)]
            coords = []
            keys: dict = {}
            for m in monos:
                row = {}
                for i, f in enumerate(faces):
                    for key, c in self.split(f.map_mono(m)).items():
                        kk = (i,) + key
                        keys.setdefault(kk, len(keys))
                        row[keys[kk]] = c
                coords.append(row)
            base = A.base
            cols = [[row.get(r, base.zero()) for r in range(len(keys))] for row in coords]
            if keys:
                kernel = syzygies(cols, base, len(keys))
            else:
                kernel = [[base.one() if a == b else base.zero() for a in range(len(monos))]
                          for b in range(len(monos))]
            self.top_columns[(j, k)] = kernel
            elems = []
            for vec in kernel:
                terms = {m: c.embed(Aj.base.ring) for m, c in zip(monos, vec) if c}
                elems.append(GradedElement(Aj, terms))
            self.top_basis[(j, k)] = elems

    # -- building ----------------------------------------------------------
    def _build_level(self, n: int) -> None:
        A = self.source
        pe, pf = self._prefix
        fresh: list[NewGen] = []
        idx = 0
        for s in proper_subsets(n):
            for k in self.degrees():
                for b in range(len(self.top_basis[(len(s) - 1, k)])):
                    e = NewGen(n, "E", k, s, k, b, f"{pe}{n}_{idx}")
                    f = NewGen(n, "F", k + 1, s, k, b, f"{pf}{n}_{idx}")
                    fresh += [e, f]
                    self._by_key[(n, "E", s, k, b)] = e
                    self._by_key[(n, "F", s, k, b)] = f
                    idx += 1
        self.new.append(fresh)
        table: dict = {}
        specs = [(name, d) for name, d, _ in A.generator_specs()]
        diffs = {name: t for name, _, t in A.generator_specs()}
        for p in range(1, n + 1):
            for eta in surjections(n, p):
                for g in self.new[p]:
                    nm = self.level_name(eta, g)
                    table[nm] = (eta, g)
                    specs.append((nm, g.degree))
                    if g.kind == "E":
                        partner = self.nondegenerate(p, "F", g.subset, g.k, g.b)
                        diffs[nm] = self.level_name(eta, partner)
        self.symbols.append(table)
        self.levels.append(DgAlgebra(A.base, specs, diffs))

    def build(self, N: int) -> None:
        self._prefix = _prefixes(self.source)
        self.levels.append(self.source)
        self.new.append([])
        self.symbols.append({})
        for n in range(1, N + 1):
            self._compute_top(n - 1)
            self._build_level(n)
        faces = [[]] + [[self.face(n, i) for i in range(n + 1)] for n in range(1, N + 1)]
        degs = [[self.degeneracy(n, j) for j in range(n + 1)] for n in range(N)]
        self.simplicial = SimplicialDgAlgebra(self.levels, faces, degs, "resolution",
                                              self.decomposition())

    # -- reporting ---------------------------------------------------------
    def decomposition(self) -> list[dict]:
        out = []
        for m in range(1, len(self.levels)):
            for k in self.degrees():
                blocks: dict[str, list[str]] = {}
                partners: dict[str, str] = {}
                for g in self.new[m]:
                    if g.k == k and g.kind == "E":
                        blocks.setdefault(subset_label(g.subset), []).append(g.name)
                        partners[g.name] = self.nondegenerate(m, "F", g.subset, k, g.b).name
                if blocks:
                    out.append({"level": m, "degree": k, "blocks": blocks, "partners": partners})
        return out

    def generator_table(self) -> list[dict]:
        """Per level: count of generators by degree and of new ones by degree."""
        rows = []
        for n, L in enumerate(self.levels):
            total: dict[int, int] = {0: len(L.base.variables)}
            for d in L.degrees:
                total[d] = total.get(d, 0) + 1
            added: dict[int, int] = {}
            for g in self.new[n]:
                added[g.degree] = added.get(g.degree, 0) + 1
            rows.append({"level": n,
                         "generators": {str(d): c for d, c in sorted(total.items(), reverse=True)},
                         "new": {str(d): c for d, c in sorted(added.items(), reverse=True)}})
        return rows

    def top_ranks(self) -> dict[tuple[int, int], int]:
        return {key: len(v) for key, v in self.top_basis.items()}

    def rank_recursion(self) -> list[dict]:
        """Compare the count of new E generators with the subset-indexed sum."""
        out = []
        for n in range(1, len(self.levels)):
            for k in self.degrees():
                actual = sum(1 for g in self.new[n] if g.kind == "E" and g.k == k)
                expected = sum(comb(n + 1, j + 1) * len(self.top_basis[(j, k)]) for j in range(n))
                out.append({"level": n, "degree": k, "actual": actual, "expected": expected,
                            "ok": actual == expected})
        return out

    def block_rule_failures(self) -> list[dict]:
        """Face images of non-degenerate E generators against the block rule."""
        S = self.simplicial
        fails = []
        for n in range(1, len(self.levels)):
            for i in range(n + 1):
                face = S.faces[n][i]
                mu = coface(n, i)
                for g in self.new[n]:
                    want = self._face_image(g, mu, n - 1)
                    got = face.images[g.name]
                    if got != want:
                        fails.append({"level": n, "face": i, "generator": g.name,
                                      "expected": want.to_string(), "found": got.to_string()})
        return fails


def resolve(A: DgAlgebra, N: int, depth: int = 3) -> Resolution:
    """Levels A_0 … A_N; new pairs are created in degrees -1 … -depth."""
    if N < 0:
        raise ValueError("number of levels must be >= 0")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    R = Resolution(A, depth)
    R.build(N)
    return R


def induced_maps(phi: DgMorphism, RA: Resolution, RB: Resolution) -> list[DgMorphism]:
    """Level maps Γ(φ)_n: A_n → B_n."""
    if RA.depth != RB.depth or len(RA.levels) != len(RB.levels):
        raise ValueError("resolutions must share depth and number of levels")
    maps = [phi]
    lifters: dict = {}
    for n in range(1, len(RA.levels)):
        An, Bn = RA.levels[n], RB.levels[n]
        images: dict[str, GradedElement] = {}
        for name in RA.source.symbols():
            images[name] = Bn.element_from(phi.images[name])
        for name, (eta, g) in RA.symbols[n].items():
            coeffs = _top_coordinates(phi, RA, RB, maps, g.block, g.k, g.b, lifters)
            acc = Bn.zero()
            for bi, c in enumerate(coeffs):
                if c:
                    h = RB.nondegenerate(g.level, g.kind, g.subset, g.k, bi)
                    acc = acc + Bn.gen(RB.level_name(eta, h)) * Bn.scalar(c.embed(Bn.base.ring))
            images[name] = acc
        maps.append(DgMorphism(An, Bn, images, check=False))
    return maps


def _top_coordinates(phi, RA, RB, maps, j, k, b, lifters):
    key = (j, k, b)
    if key in lifters:
        return lifters[key]
    B = RB.source
    Bj = RB.levels[j]
    image = maps[j](RA.top_basis[(j, k)][b])
    monos = Bj.graded_basis(k)
    pos = {m: i for i, m in enumerate(monos)}
    vec = [B.base.zero()] * len(monos)
    for m, c in image.terms.items():
        vec[pos[m]] = Polynomial(B.base.ring, {e[:len(B.base.variables)]: a for e, a in c.terms.items()}, True)
        if any(any(e[len(B.base.variables):]) for e in c.terms):
            raise AlgebraError("image of a top-component element left the negative subalgebra")
    basis_cols = RB.top_columns.get((j, k)) if j else None
    if j == 0:
        basis_cols = [[B.base.one() if i == t else B.base.zero() for i in range(len(monos))]
                      for t in range(len(monos))]
    lk = ("lifter", j, k)
    if lk not in lifters:
        lifters[lk] = Lifter([list(c) for c in basis_cols], B.base, len(monos)) if basis_cols else None
    lf = lifters[lk]
    if lf is None:
        if any(vec):
            raise AlgebraError("top component of the target is zero but the image is not")
        coeffs = []
    else:
        coeffs = lf.lift(vec)
        if coeffs is None:
            raise AlgebraError("image of a top-component element is not in the target's top component")
        coeffs = [B.base.reduce(c) for c in coeffs]
    lifters[key] = coeffs
    return coeffs


def naturality_failures(maps: list[DgMorphism], RA: Resolution, RB: Resolution) -> list[dict]:
    """Squares Γ(φ)∘α* = α*∘Γ(φ) for every face and degeneracy, plus dg-compatibility."""
    out = []
    N = len(maps) - 1
    for n, f in enumerate(maps):
        chk = f.check()
        for fl in chk.failures:
            out.append({"square": "dg", "level": n, **fl})
    ops = [("face", n, i, n - 1) for n in range(1, N + 1) for i in range(n + 1)]
    ops += [("degeneracy", n, j, n + 1) for n in range(N) for j in range(n + 1)]
    for kind, n, i, m in ops:
        a = RA.face(n, i) if kind == "face" else RA.degeneracy(n, i)
        b = RB.face(n, i) if kind == "face" else RB.degeneracy(n, i)
        lhs, rhs = maps[m].compose(a), b.compose(maps[n])
        for sym in RA.levels[n].symbols():
            if lhs.images[sym] != rhs.images[sym]:
                out.append({"square": kind, "level": n, "index": i, "symbol": sym,
                            "lhs": lhs.images[sym].to_string(), "rhs": rhs.images[sym].to_string()})
                break
    return out
