"""Matching objects, latching objects and skeleta of a simplicial dg algebra.

A matching object or skeleton is kept as a finite limit: one factor per
j-dimensional face of the n-simplex, glued along the (j-1)-faces.  Its
elements are tuples of elements of A_j.  Exact membership is decided
symbolically; dimensions are computed on fibers, where the base variables
of A_0 take rational values and the extra degree-0 variables of higher
levels stay formal (truncated by polynomial degree).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Mapping, Sequence

from ..dgalg.algebra import DgAlgebra, GradedElement
from ..dgalg.morphism import DgMorphism
from .simplicial import DeltaMap, SimplicialDgAlgebra

Key = tuple
SparseVec = dict


# -- sparse exact linear algebra ------------------------------------------------

class SparseSpan:
    """Echelon basis of a subspace of a coordinate space with sortable keys."""

    def __init__(self):
        self.rows: dict[Key, SparseVec] = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: SparseVec) -> SparseVec:
        v = dict(v)
        while True:
            hits = [k for k in v if k in self.rows]
            if not hits:
                return v
            k = min(hits)
            c = v[k]
            for kk, cc in self.rows[k].items():
                val = v.get(kk, 0) - c * cc
                if val:
                    v[kk] = val
                else:
                    v.pop(kk, None)

    def add(self, v: SparseVec) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        inv = 1 / Fraction(r[p])
        self.rows[p] = {k: c * inv for k, c in r.items()}
        return True

    def contains(self, v: SparseVec) -> bool:
        return not self.reduce(v)


def nullspace_sparse(columns: Sequence[SparseVec]) -> list[list[Fraction]]:
    """Kernel of the matrix whose j-th column is columns[j]."""
    from ..exactalg.linalg import nullspace
    keys = sorted({k for c in columns for k in c})
    if not keys:
        return [[Fraction(int(i == j)) for i in range(len(columns))] for j in range(len(columns))]
    pos = {k: i for i, k in enumerate(keys)}
    rows = [[Fraction(0)] * len(columns) for _ in keys]
    for j, c in enumerate(columns):
        for k, v in c.items():
            rows[pos[k]][j] = Fraction(v)
    return nullspace(rows, len(columns))


# -- fibers -------------------------------------------------------------------------

def fiber_coordinates(el: GradedElement, fixed: Sequence[str], point: Mapping[str, Fraction]) -> SparseVec:
    """{(exponents of the formal variables, monomial): value} with fixed variables evaluated."""
    names = el.alg.base.variables
    fixed_idx = [i for i, v in enumerate(names) if v in fixed]
    free_idx = [i for i, v in enumerate(names) if v not in fixed]
    vals = [Fraction(point[names[i]]) for i in fixed_idx]
    out: SparseVec = {}
    for m, c in el.terms.items():
        for e, a in c.terms.items():
            val = Fraction(a)
            for i, x in zip(fixed_idx, vals):
                if e[i]:
                    val *= x ** e[i]
            if not val:
                continue
            key = (tuple(e[i] for i in free_idx), m)
            s = out.get(key, 0) + val
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def formal_monomials(nfree: int, d: int) -> list[tuple[int, ...]]:
    out = []

    def rec(i, left, cur):
        if i == nfree:
            out.append(tuple(cur))
            return
        for a in range(left + 1):
            cur.append(a)
            rec(i + 1, left - a, cur)
            cur.pop()

    rec(0, d, [])
    out.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    return out


def iter_monomials(alg: DgAlgebra, k: int) -> Iterator[tuple]:
    """Generator monomials of degree k, lazily (same set as ``graded_basis``)."""
    n = len(alg.generators)
    cur = [0] * n

    def rec(i, remaining):
        if remaining == 0:
            yield tuple(cur)
            return
        if i == n:
            return
        d = alg.degrees[i]
        top = 1 if alg.odd[i] else remaining // d
        for a in range(top, -1, -1):
            if a * d < remaining:
                continue
            cur[i] = a
            yield from rec(i + 1, remaining - a * d)
        cur[i] = 0

    yield from rec(0, k)


def fiber_basis(alg: DgAlgebra, k: int, fixed: Sequence[str], d: int) -> Iterator[tuple[tuple, tuple]]:
    """Pairs (formal exponent, monomial) spanning the F-degree ≤ d part of the fiber of A^k."""
    nfree = sum(1 for v in alg.base.variables if v not in fixed)
    fmon = formal_monomials(nfree, d)
    for m in iter_monomials(alg, k):
        for e in fmon:
            yield e, m


def basis_element(alg: DgAlgebra, fixed: Sequence[str], e: tuple, m: tuple) -> GradedElement:
    names = alg.base.variables
    free = [v for v in names if v not in fixed]
    full = [0] * len(names)
    idx = {v: i for i, v in enumerate(names)}
    for v, a in zip(free, e):
        full[idx[v]] = a
    from ..exactalg.polynomial import Polynomial
    coeff = Polynomial(alg.base.ring, {tuple(full): Fraction(1)}, True)
    return alg.monomial(m, coeff)


# -- face composites --------------------------------------------------------------

def face_composite(S: SimplicialDgAlgebra, n: int, mu: DeltaMap) -> DgMorphism | None:
    """μ*: A_n → A_q for an injection μ: [q] → [n], as a composite of faces (None for μ = id)."""
    missing = sorted(set(range(n + 1)) - set(mu), reverse=True)
    out = None
    level = n
    for i in missing:
        f = S.faces[level][i]
        out = f if out is None else f.compose(out)
        level -= 1
    return out


@dataclass
class FaceLimit:
    """Limit of A_j over the j-faces of Δ_n, glued along their (j-1)-faces."""

    S: SimplicialDgAlgebra
    n: int
    j: int

    @property
    def faces(self) -> list[DeltaMap]:
        return [tuple(c) for c in combinations(range(self.n + 1), self.j + 1)]

    @property
    def factor(self) -> DgAlgebra:
        return self.S.levels[self.j]

    def gluing(self) -> list[tuple[int, int, DgMorphism | None, DgMorphism | None]]:
        """(a, b, ρ_a*, ρ_b*): factors a < b agree after restriction to their common face."""
        out = []
        if self.j == 0:
            return out
        fs = self.faces
        for a in range(len(fs)):
            for b in range(a + 1, len(fs)):
                common = sorted(set(fs[a]) & set(fs[b]))
                if len(common) != self.j:
                    continue
                ra = tuple(fs[a].index(v) for v in common)
                rb = tuple(fs[b].index(v) for v in common)
                out.append((a, b, face_composite(self.S, self.j, ra), face_composite(self.S, self.j, rb)))
        return out

    def restrict(self, mu: DeltaMap, level: int, el: GradedElement) -> GradedElement:
        f = face_composite(self.S, level, mu)
        return el if f is None else f(el)

    def canonical(self, level: int, el: GradedElement) -> list[GradedElement]:
        """Components of the canonical image of an element of A_level (level ≥ n)."""
        if level != self.n:
            raise ValueError("canonical map starts at A_n")
        return [self.restrict(mu, self.n, el) for mu in self.faces]

    def compatible(self, tup: Sequence[GradedElement]) -> bool:
        for a, b, ra, rb in self.gluing():
            xa = tup[a] if ra is None else ra(tup[a])
            xb = tup[b] if rb is None else rb(tup[b])
            if xa != xb:
                return False
        return True

    def universal_failures(self) -> list[str]:
        """Symbols of A_n whose canonical tuple is not compatible."""
        A = self.S.levels[self.n]
        return [s for s in A.symbols() if not self.compatible(self.canonical(self.n, A.gen(s)))]

    # -- fibers ---------------------------------------------------------
    def fiber_space(self, k: int, point: Mapping[str, Fraction], d: int) -> list[SparseVec]:
        """Basis of the F-degree ≤ d part of the fiber of the limit in degree k."""
        fixed = self.S.levels[0].base.variables
        L = self.factor
        basis = list(fiber_basis(L, k, fixed, d))
        nf = len(self.faces)
        if not basis:
            return []
        glue = self.gluing()
        if not glue:
            return [{(a,) + key: Fraction(1)} for a in range(nf) for key in basis]
        images = {}
        for key in basis:
            el = basis_element(L, fixed, *key)
            images[key] = el
        columns = []
        for a in range(nf):
            for key in basis:
                col: SparseVec = {}
                for g, (fa, fb, ra, rb) in enumerate(glue):
                    if a == fa:
                        img = images[key] if ra is None else ra(images[key])
                        sign = 1
                    elif a == fb:
                        img = images[key] if rb is None else rb(images[key])
                        sign = -1
                    else:
                        continue
                    for kk, v in fiber_coordinates(img, fixed, point).items():
                        col[(g,) + kk] = col.get((g,) + kk, 0) + sign * v
                columns.append({k2: v for k2, v in col.items() if v})
        labels = [(a,) + key for a in range(nf) for key in basis]
        out = []
        for vec in nullspace_sparse(columns):
            out.append({labels[i]: c for i, c in enumerate(vec) if c})
        return out

    def fiber_dimension(self, k: int, point: Mapping[str, Fraction], d: int = 0) -> int:
        return len(self.fiber_space(k, point, d))


def matching_object(S: SimplicialDgAlgebra, n: int) -> FaceLimit:
    if not 1 <= n <= S.top:
        raise ValueError(f"matching object needs 1 <= n <= {S.top}")
    return FaceLimit(S, n, n - 1)


def skeleton(S: SimplicialDgAlgebra, n1: int, j: int) -> FaceLimit:
    """sk^{n1}_j: the limit over the j-faces of Δ_{n1}."""
    if not 0 <= j <= n1 - 1:
        raise ValueError("skeleton needs 0 <= j <= n")
    if j > S.top:
        raise ValueError("skeleton needs level j to exist")
    return FaceLimit(S, n1, j)


@dataclass
class LatchingObject:
    """Sub-dg-algebra of A_n generated by degenerate generators, with its inclusion."""

    algebra: DgAlgebra
    inclusion: DgMorphism
    degenerate: tuple[str, ...]


class UnsupportedLatching(ValueError):
    pass


def latching_object(S: SimplicialDgAlgebra, n: int) -> LatchingObject:
    if n == 0:
        A = S.levels[0]
        return LatchingObject(A, DgMorphism(A, A, {}, check=False), A.symbols())
    if not 1 <= n <= S.top:
        raise ValueError(f"latching object needs 0 <= n <= {S.top}")
    An = S.levels[n]
    degenerate: set[str] = set()
    for j, s in enumerate(S.degeneracies[n - 1]):
        for sym, img in s.images.items():
            from ..dgalg.constructions import _bare_symbol
            name = _bare_symbol(img)
            if name is None:
                if img.is_zero() or not img.terms:
                    continue
                if set(img.terms) == {img.alg.unit_mono}:
                    continue  # base polynomial in old variables
                raise UnsupportedLatching("degeneracy is not a generator inclusion")
            degenerate.add(name)
    degenerate |= set(S.levels[0].base.variables)
    base_vars = [v for v in An.base.variables if v in degenerate]
    gens = [g for g in An.generators if g.name in degenerate]
    from ..exactalg.base import BaseRing
    keep = set(base_vars)
    rels = [r for r in An.base.relations if r.variables_used() <= keep]
    ring0 = BaseRing(tuple(base_vars))
    base = BaseRing(tuple(base_vars), tuple(ring0.parse(str(r)) for r in rels))
    diffs = {}
    for g in gens:
        dg = An.differential(g.name)
        used = {An.names[i] for m in dg.terms for i, a in enumerate(m) if a}
        vars_used = set().union(*(c.variables_used() for c in dg.terms.values())) if dg.terms else set()
        if not used <= degenerate or not vars_used <= keep:
            raise UnsupportedLatching(f"differential of {g.name} leaves the degenerate part")
        diffs[g.name] = dg.to_string()
    L = DgAlgebra(base, [(g.name, g.degree) for g in gens], diffs)
    return LatchingObject(L, DgMorphism(L, An, {}), tuple(sorted(degenerate)))
