"""Syzygies, lifting and subquotient presentations over a BaseRing.

A column is a list of polynomials of fixed length (the rank of the ambient
free module).  Everything is computed modulo the base relations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .base import BaseRing
from .groebner import VecBasis, buchberger, vec_from_polys, vec_to_polys
from .polynomial import Polynomial

Column = list  # list[Polynomial]


class InvariantError(RuntimeError):
    """An internal consistency condition failed (for example im ⊄ ker)."""


def reduce_column(col: Sequence[Polynomial], base: BaseRing) -> Column:
    return [base.reduce(base.coerce(c)) for c in col]


def is_zero_column(col: Sequence[Polynomial]) -> bool:
    return all(not c for c in col)


def _relation_vecs(base: BaseRing, positions: Sequence[int]) -> list[dict]:
    out = []
    for g in base.gb:
        for p in positions:
            out.append(vec_from_polys([g], p))
    return out


def module_basis(cols: Sequence[Column], base: BaseRing, rank: int) -> VecBasis:
    """Reduced Gröbner basis of span(cols) + J·ℚ[x̄]^rank."""
    gens = [vec_from_polys(c) for c in cols]
    gens += _relation_vecs(base, range(rank))
    return buchberger(gens, base.ring)


def module_normal_form(col: Column, basis: VecBasis, base: BaseRing, rank: int) -> Column:
    return vec_to_polys(basis.reduce(vec_from_polys(col)), base.ring, rank)


def _columns_of(basis: VecBasis, base: BaseRing, rank: int) -> list[Column]:
    return [vec_to_polys(v, base.ring, rank) for v in basis.elements]


# -- lifting ---------------------------------------------------------------------

@dataclass
class Lifter:
    """Expresses vectors as combinations of fixed generators via an augmented basis."""

    gens: list[Column]
    base: BaseRing
    rank: int
    basis: VecBasis = field(init=False)

    def __post_init__(self):
        r, m = self.rank, len(self.gens)
        aug = []
        for i, g in enumerate(self.gens):
            v = vec_from_polys(g)
            v[(r + i, (0,) * self.base.ring.nvars)] = Fraction(1)
            aug.append(v)
        aug += _relation_vecs(self.base, range(r + m))
        self.basis = buchberger(aug, self.base.ring)

    def lift(self, v: Column) -> list[Polynomial] | None:
        rem = self.basis.reduce(vec_from_polys(v))
        if any(p < self.rank for p, _ in rem):
            return None
        coeffs = vec_to_polys(rem, self.base.ring, len(self.gens), self.rank)
        return [-c for c in coeffs]

    def contains(self, v: Column) -> bool:
        rem = self.basis.reduce(vec_from_polys(v))
        return not any(p < self.rank for p, _ in rem)


def combine(coeffs: Sequence[Polynomial], gens: Sequence[Column], base: BaseRing, rank: int) -> Column:
    out = [base.zero() for _ in range(rank)]
    for c, g in zip(coeffs, gens):
        if not c:
            continue
        for p in range(rank):
            if g[p]:
                out[p] = out[p] + c * g[p]
    return reduce_column(out, base)


def lift(v: Column, gens: Sequence[Column], base: BaseRing, rank: int | None = None) -> list[Polynomial] | None:
    """Cofactors c with Σ c_i gens_i ≡ v (mod J), verified exactly, or None."""
    rank = len(v) if rank is None else rank
    if not gens:
        return [] if is_zero_column(reduce_column(v, base)) else None
    c = Lifter([list(g) for g in gens], base, rank).lift(list(v))
    if c is None:
        return None
    check = combine(c, gens, base, rank)
    if check != reduce_column(v, base):
        raise InvariantError("lift failed exact verification")
    return [base.reduce(x) for x in c]


def unit_ideal_certificate(gens: Sequence[Polynomial], base: BaseRing) -> list[Polynomial] | None:
    """Cofactors g with Σ g_i f_i ≡ 1 modulo the base relations, or None when 1 ∉ ideal."""
    gens = [base.coerce(f) for f in gens]
    c = lift([base.one()], [[f] for f in gens], base, 1)
    if c is None:
        return None
    total = base.zero()
    for g, f in zip(c, gens):
        total = total + g * f
    if base.reduce(total - 1):
        raise InvariantError("unit certificate failed verification")
    return c


# -- syzygies ----------------------------------------------------------------------

def _constant(p: Polynomial) -> Fraction | None:
    if p and p.is_constant():
        return p.constant_value()
    return None


def syzygies(cols: Sequence[Column], base: BaseRing, rank: int | None = None) -> list[Column]:
    """Generators of {a : Σ a_i cols_i ≡ 0 mod J}, as a reduced monic Gröbner basis in R^m."""
    m = len(cols)
    if m == 0:
        return []
    if rank is None:
        rank = len(cols[0])
    if any(len(c) != rank for c in cols):
        raise ValueError("dimension mismatch among columns")
    if base.is_zero_ring():
        return []
    mat = [reduce_column(c, base) for c in cols]
    zero = base.zero()
    # transformation: original coordinates = T · reduced coordinates
    trans = [[base.one() if i == j else zero for i in range(m)] for j in range(m)]  # trans[j] = column j of T
    active = list(range(m))
    rows = list(range(rank))
    progress = True
    while progress:
        progress = False
        for i in active:
            for p in rows:
                c = _constant(mat[i][p])
                if c is None:
                    continue
                for j in active:
                    if j == i or not mat[j][p]:
                        continue
                    f = mat[j][p] * (1 / c)
                    mat[j] = [base.reduce(a - f * b) if b else a for a, b in zip(mat[j], mat[i])]
                    trans[j] = [base.reduce(a - f * b) if b else a for a, b in zip(trans[j], trans[i])]
                active.remove(i)
                rows.remove(p)
                progress = True
                break
            if progress:
                break
    reduced = [[mat[j][p] for p in rows] for j in active]
    if rows:
        kernel = _kernel_by_elimination(reduced, base, len(rows))
    else:
        kernel = [[base.one() if a == b else zero for b in range(len(active))] for a in range(len(active))]
    out = []
    for k in kernel:
        vec = [zero] * m
        for coeff, j in zip(k, active):
            if coeff:
                vec = [a + coeff * b if b else a for a, b in zip(vec, trans[j])]
        out.append(reduce_column(vec, base))
    out = [c for c in out if not is_zero_column(c)]
    if not out:
        return []
    gb = module_basis(out, base, m)
    result = []
    for v in gb.elements:
        col = reduce_column(vec_to_polys(v, base.ring, m), base)
        if not is_zero_column(col):  # elements of J·R^m vanish in the quotient
            result.append(col)
    for s in result:
        if not is_zero_column(combine(s, cols, base, rank)):
            raise InvariantError("syzygy failed verification")
    return result


def _kernel_by_elimination(cols: list[Column], base: BaseRing, rank: int) -> list[Column]:
    m = len(cols)
    lifter = Lifter(cols, base, rank)
    out = []
    for v in lifter.basis.elements:
        if all(p >= rank for p, _ in v):
            out.append(vec_to_polys(v, base.ring, m, rank))
    return out


# -- subquotients -------------------------------------------------------------------

@dataclass
class ModulePresentation:
    """Module with ``rank`` generators and relation columns over ``base``.

    ``generators`` (optional) are ambient vectors representing the generators;
    ``image`` spans the submodule that was divided out.
    """

    base: BaseRing
    rank: int
    relations: list[Column]
    generators: list[Column] = field(default_factory=list)
    image: list[Column] = field(default_factory=list)
    ambient_rank: int = 0

    def is_zero(self) -> bool:
        return self.rank == 0

    def is_free(self) -> bool:
        return not self.relations

    def relation_strings(self) -> list[str]:
        if self.rank == 1:
            return [str(r[0]) for r in self.relations]
        return ["(" + ", ".join(str(x) for x in r) + ")" for r in self.relations]

    def coordinates(self, v: Column) -> list[Polynomial] | None:
        """Coordinates of an ambient cocycle on the generators, modulo the image."""
        gens = self.generators + self.image
        c = lift(v, gens, self.base, self.ambient_rank)
        if c is None:
            return None
        return c[: self.rank]

    def contains_relation(self, coords: Column) -> bool:
        """Whether a coordinate vector is zero in the module."""
        if self.rank == 0:
            return True
        if not self.relations:
            return is_zero_column(reduce_column(coords, self.base))
        basis = module_basis(self.relations, self.base, self.rank)
        return is_zero_column(module_normal_form(list(coords), basis, self.base, self.rank))


def _prune(gens: list[Column], rels: list[Column], base: BaseRing) -> tuple[list[Column], list[Column]]:
    """Remove generators that a relation expresses through the others (unit pivot)."""
    changed = True
    while changed:
        changed = False
        for ri, r in enumerate(rels):
            for j, entry in enumerate(r):
                c = _constant(entry)
                if c is None:
                    continue
                new_rels = []
                for k, s in enumerate(rels):
                    if k == ri:
                        continue
                    if s[j]:
                        f = s[j] * (1 / c)
                        s = [base.reduce(a - f * b) if b else a for a, b in zip(s, r)]
                    s = s[:j] + s[j + 1:]
                    if not is_zero_column(s):
                        new_rels.append(s)
                rels = new_rels
                gens = gens[:j] + gens[j + 1:]
                changed = True
                break
            if changed:
                break
    return gens, rels


def module_subquotient(ker_gens: Sequence[Column], im_gens: Sequence[Column], base: BaseRing,
                       ambient_rank: int | None = None) -> ModulePresentation:
    """Presentation of span(ker_gens)/span(im_gens) inside a free module."""
    ker_gens = [reduce_column(k, base) for k in ker_gens]
    im_gens = [reduce_column(i, base) for i in im_gens if not is_zero_column(reduce_column(i, base))]
    if ambient_rank is None:
        ambient_rank = len(ker_gens[0]) if ker_gens else (len(im_gens[0]) if im_gens else 0)
    ker_gens = [k for k in ker_gens if not is_zero_column(k)]
    if not ker_gens or base.is_zero_ring():
        if im_gens and not base.is_zero_ring():
            raise InvariantError("image is not contained in the kernel")
        return ModulePresentation(base, 0, [], [], list(im_gens), ambient_rank)
    s = len(ker_gens)
    rels = syzygies(ker_gens, base, ambient_rank)
    if im_gens:
        lifter = Lifter(ker_gens, base, ambient_rank)
        for v in im_gens:
            c = lifter.lift(v)
            if c is None:
                raise InvariantError("image is not contained in the kernel")
            rels.append(reduce_column(c, base))
    rels = [r for r in rels if not is_zero_column(r)]
    gens = list(ker_gens)
    while True:
        gens, rels = _prune(gens, rels, base)
        if not gens:
            return ModulePresentation(base, 0, [], [], list(im_gens), ambient_rank)
        if not rels:
            break
        basis = module_basis(rels, base, len(gens))
        cols = []
        for v in basis.elements:
            col = vec_to_polys(v, base.ring, len(gens))
            col = reduce_column(col, base)
            if not is_zero_column(col):
                cols.append(col)
        rels = cols
        if not any(_constant(e) is not None for r in rels for e in r):
            break
    return ModulePresentation(base, len(gens), rels, gens, list(im_gens), ambient_rank)
