"""Finitely presented degree-zero rings ℚ[x̄]/J."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .groebner import VecBasis, buchberger, vec_from_polys, vec_to_polys
from .polynomial import DEGREVLEX, MonomialOrder, PolyRing, Polynomial


@dataclass(frozen=True, eq=False)
class BaseRing:
    """ℚ[variables]/(relations) with its reduced Gröbner basis computed once.

    ``inverses`` records variables introduced as inverses (``t -> f`` with
    relation ``f*t - 1``); it is bookkeeping only and never changes the ideal.
    """

    variables: tuple[str, ...]
    relations: tuple[Polynomial, ...] = ()
    order: MonomialOrder = DEGREVLEX
    inverses: tuple[tuple[str, Polynomial], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        ring = PolyRing(self.variables, self.order)
        rels = []
        for r in self.relations:
            if isinstance(r, str):
                r = ring.parse(r)
            elif r.ring.names != ring.names:
                r = r.embed(ring)
            elif r.ring != ring:
                r = Polynomial(ring, r.terms, True)
            rels.append(r)
        object.__setattr__(self, "relations", tuple(rels))
        inv = tuple((t, f if f.ring == ring else f.embed(ring)) for t, f in self.inverses)
        object.__setattr__(self, "inverses", inv)

    @cached_property
    def ring(self) -> PolyRing:
        return PolyRing(self.variables, self.order)

    @cached_property
    def gb_vec(self) -> VecBasis:
        return buchberger((vec_from_polys([r]) for r in self.relations if r), self.ring)

    @cached_property
    def gb(self) -> tuple[Polynomial, ...]:
        return tuple(vec_to_polys(v, self.ring, 1)[0] for v in self.gb_vec.elements)

    # -- elements ------------------------------------------------------
    def reduce(self, f: Polynomial) -> Polynomial:
        if not self.gb_vec.elements or not f:
            return f
        return vec_to_polys(self.gb_vec.reduce(vec_from_polys([f])), self.ring, 1)[0]

    def is_zero(self, f: Polynomial) -> bool:
        return not self.reduce(f)

    def is_zero_ring(self) -> bool:
        return self.gb_vec.is_unit()

    def parse(self, text: str) -> Polynomial:
        return self.ring.parse(text)

    def var(self, name: str) -> Polynomial:
        return self.ring.var(name)

    def const(self, c) -> Polynomial:
        return self.ring.const(c)

    def zero(self) -> Polynomial:
        return self.ring.zero()

    def one(self) -> Polynomial:
        return self.ring.one()

    def coerce(self, f) -> Polynomial:
        if isinstance(f, (int, Fraction)):
            return self.ring.const(f)
        if isinstance(f, str):
            return self.parse(f)
        if f.ring.names != self.variables:
            return f.embed(self.ring)
        if f.ring != self.ring:
            return Polynomial(self.ring, f.terms, True)
        return f

    # -- derived rings -------------------------------------------------
    def with_relations(self, extra: Sequence[Polynomial]) -> "BaseRing":
        return BaseRing(self.variables, self.relations + tuple(self.coerce(e) for e in extra),
                        self.order, self.inverses)

    def with_variables(self, names: Sequence[str], relations: Sequence = (),
                       inverses: Sequence = ()) -> "BaseRing":
        """Adjoin fresh variables (appended) and extra relations written over the new ring."""
        clash = set(names) & set(self.variables)
        if clash:
            raise ValueError(f"variables already present: {sorted(clash)}")
        new = BaseRing(self.variables + tuple(names), (), self.order)
        rels = tuple(r.embed(new.ring) for r in self.relations)
        rels += tuple(new.coerce(r) for r in relations)
        inv = tuple((t, f.embed(new.ring)) for t, f in self.inverses)
        inv += tuple((t, new.coerce(f)) for t, f in inverses)
        return BaseRing(new.variables, rels, self.order, inv)

    def all_inverses(self) -> dict[str, Polynomial]:
        """Recorded inverses plus relations of the shape f·t − 1 with t absent from f.

        Later variables are tried first, since adjoined inverses are appended.
        """
        out = dict(self.inverses)
        for r in self.relations:
            used = r.variables_used()
            for t in reversed(self.variables):
                if t not in used or t in out:
                    continue
                f = r.derivative(t)
                if t in f.variables_used():
                    continue
                if r - f * self.var(t) == -self.one():
                    out[t] = f
                    break
        return out

    def same_ideal(self, other: "BaseRing") -> bool:
        """Equal variable lists and equal ideals (compared through reduced bases)."""
        if self.variables != other.variables:
            return False
        a = {tuple(sorted(p.terms.items())) for p in self.gb}
        b = {tuple(sorted(other.coerce(p).terms.items())) for p in other.gb}
        return a == b

    def evaluate(self, f: Polynomial, point: Mapping[str, Fraction]) -> Fraction:
        return f.evaluate(point)

    def point_is_valid(self, point: Mapping[str, Fraction]) -> bool:
        return all(r.evaluate(point) == 0 for r in self.relations)

    def structural_key(self) -> tuple:
        return (self.variables, tuple(str(r) for r in self.relations))

    def __repr__(self):
        rels = ", ".join(str(r) for r in self.relations)
        return f"BaseRing({list(self.variables)}; {rels})"


def polynomial_ring(*names: str) -> BaseRing:
    return BaseRing(tuple(names))
