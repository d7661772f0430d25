"""Buchberger's algorithm for ideals and submodules of free modules.

Module elements are sparse dicts ``{(position, exponent): coefficient}``.
Terms are compared position-over-term: a smaller position is larger, so the
first coordinate dominates.  An ideal is the rank-one case.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .polynomial import ContextError, Exponent, PolyRing, Polynomial

Term = tuple[int, Exponent]
Vec = dict  # Term -> Fraction


# -- vector helpers ------------------------------------------------------------

def vec_from_polys(polys: Sequence[Polynomial], offset: int = 0) -> Vec:
    out = {}
    for p, f in enumerate(polys):
        for e, c in f.terms.items():
            out[(p + offset, e)] = c
    return out


def vec_to_polys(v: Vec, ring: PolyRing, rank: int, offset: int = 0) -> list[Polynomial]:
    parts: list[dict] = [{} for _ in range(rank)]
    for (p, e), c in v.items():
        q = p - offset
        if 0 <= q < rank:
            parts[q][e] = c
    return [Polynomial(ring, d, True) for d in parts]


def vec_add_scaled(v: Vec, w: Vec, c: Fraction, shift: Exponent | None = None) -> None:
    """In place: v += c * x^shift * w."""
    for (p, e), d in w.items():
        if shift is not None:
            e = tuple(a + b for a, b in zip(e, shift))
        t = (p, e)
        val = v.get(t, 0) + c * d
        if val:
            v[t] = val
        else:
            v.pop(t, None)


def vec_scale(v: Vec, c: Fraction) -> Vec:
    return {t: d * c for t, d in v.items()}


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


class TermOrder:
    """Position-over-term key on module terms; flat int tuples so they negate cleanly."""

    def __init__(self, ring: PolyRing):
        self.ring = ring
        self._key = ring.key
        self._cache: dict[Term, tuple] = {}

    def key(self, t: Term) -> tuple:
        k = self._cache.get(t)
        if k is None:
            k = (-t[0], *self._key(t[1]))
            self._cache[t] = k
        return k

    def neg(self, t: Term) -> tuple:
        return tuple(-x for x in self.key(t))

    def lead(self, v: Vec) -> Term:
        return max(v, key=self.key)


@dataclass
class VecBasis:
    """A Gröbner basis of a submodule together with lookup structures."""

    ring: PolyRing
    elements: list[Vec] = field(default_factory=list)

    def __post_init__(self):
        self.order = TermOrder(self.ring)
        self._index()

    def _index(self):
        self.leads: list[Term] = []
        self.by_pos: dict[int, list[int]] = {}
        for i, v in enumerate(self.elements):
            t = self.order.lead(v)
            self.leads.append(t)
            self.by_pos.setdefault(t[0], []).append(i)

    def is_unit(self) -> bool:
        """True when the basis contains a constant in position 0 (unit ideal case)."""
        zero = (0,) * self.ring.nvars
        return any(t == (0, zero) for t in self.leads)

    def reduce(self, v: Vec, full: bool = True) -> Vec:
        return reduce_vec(v, self.elements, self.leads, self.by_pos, self.order, full)


def reduce_vec(v: Vec, elements, leads, by_pos, order: TermOrder, full: bool = True) -> Vec:
    """Division of ``v`` by the basis; returns the remainder."""
    v = dict(v)
    rem: Vec = {}
    heap = [(order.neg(t), t) for t in v]
    heapq.heapify(heap)
    while heap:
        _, t = heapq.heappop(heap)
        c = v.get(t)
        if c is None:
            continue
        pos, e = t
        hit = None
        for i in by_pos.get(pos, ()):
            if _divides(leads[i][1], e):
                hit = i
                break
        if hit is None:
            rem[t] = c
            del v[t]
            if not full:
                rem.update(v)
                return rem
            continue
        g = elements[hit]
        lt = leads[hit]
        factor = -c / g[lt]
        shift = _sub(e, lt[1])
        for (p2, e2), d in g.items():
            e3 = tuple(a + b for a, b in zip(e2, shift))
            t3 = (p2, e3)
            old = v.get(t3)
            val = (old or 0) + factor * d
            if val:
                v[t3] = val
                if old is None and t3 not in rem:
                    heapq.heappush(heap, (order.neg(t3), t3))
            elif old is not None:
                del v[t3]
    return rem


def _monic(v: Vec, order: TermOrder) -> Vec:
    lc = v[order.lead(v)]
    return v if lc == 1 else vec_scale(v, 1 / lc)


class BudgetExceeded(RuntimeError):
    """The configured number of S-pair reductions was used up."""


def buchberger(gens: Iterable[Vec], ring: PolyRing, budget: int | None = None) -> VecBasis:
    """Reduced Gröbner basis (monic elements) of the submodule spanned by ``gens``.

    ``budget`` caps the number of S-pair reductions; exceeding it raises
    :class:`BudgetExceeded`.
    """
    spent = 0
    order = TermOrder(ring)
    elements: list[Vec] = []
    leads: list[Term] = []
    by_pos: dict[int, list[int]] = {}
    pairs: list = []
    live: set[int] = set()

    def add(v: Vec):
        v = _monic(v, order)
        idx = len(elements)
        lt = order.lead(v)
        for j in by_pos.get(lt[0], ()):
            if j not in live:
                continue
            lj = leads[j]
            m = _lcm(lt[1], lj[1])
            if ring.nvars and all(min(a, b) == 0 for a, b in zip(lt[1], lj[1])) and _single_term_pos(v, elements[j]):
                continue  # product criterion, valid when both live in one position
            heapq.heappush(pairs, (sum(m), order.neg((lt[0], m)), j, idx))
        elements.append(v)
        leads.append(lt)
        by_pos.setdefault(lt[0], []).append(idx)
        live.add(idx)
        # drop elements whose lead is a multiple of the new one
        for j in list(live):
            if j != idx and leads[j][0] == lt[0] and _divides(lt[1], leads[j][1]):
                live.discard(j)

    done: set[tuple[int, int]] = set()
    for g in gens:
        if not g:
            continue
        r = reduce_vec(g, elements, leads, _live_pos(by_pos, live), order)
        if r:
            add(r)

    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        li, lj = leads[i], leads[j]
        m = _lcm(li[1], lj[1])
        if _chain_skip(i, j, m, li[0], leads, by_pos, done):
            continue
        spent += 1
        if budget is not None and spent > budget:
            raise BudgetExceeded(f"more than {budget} S-pair reductions")
        gi, gj = elements[i], elements[j]
        s: Vec = {}
        vec_add_scaled(s, gi, 1 / gi[li], _sub(m, li[1]))
        vec_add_scaled(s, gj, -1 / gj[lj], _sub(m, lj[1]))
        r = reduce_vec(s, elements, leads, _live_pos(by_pos, live), order) if s else {}
        done.add((i, j))
        if r:
            add(r)

    return _interreduce([elements[i] for i in sorted(live)], ring, order)


def _single_term_pos(a: Vec, b: Vec) -> bool:
    pa = {p for p, _ in a}
    pb = {p for p, _ in b}
    return len(pa) == 1 and pa == pb


def _live_pos(by_pos, live):
    return {p: [i for i in idx if i in live] for p, idx in by_pos.items()}


def _chain_skip(i, j, m, pos, leads, by_pos, done) -> bool:
    for k in by_pos.get(pos, ()):
        if k == i or k == j:
            continue
        if not _divides(leads[k][1], m):
            continue
        a = (min(i, k), max(i, k))
        b = (min(j, k), max(j, k))
        if a in done and b in done:
            return True
    return False


def _interreduce(elements: list[Vec], ring: PolyRing, order: TermOrder) -> VecBasis:
    leads = [order.lead(v) for v in elements]
    keep = []
    for i, v in enumerate(elements):
        li = leads[i]
        dominated = False
        for j in range(len(elements)):
            if j == i or leads[j][0] != li[0] or not _divides(leads[j][1], li[1]):
                continue
            if leads[j] != li or j < i:
                dominated = True
                break
        if not dominated:
            keep.append(v)
    out = []
    for i, v in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        ol = [order.lead(w) for w in others]
        bp: dict[int, list[int]] = {}
        for k, t in enumerate(ol):
            bp.setdefault(t[0], []).append(k)
        lt = order.lead(v)
        head = {lt: v[lt]}
        tail = {t: c for t, c in v.items() if t != lt}
        r = reduce_vec(tail, others, ol, bp, order)
        r.update(head)
        out.append(_monic(r, order))
    out.sort(key=lambda w: order.key(order.lead(w)), reverse=True)
    return VecBasis(ring, out)


# -- polynomial-level API ------------------------------------------------------

def _check_ring(polys: Sequence[Polynomial], ring: PolyRing | None) -> PolyRing:
    rings = {p.ring.names for p in polys}
    if len(rings) > 1:
        raise ContextError(f"mixed variable registries: {sorted(rings)}")
    if ring is None:
        if not polys:
            raise ValueError("ring required for an empty generator list")
        return polys[0].ring
    if rings and rings != {ring.names}:
        raise ContextError("generators do not live in the requested ring")
    return ring


def groebner_basis(gens: Sequence[Polynomial], ring: PolyRing | None = None) -> list[Polynomial]:
    """Reduced monic Gröbner basis of the ideal generated by ``gens``."""
    ring = _check_ring(gens, ring)
    basis = buchberger((vec_from_polys([g]) for g in gens if g), ring)
    return [vec_to_polys(v, ring, 1)[0] for v in basis.elements]


def normal_form(f: Polynomial, basis: Sequence[Polynomial]) -> Polynomial:
    """Remainder of ``f`` on division by ``basis`` (assumed to be a Gröbner basis)."""
    ring = f.ring
    _check_ring(list(basis) + [f], ring)
    vb = VecBasis(ring, [vec_from_polys([g]) for g in basis if g])
    return vec_to_polys(vb.reduce(vec_from_polys([f])), ring, 1)[0]


def divide(f: Polynomial, divisors: Sequence[Polynomial]) -> tuple[list[Polynomial], Polynomial]:
    """Multivariate division: quotients q and remainder r with f = Σ q_i g_i + r.

    No term of r is divisible by a leading term of any g_i.
    """
    ring = f.ring
    _check_ring(list(divisors) + [f], ring)
    quots = [ring.zero() for _ in divisors]
    leads = [g.leading_term() if g else None for g in divisors]
    rem = ring.zero()
    p = f
    while p:
        e, c = p.leading_term()
        for i, lt in enumerate(leads):
            if lt is None:
                continue
            le, lc = lt
            if all(a >= b for a, b in zip(e, le)):
                shift = tuple(a - b for a, b in zip(e, le))
                q = c / lc
                quots[i] = quots[i] + Polynomial(ring, {shift: q})
                p = p - divisors[i].mul_term(shift, q)
                break
        else:
            lead = Polynomial(ring, {e: c})
            rem = rem + lead
            p = p - lead
    return quots, rem
