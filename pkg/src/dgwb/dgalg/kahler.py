"""Relative Kähler differentials Ω_A(B) as a dg module and its acyclicity."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..exactalg.modules import module_subquotient, syzygies
from ..exactalg.polynomial import Polynomial
from .algebra import DgAlgebra, GradedElement
from .morphism import DgMorphism

# An element of the free module F on symbols dv: {(symbol index, monomial): coefficient}
FElem = dict


@dataclass
class KahlerReport:
    symbols: list[tuple[str, int]]
    depth: int
    ranks: dict[int, int] = field(default_factory=dict)
    relations: dict[int, list[str]] = field(default_factory=dict)

    @property
    def acyclic(self) -> bool:
        return all(r == 0 for r in self.ranks.values())

    def to_dict(self) -> dict:
        return {"acyclic": self.acyclic, "depth": self.depth,
                "symbols": [{"name": f"d{n}", "degree": d} for n, d in self.symbols],
                "cohomology_ranks": {str(k): v for k, v in sorted(self.ranks.items(), reverse=True)},
                "relations": {str(k): v for k, v in sorted(self.relations.items(), reverse=True)}}


class KahlerModule:
    """Free graded B-module on dv for every variable and generator of B, with D(dv) = d(δv)."""

    def __init__(self, B: DgAlgebra):
        self.B = B
        self.symbols: list[tuple[str, int]] = [(v, 0) for v in B.base.variables] + \
            [(g.name, g.degree) for g in B.generators]
        self.sym_index = {n: i for i, (n, _) in enumerate(self.symbols)}
        self._dcache: dict = {}
        self._Dsym = [self.derive(B.gen(n).d()) if d < 0 else {} for n, d in self.symbols]

    # -- arithmetic ---------------------------------------------------
    def _add(self, acc: FElem, key, c: Polynomial) -> None:
        v = acc.get(key)
        v = c if v is None else v + c
        if v:
            acc[key] = v
        else:
            acc.pop(key, None)

    def mono_times(self, m, el: FElem) -> FElem:
        out: FElem = {}
        for (s, m2), c in el.items():
            sign, mm = self.B.mono_mul(m, m2)
            if sign:
                self._add(out, (s, mm), c if sign > 0 else -c)
        return out

    def derive_mono(self, m) -> FElem:
        hit = self._dcache.get(m)
        if hit is not None:
            return hit
        B = self.B
        first = next((i for i, a in enumerate(m) if a), None)
        out: FElem = {}
        if first is not None:
            rest = list(m)
            rest[first] -= 1
            rest = tuple(rest)
            g = B.gen_mono(first)
            sym = self.sym_index[B.names[first]]
            sign = -1 if (B.generators[first].odd and B.mono_degree(rest) % 2) else 1
            self._add(out, (sym, rest), B.base.const(sign))
            for key, c in self.mono_times(g, self.derive_mono(rest)).items():
                self._add(out, key, c)
        self._dcache[m] = out
        return out

    def derive(self, el: GradedElement) -> FElem:
        """The universal derivation d: B → F."""
        B = self.B
        out: FElem = {}
        for m, c in el.terms.items():
            for v in c.variables_used():
                self._add(out, (self.sym_index[v], m), c.derivative(v))
            for key, c2 in self.derive_mono(m).items():
                self._add(out, key, c * c2)
        return {k: B.base.reduce(c) for k, c in out.items() if B.base.reduce(c)}

    def D(self, el: FElem) -> FElem:
        B = self.B
        out: FElem = {}
        for (s, m), c in el.items():
            dm = B.mono_differential(m)
            for m2, c2 in dm.terms.items():
                self._add(out, (s, m2), c * c2)
            if self._Dsym[s]:
                sign = -1 if B.mono_degree(m) % 2 else 1
                for key, c3 in self.mono_times(m, self._Dsym[s]).items():
                    self._add(out, key, c * c3 if sign > 0 else -(c * c3))
        return {k: B.base.reduce(c) for k, c in out.items() if B.base.reduce(c)}

    # -- graded pieces -------------------------------------------------
    def basis(self, k: int) -> list[tuple[int, tuple]]:
        out = []
        for s, (_, d) in enumerate(self.symbols):
            for m in self.B.graded_basis(k - d):
                out.append((s, m))
        return out

    def column(self, el: FElem, k: int) -> list[Polynomial]:
        idx = {b: i for i, b in enumerate(self.basis(k))}
        col = [self.B.base.zero()] * len(idx)
        for key, c in el.items():
            col[idx[key]] = c
        return col


def relative_kahler(phi: DgMorphism, depth: int = 3) -> KahlerReport:
    """Cohomology of Ω_A(B) = F/R in degrees 0 … −depth."""
    B = phi.target
    F = KahlerModule(B)
    base = B.base
    rel_gens: list[tuple[FElem, int]] = []
    for n in phi.source.symbols():
        img = phi.images[n]
        dimg = F.derive(img)
        if dimg:
            rel_gens.append((dimg, phi.source.degree_of(n)))
    for r in base.relations:
        dr = F.derive(B.scalar(r))
        if dr:
            rel_gens.append((dr, 0))

    def rel_piece(k: int) -> list[list[Polynomial]]:
        cols = []
        for el, d in rel_gens:
            for m in B.graded_basis(k - d):
                prod = F.mono_times(m, el)
                prod = {key: base.reduce(c) for key, c in prod.items() if base.reduce(c)}
                if prod:
                    cols.append(F.column(prod, k))
        return cols

    report = KahlerReport(F.symbols, depth)
    for k in range(0, -depth - 1, -1):
        bk = F.basis(k)
        if not bk:
            report.ranks[k] = 0
            report.relations[k] = []
            continue
        rk = rel_piece(k)
        dcols = [F.column(F.D({b: base.one()}), k + 1) for b in bk]
        if F.basis(k + 1):
            r_next = rel_piece(k + 1)
            syz = syzygies(dcols + r_next, base, len(F.basis(k + 1)))
            cyc = [s[: len(bk)] for s in syz]
        else:
            cyc = [[base.one() if i == j else base.zero() for i in range(len(bk))] for j in range(len(bk))]
        cyc = cyc + rk
        im = [F.column(F.D({b: base.one()}), k) for b in F.basis(k - 1)] + rk
        pres = module_subquotient(cyc, im, base, len(bk))
        report.ranks[k] = pres.rank
        report.relations[k] = pres.relation_strings()
    return report
