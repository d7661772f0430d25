"""Morphisms of dg algebras given on base variables and generators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..exactalg.polynomial import Polynomial
from .algebra import AlgebraError, DgAlgebra, GradedElement


@dataclass
class MorphismCheck:
    ok: bool
    failures: list[dict] = field(default_factory=list)


class DgMorphism:
    """Unital degree-0 map; symbols missing from ``images`` map to the same name in the target."""

    def __init__(self, source: DgAlgebra, target: DgAlgebra, images: Mapping[str, object] | None = None,
                 check: bool = True):
        self.source = source
        self.target = target
        imgs: dict[str, GradedElement] = {}
        images = dict(images or {})
        for name in source.symbols():
            raw = images.pop(name, None)
            if raw is None:
                try:
                    el = target.gen(name)
                except KeyError:
                    raise AlgebraError(f"no image given for {name}") from None
            elif isinstance(raw, str):
                el = target.parse(raw)
            elif isinstance(raw, GradedElement):
                el = raw if raw.alg is target else target.element_from(raw)
            else:
                el = target.scalar(raw)
            imgs[name] = el
        if images:
            raise AlgebraError(f"image given for unknown symbol {sorted(images)[0]}")
        self.images = imgs
        self._var_images = {v: imgs[v].base_part() for v in source.base.variables}
        for v in source.base.variables:
            el = imgs[v]
            if el and el.degree != 0:
                raise AlgebraError(f"image of {v} must have degree 0")
        for g in source.generators:
            el = imgs[g.name]
            if el and el.degree != g.degree:
                raise AlgebraError(f"image of {g.name} has degree {el.degree}, expected {g.degree}")
        self._cache: dict = {}
        if check:
            res = self.check()
            if not res.ok:
                raise AlgebraError(f"not a dg morphism: {res.failures[0]}")

    # -- application ---------------------------------------------------
    def map_base(self, p: Polynomial) -> Polynomial:
        return self.target.base.reduce(p.substitute(self._var_images, self.target.base.ring))

    def map_mono(self, m) -> GradedElement:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        out = self.target.one()
        for i, a in enumerate(m):
            if a:
                out = out * (self.images[self.source.names[i]] ** a)
        self._cache[m] = out
        return out

    def __call__(self, el: GradedElement) -> GradedElement:
        acc = self.target.zero()
        for m, c in el.terms.items():
            acc = acc + self.map_mono(m) * self.map_base(c)
        return acc

    def apply_text(self, text: str) -> GradedElement:
        return self(self.source.parse(text))

    # -- checks --------------------------------------------------------
    def check(self) -> MorphismCheck:
        fails = []
        for r in self.source.base.relations:
            if self.map_base(r):
                fails.append({"kind": "relation", "relation": str(r)})
        for g in self.source.generators:
            lhs = self.images[g.name].d()
            rhs = self(self.source.differential(g.name))
            if lhs != rhs:
                fails.append({"kind": "differential", "generator": g.name,
                              "image_d": lhs.to_string(), "d_image": rhs.to_string()})
        return MorphismCheck(not fails, fails)

    def compose(self, first: "DgMorphism") -> "DgMorphism":
        """self ∘ first."""
        imgs = {n: self(first.images[n]) for n in first.source.symbols()}
        return DgMorphism(first.source, self.target, imgs, check=False)

    def equals(self, other: "DgMorphism") -> bool:
        if self.source.symbols() != other.source.symbols():
            return False
        return all(self.images[n] == other.target_element(other.images[n], self.target)
                   for n in self.source.symbols())

    @staticmethod
    def target_element(el: GradedElement, alg: DgAlgebra) -> GradedElement:
        return el if el.alg is alg else alg.element_from(el)

    def image_strings(self) -> dict[str, str]:
        return {n: self.images[n].to_string() for n in self.source.symbols()}

    def is_identity_on_names(self) -> bool:
        return all(self.images[n] == self.target.gen(n) if n in self.target.symbols() else False
                   for n in self.source.symbols())

    def __repr__(self):
        return f"DgMorphism({self.image_strings()})"


def identity(alg: DgAlgebra) -> DgMorphism:
    return DgMorphism(alg, alg, {}, check=False)
