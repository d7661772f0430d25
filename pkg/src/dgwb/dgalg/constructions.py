"""Pushouts, tensor products and localizations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ..exactalg.base import BaseRing
from ..exactalg.polynomial import Polynomial
from .algebra import AlgebraError, DgAlgebra, GradedElement
from .morphism import DgMorphism


class UnsupportedError(AlgebraError):
    """The input lies outside the class handled by a construction."""


def fresh_name(name: str, used: Iterable[str]) -> str:
    used = set(used)
    if name not in used:
        return name
    i = 1
    while f"{name}_{i}" in used:
        i += 1
    return f"{name}_{i}"


def ground_algebra() -> DgAlgebra:
    """ℚ itself: no variables, no generators."""
    return DgAlgebra(BaseRing(()), [])


@dataclass
class InclusionData:
    variables: dict[str, str]
    generators: dict[str, str]


def inclusion_data(phi: DgMorphism) -> InclusionData | None:
    """Name maps when φ sends variables to distinct variables and generators to distinct generators."""
    tgt = phi.target
    var_map, gen_map = {}, {}
    for v in phi.source.base.variables:
        el = phi.images[v]
        name = _bare_symbol(el)
        if name is None or name not in tgt.base.variables:
            return None
        var_map[v] = name
    for g in phi.source.names:
        name = _bare_symbol(phi.images[g])
        if name is None or name not in tgt.index:
            return None
        gen_map[g] = name
    if len(set(var_map.values())) != len(var_map) or len(set(gen_map.values())) != len(gen_map):
        return None
    return InclusionData(var_map, gen_map)


def _bare_symbol(el: GradedElement) -> str | None:
    if len(el.terms) != 1:
        return None
    (m, c), = el.terms.items()
    alg = el.alg
    if any(m):
        if sum(m) != 1 or c != alg.base.one():
            return None
        return alg.names[m.index(1)]
    items = list(c.terms.items())
    if len(items) != 1 or items[0][1] != 1 or sum(items[0][0]) != 1:
        return None
    return c.ring.names[items[0][0].index(1)]


@dataclass
class Pushout:
    algebra: DgAlgebra
    left: DgMorphism   # B -> B ⊗_A C
    right: DgMorphism  # C -> B ⊗_A C


def attach(other: DgMorphism, ext: DgMorphism, data: InclusionData,
           suffix_hint: str | None = None) -> tuple[DgAlgebra, dict[str, str]]:
    """Glue the free extension ``ext: A → E`` onto ``other: A → O``.

    Returns the pushout algebra and the renaming of E's extra symbols.
    """
    O, E = other.target, ext.target
    used = set(O.symbols())
    image_vars = set(data.variables.values())
    image_gens = set(data.generators.values())
    rename: dict[str, str] = {}
    for v in E.base.variables:
        if v in image_vars:
            continue
        base_name = v if suffix_hint is None or v not in used else v + suffix_hint
        rename[v] = fresh_name(base_name, used)
        used.add(rename[v])
    for g in E.names:
        if g in image_gens:
            continue
        base_name = g if suffix_hint is None or g not in used else g + suffix_hint
        rename[g] = fresh_name(base_name, used)
        used.add(rename[g])
    extra_vars = [rename[v] for v in E.base.variables if v in rename]
    base0 = O.base.with_variables(extra_vars)
    inv_var = {e: a for a, e in data.variables.items()}
    inv_gen = {e: a for a, e in data.generators.items()}
    var_images: dict[str, Polynomial] = {}
    for v in E.base.variables:
        if v in inv_var:
            var_images[v] = other.images[inv_var[v]].base_part().embed(base0.ring)
        else:
            var_images[v] = base0.var(rename[v])
    rels = [r.substitute(var_images, base0.ring) for r in E.base.relations]
    inverses = [(rename[t], f.substitute(var_images, base0.ring)) for t, f in E.base.inverses if t in rename]
    base = BaseRing(base0.variables, base0.relations + tuple(rels), base0.order,
                    base0.inverses + tuple(inverses))
    new_gens = [(rename[g], E.degree_of(g)) for g in E.names if g in rename]
    specs = [(n, d) for n, d, _ in O.generator_specs()] + new_gens
    pre = DgAlgebra(base, specs, {n: t for n, _, t in O.generator_specs()})
    sigma = _extension_map(E, pre, other, inv_var, inv_gen, rename)
    diffs = {n: t for n, _, t in O.generator_specs()}
    for g in E.names:
        if g in rename:
            diffs[rename[g]] = sigma(E.differential(g)).to_string()
    return DgAlgebra(base, specs, diffs), rename


def _extension_map(E, target, other, inv_var, inv_gen, rename) -> DgMorphism:
    images = {}
    for v in E.base.variables:
        if v in inv_var:
            images[v] = target.element_from(other.images[inv_var[v]])
        else:
            images[v] = target.gen(rename[v])
    for g in E.names:
        if g in inv_gen:
            images[g] = target.element_from(other.images[inv_gen[g]])
        else:
            images[g] = target.gen(rename[g])
    return DgMorphism(E, target, images, check=False)


def pushout(phi: DgMorphism, psi: DgMorphism, suffix_hint: str | None = None) -> Pushout:
    """B ⊗_A C for φ: A → B and ψ: A → C, one of which must be a free extension."""
    if phi.source.structural_key() != psi.source.structural_key():
        raise AlgebraError("pushout legs must share their source")
    data = inclusion_data(psi)
    if data is not None:
        R, rename = attach(phi, psi, data, suffix_hint)
        left = DgMorphism(phi.target, R, {})
        right = _extension_map(psi.target, R, phi, {e: a for a, e in data.variables.items()},
                               {e: a for a, e in data.generators.items()}, rename)
        right = DgMorphism(right.source, R, right.images)
        return Pushout(R, left, right)
    data = inclusion_data(phi)
    if data is not None:
        swapped = pushout(psi, phi, suffix_hint)
        return Pushout(swapped.algebra, swapped.right, swapped.left)
    raise UnsupportedError("pushout needs one leg that maps variables and generators to distinct ones")


def tensor_product(A: DgAlgebra, B: DgAlgebra, suffix: str = "_1") -> Pushout:
    """A ⊗_ℚ B; clashing names of the second factor get ``suffix``."""
    k = ground_algebra()
    return pushout(DgMorphism(k, A, {}), DgMorphism(k, B, {}), suffix_hint=suffix)


def localize(A: DgAlgebra, f, name: str | None = None) -> tuple[DgAlgebra, DgMorphism]:
    """A[1/f] with a fresh inverse variable; nonzero constants return A itself."""
    f = A.base.coerce(f)
    if not A.base.reduce(f):
        raise AlgebraError("cannot localize at an element that is zero in the base ring")
    if f.is_constant():
        return A, DgMorphism(A, A, {}, check=False)
    t = fresh_name(name or "t", A.symbols())
    base = A.base.with_variables([t])
    fe = f.embed(base.ring)
    base = BaseRing(base.variables, base.relations + (fe * base.var(t) - 1,), base.order,
                    base.inverses + ((t, fe),))
    L = DgAlgebra(base, [(n, d) for n, d, _ in A.generator_specs()],
                  {n: s for n, _, s in A.generator_specs()})
    return L, DgMorphism(A, L, {})
