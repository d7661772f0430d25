"""Almost-free non-positively graded commutative dg algebras over a BaseRing."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from ..exactalg.base import BaseRing
from ..exactalg.parse import ExpressionParser
from ..exactalg.polynomial import Polynomial, format_monomial, format_terms

Mono = tuple[int, ...]


class AlgebraError(ValueError):
    """Structural problem with an algebra description (bad degree, unknown symbol...)."""


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


def generator_sort_key(name: str, degree: int) -> tuple:
    return (-degree, name)


class GradedElement:
    """Sparse combination of canonical monomials with base-ring coefficients."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: "DgAlgebra", terms: Mapping[Mono, Polynomial], reduced: bool = False):
        self.alg = alg
        if reduced:
            self.terms = dict(terms)
        else:
            base = alg.base
            out = {}
            for m, c in terms.items():
                c = base.reduce(c)
                if c:
                    out[m] = c
            self.terms = out

    # -- construction helpers -----------------------------------------
    def _lift(self, other) -> "GradedElement":
        if isinstance(other, GradedElement):
            if other.alg is not self.alg and other.alg.structural_key() != self.alg.structural_key():
                raise AlgebraError("elements of different algebras")
            return other
        return self.alg.scalar(other)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {self.alg.mono_degree(m) for m in self.terms}

    @property
    def degree(self) -> int | None:
        ds = self.degrees()
        if len(ds) > 1:
            raise AlgebraError("element is not homogeneous")
        return next(iter(ds)) if ds else None

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            other = self.alg.scalar(other)
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((m, c) for m, c in self.terms.items()))

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            v = c if v is None else v + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return GradedElement(self.alg, out, True)

    __radd__ = __add__

    def __neg__(self):
        return GradedElement(self.alg, {m: -c for m, c in self.terms.items()}, True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.alg.zero()
            return GradedElement(self.alg, {m: c * other for m, c in self.terms.items()}, True)
        if isinstance(other, Polynomial):
            other = self.alg.scalar(other)
        other = self._lift(other)
        alg = self.alg
        acc: dict[Mono, Polynomial] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                sign, m = alg.mono_mul(m1, m2)
                if not sign:
                    continue
                c = c1 * c2
                if sign < 0:
                    c = -c
                v = acc.get(m)
                acc[m] = c if v is None else v + c
        return GradedElement(alg, acc)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            return self.alg.scalar(other) * self
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise AlgebraError("negative power")
        out = self.alg.one()
        for _ in range(n):
            out = out * self
        return out

    def d(self) -> "GradedElement":
        """The differential."""
        alg = self.alg
        acc: dict[Mono, Polynomial] = {}
        for m, c in self.terms.items():
            for m2, c2 in alg.mono_differential(m).terms.items():
                v = acc.get(m2)
                p = c * c2
                acc[m2] = p if v is None else v + p
        return GradedElement(alg, acc)

    def coefficient(self, mono: Mono) -> Polynomial:
        return self.terms.get(mono, self.alg.base.zero())

    def base_part(self) -> Polynomial:
        return self.coefficient(self.alg.unit_mono)

    def to_string(self) -> str:
        return self.alg.format_element(self)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"GradedElement({self.to_string()!r})"


class DgAlgebra:
    """Base ring plus free negative-degree generators with differentials.

    Generators are kept sorted by (-degree, name).  Degree-0 generators passed
    to the constructor become base variables.
    """

    def __init__(self, base: BaseRing, generators: Sequence[tuple[str, int]],
                 differentials: Mapping[str, object] | None = None):
        differentials = dict(differentials or {})
        gens = []
        seen = set(base.variables)
        extra_vars = []
        for name, deg in generators:
            if deg > 0:
                raise AlgebraError(f"degree must be <= 0 (generator {name})")
            if name in seen:
                raise AlgebraError(f"duplicate symbol {name}")
            seen.add(name)
            if deg == 0:
                extra_vars.append(name)
            else:
                gens.append(Generator(name, int(deg)))
        if extra_vars:
            for v in extra_vars:
                d = differentials.pop(v, None)
                if d not in (None, "0", 0) and not (hasattr(d, "is_zero") and d.is_zero()):
                    raise AlgebraError(f"degree-0 generator {v} must have zero differential")
            base = base.with_variables(extra_vars)
        gens.sort(key=lambda g: generator_sort_key(g.name, g.degree))
        self.base = base
        self.generators: tuple[Generator, ...] = tuple(gens)
        self.names = tuple(g.name for g in gens)
        self.index = {g.name: i for i, g in enumerate(gens)}
        self.degrees = tuple(g.degree for g in gens)
        self.odd = tuple(g.odd for g in gens)
        self.unit_mono: Mono = (0,) * len(gens)
        self._dcache: dict[Mono, GradedElement] = {}
        self._basis_cache: dict[int, list[Mono]] = {}
        diffs = []
        for g in gens:
            raw = differentials.pop(g.name, None)
            diffs.append(self._coerce_differential(g, raw))
        if differentials:
            unknown = sorted(differentials)
            raise AlgebraError(f"differential given for unknown generator {unknown[0]}")
        self._diffs = tuple(diffs)

    def _coerce_differential(self, g: Generator, raw) -> GradedElement:
        if raw is None:
            return self.zero()
        if isinstance(raw, str):
            el = self.parse(raw)
        elif isinstance(raw, GradedElement):
            if raw.alg is self:
                el = raw
            else:
                el = self.element_from(raw)
        else:
            el = self.scalar(raw)
        if el and el.degree != g.degree + 1:
            raise AlgebraError(f"differential of {g.name} has degree {el.degree}, expected {g.degree + 1}")
        return el

    # -- monomial arithmetic -------------------------------------------
    def mono_degree(self, m: Mono) -> int:
        return sum(a * d for a, d in zip(m, self.degrees))

    def mono_mul(self, a: Mono, b: Mono) -> tuple[int, Mono]:
        odd = self.odd
        swaps = 0
        # count pairs (i in a, j in b) of odd generators with i > j
        n = len(a)
        suffix = 0
        counts = [0] * (n + 1)
        for i in range(n - 1, -1, -1):
            if odd[i] and a[i]:
                suffix += 1
            counts[i] = suffix
        for j in range(n):
            if odd[j] and b[j]:
                if a[j]:
                    return 0, a
                swaps += counts[j + 1]
        m = tuple(x + y for x, y in zip(a, b))
        return (-1 if swaps % 2 else 1), m

    def mono_differential(self, m: Mono) -> GradedElement:
        cached = self._dcache.get(m)
        if cached is not None:
            return cached
        first = next((i for i, a in enumerate(m) if a), None)
        if first is None:
            out = self.zero()
        else:
            rest = list(m)
            rest[first] -= 1
            rest = tuple(rest)
            g = self.gen_mono(first)
            dg = self._diffs[first]
            term1 = dg * GradedElement(self, {rest: self.base.one()}, True)
            drest = self.mono_differential(rest)
            gm = GradedElement(self, {g: self.base.one()}, True)
            term2 = gm * drest
            if self.odd[first]:
                term2 = -term2
            out = term1 + term2
            # g·rest is m itself with no sign because g is the first generator present
        self._dcache[m] = out
        return out

    def gen_mono(self, i: int) -> Mono:
        e = [0] * len(self.generators)
        e[i] = 1
        return tuple(e)

    # -- elements ------------------------------------------------------
    def zero(self) -> GradedElement:
        return GradedElement(self, {}, True)

    def one(self) -> GradedElement:
        return self.scalar(1)

    def scalar(self, c) -> GradedElement:
        p = self.base.coerce(c)
        return GradedElement(self, {self.unit_mono: p})

    def gen(self, name: str) -> GradedElement:
        if name in self.index:
            return GradedElement(self, {self.gen_mono(self.index[name]): self.base.one()}, True)
        if name in self.base.variables:
            return self.scalar(self.base.var(name))
        raise KeyError(name)

    def monomial(self, m: Mono, coeff=None) -> GradedElement:
        c = self.base.one() if coeff is None else self.base.coerce(coeff)
        return GradedElement(self, {tuple(m): c})

    def parse(self, text: str) -> GradedElement:
        return ExpressionParser(self.scalar, self.gen).parse(text)

    def differential(self, name: str) -> GradedElement:
        return self._diffs[self.index[name]]

    def element_from(self, el: GradedElement) -> GradedElement:
        """Re-home an element of a structurally identical algebra (by names)."""
        return self.element_from_terms(el.alg, el.terms)

    def element_from_terms(self, other: "DgAlgebra", terms) -> GradedElement:
        out = self.zero()
        for m, c in terms.items():
            piece = self.scalar(c.embed(self.base.ring) if c.ring.names != self.base.variables else c)
            for i, a in enumerate(m):
                if a:
                    piece = piece * (self.gen(other.names[i]) ** a)
            out = out + piece
        return out

    # -- graded pieces -------------------------------------------------
    def graded_basis(self, k: int) -> list[Mono]:
        """Canonical monomials of total degree k, sorted by descending exponent tuple."""
        if k > 0:
            return []
        cached = self._basis_cache.get(k)
        if cached is not None:
            return list(cached)
        n = len(self.generators)
        out: list[Mono] = []
        cur = [0] * n

        def rec(i: int, remaining: int):
            if remaining == 0:
                out.append(tuple(cur))
                return
            if i == n:
                return
            d = self.degrees[i]
            top = 1 if self.odd[i] else remaining // d
            for a in range(top, -1, -1):
                if a * d < remaining:
                    continue
                cur[i] = a
                rec(i + 1, remaining - a * d)
            cur[i] = 0

        rec(0, k)
        out.sort(reverse=True)
        self._basis_cache[k] = out
        return list(out)

    def differential_matrix(self, k: int) -> list[list[Polynomial]]:
        """Columns indexed by graded_basis(k), entries by graded_basis(k+1)."""
        src = self.graded_basis(k)
        tgt = self.graded_basis(k + 1)
        pos = {m: i for i, m in enumerate(tgt)}
        cols = []
        for m in src:
            d = self.mono_differential(m)
            col = [self.base.zero()] * len(tgt)
            for m2, c in d.terms.items():
                col[pos[m2]] = c
            cols.append(col)
        return cols

    def coordinates(self, el: GradedElement, k: int) -> list[Polynomial]:
        basis = self.graded_basis(k)
        pos = {m: i for i, m in enumerate(basis)}
        col = [self.base.zero()] * len(basis)
        for m, c in el.terms.items():
            if m not in pos:
                raise AlgebraError("element has a component outside the requested degree")
            col[pos[m]] = c
        return col

    def from_coordinates(self, col: Sequence[Polynomial], k: int) -> GradedElement:
        basis = self.graded_basis(k)
        return GradedElement(self, {m: c for m, c in zip(basis, col) if c})

    def min_generator_degree(self) -> int:
        return min(self.degrees, default=0)

    # -- structure -----------------------------------------------------
    def is_zero_algebra(self) -> bool:
        return self.base.is_zero_ring()

    def generator_specs(self) -> list[tuple[str, int, str]]:
        return [(g.name, g.degree, self._diffs[i].to_string()) for i, g in enumerate(self.generators)]

    def structural_key(self) -> tuple:
        return (self.base.structural_key(), tuple(self.generator_specs()))

    def same_structure(self, other: "DgAlgebra") -> bool:
        return self.structural_key() == other.structural_key()

    def symbols(self) -> tuple[str, ...]:
        return self.base.variables + self.names

    def degree_of(self, name: str) -> int:
        return 0 if name in self.base.variables else self.degrees[self.index[name]]

    def mono_string(self, m: Mono) -> str:
        return format_monomial(self.names, m)

    def format_element(self, el: GradedElement) -> str:
        pieces: list[tuple[str, Fraction]] = []
        for m in sorted(el.terms, reverse=True):
            gm = self.mono_string(m)
            c = el.terms[m]
            items = c.sorted_terms()
            if len(items) == 1 or not gm:
                for e, a in items:
                    mono = "*".join(x for x in (format_monomial(c.ring.names, e), gm) if x)
                    pieces.append((mono, a))
            else:
                pieces.append((f"({c})*{gm}", Fraction(1)))
        return format_terms(pieces)

    def __repr__(self):
        gens = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"DgAlgebra({self.base!r}; {gens})"

    # -- derived constructions -----------------------------------------
    def with_generators(self, new: Iterable[tuple[str, int, object]], base: BaseRing | None = None) -> "DgAlgebra":
        """Copy with extra generators (differentials may reference the new ones)."""
        base = base or self.base
        specs = [(n, d) for n, d, _ in self.generator_specs()] + [(n, d) for n, d, _ in new]
        diffs: dict[str, object] = {n: t for n, _, t in self.generator_specs()}
        for n, d, t in new:
            diffs[n] = t if isinstance(t, str) else t
        # differentials may be elements of self; render to text over the new symbols
        rendered = {n: (t.to_string() if isinstance(t, GradedElement) else t) for n, t in diffs.items()}
        return DgAlgebra(base, specs, rendered)


def zero_algebra(variables: Sequence[str] = ()) -> DgAlgebra:
    return DgAlgebra(BaseRing(tuple(variables), ("1",)), [])


def polynomial_algebra(*names: str) -> DgAlgebra:
    return DgAlgebra(BaseRing(tuple(names)), [])


def koszul(f: str = "x", variables: Sequence[str] = ("x",), name: str = "e") -> DgAlgebra:
    return DgAlgebra(BaseRing(tuple(variables)), [(name, -1)], {name: f})
