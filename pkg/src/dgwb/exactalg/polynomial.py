"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping

Exponent = tuple[int, ...]

ORDER_KINDS = ("degrevlex", "lex", "deglex")


class ContextError(ValueError):
    """Raised when polynomials from different variable registries are mixed."""


@dataclass(frozen=True)
class MonomialOrder:
    """A term order on exponent vectors.

    ``perm`` lists variable positions from most to least significant; ``None``
    means declaration order.  ``blocks`` splits the (permuted) variables into
    consecutive groups compared one after another, each with ``kind``; this is
    how elimination orders are expressed.
    """

    kind: str = "degrevlex"
    perm: tuple[int, ...] | None = None
    blocks: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ORDER_KINDS:
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def key_function(self, nvars: int) -> Callable[[Exponent], tuple]:
        perm = self.perm if self.perm is not None else tuple(range(nvars))
        if sorted(perm) != list(range(nvars)):
            raise ValueError("order permutation does not match variable count")
        blocks = self.blocks if self.blocks is not None else (nvars,)
        if sum(blocks) != nvars:
            raise ValueError("order blocks do not cover the variables")
        spans = []
        start = 0
        for size in blocks:
            spans.append(perm[start:start + size])
            start += size
        kind = self.kind

        def single(e: Exponent, idx: tuple[int, ...]) -> tuple:
            vals = [e[i] for i in idx]
            if kind == "lex":
                return tuple(vals)
            if kind == "deglex":
                return (sum(vals), *vals)
            return (sum(vals), *(-v for v in reversed(vals)))

        if len(spans) == 1:
            idx = spans[0]
            return lambda e: single(e, idx)
        # each block key has fixed length, so concatenation compares blockwise
        return lambda e: tuple(x for idx in spans for x in single(e, idx))


DEGREVLEX = MonomialOrder()


@dataclass(frozen=True)
class PolyRing:
    """Variable registry: ordered names plus the term order."""

    names: tuple[str, ...]
    order: MonomialOrder = DEGREVLEX

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")

    @property
    def nvars(self) -> int:
        return len(self.names)

    @cached_property
    def key(self) -> Callable[[Exponent], tuple]:
        return self.order.key_function(self.nvars)

    @cached_property
    def index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.names)}

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name: str) -> "Polynomial":
        i = self.index[name]
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): Fraction(1)})

    def gens(self) -> list["Polynomial"]:
        return [self.var(n) for n in self.names]

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.names, order)

    def parse(self, text: str) -> "Polynomial":
        from .parse import parse_polynomial
        return parse_polynomial(text, self)


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to nonzero Fractions."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[Exponent, Fraction], _clean: bool = False):
        self.ring = ring
        if _clean:
            self.terms = terms
        else:
            self.terms = {e: Fraction(c) for e, c in terms.items() if c}
        self._hash = None

    # -- basic protocol -------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.names, frozenset(self.terms.items())))
        return self._hash

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring.names != self.ring.names:
                raise ContextError(f"ring mismatch: {self.ring.names} vs {other.ring.names}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial(self.ring, out, True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()}, True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Polynomial(self.ring, out, True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {e: v * c for e, v in self.terms.items()}, True)

    def mul_term(self, exp: Exponent, c: Fraction) -> "Polynomial":
        return Polynomial(self.ring, {tuple(a + b for a, b in zip(e, exp)): v * c
                                      for e, v in self.terms.items()}, True)

    # -- structure ------------------------------------------------------
    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        key = self.ring.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_term(self) -> tuple[Exponent, Fraction]:
        key = self.ring.key
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def leading_coefficient(self) -> Fraction:
        return self.leading_term()[1]

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(1 / self.leading_coefficient())

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def variables_used(self) -> set[str]:
        used = set()
        for e in self.terms:
            for i, a in enumerate(e):
                if a:
                    used.add(self.ring.names[i])
        return used

    def degree_in(self, name: str) -> int:
        i = self.ring.index[name]
        return max((e[i] for e in self.terms), default=-1)

    def derivative(self, name: str) -> "Polynomial":
        i = self.ring.index[name]
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return Polynomial(self.ring, out, True)

    def content(self) -> Fraction:
        from math import gcd
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den) if num else Fraction(1)

    # -- evaluation / substitution ------------------------------------
    def evaluate(self, point: Mapping[str, Fraction]) -> Fraction:
        vals = [Fraction(point[n]) if n in point else None for n in self.ring.names]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for v, a in zip(vals, e):
                if a:
                    if v is None:
                        raise KeyError("point does not assign every variable")
                    t *= v ** a
            total += t
        return total

    def substitute(self, images: Mapping[str, "Polynomial"], target: PolyRing) -> "Polynomial":
        """Ring map sending each variable to ``images[name]`` (identity by name when absent)."""
        imgs = []
        for n in self.ring.names:
            if n in images:
                p = images[n]
                if isinstance(p, (int, Fraction)):
                    p = target.const(p)
                imgs.append(p)
            else:
                imgs.append(target.var(n))
        powers: list[dict[int, Polynomial]] = [{} for _ in imgs]

        def pw(i, a):
            cache = powers[i]
            if a not in cache:
                cache[a] = imgs[i] ** a
            return cache[a]

        out = target.zero()
        acc: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            t = target.const(c)
            for i, a in enumerate(e):
                if a:
                    t = t * pw(i, a)
            for te, tc in t.terms.items():
                v = acc.get(te, 0) + tc
                if v:
                    acc[te] = v
                else:
                    acc.pop(te, None)
        out = Polynomial(target, acc, True)
        return out

    def partial_evaluate(self, point: Mapping[str, Fraction]) -> "Polynomial":
        images = {n: Fraction(v) for n, v in point.items() if n in self.ring.index}
        return self.substitute(images, self.ring)

    def embed(self, target: PolyRing, rename: Mapping[str, str] | None = None) -> "Polynomial":
        """Re-express in a ring containing (renamed) copies of this ring's variables."""
        rename = rename or {}
        idx = [target.index[rename.get(n, n)] for n in self.ring.names]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * target.nvars
            for i, a in zip(idx, e):
                ne[i] += a
            out[tuple(ne)] = c
        return Polynomial(target, out, True)

    # -- printing -------------------------------------------------------
    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def format_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(names: Iterable[str], e: Exponent) -> str:
    parts = []
    for n, a in zip(names, e):
        if a == 1:
            parts.append(n)
        elif a > 1:
            parts.append(f"{n}^{a}")
    return "*".join(parts)


def format_terms(items: list[tuple[str, Fraction]]) -> str:
    """Join (monomial string, coefficient) pairs into grammar-conforming text."""
    if not items:
        return "0"
    out = []
    for k, (mono, c) in enumerate(items):
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = format_fraction(a)
        elif a == 1:
            body = mono
        else:
            body = f"{format_fraction(a)}*{mono}"
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def format_polynomial(p: Polynomial) -> str:
    return format_terms([(format_monomial(p.ring.names, e), c) for e, c in p.sorted_terms()])
