"""Deterministic rational sample points on the base of an algebra."""

from __future__ import annotations

import random
from fractions import Fraction

from .dgalg.algebra import DgAlgebra


class SamplingError(ValueError):
    pass


def small_rational(rng: random.Random, bound: int = 7) -> Fraction:
    num = rng.randint(-bound, bound)
    den = rng.randint(1, bound)
    return Fraction(num, den)


def sample_points(alg: DgAlgebra, count: int = 5, seed: int = 0, attempts: int = 10000) -> list[dict[str, Fraction]]:
    """``count`` distinct points satisfying the base relations.

    Inverse variables are solved from their denominators; points where a
    denominator vanishes are rejected, as are points violating any other
    relation.  A base with no free variable has a single point, which is
    returned once.
    """
    rng = random.Random(seed)
    base = alg.base
    inverses = base.all_inverses()
    fixed = _pinned(base)
    free = [v for v in base.variables if v not in inverses and v not in fixed]
    if not free:
        count = min(count, 1)
    out: list[dict[str, Fraction]] = []
    seen = set()
    for _ in range(attempts):
        if len(out) == count:
            break
        pt = {v: small_rational(rng) for v in free}
        pt.update(fixed)
        ok = True
        for t, f in _solve_order(inverses):
            val = f.evaluate(pt)
            if val == 0:
                ok = False
                break
            pt[t] = 1 / val
        if not ok or not base.point_is_valid(pt):
            continue
        key = tuple(pt[v] for v in base.variables)
        if key in seen:
            continue
        seen.add(key)
        out.append(pt)
    if len(out) < count:
        raise SamplingError(f"found only {len(out)} of {count} points on the base")
    return out


def _pinned(base) -> dict[str, Fraction]:
    """Variables forced by relations of the form a·v + c with constants a ≠ 0."""
    out = {}
    for r in base.relations:
        used = r.variables_used()
        if len(used) != 1 or r.total_degree() != 1:
            continue
        (v,) = used
        a = r.derivative(v).constant_value()
        out[v] = -r.constant_value() / a
    return out


def _solve_order(inverses: dict) -> list[tuple[str, object]]:
    """Inverse variables ordered so each denominator only uses earlier ones."""
    done, out, todo = set(), [], dict(inverses)
    while todo:
        ready = [t for t, f in todo.items() if not (set(f.variables_used()) & set(todo))]
        if not ready:
            raise SamplingError("inverse variables depend on each other cyclically")
        for t in sorted(ready):
            out.append((t, todo.pop(t)))
            done.add(t)
    return out
