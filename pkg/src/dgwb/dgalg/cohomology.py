"""Validation, cohomology presentations and fiberwise ranks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ..exactalg.base import BaseRing
from ..exactalg.linalg import column_rank
from ..exactalg.modules import ModulePresentation, module_subquotient, syzygies
from .algebra import DgAlgebra


@dataclass
class ValidationReport:
    valid: bool
    failures: list[dict] = field(default_factory=list)
    checked_degrees: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"valid": self.valid, "failures": self.failures, "checked_degrees": self.checked_degrees}


def validate(alg: DgAlgebra) -> ValidationReport:
    """δ² = 0 on every generator; differential degrees; finiteness of each graded piece."""
    fails = []
    for g in alg.generators:
        dg = alg.differential(g.name)
        if dg and dg.degree != g.degree + 1:
            fails.append({"check": "degree", "generator": g.name})
            continue
        dd = dg.d()
        if dd:
            fails.append({"check": "d_squared", "generator": g.name, "value": dd.to_string()})
    degs = sorted({g.degree for g in alg.generators}, reverse=True)
    return ValidationReport(not fails, fails, degs)


@dataclass
class H0Presentation:
    """H⁰ as the quotient ring base/(J + δA⁻¹)."""

    ring: BaseRing

    def is_zero(self) -> bool:
        return self.ring.is_zero_ring()

    def relation_strings(self) -> list[str]:
        return [str(p) for p in self.ring.gb]


def h0_ring(alg: DgAlgebra) -> BaseRing:
    extra = [alg.differential(n).base_part() for n, d in zip(alg.names, alg.degrees) if d == -1]
    return alg.base.with_relations([e for e in extra if e])


def cohomology(alg: DgAlgebra, k: int):
    """H⁰ as an :class:`H0Presentation`; H^k (k < 0) as a ModulePresentation."""
    if k > 0:
        raise ValueError("degree must be <= 0")
    if k == 0:
        return H0Presentation(h0_ring(alg))
    base = alg.base
    basis = alg.graded_basis(k)
    if not basis:
        return ModulePresentation(base, 0, [], [], [], 0)
    dk = alg.differential_matrix(k)
    if alg.graded_basis(k + 1):
        ker = syzygies(dk, base, len(alg.graded_basis(k + 1)))
    else:
        ker = [[base.one() if i == j else base.zero() for i in range(len(basis))] for j in range(len(basis))]
    im = alg.differential_matrix(k - 1)
    return module_subquotient(ker, im, base, len(basis))


def cohomology_summary(alg: DgAlgebra, k: int) -> dict:
    h = cohomology(alg, k)
    if k == 0:
        return {"degree": 0, "zero": h.is_zero(), "relations": h.relation_strings(),
                "variables": list(h.ring.variables)}
    return {"degree": k, "rank": h.rank, "relations": h.relation_strings()}


# -- fibers -------------------------------------------------------------------------

class PointError(ValueError):
    """A point does not satisfy the base relations or misses a variable."""


@dataclass
class FiberReport:
    point: dict[str, Fraction]
    dims: dict[int, int]
    ranks: dict[int, int]

    def to_dict(self) -> dict:
        return {"point": {k: str(v) for k, v in sorted(self.point.items())},
                "dims": {str(k): v for k, v in sorted(self.dims.items())},
                "ranks": {str(k): v for k, v in sorted(self.ranks.items())}}


def evaluate_matrix(cols, point: Mapping[str, Fraction]) -> list[list[Fraction]]:
    return [[c.evaluate(point) for c in col] for col in cols]


def check_point(alg: DgAlgebra, point: Mapping[str, Fraction]) -> dict[str, Fraction]:
    pt = {k: Fraction(v) for k, v in point.items()}
    missing = [v for v in alg.base.variables if v not in pt]
    if missing:
        raise PointError(f"point does not assign {missing[0]}")
    for r in alg.base.relations:
        if r.evaluate(pt) != 0:
            raise PointError(f"point violates relation {r}")
    return pt


def differential_rank_at(alg: DgAlgebra, k: int, point: Mapping[str, Fraction]) -> int:
    if k >= 0:
        return 0
    if not alg.graded_basis(k) or not alg.graded_basis(k + 1):
        return 0
    return column_rank(evaluate_matrix(alg.differential_matrix(k), point))


def fiber(alg: DgAlgebra, point: Mapping[str, Fraction], depth: int = 3) -> FiberReport:
    """Graded dimensions and cohomology ranks of A ⊗ ℚ_p in degrees 0 … −depth."""
    pt = check_point(alg, point)
    dims, ranks = {}, {}
    rk = {k: differential_rank_at(alg, k, pt) for k in range(-depth - 1, 0)}
    rk[0] = 0
    for k in range(0, -depth - 1, -1):
        dim = len(alg.graded_basis(k))
        dims[k] = dim
        ranks[k] = dim - rk[k] - rk[k - 1]
    return FiberReport(pt, dims, ranks)


def presentation_fiber_rank(pres, point: Mapping[str, Fraction]) -> int:
    """dim_ℚ of M ⊗ ℚ_p for a cohomology presentation M (H⁰ ring or module)."""
    pt = {k: Fraction(v) for k, v in point.items()}
    if isinstance(pres, H0Presentation):
        return 0 if any(p.evaluate(pt) for p in pres.ring.gb) else 1
    if pres.rank == 0:
        return 0
    return pres.rank - column_rank(evaluate_matrix(pres.relations, pt))
