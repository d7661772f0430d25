"""Seeded single-image corruptions, for checking that the verifiers notice them."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .dgalg.algebra import GradedElement
from .dgalg.morphism import DgMorphism
from .resolution.simplicial import SimplicialDgAlgebra, check_dg_compatibility
from .resolution.verify import block_rule_failures
from .site import Hypercover, verify_hypercover


@dataclass(frozen=True)
class Mutation:
    level: int
    face: int
    symbol: str
    before: str
    after: str
    factor: int | None = None

    def to_dict(self) -> dict:
        out = {"level": self.level, "face": self.face, "symbol": self.symbol,
               "before": self.before, "after": self.after}
        if self.factor is not None:
            out["factor"] = self.factor
        return out


def perturb(f: DgMorphism, symbol: str, rng: random.Random) -> GradedElement | None:
    """A different image of the same degree, or None when the degree is empty."""
    img = f.images[symbol]
    deg = f.source.degree_of(symbol)
    if deg == 0:
        return img + f.target.scalar(Fraction(rng.randint(1, 5)))
    basis = f.target.graded_basis(deg)
    if basis:
        return img + f.target.monomial(rng.choice(basis))
    return f.target.zero() if img else None


def simplicial_mutations(S: SimplicialDgAlgebra, seed: int = 0) -> Iterator[tuple[Mutation, SimplicialDgAlgebra]]:
    rng = random.Random(seed)
    for n in range(1, S.top + 1):
        for i, f in enumerate(S.faces[n]):
            for sym in f.source.symbols():
                new = perturb(f, sym, rng)
                if new is None:
                    continue
                m = Mutation(n, i, sym, f.images[sym].to_string(), new.to_string())
                yield m, S.mutated(n, i, sym, m.after)


def simplicial_detects(S: SimplicialDgAlgebra) -> bool:
    if S.check_identities(limit=1) or check_dg_compatibility(S):
        return True
    return any(block_rule_failures(S, n) for n in range(1, S.top + 1))


def hypercover_mutations(H: Hypercover, seed: int = 0) -> Iterator[tuple[Mutation, Hypercover]]:
    rng = random.Random(seed)
    for n in range(1, H.top + 1):
        for i in range(n + 1):
            for c, (_, f) in enumerate(H.coface(n, i).components):
                for sym in f.source.symbols():
                    new = perturb(f, sym, rng)
                    if new is None:
                        continue
                    m = Mutation(n, i, sym, f.images[sym].to_string(), new.to_string(), c)
                    yield m, H.mutated(n, i, c, sym, m.after)


def hypercover_detects(H: Hypercover, level: int, depth: int = 3) -> bool:
    from .homotopy import REFUTED
    return bool(H.check_identities()) or verify_hypercover(H, level, depth).status == REFUTED
