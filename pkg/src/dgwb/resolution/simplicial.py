"""Simplex category bookkeeping and simplicial dg algebras."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

from ..dgalg.algebra import DgAlgebra
from ..dgalg.morphism import DgMorphism

# An order-preserving map [m] -> [n] is the tuple of its values.
DeltaMap = tuple[int, ...]


def identity_map(n: int) -> DeltaMap:
    return tuple(range(n + 1))


def coface(n: int, i: int) -> DeltaMap:
    """δ_i: [n-1] → [n], the injection missing i."""
    return tuple(j if j < i else j + 1 for j in range(n))


def codegeneracy(n: int, j: int) -> DeltaMap:
    """σ_j: [n+1] → [n], hitting j twice."""
    return tuple(k if k <= j else k - 1 for k in range(n + 2))


def compose(alpha: DeltaMap, beta: DeltaMap) -> DeltaMap:
    """α ∘ β."""
    return tuple(alpha[b] for b in beta)


def epi_mono(alpha: DeltaMap) -> tuple[DeltaMap, DeltaMap]:
    """Factor α = μ ∘ ε with ε surjective and μ injective."""
    image = sorted(set(alpha))
    pos = {v: i for i, v in enumerate(image)}
    return tuple(pos[a] for a in alpha), tuple(image)


def surjections(n: int, p: int) -> list[DeltaMap]:
    """All order-preserving surjections [n] ↠ [p] (there are C(n, p))."""
    out = []
    for steps in combinations(range(1, n + 1), p):
        val, cur = [], 0
        st = set(steps)
        for k in range(n + 1):
            if k in st:
                cur += 1
            val.append(cur)
        out.append(tuple(val))
    return out


def injections(q: int, n: int) -> list[DeltaMap]:
    return [tuple(c) for c in combinations(range(n + 1), q + 1)]


def is_identity(alpha: DeltaMap) -> bool:
    return alpha == tuple(range(len(alpha)))


def subset_label(s) -> str:
    return "{" + ",".join(str(i) for i in sorted(s)) + "}"


def parse_subset_label(text: str) -> frozenset[int]:
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError(f"bad subset label {text!r}")
    inner = body[1:-1].strip()
    return frozenset(int(x) for x in inner.split(",")) if inner else frozenset()


def proper_subsets(n: int) -> list[frozenset[int]]:
    """Nonempty proper subsets of [n], by size then lexicographically."""
    out = []
    for size in range(1, n + 1):
        for c in combinations(range(n + 1), size):
            out.append(frozenset(c))
    return out


@dataclass
class IdentityFailure:
    family: str
    level: int
    indices: tuple
    symbol: str
    lhs: str
    rhs: str

    def to_dict(self) -> dict:
        return {"family": self.family, "level": self.level, "indices": list(self.indices),
                "symbol": self.symbol, "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class SimplicialDgAlgebra:
    """Levels A_0…A_N with face maps A_n → A_{n-1} and degeneracies A_n → A_{n+1}."""

    levels: list[DgAlgebra]
    faces: list[list[DgMorphism]]          # faces[n][i]: A_n → A_{n-1}; faces[0] == []
    degeneracies: list[list[DgMorphism]]   # degeneracies[n][j]: A_n → A_{n+1}
    provenance: str = "user"
    decomposition: list = field(default_factory=list)

    @property
    def top(self) -> int:
        return len(self.levels) - 1

    def face(self, n: int, i: int) -> DgMorphism:
        return self.faces[n][i]

    def degeneracy(self, n: int, j: int) -> DgMorphism:
        return self.degeneracies[n][j]

    def check_identities(self, limit: int | None = None) -> list[IdentityFailure]:
        return check_simplicial_identities(self.levels, self.face, self.degeneracy, self.top, limit)

    def mutated(self, n: int, i: int, symbol: str, image: str) -> "SimplicialDgAlgebra":
        """Copy with one face image replaced (used to exercise the checkers)."""
        old = self.faces[n][i]
        imgs = dict(old.images)
        imgs[symbol] = old.target.parse(image)
        bad = DgMorphism(old.source, old.target, imgs, check=False)
        faces = [list(row) for row in self.faces]
        faces[n][i] = bad
        return SimplicialDgAlgebra(self.levels, faces, self.degeneracies, self.provenance, self.decomposition)


def check_simplicial_identities(levels, face: Callable, degeneracy: Callable, top: int,
                                limit: int | None = None) -> list[IdentityFailure]:
    """All five families, compared on every base variable and generator."""
    fails: list[IdentityFailure] = []

    def cmp(family, level, idx, f: DgMorphism, g: DgMorphism):
        for sym in f.source.symbols():
            a, b = f.images[sym], g.images[sym]
            if a != b:
                fails.append(IdentityFailure(family, level, idx, sym, a.to_string(), b.to_string()))
                return

    def full():
        return limit is not None and len(fails) >= limit

    for n in range(2, top + 1):
        for j in range(n + 1):
            for i in range(j):
                cmp("face-face", n, (i, j), face(n - 1, i).compose(face(n, j)),
                    face(n - 1, j - 1).compose(face(n, i)))
                if full():
                    return fails
    for n in range(0, top):
        for j in range(n + 1):
            s = degeneracy(n, j)
            for i in range(n + 2):
                lhs = face(n + 1, i).compose(s)
                if i < j:
                    rhs = degeneracy(n - 1, j - 1).compose(face(n, i))
                    cmp("face-degeneracy", n, (i, j), lhs, rhs)
                elif i in (j, j + 1):
                    cmp("face-degeneracy-identity", n, (i, j), lhs, DgMorphism(levels[n], levels[n], {}, check=False))
                else:
                    rhs = degeneracy(n - 1, j).compose(face(n, i - 1))
                    cmp("face-degeneracy", n, (i, j), lhs, rhs)
                if full():
                    return fails
    for n in range(0, top - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                lhs = degeneracy(n + 1, i).compose(degeneracy(n, j))
                rhs = degeneracy(n + 1, j + 1).compose(degeneracy(n, i))
                cmp("degeneracy-degeneracy", n, (i, j), lhs, rhs)
                if full():
                    return fails
    return fails


def check_dg_compatibility(S: SimplicialDgAlgebra) -> list[dict]:
    out = []
    for n in range(1, S.top + 1):
        for i, f in enumerate(S.faces[n]):
            res = f.check()
            for fl in res.failures:
                out.append({"map": "face", "level": n, "index": i, **fl})
    for n in range(0, S.top):
        for j, s in enumerate(S.degeneracies[n]):
            res = s.check()
            for fl in res.failures:
                out.append({"map": "degeneracy", "level": n, "index": j, **fl})
    return out


def constant_simplicial(A: DgAlgebra, top: int) -> SimplicialDgAlgebra:
    ident = DgMorphism(A, A, {}, check=False)
    faces = [[]] + [[ident] * (n + 1) for n in range(1, top + 1)]
    degs = [[ident] * (n + 1) for n in range(top)]
    return SimplicialDgAlgebra([A] * (top + 1), faces, degs, "user")
