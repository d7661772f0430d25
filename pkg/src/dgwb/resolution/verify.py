"""Checks that a simplicial dg algebra is a special resolution, level by level."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from ..dgalg.cohomology import PointError, check_point
from ..dgalg.constructions import _bare_symbol
from .matching import (SparseSpan, basis_element, fiber_basis, fiber_coordinates, face_composite,
                       latching_object, matching_object, UnsupportedLatching)
from .simplicial import (SimplicialDgAlgebra, check_dg_compatibility, coface, parse_subset_label)

FILTRATION = (0, 1)


@dataclass
class LevelReport:
    level: int
    structural: list[dict] = field(default_factory=list)
    simplicial: list[dict] = field(default_factory=list)
    surjectivity: list[dict] = field(default_factory=list)
    checked: int = 0

    @property
    def passed(self) -> bool:
        return not (self.structural or self.simplicial or self.surjectivity)

    def to_dict(self) -> dict:
        return {"level": self.level, "pass": self.passed, "fibers_checked": self.checked,
                "structural": self.structural, "simplicial": self.simplicial,
                "surjectivity": self.surjectivity}


@dataclass
class SpecialReport:
    depth: int
    samples: list[dict]
    levels: list[LevelReport]
    zero_fibers: list[dict]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.levels)

    def to_dict(self) -> dict:
        return {"pass": self.passed, "depth": self.depth,
                "samples": [{k: str(v) for k, v in sorted(p.items())} for p in self.samples],
                "zero_h0_fibers": self.zero_fibers,
                "levels": [r.to_dict() for r in self.levels]}


# -- (a) structure ---------------------------------------------------------------------

def _blocks(S: SimplicialDgAlgebra, n: int) -> list[tuple[int, frozenset, list[str], dict]]:
    out = []
    for entry in S.decomposition:
        if entry["level"] == n:
            for label, names in entry["blocks"].items():
                out.append((entry["degree"], parse_subset_label(label), names, entry.get("partners", {})))
    return out


def structural_failures(S: SimplicialDgAlgebra, n: int) -> list[dict]:
    An = S.levels[n]
    fails = []
    try:
        lat = latching_object(S, n)
    except UnsupportedLatching as exc:
        return [{"check": "latching", "detail": str(exc)}]
    degenerate = set(lat.degenerate)
    new_e, new_f = [], []
    for k, s, names, partners in _blocks(S, n):
        if not s or len(s) > n:
            fails.append({"check": "block-index", "detail": f"block {sorted(s)} is not a proper subset"})
        for e in names:
            f = partners.get(e)
            new_e.append(e)
            if f is None:
                fails.append({"check": "pair", "generator": e, "detail": "no partner"})
                continue
            new_f.append(f)
            if An.degree_of(e) != k or An.degree_of(f) != k + 1:
                fails.append({"check": "pair", "generator": e, "detail": "degrees do not match the block"})
            if _bare_symbol(An.gen(e).d()) != f:
                fails.append({"check": "pair", "generator": e, "detail": f"differential is not {f}"})
            if f in An.index and An.differential(f):
                fails.append({"check": "pair", "generator": f, "detail": "partner is not a cycle"})
    listed = set(new_e) | set(new_f)
    if len(listed) != len(new_e) + len(new_f):
        fails.append({"check": "partition", "detail": "a generator appears in two blocks"})
    for sym in An.symbols():
        in_lat, in_new = sym in degenerate, sym in listed
        if in_lat == in_new:
            fails.append({"check": "partition", "generator": sym,
                          "detail": "both degenerate and new" if in_lat else "neither degenerate nor new"})
    return fails


# -- (b) block rule ---------------------------------------------------------------------

def block_rule_failures(S: SimplicialDgAlgebra, n: int) -> list[dict]:
    """Face images of new generators: zero off the face, a generator inside, a top element on it."""
    fails = []
    lower = {}
    if n >= 2:
        for k, s, names, _ in _blocks(S, n - 1):
            for e in names:
                lower[e] = (k, s)
    for k, s, names, _ in _blocks(S, n):
        for i in range(n + 1):
            face = S.faces[n][i]
            mu = coface(n, i)
            seen = set()
            for e in names:
                img = face.images[e]
                where = {"level": n, "face": i, "generator": e, "found": img.to_string()}
                if not s <= set(mu):
                    if img:
                        fails.append({**where, "expected": "0"})
                    continue
                pos = {v: t for t, v in enumerate(mu)}
                s2 = frozenset(pos[v] for v in s)
                if len(s2) < n:
                    name = _bare_symbol(img)
                    if name is None or lower.get(name) != (k, s2) or name in seen:
                        fails.append({**where, "expected": f"a distinct generator of block {sorted(s2)}"})
                    seen.add(name)
                else:
                    if not img or img.degree != k:
                        fails.append({**where, "expected": "a nonzero element of the top component"})
                        continue
                    key = img.to_string()
                    if key in seen:
                        fails.append({**where, "expected": "distinct top-component elements"})
                    seen.add(key)
                    if n - 1 >= 1:
                        for i2 in range(n):
                            if S.faces[n - 1][i2](img):
                                fails.append({**where, "expected": "an element killed by every face"})
                                break
    return fails


# -- (c) fibers --------------------------------------------------------------------------

def surjectivity_at(S: SimplicialDgAlgebra, n: int, k: int, point: Mapping[str, Fraction], d: int,
                    batch: int = 32) -> dict | None:
    """None when A_n → M_n hits the F-degree ≤ d part of the fiber of M_n in degree k."""
    M = matching_object(S, n)
    fixed = S.levels[0].base.variables
    target = M.fiber_space(k, point, d)
    if not target:
        return None
    An = S.levels[n]
    comps = [face_composite(S, n, mu) for mu in M.faces]
    span = SparseSpan()
    pending = list(target)
    count = 0
    for key in fiber_basis(An, k, fixed, d):
        el = basis_element(An, fixed, *key)
        vec = {}
        for a, f in enumerate(comps):
            for kk, v in fiber_coordinates(f(el), fixed, point).items():
                vec[(a,) + kk] = v
        if vec:
            span.add(vec)
        count += 1
        if count % batch == 0:
            pending = [r for r in (span.reduce(v) for v in pending) if r]
            if not pending:
                return None
    pending = [r for r in (span.reduce(v) for v in pending) if r]
    if not pending:
        return None
    return {"degree": k, "filtration": d, "point": {v: str(point[v]) for v in sorted(point)},
            "target_dimension": len(target), "missing": len(pending)}


def zero_h0_fiber(S: SimplicialDgAlgebra, point: Mapping[str, Fraction]) -> bool:
    A = S.levels[0]
    if A.is_zero_algebra():
        return True
    for g in A.generators:
        if g.degree == -1 and A.differential(g.name).base_part().evaluate(point) != 0:
            return True
    return False


def verify_special(S: SimplicialDgAlgebra, samples: Sequence[Mapping[str, Fraction]], depth: int = 3,
                   threads: int = 1) -> SpecialReport:
    A = S.levels[0]
    pts = []
    for p in samples:
        try:
            pts.append(check_point(A, p))
        except PointError:
            raise
    ident = [f.to_dict() for f in S.check_identities()]
    dg = check_dg_compatibility(S)

    def level_report(n: int) -> LevelReport:
        rep = LevelReport(n)
        if n == 0:
            return rep
        rep.structural = structural_failures(S, n)
        rep.simplicial = [f for f in ident if f["level"] in (n, n - 1) and _touches(f, n)]
        rep.simplicial += [f for f in dg if f["level"] == n and f["map"] == "face"]
        rep.simplicial += block_rule_failures(S, n)
        for p in pts:
            for k in range(-1, -depth - 1, -1):
                for d in FILTRATION:
                    miss = surjectivity_at(S, n, k, p, d)
                    rep.checked += 1
                    if miss:
                        rep.surjectivity.append(miss)
        return rep

    levels = list(range(S.top + 1))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            reports = list(ex.map(level_report, levels))
    else:
        reports = [level_report(n) for n in levels]
    zeros = [{v: str(p[v]) for v in sorted(p)} for p in pts if zero_h0_fiber(S, p)]
    return SpecialReport(depth, pts, reports, zeros)


def _touches(f: dict, n: int) -> bool:
    """Attribute an identity failure to the highest level it involves."""
    fam, lvl = f["family"], f["level"]
    top = lvl if fam == "face-face" else lvl + 1 if fam.startswith("face-degeneracy") else lvl + 2
    return top == n
