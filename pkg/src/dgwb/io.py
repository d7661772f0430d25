"""JSON file formats for algebras, morphisms, points, simplicial objects and atlases."""

from __future__ import annotations

import contextvars
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .dgalg.algebra import AlgebraError, DgAlgebra
from .dgalg.morphism import DgMorphism
from .exactalg.base import BaseRing
from .exactalg.polynomial import DEGREVLEX, MonomialOrder
from .exactalg.parse import ParseError, parse_rational


TERM_ORDER: contextvars.ContextVar[MonomialOrder] = contextvars.ContextVar("term_order", default=DEGREVLEX)


class InputError(ValueError):
    """Malformed input with a 1-based line/column into the source file."""

    def __init__(self, message: str, path: str = "<input>", line: int = 1, column: int = 1):
        self.message = message
        self.path = path
        self.line = line
        self.column = column
        super().__init__(f"{path}:{line}:{column}: {message}")


@dataclass
class Source:
    """Raw text of a JSON document, used to locate diagnostics."""

    path: str
    text: str

    def locate(self, needle: str, inner_offset: int = 0) -> tuple[int, int]:
        enc = json.dumps(needle, ensure_ascii=False)
        pos = self.text.find(enc)
        if pos < 0:
            return 1, 1
        pos += 1 + inner_offset
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, message: str, needle: str | None = None, inner_offset: int = 0) -> InputError:
        line, col = self.locate(needle, inner_offset) if needle is not None else (1, 1)
        return InputError(message, self.path, line, col)

    @property
    def directory(self) -> str:
        return os.path.dirname(os.path.abspath(self.path)) if self.path != "<input>" else os.getcwd()


def read_source(path: str) -> tuple[Any, Source]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read file: {exc.strerror}", path) from None
    return parse_source(text, path)


def parse_source(text: str, path: str = "<input>") -> tuple[Any, Source]:
    src = Source(path, text)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, path, exc.lineno, exc.colno) from None
    return data, src


def _parse_expr(src: Source, text: str, fn):
    if not isinstance(text, str):
        raise src.error("expression must be a string")
    try:
        return fn(text)
    except ParseError as exc:
        off = _offset_of(text, exc.line, exc.column)
        raise src.error(exc.message, text, off) from None


def _offset_of(text: str, line: int, col: int) -> int:
    lines = text.split("\n")
    return sum(len(x) + 1 for x in lines[: line - 1]) + col - 1


def _require(src: Source, obj: Any, key: str, kind: type, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise src.error(f"{where}: missing key {key!r}")
    val = obj[key]
    if not isinstance(val, kind):
        raise src.error(f"{where}: {key!r} has the wrong type", key)
    return val


# -- algebras -----------------------------------------------------------------------

def algebra_from_json(obj: Any, src: Source) -> DgAlgebra:
    if isinstance(obj, str):
        data, sub = read_source(os.path.join(src.directory, obj))
        return algebra_from_json(data, sub)
    if not isinstance(obj, dict):
        raise src.error("algebra must be a JSON object")
    base_obj = _require(src, obj, "base", dict, "algebra")
    variables = _require(src, base_obj, "variables", list, "base")
    for v in variables:
        if not isinstance(v, str) or not v or not (v[0].isalpha() and v.replace("_", "a").isalnum() and v.isascii()):
            raise src.error(f"invalid variable name {v!r}", v if isinstance(v, str) else None)
    if len(set(variables)) != len(variables):
        raise src.error("duplicate variable name")
    rel_texts = base_obj.get("relations", [])
    if not isinstance(rel_texts, list):
        raise src.error("base: 'relations' must be a list", "relations")
    order = TERM_ORDER.get()
    ring0 = BaseRing(tuple(variables), (), order)
    rels = tuple(_parse_expr(src, t, ring0.parse) for t in rel_texts)
    base = BaseRing(tuple(variables), rels, order)
    gens = obj.get("generators", [])
    if not isinstance(gens, list):
        raise src.error("algebra: 'generators' must be a list", "generators")
    specs, diffs = [], {}
    for g in gens:
        name = _require(src, g, "name", str, "generator")
        deg = _require(src, g, "degree", int, f"generator {name}")
        if isinstance(deg, bool):
            raise src.error(f"generator {name}: degree must be an integer", name)
        if deg > 0:
            raise src.error("degree must be <= 0", name)
        specs.append((name, deg))
        diffs[name] = g.get("differential", "0")
    try:
        shell = DgAlgebra(base, specs, {})
    except AlgebraError as exc:
        raise src.error(str(exc)) from None
    for name, text in diffs.items():
        _parse_expr(src, text, shell.parse)
    try:
        return DgAlgebra(base, specs, diffs)
    except AlgebraError as exc:
        needle = next((n for n in diffs if n in str(exc)), None)
        raise src.error(str(exc), needle) from None


def algebra_to_json(alg: DgAlgebra) -> dict:
    return {
        "base": {"variables": list(alg.base.variables),
                 "relations": [str(r) for r in alg.base.relations]},
        "generators": [{"name": n, "degree": d, "differential": t} for n, d, t in alg.generator_specs()],
    }


def load_algebra(path: str) -> DgAlgebra:
    data, src = read_source(path)
    return algebra_from_json(data, src)


# -- morphisms ------------------------------------------------------------------------

def morphism_from_json(obj: Any, src: Source, check: bool = True) -> DgMorphism:
    if not isinstance(obj, dict):
        raise src.error("morphism must be a JSON object")
    if "source" not in obj or "target" not in obj:
        raise src.error("morphism: missing 'source' or 'target'")
    S = algebra_from_json(obj["source"], src)
    T = algebra_from_json(obj["target"], src)
    images = obj.get("images", {})
    if not isinstance(images, dict):
        raise src.error("morphism: 'images' must be an object", "images")
    parsed = {}
    for k, v in images.items():
        if k not in S.symbols():
            raise src.error(f"unknown symbol {k}", k)
        parsed[k] = _parse_expr(src, v, T.parse)
    try:
        return DgMorphism(S, T, parsed, check=check)
    except AlgebraError as exc:
        raise src.error(str(exc)) from None


def morphism_to_json(phi: DgMorphism) -> dict:
    return {"source": algebra_to_json(phi.source), "target": algebra_to_json(phi.target),
            "images": phi.image_strings()}


def load_morphism(path: str, check: bool = True) -> DgMorphism:
    data, src = read_source(path)
    return morphism_from_json(data, src, check)


# -- points -----------------------------------------------------------------------------

def point_from_json(obj: Any, src: Source) -> dict[str, Fraction]:
    if not isinstance(obj, dict):
        raise src.error("point must be a JSON object")
    out = {}
    for k, v in obj.items():
        try:
            out[k] = parse_rational(v) if isinstance(v, str) else Fraction(v)
        except (ValueError, TypeError):
            raise src.error(f"invalid rational for {k}", k) from None
    return out


def point_to_json(pt: dict[str, Fraction]) -> dict:
    return {k: str(v) for k, v in sorted(pt.items())}


def load_points(path: str) -> list[dict[str, Fraction]]:
    data, src = read_source(path)
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise src.error("samples file must hold a point or a list of points")
    return [point_from_json(p, src) for p in data]


# -- atlases ----------------------------------------------------------------------------

@dataclass
class Atlas:
    algebra: DgAlgebra
    elements: list

    def element_strings(self) -> list[str]:
        return [str(f) for f in self.elements]


def atlas_from_json(obj: Any, src: Source) -> Atlas:
    if not isinstance(obj, dict):
        raise src.error("atlas must be a JSON object")
    if "algebra" not in obj:
        raise src.error("atlas: missing key 'algebra'")
    A = algebra_from_json(obj["algebra"], src)
    els = _require(src, obj, "elements", list, "atlas")
    polys = [_parse_expr(src, e, A.base.parse) for e in els]
    return Atlas(A, polys)


def atlas_to_json(atlas: Atlas) -> dict:
    return {"algebra": algebra_to_json(atlas.algebra), "elements": atlas.element_strings()}


def load_atlas(path: str) -> Atlas:
    data, src = read_source(path)
    return atlas_from_json(data, src)


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


# -- simplicial dg algebras ---------------------------------------------------------------

def _maps_from_json(src: Source, rows: Any, levels: list[DgAlgebra], kind: str, step: int) -> list[list[DgMorphism]]:
    """Rows of image tables; ``step`` is −1 for faces and +1 for degeneracies."""
    if not isinstance(rows, list):
        raise src.error(f"'{kind}' must be a list of lists", kind)
    out = []
    for n, row in enumerate(rows):
        if not isinstance(row, list):
            raise src.error(f"{kind}[{n}] must be a list", kind)
        tgt = n + step
        if row and not 0 <= tgt < len(levels):
            raise src.error(f"{kind}[{n}] points outside the levels", kind)
        maps = []
        for images in row:
            if not isinstance(images, dict):
                raise src.error(f"{kind}[{n}] entries must be image objects", kind)
            parsed = {}
            for sym, text in images.items():
                if sym not in levels[n].symbols():
                    raise src.error(f"unknown symbol {sym}", sym)
                parsed[sym] = _parse_expr(src, text, levels[tgt].parse)
            try:
                maps.append(DgMorphism(levels[n], levels[tgt], parsed, check=False))
            except AlgebraError as exc:
                raise src.error(str(exc)) from None
        out.append(maps)
    return out


def simplicial_from_json(obj: Any, src: Source):
    from .resolution.simplicial import SimplicialDgAlgebra, parse_subset_label
    if not isinstance(obj, dict):
        raise src.error("simplicial algebra must be a JSON object")
    lv = _require(src, obj, "levels", list, "simplicial algebra")
    if not lv:
        raise src.error("simplicial algebra needs at least one level", "levels")
    levels = [algebra_from_json(a, src) for a in lv]
    faces = _maps_from_json(src, obj.get("faces", [[]]), levels, "faces", -1)
    degs = _maps_from_json(src, obj.get("degeneracies", []), levels, "degeneracies", +1)
    top = len(levels) - 1
    if len(faces) != top + 1 or any(len(faces[n]) != (n + 1 if n else 0) for n in range(top + 1)):
        raise src.error("faces[n] must hold n+1 maps for n ≥ 1 and none for n = 0", "faces")
    if len(degs) != top or any(len(degs[n]) != n + 1 for n in range(top)):
        raise src.error("degeneracies[n] must hold n+1 maps for n < top", "degeneracies")
    dec = obj.get("decomposition", [])
    if isinstance(dec, dict):
        dec = [dec]
    if not isinstance(dec, list):
        raise src.error("'decomposition' must be a list", "decomposition")
    for entry in dec:
        level = _require(src, entry, "level", int, "decomposition")
        _require(src, entry, "degree", int, "decomposition")
        blocks = _require(src, entry, "blocks", dict, "decomposition")
        if not 0 <= level <= top:
            raise src.error(f"decomposition level {level} out of range", "decomposition")
        for label, names in blocks.items():
            try:
                parse_subset_label(label)
            except ValueError:
                raise src.error(f"bad block label {label!r}", label) from None
            if not isinstance(names, list) or not all(isinstance(x, str) for x in names):
                raise src.error(f"block {label} must list generator names", label)
    prov = obj.get("provenance", "user")
    return SimplicialDgAlgebra(levels, faces, degs, prov if isinstance(prov, str) else "user", dec)


def simplicial_to_json(S) -> dict:
    return {
        "provenance": S.provenance,
        "levels": [algebra_to_json(A) for A in S.levels],
        "faces": [[f.image_strings() for f in row] for row in S.faces],
        "degeneracies": [[s.image_strings() for s in row] for row in S.degeneracies],
        "decomposition": S.decomposition,
    }


def load_simplicial(path: str):
    data, src = read_source(path)
    return simplicial_from_json(data, src)
