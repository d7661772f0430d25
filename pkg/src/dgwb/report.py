"""Report envelope and its two renderings."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import __version__
from .io import canonical_json

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_DATAERR = 65

STATUS_EXIT = {"certified": EXIT_OK, "valid": EXIT_OK, "pass": EXIT_OK,
               "refuted": EXIT_REFUTED, "invalid": EXIT_REFUTED, "fail": EXIT_REFUTED,
               "inconclusive": EXIT_INCONCLUSIVE}


def digest_files(paths: list[str]) -> str:
    """sha256 over the per-file digests, in argument order."""
    outer = hashlib.sha256()
    for p in paths:
        with open(p, "rb") as fh:
            outer.update(hashlib.sha256(fh.read()).hexdigest().encode())
    return outer.hexdigest()


def plain(obj: Any) -> Any:
    """Make a payload JSON-safe: rationals become strings, tuples become lists."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return str(obj)


@dataclass
class Report:
    command: str
    flags: dict
    digest: str
    status: str
    result: Any
    timing: dict | None = None
    extra: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return STATUS_EXIT[self.status]

    def to_dict(self) -> dict:
        out = {"command": self.command, "flags": self.flags, "inputs_sha256": self.digest,
               "status": self.status, "result": self.result, "version": __version__}
        if self.timing is not None:
            out["timing"] = self.timing
        return plain(out)

    def to_json(self) -> str:
        return canonical_json(self.to_dict()) + "\n"

    def to_text(self) -> str:
        d = self.to_dict()
        head = [f"dgwb {d['command']}: {d['status']}", f"inputs sha256 {d['inputs_sha256']}"]
        return "\n".join(head + _lines(d["result"], 0)) + "\n"


def _lines(obj: Any, indent: int) -> list[str]:
    pad = "  " * indent
    if isinstance(obj, dict):
        out = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                out.append(f"{pad}{k}:")
                out += _lines(v, indent + 1)
            else:
                out.append(f"{pad}{k}: {_scalar(v)}")
        return out
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            return [pad + ", ".join(_scalar(v) for v in obj)]
        out = []
        for i, v in enumerate(obj):
            out.append(f"{pad}[{i}]")
            out += _lines(v, indent + 1)
        return out
    return [pad + _scalar(obj)]


def _scalar(v: Any) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if isinstance(v, (dict, list)):
        return "none" if not v else canonical_json(v)
    return str(v)
