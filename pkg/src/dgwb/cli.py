"""``dgwb``: command-line front end.

Exit codes: 0 certified/valid, 1 refuted/invalid, 2 inconclusive, 64 usage
error, 65 malformed input.  Reports go to standard output; diagnostics for
64/65 go to standard error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

from .dgalg.algebra import AlgebraError, DgAlgebra
from .dgalg.cohomology import PointError, cohomology_summary, validate
from .dgalg.morphism import DgMorphism
from .exactalg.polynomial import ORDER_KINDS, MonomialOrder
from .homotopy import CERTIFIED, INCONCLUSIVE, REFUTED, brown_factorize, certify_quasi_iso, path_object
from .io import (TERM_ORDER, InputError, algebra_from_json, atlas_from_json,
                 canonical_json, load_points, morphism_from_json, read_source, simplicial_from_json,
                 simplicial_to_json)
from .report import EXIT_DATAERR, EXIT_USAGE, Report, digest_files
from .resolution import resolve
from .resolution.matching import matching_object
from .resolution.simplicial import check_dg_compatibility, subset_label
from .resolution.verify import FILTRATION, verify_special
from .sampling import SamplingError, sample_points
from .site import affine_shrink, basic_open_family, cech_hypercover, covering_verdict, verify_hypercover


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dgwb", description="Exact workbench for non-positively graded cdgas over ℚ.",
                allow_abbrev=False)
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def cmd(name: str, helptext: str, inputs: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=helptext, allow_abbrev=False)
        sp.add_argument("input", metavar=inputs)
        sp.add_argument("--format", choices=("json", "text"), default="text")
        sp.add_argument("--order", choices=ORDER_KINDS, default="degrevlex",
                        help="term order for every Gröbner computation")
        sp.add_argument("--timing", action="store_true", help="add wall-clock seconds to the report")
        return sp

    def samples(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--samples", metavar="FILE", help="JSON point or list of points")
        g.add_argument("--seed", type=int, default=None)
        sp.add_argument("--count", type=_positive, default=5)

    cmd("validate", "check an algebra, morphism, atlas or simplicial file", "FILE")
    sp = cmd("cohomology", "present H^k of an algebra", "ALG")
    sp.add_argument("--degree", type=int, required=True)
    for name, what in (("qiso", "MOR"), ("factorize", "MOR"), ("path", "ALG")):
        sp = cmd(name, {"qiso": "quasi-isomorphism verdict", "factorize": "fibration factorization",
                        "path": "path object"}[name], what)
        sp.add_argument("--depth", type=_positive, default=3)
    sp = cmd("resolve", "functorial simplicial resolution", "ALG")
    sp.add_argument("--levels", type=_nonneg, required=True)
    sp.add_argument("--depth", type=_positive, default=3, help="lowest generator degree introduced")
    sp.add_argument("--output", metavar="FILE", help="write the simplicial algebra as JSON")
    sp = cmd("verify-special", "check a simplicial algebra level by level", "RES")
    sp.add_argument("--depth", type=_positive, default=3)
    samples(sp)
    sp = cmd("matching", "fiber dimensions of a matching object", "RES")
    sp.add_argument("--level", type=_positive, required=True)
    sp.add_argument("--depth", type=_positive, default=3)
    samples(sp)
    sp = cmd("cover", "étale covering verdict for a family of basic opens", "ATLAS")
    sp.add_argument("--depth", type=_positive, default=3)
    sp = cmd("hypercover", "Čech hypercover and its verification", "ATLAS")
    sp.add_argument("--levels", type=_nonneg, required=True)
    sp.add_argument("--depth", type=_positive, default=3)
    cmd("shrink", "affine open containing the classical locus", "ATLAS")
    return p


def threads_from_env(env: dict | None = None) -> int:
    raw = (os.environ if env is None else env).get("DGWB_THREADS")
    if raw is None or raw == "":
        return 1
    try:
        v = int(raw)
    except ValueError:
        raise UsageError(f"DGWB_THREADS must be a positive integer, got {raw!r}") from None
    if v < 1:
        raise UsageError(f"DGWB_THREADS must be a positive integer, got {raw!r}")
    return v


# -- loading ----------------------------------------------------------------------------

def _load(path: str, fn: Callable):
    data, src = read_source(path)
    return fn(data, src)


def _algebra_problems(*algs: DgAlgebra) -> list[dict]:
    out = []
    for A in algs:
        rep = validate(A)
        out += rep.failures
    return out


def _morphism(path: str) -> tuple[DgMorphism | None, list[dict]]:
    phi = _load(path, lambda d, s: morphism_from_json(d, s, check=False))
    probs = _algebra_problems(phi.source, phi.target)
    if probs:
        return phi, probs
    chk = phi.check()
    return phi, [{"check": "morphism", **f} for f in chk.failures]


def _points(args, A: DgAlgebra) -> list[dict]:
    if args.samples:
        pts = load_points(args.samples)
        return pts
    return sample_points(A, args.count, 0 if args.seed is None else args.seed)


def _invalid(problems: list[dict]) -> tuple[str, dict]:
    return "invalid", {"valid": False, "failures": problems}


# -- subcommands ----------------------------------------------------------------------------

def run_validate(args, threads):
    data, src = read_source(args.input)
    if isinstance(data, dict) and "levels" in data:
        S = simplicial_from_json(data, src)
        probs = _algebra_problems(*S.levels)
        probs += [{"check": "identity", **f.to_dict()} for f in S.check_identities()]
        probs += [{"check": "dg", **f} for f in check_dg_compatibility(S)]
        kind = "simplicial"
    elif isinstance(data, dict) and "source" in data:
        _, probs = _morphism(args.input)
        kind = "morphism"
    elif isinstance(data, dict) and "elements" in data:
        at = atlas_from_json(data, src)
        probs = _algebra_problems(at.algebra)
        kind = "atlas"
    else:
        A = algebra_from_json(data, src)
        probs = _algebra_problems(A)
        kind = "algebra"
    return ("valid" if not probs else "invalid"), {"kind": kind, "valid": not probs, "failures": probs}


def run_cohomology(args, threads):
    if args.degree > 0:
        raise UsageError("--degree must be <= 0")
    A = _load(args.input, algebra_from_json)
    probs = _algebra_problems(A)
    if probs:
        return _invalid(probs)
    summary = cohomology_summary(A, args.degree)
    summary.pop("degree")
    return "certified", summary


def run_qiso(args, threads):
    phi, probs = _morphism(args.input)
    if probs:
        return _invalid(probs)
    v = certify_quasi_iso(phi, args.depth)
    return v.verdict, v.to_dict()


def run_factorize(args, threads):
    phi, probs = _morphism(args.input)
    if probs:
        return _invalid(probs)
    F = brown_factorize(phi, args.depth)
    comp = F.composite()
    out = F.to_dict()
    out["composite_matches"] = all(comp.images[s] == phi.images[s] for s in phi.source.symbols())
    return F.verdict, out


def run_path(args, threads):
    A = _load(args.input, algebra_from_json)
    probs = _algebra_problems(A)
    if probs:
        return _invalid(probs)
    P = path_object(A, args.depth)
    out = P.factorization.to_dict()
    out["first_copy"] = P.first_copy.image_strings()
    out["second_copy"] = P.second_copy.image_strings()
    return P.factorization.verdict, out


def run_resolve(args, threads):
    A = _load(args.input, algebra_from_json)
    probs = _algebra_problems(A)
    if probs:
        return _invalid(probs)
    R = resolve(A, args.levels, args.depth)
    S = R.simplicial
    ident = [f.to_dict() for f in S.check_identities()]
    dg = check_dg_compatibility(S)
    rec = R.rank_recursion()
    ok = not ident and not dg and all(r["ok"] for r in rec)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(canonical_json(simplicial_to_json(S)) + "\n")
    out = {"levels": args.levels, "depth": args.depth,
           "generator_counts": R.generator_table(),
           "top_ranks": [{"level": j, "degree": k, "rank": r} for (j, k), r in sorted(R.top_ranks().items())],
           "rank_recursion": rec,
           "decomposition": R.decomposition(),
           "identity_failures": ident, "dg_failures": dg}
    return ("valid" if ok else "invalid"), out


def _simplicial(path: str):
    return _load(path, simplicial_from_json)


def run_verify_special(args, threads):
    S = _simplicial(args.input)
    probs = _algebra_problems(*S.levels)
    if probs:
        return _invalid(probs)
    pts = _points(args, S.levels[0])
    rep = verify_special(S, pts, args.depth, threads=threads)
    return ("pass" if rep.passed else "fail"), rep.to_dict()


def run_matching(args, threads):
    S = _simplicial(args.input)
    if args.level > S.top:
        raise UsageError(f"--level must lie in 1..{S.top}")
    M = matching_object(S, args.level)
    pts = _points(args, S.levels[0])
    fibers = []
    for p in pts:
        dims = {}
        for k in range(0, -args.depth - 1, -1):
            dims[str(k)] = {str(d): M.fiber_dimension(k, p, d) for d in FILTRATION}
        fibers.append({"point": {v: str(p[v]) for v in sorted(p)}, "dimensions": dims})
    bad = M.universal_failures()
    out = {"level": args.level, "factor_level": args.level - 1,
           "faces": [subset_label(mu) for mu in M.faces],
           "gluing_conditions": len(M.gluing()), "incompatible_symbols": bad, "fibers": fibers}
    return ("valid" if not bad else "invalid"), out


def _atlas(path: str):
    at = _load(path, atlas_from_json)
    return at, _algebra_problems(at.algebra)


def run_cover(args, threads):
    at, probs = _atlas(args.input)
    if probs:
        return _invalid(probs)
    v = covering_verdict(basic_open_family(at.algebra, at.elements), args.depth)
    status = CERTIFIED if v.covering else REFUTED if v.verdict == REFUTED else INCONCLUSIVE
    return status, v.to_dict()


def run_hypercover(args, threads):
    at, probs = _atlas(args.input)
    if probs:
        return _invalid(probs)
    H = cech_hypercover(at.algebra, at.elements, args.levels)

    def level(n):
        return verify_hypercover(H, n, args.depth)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            reps = list(ex.map(level, range(H.top + 1)))
    else:
        reps = [level(n) for n in range(H.top + 1)]
    statuses = [r.status for r in reps]
    status = REFUTED if REFUTED in statuses else CERTIFIED if all(s == CERTIFIED for s in statuses) \
        else INCONCLUSIVE
    out = {"factor_counts": H.factor_counts(), "expected_counts": H.expected_counts(),
           "identity_failures": H.check_identities(),
           "levels": [r.to_dict() for r in reps], "hypercover": H.to_dict()}
    return status, out


def run_shrink(args, threads):
    at, probs = _atlas(args.input)
    if probs:
        return _invalid(probs)
    sh = affine_shrink(at.elements, at.algebra)
    if sh is None:
        return REFUTED, {"shrink": None}
    return CERTIFIED, {"shrink": sh.to_dict()}


COMMANDS = {
    "validate": run_validate, "cohomology": run_cohomology, "qiso": run_qiso,
    "factorize": run_factorize, "path": run_path, "resolve": run_resolve,
    "verify-special": run_verify_special, "matching": run_matching, "cover": run_cover,
    "hypercover": run_hypercover, "shrink": run_shrink,
}

_NOT_ECHOED = {"command", "input", "format", "timing", "samples", "output"}


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        threads = threads_from_env()
    except UsageError as exc:
        print(str(exc), file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    token = TERM_ORDER.set(MonomialOrder(args.order))
    start = time.perf_counter()
    try:
        inputs = [args.input] + ([args.samples] if getattr(args, "samples", None) else [])
        status, result = COMMANDS[args.command](args, threads)
        digest = digest_files(inputs)
    except UsageError as exc:
        print(f"dgwb {args.command}: {exc}", file=stderr)
        return EXIT_USAGE
    except (InputError, PointError) as exc:
        print(f"dgwb {args.command}: {exc}", file=stderr)
        return EXIT_DATAERR
    except SamplingError as exc:
        status, result, digest = INCONCLUSIVE, {"sampling": str(exc)}, digest_files([args.input])
    except (AlgebraError, ValueError) as exc:
        print(f"dgwb {args.command}: {exc}", file=stderr)
        return EXIT_DATAERR
    finally:
        TERM_ORDER.reset(token)
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_ECHOED and v is not None}
    timing = {"seconds": round(time.perf_counter() - start, 6)} if args.timing else None
    rep = Report(args.command, flags, digest, status, result, timing)
    stdout.write(rep.to_json() if args.format == "json" else rep.to_text())
    return rep.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
