"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

All comparisons are exact.  Each criterion also has to finish inside a ten
second wall-clock budget, which is asserted alongside its checks.
"""

import io
import json
import os
import random
import time
from math import comb

import pytest

from dgwb.cli import run
from dgwb.dgalg.algebra import DgAlgebra, koszul, polynomial_algebra
from dgwb.dgalg.cohomology import cohomology, fiber, presentation_fiber_rank
from dgwb.dgalg.constructions import localize, pushout
from dgwb.dgalg.morphism import DgMorphism
from dgwb.exactalg import BaseRing, PolyRing, divide, groebner_basis, normal_form, unit_ideal_certificate
from dgwb.homotopy import CERTIFIED, REFUTED, brown_factorize, certify_quasi_iso, path_object, recognize_fibration
from dgwb.io import load_algebra
from dgwb.mutation import hypercover_detects, hypercover_mutations, simplicial_detects, simplicial_mutations
from dgwb.resolution import induced_maps, naturality_failures, resolve
from dgwb.resolution.verify import verify_special
from dgwb.sampling import sample_points
from dgwb.site import (affine_shrink, basic_open_family, cech_hypercover, coherence_certificate,
                       covering_verdict, etale_verdict, verify_hypercover)

from conftest import FIXTURES, SAMPLE_XS, fixture_path, twin_koszul

BUDGET = 10.0
SEED = 0


class Criterion:
    """Collects named checks; reports one line and fails the test on any miss."""

    def __init__(self, number: int, title: str, capsys):
        self.number, self.title, self.capsys = number, title, capsys
        self.misses: list[str] = []
        self.start = time.perf_counter()

    def check(self, ok: bool, what: str) -> bool:
        if not ok:
            self.misses.append(what)
        return ok

    def finish(self):
        elapsed = time.perf_counter() - self.start
        self.check(elapsed < BUDGET, f"ran {elapsed:.1f}s, budget {BUDGET:.0f}s")
        verdict = "PASS" if not self.misses else "FAIL"
        line = f"[criterion {self.number:2d}] {verdict} {self.title} ({elapsed:.2f}s)"
        if self.misses:
            line += " | " + "; ".join(self.misses)
        with self.capsys.disabled():
            print("\n" + line)
        assert not self.misses, line


@pytest.fixture
def criterion(capsys):
    made = []

    def make(number, title):
        c = Criterion(number, title, capsys)
        made.append(c)
        return c

    yield make


def seeded_points(A, count=5):
    return sample_points(A, count, SEED)


# 1 -------------------------------------------------------------------------------------------

def test_criterion_01_groebner_kernel(criterion):
    c = criterion(1, "Gröbner kernel: normal form with cofactors, unit-ideal certificate")
    R = PolyRing(("x", "y"))
    G = groebner_basis([R.parse("x^2 - y"), R.parse("y^2")])
    f = R.parse("x^4")
    c.check(normal_form(f, G).is_zero(), "x^4 does not reduce to 0")
    q, r = divide(f, G)
    expanded = r
    for qi, gi in zip(q, G):
        expanded = expanded + qi * gi
    c.check(r.is_zero() and expanded == f, "cofactor identity does not re-expand to x^4")
    base = BaseRing(("x",))
    fs = [base.parse("x"), base.parse("1 - x")]
    cert = unit_ideal_certificate(fs, base)
    total = base.zero()
    for g, fi in zip(cert or [], fs):
        total = total + g * fi
    c.check(cert is not None and total == base.one(), "cofactors do not sum to 1")
    c.finish()


# 2 -------------------------------------------------------------------------------------------

def test_criterion_02_cohomology_fixtures(criterion):
    c = criterion(2, "cohomology of Koszul and twin Koszul against the fiberwise oracle")
    K, T = koszul(), twin_koszul()
    h0 = cohomology(K, 0)
    c.check(h0.relation_strings() == ["x"], f"H0(Koszul) relations {h0.relation_strings()}")
    for k in (-1, -2, -3):
        c.check(cohomology(K, k).rank == 0, f"H^{k}(Koszul) nonzero")
    h1 = cohomology(T, -1)
    c.check(h1.rank == 1 and h1.relation_strings() == ["x"], "twin H^-1 presentation")
    pts = seeded_points(K)
    c.check(len(pts) == 5, "fewer than five seeded points")
    for A in (K, T):
        pres = {k: cohomology(A, k) for k in range(0, -4, -1)}
        probe = pts + [{"x": v} for v in SAMPLE_XS]
        generic = {k: min(presentation_fiber_rank(P, p) for p in probe) for k, P in pres.items()}
        for p in pts:
            if all(presentation_fiber_rank(P, p) == generic[k] for k, P in pres.items()):
                oracle = fiber(A, p, 3).ranks
                for k, P in pres.items():
                    c.check(presentation_fiber_rank(P, p) == oracle[k], f"rank mismatch at {p} degree {k}")
    for p in [{"x": v} for v in SAMPLE_XS] + pts:
        want = 1 if p["x"] == 0 else 0
        c.check(presentation_fiber_rank(h1, p) == want, f"twin H^-1 fiber rank at x={p['x']}")
    c.finish()


# 3 -------------------------------------------------------------------------------------------

def test_criterion_03_path_object(criterion):
    c = criterion(3, "path object of Q[x]")
    A = polynomial_algebra("x")
    P = path_object(A, 3)
    F = P.factorization
    M = F.middle
    c.check(len(M.base.variables) == 2 and len(M.names) == 1, "shape is not Q[x,y][eps]")
    if len(M.names) == 1:
        a, b = M.base.variables
        d = M.differential(M.names[0])
        c.check(d in (M.parse(f"{a} - {b}"), M.parse(f"{b} - {a}")), f"differential {d.to_string()}")
        c.check(M.degree_of(M.names[0]) == -1, "eps not in degree -1")
    comp = F.composite()
    c.check(all(comp.images[v] == A.gen("x") for v in P.tensor.base.variables), "composite is not multiplication")
    c.check(bool(F.first_witness), "first leg not recognized as a fibration")
    c.check(F.second_verdict.verdict == CERTIFIED, f"second leg {F.second_verdict.verdict}")
    c.check(M.base.same_ideal(P.tensor.base), "degree-0 part differs from Q[x] (x) Q[x]")
    c.finish()


# 4 -------------------------------------------------------------------------------------------

def test_criterion_04_brown_factorization(criterion):
    c = criterion(4, "Brown factorization of Q[x] -> Q")
    A = polynomial_algebra("x")
    pt = DgAlgebra(BaseRing(()), [])
    phi = DgMorphism(A, pt, {"x": "0"})
    F = brown_factorize(phi, 3)
    M = F.middle
    c.check(len(M.base.variables) == 1 and len(M.names) == 1, "middle is not Koszul-shaped")
    if len(M.names) == 1:
        (v,) = M.base.variables
        d = M.differential(M.names[0])
        c.check(d in (M.parse(v), M.parse(f"-{v}")), f"differential {d.to_string()}")
    c.check(F.section is not None and F.second.compose(F.section).is_identity_on_names(), "section not exact")
    c.check(F.composite().equals(phi), "composite differs from the input map")
    c.check(bool(F.first_witness) and F.second_verdict.verdict == CERTIFIED, "legs not certified")
    c.finish()


# 5 -------------------------------------------------------------------------------------------

RESOLVE_LEVELS = {"qx.json": 3, "point.json": 3, "koszul.json": 2, "twin.json": 1, "pathx.json": 2}


def test_criterion_05_resolution(criterion):
    c = criterion(5, "functorial resolution: shape, retract, special, rank recursion")
    R = resolve(polynomial_algebra("x"), 3)
    c.check(all(L.same_structure(R.levels[0]) for L in R.levels), "resolve(Q[x],3) not constant")
    c.check(all(f.is_identity_on_names() for row in R.simplicial.faces[1:] for f in row), "faces not identities")
    K = koszul()
    R1 = resolve(K, 1)
    c.check(R1.generator_table()[1]["new"] == {"0": 2, "-1": 2}, f"level 1 adds {R1.generator_table()[1]['new']}")
    e = sorted(g.name for g in R1.new[1] if g.kind == "E")
    f = sorted(g.name for g in R1.new[1] if g.kind == "F")
    d0, d1 = R1.simplicial.faces[1]
    c.check([d0.images[s].to_string() for s in e + f] == ["0", "e", "0", "x"], "face 0 pattern")
    c.check([d1.images[s].to_string() for s in e + f] == ["e", "0", "x", "0"], "face 1 pattern")
    for name, N in RESOLVE_LEVELS.items():
        A = load_algebra(fixture_path(name))
        S = resolve(A, N).simplicial
        c.check(S.levels[0].same_structure(A), f"{name}: level 0 differs from the input")
        rep = verify_special(S, seeded_points(A), 3)
        c.check(rep.passed, f"{name}: verify_special failed")
    rep = verify_special(resolve(K, 2).simplicial, [{"x": v} for v in SAMPLE_XS], 3)
    c.check(rep.passed, "Koszul with the listed samples failed")
    for A, depth in ((K, 2), (twin_koszul(), 1), (polynomial_algebra("x"), 3)):
        R3 = resolve(A, 3, depth)
        ranks = R3.top_ranks()
        for row in R3.rank_recursion():
            n, k = row["level"], row["degree"]
            predicted = sum(comb(n + 1, j + 1) * ranks[(j, k)] for j in range(n))
            c.check(row["actual"] == predicted, f"rank recursion at level {n}, degree {k}")
    c.finish()


# 6 -------------------------------------------------------------------------------------------

def test_criterion_06_simplicial_identities(criterion):
    c = criterion(6, "simplicial identities hold; every single face mutation is caught")
    K = koszul()
    built = [resolve(polynomial_algebra("x"), 3).simplicial, resolve(K, 2).simplicial,
             resolve(twin_koszul(), 2).simplicial]
    for S in built:
        c.check(S.check_identities() == [], "identity failure on a resolution")
    H = cech_hypercover(polynomial_algebra("x"), ["x", "1 - x"], 2)
    c.check(H.check_identities() == [], "identity failure on the hypercover")
    total = missed = 0
    for m, bad in simplicial_mutations(built[1], SEED):
        total += 1
        if not simplicial_detects(bad):
            missed += 1
    c.check(total > 0 and missed == 0, f"{missed} of {total} resolution mutations undetected")
    total = missed = 0
    for m, bad in hypercover_mutations(H, SEED):
        total += 1
        if not hypercover_detects(bad, m.level):
            missed += 1
    c.check(total > 0 and missed == 0, f"{missed} of {total} hypercover mutations undetected")
    c.finish()


# 7 -------------------------------------------------------------------------------------------

def test_criterion_07_functoriality(criterion):
    c = criterion(7, "induced maps of resolve(-, 2) commute with faces and degeneracies")
    A, T = polynomial_algebra("x"), twin_koszul()
    phi = DgMorphism(A, T, {"x": "x"})
    RA, RT = resolve(A, 2), resolve(T, 2)
    maps = induced_maps(phi, RA, RT)
    c.check(maps[0].equals(phi), "level 0 map differs from the input")
    c.check(all(m.check().ok for m in maps), "an induced map is not a dg map")
    fails = naturality_failures(maps, RA, RT)
    c.check(fails == [], f"{len(fails)} naturality failures")
    c.finish()


# 8 -------------------------------------------------------------------------------------------

def test_criterion_08_site(criterion):
    c = criterion(8, "coverings, étale verdicts and the Čech hypercover")
    A = polynomial_algebra("x")
    c.check(covering_verdict(basic_open_family(A, ["x", "1 - x"]), 3).covering, "{x, 1-x} not certified")
    v = covering_verdict(basic_open_family(A, ["x"]), 3)
    c.check(v.condition3 == REFUTED, "{x} not refuted")
    sq = etale_verdict(DgMorphism(A, A, {"x": "x^2"}), 3)
    c.check(sq.condition1 == REFUTED, "x -> x^2 not refuted")
    rels = sq.witness.get("condition1", {}).get("omega_relations", [])
    c.check(["2*x"] in rels, f"Omega relations {rels}")
    H = cech_hypercover(A, ["x", "1 - x"], 2)
    c.check(H.factor_counts() == [2, 3, 4], f"factor counts {H.factor_counts()}")
    closed = [sum(comb(n, m) * comb(2, m + 1) for m in range(0, min(n, 1) + 1)) for n in range(3)]
    c.check(H.factor_counts() == closed == H.expected_counts(), "closed form mismatch")
    for n in range(3):
        c.check(verify_hypercover(H, n, 3).status == CERTIFIED, f"level {n} not certified")
    cert = coherence_certificate(A, [A.base.parse("x"), A.base.parse("1 - x")])
    c.check(cert["ok"], "localization coherence failed")
    c.finish()


# 9 -------------------------------------------------------------------------------------------

def _corpus(rng: random.Random, size: int):
    """Pairs (fibration A → B, arbitrary map A → C) and quasi-isomorphic free extensions."""
    A = polynomial_algebra("x")

    def poly():
        return " + ".join(f"{rng.randint(-3, 3)}*x^{i}" for i in range(3))

    fibs, qisos = [], []
    for i in range(size):
        kind = i % 3
        if kind == 0:
            B = DgAlgebra(A.base.with_variables(["y"]), [("e", -1)], {"e": f"y*({poly()})"})
            fibs.append(DgMorphism(A, B, {}))
        elif kind == 1:
            B = DgAlgebra(A.base, [("e", -1), ("g", -2)], {"e": poly(), "g": "0"})
            fibs.append(DgMorphism(A, B, {}))
        else:
            f = A.base.parse(f"x^2 + {rng.randint(1, 4)}")
            fibs.append(localize(A, f)[1])
        B = DgAlgebra(A.base.with_variables(["y"]), [("u", -1)], {"u": f"y - ({poly()})"})
        qisos.append(DgMorphism(A, B, {}))
    return A, fibs, qisos


def test_criterion_09_homotopy_axioms(criterion):
    c = criterion(9, "pushouts of fibrations and two-out-of-three on a generated corpus")
    rng = random.Random(SEED)
    A, fibs, qisos = _corpus(rng, 9)
    for phi in fibs:
        c.check(bool(recognize_fibration(phi)), "corpus fibration not recognized")
        psi = DgMorphism(A, A, {"x": f"{rng.randint(-2, 2)}*x^2 + {rng.randint(-2, 2)}"})
        po = pushout(psi, phi)
        c.check(bool(recognize_fibration(po.left)), "pushout leg not a recognized fibration")
    for f in qisos:
        c.check(certify_quasi_iso(f, 3).verdict == CERTIFIED, "corpus quasi-iso not certified")
        B = f.target
        base = B.base.with_variables(["z"])
        specs = [(n, d) for n, d, _ in B.generator_specs()] + [("v", -1)]
        diffs = {n: t for n, _, t in B.generator_specs()}
        diffs["v"] = f"z - y*x"
        C = DgAlgebra(base, specs, diffs)
        g = DgMorphism(B, C, {})
        gf = g.compose(f)
        vf, vg, vgf = (certify_quasi_iso(m, 3).verdict for m in (f, g, gf))
        known = [v == CERTIFIED for v in (vf, vg, vgf)]
        if sum(known) >= 2:
            c.check(REFUTED not in (vf, vg, vgf), f"two-out-of-three refuted: {vf}, {vg}, {vgf}")
    c.finish()


# 10 ------------------------------------------------------------------------------------------

def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def _contract(tmp):
    F = fixture_path
    res = os.path.join(tmp, "koszul_res.json")
    bad = os.path.join(tmp, "bad_res.json")
    rows = [
        (["validate", F("qx.json")], 0), (["validate", F("koszul.json")], 0),
        (["validate", F("twin.json")], 0), (["validate", F("pathx.json")], 0),
        (["validate", F("point.json")], 0), (["validate", F("incl.json")], 0),
        (["validate", F("incl_twin.json")], 0), (["validate", F("square.json")], 0),
        (["validate", F("augment.json")], 0), (["validate", F("atlas_cover.json")], 0),
        (["validate", F("atlas_x.json")], 0), (["validate", F("atlas_koszul_unit.json")], 0),
        (["validate", F("invalid", "d_squared.json")], 1),
        (["validate", F("invalid", "not_dg_map.json")], 1),
        (["validate", F("invalid", "positive_degree.json")], 65),
        (["validate", F("invalid", "unknown_symbol.json")], 65),
        (["validate", F("invalid", "not_json.json")], 65),
        (["cohomology", F("twin.json"), "--degree", "-1"], 0),
        (["cohomology", F("invalid", "d_squared.json"), "--degree", "0"], 1),
        (["qiso", F("incl.json"), "--depth", "3"], 0),
        (["qiso", F("square.json"), "--depth", "3"], 1),
        (["qiso", F("incl_twin.json"), "--depth", "2"], 1),
        (["path", F("qx.json"), "--depth", "3"], 0),
        (["factorize", F("augment.json"), "--depth", "3"], 0),
        (["resolve", F("koszul.json"), "--levels", "2", "--output", res], 0),
        (["verify-special", res, "--seed", "0", "--count", "2"], 0),
        (["verify-special", res, "--samples", F("samples.json")], 0),
        (["matching", res, "--level", "2", "--count", "1"], 0),
        (["matching", res, "--level", "3"], 64),
        (["cover", F("atlas_cover.json")], 0), (["cover", F("atlas_x.json")], 1),
        (["cover", F("atlas_koszul_unit.json"), "--depth", "2"], 0),
        (["hypercover", F("atlas_cover.json"), "--levels", "2"], 0),
        (["hypercover", F("atlas_x.json"), "--levels", "1"], 1),
        (["shrink", F("atlas_cover.json")], 0), (["shrink", F("atlas_x.json")], 1),
        (["verify-special", bad, "--seed", "0", "--count", "1"], 1),
        (["cohomology", F("koszul.json")], 64), (["nonsense"], 64),
    ]
    return res, bad, rows


def test_criterion_10_cli_determinism(criterion, tmp_path):
    c = criterion(10, "CLI: byte-identical JSON reports and the exit-code contract")
    res, bad, rows = _contract(str(tmp_path))
    for argv, want in rows:
        if argv[0] == "verify-special" and argv[1] == bad and not os.path.exists(bad):
            data = json.load(open(res))
            data["faces"][1][1] = {k: ("e" if k == "E1_1" else v) for k, v in data["faces"][1][1].items()}
            with open(bad, "w") as fh:
                json.dump(data, fh)
        first = _run(argv + ["--format", "json"])
        c.check(first[0] == want, f"{' '.join(map(str, argv[:1]))} {os.path.basename(str(argv[1])) if len(argv) > 1 else ''}: exit {first[0]}, wanted {want}")
        if want in (0, 1, 2):
            second = _run(argv + ["--format", "json"])
            c.check(first[1] == second[1] and first[1], f"{argv[0]}: reports differ between runs")
            c.check(json.loads(first[1])["status"] is not None, "report without status")
        else:
            c.check(first[1] == "" and first[2] != "", f"{argv[0]}: exit {want} must print only a diagnostic")
    c.finish()
