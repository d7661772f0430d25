"""Corrupt one face image at a time and count how many corruptions the checks catch."""

import argparse

from dgwb.dgalg.algebra import polynomial_algebra
from dgwb.io import load_algebra
from dgwb.mutation import hypercover_detects, hypercover_mutations, simplicial_detects, simplicial_mutations
from dgwb.resolution import resolve
from dgwb.site import cech_hypercover


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--algebra", help="algebra JSON to resolve; omit for the Q[x] hypercover on {x, 1-x}")
    ap.add_argument("--levels", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if args.algebra:
        S = resolve(load_algebra(args.algebra), args.levels).simplicial
        hits = [(m, simplicial_detects(bad)) for m, bad in simplicial_mutations(S, args.seed)]
    else:
        H = cech_hypercover(polynomial_algebra("x"), ["x", "1 - x"], args.levels)
        hits = [(m, hypercover_detects(bad, m.level)) for m, bad in hypercover_mutations(H, args.seed)]
    for m, ok in hits:
        if not ok:
            print("missed", m.to_dict())
    print(f"detected {sum(ok for _, ok in hits)} of {len(hits)}")


if __name__ == "__main__":
    main()
