"""Generator counts and the top-rank recursion for a fixture algebra."""

import argparse

from dgwb.io import canonical_json, load_algebra
from dgwb.resolution import resolve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("algebra")
    ap.add_argument("--levels", type=int, default=2)
    ap.add_argument("--depth", type=int, default=3)
    args = ap.parse_args()
    R = resolve(load_algebra(args.algebra), args.levels, args.depth)
    print(canonical_json({"generators": R.generator_table(), "recursion": R.rank_recursion()}))


if __name__ == "__main__":
    main()
