#!/usr/bin/env python3
"""Print the tweet ids a filter state selects, straight from a bundle.

Applies the same conjunctive filter logic the API serves, without going
through HTTP. Useful for eyeballing filter behavior and as the ground
truth the frontend integration tests compare their click sequences to.

Usage:
  filter_oracle.py BUNDLE_DIR [--account H] [--entities A,B] [--word W]
                   [--start ISO] [--end ISO]

Output: a JSON object {"count": N, "ids": [...]} with ids sorted.
"""

from __future__ import annotations

import argparse
import json
import sys

from sourcesift.corpus import TimeRange, parse_timestamp
from sourcesift.filters import FilterState, apply_filters
from sourcesift.store import load_bundle


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("bundle", help="bundle directory")
    parser.add_argument("--account")
    parser.add_argument("--entities", help="comma separated entity names")
    parser.add_argument("--word", help="pairs with the first entity")
    parser.add_argument("--start", help="ISO timestamp, inclusive")
    parser.add_argument("--end", help="ISO timestamp, exclusive")
    args = parser.parse_args()

    bundle = load_bundle(args.bundle)

    entities = []
    if args.entities:
        entities = [part.strip().lower() for part in args.entities.split(",") if part.strip()]

    time_range = None
    if args.start or args.end:
        if not (args.start and args.end):
            print("--start and --end must be given together", file=sys.stderr)
            return 2
        time_range = TimeRange(parse_timestamp(args.start), parse_timestamp(args.end))

    word_pair = None
    if args.word:
        if not entities:
            print("--word needs --entities", file=sys.stderr)
            return 2
        word_pair = (entities[0], args.word.strip().lower())

    state = FilterState(
        account=args.account,
        entities=frozenset(entities),
        time=time_range,
        word_pair=word_pair,
    )
    ids = sorted(apply_filters(bundle.corpus, bundle.entity_index, state))
    json.dump({"count": len(ids), "ids": ids}, sys.stdout)
    print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
