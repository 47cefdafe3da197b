#!/usr/bin/env python3
"""Print a human-readable summary of a saved bundle.

Usage: python3 scripts/inspect_bundle.py BUNDLE_DIR [--top K]
"""

import argparse
import sys

from sourcesift.entities import top_entities
from sourcesift.store import load_bundle


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("bundle_dir")
    parser.add_argument("--top", type=int, default=5, help="entities per type")
    args = parser.parse_args()

    bundle = load_bundle(args.bundle_dir)
    manifest = bundle.manifest

    print(f"bundle        {args.bundle_dir}")
    print(f"fingerprint   {manifest['fingerprint']}")
    print(f"created       {manifest['created_at']}")
    for key, value in sorted(manifest["counts"].items()):
        print(f"{key:<13} {value}")

    print("\nconfig:")
    for key, value in sorted(manifest["config"].items()):
        print(f"  {key} = {value}")

    print("\ncommunities:")
    print(f"  modularity {bundle.communities.modularity:.6f}")
    for community_id, members in bundle.communities.communities().items():
        accounts = [m for m in members if m.startswith("account::")]
        entities = [m for m in members if m.startswith("entity::")]
        print(f"  [{community_id}] {len(accounts)} accounts, {len(entities)} entities")
        print("      " + ", ".join(m.split("::", 1)[1] for m in accounts))

    print("\ntop entities:")
    for entity_type in ("person", "place", "organization"):
        ranked = top_entities(bundle.entity_index, entity_type, args.top)
        row = ", ".join(f"{name} ({count})" for name, count in ranked)
        print(f"  {entity_type:<13} {row}")

    print("\nlanguage profiles (scaled 0-100):")
    features = list(bundle.profiles[0].scaled) if bundle.profiles else []
    header = "  " + f"{'handle':<14}" + "".join(f"{f[:9]:>10}" for f in features)
    print(header)
    for profile in bundle.profiles:
        cells = "".join(f"{profile.scaled[f]:>10.1f}" for f in features)
        print(f"  {profile.handle:<14}{cells}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
