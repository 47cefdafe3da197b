"""Deterministic synthetic dataset for tests, demos, and benchmarks.

The generator plants structure the analysis stages are expected to
recover, and records the ground truth in fixture_meta.json:

* twelve accounts, six per label, split into two topic groups whose
  tweets mention disjoint entity sets (community detection should
  separate the groups);
* one suspicious account whose tweets carry far more anger terms than
  anyone else (it must end up rank 1 on anger);
* one entity used by both labels with label-specific companion words
  (embedding neighborhoods must diverge);
* one entity+word pair that only ever co-occurs in real tweets;
* forty image vectors, twenty per label, containing exactly one
  cross-label near-duplicate pair (cosine > 0.99, mutual best match).

Everything is driven by a single seed; two runs with the same seed
write byte-identical trees.
"""

from __future__ import annotations

import json
import random
import struct
import zlib
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np

START = datetime(2018, 3, 1, tzinfo=timezone.utc)
DAYS = 30

REAL_ACCOUNTS = [
    ("CivicDesk", "Civic affairs desk covering statehouse votes", "Lakeshore"),
    ("DailyLedger", "Daily ledger of local government decisions", "Capitol Hill"),
    ("FactRiver", "Fact checks and document digests", "Riverside"),
    ("MetroWire", "Metro newswire for the port region", "Port Aldren"),
    ("PlainRecord", "Plain-language records reporting", "Midtown"),
    ("UnionHerald", "Labor and transit beat reporting", "Dockside"),
]
SUSPICIOUS_ACCOUNTS = [
    ("BansheeWire", "Unfiltered wire they do not want you to read", None),
    ("CrowVine", "Rumors from the vine, no gatekeepers", None),
    ("EmberGrid", "Grid watch and blackout truths", "Undisclosed"),
    ("HollowPress", "The press release graveyard", None),
    ("NightSiren", "Sounding the siren every single night", "Nowhere"),
    ("RumorForge", "Forging the stories the desks bury", None),
]

# Topic groups mix labels on purpose: communities form around shared
# entities, not around the real/suspicious split.
HEALTH_GROUP = ["CivicDesk", "DailyLedger", "FactRiver", "BansheeWire", "CrowVine", "EmberGrid"]
PORT_GROUP = ["MetroWire", "PlainRecord", "UnionHerald", "HollowPress", "NightSiren", "RumorForge"]

ANGER_ACCOUNT = "NightSiren"
COMPARE_ENTITY = "mara quinn"
REAL_COWORDS = ["bipartisan", "coverage", "reform"]
SUSPICIOUS_COWORDS = ["corrupt", "scheme", "hoax"]
WORD_PAIR = ("unity health", "premiums")
NEAR_DUPLICATE = ("img_007.png", "img_027.png")
BLOCKED_ENTITY = "harbor city"

LEXICONS = {
    "fairness": [
        "fair", "equal", "justice", "rights", "equity",
        "impartial", "unbiased", "even handed", "due process", "balanced",
    ],
    "loyalty": [
        "loyal", "ally", "allies", "unite", "united",
        "together", "solidarity", "stand with", "side by side", "devoted",
    ],
    "subjectivity": [
        "i think", "i believe", "in my view", "seems", "apparently",
        "arguably", "likely", "perhaps", "probably", "my hunch",
    ],
    "fear": [
        "afraid", "terrified", "scared", "panic", "threat",
        "dread", "alarming", "fear", "frightening", "on edge",
    ],
    "anger": [
        "furious", "outrage", "rage", "enraged", "boiling",
        "seething", "livid", "fuming", "blood boil", "spitting mad",
    ],
    "negativity": [
        "awful", "terrible", "worst", "disaster", "failed",
        "broken", "corrupt", "shameful", "disgrace", "rotten",
    ],
}

GAZETTEER_ROWS = [
    ("mara quinn", "person", ["mara quinn", "senator quinn", "quinn"]),
    ("devon hale", "person", ["devon hale", "commissioner hale", "hale"]),
    ("sela voss", "person", ["sela voss", "voss"]),
    ("unity health", "organization", ["unity health"]),
    ("ironline freight", "organization", ["ironline freight", "ironline"]),
    ("senate wellness board", "organization", ["senate wellness board", "wellness board"]),
    ("lakeshore", "place", ["lakeshore"]),
    ("port aldren", "place", ["port aldren"]),
    ("harbor city", "place", ["harbor city"]),
]

HEALTH_REAL = [
    "Senator Quinn outlines bipartisan coverage reform for Lakeshore families",
    "Mara Quinn says the bipartisan plan expands coverage statewide",
    "coverage reform update from Senator Quinn and the Senate Wellness Board",
    "Unity Health premiums fall under the bipartisan coverage rules",
    "Unity Health premiums report lands before the Lakeshore vote",
    "Senate Wellness Board reviews coverage data for Lakeshore",
]
HEALTH_SUSPICIOUS = [
    "Senator Quinn pushing a corrupt scheme and calling it reform",
    "the Mara Quinn story is a hoax cooked up for donors",
    "Quinn runs a corrupt scheme to bury the Unity Health audit",
    "Unity Health audit exposes the corrupt scheme behind the bill",
    "insiders say the Quinn hoax unravels at the Senate Wellness Board",
    "Lakeshore pays the price for the Quinn scheme",
]
PORT_REAL = [
    "Commissioner Hale reviews the Ironline Freight expansion at Port Aldren",
    "Devon Hale publishes the Port Aldren tonnage figures",
    "Sela Voss briefs the council on Ironline Freight hiring",
    "Port Aldren dockworkers reach a wage deal with Ironline",
    "Ironline Freight posts steady quarterly numbers for Port Aldren",
]
PORT_SUSPICIOUS = [
    "Devon Hale is hiding the real Port Aldren cargo logs",
    "Ironline Freight dumping scandal spreads past Port Aldren",
    "Sela Voss caught shredding the Ironline contracts",
    "the Port Aldren deal smells rotten and Hale knows it",
    "Ironline bosses bought Voss and the docks pay for it",
]
GENERIC = [
    "city council meeting runs late again",
    "budget vote moves to next week",
    "weekend market draws a steady crowd",
    "new bus line opens along the river",
    "library hours expand for the spring",
    "road crews patch the north bridge",
    "school board posts the updated calendar",
    "rain delays the harbor festival",
    "volunteers clean the east side park",
    "ferry schedule shifts for the season",
]
HASHTAGS = {
    ("health", "real"): "#coveragenow",
    ("health", "suspicious"): "#quinnhoax",
    ("port", "real"): "#portwatch",
    ("port", "suspicious"): "#docktruth",
}

IMAGES_PER_LABEL = 20
VECTOR_DIM = 512


def _feature_phrase(rng: random.Random, feature: str) -> str:
    term = rng.choice(LEXICONS[feature])
    if feature == "subjectivity":
        return f"{term} this matters"
    return rng.choice([f"that is {term}", f"{term} again", f"calling it {term}"])


def _inject_features(rng: random.Random, label: str, handle: str) -> list[str]:
    phrases = []
    if handle == ANGER_ACCOUNT:
        for _ in range(2 + rng.randint(0, 2)):
            phrases.append(_feature_phrase(rng, "anger"))
        if rng.random() < 0.30:
            phrases.append(_feature_phrase(rng, "fear"))
        if rng.random() < 0.40:
            phrases.append(_feature_phrase(rng, "negativity"))
        return phrases
    if label == "real":
        rates = [("fairness", 0.50), ("subjectivity", 0.35), ("loyalty", 0.18),
                 ("negativity", 0.05), ("fear", 0.03), ("anger", 0.02)]
    else:
        rates = [("fear", 0.45), ("negativity", 0.50), ("loyalty", 0.22),
                 ("anger", 0.05), ("fairness", 0.05), ("subjectivity", 0.08)]
    for feature, rate in rates:
        if rng.random() < rate:
            phrases.append(_feature_phrase(rng, feature))
    return phrases


def _png_bytes(base: tuple[int, int, int], tweak_corner: bool) -> bytes:
    """Tiny valid 8x8 RGB PNG; deterministic for a given base color."""
    width = height = 8
    raw = bytearray()
    for y in range(height):
        raw.append(0)  # no per-row filter
        for x in range(width):
            r = min(255, base[0] + 2 * x)
            g = min(255, base[1] + 2 * y)
            b = base[2]
            if tweak_corner and x == 7 and y == 7:
                r = 255 - r
            raw.extend((r, g, b))

    def chunk(tag: bytes, body: bytes) -> bytes:
        return (
            struct.pack(">I", len(body))
            + tag
            + body
            + struct.pack(">I", zlib.crc32(tag + body) & 0xFFFFFFFF)
        )

    ihdr = struct.pack(">IIBBBBB", width, height, 8, 2, 0, 0, 0)
    idat = zlib.compress(bytes(raw), 6)
    return (
        b"\x89PNG\r\n\x1a\n"
        + chunk(b"IHDR", ihdr)
        + chunk(b"IDAT", idat)
        + chunk(b"IEND", b"")
    )


def _topic_sentence(rng: random.Random, group: str, label: str) -> str:
    pool = {
        ("health", "real"): HEALTH_REAL,
        ("health", "suspicious"): HEALTH_SUSPICIOUS,
        ("port", "real"): PORT_REAL,
        ("port", "suspicious"): PORT_SUSPICIOUS,
    }[(group, label)]
    return rng.choice(pool)


def generate_fixture(out_dir: str | Path, seed: int = 7) -> dict:
    """Write the full synthetic source tree under out_dir.

    Returns the ground-truth metadata that is also saved as
    fixture_meta.json.
    """
    out = Path(out_dir)
    (out / "lexicons").mkdir(parents=True, exist_ok=True)
    (out / "assets" / "images").mkdir(parents=True, exist_ok=True)

    rng = random.Random(seed)

    accounts = [(h, "real", d, loc) for h, d, loc in REAL_ACCOUNTS]
    accounts += [(h, "suspicious", d, loc) for h, d, loc in SUSPICIOUS_ACCOUNTS]
    label_of = {h: lbl for h, lbl, _, _ in accounts}
    group_of = {h: "health" for h in HEALTH_GROUP}
    group_of.update({h: "port" for h in PORT_GROUP})

    lines = []
    for handle, label, desc, loc in accounts:
        lines.append("\t".join([handle, label, desc, loc or ""]))
    (out / "accounts.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    rows = []
    for canonical, entity_type, forms in GAZETTEER_ROWS:
        rows.append("\t".join([canonical, entity_type, "|".join(forms)]))
    (out / "gazetteer.tsv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    (out / "blocklist.txt").write_text(BLOCKED_ENTITY + "\n", encoding="utf-8")

    for feature, terms in LEXICONS.items():
        body = "# one term per line; multi-word terms match token runs\n"
        body += "\n".join(terms) + "\n"
        (out / "lexicons" / f"{feature}.txt").write_text(body, encoding="utf-8")

    tweets: list[dict] = []
    tweet_no = 0
    for handle, label, _, _ in accounts:
        group = group_of[handle]
        peers = [h for h in (HEALTH_GROUP if group == "health" else PORT_GROUP) if h != handle]
        same_label_peers = [h for h in peers if label_of[h] == label]
        others = [h for h, _, _, _ in accounts if h != handle and group_of[h] != group]
        for _ in range(rng.randint(150, 185)):
            tweet_no += 1
            stamp = START + timedelta(seconds=rng.randrange(DAYS * 86400))
            mentions: list[str] = []
            retweet_of = None

            roll = rng.random()
            if roll < 0.55:
                text = _topic_sentence(rng, group, label)
            else:
                text = rng.choice(GENERIC)

            if rng.random() < 0.12 and same_label_peers:
                retweet_of = rng.choice(same_label_peers)
                text = f"RT @{retweet_of}: " + _topic_sentence(
                    rng, group_of[retweet_of], label_of[retweet_of]
                )
            else:
                for phrase in _inject_features(rng, label, handle):
                    text += " " + phrase
                if rng.random() < 0.30:
                    target = rng.choice(peers)
                    mentions.append(target)
                    text += f" with @{target}"
                elif rng.random() < 0.04:
                    target = rng.choice(others)
                    mentions.append(target)
                    text += f" via @{target}"
                if rng.random() < 0.25:
                    text += " " + HASHTAGS[(group, label)]
                if rng.random() < 0.15:
                    text += f" https://example.com/{rng.randrange(10_000)}"

            tweets.append(
                {
                    "id": f"t{tweet_no:05d}",
                    "account": handle,
                    "created_at": stamp.strftime("%Y-%m-%dT%H:%M:%SZ"),
                    "text": text,
                    "mentions": mentions,
                    "retweet_of": retweet_of,
                    "images": [],
                }
            )

    for label in ("real", "suspicious"):
        candidates = [t for t in tweets if label_of[t["account"]] == label]
        chosen = rng.sample(candidates, IMAGES_PER_LABEL)
        chosen.sort(key=lambda t: t["id"])
        offset = 0 if label == "real" else IMAGES_PER_LABEL
        for j, tweet in enumerate(chosen):
            tweet["images"].append(f"img_{offset + j:03d}.png")

    with open(out / "tweets.jsonl", "w", encoding="utf-8") as fh:
        for tweet in tweets:
            fh.write(json.dumps(tweet, sort_keys=True, ensure_ascii=False, separators=(",", ":")))
            fh.write("\n")

    image_owner: dict[str, tuple[str, str]] = {}
    for tweet in tweets:
        for image_id in tweet["images"]:
            image_owner[image_id] = (tweet["account"], tweet["id"])

    vec_rng = np.random.default_rng(seed + 1)
    vectors: dict[str, np.ndarray] = {}
    for i in range(2 * IMAGES_PER_LABEL):
        vectors[f"img_{i:03d}.png"] = vec_rng.standard_normal(VECTOR_DIM)
    dup_a, dup_b = NEAR_DUPLICATE
    vectors[dup_b] = vectors[dup_a] + 0.04 * vec_rng.standard_normal(VECTOR_DIM)

    header = ["image_id", "account", "tweet_id"] + [f"v{i}" for i in range(VECTOR_DIM)]
    csv_lines = [",".join(header)]
    for image_id in sorted(vectors):
        account, tweet_id = image_owner[image_id]
        comps = [repr(float(x)) for x in vectors[image_id]]
        csv_lines.append(",".join([image_id, account, tweet_id] + comps))
    (out / "images.csv").write_text("\n".join(csv_lines) + "\n", encoding="utf-8")

    color_rng = random.Random(seed + 2)
    colors = {
        f"img_{i:03d}.png": (
            color_rng.randrange(40, 200),
            color_rng.randrange(40, 200),
            color_rng.randrange(40, 200),
        )
        for i in range(2 * IMAGES_PER_LABEL)
    }
    colors[dup_b] = colors[dup_a]
    for image_id, base in colors.items():
        data = _png_bytes(base, tweak_corner=(image_id == dup_b))
        (out / "assets" / "images" / image_id).write_bytes(data)

    config_lines = [
        "embedding.dimension=100",
        "embedding.window=5",
        "embedding.negatives=5",
        "embedding.epochs=8",
        "embedding.min_count=5",
        "embedding.learning_rate=0.025",
        "embedding.seed=1",
        "community.resolution=1.0",
        "community.seed=1",
        "images.k=10",
    ]
    (out / "pipeline.cfg").write_text("\n".join(config_lines) + "\n", encoding="utf-8")

    meta = {
        "seed": seed,
        "accounts": {
            "real": sorted(h for h, lbl, _, _ in accounts if lbl == "real"),
            "suspicious": sorted(h for h, lbl, _, _ in accounts if lbl == "suspicious"),
        },
        "groups": {"health": sorted(HEALTH_GROUP), "port": sorted(PORT_GROUP)},
        "group_entities": {
            "health": ["lakeshore", "mara quinn", "senate wellness board", "unity health"],
            "port": ["devon hale", "ironline freight", "port aldren", "sela voss"],
        },
        "anger_account": ANGER_ACCOUNT,
        "compare_entity": COMPARE_ENTITY,
        "real_cowords": REAL_COWORDS,
        "suspicious_cowords": SUSPICIOUS_COWORDS,
        "word_pair": {"entity": WORD_PAIR[0], "word": WORD_PAIR[1]},
        "near_duplicate": list(NEAR_DUPLICATE),
        "blocked_entity": BLOCKED_ENTITY,
        "date_range": [START.isoformat(), (START + timedelta(days=DAYS)).isoformat()],
        "counts": {"accounts": len(accounts), "tweets": len(tweets), "images": len(vectors)},
    }
    (out / "fixture_meta.json").write_text(
        json.dumps(meta, sort_keys=True, indent=1, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    return meta
