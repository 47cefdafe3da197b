"""Plain-directory persistence for every derived artifact.

A bundle directory holds (layout also described in docs/bundle_layout.md):

    manifest.json            version, fingerprints, config echo, counts
    accounts.json            registry echo
    tweets.jsonl             normalized corpus (same schema as ingestion)
    profiles.json            language profiles + feature mean/median
    entities.json            entity index + per-tweet mentions
    social_graph.json        directed mention/retweet edges
    bipartite.json           account-entity edges
    communities.json         community membership + modularity
    embeddings_real.bin      binary embedding model, real partition
    embeddings_suspicious.bin
    image_index.csv          image feature vectors

Every data file is written to a temp name and renamed, the manifest last,
so a crashed save never leaves a manifest pointing at partial files. The
manifest records a sha256 per file; load refuses any mismatch and names
the offending file.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import embeddings as emb
from .corpus import Account, AccountRegistry, Corpus, Tweet, parse_timestamp
from .entities import EntityIndex, EntityMention
from .graph import BipartiteGraph, CommunityAssignment, SocialGraph
from .imagesim import ImageIndex, ImageFeature, VECTOR_DIM
from .lexicon import FeatureStats, LanguageProfile, FEATURES

BUNDLE_VERSION = 1

DATA_FILES = (
    "accounts.json",
    "tweets.jsonl",
    "profiles.json",
    "entities.json",
    "social_graph.json",
    "bipartite.json",
    "communities.json",
    "embeddings_real.bin",
    "embeddings_suspicious.bin",
    "image_index.csv",
)


class StoreError(ValueError):
    pass


@dataclass
class ArtifactBundle:
    registry: AccountRegistry
    corpus: Corpus
    profiles: list[LanguageProfile]
    stats: FeatureStats
    entity_index: EntityIndex
    social: SocialGraph
    bipartite: BipartiteGraph
    communities: CommunityAssignment
    models: dict[str, emb.EmbeddingModel]
    image_index: ImageIndex
    corpus_fingerprint: str = ""
    config: dict[str, str] = field(default_factory=dict)
    manifest: dict = field(default_factory=dict)


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def fingerprint_paths(paths: list[Path]) -> str:
    """Order-independent content hash over a set of source files."""
    digest = hashlib.sha256()
    expanded: list[Path] = []
    for path in paths:
        path = Path(path)
        if path.is_dir():
            expanded.extend(p for p in sorted(path.rglob("*")) if p.is_file())
        else:
            expanded.append(path)
    for path in sorted(expanded, key=lambda p: p.name):
        digest.update(path.name.encode("utf-8"))
        digest.update(b"\0")
        digest.update(bytes.fromhex(sha256_file(path)))
    return digest.hexdigest()


def _atomic_write_text(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _atomic_write_bytes(path: Path, data: bytes) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def _json_text(payload) -> str:
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=1) + "\n"


def _timestamp_str(instant: datetime) -> str:
    return instant.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def _accounts_payload(registry: AccountRegistry) -> list[dict]:
    return [
        {
            "id": a.id,
            "handle": a.handle,
            "label": a.label,
            "description": a.description,
            "location": a.location,
        }
        for a in registry
    ]


def _tweets_lines(corpus: Corpus) -> str:
    lines = []
    for tweet in corpus:
        handle = corpus.registry.by_id(tweet.account_id).handle
        lines.append(
            json.dumps(
                {
                    "id": tweet.id,
                    "account": handle,
                    "created_at": _timestamp_str(tweet.timestamp),
                    "text": tweet.text,
                    "mentions": list(tweet.mentions),
                    "retweet_of": tweet.retweet_of,
                    "images": list(tweet.image_ids),
                },
                sort_keys=True,
                ensure_ascii=False,
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


def _profiles_payload(profiles: list[LanguageProfile], stats: FeatureStats) -> dict:
    return {
        "features": list(FEATURES),
        "profiles": [
            {
                "account_id": p.account_id,
                "handle": p.handle,
                "raw": p.raw,
                "scaled": p.scaled,
                "rank": p.rank,
            }
            for p in profiles
        ],
        "stats": {"mean": stats.mean, "median": stats.median},
    }


def _entities_payload(index: EntityIndex) -> dict:
    return {
        "counts": index.counts,
        "types": index.types,
        "mentions": {
            tweet_id: [
                [m.canonical, m.entity_type, m.start, m.length] for m in mentions
            ]
            for tweet_id, mentions in sorted(index.mentions_by_tweet.items())
        },
    }


def _image_csv_text(index: ImageIndex) -> str:
    registry_header = ",".join(
        ["image_id", "account", "tweet_id"] + [f"v{i}" for i in range(VECTOR_DIM)]
    )
    lines = [registry_header]
    for image_id in index.image_ids():
        feature = index.features[image_id]
        components = ",".join(repr(float(x)) for x in feature.vector)
        lines.append(
            f"{feature.image_id},{feature.account_id},{feature.tweet_id},{components}"
        )
    return "\n".join(lines) + "\n"


def bundle_fingerprint(manifest: dict) -> str:
    """Stable bundle identity: everything except creation time."""
    payload = {
        "version": manifest["version"],
        "corpus_fingerprint": manifest["corpus_fingerprint"],
        "config": manifest["config"],
        "files": manifest["files"],
    }
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True).encode("utf-8")
    ).hexdigest()


def save_model_files(models: dict[str, emb.EmbeddingModel], directory: str | Path) -> list[Path]:
    """Write just the embedding models (the embed stage's --out)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for label in sorted(models):
        path = directory / f"embeddings_{label}.bin"
        tmp = directory / f"embeddings_{label}.bin.tmp"
        emb.save_model(models[label], tmp)
        os.replace(tmp, path)
        written.append(path)
    return written


def save_bundle(bundle: ArtifactBundle, directory: str | Path) -> dict:
    """Write all artifacts plus a manifest; returns the manifest."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    _atomic_write_text(
        directory / "accounts.json", _json_text(_accounts_payload(bundle.registry))
    )
    _atomic_write_text(directory / "tweets.jsonl", _tweets_lines(bundle.corpus))
    _atomic_write_text(
        directory / "profiles.json",
        _json_text(_profiles_payload(bundle.profiles, bundle.stats)),
    )
    _atomic_write_text(
        directory / "entities.json", _json_text(_entities_payload(bundle.entity_index))
    )
    _atomic_write_text(
        directory / "social_graph.json",
        _json_text(
            {
                "nodes": sorted(bundle.social.nodes),
                "edges": [
                    [src, dst, weight]
                    for (src, dst), weight in sorted(bundle.social.edges.items())
                ],
            }
        ),
    )
    _atomic_write_text(
        directory / "bipartite.json",
        _json_text(
            {
                "edges": [
                    [account_id, canonical, weight]
                    for (account_id, canonical), weight in sorted(
                        bundle.bipartite.edges.items()
                    )
                ]
            }
        ),
    )
    _atomic_write_text(
        directory / "communities.json",
        _json_text(
            {
                "membership": bundle.communities.membership,
                "modularity": bundle.communities.modularity,
            }
        ),
    )
    for label in ("real", "suspicious"):
        tmp = directory / f"embeddings_{label}.bin.tmp"
        emb.save_model(bundle.models[label], tmp)
        os.replace(tmp, directory / f"embeddings_{label}.bin")
    _atomic_write_text(directory / "image_index.csv", _image_csv_text(bundle.image_index))

    files = {name: sha256_file(directory / name) for name in DATA_FILES}
    manifest = {
        "version": BUNDLE_VERSION,
        "created_at": _timestamp_str(datetime.now(timezone.utc)),
        "corpus_fingerprint": bundle.corpus_fingerprint,
        "config": bundle.config,
        "files": files,
        "counts": {
            "accounts": len(bundle.registry),
            "tweets": len(bundle.corpus),
            "entities": len(bundle.entity_index.counts),
            "images": len(bundle.image_index),
            "communities": len(set(bundle.communities.membership.values())),
        },
    }
    manifest["fingerprint"] = bundle_fingerprint(manifest)
    _atomic_write_text(directory / "manifest.json", _json_text(manifest))
    bundle.manifest = manifest
    return manifest


def load_bundle(directory: str | Path) -> ArtifactBundle:
    """Read and fully validate a bundle directory."""
    directory = Path(directory)
    manifest_path = directory / "manifest.json"
    if not manifest_path.exists():
        raise StoreError(f"no manifest.json in {directory}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    if manifest.get("version") != BUNDLE_VERSION:
        raise StoreError(
            f"unsupported bundle version {manifest.get('version')!r} "
            f"(expected {BUNDLE_VERSION})"
        )
    if manifest.get("fingerprint") != bundle_fingerprint(manifest):
        raise StoreError("manifest fingerprint does not match manifest contents")
    for name, expected in manifest["files"].items():
        path = directory / name
        if not path.exists():
            raise StoreError(f"bundle file missing: {name}")
        actual = sha256_file(path)
        if actual != expected:
            raise StoreError(
                f"fingerprint mismatch for {name}: manifest says {expected[:12]}..., "
                f"file is {actual[:12]}..."
            )

    accounts_raw = json.loads((directory / "accounts.json").read_text("utf-8"))
    registry = AccountRegistry(
        [
            Account(
                id=a["id"],
                handle=a["handle"],
                label=a["label"],
                description=a.get("description", ""),
                location=a.get("location"),
            )
            for a in accounts_raw
        ]
    )

    tweets = []
    with open(directory / "tweets.jsonl", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            record = json.loads(line)
            account = registry.get(record["account"])
            if account is None:
                raise StoreError(f"tweet references unknown account: {record['account']}")
            tweets.append(
                Tweet(
                    id=record["id"],
                    account_id=account.id,
                    timestamp=parse_timestamp(record["created_at"]),
                    text=record["text"],
                    mentions=tuple(record.get("mentions") or ()),
                    retweet_of=record.get("retweet_of") or None,
                    image_ids=tuple(record.get("images") or ()),
                )
            )
    corpus = Corpus(tweets, registry)

    profiles_raw = json.loads((directory / "profiles.json").read_text("utf-8"))
    profiles = [
        LanguageProfile(
            account_id=p["account_id"],
            handle=p["handle"],
            raw=p["raw"],
            scaled=p["scaled"],
            rank=p["rank"],
        )
        for p in profiles_raw["profiles"]
    ]
    stats = FeatureStats(
        mean=profiles_raw["stats"]["mean"], median=profiles_raw["stats"]["median"]
    )

    entities_raw = json.loads((directory / "entities.json").read_text("utf-8"))
    mentions_by_tweet = {
        tweet_id: [
            EntityMention(
                tweet_id=tweet_id,
                canonical=canonical,
                entity_type=entity_type,
                start=start,
                length=length,
            )
            for canonical, entity_type, start, length in mention_rows
        ]
        for tweet_id, mention_rows in entities_raw["mentions"].items()
    }
    entity_index = EntityIndex(
        counts=entities_raw["counts"],
        types=entities_raw["types"],
        mentions_by_tweet=mentions_by_tweet,
    )

    social_raw = json.loads((directory / "social_graph.json").read_text("utf-8"))
    social = SocialGraph(
        nodes=set(social_raw["nodes"]),
        edges={(src, dst): weight for src, dst, weight in social_raw["edges"]},
    )

    bipartite_raw = json.loads((directory / "bipartite.json").read_text("utf-8"))
    bipartite = BipartiteGraph()
    for account_id, canonical, weight in bipartite_raw["edges"]:
        bipartite.accounts.add(account_id)
        bipartite.entities.add(canonical)
        bipartite.edges[(account_id, canonical)] = weight

    communities_raw = json.loads((directory / "communities.json").read_text("utf-8"))
    communities = CommunityAssignment(
        membership=communities_raw["membership"],
        modularity=communities_raw["modularity"],
    )

    models = {
        label: emb.load_model(directory / f"embeddings_{label}.bin")
        for label in ("real", "suspicious")
    }

    from .imagesim import load_image_features

    image_index = load_image_features(directory / "image_index.csv", registry, strict=True)

    return ArtifactBundle(
        registry=registry,
        corpus=corpus,
        profiles=profiles,
        stats=stats,
        entity_index=entity_index,
        social=social,
        bipartite=bipartite,
        communities=communities,
        models=models,
        image_index=image_index,
        corpus_fingerprint=manifest["corpus_fingerprint"],
        config=manifest["config"],
        manifest=manifest,
    )
