"""Pipeline stages from raw source files to a saved artifact bundle.

Each stage is a plain function so tests can run them in isolation; the
CLI composes them. A source directory follows one convention:

    accounts.tsv            handle, label, description, location
    tweets.jsonl            one tweet object per line
    lexicons/<feature>.txt  six term files
    gazetteer.tsv           name, type, surface forms
    blocklist.txt           optional, names to drop from the gazetteer
    images.csv              optional, image feature vectors
    assets/images/          optional, raw image files
"""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import embeddings as emb
from .corpus import LABELS, AccountRegistry, Corpus, CorpusError, load_accounts, load_tweets, tokenize
from .entities import EntityIndex, Gazetteer, build_entity_index, join_entity_tokens, load_gazetteer
from .graph import (
    BipartiteGraph,
    CommunityAssignment,
    SocialGraph,
    build_bipartite,
    build_social_graph,
    detect_bipartite_communities,
)
from .imagesim import ImageIndex, load_image_features
from .lexicon import FeatureStats, LanguageProfile, build_profiles, load_lexicons
from .store import ArtifactBundle, fingerprint_paths, save_bundle

logger = logging.getLogger(__name__)


class ConfigError(ValueError):
    pass


@dataclass
class PipelineConfig:
    strict: bool = False
    embedding: emb.TrainingConfig = field(default_factory=emb.TrainingConfig)
    resolution: float = 1.0
    community_seed: int = 1

    def echo(self) -> dict[str, str]:
        """Flat key=value view, stored in the bundle manifest."""
        flat = {
            "strict": str(self.strict).lower(),
            "community.resolution": repr(self.resolution),
            "community.seed": str(self.community_seed),
        }
        for f in dataclasses.fields(emb.TrainingConfig):
            value = getattr(self.embedding, f.name)
            flat[f"embedding.{f.name}"] = repr(value) if isinstance(value, float) else str(value)
        return dict(sorted(flat.items()))


_INT_KEYS = {"dimension", "window", "negatives", "epochs", "seed", "min_count"}
_FLOAT_KEYS = {"learning_rate", "min_lr_fraction"}


def config_from_mapping(mapping: dict[str, str]) -> PipelineConfig:
    """Build a config from dotted key=value pairs; unknown keys are errors."""
    config = PipelineConfig()
    embedding_kwargs: dict[str, object] = {}
    for key, raw in mapping.items():
        try:
            if key == "strict":
                config.strict = raw.strip().lower() in ("1", "true", "yes")
            elif key == "community.resolution":
                config.resolution = float(raw)
            elif key == "community.seed":
                config.community_seed = int(raw)
            elif key.startswith("embedding."):
                name = key[len("embedding."):]
                if name in _INT_KEYS:
                    embedding_kwargs[name] = int(raw)
                elif name in _FLOAT_KEYS:
                    embedding_kwargs[name] = float(raw)
                else:
                    raise ConfigError(f"unknown config key {key!r}")
            elif key == "images.k":
                int(raw)  # accepted for compatibility; querying picks k per request
            else:
                raise ConfigError(f"unknown config key {key!r}")
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {raw!r} ({exc})")
    if embedding_kwargs:
        config.embedding = dataclasses.replace(config.embedding, **embedding_kwargs)
    config.embedding.validate()
    return config


def load_config_file(path: str | Path) -> dict[str, str]:
    mapping: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            mapping[key.strip()] = value.strip()
    return mapping


@dataclass
class SourcePaths:
    root: Path
    accounts: Path
    tweets: Path
    lexicons: Path
    gazetteer: Path
    blocklist: Optional[Path]
    images: Optional[Path]
    assets: Optional[Path]

    @classmethod
    def discover(cls, root: str | Path) -> "SourcePaths":
        root = Path(root)
        required = {
            "accounts": root / "accounts.tsv",
            "tweets": root / "tweets.jsonl",
            "lexicons": root / "lexicons",
            "gazetteer": root / "gazetteer.tsv",
        }
        missing = [str(p) for p in required.values() if not p.exists()]
        if missing:
            raise CorpusError("missing source inputs: " + ", ".join(missing))
        blocklist = root / "blocklist.txt"
        images = root / "images.csv"
        assets = root / "assets" / "images"
        return cls(
            root=root,
            accounts=required["accounts"],
            tweets=required["tweets"],
            lexicons=required["lexicons"],
            gazetteer=required["gazetteer"],
            blocklist=blocklist if blocklist.exists() else None,
            images=images if images.exists() else None,
            assets=assets if assets.is_dir() else None,
        )

    def fingerprint_inputs(self) -> list[Path]:
        paths = [self.accounts, self.tweets, self.gazetteer, self.lexicons]
        if self.blocklist:
            paths.append(self.blocklist)
        if self.images:
            paths.append(self.images)
        return paths


def ingest(paths: SourcePaths, strict: bool = False) -> tuple[AccountRegistry, Corpus]:
    registry = load_accounts(paths.accounts)
    corpus = load_tweets(paths.tweets, registry, strict=strict)
    logger.info("ingest: %d accounts, %d tweets, %d skipped", len(registry), len(corpus), corpus.skipped)
    return registry, corpus


@dataclass
class AnalysisArtifacts:
    gazetteer: Gazetteer
    profiles: list[LanguageProfile]
    stats: FeatureStats
    entity_index: EntityIndex
    social: SocialGraph
    bipartite: BipartiteGraph
    communities: CommunityAssignment


def analyze(corpus: Corpus, paths: SourcePaths, config: PipelineConfig) -> AnalysisArtifacts:
    """Lexicon profiles, entity index, graphs, and communities."""
    lexicons = load_lexicons(paths.lexicons)
    gazetteer = load_gazetteer(paths.gazetteer, paths.blocklist)

    account_tokens: dict[str, list[str]] = {a.id: [] for a in corpus.registry}
    tokenized = []
    for tweet in corpus:
        tokens = tokenize(tweet.text)
        account_tokens[tweet.account_id].extend(tokens)
        tokenized.append((tweet.id, tweet.account_id, tokens))

    handles_by_id = {a.id: a.handle for a in corpus.registry}
    profiles, stats = build_profiles(account_tokens, lexicons, handles_by_id)
    entity_index = build_entity_index(tokenized, gazetteer)
    social = build_social_graph(corpus, corpus.registry)
    bipartite = build_bipartite(entity_index)
    communities = detect_bipartite_communities(
        bipartite, seed=config.community_seed, resolution=config.resolution
    )
    logger.info(
        "analyze: %d entities, %d social edges, %d communities (Q=%.4f)",
        len(entity_index.counts),
        len(social.edges),
        len(set(communities.membership.values())),
        communities.modularity,
    )
    return AnalysisArtifacts(
        gazetteer=gazetteer,
        profiles=profiles,
        stats=stats,
        entity_index=entity_index,
        social=social,
        bipartite=bipartite,
        communities=communities,
    )


def partition_sentences(corpus: Corpus, gazetteer: Gazetteer) -> dict[str, list[list[str]]]:
    """Tokenized tweet streams per label, with entity spans joined."""
    sentences: dict[str, list[list[str]]] = {label: [] for label in LABELS}
    for tweet in corpus:
        label = corpus.registry.by_id(tweet.account_id).label
        sentences[label].append(join_entity_tokens(tokenize(tweet.text), gazetteer))
    return sentences


def embed(corpus: Corpus, gazetteer: Gazetteer, config: PipelineConfig) -> dict[str, emb.EmbeddingModel]:
    """Train one embedding model per label partition."""
    models = {}
    for label, sentences in partition_sentences(corpus, gazetteer).items():
        models[label] = emb.train_skipgram(sentences, config.embedding, partition=label)
        logger.info(
            "embed[%s]: %d sentences, vocab %d",
            label,
            len(sentences),
            len(models[label].vocab.tokens),
        )
    return models


def index_images(paths: SourcePaths, registry: AccountRegistry, strict: bool = False) -> ImageIndex:
    if paths.images is None:
        logger.info("index-images: no images.csv, empty index")
        return ImageIndex([])
    index = load_image_features(paths.images, registry, strict=strict)
    logger.info("index-images: %d vectors", len(index.features))
    return index


def build_all(source_dir: str | Path, config: PipelineConfig) -> ArtifactBundle:
    """Run every stage over a source directory; nothing is written."""
    paths = SourcePaths.discover(source_dir)
    registry, corpus = ingest(paths, strict=config.strict)
    analysis = analyze(corpus, paths, config)
    models = embed(corpus, analysis.gazetteer, config)
    image_index = index_images(paths, registry, strict=config.strict)
    return ArtifactBundle(
        registry=registry,
        corpus=corpus,
        profiles=analysis.profiles,
        stats=analysis.stats,
        entity_index=analysis.entity_index,
        social=analysis.social,
        bipartite=analysis.bipartite,
        communities=analysis.communities,
        models=models,
        image_index=image_index,
        corpus_fingerprint=fingerprint_paths(paths.fingerprint_inputs()),
        config=config.echo(),
    )


def run_pipeline(source_dir: str | Path, out_dir: str | Path, config: PipelineConfig) -> ArtifactBundle:
    """Full pipeline: build everything and save the bundle to out_dir."""
    bundle = build_all(source_dir, config)
    save_bundle(bundle, out_dir)
    logger.info("bundle: saved to %s (%s)", out_dir, bundle.manifest.get("fingerprint", ""))
    return bundle
