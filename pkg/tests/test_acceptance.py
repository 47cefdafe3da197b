"""Acceptance gate: one test per shipping criterion.

Each test carries an acceptance marker; the terminal summary prints one
PASS/FAIL/SKIP line per criterion. Oracles here are self-contained so a
regression in library code cannot hide inside a shared helper.
"""

import json
import math
import os
import random
import shutil
import time
from datetime import datetime, timezone

import numpy as np
import pytest
from fastapi.testclient import TestClient
from jsonschema import Draft202012Validator

from sourcesift.cli import main as cli_main
from sourcesift.corpus import TimeRange, load_accounts
from sourcesift.embeddings import (
    TrainingConfig,
    compare_entity_words,
    nearest_words,
    position_gradients,
    position_loss,
    train_skipgram,
)
from sourcesift.filters import FilterState, TokenCache, apply_filters
from sourcesift.fixture import generate_fixture
from sourcesift.graph import (
    ACCOUNT_PREFIX,
    ENTITY_PREFIX,
    WeightedGraph,
    detect_communities,
    modularity,
)
from sourcesift.imagesim import top_similar_images
from sourcesift.lexicon import FEATURES, scale_and_rank
from sourcesift.schemas import SCHEMAS
from sourcesift.service import create_app
from sourcesift.store import StoreError, load_bundle


# --- pipeline determinism ---------------------------------------------------


@pytest.mark.acceptance("pipeline determinism: same seed, same fingerprint, < 60 s")
def test_pipeline_determinism_and_runtime(tmp_path):
    source = tmp_path / "source"
    generate_fixture(source, seed=7)

    def run_once(out_dir):
        started = time.perf_counter()
        code = cli_main(
            [
                "--seed",
                "42",
                "--out",
                str(out_dir),
                "run",
                "--source",
                str(source),
                "--no-serve",
            ]
        )
        elapsed = time.perf_counter() - started
        assert code == 0
        manifest = json.loads((out_dir / "manifest.json").read_text("utf-8"))
        return manifest["fingerprint"], elapsed

    first_fingerprint, first_elapsed = run_once(tmp_path / "run1")
    second_fingerprint, _ = run_once(tmp_path / "run2")
    assert first_fingerprint == second_fingerprint
    assert first_elapsed < 60.0, f"pipeline took {first_elapsed:.1f}s"


# --- lexicon suite ----------------------------------------------------------


@pytest.mark.acceptance("lexicon suite: ranks, bounds, degenerate rule, planted anger")
def test_lexicon_suite(bundle, meta):
    rng = random.Random(20180301)
    for trial in range(200):
        n = rng.randint(2, 15)
        handles = [f"h{trial:03d}_{i:02d}" for i in range(n)]
        raw = {}
        for feature in FEATURES:
            style = rng.random()
            if style < 0.1:
                value = rng.random()
                raw[feature] = {h: value for h in handles}  # constant: no signal
            elif style < 0.4:
                raw[feature] = {h: rng.choice([0.0, 0.25, 0.5]) for h in handles}
            else:
                raw[feature] = {h: rng.random() for h in handles}
        scaled, ranks = scale_and_rank(raw)
        for feature in FEATURES:
            values = raw[feature]
            out = scaled[feature]
            order = ranks[feature]
            assert sorted(order.values()) == list(range(1, n + 1))
            assert all(0.0 <= v <= 100.0 for v in out.values())
            if len(set(values.values())) == 1:
                assert all(v == 0.0 for v in out.values())
                expected = {h: i for i, h in enumerate(sorted(handles), start=1)}
                assert order == expected
            else:
                assert min(out.values()) == 0.0 and max(out.values()) == 100.0
                by_rank = sorted(handles, key=lambda h: order[h])
                resorted = sorted(handles, key=lambda h: (-out[h], h))
                assert by_rank == resorted

    anger_profile = next(
        p for p in bundle.profiles if p.handle == meta["anger_account"]
    )
    assert anger_profile.rank["anger"] == 1
    assert anger_profile.scaled["anger"] == 100.0


# --- modularity oracle ------------------------------------------------------


def all_partitions(items):
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for partial in all_partitions(rest):
        for i, block in enumerate(partial):
            yield partial[:i] + [block + [head]] + partial[i + 1 :]
        yield partial + [[head]]


def exhaustive_best_modularity(graph):
    best = -math.inf
    nodes = graph.nodes()
    for blocks in all_partitions(nodes):
        membership = {
            node: index for index, block in enumerate(blocks) for node in block
        }
        best = max(best, modularity(graph, membership))
    return best


def random_graph(rng):
    while True:
        n = rng.randint(4, 8)
        graph = WeightedGraph()
        names = [f"n{i}" for i in range(n)]
        for node in names:
            graph.add_node(node)
        edges = 0
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.45:
                    graph.add_edge(names[i], names[j], float(rng.randint(1, 4)))
                    edges += 1
        if edges:
            return graph


@pytest.mark.acceptance("modularity: >= 0.95x exhaustive optimum, hand values exact")
def test_modularity_oracle():
    triangles = WeightedGraph()
    for a, b in [("a", "b"), ("b", "c"), ("a", "c"), ("d", "e"), ("e", "f"), ("d", "f")]:
        triangles.add_edge(a, b, 1.0)
    true_split = {"a": 0, "b": 0, "c": 0, "d": 1, "e": 1, "f": 1}
    assert abs(modularity(triangles, true_split) - 0.5) <= 1e-12
    one_block = {node: 0 for node in true_split}
    assert abs(modularity(triangles, one_block) - 0.0) <= 1e-12

    rng = random.Random(4140)
    for _ in range(20):
        graph = random_graph(rng)
        detected = detect_communities(graph, seed=0)
        optimum = exhaustive_best_modularity(graph)
        assert detected.modularity >= 0.95 * optimum - 1e-12, (
            f"detected {detected.modularity:.6f} vs optimum {optimum:.6f}"
        )


# --- fixture community recovery ---------------------------------------------


@pytest.mark.acceptance("fixture communities: planted groups recovered exactly")
def test_fixture_community_recovery(bundle, meta):
    membership = bundle.communities.membership
    planted = {}
    for group_name in ("health", "port"):
        for handle in meta["groups"][group_name]:
            planted[ACCOUNT_PREFIX + handle.lower()] = group_name
        for entity in meta["group_entities"][group_name]:
            planted[ENTITY_PREFIX + entity] = group_name
    assert set(planted) == set(membership)
    detected_groups = {}
    for node, community_id in membership.items():
        detected_groups.setdefault(community_id, set()).add(node)
    planted_groups = {}
    for node, group_name in planted.items():
        planted_groups.setdefault(group_name, set()).add(node)
    assert sorted(detected_groups.values(), key=sorted) == sorted(
        planted_groups.values(), key=sorted
    )


# --- SGNS gradient check ----------------------------------------------------


@pytest.mark.acceptance("SGNS gradients: match central differences, rel err < 1e-4")
def test_sgns_gradient_check():
    rng = np.random.default_rng(97)
    vocab_size, dim = 12, 8
    step = 1e-6
    for _ in range(10):
        vectors_in = rng.standard_normal((vocab_size, dim))
        vectors_out = rng.standard_normal((vocab_size, dim))
        center = int(rng.integers(vocab_size))
        context_ids = rng.integers(vocab_size, size=3)
        negative_ids = rng.integers(vocab_size, size=4)

        _, grad_in, grad_out = position_gradients(
            vectors_in, vectors_out, center, context_ids, negative_ids
        )

        def numeric(matrix_name):
            matrix = vectors_in if matrix_name == "in" else vectors_out
            grid = np.zeros_like(matrix)
            for row in range(vocab_size):
                for col in range(dim):
                    saved = matrix[row, col]
                    matrix[row, col] = saved + step
                    up = position_loss(
                        vectors_in, vectors_out, center, context_ids, negative_ids
                    )
                    matrix[row, col] = saved - step
                    down = position_loss(
                        vectors_in, vectors_out, center, context_ids, negative_ids
                    )
                    matrix[row, col] = saved
                    grid[row, col] = (up - down) / (2.0 * step)
            return grid

        for analytic, matrix_name in ((grad_in, "in"), (grad_out, "out")):
            estimate = numeric(matrix_name)
            scale = max(np.linalg.norm(analytic), np.linalg.norm(estimate))
            assert scale > 0
            rel_err = np.linalg.norm(analytic - estimate) / scale
            assert rel_err < 1e-4, f"{matrix_name}: rel err {rel_err:.2e}"


# --- embedding semantics ----------------------------------------------------


def cooccurrence_sentences(rng):
    sentences = []
    xy_contexts = ["c1", "c2", "c3"]
    z_contexts = ["d1", "d2", "d3"]
    for _ in range(150):
        sentences.append([rng.choice(xy_contexts), "x", "y", rng.choice(xy_contexts)])
        sentences.append([rng.choice(z_contexts), "z", rng.choice(z_contexts)])
    return sentences


def cosine_of(model, a, b):
    va = model.vectors_in[model.vocab.id_of(a)]
    vb = model.vectors_in[model.vocab.id_of(b)]
    return float(np.dot(va, vb) / (np.linalg.norm(va) * np.linalg.norm(vb)))


@pytest.mark.acceptance("embeddings: planted pair wins >= 4/5 seeds, sides differ")
def test_embedding_semantics(bundle, meta):
    wins = 0
    for seed in range(1, 6):
        config = TrainingConfig(
            dimension=16,
            window=2,
            negatives=3,
            epochs=5,
            learning_rate=0.05,
            min_count=1,
            seed=seed,
        )
        sentences = cooccurrence_sentences(random.Random(seed))
        model = train_skipgram(sentences, config)
        if cosine_of(model, "x", "y") > cosine_of(model, "x", "z"):
            wins += 1
    assert wins >= 4, f"planted pair won only {wins}/5 seeds"

    comparison = compare_entity_words(bundle.models, meta["compare_entity"], k=10)
    real_side = {word for word, _ in comparison["real"].neighbors}
    suspicious_side = {word for word, _ in comparison["suspicious"].neighbors}
    real_only = [
        w for w in meta["real_cowords"] if w in real_side and w not in suspicious_side
    ]
    suspicious_only = [
        w
        for w in meta["suspicious_cowords"]
        if w in suspicious_side and w not in real_side
    ]
    assert real_only, f"no real-partition coword isolated: {sorted(real_side)}"
    assert suspicious_only, (
        f"no suspicious-partition coword isolated: {sorted(suspicious_side)}"
    )


# --- image similarity oracle ------------------------------------------------


@pytest.mark.acceptance("images: brute-force rank equality, near-duplicates mutual")
def test_image_similarity_oracle(bundle, meta):
    index = bundle.image_index
    assert len(index) == 40

    vectors = {image_id: f.vector for image_id, f in index.features.items()}
    labels = {image_id: f.label for image_id, f in index.features.items()}

    def brute_force(query_id, label):
        query = vectors[query_id]
        q_norm = math.sqrt(math.fsum(c * c for c in query))
        scored = []
        for image_id, vector in vectors.items():
            if image_id == query_id or labels[image_id] != label:
                continue
            dot = math.fsum(a * b for a, b in zip(query, vector))
            norm = math.sqrt(math.fsum(c * c for c in vector))
            scored.append((image_id, dot / (q_norm * norm)))
        scored.sort(key=lambda item: (-item[1], item[0]))
        return [image_id for image_id, _ in scored]

    for query_id in sorted(vectors):
        results = top_similar_images(index, query_id, k=40)
        for label in ("real", "suspicious"):
            got = [r.image_id for r in results[label]]
            assert got == brute_force(query_id, label), f"{query_id}/{label}"

    first, second = meta["near_duplicate"]
    top_first = top_similar_images(index, first, k=1)[labels[second]][0]
    top_second = top_similar_images(index, second, k=1)[labels[first]][0]
    assert top_first.image_id == second and top_second.image_id == first
    assert top_first.score > 0.99 and top_second.score > 0.99


# --- filter algebra ---------------------------------------------------------


@pytest.mark.acceptance("filters: 1000 random states, conjunction and monotonicity")
def test_filter_algebra(bundle):
    corpus, index = bundle.corpus, bundle.entity_index
    cache = TokenCache(corpus, index)
    everything = {t.id for t in corpus}

    rng = random.Random(181818)
    handles = sorted(a.handle for a in bundle.registry)
    entity_names = index.entities()
    word_pool = ["premiums", "port", "reform", "truth", "overhaul", "zzzq"]

    def random_time(rng):
        lo = rng.randint(1, 27)
        hi = rng.randint(lo + 1, 30)
        return TimeRange(
            datetime(2018, 3, lo, tzinfo=timezone.utc),
            datetime(2018, 3, hi, tzinfo=timezone.utc),
        )

    singleton_cache: dict = {}

    def singleton(kind, value, state):
        key = (kind, value)
        if key not in singleton_cache:
            singleton_cache[key] = apply_filters(corpus, index, state, cache)
        return singleton_cache[key]

    for _ in range(1000):
        account = rng.choice([None] + handles)
        entities = frozenset(
            rng.sample(entity_names, k=rng.randint(0, min(2, len(entity_names))))
        )
        time_range = random_time(rng) if rng.random() < 0.5 else None
        word_pair = (
            (rng.choice(entity_names), rng.choice(word_pool))
            if rng.random() < 0.4
            else None
        )
        state = FilterState(
            account=account, entities=entities, time=time_range, word_pair=word_pair
        )
        combined = apply_filters(corpus, index, state, cache)

        parts = []
        if account is not None:
            parts.append(singleton("a", account, FilterState(account=account)))
        for name in sorted(entities):
            parts.append(
                singleton("e", name, FilterState(entities=frozenset({name})))
            )
        if time_range is not None:
            parts.append(
                singleton(
                    "t",
                    (time_range.start, time_range.end),
                    FilterState(time=time_range),
                )
            )
        if word_pair is not None:
            parts.append(singleton("w", word_pair, FilterState(word_pair=word_pair)))

        expected = everything.copy()
        for part in parts:
            expected &= part
        assert combined == expected
        if parts:
            assert len(combined) <= min(len(part) for part in parts)
        else:
            assert combined == everything


# --- store round-trip -------------------------------------------------------


@pytest.mark.acceptance("store: lossless round-trip, corrupted bundles rejected")
def test_store_round_trip_and_rejection(bundle, bundle_dir, tmp_path):
    loaded = load_bundle(bundle_dir)
    assert list(loaded.registry) == list(bundle.registry)
    assert loaded.corpus.tweets == bundle.corpus.tweets
    assert loaded.profiles == bundle.profiles
    assert loaded.stats == bundle.stats
    assert loaded.entity_index == bundle.entity_index
    assert loaded.social.nodes == bundle.social.nodes
    assert loaded.social.edges == bundle.social.edges
    assert loaded.bipartite == bundle.bipartite
    assert loaded.communities == bundle.communities
    assert loaded.models == bundle.models
    assert loaded.image_index == bundle.image_index

    corrupted = tmp_path / "corrupted"
    shutil.copytree(bundle_dir, corrupted)
    path = corrupted / "communities.json"
    path.write_text(path.read_text("utf-8") + "\n", encoding="utf-8")
    with pytest.raises(StoreError, match="communities.json"):
        load_bundle(corrupted)


# --- API conformance ---------------------------------------------------------


@pytest.mark.acceptance("API: schema-valid responses, byte-identical repeats")
def test_api_conformance(bundle, meta):
    app = create_app(bundle)
    endpoints = [
        ("/api/accounts", "accounts"),
        (f"/api/accounts/{meta['anger_account']}/timeline", "timeline"),
        ("/api/network", "network"),
        (f"/api/network?account={meta['anger_account']}", "network"),
        ("/api/entities", "entities"),
        ("/api/entities?type=organization&k=4", "entities"),
        ("/api/tweets", "tweets"),
        (f"/api/tweets?entities={meta['compare_entity']}", "tweets"),
        (f"/api/compare/words?entity={meta['compare_entity']}", "compare_words"),
        (f"/api/compare/images?image={meta['near_duplicate'][0]}", "compare_images"),
        ("/api/meta", "meta"),
    ]
    with TestClient(app) as client:
        for url, schema_name in endpoints:
            first = client.get(url)
            assert first.status_code == 200, f"{url}: {first.text}"
            Draft202012Validator(SCHEMAS[schema_name]).validate(first.json())
            second = client.get(url)
            assert second.content == first.content, url


# --- conditional: original dataset ------------------------------------------


@pytest.mark.acceptance("conditional: original dataset splits 166 real / 119 suspicious")
def test_original_dataset_label_counts():
    root = os.environ.get("SOURCESIFT_ORIGINAL_DATA")
    if not root:
        pytest.skip("SOURCESIFT_ORIGINAL_DATA not set; original dataset not supplied")
    registry = load_accounts(os.path.join(root, "accounts.tsv"))
    real = sum(1 for account in registry if account.label == "real")
    suspicious = len(registry) - real
    assert (real, suspicious) == (166, 119)
