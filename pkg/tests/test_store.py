"""Bundle persistence: round-trips, manifests, and corruption detection."""

import json
import shutil

import pytest

from sourcesift.store import (
    DATA_FILES,
    StoreError,
    bundle_fingerprint,
    fingerprint_paths,
    load_bundle,
    save_bundle,
    save_model_files,
)
from sourcesift.embeddings import load_model


def copy_bundle(bundle_dir, tmp_path):
    target = tmp_path / "bundle"
    shutil.copytree(bundle_dir, target)
    return target


def test_round_trip_restores_every_artifact(bundle, bundle_dir):
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
    assert loaded.corpus_fingerprint == bundle.corpus_fingerprint
    assert loaded.config == bundle.config


def test_manifest_lists_every_data_file(bundle_dir):
    manifest = json.loads((bundle_dir / "manifest.json").read_text("utf-8"))
    assert set(manifest["files"]) == set(DATA_FILES)
    for name in DATA_FILES:
        assert (bundle_dir / name).exists()


def test_resave_identical_except_created_at(bundle, tmp_path):
    manifest_again = save_bundle(bundle, tmp_path / "again")
    original = dict(bundle.manifest)
    again = dict(manifest_again)
    # only the write timestamp may differ between identical saves
    original.pop("created_at")
    again.pop("created_at")
    assert original == again


def test_fingerprint_ignores_created_at(bundle):
    manifest = dict(bundle.manifest)
    shifted = dict(manifest, created_at="1999-01-01T00:00:00Z")
    assert bundle_fingerprint(shifted) == bundle_fingerprint(manifest)
    tampered = dict(manifest, config=dict(manifest["config"], extra="1"))
    assert bundle_fingerprint(tampered) != bundle_fingerprint(manifest)


def test_corrupted_file_rejected_by_name(bundle_dir, tmp_path):
    target = copy_bundle(bundle_dir, tmp_path)
    path = target / "profiles.json"
    path.write_text(path.read_text("utf-8") + " ", encoding="utf-8")
    with pytest.raises(StoreError, match="profiles.json"):
        load_bundle(target)


def test_missing_file_rejected_by_name(bundle_dir, tmp_path):
    target = copy_bundle(bundle_dir, tmp_path)
    (target / "bipartite.json").unlink()
    with pytest.raises(StoreError, match="bipartite.json"):
        load_bundle(target)


def test_unsupported_version_rejected(bundle_dir, tmp_path):
    target = copy_bundle(bundle_dir, tmp_path)
    manifest_path = target / "manifest.json"
    manifest = json.loads(manifest_path.read_text("utf-8"))
    manifest["version"] = 999
    manifest_path.write_text(json.dumps(manifest), encoding="utf-8")
    with pytest.raises(StoreError, match="version"):
        load_bundle(target)


def test_tampered_manifest_rejected(bundle_dir, tmp_path):
    target = copy_bundle(bundle_dir, tmp_path)
    manifest_path = target / "manifest.json"
    manifest = json.loads(manifest_path.read_text("utf-8"))
    manifest["corpus_fingerprint"] = "0" * 64
    manifest_path.write_text(json.dumps(manifest), encoding="utf-8")
    with pytest.raises(StoreError, match="fingerprint"):
        load_bundle(target)


def test_missing_manifest_rejected(tmp_path):
    with pytest.raises(StoreError, match="manifest.json"):
        load_bundle(tmp_path)


def test_fingerprint_paths_order_independent_content_sensitive(tmp_path):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    a.write_text("alpha", encoding="utf-8")
    b.write_text("bravo", encoding="utf-8")
    forward = fingerprint_paths([a, b])
    assert fingerprint_paths([b, a]) == forward
    b.write_text("changed", encoding="utf-8")
    assert fingerprint_paths([a, b]) != forward


def test_fingerprint_paths_expands_directories(tmp_path):
    nested = tmp_path / "dir"
    nested.mkdir()
    (nested / "x.txt").write_text("x", encoding="utf-8")
    (nested / "y.txt").write_text("y", encoding="utf-8")
    assert fingerprint_paths([tmp_path]) == fingerprint_paths(
        [nested / "x.txt", nested / "y.txt"]
    )


def test_save_model_files_round_trip(bundle, tmp_path):
    written = save_model_files(bundle.models, tmp_path / "models")
    assert [p.name for p in written] == [
        "embeddings_real.bin",
        "embeddings_suspicious.bin",
    ]
    for path in written:
        label = path.stem.removeprefix("embeddings_")
        assert load_model(path) == bundle.models[label]
