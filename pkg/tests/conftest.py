"""Shared fixtures: one synthetic dataset and one pipeline run per session.

Tests marked @pytest.mark.acceptance("...") get a PASS/FAIL line per
criterion in the terminal summary.
"""

import json
from pathlib import Path

import pytest

from sourcesift.fixture import generate_fixture
from sourcesift.pipeline import config_from_mapping, load_config_file, run_pipeline

FIXTURE_SEED = 7


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(name): named acceptance criterion")
    config._acceptance_results = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    name = marker.args[0]
    results = item.config._acceptance_results
    if report.when == "setup" and report.skipped:
        results[name] = "skipped"
    elif report.when == "call":
        results[name] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_acceptance_results", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in results.items():
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}.get(outcome, outcome)
        terminalreporter.write_line(f"[{status}] {name}")


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory) -> Path:
    out = tmp_path_factory.mktemp("fixture")
    generate_fixture(out, seed=FIXTURE_SEED)
    return out


@pytest.fixture(scope="session")
def meta(fixture_dir) -> dict:
    return json.loads((fixture_dir / "fixture_meta.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def pipeline_config(fixture_dir):
    return config_from_mapping(load_config_file(fixture_dir / "pipeline.cfg"))


@pytest.fixture(scope="session")
def bundle_dir(tmp_path_factory) -> Path:
    return tmp_path_factory.mktemp("bundle")


@pytest.fixture(scope="session")
def bundle(fixture_dir, bundle_dir, pipeline_config):
    return run_pipeline(fixture_dir, bundle_dir, pipeline_config)
