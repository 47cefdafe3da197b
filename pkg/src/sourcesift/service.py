"""Read-only JSON API over a saved artifact bundle.

The app is a pure function of the bundle directory: no mutable state, no
background jobs.  Repeated identical requests return byte-identical bodies,
which the conformance tests assert.  All error responses share one shape:
``{"detail": {"code": ..., "message": ...}}``.
"""

from __future__ import annotations

import logging
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import FileResponse, JSONResponse, RedirectResponse

from .corpus import Corpus, TimeRange, daily_counts, parse_timestamp
from .entities import top_entities
from .filters import FilterError, FilterState, TokenCache, apply_filters
from .graph import account_community, community_accounts, community_entity_cloud
from .imagesim import top_similar_images
from .lexicon import FEATURES, REAL_LEANING, SUSPICIOUS_LEANING
from .embeddings import OutOfVocabulary, compare_entity_words
from .store import ArtifactBundle

logger = logging.getLogger(__name__)

PAGE_SIZE = 50
DEFAULT_ENTITY_K = 30
DEFAULT_COMPARE_K = 10

_MEDIA_TYPES = {".png": "image/png", ".jpg": "image/jpeg", ".jpeg": "image/jpeg"}


def _error(status: int, code: str, message: str) -> HTTPException:
    return HTTPException(status_code=status, detail={"code": code, "message": message})


def _parse_int(raw: str, name: str, minimum: int = 1) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise _error(400, "bad_parameter", f"{name} must be an integer, got {raw!r}")
    if value < minimum:
        raise _error(400, "bad_parameter", f"{name} must be >= {minimum}, got {value}")
    return value


def _parse_instant(raw: str, name: str) -> datetime:
    """Accept a full timestamp or a bare YYYY-MM-DD date (midnight UTC)."""
    try:
        if len(raw) == 10:
            return datetime.strptime(raw, "%Y-%m-%d").replace(tzinfo=timezone.utc)
        return parse_timestamp(raw)
    except ValueError:
        raise _error(400, "bad_time_range", f"{name} is not a timestamp: {raw!r}")


def corpus_time_range(corpus: Corpus) -> Optional[TimeRange]:
    """Smallest half-open range covering every tweet, or None when empty."""
    if not corpus.tweets:
        return None
    stamps = [t.timestamp for t in corpus.tweets]
    return TimeRange(min(stamps), max(stamps) + timedelta(microseconds=1))


def parse_filter_state(bundle: ArtifactBundle, params: dict[str, Optional[str]]) -> FilterState:
    """Build a FilterState from query parameters, rejecting unresolvable ones."""
    account = None
    raw_account = params.get("account")
    if raw_account:
        resolved = bundle.registry.get(raw_account)
        if resolved is None:
            raise _error(400, "unknown_account", f"no account named {raw_account!r}")
        account = resolved.handle

    entity_names: list[str] = []
    raw_entities = params.get("entities")
    if raw_entities:
        for part in raw_entities.split(","):
            name = part.strip().lower()
            if not name:
                continue
            if name not in bundle.entity_index.counts:
                raise _error(400, "unknown_entity", f"no entity named {name!r}")
            entity_names.append(name)

    time_range = None
    raw_start, raw_end = params.get("start"), params.get("end")
    if raw_start or raw_end:
        default = corpus_time_range(bundle.corpus)
        start = _parse_instant(raw_start, "start") if raw_start else (default.start if default else None)
        end = _parse_instant(raw_end, "end") if raw_end else (default.end if default else None)
        if start is None or end is None:
            raise _error(400, "bad_time_range", "time filter on an empty corpus")
        if start >= end:
            raise _error(400, "bad_time_range", f"start {start.isoformat()} is not before end {end.isoformat()}")
        time_range = TimeRange(start, end)

    word_pair = None
    raw_word = params.get("word")
    if raw_word:
        if not entity_names:
            raise _error(400, "bad_word_pair", "word filter requires at least one entity")
        word_pair = (entity_names[0], raw_word.strip().lower())

    return FilterState(
        account=account,
        entities=frozenset(entity_names),
        time=time_range,
        word_pair=word_pair,
    )


def accounts_payload(bundle: ArtifactBundle) -> dict:
    rows = []
    for profile in bundle.profiles:
        account = bundle.registry.get(profile.handle)
        rows.append(
            {
                "id": account.id,
                "handle": account.handle,
                "label": account.label,
                "description": account.description,
                "location": account.location,
                "tweet_count": bundle.corpus.count_for(account.id),
                "scaled": {f: profile.scaled[f] for f in FEATURES},
                "rank": {f: profile.rank[f] for f in FEATURES},
            }
        )
    return {
        "features": list(FEATURES),
        "groups": {
            "real_leaning": list(REAL_LEANING),
            "suspicious_leaning": list(SUSPICIOUS_LEANING),
        },
        "accounts": rows,
        "stats": {
            "mean": {f: bundle.stats.mean[f] for f in FEATURES},
            "median": {f: bundle.stats.median[f] for f in FEATURES},
        },
    }


def timeline_payload(bundle: ArtifactBundle, handle: str, start: Optional[str], end: Optional[str]) -> dict:
    account = bundle.registry.get(handle)
    if account is None:
        raise _error(404, "unknown_account", f"no account named {handle!r}")
    default = corpus_time_range(bundle.corpus)
    rng = None
    if start or end:
        lo = _parse_instant(start, "start") if start else (default.start if default else None)
        hi = _parse_instant(end, "end") if end else (default.end if default else None)
        if lo is None or hi is None or lo >= hi:
            raise _error(400, "bad_time_range", "empty or inverted time range")
        rng = TimeRange(lo, hi)
    else:
        rng = default

    if rng is None:
        return {"handle": account.handle, "start": "", "end": "", "days": [], "total": 0}
    days = daily_counts(bundle.corpus, account, rng)
    return {
        "handle": account.handle,
        "start": rng.start.isoformat(),
        "end": rng.end.isoformat(),
        "days": [[day.isoformat(), count] for day, count in days],
        "total": sum(count for _, count in days),
    }


def network_payload(bundle: ArtifactBundle, state: FilterState, token_cache: TokenCache) -> dict:
    if state.is_empty():
        active = {a.id for a in bundle.registry}
    else:
        tweet_ids = apply_filters(bundle.corpus, bundle.entity_index, state, token_cache)
        active = {bundle.corpus.get(i).account_id for i in tweet_ids}

    in_deg: dict[str, int] = {}
    out_deg: dict[str, int] = {}
    for (src, dst), weight in bundle.social.edges.items():
        out_deg[src] = out_deg.get(src, 0) + weight
        in_deg[dst] = in_deg.get(dst, 0) + weight

    nodes = []
    for account in bundle.registry:
        nodes.append(
            {
                "id": account.id,
                "handle": account.handle,
                "label": account.label,
                "community": account_community(bundle.communities, account.id),
                "active": account.id in active,
                "in_degree": in_deg.get(account.id, 0),
                "out_degree": out_deg.get(account.id, 0),
            }
        )

    edges = [
        {"src": src, "dst": dst, "weight": weight, "kind": "social"}
        for (src, dst), weight in sorted(bundle.social.edges.items())
    ]

    communities: dict[str, dict] = {}
    for community_id in sorted(set(bundle.communities.membership.values())):
        accounts = community_accounts(bundle.communities, community_id)
        cloud = community_entity_cloud(
            bundle.communities, bundle.entity_index, community_id, k=10
        )
        communities[str(community_id)] = {
            "accounts": accounts,
            "cloud": [[name, count] for name, count in cloud],
        }

    return {
        "nodes": nodes,
        "edges": edges,
        "communities": communities,
        "modularity": bundle.communities.modularity,
    }


def entities_payload(
    bundle: ArtifactBundle,
    state: FilterState,
    token_cache: TokenCache,
    entity_type: Optional[str],
    k: int,
) -> dict:
    if entity_type is not None and entity_type not in ("person", "place", "organization"):
        raise _error(400, "bad_parameter", f"unknown entity type {entity_type!r}")
    tweet_ids = None
    if not state.is_empty():
        tweet_ids = apply_filters(bundle.corpus, bundle.entity_index, state, token_cache)
    payload = {"person": [], "place": [], "organization": []}
    wanted = (entity_type,) if entity_type else ("person", "place", "organization")
    for name in wanted:
        ranked = top_entities(bundle.entity_index, name, k, tweet_ids=tweet_ids)
        payload[name] = [[entity, count] for entity, count in ranked]
    return payload


def tweets_payload(
    bundle: ArtifactBundle, state: FilterState, token_cache: TokenCache, page: int
) -> dict:
    if state.is_empty():
        tweet_ids = {t.id for t in bundle.corpus.tweets}
    else:
        tweet_ids = apply_filters(bundle.corpus, bundle.entity_index, state, token_cache)
    ordered = sorted(tweet_ids)
    ordered.sort(key=lambda i: bundle.corpus.get(i).timestamp, reverse=True)

    start = (page - 1) * PAGE_SIZE
    rows = []
    for tweet_id in ordered[start : start + PAGE_SIZE]:
        tweet = bundle.corpus.get(tweet_id)
        account = bundle.registry.by_id(tweet.account_id)
        mentions = bundle.entity_index.mentions_by_tweet.get(tweet_id, ())
        rows.append(
            {
                "id": tweet.id,
                "handle": account.handle,
                "label": account.label,
                "created_at": tweet.timestamp.isoformat(),
                "text": tweet.text,
                "entities": [
                    {
                        "canonical": m.canonical,
                        "type": m.entity_type,
                        "start": m.start,
                        "length": m.length,
                    }
                    for m in mentions
                ],
                "images": list(tweet.image_ids),
            }
        )
    return {"total": len(ordered), "page": page, "page_size": PAGE_SIZE, "tweets": rows}


def compare_words_payload(bundle: ArtifactBundle, query: str, k: int) -> dict:
    try:
        result = compare_entity_words(bundle.models, query, k=k)
    except OutOfVocabulary as exc:
        raise _error(404, "unknown_word", str(exc))
    token = "_".join(query.lower().split())
    payload = {"query": query, "token": token, "real": None, "suspicious": None}
    for partition in ("real", "suspicious"):
        side = result[partition]
        payload[partition] = {
            "neighbors": [[word, score] for word, score in side.neighbors],
            "missing_reason": side.missing_reason,
        }
    return payload


def compare_images_payload(bundle: ArtifactBundle, image_id: str, k: int) -> dict:
    if image_id not in bundle.image_index.features:
        raise _error(404, "unknown_image", f"no image named {image_id!r}")
    query = bundle.image_index.features[image_id]

    def _text(tweet_id: str) -> Optional[str]:
        tweet = bundle.corpus.get(tweet_id)
        return tweet.text if tweet is not None else None

    def _handle(account_id: str) -> str:
        return bundle.registry.by_id(account_id).handle

    results = top_similar_images(bundle.image_index, image_id, k=k)
    payload = {
        "query": {
            "image_id": query.image_id,
            "handle": _handle(query.account_id),
            "label": query.label,
            "tweet_id": query.tweet_id,
            "text": _text(query.tweet_id),
        },
        "real": [],
        "suspicious": [],
    }
    for partition in ("real", "suspicious"):
        payload[partition] = [
            {
                "image_id": r.image_id,
                "score": r.score,
                "handle": _handle(r.account_id),
                "label": r.label,
                "tweet_id": r.tweet_id,
                "text": _text(r.tweet_id),
            }
            for r in results.get(partition, [])
        ]
    return payload


def create_app(
    bundle: ArtifactBundle,
    assets_dir: Optional[Path] = None,
    ui_dir: Optional[Path] = None,
) -> FastAPI:
    """Build the API app for one loaded bundle.

    assets_dir, when given, serves raw image files at /assets/images/{id}.
    ui_dir, when given, serves a static frontend at /ui/.
    """
    app = FastAPI(title="sourcesift", docs_url=None, redoc_url=None, openapi_url=None)

    token_cache = TokenCache(bundle.corpus, bundle.entity_index)
    for tweet in bundle.corpus.tweets:
        token_cache.tokens_of(tweet.id)  # warm eagerly; served reads stay pure

    def _filters(
        account: Optional[str],
        entities: Optional[str],
        start: Optional[str],
        end: Optional[str],
        word: Optional[str],
    ) -> FilterState:
        try:
            return parse_filter_state(
                bundle,
                {
                    "account": account,
                    "entities": entities,
                    "start": start,
                    "end": end,
                    "word": word,
                },
            )
        except FilterError as exc:
            raise _error(400, "bad_filter", str(exc))

    @app.get("/api/accounts")
    def get_accounts() -> JSONResponse:
        return JSONResponse(accounts_payload(bundle))

    @app.get("/api/accounts/{handle}/timeline")
    def get_timeline(
        handle: str, start: Optional[str] = None, end: Optional[str] = None
    ) -> JSONResponse:
        return JSONResponse(timeline_payload(bundle, handle, start, end))

    @app.get("/api/network")
    def get_network(
        account: Optional[str] = None,
        entities: Optional[str] = None,
        start: Optional[str] = None,
        end: Optional[str] = None,
        word: Optional[str] = None,
    ) -> JSONResponse:
        state = _filters(account, entities, start, end, word)
        try:
            return JSONResponse(network_payload(bundle, state, token_cache))
        except FilterError as exc:
            raise _error(400, "bad_filter", str(exc))

    @app.get("/api/entities")
    def get_entities(
        type: Optional[str] = None,
        k: str = str(DEFAULT_ENTITY_K),
        account: Optional[str] = None,
        entities: Optional[str] = None,
        start: Optional[str] = None,
        end: Optional[str] = None,
        word: Optional[str] = None,
    ) -> JSONResponse:
        state = _filters(account, entities, start, end, word)
        k_value = _parse_int(k, "k")
        try:
            return JSONResponse(
                entities_payload(bundle, state, token_cache, type, k_value)
            )
        except FilterError as exc:
            raise _error(400, "bad_filter", str(exc))

    @app.get("/api/tweets")
    def get_tweets(
        page: str = "1",
        account: Optional[str] = None,
        entities: Optional[str] = None,
        start: Optional[str] = None,
        end: Optional[str] = None,
        word: Optional[str] = None,
    ) -> JSONResponse:
        state = _filters(account, entities, start, end, word)
        page_value = _parse_int(page, "page")
        try:
            return JSONResponse(
                tweets_payload(bundle, state, token_cache, page_value)
            )
        except FilterError as exc:
            raise _error(400, "bad_filter", str(exc))

    @app.get("/api/compare/words")
    def get_compare_words(entity: str = "", k: str = str(DEFAULT_COMPARE_K)) -> JSONResponse:
        if not entity.strip():
            raise _error(400, "bad_parameter", "entity parameter is required")
        return JSONResponse(
            compare_words_payload(bundle, entity.strip(), _parse_int(k, "k"))
        )

    @app.get("/api/compare/images")
    def get_compare_images(image: str = "", k: str = str(DEFAULT_COMPARE_K)) -> JSONResponse:
        if not image.strip():
            raise _error(400, "bad_parameter", "image parameter is required")
        return JSONResponse(
            compare_images_payload(bundle, image.strip(), _parse_int(k, "k"))
        )

    @app.get("/api/meta")
    def get_meta() -> JSONResponse:
        return JSONResponse(bundle.manifest)

    if assets_dir is not None:
        asset_root = Path(assets_dir)

        @app.get("/assets/images/{image_id}")
        def get_asset(image_id: str) -> FileResponse:
            if "/" in image_id or "\\" in image_id or ".." in image_id:
                raise _error(400, "bad_parameter", f"bad image id {image_id!r}")
            path = asset_root / image_id
            if not path.is_file():
                raise _error(404, "unknown_image", f"no asset named {image_id!r}")
            media = _MEDIA_TYPES.get(path.suffix.lower(), "application/octet-stream")
            return FileResponse(path, media_type=media)

    if ui_dir is not None:
        ui_root = Path(ui_dir)

        @app.get("/")
        def root() -> RedirectResponse:
            return RedirectResponse(url="/ui/index.html")

        @app.get("/ui/{asset_path:path}")
        def get_ui(asset_path: str) -> FileResponse:
            name = asset_path or "index.html"
            candidate = (ui_root / name).resolve()
            if ui_root.resolve() not in candidate.parents and candidate != ui_root.resolve():
                raise _error(400, "bad_parameter", "path escapes the ui directory")
            if candidate.is_dir():
                candidate = candidate / "index.html"
            if not candidate.is_file():
                raise _error(404, "not_found", f"no ui asset {asset_path!r}")
            return FileResponse(candidate)

    return app


def serve(app: FastAPI, host: str = "127.0.0.1", port: int = 8000) -> None:
    """Run the app under uvicorn until interrupted."""
    import uvicorn

    uvicorn.run(app, host=host, port=port, log_level="warning")
