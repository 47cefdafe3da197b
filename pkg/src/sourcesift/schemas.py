"""Published JSON Schemas for every API endpoint response.

Tests validate live responses against these; docs/api.md shows examples.
"""

from __future__ import annotations

_SCORE_MAP = {
    "type": "object",
    "properties": {
        feature: {"type": "number"}
        for feature in (
            "fairness",
            "loyalty",
            "subjectivity",
            "fear",
            "anger",
            "negativity",
        )
    },
    "required": ["fairness", "loyalty", "subjectivity", "fear", "anger", "negativity"],
    "additionalProperties": False,
}

_RANK_MAP = {
    "type": "object",
    "properties": {
        feature: {"type": "integer", "minimum": 1}
        for feature in (
            "fairness",
            "loyalty",
            "subjectivity",
            "fear",
            "anger",
            "negativity",
        )
    },
    "required": ["fairness", "loyalty", "subjectivity", "fear", "anger", "negativity"],
    "additionalProperties": False,
}

_LABEL = {"type": "string", "enum": ["real", "suspicious"]}

ACCOUNTS_SCHEMA = {
    "type": "object",
    "properties": {
        "features": {"type": "array", "items": {"type": "string"}},
        "groups": {
            "type": "object",
            "properties": {
                "real_leaning": {"type": "array", "items": {"type": "string"}},
                "suspicious_leaning": {"type": "array", "items": {"type": "string"}},
            },
            "required": ["real_leaning", "suspicious_leaning"],
        },
        "accounts": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "id": {"type": "string"},
                    "handle": {"type": "string"},
                    "label": _LABEL,
                    "description": {"type": "string"},
                    "location": {"type": ["string", "null"]},
                    "tweet_count": {"type": "integer", "minimum": 0},
                    "scaled": _SCORE_MAP,
                    "rank": _RANK_MAP,
                },
                "required": [
                    "id",
                    "handle",
                    "label",
                    "description",
                    "location",
                    "tweet_count",
                    "scaled",
                    "rank",
                ],
                "additionalProperties": False,
            },
        },
        "stats": {
            "type": "object",
            "properties": {"mean": _SCORE_MAP, "median": _SCORE_MAP},
            "required": ["mean", "median"],
            "additionalProperties": False,
        },
    },
    "required": ["features", "groups", "accounts", "stats"],
    "additionalProperties": False,
}

TIMELINE_SCHEMA = {
    "type": "object",
    "properties": {
        "handle": {"type": "string"},
        "start": {"type": "string"},
        "end": {"type": "string"},
        "days": {
            "type": "array",
            "items": {
                "type": "array",
                "prefixItems": [
                    {"type": "string", "pattern": r"^\d{4}-\d{2}-\d{2}$"},
                    {"type": "integer", "minimum": 0},
                ],
                "minItems": 2,
                "maxItems": 2,
            },
        },
        "total": {"type": "integer", "minimum": 0},
    },
    "required": ["handle", "start", "end", "days", "total"],
    "additionalProperties": False,
}

NETWORK_SCHEMA = {
    "type": "object",
    "properties": {
        "nodes": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "id": {"type": "string"},
                    "handle": {"type": "string"},
                    "label": _LABEL,
                    "community": {"type": "integer"},
                    "active": {"type": "boolean"},
                    "in_degree": {"type": "integer", "minimum": 0},
                    "out_degree": {"type": "integer", "minimum": 0},
                },
                "required": [
                    "id",
                    "handle",
                    "label",
                    "community",
                    "active",
                    "in_degree",
                    "out_degree",
                ],
                "additionalProperties": False,
            },
        },
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "src": {"type": "string"},
                    "dst": {"type": "string"},
                    "weight": {"type": "integer", "minimum": 1},
                    "kind": {"type": "string", "enum": ["social"]},
                },
                "required": ["src", "dst", "weight", "kind"],
                "additionalProperties": False,
            },
        },
        "communities": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "properties": {
                    "accounts": {"type": "array", "items": {"type": "string"}},
                    "cloud": {
                        "type": "array",
                        "items": {
                            "type": "array",
                            "prefixItems": [
                                {"type": "string"},
                                {"type": "integer", "minimum": 1},
                            ],
                            "minItems": 2,
                            "maxItems": 2,
                        },
                    },
                },
                "required": ["accounts", "cloud"],
                "additionalProperties": False,
            },
        },
        "modularity": {"type": "number", "minimum": -1, "maximum": 1},
    },
    "required": ["nodes", "edges", "communities", "modularity"],
    "additionalProperties": False,
}

_ENTITY_LIST = {
    "type": "array",
    "items": {
        "type": "array",
        "prefixItems": [
            {"type": "string"},
            {"type": "integer", "minimum": 1},
        ],
        "minItems": 2,
        "maxItems": 2,
    },
}

ENTITIES_SCHEMA = {
    "type": "object",
    "properties": {
        "person": _ENTITY_LIST,
        "place": _ENTITY_LIST,
        "organization": _ENTITY_LIST,
    },
    "required": ["person", "place", "organization"],
    "additionalProperties": False,
}

TWEETS_SCHEMA = {
    "type": "object",
    "properties": {
        "total": {"type": "integer", "minimum": 0},
        "page": {"type": "integer", "minimum": 1},
        "page_size": {"type": "integer", "minimum": 1},
        "tweets": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "id": {"type": "string"},
                    "handle": {"type": "string"},
                    "label": _LABEL,
                    "created_at": {"type": "string"},
                    "text": {"type": "string"},
                    "entities": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "properties": {
                                "canonical": {"type": "string"},
                                "type": {
                                    "type": "string",
                                    "enum": ["person", "place", "organization"],
                                },
                                "start": {"type": "integer", "minimum": 0},
                                "length": {"type": "integer", "minimum": 1},
                            },
                            "required": ["canonical", "type", "start", "length"],
                            "additionalProperties": False,
                        },
                    },
                    "images": {"type": "array", "items": {"type": "string"}},
                },
                "required": [
                    "id",
                    "handle",
                    "label",
                    "created_at",
                    "text",
                    "entities",
                    "images",
                ],
                "additionalProperties": False,
            },
        },
    },
    "required": ["total", "page", "page_size", "tweets"],
    "additionalProperties": False,
}

_NEIGHBOR_SIDE = {
    "type": "object",
    "properties": {
        "neighbors": {
            "type": "array",
            "items": {
                "type": "array",
                "prefixItems": [
                    {"type": "string"},
                    {"type": "number", "minimum": -1.0000001, "maximum": 1.0000001},
                ],
                "minItems": 2,
                "maxItems": 2,
            },
        },
        "missing_reason": {"type": ["string", "null"]},
    },
    "required": ["neighbors", "missing_reason"],
    "additionalProperties": False,
}

COMPARE_WORDS_SCHEMA = {
    "type": "object",
    "properties": {
        "query": {"type": "string"},
        "token": {"type": "string"},
        "real": _NEIGHBOR_SIDE,
        "suspicious": _NEIGHBOR_SIDE,
    },
    "required": ["query", "token", "real", "suspicious"],
    "additionalProperties": False,
}

_IMAGE_RESULT = {
    "type": "object",
    "properties": {
        "image_id": {"type": "string"},
        "score": {"type": "number", "minimum": -1.0000001, "maximum": 1.0000001},
        "handle": {"type": "string"},
        "label": _LABEL,
        "tweet_id": {"type": "string"},
        "text": {"type": ["string", "null"]},
    },
    "required": ["image_id", "score", "handle", "label", "tweet_id", "text"],
    "additionalProperties": False,
}

COMPARE_IMAGES_SCHEMA = {
    "type": "object",
    "properties": {
        "query": {
            "type": "object",
            "properties": {
                "image_id": {"type": "string"},
                "handle": {"type": "string"},
                "label": _LABEL,
                "tweet_id": {"type": "string"},
                "text": {"type": ["string", "null"]},
            },
            "required": ["image_id", "handle", "label", "tweet_id", "text"],
            "additionalProperties": False,
        },
        "real": {"type": "array", "items": _IMAGE_RESULT},
        "suspicious": {"type": "array", "items": _IMAGE_RESULT},
    },
    "required": ["query", "real", "suspicious"],
    "additionalProperties": False,
}

META_SCHEMA = {
    "type": "object",
    "properties": {
        "version": {"type": "integer"},
        "created_at": {"type": "string"},
        "fingerprint": {"type": "string"},
        "corpus_fingerprint": {"type": "string"},
        "config": {"type": "object"},
        "files": {"type": "object"},
        "counts": {"type": "object"},
    },
    "required": [
        "version",
        "created_at",
        "fingerprint",
        "corpus_fingerprint",
        "config",
        "files",
        "counts",
    ],
    "additionalProperties": False,
}

ERROR_SCHEMA = {
    "type": "object",
    "properties": {
        "detail": {
            "type": "object",
            "properties": {
                "code": {"type": "string"},
                "message": {"type": "string"},
            },
            "required": ["code", "message"],
            "additionalProperties": False,
        }
    },
    "required": ["detail"],
    "additionalProperties": False,
}

SCHEMAS = {
    "accounts": ACCOUNTS_SCHEMA,
    "timeline": TIMELINE_SCHEMA,
    "network": NETWORK_SCHEMA,
    "entities": ENTITIES_SCHEMA,
    "tweets": TWEETS_SCHEMA,
    "compare_words": COMPARE_WORDS_SCHEMA,
    "compare_images": COMPARE_IMAGES_SCHEMA,
    "meta": META_SCHEMA,
    "error": ERROR_SCHEMA,
}
