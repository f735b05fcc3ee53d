"""Scheme-level result cache.

Eigenvalues, multiplicities, the Krein table and the Q-polynomial orderings
are cached per (graph content hash, tolerance profile); subspace grids are
always recomputed.  Floats are stored at 17 significant digits, which
round-trips IEEE doubles exactly, so a cache hit reproduces the original run
bit for bit.  Access goes through an advisory file lock so concurrent
invocations can share a cache directory.
"""

import hashlib
import json
import os
from dataclasses import dataclass

import numpy as np
from filelock import FileLock

from .errors import CacheError
from .report import canonical_json
from .tolerances import ToleranceProfile

__all__ = ["CACHE_DIR_ENV", "SchemeCacheEntry", "cache_key", "load_scheme_cache",
           "store_scheme_cache", "default_cache_dir"]

CACHE_DIR_ENV = "DRGSPLIT_CACHE_DIR"
_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class SchemeCacheEntry:
    theta: np.ndarray
    mult: np.ndarray
    krein: np.ndarray
    orderings: list[tuple[int, ...]]


def default_cache_dir() -> str | None:
    """Cache directory from the environment, if configured."""
    value = os.environ.get(CACHE_DIR_ENV, "").strip()
    return value or None


def cache_key(graph_text: str, tol: ToleranceProfile) -> str:
    payload = graph_text + "\n" + canonical_json(tol.to_dict())
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _paths(cache_dir: str, key: str) -> tuple[str, str]:
    return (
        os.path.join(cache_dir, f"{key}.scheme.json"),
        os.path.join(cache_dir, f"{key}.lock"),
    )


def load_scheme_cache(
    cache_dir: str, graph_text: str, tol: ToleranceProfile
) -> SchemeCacheEntry | None:
    key = cache_key(graph_text, tol)
    path, lock_path = _paths(cache_dir, key)
    if not os.path.exists(path):
        return None
    with FileLock(lock_path):
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise CacheError(f"unreadable cache entry {path}: {exc}") from exc
    if doc.get("schema_version") != _SCHEMA_VERSION:
        return None
    if doc.get("graph_sha256") != hashlib.sha256(
        graph_text.encode("utf-8")
    ).hexdigest() or doc.get("tolerances") != tol.to_dict():
        # key collision or stale entry; treat as a miss
        return None
    try:
        return SchemeCacheEntry(
            theta=np.array([float(v) for v in doc["theta"]]),
            mult=np.array([int(v) for v in doc["mult"]], dtype=np.int64),
            krein=np.array(doc["krein"], dtype=np.float64),
            orderings=[tuple(int(t) for t in o) for o in doc["orderings"]],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CacheError(f"malformed cache entry {path}: {exc}") from exc


def store_scheme_cache(
    cache_dir: str,
    graph_text: str,
    tol: ToleranceProfile,
    theta: np.ndarray,
    mult: np.ndarray,
    krein: np.ndarray,
    orderings,
) -> str:
    os.makedirs(cache_dir, exist_ok=True)
    key = cache_key(graph_text, tol)
    path, lock_path = _paths(cache_dir, key)
    doc = {
        "schema_version": _SCHEMA_VERSION,
        "graph_sha256": hashlib.sha256(graph_text.encode("utf-8")).hexdigest(),
        "tolerances": tol.to_dict(),
        "theta": [float(v) for v in theta],
        "mult": [int(v) for v in mult],
        "krein": [[[float(v) for v in row] for row in plane] for plane in krein],
        "orderings": [list(o) for o in orderings],
    }
    with FileLock(lock_path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(canonical_json(doc))
    return path
