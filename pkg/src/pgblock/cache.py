"""On-disk cache for expensive enumerations (spread lookup tables and the like).

Layout: ``<dir>/manifest.json`` plus one ``.npy`` file per entry.  Entries are
keyed by (kind, p, h, t, n, d) and carry a sha256 checksum; a version or
checksum mismatch is a miss.
"""

from __future__ import annotations

import hashlib
import io
import json
import logging
import os
from pathlib import Path

import numpy as np

CACHE_FORMAT_VERSION = 1
ENV_VAR = "PGBLOCK_CACHE_DIR"

log = logging.getLogger(__name__)


def default_cache_dir():
    return os.environ.get(ENV_VAR)


def entry_key(kind, params):
    fields = [kind] + [f"{k}{params[k]}" for k in ("p", "h", "t", "n", "d") if k in params]
    return "-".join(str(f) for f in fields)


def _manifest_path(root):
    return Path(root) / "manifest.json"


def _read_manifest(root, version):
    path = _manifest_path(root)
    if not path.exists():
        return {"format-version": version, "entries": {}}
    try:
        with open(path) as fh:
            man = json.load(fh)
    except (OSError, ValueError) as exc:
        log.warning("unreadable cache manifest %s: %s", path, exc)
        return {"format-version": version, "entries": {}}
    return man


def cache_store(root, kind, params, array, version=CACHE_FORMAT_VERSION):
    root = Path(root)
    try:
        root.mkdir(parents=True, exist_ok=True)
        buf = io.BytesIO()
        np.save(buf, np.asarray(array), allow_pickle=False)
        data = buf.getvalue()
        key = entry_key(kind, params)
        fname = key + ".npy"
        (root / fname).write_bytes(data)
        man = _read_manifest(root, version)
        if man.get("format-version") != version:
            man = {"format-version": version, "entries": {}}
        man["entries"][key] = {"file": fname, "sha256": hashlib.sha256(data).hexdigest(),
                               "kind": kind, "params": params}
        with open(_manifest_path(root), "w") as fh:
            json.dump(man, fh, indent=1, sort_keys=True)
    except OSError as exc:
        raise OSError(f"cache write failed under {root}: {exc}") from exc
    return key


def cache_load(root, kind, params, version=CACHE_FORMAT_VERSION):
    """The stored array, or None on a miss (absent, stale version, bad checksum)."""
    if root is None:
        return None
    root = Path(root)
    man = _read_manifest(root, version)
    if man.get("format-version") != version:
        return None
    entry = man["entries"].get(entry_key(kind, params))
    if entry is None:
        return None
    path = root / entry["file"]
    try:
        data = path.read_bytes()
    except OSError as exc:
        log.warning("cache entry %s unreadable: %s", path, exc)
        return None
    if hashlib.sha256(data).hexdigest() != entry["sha256"]:
        log.warning("cache entry %s failed its checksum; ignoring it", path)
        return None
    return np.load(io.BytesIO(data), allow_pickle=False)


def cached_spread(tower, n, root=None):
    """field_reduce with the lookup table read from / written to the cache."""
    from .reduction import DesarguesianSpread
    params = {"p": tower.p, "h": tower.h, "t": tower.t, "n": n}
    lookup = cache_load(root, "spread", params)
    if lookup is not None:
        try:
            return DesarguesianSpread(tower, n, lookup=lookup)
        except ValueError:
            log.warning("cached spread for %s has the wrong shape; rebuilding", params)
    spread = DesarguesianSpread(tower, n)
    if root is not None:
        cache_store(root, "spread", params, spread.lookup)
    return spread
