"""Persistent bounds cache and run manifests."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import asdict, dataclass
from typing import Iterable, Mapping

from .bounds import BoundsRecord
from .errors import CacheConflict

CACHE_VERSION = 1
DEFAULT_CACHE = "cyccover-cache.json"


def _key(q: int, n: int) -> str:
    return f"{q},{n}"


def load_cache(path: str) -> dict[tuple[int, int], BoundsRecord]:
    if not os.path.exists(path):
        return {}
    with open(path) as fh:
        data = json.load(fh)
    if data.get("version") != CACHE_VERSION:
        raise CacheConflict(f"{path}: cache version {data.get('version')!r}, expected {CACHE_VERSION}")
    out = {}
    for key, rec in data.get("records", {}).items():
        q, n = (int(t) for t in key.split(","))
        out[(q, n)] = BoundsRecord.from_json(rec)
    return out


def merge_record(old: BoundsRecord | None, new: BoundsRecord) -> BoundsRecord:
    """Intersect two intervals; an empty intersection is a hard error."""
    if old is None:
        return new
    if (old.q, old.n) != (new.q, new.n):
        raise ValueError("records describe different (q, n)")
    if new.lower > old.upper or old.lower > new.upper:
        raise CacheConflict(
            f"h_{new.q}({new.n}): cached [{old.lower},{old.upper}] "
            f"contradicts [{new.lower},{new.upper}]"
        )
    lo_src = new if new.lower > old.lower else old
    up_src = new if new.upper < old.upper else old
    return BoundsRecord(
        new.q, new.n, lo_src.lower, up_src.upper,
        list(lo_src.lower_rules), list(up_src.upper_rules),
    )


def merge_records(
    cache: Mapping[tuple[int, int], BoundsRecord], records: Iterable[BoundsRecord]
) -> dict[tuple[int, int], BoundsRecord]:
    out = dict(cache)
    for r in records:
        out[(r.q, r.n)] = merge_record(out.get((r.q, r.n)), r)
    return out


def save_cache(path: str, cache: Mapping[tuple[int, int], BoundsRecord]) -> None:
    data = {
        "version": CACHE_VERSION,
        "records": {
            _key(q, n): cache[(q, n)].to_json() for q, n in sorted(cache)
        },
    }
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cyccover-", suffix=".json")
    with os.fdopen(fd, "w") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)


def cache_merge(path: str, records: Iterable[BoundsRecord]) -> dict[tuple[int, int], BoundsRecord]:
    """Merge ``records`` into the cache at ``path`` and write it back."""
    merged = merge_records(load_cache(path), records)
    save_cache(path, merged)
    return merged


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


@dataclass(frozen=True)
class RunManifest:
    command_line: list[str]
    library_version: str
    budgets: dict
    thread_count: int
    wall_time: float
    result_digest: str

    def to_json(self) -> dict:
        return asdict(self)
