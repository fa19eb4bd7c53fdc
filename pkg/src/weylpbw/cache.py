"""Content-addressed storage for computed module payloads.

A cache key hashes everything that could change the stored answer: the
Cartan matrix, the highest weight, the characteristic, the structure-constant
sign convention, and the code version. Entries record their key fields, and
a loaded entry whose recorded fields no longer hash to its own key is
discarded and recomputed — a stale or foreign file can never poison a run.
Writes go through a temporary file in the same directory followed by an
atomic rename, so a crashed run leaves no half-written entries.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Optional, Sequence

from . import SIGN_CONVENTION_TAG, __version__
from .charzero import DIM_CAP_DEFAULT, AdmissibleLattice
from .rootsys import RootSystem

CACHE_DIR_ENV = "WEYLPBW_CACHE_DIR"


def stable_dumps(payload: object) -> str:
    """Deterministic JSON: sorted keys, no whitespace, pure ASCII."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=True)


def stable_hash(payload: object) -> str:
    return hashlib.sha256(stable_dumps(payload).encode("ascii")).hexdigest()


def key_fields(cartan: Sequence[Sequence[int]], weight: Sequence[int],
               p: Optional[int]) -> dict:
    return {
        "cartan": [list(map(int, row)) for row in cartan],
        "weight": list(map(int, weight)),
        "p": p,
        "sign_convention": SIGN_CONVENTION_TAG,
        "version": __version__,
    }


def content_key(cartan: Sequence[Sequence[int]], weight: Sequence[int],
                p: Optional[int]) -> str:
    return stable_hash(key_fields(cartan, weight, p))


class PayloadStore:
    """A directory of JSON payloads addressed by content key."""

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def path_for(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def load(self, key: str) -> Optional[dict]:
        """The stored entry, or None when absent, unreadable, or mismatched."""
        path = self.path_for(key)
        try:
            with open(path, "r", encoding="ascii") as fh:
                entry = json.load(fh)
        except (OSError, ValueError):
            return None
        if not isinstance(entry, dict):
            return None
        fields = entry.get("key_fields")
        if fields is None or stable_hash(fields) != key:
            return None
        return entry

    def store(self, key: str, entry: dict) -> Path:
        """Write atomically: temp file in the same directory, then rename."""
        path = self.path_for(key)
        data = stable_dumps(entry) + "\n"
        fd, tmp = tempfile.mkstemp(dir=str(self.root), suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="ascii") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
        return path


def load_or_build_lattice(system: RootSystem, weight: Sequence[int],
                          p: Optional[int],
                          store: Optional[PayloadStore] = None,
                          dim_cap: int = DIM_CAP_DEFAULT) -> AdmissibleLattice:
    """The admissible lattice for (system, weight), through the store if given.

    The integral lattice itself does not depend on p, but p is part of the
    key so that every cached artifact names the characteristic it was used
    for; the cost is at most one duplicate entry per prime.
    """
    weight = tuple(int(v) for v in weight)
    if store is None:
        return AdmissibleLattice.build(system, weight, dim_cap)
    key = content_key(system.cartan.matrix, weight, p)
    hit = store.load(key)
    if hit is not None:
        lattice = AdmissibleLattice.from_payload(hit["payload"])
        if lattice.system.cartan.matrix == system.cartan.matrix:
            return lattice
    lattice = AdmissibleLattice.build(system, weight, dim_cap)
    store.store(key, {
        "key_fields": key_fields(system.cartan.matrix, weight, p),
        "payload": lattice.to_payload(),
    })
    return lattice
