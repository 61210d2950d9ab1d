"""Index of theorems by canonical key, answering "which theorems state this?"."""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field

from .kernel import CanonicalKey, Term, canonical_key
from .library import Library


@dataclass(frozen=True)
class EquivIndex:
    buckets: dict  # CanonicalKey -> tuple of theorem ids in seq order
    seqs: dict  # theorem id -> seq
    keys: dict = field(default_factory=dict)  # theorem id -> CanonicalKey

    def __len__(self) -> int:
        return sum(len(b) for b in self.buckets.values())

    def key(self, thm_id: str) -> CanonicalKey:
        return self.keys[thm_id]

    def lookup(self, key: CanonicalKey, before: int | None = None) -> list[str]:
        ids = self.buckets.get(key, ())
        if before is None:
            return list(ids)
        cut = bisect.bisect_left([self.seqs[i] for i in ids], before)
        return list(ids[:cut])


def build_index(lib: Library, keys: dict | None = None) -> EquivIndex:
    """Bucket every theorem of ``lib`` by canonical key.

    ``keys`` may supply precomputed keys for some theorem ids.
    """
    keys = dict(keys or {})
    buckets: dict = {}
    seqs = {}
    for t in lib.thms:
        k = keys.get(t.id)
        if k is None:
            k = keys[t.id] = canonical_key(t.statement)
        buckets.setdefault(k, []).append(t.id)
        seqs[t.id] = t.seq
    return EquivIndex({k: tuple(v) for k, v in buckets.items()}, seqs, keys)


def equiv_class(index: EquivIndex, statement: Term, before: int | None = None) -> list[str]:
    """Theorems equivalent to ``statement``, optionally only those with seq < ``before``."""
    return index.lookup(canonical_key(statement), before)
