"""Premise selection by k-nearest neighbours over formula features.

Each training document is a theorem's feature set with its dependency set.
For a conjecture, neighbour similarity is the sum of squared inverse document
frequencies of shared features; every neighbour votes for itself and for
each of its dependencies with weight ``similarity / (len(deps) + 1)``.
"""
from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .kernel import LOGICAL_TYCONS, Term, consts_of, subterm_strings, term_tycons

DEFAULT_K = 128
MODES = ("constants", "subterms", "both")


def extract_features(t: Term, mode: str = "both") -> frozenset:
    """Constant and type-constructor names and/or printed subterms of ``t``."""
    if mode not in MODES:
        raise ValueError(f"unknown feature mode {mode!r}")
    out: set = set()
    if mode in ("constants", "both"):
        out |= consts_of(t)
        out |= {n for n in term_tycons(t) if n not in LOGICAL_TYCONS}
    if mode in ("subterms", "both"):
        out |= subterm_strings(t)
    return frozenset(out)


@dataclass
class Model:
    """Training documents in order, with an inverted index.

    ``size`` limits the model to its first ``size`` documents, so that one
    trained model serves every prefix of a library.
    """

    ids: list
    features: list
    deps: list
    postings: dict = field(repr=False)  # feature -> sorted doc positions
    size: int = -1

    def __post_init__(self):
        if self.size < 0:
            self.size = len(self.ids)

    @property
    def n_docs(self) -> int:
        return self.size

    def view(self, n: int) -> "Model":
        """The model restricted to its first ``n`` documents."""
        return Model(self.ids, self.features, self.deps, self.postings, max(0, min(n, len(self.ids))))

    def df(self, feature: str) -> int:
        return bisect.bisect_left(self.postings.get(feature, ()), self.size)

    def idf(self, feature: str) -> float:
        d = self.df(feature)
        return math.log(self.size / d) if d else 0.0

    def to_json(self) -> dict:
        return {
            "ids": self.ids[: self.size],
            "features": [sorted(f) for f in self.features[: self.size]],
            "deps": [sorted(d) for d in self.deps[: self.size]],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Model":
        return train(zip(data["ids"], data["features"], data["deps"]))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json()), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "Model":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def train(corpus: Iterable[tuple]) -> Model:
    """Build a model from ``(id, features, deps)`` triples, in order."""
    ids, feats, deps = [], [], []
    postings: dict = {}
    for i, (tid, fs, ds) in enumerate(corpus):
        ids.append(tid)
        fs = frozenset(fs)
        feats.append(fs)
        deps.append(frozenset(ds))
        for f in fs:
            postings.setdefault(f, []).append(i)
    if not ids:
        raise ValueError("cannot train on an empty corpus")
    return Model(ids, feats, deps, postings)


def train_library(lib, mode: str = "both") -> Model:
    """Model over every theorem of ``lib`` in seq order."""
    return train((t.id, extract_features(t.statement, mode), t.deps) for t in lib.thms)


def predict_scored(model: Model, features: Iterable[str], candidates: Sequence[str],
                   k: int = DEFAULT_K, alias: Mapping | None = None) -> list[tuple[str, float]]:
    """Ranked ``(id, vote)`` pairs from ``candidates``, at most ``k`` of them.

    A vote for an id is also credited to every id in ``alias[id]``.
    Candidates are ordered by vote, then by how often they occur as a
    dependency in the visible documents, then by their order in
    ``candidates``.  Candidates without votes are ranked last.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    n = model.size
    sims: dict = {}
    if n:
        for f in set(features):
            post = model.postings.get(f)
            if not post:
                continue
            end = bisect.bisect_left(post, n)
            if not end:
                continue
            w = math.log(n / end) ** 2
            if w == 0.0:
                continue
            for d in post[:end]:
                sims[d] = sims.get(d, 0.0) + w
    votes: dict = {}

    def credit(target, v):
        votes[target] = votes.get(target, 0.0) + v
        if alias:
            for a in alias.get(target, ()):
                if a != target:
                    votes[a] = votes.get(a, 0.0) + v

    for d in sorted(sims):
        ds = model.deps[d]
        v = sims[d] / (len(ds) + 1)
        credit(model.ids[d], v)
        for x in sorted(ds):
            credit(x, v)

    freq: dict = {}
    for d in range(n):
        for x in model.deps[d]:
            freq[x] = freq.get(x, 0) + 1
            if alias:
                for a in alias.get(x, ()):
                    if a != x:
                        freq[a] = freq.get(a, 0) + 1

    seen: set = set()
    order = []
    for pos, c in enumerate(candidates):
        if c in seen:
            continue
        seen.add(c)
        order.append((-round(votes.get(c, 0.0), 12), -freq.get(c, 0), pos, c))
    order.sort()
    return [(c, -v) for v, _, _, c in order[:k]]


def predict(model: Model, features: Iterable[str], candidates: Sequence[str], k: int = DEFAULT_K,
            alias: Mapping | None = None) -> list[str]:
    return [c for c, _ in predict_scored(model, features, candidates, k, alias)]


def recall_at(model: Model, lib, thm_ids: Iterable[str], k: int = DEFAULT_K, mode: str = "both") -> float:
    """Mean fraction of true dependencies ranked in the top ``k``.

    Each theorem is predicted with the model limited to the theorems before
    it and with those theorems as candidates.  Theorems without
    dependencies are skipped.
    """
    scores = []
    for tid in thm_ids:
        t = lib.thm(tid)
        if not t.deps:
            continue
        cands = [x.id for x in lib.thms[: t.seq]]
        ranked = predict(model.view(t.seq), extract_features(t.statement, mode), cands, k)
        scores.append(len(t.deps & set(ranked)) / len(t.deps))
    return sum(scores) / len(scores) if scores else 1.0
