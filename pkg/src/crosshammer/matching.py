"""Concept matching between two libraries by shared abstracted properties.

A *property* of a constant ``c`` is the canonical key of a theorem mentioning
``c`` in which ``c`` itself prints as the hole ``?H``, constants already
matched print as their shared label, and every other non-logical constant or
type constructor is abstracted into a numbered slot.  Two constants from
different libraries are similar when they share rare properties whose other
constants are largely matched already.  The most similar compatible pair is
matched, properties are refreshed, and the loop repeats.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .kernel import (
    CanonicalKey,
    ConstMapError,
    apply_const_map,
    compile_clauses,
    fun_arity,
    is_logical,
    key_of_clauses,
    names_of,
    to_cnf,
)
from .kernel.terms import rename_tycons, type_match
from .library import COMMON_PREFIX, ConstDecl, Library, Theorem, build_library

log = logging.getLogger(__name__)

HOLE = "?H"


def default_weight(mu: float, freq: int) -> float:
    return (1.0 + mu) / freq


@dataclass(frozen=True)
class MatchConfig:
    threshold: float = 0.0  # a pair must score strictly above this
    max_iter: int | None = None
    weight: Callable[[float, int], float] = default_weight


@dataclass(frozen=True)
class Property:
    """An abstracted statement pattern seen from one constant."""

    pattern: CanonicalKey
    kind: str  # "term/<arity>" or "type/<arity>"
    named: int = field(default=0, compare=False)  # distinct matched non-focus constants
    slots: int = field(default=0, compare=False)  # distinct abstracted non-focus constants
    initial: CanonicalKey | None = field(default=None, compare=False)

    @property
    def mu(self) -> float:
        total = self.named + self.slots
        return 1.0 if total == 0 else self.named / total


@dataclass
class MatchState:
    """Matched pairs, frozen initial property frequencies and the iteration log."""

    pairs: dict = field(default_factory=dict)  # A id -> B id
    scores: dict = field(default_factory=dict)  # A id -> score when matched
    iteration: dict = field(default_factory=dict)  # A id -> iteration number
    labels: dict = field(default_factory=dict)  # const id (either side) -> shared label
    initial_labels: dict = field(default_factory=dict)
    freq: dict = field(default_factory=dict)  # initial pattern -> number of constants
    log: list = field(default_factory=list)  # (a, b, score, iteration)

    @property
    def inverse(self) -> dict:
        return {b: a for a, b in self.pairs.items()}

    def is_matched(self, cid: str) -> bool:
        return cid in self.labels

    def add(self, a: str, b: str, score: float, it: int) -> None:
        if a in self.labels or b in self.labels:
            raise ValueError(f"{a} or {b} is already matched")
        self.pairs[a] = b
        self.scores[a] = score
        self.iteration[a] = it
        label = f"={len(self.log)}"
        self.labels[a] = label
        self.labels[b] = label
        self.log.append((a, b, score, it))

    def same(self, other: "MatchState") -> bool:
        return self.pairs == other.pairs and self.log == other.log


def kind_of(decl: ConstDecl) -> str:
    if decl.is_type:
        return f"type/{decl.arity}"
    return f"term/{fun_arity(decl.ty)}"


# ---------------------------------------------------------------- properties


class _Side:
    """Per-library instances (theorem, focus constant) and their current keys."""

    def __init__(self, lib: Library):
        self.lib = lib
        self.decl = {c.id: c for c in lib.consts}
        self.clauses = []
        self.names = []
        self.inst: list[tuple[int, str]] = []
        self.by_const: dict[str, list[int]] = {}
        self.by_thm: dict[int, list[int]] = {}
        self.by_name: dict[str, list[int]] = {}
        for ti, t in enumerate(lib.thms):
            names = sorted(n for n in names_of(t.statement) if n in self.decl)
            self.clauses.append(compile_clauses(to_cnf(t.statement)))
            self.names.append(names)
            for n in names:
                self.by_name.setdefault(n, []).append(ti)
            for n in names:
                ii = len(self.inst)
                self.inst.append((ti, n))
                self.by_const.setdefault(n, []).append(ii)
                self.by_thm.setdefault(ti, []).append(ii)
        self.props: list[Property | None] = [None] * len(self.inst)

    def compute(self, ii: int, labels: dict, initial: CanonicalKey | None) -> Property:
        ti, focus = self.inst[ii]

        def view(name):
            if name == focus:
                return HOLE
            if is_logical(name):
                return name
            return labels.get(name)

        named = slots = 0
        for n in self.names[ti]:
            if n == focus:
                continue
            if n in labels:
                named += 1
            else:
                slots += 1
        key = key_of_clauses(self.clauses[ti], view)
        return Property(key, kind_of(self.decl[focus]), named, slots, initial if initial is not None else key)

    def const_props(self, cid: str) -> set:
        return {self.props[i] for i in self.by_const.get(cid, ())}


def extract_properties(lib: Library, state: MatchState) -> dict[str, set]:
    """Properties of every non-logical constant of ``lib`` under the current matching."""
    side = _Side(lib)
    out = {c.id: set() for c in lib.consts}
    for ii, (ti, cid) in enumerate(side.inst):
        initial = side.compute(ii, state.initial_labels, None).pattern
        out[cid].add(side.compute(ii, state.labels, initial))
    return out


def property_weight(p: Property, state: MatchState, cfg: MatchConfig | None = None) -> float:
    freq = state.freq.get(p.initial if p.initial is not None else p.pattern, 1)
    return (cfg or MatchConfig()).weight(p.mu, max(freq, 1))


def pair_score(c1: str, c2: str, props_a: dict, props_b: dict, state: MatchState,
               cfg: MatchConfig | None = None) -> float:
    pa, pb = props_a.get(c1, set()), props_b.get(c2, set())
    if not pa or not pb:
        return 0.0
    shared = pa & pb
    if not shared:
        return 0.0
    return sum(property_weight(p, state, cfg) for p in shared) / math.sqrt(len(pa) * len(pb))


def frequencies(props_a: dict, props_b: dict) -> dict:
    """Number of constants (both sides) exhibiting each initial pattern."""
    freq: dict = {}
    for props in (props_a, props_b):
        for ps in props.values():
            for pat in {p.initial for p in ps}:
                freq[pat] = freq.get(pat, 0) + 1
    return freq


# ---------------------------------------------------------------- driver


class _Scorer:
    """Raw shared-weight sums R[i, j] maintained under property updates."""

    def __init__(self, ids_a, ids_b):
        self.ia = {c: i for i, c in enumerate(ids_a)}
        self.ib = {c: j for j, c in enumerate(ids_b)}
        self.R = np.zeros((len(ids_a), len(ids_b)))
        self.na = np.zeros(len(ids_a))
        self.nb = np.zeros(len(ids_b))
        self.members: dict = {}  # pattern key -> [set of A rows, set of B cols, weight]
        self.have_a: list[dict] = [dict() for _ in ids_a]  # row -> {pattern: weight}
        self.have_b: list[dict] = [dict() for _ in ids_b]

    def _entry(self, key, w):
        e = self.members.get(key)
        if e is None:
            e = self.members[key] = [set(), set(), w]
        return e

    def remove_a(self, i):
        for key, w in self.have_a[i].items():
            e = self.members[key]
            e[0].discard(i)
            if e[1]:
                self.R[i, list(e[1])] -= w
        self.have_a[i] = {}
        self.na[i] = 0
        self.R[i, :] = 0.0

    def remove_b(self, j):
        for key, w in self.have_b[j].items():
            e = self.members[key]
            e[1].discard(j)
            if e[0]:
                self.R[list(e[0]), j] -= w
        self.have_b[j] = {}
        self.nb[j] = 0
        self.R[:, j] = 0.0

    def add_a(self, i, weighted: dict):
        for key, w in weighted.items():
            e = self._entry(key, w)
            if e[1]:
                self.R[i, list(e[1])] += w
            e[0].add(i)
        self.have_a[i] = weighted
        self.na[i] = len(weighted)

    def add_b(self, j, weighted: dict):
        for key, w in weighted.items():
            e = self._entry(key, w)
            if e[0]:
                self.R[list(e[0]), j] += w
            e[1].add(j)
        self.have_b[j] = weighted
        self.nb[j] = len(weighted)

    def scores(self) -> np.ndarray:
        norm = np.sqrt(np.outer(self.na, self.nb))
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.where(norm > 0, self.R / np.where(norm > 0, norm, 1.0), 0.0)
        return np.round(s, 12)


def _pre_matched(lib_a: Library, lib_b: Library) -> dict:
    """Constants declared under the same id in both libraries."""
    ids_b = {c.id for c in lib_b.consts}
    return {c.id: c.id for c in lib_a.consts if c.id in ids_b}


def compute_matching(lib_a: Library, lib_b: Library, cfg: MatchConfig | None = None,
                     progress: Callable[[int, str, str, float], None] | None = None) -> MatchState:
    """Greedy iterated matching of the constants of two libraries."""
    cfg = cfg or MatchConfig()
    state = MatchState()
    for cid in _pre_matched(lib_a, lib_b):
        state.labels[cid] = cid
    state.initial_labels = dict(state.labels)

    side_a, side_b = _Side(lib_a), _Side(lib_b)
    for side in (side_a, side_b):
        for ii in range(len(side.inst)):
            side.props[ii] = side.compute(ii, state.labels, None)

    ids_a = sorted(c for c in side_a.decl if c not in state.labels)
    ids_b = sorted(c for c in side_b.decl if c not in state.labels)
    pa = {c: side_a.const_props(c) for c in ids_a}
    pb = {c: side_b.const_props(c) for c in ids_b}
    state.freq = frequencies(pa, pb)
    if not ids_a or not ids_b:
        return state

    kinds_a = np.array([kind_of(side_a.decl[c]) for c in ids_a])
    kinds_b = np.array([kind_of(side_b.decl[c]) for c in ids_b])
    compatible = kinds_a[:, None] == kinds_b[None, :]

    scorer = _Scorer(ids_a, ids_b)

    def weighted(props):
        return {p: property_weight(p, state, cfg) for p in props}

    for c in ids_a:
        scorer.add_a(scorer.ia[c], weighted(pa[c]))
    for c in ids_b:
        scorer.add_b(scorer.ib[c], weighted(pb[c]))

    open_a = np.ones(len(ids_a), dtype=bool)
    open_b = np.ones(len(ids_b), dtype=bool)
    it = 0
    while cfg.max_iter is None or it < cfg.max_iter:
        s = scorer.scores()
        s[~compatible] = -np.inf
        s[~open_a, :] = -np.inf
        s[:, ~open_b] = -np.inf
        flat = int(np.argmax(s))
        i, j = divmod(flat, s.shape[1])
        best = float(s[i, j])
        if not best > cfg.threshold:
            break
        a, b = ids_a[i], ids_b[j]
        state.add(a, b, best, it)
        open_a[i] = False
        open_b[j] = False
        if progress:
            progress(it, a, b, best)
        it += 1
        _refresh(side_a, a, state, scorer, True, cfg)
        _refresh(side_b, b, state, scorer, False, cfg)
    return state


def _refresh(side: _Side, cid: str, state: MatchState, scorer: _Scorer, is_a: bool,
             cfg: MatchConfig | None = None) -> None:
    """Recompute properties of instances whose theorem mentions ``cid``."""
    touched: set = set()
    for ti in side.by_name.get(cid, ()):
        for ii in side.by_thm[ti]:
            if state.is_matched(side.inst[ii][1]):
                continue
            old = side.props[ii]
            side.props[ii] = side.compute(ii, state.labels, old.initial)
            touched.add(side.inst[ii][1])
    index = scorer.ia if is_a else scorer.ib
    for c in sorted(touched):
        pos = index.get(c)
        if pos is None or state.is_matched(c):
            continue
        w = {p: property_weight(p, state, cfg) for p in side.const_props(c)}
        if is_a:
            scorer.remove_a(pos)
            scorer.add_a(pos, w)
        else:
            scorer.remove_b(pos)
            scorer.add_b(pos, w)


# ---------------------------------------------------------------- merging


def _same_type(t1, t2) -> bool:
    return type_match(t1, t2) is not None and type_match(t2, t1) is not None


def merge_namespace(lib_a: Library, lib_b: Library, state: MatchState) -> tuple[Library, Library, dict]:
    """Rename matched constants of both libraries to shared ``common/`` ids.

    Returns the rewritten libraries and the map from original ids (of either
    library) to common ids.  Pairs whose types disagree after renaming are
    dropped with a warning.
    """
    pairs = dict(state.pairs)
    while True:
        taken = {c.id for c in lib_a.consts} | {c.id for c in lib_b.consts}
        common: dict = {}
        for a in sorted(pairs):
            local = a.split("/", 1)[1] if "/" in a else a
            cid = f"{COMMON_PREFIX}/{local}"
            n = 1
            while cid in taken:
                n += 1
                cid = f"{COMMON_PREFIX}/{local}~{n}"
            taken.add(cid)
            common[a] = cid
        map_a = dict(common)
        map_b = {pairs[a]: cid for a, cid in common.items()}
        clash = None
        for a in sorted(pairs):
            da, db = lib_a.const(a), lib_b.const(pairs[a])
            if da.is_type != db.is_type:
                clash = a
                break
            if da.is_type:
                if da.arity != db.arity:
                    clash = a
                    break
            elif not _same_type(rename_tycons(da.ty, map_a), rename_tycons(db.ty, map_b)):
                clash = a
                break
        if clash is None:
            break
        log.warning("dropping matched pair %s ~ %s: type clash after renaming", clash, pairs[clash])
        del pairs[clash]
    new_a = _rename_library(lib_a, map_a)
    new_b = _rename_library(lib_b, map_b)
    return new_a, new_b, {**map_a, **map_b}


def _rename_library(lib: Library, m: dict) -> Library:
    if not m:
        return lib
    consts = [
        ConstDecl(m.get(c.id, c.id), c.kind, c.theory,
                  ty=None if c.is_type else rename_tycons(c.ty, m), arity=c.arity)
        for c in lib.consts
    ]
    thms = [Theorem(t.id, apply_const_map(t.statement, m), t.theory, t.seq, t.deps) for t in lib.thms]
    return build_library(lib.tag, consts, thms)


# ---------------------------------------------------------------- evolution


def matching_evolution(lib_int: Library, lib_ext: Library, theory: str, cfg: MatchConfig | None = None,
                       stride: int = 1) -> list[tuple[int, int, int]]:
    """Matched and declared constant counts of ``theory`` along its theorems.

    At each boundary (every ``stride``-th theorem of the theory, and its last)
    the internal library is cut just after that theorem and matched against
    the full external library.  A constant counts as declared once a
    theorem of the prefix mentions it, and as matched from the first
    boundary at which it was matched.  The first row is the empty prefix; a theory
    without theorems has no rows.
    """
    thms = lib_int.theory_thms(theory)
    own = {c.id for c in lib_int.theory_consts(theory)}
    if not thms:
        return []
    rows = [(thms[0].seq, 0, 0)]
    declared: set = set()
    matched: set = set()
    last = len(thms) - 1
    for k, t in enumerate(thms):
        declared |= names_of(t.statement) & own
        if k % stride and k != last:
            continue
        prefix = lib_int.prefix(t.seq + 1)
        state = compute_matching(prefix, lib_ext, cfg)
        matched |= {a for a in state.pairs if a in declared}
        rows.append((t.seq + 1, len(matched), len(declared)))
    return rows


def write_match_tsv(state: MatchState, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for a, b, score, it in state.log:
            f.write(f"{a}\t{b}\t{score:.12g}\t{it}\n")


def read_match_tsv(path) -> MatchState:
    state = MatchState()
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            a, b, score, it = line.split("\t")
            state.add(a, b, float(score), int(it))
    return state
