"""Lemma selection strategies that use an external library.

Every strategy receives a conjecture from the internal library together
with its seq bound and returns :class:`Advice`: internal lemmas proved
before the conjecture, plus (in unchecked mode only) external lemmas that
have no internal counterpart and would remain hypotheses.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .equivalence import EquivIndex, build_index
from .kernel import Term, canonical_key, print_term
from .learning import DEFAULT_K, Model, extract_features, predict_scored, train
from .library import Library
from .matching import MatchState, merge_namespace

SCENARIOS = ("empty", "internal", "ext-deps", "ext-pred", "comb-learn", "comb-pred")


@dataclass
class Advice:
    conjecture: Term
    scenario: str
    internal: list = field(default_factory=list)
    external: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)
    applicable: bool = True
    checked: bool = True

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario,
            "checked": self.checked,
            "applicable": self.applicable,
            "conjecture": print_term(self.conjecture),
            "internal": list(self.internal),
            "external": list(self.external),
            "provenance": dict(self.provenance),
        }


@dataclass
class ScenarioContext:
    """Both libraries in the merged namespace, with indices and models.

    Models are trained on complete libraries and limited to a prefix with
    :meth:`Model.view` at query time.  ``combined`` holds the external
    documents first, then the internal ones.
    """

    internal: Library
    external: Library
    int_index: EquivIndex
    ext_index: EquivIndex
    int_model: Model | None
    ext_model: Model | None
    combined: Model | None
    k: int = DEFAULT_K
    mode: str = "both"
    rename: dict = field(default_factory=dict)

    # -- equivalence helpers
    def int_equivalents(self, ext_id: str, before: int) -> list[str]:
        return self.int_index.lookup(self.ext_index.key(ext_id), before)

    def ext_class(self, c: Term) -> list[str]:
        return self.ext_index.lookup(canonical_key(c))

    def ext_bound(self, c: Term) -> int | None:
        """Smallest external seq among the conjecture's external equivalents."""
        cls = self.ext_class(c)
        return min(self.ext_index.seqs[t] for t in cls) if cls else None

    def features(self, c: Term):
        return extract_features(c, self.mode)

    def accessible(self, bound: int) -> list[str]:
        return [t.id for t in self.internal.thms[:bound]]


def _corpus(lib: Library, mode: str):
    return [(t.id, extract_features(t.statement, mode), t.deps) for t in lib.thms]


def build_context(int_lib: Library, ext_lib: Library, state: MatchState | None = None,
                  k: int = DEFAULT_K, mode: str = "both") -> ScenarioContext:
    """Merge namespaces under ``state`` and build indices and models."""
    rename: dict = {}
    if state is not None and state.pairs:
        int_lib, ext_lib, rename = merge_namespace(int_lib, ext_lib, state)
    int_corpus = _corpus(int_lib, mode)
    ext_corpus = _corpus(ext_lib, mode)
    return ScenarioContext(
        internal=int_lib,
        external=ext_lib,
        int_index=build_index(int_lib),
        ext_index=build_index(ext_lib),
        int_model=train(int_corpus) if int_corpus else None,
        ext_model=train(ext_corpus) if ext_corpus else None,
        combined=train(ext_corpus + int_corpus) if ext_corpus or int_corpus else None,
        k=k,
        mode=mode,
        rename=rename,
    )


# ---------------------------------------------------------------- scenarios


def scenario_empty(ctx: ScenarioContext, c: Term, bound: int, checked: bool = True) -> Advice:
    return Advice(c, "empty", checked=checked)


def scenario_internal(ctx: ScenarioContext, c: Term, bound: int, checked: bool = True) -> Advice:
    adv = Advice(c, "internal", checked=checked)
    cands = ctx.accessible(bound)
    if not cands or ctx.int_model is None:
        return adv
    for tid, _ in predict_scored(ctx.int_model.view(bound), ctx.features(c), cands, ctx.k):
        adv.internal.append(tid)
        adv.provenance[tid] = "internal prediction"
    return adv


def scenario_external_deps(ctx: ScenarioContext, c: Term, bound: int, checked: bool = True) -> Advice:
    adv = Advice(c, "ext-deps", checked=checked)
    s1 = ctx.ext_class(c)
    if not s1:
        adv.applicable = False
        return adv
    ext_limit = min(ctx.ext_index.seqs[t] for t in s1)
    s2: list = []
    for t in s1:
        for d in ctx.external.thm(t).deps:
            if d not in s2:
                s2.append(d)
    s2.sort(key=lambda d: ctx.ext_index.seqs[d])
    seen: set = set()
    for d in s2:
        eqs = ctx.int_equivalents(d, bound)
        for e in eqs:
            if e not in seen and len(adv.internal) < ctx.k:
                seen.add(e)
                adv.internal.append(e)
                adv.provenance[e] = f"equivalent of external dependency {d}"
        if not eqs and not checked and ctx.ext_index.seqs[d] < ext_limit:
            adv.external.append(d)
            adv.provenance[d] = "external dependency without internal equivalent"
    return adv


def _ext_candidates(ctx: ScenarioContext, c: Term, checked: bool) -> list[str]:
    cands = [t.id for t in ctx.external.thms]
    if not checked:
        limit = ctx.ext_bound(c)
        if limit is not None:
            cands = cands[:limit]
    return cands


def scenario_external_pred(ctx: ScenarioContext, c: Term, bound: int, checked: bool = True) -> Advice:
    adv = Advice(c, "ext-pred", checked=checked)
    if ctx.ext_model is None:
        return adv
    cands = _ext_candidates(ctx, c, checked)
    if not cands:
        return adv
    ranked = predict_scored(ctx.ext_model, ctx.features(c), cands, len(cands))
    seen: set = set()
    for t, score in ranked:
        if score <= 0 or len(adv.internal) + len(adv.external) >= ctx.k:
            break
        eqs = ctx.int_equivalents(t, bound)
        for e in eqs:
            if e not in seen and len(adv.internal) + len(adv.external) < ctx.k:
                seen.add(e)
                adv.internal.append(e)
                adv.provenance[e] = f"equivalent of external prediction {t}"
        if not eqs and not checked:
            adv.external.append(t)
            adv.provenance[t] = "external prediction without internal equivalent"
    return adv


def _alias(ctx: ScenarioContext) -> dict:
    """External theorem id -> its internal equivalents (unbounded)."""
    out = {}
    for t in ctx.external.thms:
        eqs = ctx.int_index.lookup(ctx.ext_index.key(t.id))
        if eqs:
            out[t.id] = eqs
    return out


def _combined_view(ctx: ScenarioContext, bound: int) -> Model | None:
    if ctx.combined is None:
        return None
    return ctx.combined.view(len(ctx.external.thms) + bound)


def scenario_combined_learning(ctx: ScenarioContext, c: Term, bound: int, checked: bool = True) -> Advice:
    adv = Advice(c, "comb-learn", checked=checked)
    cands = ctx.accessible(bound)
    model = _combined_view(ctx, bound)
    if not cands or model is None or model.n_docs == 0:
        return adv
    alias = ctx.__dict__.setdefault("_alias_cache", _alias(ctx))
    for tid, _ in predict_scored(model, ctx.features(c), cands, ctx.k, alias):
        adv.internal.append(tid)
        adv.provenance[tid] = "combined-model prediction"
    return adv


def scenario_combined_pred(ctx: ScenarioContext, c: Term, bound: int, checked: bool = True) -> Advice:
    adv = Advice(c, "comb-pred", checked=checked)
    model = _combined_view(ctx, bound)
    if model is None or model.n_docs == 0:
        return adv
    feats = ctx.features(c)
    alias = ctx.__dict__.setdefault("_alias_cache", _alias(ctx))
    # id -> (score, 0 internal / 1 external, provenance)
    pool: dict = {}
    cands = ctx.accessible(bound)
    if cands:
        for tid, score in predict_scored(model, feats, cands, ctx.k, alias):
            pool[tid] = (score, 0, "internal prediction from both libraries")
    ext_cands = _ext_candidates(ctx, c, checked)
    if ext_cands:
        for t, score in predict_scored(model, feats, ext_cands, len(ext_cands)):
            if score <= 0:
                break
            eqs = ctx.int_equivalents(t, bound)
            for e in eqs:
                if e not in pool or pool[e][0] < score:
                    pool[e] = (score, 0, f"equivalent of external prediction {t}")
            if not eqs and not checked:
                pool.setdefault(t, (score, 1, "external prediction without internal equivalent"))
    ranked = sorted(pool.items(), key=lambda kv: (-round(kv[1][0], 12), kv[1][1], kv[0]))[: ctx.k]
    for tid, (_, side, prov) in ranked:
        (adv.internal if side == 0 else adv.external).append(tid)
        adv.provenance[tid] = prov
    return adv


DISPATCH: dict[str, Callable] = {
    "empty": scenario_empty,
    "internal": scenario_internal,
    "ext-deps": scenario_external_deps,
    "ext-pred": scenario_external_pred,
    "comb-learn": scenario_combined_learning,
    "comb-pred": scenario_combined_pred,
}


def advise(ctx: ScenarioContext, scenario: str, thm_id: str, checked: bool = True) -> Advice:
    """Advice for internal theorem ``thm_id`` under ``scenario``."""
    if scenario not in DISPATCH:
        raise ValueError(f"unknown scenario {scenario!r}; expected one of {', '.join(SCENARIOS)}")
    t = ctx.internal.thm(thm_id)
    return DISPATCH[scenario](ctx, t.statement, t.seq, checked)
