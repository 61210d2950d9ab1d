"""Command-line interface."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .equivalence import build_index, equiv_class
from .kernel import KernelError, Signature, apply_const_map, parse_formula, parse_type, print_type
from .learning import DEFAULT_K, MODES, Model, extract_features, predict_scored, train
from .library import LibraryError, load_library
from .matching import (
    MatchConfig,
    compute_matching,
    merge_namespace,
    read_match_tsv,
    write_match_tsv,
)


def _load_pair(args):
    lib_int = load_library(args.int)
    lib_ext = load_library(args.ext) if getattr(args, "ext", None) else None
    return lib_int, lib_ext


def cmd_equiv(args) -> int:
    lib = load_library(args.lib)
    index = build_index(lib)
    if args.term:
        for tid in equiv_class(index, parse_formula(args.term, lib.signature)):
            print(tid)
        return 0
    if args.thm:
        for tid in index.lookup(index.key(args.thm)):
            print(tid)
        return 0
    for ids in index.buckets.values():
        if len(ids) > 1:
            print("\t".join(ids))
    return 0


def cmd_match(args) -> int:
    lib_int, lib_ext = _load_pair(args)
    cfg = MatchConfig(threshold=args.threshold, max_iter=args.max_iter)
    state = compute_matching(lib_int, lib_ext, cfg)
    write_match_tsv(state, args.out)
    print(f"{len(state.pairs)} pairs matched", file=sys.stderr)
    return 0


def _signature_json(sig: Signature) -> dict:
    return {
        "consts": {k: print_type(v) for k, v in sig.consts.items()},
        "tycons": dict(sig.tycons),
    }


def _signature_from_json(data: dict) -> Signature:
    tycons = dict(data["tycons"])
    sig = Signature({}, tycons)
    sig.consts.update({k: parse_type(v, sig) for k, v in data["consts"].items()})
    return sig


def cmd_train(args) -> int:
    lib_int, lib_ext = _load_pair(args)
    corpus = []
    signature = lib_int.signature
    rename: dict = {}
    if lib_ext is not None:
        if args.match:
            lib_int, lib_ext, renamed = merge_namespace(lib_int, lib_ext, read_match_tsv(args.match))
            own = {c.id for c in load_library(args.int).consts}
            rename = {a: b for a, b in renamed.items() if a in own}
        corpus += [(t.id, extract_features(t.statement, args.features), t.deps) for t in lib_ext.thms]
    corpus += [(t.id, extract_features(t.statement, args.features), t.deps) for t in lib_int.thms]
    model = train(corpus)
    data = model.to_json()
    data["features_mode"] = args.features
    # Conjectures arrive in internal names; the model may use common ones.
    data["signature"] = _signature_json(signature)
    data["rename"] = rename
    Path(args.out).write_text(json.dumps(data), encoding="utf-8")
    print(f"trained on {model.n_docs} theorems", file=sys.stderr)
    return 0


def cmd_predict(args) -> int:
    data = json.loads(Path(args.model).read_text(encoding="utf-8"))
    model = Model.from_json(data)
    if args.lib:
        sig = load_library(args.lib).signature
    elif "signature" in data:
        sig = _signature_from_json(data["signature"])
    else:
        print("the model has no signature; pass --lib", file=sys.stderr)
        return 2
    conj = apply_const_map(parse_formula(args.conj, sig), data.get("rename", {}))
    feats = extract_features(conj, data.get("features_mode", "both"))
    for tid, score in predict_scored(model, feats, model.ids, args.k):
        print(f"{tid}\t{score:.6g}")
    return 0


def cmd_advise(args) -> int:
    from .scenarios import advise, build_context

    lib_int, lib_ext = _load_pair(args)
    state = read_match_tsv(args.match) if args.match else None
    ctx = build_context(lib_int, lib_ext, state, k=args.k)
    adv = advise(ctx, args.scenario, args.thm, checked=not args.unchecked)
    print(json.dumps(adv.to_json(), indent=2))
    return 0


def cmd_simulate(args) -> int:
    from .harness import ConfigError, RunConfig, aggregate, audit, simulate

    try:
        cfg = RunConfig.from_toml(args.config)
        records = simulate(cfg, progress=(lambda t: print(t.id, file=sys.stderr)) if args.verbose else None)
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2
    if records:
        report = aggregate(records)
        report.write_csv(Path(cfg.out) / "summary.csv")
        print(report.render())
        lib_int = load_library(cfg.internal)
        lib_ext = load_library(cfg.external) if cfg.external else lib_int
        problems = audit(records, lib_int, lib_ext)
        for p in problems:
            print(f"audit: {p}", file=sys.stderr)
        if problems:
            return 1
    return 0


def cmd_report(args) -> int:
    from .harness import aggregate, load_records

    report = aggregate(load_records(args.records))
    print(report.render())
    if args.theories:
        print()
        print(report.render_theories())
    if args.csv:
        report.write_csv(args.csv)
    return 0


def cmd_evolution(args) -> int:
    from .harness import emit_evolution

    lib_int, lib_ext = _load_pair(args)
    try:
        emit_evolution(lib_int, lib_ext, args.theory, args.out, stride=args.stride)
    except ValueError as e:
        print(str(e), file=sys.stderr)
        return 2
    return 0


def cmd_theories(args) -> int:
    from .harness import report_common_theories

    lib_int, lib_ext = _load_pair(args)
    state = read_match_tsv(args.match) if args.match else compute_matching(lib_int, lib_ext)
    for ta, na, tb, nb, common in report_common_theories(lib_int, lib_ext, state, args.top):
        print(f"{ta} ({na})\t{tb} ({nb})\t{common}")
    return 0


def cmd_tptp(args) -> int:
    from .fof import translate

    lib = load_library(args.lib)
    t = lib.thm(args.thm)
    lemmas = [(d, lib.thm(d).statement) for d in sorted(t.deps, key=lambda d: lib.thm(d).seq)] if args.deps else []
    problem = translate(t.statement, lemmas, t.id)
    out = Path(args.out)
    out.write_text(problem.to_tptp(), encoding="utf-8")
    out.with_suffix(".map").write_text(problem.mapping_text(), encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="crosshammer", description="Lemma selection across two formal libraries.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("equiv", help="list equivalence classes of a library")
    p.add_argument("--lib", required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--thm", help="print the class of this theorem")
    g.add_argument("--term", help="print theorems stating this formula")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("match", help="match constants of two libraries")
    p.add_argument("--int", required=True)
    p.add_argument("--ext", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--threshold", type=float, default=0.0)
    p.add_argument("--max-iter", type=int, default=None)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("train", help="train a premise selection model")
    p.add_argument("--lib", dest="int", required=True)
    p.add_argument("--ext", help="also learn from this library (its theorems first)")
    p.add_argument("--match", help="constant matching to merge namespaces")
    p.add_argument("--features", choices=MODES, default="both")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="rank premises for a conjecture")
    p.add_argument("--model", required=True)
    p.add_argument("--conj", required=True)
    p.add_argument("--lib", help="library whose signature types the conjecture")
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("advise", help="lemma advice for one theorem")
    p.add_argument("--scenario", required=True,
                   choices=["empty", "internal", "ext-deps", "ext-pred", "comb-learn", "comb-pred"])
    p.add_argument("--unchecked", action="store_true")
    p.add_argument("--int", required=True)
    p.add_argument("--ext", required=True)
    p.add_argument("--match")
    p.add_argument("--thm", required=True)
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.set_defaults(func=cmd_advise)

    p = sub.add_parser("simulate", help="run the reproving simulation")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("report", help="summarise simulation records")
    p.add_argument("--records", required=True)
    p.add_argument("--theories", action="store_true", help="add the per-theory table")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("evolution", help="matched constants along a theory, as CSV")
    p.add_argument("--int", required=True)
    p.add_argument("--ext", required=True)
    p.add_argument("--theory", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--stride", type=int, default=1)
    p.set_defaults(func=cmd_evolution)

    p = sub.add_parser("theories", help="most similar theory pairs")
    p.add_argument("--int", required=True)
    p.add_argument("--ext", required=True)
    p.add_argument("--match")
    p.add_argument("--top", type=int, default=7)
    p.set_defaults(func=cmd_theories)

    p = sub.add_parser("tptp", help="write one theorem as a FOF problem")
    p.add_argument("--lib", required=True)
    p.add_argument("--thm", required=True)
    p.add_argument("--deps", action="store_true", help="include its dependencies as axioms")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_tptp)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (OSError, KeyError, ValueError, KernelError, LibraryError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
