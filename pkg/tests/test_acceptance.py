"""The eight acceptance criteria, each at its stated tolerance.

Every criterion records one PASS/FAIL line, printed together at the end of
the pytest run.  Run alone with ``pytest tests/test_acceptance.py``.
"""
import itertools
import random
import sys
import time
from contextlib import contextmanager
from importlib.resources import files
from pathlib import Path

import pytest

from conftest import ACCEPTANCE
from helpers import PROPS, perturb, props_formula, random_formula, recovery, transform, truth_table_equal
from crosshammer.equivalence import build_index
from crosshammer.fixtures import drop_theorems, lists_a, random_library, renamed_copy
from crosshammer.fof.atp import AtpConfig
from crosshammer.harness import ANY_CHECKED, RunConfig, aggregate, audit, simulate
from crosshammer.kernel import canonical_key, mk_binop, mk_eq, mk_neg, to_cnf
from crosshammer.learning import recall_at, train_library
from crosshammer.matching import compute_matching
from crosshammer.scenarios import advise, build_context


@contextmanager
def criterion(n, title):
    """Time the block and record a PASS/FAIL line for criterion ``n``."""
    start = time.perf_counter()
    detail = {}
    try:
        yield detail
    except BaseException as e:
        reason = "skipped" if isinstance(e, pytest.skip.Exception) else "FAIL"
        ACCEPTANCE[n] = f"[{reason}] {n}. {title} ({time.perf_counter() - start:.1f} s) {detail.get('msg', '')} {e}".rstrip()
        raise
    ACCEPTANCE[n] = f"[PASS] {n}. {title} ({time.perf_counter() - start:.1f} s) {detail.get('msg', '')}".rstrip()


def test_1_canonical_key_congruence():
    with criterion(1, "canonical key congruence and separation") as d:
        rng = random.Random(1)
        formulas = [random_formula(rng) for _ in range(1000)]
        variants = [[transform(t, rng) for _ in range(20)] for t in formulas]
        # perturbations that change the semantics cannot share a canonical key
        pairs = []
        for t in itertools.cycle(formulas):
            if len(pairs) >= 500:
                break
            u = perturb(t, rng)
            if u != t and differs_semantically(t, u):
                pairs.append((t, u))
        # only canonicalisation is timed, not the generators or the oracle
        start = time.perf_counter()
        mismatches = 0
        for t, vs in zip(formulas, variants):
            k = canonical_key(t)
            mismatches += sum(canonical_key(v) != k for v in vs)
        spurious = sum(canonical_key(t) == canonical_key(u) for t, u in pairs)
        elapsed = time.perf_counter() - start
        d["msg"] = f"keys={elapsed:.1f} s mismatches={mismatches}/20000 spurious={spurious}/{len(pairs)}"
        assert mismatches == 0 and spurious == 0
        assert elapsed < 10


def differs_semantically(a, b):
    """True if a and b disagree on some small finite model (domain {0, 1})."""
    from crosshammer.kernel import strip_comb

    rng = random.Random(hash((str(a), str(b))) & 0xFFFF)
    for _ in range(64):
        interp = {
            "c": rng.randint(0, 1), "d": rng.randint(0, 1),
            "f": [rng.randint(0, 1) for _ in range(2)],
            "g": [[rng.randint(0, 1) for _ in range(2)] for _ in range(2)],
            "P": [rng.random() < 0.5 for _ in range(2)],
            "Q": [[rng.random() < 0.5 for _ in range(2)] for _ in range(2)],
            **{p: rng.random() < 0.5 for p in "pqrstu"},
        }
        if evaluate(a, interp, {}) != evaluate(b, interp, {}):
            return True
    return False


def evaluate(t, m, env):
    from crosshammer.kernel import Abs, Const, Var, strip_comb

    if isinstance(t, Var):
        return env[t.name]
    head, args = strip_comb(t)
    name = head.name
    if name in ("!", "?"):
        lam = args[0]
        vals = (evaluate(lam.body, m, {**env, lam.var: v}) for v in (0, 1))
        return all(vals) if name == "!" else any(vals)
    vals = [evaluate(x, m, env) for x in args]
    ops = {"~": lambda x: not x, "/\\": lambda x, y: x and y, "\\/": lambda x, y: x or y,
           "==>": lambda x, y: (not x) or y, "<=>": lambda x, y: x == y, "=": lambda x, y: x == y}
    if name in ops:
        return ops[name](*vals)
    if name in ("f", "P"):
        return m[name][vals[0]]
    if name in ("g", "Q"):
        return m[name][vals[0]][vals[1]]
    return m[name]


def skeletons(atoms, depth):
    """Every propositional skeleton over ``atoms`` up to the given nesting depth."""
    if depth == 0:
        return list(atoms)
    sub = skeletons(atoms, depth - 1)
    out = list(atoms) + [mk_neg(x) for x in sub]
    for a, b in itertools.product(sub, repeat=2):
        out += [mk_binop(op, a, b) for op in ("/\\", "\\/", "==>", "<=>")]
        out.append(mk_eq(a, b))
    return out


def test_2_cnf_truth_tables():
    with criterion(2, "CNF agrees with truth tables") as d:
        start = time.perf_counter()
        cases = [(f, PROPS[:3]) for f in skeletons(PROPS[:3], 2)]
        cases += [(f, PROPS) for f in skeletons(PROPS, 1)]
        rng = random.Random(2)
        for _ in range(2000):
            atoms = PROPS[: rng.randint(1, 6)]
            cases.append((props_formula(rng, atoms, 3), atoms))
        bad = sum(not truth_table_equal(f, to_cnf(f), atoms) for f, atoms in cases)
        elapsed = time.perf_counter() - start
        d["msg"] = f"disagreements={bad}/{len(cases)}"
        assert bad == 0 and elapsed < 30


def test_3_matching_recovery():
    with criterion(3, "matching recovery on 10 renamed pairs") as d:
        start = time.perf_counter()
        rng = random.Random(2024)
        worst, wrong_total = 1.0, 0
        for i in range(10):
            lib = random_library(100 + i, rng.randint(30, 60), rng.randint(120, 400), tag=f"fa{i}")
            copy = renamed_copy(lib, f"fb{i}", seed=i)
            frac, wrong = recovery(lib, copy, compute_matching(lib, copy.library))
            worst, wrong_total = min(worst, frac), wrong_total + len(wrong)
        elapsed = time.perf_counter() - start
        d["msg"] = f"min recovered={worst:.3f} wrong={wrong_total}"
        assert worst >= 0.95 and wrong_total == 0 and elapsed < 60


@pytest.mark.slow
def test_4_matching_at_scale():
    with criterion(4, "matching at 500 constants / 4000 theorems") as d:
        lib = random_library(500, 500, 4000, tag="big-a")
        copy = renamed_copy(lib, "big-b", seed=5)
        start = time.perf_counter()
        state = compute_matching(lib, copy.library)
        elapsed = time.perf_counter() - start
        d["msg"] = f"compute_matching={elapsed:.1f} s pairs={len(state.pairs)}"
        assert elapsed < 300


def test_5_external_dependencies_oracle(lib_a, twin, twin_context):
    with criterion(5, "external dependencies equal internal images of true deps") as d:
        own = build_index(lib_a)
        back = {b: a for a, b in twin.thm_map.items()}
        ext = build_index(twin.library)
        applicable = exact = 0
        for t in lib_a.thms:
            adv = advise(twin_context, "ext-deps", t.id)
            if not adv.applicable:
                continue
            applicable += 1
            # the twin's equivalents of t, read through the known renaming
            ext_class = {twin.thm_map[u] for u in own.lookup(own.key(t.id))}
            expected = set()
            for u in ext_class:
                for dep in twin.library.thm(u).deps:
                    expected |= set(own.lookup(own.key(back[dep]), t.seq))
            exact += set(adv.internal) == expected
        d["msg"] = f"exact={exact}/{applicable} applicable"
        assert applicable and exact == applicable


# Held-out recall@128 measured once and frozen; -2 pp tolerance.
RECALL_BASELINE = {"lists-A": 1.0, 0: 0.9797, 1: 0.9964, 2: 1.0}


def held_out_recall(lib):
    n = len(lib.thms)
    return recall_at(train_library(lib), lib, [t.id for t in lib.thms[int(0.8 * n):]], 128)


def test_6_prediction_recall():
    with criterion(6, "held-out recall@128") as d:
        libs = {"lists-A": lists_a(), **{s: random_library(s, 60, 400) for s in (0, 1, 2)}}
        got = {name: held_out_recall(lib) for name, lib in libs.items()}
        d["msg"] = " ".join(f"{n}={r:.4f}" for n, r in got.items())
        for name, r in got.items():
            assert r >= 0.8 and r >= RECALL_BASELINE[name] - 0.02, name


# Answers Theorem citing every axiom; a shell script keeps 2000+ calls cheap.
CITE_ALL = """\
for f; do :; done
echo "% SZS status Theorem"
sed -n "s/^fof(\\([^,]*\\),.*/fof(s_\\1, plain, \\$true, file('x', \\1))./p" "$f"
"""


def test_7_soundness_audit(tmp_path, lib_a, twin):
    with criterion(7, "premise-availability audit of full simulate runs") as d:
        # the audit concerns offered premises, so a prover that uses all of them is the strictest
        script = tmp_path / "cite_all.sh"
        script.write_text(CITE_ALL)
        atp = AtpConfig(command=["/bin/sh", str(script)], timeout=5)
        noisy_int = random_library(7, 40, 200, tag="na")
        noisy_ext = drop_theorems(renamed_copy(noisy_int, "nb", seed=3, flip=True).library, 0.2, seed=3)
        total = violations = 0
        for name, a, b in (("twin", lib_a, twin.library), ("noisy", noisy_int, noisy_ext)):
            cfg = RunConfig(internal="-", out=str(tmp_path / name), unchecked=True, k=128, atp=atp)
            records = simulate(cfg, internal=a, external=b)
            total += len(records)
            violations += len(audit(records, a, b))
        d["msg"] = f"violations={violations} over {total} records"
        assert violations == 0


@pytest.mark.slow
def test_8_end_to_end(tmp_path, lib_a, twin):
    atp = AtpConfig(timeout=5)
    with criterion(8, "end-to-end on the twin, 5 s timeout") as d:
        if not atp.available():
            pytest.skip("no SZS prover available")
        # rematch before every theorem; a stale matching hides most equivalences here
        cfg = RunConfig(internal="-", out=str(tmp_path), scenarios=("empty", "ext-deps"), stride=1, atp=atp)
        records = simulate(cfg, internal=lib_a, external=twin.library)
        report = aggregate(records)
        rows = {r.label: r for r in report.rows}
        solved = lambda scen: {r.theorem for r in records if r.scenario == scen and r.solved}
        union = {r.theorem for r in records if r.solved}
        lark = pytest.importorskip("lark")
        grammar = files("tptp_lark_parser").joinpath("resources/TPTP.lark").read_text()
        parser = lark.Lark(grammar, start="tptp_file", parser="lalr")
        problems = sorted(Path(tmp_path, "problems").glob("*.p"))
        for p in problems:
            parser.parse(p.read_text())
        d["msg"] = (f"empty={rows['empty'].percent:.2f}% ext-deps={rows['external dependencies'].percent:.2f}% "
                    f"(applicable {rows['external dependencies'].applicable}) any={rows[ANY_CHECKED].percent:.2f}% "
                    f"problems parsed={len(problems)}")
        assert rows["external dependencies"].solved >= rows["empty"].solved
        assert len(solved("ext-deps")) == rows["external dependencies"].solved
        assert report.solved_by[ANY_CHECKED] == union and rows[ANY_CHECKED].solved == len(union)
        assert problems
