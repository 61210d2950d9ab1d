import math

import pytest

from crosshammer.equivalence import build_index
from crosshammer.fixtures import drop_theorems, random_library, renamed_copy
from crosshammer.kernel import canonical_key
from crosshammer.library import parse_library
from crosshammer.matching import (
    HOLE,
    MatchConfig,
    MatchState,
    Property,
    compute_matching,
    extract_properties,
    matching_evolution,
    merge_namespace,
    pair_score,
    property_weight,
    read_match_tsv,
    write_match_tsv,
)

from helpers import recovery

ALG = """\
C x/A type alg 0
C x/op term alg (fun x/A (fun x/A x/A))
C x/e term alg x/A
C x/lonely term alg x/A
T x/COMM alg 0 (! (\\a:x/A. (! (\\b:x/A. (= (x/op a b) (x/op b a))))))
T x/UNIT alg 1 (! (\\a:x/A. (= (x/op x/e a) a)))
"""


# ------------------------------------------------------------- properties


def test_properties_of_commutativity():
    lib = parse_library(ALG)
    props = extract_properties(lib, MatchState())
    assert props["x/lonely"] == set()
    comm = [p for p in props["x/op"] if "x/" not in str(p.pattern) and str(p.pattern).count(HOLE) == 2]
    assert comm, props["x/op"]
    # renaming op keeps the pattern
    renamed = parse_library(ALG.replace("x/op", "x/plus"))
    assert extract_properties(renamed, MatchState())["x/plus"] == props["x/op"]


def test_rename_gives_equal_property_sets(lib_a):
    copy = renamed_copy(lib_a, "lists-B", seed=2)
    pa = extract_properties(lib_a, MatchState())
    pb = extract_properties(copy.library, MatchState())
    for c, ps in pa.items():
        assert pb[copy.const_map[c]] == ps


def test_hole_count_matches_occurrences():
    lib = parse_library(ALG)
    props = extract_properties(lib, MatchState())
    holes = sorted(str(p.pattern).count(HOLE) for p in props["x/op"])
    assert holes == [1, 2]


# ---------------------------------------------------------------- weights


def test_weight_examples():
    state = MatchState(freq={"u": 1, "s": 10})
    unique = Property("u", "term/0", named=3, slots=0, initial="u")
    shared = Property("s", "term/0", named=0, slots=2, initial="s")
    assert property_weight(unique, state) == pytest.approx(2.0)
    assert property_weight(shared, state) == pytest.approx(0.1)


def test_weight_monotone():
    for mu_named in range(0, 5):
        prev = math.inf
        for f in range(1, 20):
            p = Property("k", "term/0", named=mu_named, slots=4 - mu_named, initial="k")
            w = property_weight(p, MatchState(freq={"k": f}))
            assert w <= prev
            prev = w
    ws = [property_weight(Property("k", "t", named=n, slots=4 - n, initial="k"), MatchState(freq={"k": 3}))
          for n in range(5)]
    assert ws == sorted(ws)


def test_pair_score_closed_form():
    n = 4
    props = {Property(f"p{i}", "t", named=1, slots=1, initial=f"p{i}") for i in range(n)}
    state = MatchState(freq={f"p{i}": 5 for i in range(n)})
    w = (1 + 0.5) / 5
    assert pair_score("a", "b", {"a": props}, {"b": props}, state) == pytest.approx(w)
    other = {Property("q", "t", initial="q")}
    assert pair_score("a", "b", {"a": props}, {"b": other}, state) == 0.0
    half = set(list(props)[:2]) | other
    s1 = pair_score("a", "b", {"a": props}, {"b": half}, state)
    s2 = pair_score("b", "a", {"b": half}, {"a": props}, state)
    assert s1 == s2 == pytest.approx(2 * w / math.sqrt(4 * 3))


# ---------------------------------------------------------------- matching


def test_self_match(lib_a):
    copy = renamed_copy(lib_a, "lists-B", seed=0, shuffle=False, rename_bound=False)
    state = compute_matching(lib_a, copy.library)
    props = extract_properties(lib_a, MatchState())
    eligible = {c for c, ps in props.items() if ps}
    assert set(state.pairs) == eligible
    assert all(copy.const_map[a] == b for a, b in state.pairs.items())


def test_rename_fixture_recovery(lib_a, twin, twin_matching):
    frac, wrong = recovery(lib_a, twin, twin_matching)
    assert wrong == []
    assert frac >= 0.95


def test_deterministic(lib_a, twin, twin_matching):
    again = compute_matching(lib_a, twin.library)
    assert again.same(twin_matching)
    assert again.scores == twin_matching.scores


def test_injective_at_every_iteration(lib_a, twin):
    seen_a, seen_b = set(), set()

    def check(it, a, b, score):
        assert a not in seen_a and b not in seen_b
        assert a.startswith("lists-A/") and b.startswith("lists-B/")
        assert score > 0
        seen_a.add(a)
        seen_b.add(b)

    state = compute_matching(lib_a, twin.library, progress=check)
    assert len(seen_a) == len(state.pairs)
    assert len(set(state.pairs.values())) == len(state.pairs)


def test_scores_respect_threshold_and_max_iter(lib_a, twin):
    state = compute_matching(lib_a, twin.library, MatchConfig(threshold=0.3))
    assert all(s > 0.3 for s in state.scores.values())
    state = compute_matching(lib_a, twin.library, MatchConfig(max_iter=5))
    assert len(state.pairs) == 5


def test_no_pairs_inside_one_library(lib_a):
    state = compute_matching(lib_a, lib_a)
    assert state.pairs == {}
    assert all(state.labels[c.id] == c.id for c in lib_a.consts)


@pytest.mark.parametrize("seed", [0, 1])
def test_noise_robustness(seed):
    lib = random_library(seed + 20, 40, 200)
    copy = renamed_copy(lib, "rnd2", seed=seed)
    noisy = drop_theorems(copy.library, 0.2, seed=seed)
    cfg = MatchConfig()
    state = compute_matching(lib, noisy, cfg)
    strong = [a for a, s in state.scores.items() if s > 2 * cfg.threshold]
    assert strong
    assert all(copy.const_map[a] == state.pairs[a] for a in strong)


# ------------------------------------------------------------------- merge


def test_merge_empty_matching(lib_a, twin):
    a, b, m = merge_namespace(lib_a, twin.library, MatchState())
    assert m == {}
    assert a == lib_a and b == twin.library


def test_merge_full_matching(lib_a, twin, twin_matching):
    a, b, m = merge_namespace(lib_a, twin.library, twin_matching)
    assert len(set(m.values())) == len(m) // 2
    assert all(v.startswith("common/") for v in m.values())
    keys_a = set(build_index(a).buckets)
    keys_b = set(build_index(b).buckets)
    assert keys_a == keys_b
    assert len(keys_a & keys_b) == len({canonical_key(t.statement) for t in lib_a.thms})


def test_merge_drops_type_clash():
    a = parse_library(ALG)
    b = parse_library(ALG.replace("x/", "y/"))
    state = MatchState()
    state.add("x/e", "y/op", 1.0, 0)  # e : A cannot stand for op : A -> A -> A
    state.add("x/A", "y/A", 1.0, 1)
    na, nb, m = merge_namespace(a, b, state)
    assert "x/e" not in m and m["x/A"] == m["y/A"]


def test_merge_name_collision():
    a = parse_library(ALG)
    b = parse_library(ALG.replace("x/", "y/"))
    state = MatchState()
    state.add("x/A", "y/A", 1.0, 0)
    state.add("x/op", "y/op", 1.0, 1)
    na, nb, m = merge_namespace(a, b, state)
    assert m["x/op"] == m["y/op"] == "common/op"
    assert len({m["x/A"], m["x/op"]}) == 2


# --------------------------------------------------------------- evolution


def test_evolution(lib_a, twin):
    rows = matching_evolution(lib_a, twin.library, "list", stride=10)
    assert rows[0][1:] == (0, 0)
    for (s0, m0, d0), (s1, m1, d1) in zip(rows, rows[1:]):
        assert s1 > s0 and m1 >= m0 and d1 >= d0
    assert all(m <= d for _, m, d in rows)
    assert rows[-1][1] == rows[-1][2]
    with pytest.raises(KeyError):
        matching_evolution(lib_a, twin.library, "nope")


def test_tsv_round_trip(tmp_path, twin_matching):
    path = tmp_path / "m.tsv"
    write_match_tsv(twin_matching, path)
    back = read_match_tsv(path)
    assert back.pairs == twin_matching.pairs
    assert back.iteration == twin_matching.iteration
    for a, s in twin_matching.scores.items():
        assert back.scores[a] == pytest.approx(s, rel=1e-11)
    line = path.read_text().splitlines()[0].split("\t")
    assert len(line) == 4
