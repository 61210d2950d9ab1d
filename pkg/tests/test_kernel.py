import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crosshammer.kernel import (
    BOOL,
    Abs,
    App,
    Const,
    ConstMapError,
    NotAFormulaError,
    Signature,
    TermSyntaxError,
    TyApp,
    TypeMismatchError,
    UnknownConstantError,
    Var,
    alpha_normalize,
    apply_const_map,
    canonical_key,
    fun,
    invert_map,
    mk_app,
    mk_binop,
    mk_eq,
    mk_neg,
    parse_formula,
    parse_term,
    print_term,
    subterm_strings,
    to_cnf,
    well_typed,
)

from helpers import CONSTS, SIG, brute_equivalent, perturb, random_formula, transform

A = TyApp("A")
p, q, r = CONSTS["p"], CONSTS["q"], CONSTS["r"]
f = CONSTS["f"]


def clause_sets(clauses):
    return sorted(sorted((l.positive, print_term(l.atom)) for l in c) for c in clauses)


# ------------------------------------------------------------------ parsing


def test_parse_application_example():
    t = parse_term("(= (f x) x)", SIG)
    x = Var("x", A)
    eq = Const("=", fun(A, fun(A, BOOL)))
    assert t == App(App(eq, App(f, x)), x)


def test_parse_reflexivity():
    t = parse_formula("(! (\\x:A. (= x x)))", SIG)
    assert isinstance(t, App) and t.fn.name == "!"
    assert isinstance(t.arg, Abs) and t.arg.var == "x"


def test_malformed_reports_offset():
    with pytest.raises(TermSyntaxError) as e:
        parse_term("((f x", SIG)
    assert e.value.offset == 4


def test_error_kinds_are_distinct():
    with pytest.raises(UnknownConstantError):
        parse_term("(lib/nope c)", SIG)
    with pytest.raises(TypeMismatchError):
        parse_term("(f p)", SIG)
    with pytest.raises(TermSyntaxError):
        parse_term("(f c))", SIG)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_print_parse_round_trip(seed):
    t = random_formula(random.Random(seed))
    s = print_term(t)
    back = parse_term(s, SIG)
    assert back == t
    assert well_typed(back)
    assert print_term(parse_term("  ".join(s.split(" ")), SIG)) == s


# ------------------------------------------------------------- alpha normal


def test_alpha_normalize_examples():
    x, y, a, b = (Var(n, A) for n in "xyab")
    g = CONSTS["g"]
    assert alpha_normalize(Abs("x", A, x)) == alpha_normalize(Abs("y", A, y))
    lam = lambda u, v, body: Abs(u.name, A, Abs(v.name, A, body))
    assert alpha_normalize(lam(x, y, mk_app(g, x, y))) == alpha_normalize(lam(a, b, mk_app(g, a, b)))
    assert alpha_normalize(lam(x, y, mk_app(g, y, x))) != alpha_normalize(lam(x, y, mk_app(g, x, y)))


def test_alpha_normalize_keeps_free_variables():
    z = Var("z", A)
    t = Abs("x", A, mk_app(CONSTS["g"], Var("x", A), z))
    assert "z" in print_term(alpha_normalize(t))


# -------------------------------------------------------------------- cnf


def test_cnf_examples():
    assert clause_sets(to_cnf(mk_binop("/\\", p, mk_binop("\\/", q, r)))) == [
        [(True, "p")], [(True, "q"), (True, "r")]]
    assert clause_sets(to_cnf(mk_neg(mk_binop("\\/", p, q)))) == [[(False, "p")], [(False, "q")]]
    assert clause_sets(to_cnf(mk_binop("\\/", mk_binop("/\\", p, q), r))) == [
        [(True, "p"), (True, "r")], [(True, "q"), (True, "r")]]


def test_cnf_rejects_non_boolean():
    with pytest.raises(NotAFormulaError):
        to_cnf(CONSTS["c"])
    with pytest.raises(NotAFormulaError):
        canonical_key(CONSTS["c"])


def test_cnf_keeps_duplicate_literals():
    clauses = to_cnf(mk_binop("\\/", p, p))
    assert len(clauses) == 1 and len(clauses[0]) == 2


# ------------------------------------------------------------ canonical key


def test_key_equality_symmetry():
    x, y = Var("x", A), Var("y", A)
    assert canonical_key(mk_eq(x, y)) == canonical_key(mk_eq(y, x))


def test_key_conjunct_order():
    assert canonical_key(mk_binop("/\\", p, q)) == canonical_key(mk_binop("/\\", q, p))
    assert canonical_key(mk_binop("/\\", p, q)) != canonical_key(mk_binop("\\/", p, q))


def test_key_fifty_formulas_twenty_permutations():
    rng = random.Random(7)
    for _ in range(50):
        t = random_formula(rng)
        k = canonical_key(t)
        assert all(canonical_key(transform(t, rng)) == k for _ in range(20))


def test_key_implication_direction_matters():
    assert canonical_key(mk_binop("==>", p, q)) != canonical_key(mk_binop("==>", q, p))


def test_key_strips_leading_universals():
    x = Var("x", A)
    from crosshammer.kernel import mk_forall

    body = mk_app(CONSTS["P"], x)
    assert canonical_key(mk_forall(x, body)) == canonical_key(mk_forall(Var("y", A), mk_app(CONSTS["P"], Var("y", A))))


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**6))
def test_key_congruence_property(seed):
    rng = random.Random(seed)
    t = random_formula(rng)
    u = t
    for _ in range(rng.randint(1, 4)):
        u = transform(u, rng)
    assert canonical_key(u) == canonical_key(t)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**6))
def test_key_agrees_with_brute_force(seed):
    rng = random.Random(seed)
    a = random_formula(rng, nested=0)
    b = perturb(a, rng) if rng.random() < 0.7 else transform(a, rng)
    assert (canonical_key(a) == canonical_key(b)) == brute_equivalent(a, b)


# --------------------------------------------------------------- const map


def test_identity_map_is_identity():
    t = random_formula(random.Random(3))
    assert apply_const_map(t, {}) == t
    assert apply_const_map(t, {"f": "f", "c": "c"}) == t


def test_rename_to_common():
    sig = Signature({"h4/int": TyApp("num"), "h4/neg": fun(TyApp("num"), TyApp("num"))}, {"num": 0})
    t = parse_formula("(= (h4/neg h4/int) h4/int)", sig)
    u = apply_const_map(t, {"h4/int": "common/int"})
    assert print_term(u) == "(= (h4/neg common/int) common/int)"


def test_non_injective_map_rejected():
    t = parse_formula("(= c d)", SIG)
    with pytest.raises(ConstMapError):
        apply_const_map(t, {"c": "e", "d": "e"})


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_const_map_round_trip(seed):
    t = random_formula(random.Random(seed))
    m = {"f": "f2", "c": "c2", "P": "P2", "p": "p2"}
    assert apply_const_map(apply_const_map(t, m), invert_map(m)) == t


# -------------------------------------------------------- subterm strings


def brute_subterms(t):
    """Independent enumeration: every node, plus every partial application."""
    out = set()

    def show(u):
        if isinstance(u, Var):
            return "V"
        if isinstance(u, Const):
            return u.name
        if isinstance(u, Abs):
            return None
        head, args = [], u
        while isinstance(args, App):
            head.append(args.arg)
            args = args.fn
        h = show(args)
        parts = [show(a) for a in reversed(head)]
        if h is None or None in parts:
            return None
        return f"{h}({','.join(parts)})"

    def walk(u):
        s = show(u)
        if s is not None and not isinstance(u, Var):
            out.add(s)
        if isinstance(u, App):
            walk(u.fn)
            walk(u.arg)
        elif isinstance(u, Abs):
            walk(u.body)

    walk(t)
    return out


def test_subterm_strings_examples():
    assert subterm_strings(CONSTS["c"]) == {"c"}
    assert subterm_strings(App(f, Var("x", A))) == {"f", "f(V)"}


def test_subterm_strings_depth_three():
    x = Var("x", A)
    t = mk_app(CONSTS["g"], App(f, App(f, x)), CONSTS["c"])
    assert subterm_strings(t) == brute_subterms(t)
    assert subterm_strings(t) == {"g", "f", "c", "f(V)", "f(f(V))", "g(f(f(V)))", "g(f(f(V)),c)"}
