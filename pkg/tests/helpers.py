"""Random formulas, equivalence-preserving rewrites and brute-force oracles."""
from __future__ import annotations

import itertools
import random

from crosshammer.kernel import (
    BOOL,
    Abs,
    App,
    Const,
    Signature,
    TyApp,
    Var,
    alpha_normalize,
    fun,
    fun_n,
    mk_app,
    mk_binop,
    mk_eq,
    mk_exists,
    mk_forall,
    mk_neg,
    print_term,
    strip_comb,
    to_cnf,
    type_of,
)

A = TyApp("A")
SIG = Signature(
    {
        "f": fun(A, A),
        "g": fun_n(A, A, A),
        "c": A,
        "d": A,
        "P": fun(A, BOOL),
        "Q": fun_n(A, A, BOOL),
        **{p: BOOL for p in "pqrstu"},
    },
    {"A": 0},
)
CONSTS = {n: Const(n, ty) for n, ty in SIG.consts.items() if n in "fgcdPQpqrstu"}
PROPS = [CONSTS[p] for p in "pqrstu"]


def random_term(rng: random.Random, vars_: list, depth: int):
    leaves = [CONSTS["c"], CONSTS["d"], *vars_]
    if depth <= 0 or rng.random() < 0.4:
        return rng.choice(leaves)
    if rng.random() < 0.5:
        return App(CONSTS["f"], random_term(rng, vars_, depth - 1))
    return mk_app(CONSTS["g"], random_term(rng, vars_, depth - 1), random_term(rng, vars_, depth - 1))


def random_atom(rng: random.Random, vars_: list, nested: int):
    r = rng.random()
    if r < 0.2:
        return rng.choice(PROPS)
    if r < 0.45:
        return App(CONSTS["P"], random_term(rng, vars_, 2))
    if r < 0.65:
        return mk_app(CONSTS["Q"], random_term(rng, vars_, 1), random_term(rng, vars_, 1))
    if r < 0.9 or nested <= 0:
        return mk_eq(random_term(rng, vars_, 2), random_term(rng, vars_, 2))
    v = Var(f"w{nested}", A)
    body = random_body(rng, [*vars_, v], 1, nested - 1)
    return (mk_forall if rng.random() < 0.5 else mk_exists)(v, body)


def random_body(rng: random.Random, vars_: list, depth: int, nested: int = 1):
    if depth <= 0 or rng.random() < 0.25:
        a = random_atom(rng, vars_, nested)
        return mk_neg(a) if rng.random() < 0.3 else a
    op = rng.choice(["/\\", "\\/", "/\\", "\\/", "==>", "<=>", "~"])
    if op == "~":
        return mk_neg(random_body(rng, vars_, depth - 1, nested))
    return mk_binop(op, random_body(rng, vars_, depth - 1, nested), random_body(rng, vars_, depth - 1, nested))


def random_formula(rng: random.Random, max_depth: int = 3, nested: int = 1):
    """A closed formula: universal prefix over x, y, z and a propositional body.

    With ``nested > 0`` some atoms are themselves quantified formulas.
    """
    vars_ = [Var(n, A) for n in ("x", "y", "z")[: rng.randint(0, 3)]]
    body = random_body(rng, vars_, rng.randint(1, max_depth), nested)
    for v in reversed(vars_):
        body = mk_forall(v, body)
    return body


# ------------------------------------------------------------ transformations


def _is_op(t, names):
    head, args = strip_comb(t)
    return isinstance(head, Const) and head.name in names and len(args) == 2


def transform(t, rng: random.Random, p: float = 0.5):
    """Randomly swap conjuncts/disjuncts, reassociate, flip equations and rename
    bound variables, anywhere in ``t``."""
    if isinstance(t, (Const, Var)):
        return t
    if isinstance(t, Abs):
        body = transform(t.body, rng, p)
        if rng.random() < p:
            fresh = f"{t.var}_{rng.randint(0, 999)}"
            from crosshammer.kernel import subst

            body = subst(body, {Var(t.var, t.vty): Var(fresh, t.vty)})
            return Abs(fresh, t.vty, body)
        return Abs(t.var, t.vty, body)
    head, args = strip_comb(t)
    if isinstance(head, Const) and head.name in ("/\\", "\\/", "=") and len(args) == 2:
        a, b = transform(args[0], rng, p), transform(args[1], rng, p)
        if rng.random() < p:
            a, b = b, a
        if head.name != "=" and rng.random() < p and _is_op(a, {head.name}):
            # (x op y) op b  ->  x op (y op b)
            _, (x, y) = strip_comb(a)
            return App(App(head, x), App(App(head, y), b))
        return App(App(head, a), b)
    return App(transform(t.fn, rng, p), transform(t.arg, rng, p))


def perturb(t, rng: random.Random):
    """Change one leaf constant or negate one atom of ``t`` (usually not equivalent)."""
    sites = []

    def walk(u, path):
        if isinstance(u, Const) and u.name in ("c", "d", "p", "q", "r", "s", "t", "u"):
            sites.append(path)
        elif isinstance(u, App):
            walk(u.fn, path + ("fn",))
            walk(u.arg, path + ("arg",))
        elif isinstance(u, Abs):
            walk(u.body, path + ("body",))

    walk(t, ())
    if not sites:
        return mk_binop("/\\", t, CONSTS["p"])
    path = rng.choice(sites)

    def rebuild(u, path):
        if not path:
            swap = {"c": "d", "d": "c", "p": "q", "q": "r", "r": "s", "s": "t", "t": "u", "u": "p"}
            return CONSTS[swap[u.name]]
        step = path[0]
        if step == "fn":
            return App(rebuild(u.fn, path[1:]), u.arg)
        if step == "arg":
            return App(u.fn, rebuild(u.arg, path[1:]))
        return Abs(u.var, u.vty, rebuild(u.body, path[1:]))

    return rebuild(t, path)


# -------------------------------------------------------------------- oracles


def _rename_free(t, m):
    from crosshammer.kernel import subst

    return subst(t, {Var(k, A): Var(v, A) for k, v in m.items()})


def _lit_string(lit, m) -> str:
    atom = _rename_free(lit.atom, m)
    head, args = strip_comb(atom)
    if isinstance(head, Const) and head.name == "=" and len(args) == 2:
        l, r = sorted(print_term(alpha_normalize(x)) for x in args)
        s = f"(= {l} {r})"
    else:
        s = print_term(alpha_normalize(atom))
    return ("+" if lit.positive else "-") + s


def cnf_signature(t, m) -> tuple:
    clauses = to_cnf(t)
    return tuple(sorted(tuple(sorted(_lit_string(l, m) for l in c)) for c in clauses))


def _free_names(t) -> list:
    from crosshammer.kernel import free_vars, strip_forall

    return sorted({v.name for v in free_vars(strip_forall(t))})


def brute_equivalent(a, b) -> bool:
    """Syntactic equivalence by trying every bijection of the stripped variables.

    Clause and literal order, and equation sides, are normalised by sorting.
    Nested quantified atoms compare by their alpha-normal printing, so the
    oracle is exact only for formulas without nested quantifiers.
    """
    va, vb = _free_names(a), _free_names(b)
    if len(va) != len(vb):
        return False
    names = [f"#{i}" for i in range(len(va))]
    target = cnf_signature(b, dict(zip(vb, names)))
    for perm in itertools.permutations(names):
        if cnf_signature(a, dict(zip(va, perm))) == target:
            return True
    return False


def truth_table_equal(t, clauses, atoms) -> bool:
    """Exhaustively compare ``t`` with its clause form over all atom valuations."""
    from crosshammer.kernel import eval_cnf

    atoms = list(atoms)
    for bits in itertools.product((False, True), repeat=len(atoms)):
        val = dict(zip(atoms, bits))
        if eval_prop(t, val) != eval_cnf(clauses, lambda a: val[a]):
            return False
    return True


def eval_prop(t, val) -> bool:
    head, args = strip_comb(t)
    if isinstance(head, Const):
        n = head.name
        if n == "T" and not args:
            return True
        if n == "F" and not args:
            return False
        if n == "~" and len(args) == 1:
            return not eval_prop(args[0], val)
        if len(args) == 2 and n in ("/\\", "\\/", "==>", "<=>") or (n == "=" and len(args) == 2 and type_of(args[0]) == BOOL):
            x, y = eval_prop(args[0], val), eval_prop(args[1], val)
            return {"/\\": x and y, "\\/": x or y, "==>": (not x) or y, "<=>": x == y, "=": x == y}[n]
    return val[t]


def props_formula(rng: random.Random, atoms: list, depth: int):
    """Random propositional skeleton over the given boolean constants."""
    if depth <= 0 or rng.random() < 0.2:
        return rng.choice(atoms)
    op = rng.choice(["/\\", "\\/", "==>", "<=>", "~", "="])
    if op == "~":
        return mk_neg(props_formula(rng, atoms, depth - 1))
    if op == "=":
        return mk_eq(props_formula(rng, atoms, depth - 1), props_formula(rng, atoms, depth - 1))
    return mk_binop(op, props_formula(rng, atoms, depth - 1), props_formula(rng, atoms, depth - 1))


def recovery(lib, copy, state, min_props=3):
    """(recovered fraction of eligible constants, wrong pairs)."""
    from crosshammer.matching import MatchState, extract_properties

    props = extract_properties(lib, MatchState())
    eligible = {c for c, ps in props.items() if len(ps) >= min_props}
    wrong = [a for a, b in state.pairs.items() if copy.const_map[a] != b]
    ok = {a for a, b in state.pairs.items() if copy.const_map[a] == b}
    return len(eligible & ok) / max(len(eligible), 1), wrong
