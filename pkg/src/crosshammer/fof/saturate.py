"""A small superposition prover for TPTP FOF input, reporting SZS results.

It is a given-clause saturation loop over equational clauses.  Predicate
atoms ``P(ts)`` are encoded as ``P(ts) = $T``.  Terms are ordered by a
Knuth-Bendix ordering with unit weights.  Negative literals are selected
eagerly.  New clauses are simplified by unit demodulation, tautology
deletion and forward subsumption.

Output follows the usual conventions of first-order provers: an
``% SZS status`` line, and on success a ``CNFRefutation`` whose input
clauses cite their source formulas as ``file('<path>', <name>)``.
"""
from __future__ import annotations

import argparse
import heapq
import itertools
import re
import sys
import time
from dataclasses import dataclass, field

TRUE_SYM = "$T"

# ------------------------------------------------------------------ parsing

_TOKEN = re.compile(
    r"""\s+|%[^\n]*|/\*.*?\*/
    |(?P<op><=>|<~>|=>|<=|~\||~&|!=|[!?~&|=(),\[\]:.])
    |(?P<dollar>\$\$?[a-z][A-Za-z0-9_]*)
    |(?P<upper>[A-Z][A-Za-z0-9_]*)
    |(?P<lower>[a-z][A-Za-z0-9_]*)
    |(?P<quoted>'(?:[^'\\]|\\.)*')
    |(?P<number>[0-9]+)""",
    re.X | re.S,
)


class TptpSyntaxError(ValueError):
    pass


def _tokenize(text: str) -> list:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise TptpSyntaxError(f"unexpected character {text[pos]!r} at offset {pos}")
        pos = m.end()
        if m.lastgroup:
            out.append((m.lastgroup, m.group(m.lastgroup)))
    out.append(("eof", ""))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value: str | None = None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise TptpSyntaxError(f"expected {value!r}, found {tok[1]!r}")
        self.i += 1
        return tok

    def name(self) -> str:
        kind, val = self.take()
        if kind not in ("lower", "quoted", "number", "upper"):
            raise TptpSyntaxError(f"expected a name, found {val!r}")
        return val

    def inputs(self) -> list:
        out = []
        while self.peek()[0] != "eof":
            kind, lang = self.take()
            if lang not in ("fof", "cnf"):
                raise TptpSyntaxError(f"unsupported input {lang!r}")
            self.take("(")
            name = self.name()
            self.take(",")
            role = self.name()
            self.take(",")
            f = self.formula()
            if lang == "cnf":
                f = ("all", tuple(sorted(_free(f))), f)
            if self.peek()[1] == ",":
                self._skip_annotations()
            self.take(")")
            self.take(".")
            out.append((name, role, f))
        return out

    def _skip_annotations(self):
        depth = 0
        while True:
            kind, val = self.peek()
            if kind == "eof":
                raise TptpSyntaxError("unterminated annotation")
            if val in "([" and kind == "op":
                depth += 1
            elif val in ")]" and kind == "op":
                if depth == 0:
                    return
                depth -= 1
            self.take()

    def formula(self):
        left = self.unit()
        op = self.peek()[1] if self.peek()[0] == "op" else None
        if op in ("&", "|"):
            parts = [left]
            while self.peek()[1] == op:
                self.take()
                parts.append(self.unit())
            return ("and" if op == "&" else "or", tuple(parts))
        if op in ("=>", "<=", "<=>", "<~>", "~|", "~&"):
            self.take()
            right = self.unit()
            return {
                "=>": lambda: ("imp", left, right),
                "<=": lambda: ("imp", right, left),
                "<=>": lambda: ("iff", left, right),
                "<~>": lambda: ("not", ("iff", left, right)),
                "~|": lambda: ("not", ("or", (left, right))),
                "~&": lambda: ("not", ("and", (left, right))),
            }[op]()
        return left

    def unit(self):
        kind, val = self.peek()
        if val == "~":
            self.take()
            return ("not", self.unit())
        if val in ("!", "?") and kind == "op":
            self.take()
            self.take("[")
            vs = [self.take()[1]]
            while self.peek()[1] == ",":
                self.take()
                vs.append(self.take()[1])
            self.take("]")
            self.take(":")
            return ("all" if val == "!" else "ex", tuple(vs), self.unit())
        if val == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        if val == "$true":
            self.take()
            return ("true",)
        if val == "$false":
            self.take()
            return ("false",)
        lhs = self.term()
        if self.peek()[1] in ("=", "!="):
            neg = self.take()[1] == "!="
            rhs = self.term()
            eq = ("eq", lhs, rhs)
            return ("not", eq) if neg else eq
        if lhs[0] == "var":
            raise TptpSyntaxError("variable used as a formula")
        return ("pred", lhs[1], lhs[2])

    def term(self):
        kind, val = self.take()
        if kind == "upper":
            return ("var", val)
        if kind not in ("lower", "quoted", "number", "dollar"):
            raise TptpSyntaxError(f"expected a term, found {val!r}")
        args = []
        if self.peek()[1] == "(":
            self.take()
            args.append(self.term())
            while self.peek()[1] == ",":
                self.take()
                args.append(self.term())
            self.take(")")
        return ("fn", val, tuple(args))


def _free(f, bound=frozenset()) -> set:
    tag = f[0]
    if tag in ("true", "false"):
        return set()
    if tag == "not":
        return _free(f[1], bound)
    if tag in ("and", "or"):
        return set().union(*(_free(g, bound) for g in f[1]))
    if tag in ("imp", "iff"):
        return _free(f[1], bound) | _free(f[2], bound)
    if tag in ("all", "ex"):
        return _free(f[2], bound | set(f[1]))
    if tag == "eq":
        return _tvars(f[1], bound) | _tvars(f[2], bound)
    return set().union(set(), *(_tvars(a, bound) for a in f[2]))


def _tvars(t, bound) -> set:
    if t[0] == "var":
        return set() if t[1] in bound else {t[1]}
    return set().union(set(), *(_tvars(a, bound) for a in t[2]))


def parse_problem(text: str) -> list:
    """``(name, role, formula)`` triples of a TPTP FOF/CNF file."""
    return _Parser(text).inputs()


# ------------------------------------------------------------ clausification
# Prover terms: int = variable, tuple (symbol, *args) = application.


class _Clausifier:
    def __init__(self, reserved: set):
        self.reserved = reserved
        self.counter = itertools.count()
        self.var_counter = itertools.count()

    def fresh(self, prefix: str) -> str:
        while True:
            s = f"{prefix}{next(self.counter)}"
            if s not in self.reserved:
                self.reserved.add(s)
                return s

    def nnf(self, f, pos: bool):
        tag = f[0]
        if tag == "true":
            return ("true",) if pos else ("false",)
        if tag == "false":
            return ("false",) if pos else ("true",)
        if tag == "not":
            return self.nnf(f[1], not pos)
        if tag in ("and", "or"):
            op = tag if pos else ("or" if tag == "and" else "and")
            return self._flat(op, [self.nnf(g, pos) for g in f[1]])
        if tag == "imp":
            return self.nnf(("or", (("not", f[1]), f[2])), pos)
        if tag == "iff":
            a, b = f[1], f[2]
            if pos:
                return self.nnf(("and", (("imp", a, b), ("imp", b, a))), True)
            return self.nnf(("or", (("and", (a, ("not", b))), ("and", (("not", a), b)))), True)
        if tag in ("all", "ex"):
            q = tag if pos else ("ex" if tag == "all" else "all")
            body = self.nnf(f[2], pos)
            if body[0] in ("true", "false"):
                return body
            return (q, f[1], body)
        return f if pos else ("not", f)

    @staticmethod
    def _flat(op, parts):
        out = []
        unit, zero = (("true",), ("false",)) if op == "and" else (("false",), ("true",))
        for p in parts:
            if p == zero:
                return zero
            if p == unit:
                continue
            out.extend(p[1] if p[0] == op else [p])
        if not out:
            return unit
        return out[0] if len(out) == 1 else (op, tuple(out))

    def skolemize(self, f, env: dict, universals: tuple):
        """Replace variables by prover terms; existentials by Skolem terms."""
        tag = f[0]
        if tag in ("and", "or"):
            return (tag, tuple(self.skolemize(g, env, universals) for g in f[1]))
        if tag == "all":
            env = dict(env)
            new = []
            for v in f[1]:
                env[v] = next(self.var_counter)
                new.append(env[v])
            return self.skolemize(f[2], env, universals + tuple(new))
        if tag == "ex":
            env = dict(env)
            used = _free(f)
            args = tuple(u for u in universals if any(env.get(n) == u for n in used))
            for v in f[1]:
                env[v] = (self.fresh("esk"), *args)
            return self.skolemize(f[2], env, universals)
        if tag == "not":
            return ("not", self.skolemize(f[1], env, universals))
        if tag in ("true", "false"):
            return f
        if tag == "eq":
            return ("eq", self._term(f[1], env), self._term(f[2], env))
        return ("eq", (f[1], *(self._term(a, env) for a in f[2])), (TRUE_SYM,))

    def _term(self, t, env):
        if t[0] == "var":
            if t[1] not in env:
                raise TptpSyntaxError(f"unbound variable {t[1]}")
            return env[t[1]]
        return (t[1], *(self._term(a, env) for a in t[2]))

    def cnf(self, f) -> list:
        """Clauses of a skolemized NNF formula, naming large subformulas."""
        tag = f[0]
        if tag == "true":
            return []
        if tag == "false":
            return [()]
        if tag == "eq":
            return [((True, f[1], f[2]),)]
        if tag == "not":
            g = f[1]
            return [((False, g[1], g[2]),)]
        if tag == "and":
            return [c for g in f[1] for c in self.cnf(g)]
        acc = [()]
        for g in f[1]:
            part = self.cnf(g)
            if len(acc) * len(part) > 32 and len(part) > 1:
                lit, defs = self._name(g, part)
                self.extra.extend(defs)
                part = [(lit,)]
            acc = [a + b for a in acc for b in part]
        return acc

    def _name(self, g, clauses):
        vs = sorted({v for c in clauses for lit in c for v in _vars_of(lit[1]) | _vars_of(lit[2])})
        atom = (self.fresh("epred"), *vs)
        lit = (True, atom, (TRUE_SYM,))
        neg = (False, atom, (TRUE_SYM,))
        return lit, [(neg, *c) for c in clauses]

    def clauses(self, f) -> list:
        self.extra = []
        nf = self.nnf(f, True)
        sk = self.skolemize(nf, {}, ())
        out = self.cnf(sk)
        return out + self.extra


def _symbols(f, acc: set) -> set:
    tag = f[0]
    if tag in ("and", "or"):
        for g in f[1]:
            _symbols(g, acc)
    elif tag == "not":
        _symbols(f[1], acc)
    elif tag in ("imp", "iff"):
        _symbols(f[1], acc)
        _symbols(f[2], acc)
    elif tag in ("all", "ex"):
        _symbols(f[2], acc)
    elif tag == "eq":
        _tsyms(f[1], acc)
        _tsyms(f[2], acc)
    elif tag == "pred":
        acc.add(f[1])
        for a in f[2]:
            _tsyms(a, acc)
    return acc


def _tsyms(t, acc):
    if t[0] == "fn":
        acc.add(t[1])
        for a in t[2]:
            _tsyms(a, acc)


# ------------------------------------------------------------------- terms


def _vars_of(t) -> set:
    if isinstance(t, int):
        return {t}
    out: set = set()
    for a in t[1:]:
        out |= _vars_of(a)
    return out


def _walk(t, s):
    while isinstance(t, int) and t in s:
        t = s[t]
    return t


def _occurs(v, t, s) -> bool:
    t = _walk(t, s)
    if isinstance(t, int):
        return t == v
    return any(_occurs(v, a, s) for a in t[1:])


def unify(a, b, s: dict | None = None) -> dict | None:
    s = dict(s) if s else {}
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x, y = _walk(x, s), _walk(y, s)
        if x == y:
            continue
        if isinstance(x, int):
            if _occurs(x, y, s):
                return None
            s[x] = y
        elif isinstance(y, int):
            if _occurs(y, x, s):
                return None
            s[y] = x
        else:
            if x[0] != y[0] or len(x) != len(y):
                return None
            stack.extend(zip(x[1:], y[1:]))
    return s


def match(pattern, target, s: dict) -> dict | None:
    """Extend ``s`` so that ``pattern`` instantiated equals ``target``."""
    stack = [(pattern, target)]
    s = dict(s)
    while stack:
        p, t = stack.pop()
        if isinstance(p, int):
            if p in s:
                if s[p] != t:
                    return None
            else:
                s[p] = t
        elif isinstance(t, int) or p[0] != t[0] or len(p) != len(t):
            return None
        else:
            stack.extend(zip(p[1:], t[1:]))
    return s


def subst(t, s):
    if isinstance(t, int):
        if t in s:
            return subst(s[t], s)
        return t
    if len(t) == 1:
        return t
    return (t[0], *(subst(a, s) for a in t[1:]))


def _inst(t, s):
    """Apply a one-way matcher (no chains)."""
    if isinstance(t, int):
        return s.get(t, t)
    if len(t) == 1:
        return t
    return (t[0], *(_inst(a, s) for a in t[1:]))


def _shift(t, k: int):
    if isinstance(t, int):
        return t + k
    if len(t) == 1:
        return t
    return (t[0], *(_shift(a, k) for a in t[1:]))


def _weight(t) -> int:
    if isinstance(t, int) or len(t) == 1:
        return 1
    return 1 + sum(_weight(a) for a in t[1:])


def _varcount(t, acc: dict) -> dict:
    if isinstance(t, int):
        acc[t] = acc.get(t, 0) + 1
    else:
        for a in t[1:]:
            _varcount(a, acc)
    return acc


def _prec(sym: str, arity: int):
    return (-1, "") if sym == TRUE_SYM else (arity, sym)


def kbo(s, t) -> str | None:
    """``'>'``, ``'<'``, ``'='`` or None (incomparable)."""
    if s == t:
        return "="
    if isinstance(s, int):
        return "<" if _occurs(s, t, {}) else None
    if isinstance(t, int):
        return ">" if _occurs(t, s, {}) else None
    vs, vt = _varcount(s, {}), _varcount(t, {})
    s_ge = all(vs.get(v, 0) >= n for v, n in vt.items())
    t_ge = all(vt.get(v, 0) >= n for v, n in vs.items())
    if not s_ge and not t_ge:
        return None
    ws, wt = _weight(s), _weight(t)
    if ws != wt:
        res = ">" if ws > wt else "<"
    else:
        ps, pt = _prec(s[0], len(s) - 1), _prec(t[0], len(t) - 1)
        if ps != pt:
            res = ">" if ps > pt else "<"
        else:
            res = None
            for a, b in zip(s[1:], t[1:]):
                if a != b:
                    res = kbo(a, b)
                    break
            if res is None:
                return None
    if res == ">" and s_ge:
        return ">"
    if res == "<" and t_ge:
        return "<"
    return None


def _positions(t, path=()):
    """Non-variable subterm positions of ``t``."""
    if isinstance(t, int):
        return
    yield path, t
    for i, a in enumerate(t[1:], 1):
        yield from _positions(a, path + (i,))


def _replace(t, path, new):
    if not path:
        return new
    i = path[0]
    return (*t[:i], _replace(t[i], path[1:], new), *t[i + 1:])


# ------------------------------------------------------------------ clauses


def _lit_key(lit):
    return repr(lit)


def _norm_lit(lit):
    pos, l, r = lit
    return (pos, l, r) if repr(l) >= repr(r) else (pos, r, l)


def normalize(lits) -> tuple | None:
    """Canonical clause: oriented literals, variables renumbered.

    Returns None for tautologies.  Literals ``s != s`` are dropped.
    """
    out = []
    for lit in lits:
        pos, l, r = lit
        if l == r:
            if pos:
                return None
            continue
        out.append(_norm_lit(lit))
    out = sorted(set(out), key=_lit_key)
    pos_set = {(l, r) for p, l, r in out if p}
    if any((l, r) in pos_set for p, l, r in out if not p):
        return None
    ren: dict = {}

    def rn(t):
        if isinstance(t, int):
            if t not in ren:
                ren[t] = len(ren)
            return ren[t]
        if len(t) == 1:
            return t
        return (t[0], *(rn(a) for a in t[1:]))

    res = [(p, rn(l), rn(r)) for p, l, r in out]
    res = sorted({_norm_lit(x) for x in res}, key=_lit_key)
    return tuple(res)


def _max_var(lits) -> int:
    m = -1
    for _, l, r in lits:
        for v in _vars_of(l) | _vars_of(r):
            m = max(m, v)
    return m


@dataclass
class Clause:
    id: int
    lits: tuple
    rule: str
    parents: tuple = ()
    source: str | None = None  # input formula name
    weight: int = 0
    selected: tuple = field(default=(), repr=False)

    def __post_init__(self):
        self.weight = sum(_weight(l) + _weight(r) for _, l, r in self.lits)
        neg = [i for i, (p, _, _) in enumerate(self.lits) if not p]
        if neg:
            best = max(neg, key=lambda i: _weight(self.lits[i][1]) + _weight(self.lits[i][2]))
            self.selected = (best,)
        else:
            self.selected = tuple(range(len(self.lits)))


def _subsumes(d: tuple, c: tuple) -> bool:
    if len(d) > len(c):
        return False

    def go(i, s, used):
        if i == len(d):
            return True
        p, l, r = d[i]
        for j, (q, a, b) in enumerate(c):
            if q != p or j in used:
                continue
            for x, y in ((a, b), (b, a)):
                s2 = match(l, x, s)
                if s2 is not None:
                    s2 = match(r, y, s2)
                    if s2 is not None and go(i + 1, s2, used | {j}):
                        return True
        return False

    return go(0, {}, frozenset())


# ------------------------------------------------------------------ prover


@dataclass
class ProofResult:
    status: str
    proof: list = field(default_factory=list)  # clauses of the refutation, parents first
    clauses_generated: int = 0


class Prover:
    def __init__(self, timeout: float = 30.0, max_clauses: int = 200_000):
        self.timeout = timeout
        self.max_clauses = max_clauses
        self.all: list = []
        self.active: list = []
        self.units: dict = {}  # lhs top symbol -> list of (lhs, rhs, oriented, clause)
        self.passive: list = []
        self.seen: set = set()

    def _new(self, lits, rule, parents=(), source=None) -> Clause | None:
        lits = normalize(lits)
        if lits is None or lits in self.seen:
            return None
        self.seen.add(lits)
        c = Clause(len(self.all), lits, rule, tuple(parents), source)
        self.all.append(c)
        return c

    # -- simplification
    def _rewrite_term(self, t, used: set):
        if isinstance(t, int):
            return t
        if len(t) > 1:
            t = (t[0], *(self._rewrite_term(a, used) for a in t[1:]))
        while not isinstance(t, int):
            for lhs, rhs, oriented, cl in self.units.get(t[0], ()):
                s = match(lhs, t, {})
                if s is None:
                    continue
                new = _inst(rhs, s)
                if not oriented and kbo(t, new) != ">":
                    continue
                used.add(cl.id)
                t = self._rewrite_term(new, used)
                break
            else:
                return t
        return t

    def _simplify(self, c: Clause) -> Clause | None:
        if not self.units:
            return c
        used: set = set()
        lits = tuple((p, self._rewrite_term(l, used), self._rewrite_term(r, used)) for p, l, r in c.lits)
        if not used:
            return c
        norm = normalize(lits)
        if norm is None:
            return None
        if norm in self.seen:
            return None
        self.seen.add(norm)
        nc = Clause(len(self.all), norm, "rw", (c.id, *sorted(used)))
        self.all.append(nc)
        return nc

    def _subsumed(self, c: Clause) -> bool:
        for d in self.active:
            if len(d.lits) <= len(c.lits) and _subsumes(d.lits, c.lits):
                return True
        return False

    def _add_unit(self, c: Clause):
        if len(c.lits) != 1 or not c.lits[0][0]:
            return
        _, l, r = c.lits[0]
        o = kbo(l, r)
        if o == ">":
            pairs = [(l, r, True)]
        elif o == "<":
            pairs = [(r, l, True)]
        else:
            pairs = [(l, r, False), (r, l, False)]
        for lhs, rhs, oriented in pairs:
            if isinstance(lhs, int):
                continue
            self.units.setdefault(lhs[0], []).append((lhs, rhs, oriented, c))

    # -- inferences
    def _infer(self, g: Clause):
        out = []
        lits = g.lits
        # equality resolution
        for i in g.selected:
            p, l, r = lits[i]
            if not p:
                s = unify(l, r)
                if s is not None:
                    rest = [(q, subst(a, s), subst(b, s)) for j, (q, a, b) in enumerate(lits) if j != i]
                    out.append((rest, "er", (g.id,)))
        # equality factoring
        if not any(not p for p, _, _ in lits):
            for i, j in itertools.permutations(range(len(lits)), 2):
                _, s1, t1 = lits[i]
                _, s2, t2 = lits[j]
                for a, b in ((s1, t1), (t1, s1)):
                    for c, d in ((s2, t2), (t2, s2)):
                        s = unify(a, c)
                        if s is None or kbo(subst(a, s), subst(b, s)) in ("<", "="):
                            continue
                        rest = [(q, subst(x, s), subst(y, s)) for k, (q, x, y) in enumerate(lits) if k != i]
                        rest.append((False, subst(b, s), subst(d, s)))
                        out.append((rest, "ef", (g.id,)))
        for other in self.active:
            out.extend(self._superpose(g, other))
            if other is not g:
                out.extend(self._superpose(other, g))
        return out

    def _superpose(self, frm: Clause, into: Clause):
        """Superposition of positive selected equations of ``frm`` into ``into``."""
        out = []
        if any(not p for p, _, _ in frm.lits):
            return out
        k = _max_var(into.lits) + 1
        f_lits = [(p, _shift(l, k), _shift(r, k)) for p, l, r in frm.lits]
        for i in frm.selected:
            _, fl, fr = f_lits[i]
            for l, r in ((fl, fr), (fr, fl)):
                if isinstance(l, int):
                    continue
                for j in into.selected:
                    q, a, b = into.lits[j]
                    for side, other_side, put in ((a, b, 0), (b, a, 1)):
                        for path, sub in _positions(side):
                            if sub[0] != l[0]:
                                continue
                            s = unify(sub, l)
                            if s is None:
                                continue
                            ls, rs = subst(l, s), subst(r, s)
                            if kbo(ls, rs) in ("<", "="):
                                continue
                            sides = subst(side, s)
                            if kbo(sides, subst(other_side, s)) == "<":
                                continue
                            new_side = _replace(sides, path, rs)
                            new_lit = (q, new_side, subst(other_side, s)) if put == 0 else (q, subst(other_side, s), new_side)
                            rest = [(p2, subst(x, s), subst(y, s)) for m, (p2, x, y) in enumerate(f_lits) if m != i]
                            rest += [(p2, subst(x, s), subst(y, s)) for m, (p2, x, y) in enumerate(into.lits) if m != j]
                            rest.append(new_lit)
                            out.append((rest, "sp", (frm.id, into.id)))
        return out

    # -- main loop
    def run(self, inputs: list) -> ProofResult:
        """Saturate ``(clause_lits, source_name)`` inputs."""
        start = time.monotonic()
        tick = itertools.count()
        for lits, src in inputs:
            c = self._new(lits, "input", (), src)
            if c is None:
                continue
            if not c.lits:
                return ProofResult("refuted", self._proof(c), len(self.all))
            heapq.heappush(self.passive, (c.weight, next(tick), c))
        fifo: list = list(self.passive)
        heapq.heapify(fifo)
        age_q = [(c.id, c) for _, _, c in fifo]
        heapq.heapify(age_q)
        done: set = set()
        step = 0
        while self.passive or age_q:
            if time.monotonic() - start > self.timeout:
                return ProofResult("timeout", [], len(self.all))
            if len(self.all) > self.max_clauses:
                return ProofResult("resource", [], len(self.all))
            step += 1
            if step % 5 == 0 and age_q:
                _, g = heapq.heappop(age_q)
            elif self.passive:
                _, _, g = heapq.heappop(self.passive)
            else:
                _, g = heapq.heappop(age_q)
            if g.id in done:
                continue
            done.add(g.id)
            g2 = self._simplify(g)
            if g2 is None:
                continue
            if g2 is not g:
                done.add(g2.id)
                g = g2
            if not g.lits:
                return ProofResult("refuted", self._proof(g), len(self.all))
            if self._subsumed(g):
                continue
            self.active.append(g)
            self._add_unit(g)
            for lits, rule, parents in self._infer(g):
                c = self._new(lits, rule, parents)
                if c is None:
                    continue
                if not c.lits:
                    return ProofResult("refuted", self._proof(c), len(self.all))
                heapq.heappush(self.passive, (c.weight, next(tick), c))
                heapq.heappush(age_q, (c.id, c))
                if time.monotonic() - start > self.timeout:
                    return ProofResult("timeout", [], len(self.all))
        return ProofResult("saturated", [], len(self.all))

    def _proof(self, empty: Clause) -> list:
        need: set = set()
        stack = [empty.id]
        while stack:
            i = stack.pop()
            if i in need:
                continue
            need.add(i)
            stack.extend(self.all[i].parents)
        return [self.all[i] for i in sorted(need)]


# ------------------------------------------------------------------ driver


def _render_term(t) -> str:
    if isinstance(t, int):
        return f"X{t}"
    if len(t) == 1:
        return t[0]
    return f"{t[0]}({','.join(_render_term(a) for a in t[1:])})"


def _render_lit(lit) -> str:
    p, l, r = lit
    if r == (TRUE_SYM,):
        return _render_term(l) if p else f"~{_render_term(l)}"
    if l == (TRUE_SYM,):
        return _render_term(r) if p else f"~{_render_term(r)}"
    return f"{_render_term(l)} {'=' if p else '!='} {_render_term(r)}"


def render_clause(lits) -> str:
    return " | ".join(_render_lit(x) for x in lits) if lits else "$false"


def prove_text(text: str, timeout: float = 30.0, path: str = "stdin") -> tuple[str, list[str]]:
    """SZS status and output lines for a TPTP problem."""
    try:
        problem = parse_problem(text)
    except TptpSyntaxError as e:
        return "SyntaxError", [f"% {e}"]
    reserved: set = set()
    for _, _, f in problem:
        _symbols(f, reserved)
    cl = _Clausifier(reserved)
    has_conj = any(role == "conjecture" for _, role, _ in problem)
    inputs = []
    for name, role, f in problem:
        if role == "conjecture":
            f = ("not", f)
        try:
            for c in cl.clauses(f):
                inputs.append((c, name))
        except TptpSyntaxError as e:
            return "SyntaxError", [f"% {e}"]
    res = Prover(timeout=timeout).run(inputs)
    if res.status == "refuted":
        status = "Theorem" if has_conj else "Unsatisfiable"
        lines = [f"% SZS output start CNFRefutation for {path}"]
        for c in res.proof:
            body = render_clause(c.lits)
            if c.rule == "input":
                lines.append(f"cnf(c_{c.id}, axiom, ({body}), file('{path}', {c.source})).")
            else:
                parents = ",".join(f"c_{p}" for p in c.parents)
                lines.append(f"cnf(c_{c.id}, plain, ({body}), inference({c.rule}, [status(thm)], [{parents}])).")
        lines.append(f"% SZS output end CNFRefutation for {path}")
        return status, lines
    if res.status == "saturated":
        return ("CounterSatisfiable" if has_conj else "Satisfiable"), []
    if res.status == "timeout":
        return "Timeout", []
    return "ResourceOut", []


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="crosshammer-prove", description="Saturation prover for TPTP FOF problems.")
    ap.add_argument("problem", help="TPTP file, or - for standard input")
    ap.add_argument("--timeout", type=float, default=30.0, help="CPU seconds (default 30)")
    args = ap.parse_args(argv)
    if args.problem == "-":
        text, path = sys.stdin.read(), "stdin"
    else:
        with open(args.problem, encoding="utf-8") as fh:
            text = fh.read()
        path = args.problem
    status, lines = prove_text(text, args.timeout, path)
    print(f"% SZS status {status} for {path}")
    for line in lines:
        print(line)
    sys.stdout.flush()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
