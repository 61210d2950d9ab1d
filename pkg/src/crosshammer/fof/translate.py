"""Higher-order statements to untyped first-order TPTP problems.

The encoding:

* abstractions in term position become fresh function symbols applied to
  their free variables, each with a defining axiom;
* formulas in term position are lifted the same way, with a definition
  through the truth predicate ``p``;
* every symbol is applied directly to as many arguments as its shortest
  occurrence has, and further arguments go through the binary ``app``;
* constants that only ever occur as fully applied atoms become predicates;
  other boolean atoms are wrapped in ``p``;
* types are erased, except that variables of a type that may have a
  bounded size (one occurring as a bare side of an equation) are wrapped
  as ``tag(type, X)``.  Symbols with a single ground result type of such a
  type get the axiom ``tag(type, f(X..)) = f(X..)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..kernel import (
    BOOL,
    Abs,
    App,
    Const,
    Term,
    TyApp,
    TyVar,
    Var,
    alpha_normalize,
    beta_norm,
    free_vars,
    fun_arity,
    print_term,
    strip_comb,
    type_of,
)
from ..kernel.terms import LOGICAL_CONSTS

APPLY = "app"
TRUTH = "p"
TAG = "tag"

_CONNECTIVES = {"/\\": "&", "\\/": "|", "==>": "=>", "<=>": "<=>"}
_CHAR_NAMES = {
    "+": "plus", "-": "minus", "*": "times", "/": "div", "<": "lt", ">": "gt", "=": "eq",
    "'": "prime", ".": "dot", "$": "dollar", "!": "bang", "?": "qm", "&": "amp", "|": "bar",
    "~": "tilde", "^": "hat", "@": "at", "#": "hash", "%": "pct", ":": "colon", "\\": "bslash",
}


class TranslationError(ValueError):
    """A statement that cannot be expressed; ``subterm`` is the culprit."""

    def __init__(self, message: str, subterm: Term | None = None):
        if subterm is not None:
            message = f"{message}: {print_term(subterm)}"
        super().__init__(message)
        self.subterm = subterm


def sanitize(name: str) -> str:
    """``name`` spelled with ``[a-zA-Z0-9_]`` only."""
    out = []
    for ch in name:
        if ch.isascii() and (ch.isalnum() or ch == "_"):
            out.append(ch)
        else:
            out.append("_" + _CHAR_NAMES.get(ch, f"x{ord(ch):x}") + "_")
    return "".join(out) or "_"


@dataclass(frozen=True)
class FofFormula:
    name: str
    role: str  # axiom | conjecture
    text: str
    source: str | None = None  # original theorem id; None for generated definitions

    def line(self) -> str:
        return f"fof({self.name}, {self.role}, {self.text})."


@dataclass
class FofProblem:
    axioms: list
    conjecture: FofFormula
    symbols: dict = field(default_factory=dict)  # fof symbol -> (kind, original, arity)

    def formulas(self) -> list:
        return [*self.axioms, self.conjecture]

    def to_tptp(self) -> str:
        return "".join(f.line() + "\n" for f in self.formulas())

    def premise_names(self) -> dict:
        """Axiom name -> theorem id, for axioms that stand for offered lemmas."""
        return {a.name: a.source for a in self.axioms if a.source is not None}

    def mapping_text(self) -> str:
        return "".join(f"{f.name}\t{f.source}\n" for f in self.formulas() if f.source is not None)

    def restrict(self, keep) -> "FofProblem":
        """Same problem with only the lemma axioms named in ``keep``."""
        keep = set(keep)
        axioms = [a for a in self.axioms if a.source is None or a.name in keep]
        return FofProblem(axioms, self.conjecture, dict(self.symbols))


def _overlap(a, b) -> bool:
    """Whether two types may have a common instance (type variables match anything)."""
    if isinstance(a, TyVar) or isinstance(b, TyVar):
        return True
    return a.op == b.op and len(a.args) == len(b.args) and all(map(_overlap, a.args, b.args))


def _has_tyvar(ty) -> bool:
    return isinstance(ty, TyVar) or any(_has_tyvar(a) for a in ty.args)


def bare_equation_types(t: Term, acc: list) -> list:
    """Types of variables that stand alone as a side of an equation in ``t``.

    Lifting ``\\x. y`` yields the equation ``app(lam, X) = Y``, so a bare
    variable as the body of an abstraction counts too.
    """
    if isinstance(t, Abs):
        body = t
        while isinstance(body, Abs):
            body = body.body
        if isinstance(body, Var) and body.ty not in acc:
            acc.append(body.ty)
        bare_equation_types(t.body, acc)
    elif isinstance(t, App):
        head, args = strip_comb(t)
        if isinstance(head, Const) and head.name == "=" and len(args) == 2 and type_of(args[0]) != BOOL:
            for a in args:
                if isinstance(a, Var) and a.ty not in acc:
                    acc.append(a.ty)
        bare_equation_types(t.fn, acc)
        bare_equation_types(t.arg, acc)
    return acc


# Intermediate first-order syntax.  Terms: ("v", name) | ("c", sym, args)
# | ("a", head, args) | ("tag", type, term); types: ("ty", sym, args) |
# ("tv", name).  Formulas are tuples tagged with their connective.


class _Translator:
    def __init__(self, risky=()):
        self.risky = list(risky)  # types whose variables are tagged
        self.const_syms: dict = {}
        self.used_names: set = {APPLY, TRUTH, TAG}
        self.type_syms: dict = {}
        self.result_types: dict = {}  # sym -> set of (n_args, instance type)
        self.lifted: dict = {}  # closure key -> symbol
        self.defs: list = []  # (symbol, intermediate formula)
        self.occ: dict = {}  # sym -> list of (n_args, at_atom)
        self.symbols: dict = {}
        self.counter = 0

    # -- names
    def _fresh_sym(self, base: str) -> str:
        name = base
        i = 1
        while name in self.used_names:
            name = f"{base}_{i}"
            i += 1
        self.used_names.add(name)
        return name

    def const_sym(self, name: str, ty) -> str:
        s = self.const_syms.get(name)
        if s is None:
            s = self._fresh_sym("c_" + sanitize(name))
            self.const_syms[name] = s
            self.symbols[s] = ("const", name, fun_arity(ty))
        return s

    def _note(self, sym: str, n: int, atom: bool, ty=None):
        self.occ.setdefault(sym, []).append((n, atom))
        if ty is not None:
            self.result_types.setdefault(sym, set()).add(ty)

    # -- types and tags
    def is_risky(self, ty) -> bool:
        return any(_overlap(ty, r) for r in self.risky)

    def encode_type(self, ty):
        if isinstance(ty, TyVar):
            return ("tv", "TV" + sanitize(ty.name))
        sym = self.type_syms.get(ty.op)
        if sym is None:
            sym = self.type_syms[ty.op] = self._fresh_sym("ty_" + sanitize(ty.op))
            self.symbols[sym] = ("type", ty.op, len(ty.args))
        return ("ty", sym, [self.encode_type(a) for a in ty.args])

    def var(self, v: Var, env: dict):
        x = ("v", env[v])
        if self.is_risky(v.ty):
            return ("tag", self.encode_type(v.ty), x)
        return x

    # -- formulas
    def formula(self, t: Term, env: dict):
        head, args = strip_comb(t)
        if isinstance(head, Const) and head.name in LOGICAL_CONSTS:
            n = head.name
            if n == "T" and not args:
                return ("true",)
            if n == "F" and not args:
                return ("false",)
            if n == "~" and len(args) == 1:
                return ("not", self.formula(args[0], env))
            if n in _CONNECTIVES and len(args) == 2:
                return ("bin", _CONNECTIVES[n], self.formula(args[0], env), self.formula(args[1], env))
            if n == "=" and len(args) == 2:
                if type_of(args[0]) == BOOL:
                    return ("bin", "<=>", self.formula(args[0], env), self.formula(args[1], env))
                return ("eq", self.term(args[0], env), self.term(args[1], env))
            if n in ("!", "?") and len(args) == 1:
                return self._quant("!" if n == "!" else "?", args[0], env)
            raise TranslationError("unexpected use of a logical constant", t)
        if type_of(t) != BOOL:
            raise TranslationError("non-boolean formula", t)
        return ("atom", self.term(t, env, atom=True))

    def _quant(self, q: str, body: Term, env: dict):
        names = []
        env = dict(env)
        while True:
            if not isinstance(body, Abs):
                # eta-expand a bare predicate argument
                ty = type_of(body)
                v = Var(f"%eta{self.counter}", ty.args[0] if isinstance(ty, TyApp) and ty.args else BOOL)
                self.counter += 1
                body = Abs(v.name, v.ty, App(body, v))
            x = self._bind(env, Var(body.var, body.vty))
            names.append(x)
            inner = body.body
            ih, iargs = strip_comb(inner)
            if isinstance(ih, Const) and ih.name == ("!" if q == "!" else "?") and len(iargs) == 1 and isinstance(iargs[0], Abs):
                body = iargs[0]
                continue
            return ("q", q, tuple(names), self.formula(inner, env))

    def _bind(self, env: dict, v: Var) -> str:
        x = f"X{len(env)}"
        while x in env.values():
            x = f"X{len(env) + self.counter}"
            self.counter += 1
        env[v] = x
        return x

    # -- terms
    def term(self, t: Term, env: dict, atom: bool = False):
        head, args = strip_comb(t)
        if isinstance(head, Abs):
            if args:
                raise TranslationError("term is not beta-normal", t)
            return self._lift_abs(t, env, atom)
        if isinstance(head, Var):
            if head not in env:
                raise TranslationError("unbound variable", head)
            targs = [self.term(a, env) for a in args]
            return ("a", self.var(head, env), targs) if targs else self.var(head, env)
        if isinstance(head, Const) and head.name in LOGICAL_CONSTS:
            return self._lift_logical(t, head, args, env, atom)
        if isinstance(head, Const):
            sym = self.const_sym(head.name, head.ty)
            self._note(sym, len(args), atom, head.ty)
            return ("c", sym, [self.term(a, env) for a in args])
        raise TranslationError("untranslatable term", t)

    def _lift_logical(self, t, head, args, env, atom):
        n_full = fun_arity(head.ty)
        if head.name in ("!", "?"):
            n_full = 1
        if len(args) == n_full:
            return self._lift_formula(t, env, atom)
        # partial application: eta-expand then lift as a function
        ty = type_of(t)
        missing = []
        cur = ty
        while isinstance(cur, TyApp) and cur.op == "fun":
            missing.append(cur.args[0])
            cur = cur.args[1]
        if not missing:
            raise TranslationError("cannot translate logical constant", t)
        avoid = {v.name for v in free_vars(t)}
        vs = []
        for i, vty in enumerate(missing):
            name = f"%e{i}"
            while name in avoid:
                name += "'"
            avoid.add(name)
            vs.append(Var(name, vty))
        body = t
        for v in vs:
            body = App(body, v)
        lam = body
        for v in reversed(vs):
            lam = Abs(v.name, v.ty, lam)
        return self._lift_abs(lam, env, atom)

    def _closure(self, t: Term, env: dict):
        fvs = [v for v in free_vars(t)]
        for v in fvs:
            if v not in env:
                raise TranslationError("unbound variable", v)
        closed = t
        for v in reversed(fvs):
            closed = Abs(v.name, v.ty, closed)
        return fvs, print_term(alpha_normalize(closed))

    def _lift_formula(self, t: Term, env: dict, atom: bool):
        fvs, key = self._closure(t, env)
        sym = self.lifted.get(("f", key))
        if sym is None:
            sym = self._fresh_sym(f"fml_{len(self.lifted)}")
            self.lifted[("f", key)] = sym
            self.symbols[sym] = ("formula", print_term(t), len(fvs))
            denv: dict = {}
            xs = tuple(self._bind(denv, v) for v in fvs)
            lhs = ("c", sym, [self.var(v, denv) for v in fvs])
            self._note(sym, len(fvs), False)
            body = ("bin", "<=>", ("atom", lhs), self.formula(t, denv))
            self.defs.append((sym, ("q", "!", xs, body) if xs else body))
        self._note(sym, len(fvs), atom)
        return ("c", sym, [self.var(v, env) for v in fvs])

    def _lift_abs(self, t: Term, env: dict, atom: bool):
        fvs, key = self._closure(t, env)
        sym = self.lifted.get(("l", key))
        if sym is None:
            sym = self._fresh_sym(f"lam_{len(self.lifted)}")
            self.lifted[("l", key)] = sym
            self.symbols[sym] = ("lambda", print_term(t), len(fvs))
            denv: dict = {}
            xs = [self._bind(denv, v) for v in fvs]
            body = t
            params = []
            param_vars = []
            while isinstance(body, Abs):
                v = Var(body.var, body.vty)
                params.append(self._bind(denv, v))
                param_vars.append(v)
                body = body.body
            closed = t
            for v in reversed(fvs):
                closed = Abs(v.name, v.ty, closed)
            self._note(sym, len(fvs), False, type_of(closed))
            lhs = ("a", ("c", sym, [self.var(v, denv) for v in fvs]),
                   [self.var(v, denv) for v in param_vars])
            if type_of(body) == BOOL:
                eq = ("bin", "<=>", ("atom", lhs), self.formula(body, denv))
            else:
                eq = ("eq", lhs, self.term(body, denv))
            allv = tuple(xs + params)
            self.defs.append((sym, ("q", "!", allv, eq) if allv else eq))
        self._note(sym, len(fvs), atom)
        return ("c", sym, [self.var(v, env) for v in fvs])

    # -- rendering
    def finish(self):
        self.arity = {s: min(n for n, _ in occ) for s, occ in self.occ.items()}
        self.preds = {
            s for s, occ in self.occ.items()
            if all(a for _, a in occ) and len({n for n, _ in occ}) == 1
            and self.symbols.get(s, ("",))[0] == "const"
        }
        self.uses_app = False  # set while rendering
        self.untag = []
        if not self.risky:
            return
        for s in sorted(self.result_types):
            if s in self.preds:
                continue
            results = set()
            for ty in self.result_types[s]:
                for _ in range(self.arity[s]):
                    ty = ty.args[1]
                results.add(ty)
            if len(results) != 1:
                continue
            (ty,) = results
            if ty == BOOL or _has_tyvar(ty) or not self.is_risky(ty):
                continue
            xs = tuple(f"X{i}" for i in range(self.arity[s]))
            t = ("c", s, [("v", x) for x in xs])
            eq = ("eq", ("tag", self.encode_type(ty), t), t)
            self.untag.append((s, ("q", "!", xs, eq) if xs else eq))

    def rterm(self, t) -> str:
        tag = t[0]
        if tag in ("v", "tv"):
            return t[1]
        if tag == "tag":
            return f"{TAG}({self.rterm(t[1])},{self.rterm(t[2])})"
        if tag == "ty":
            _, sym, args = t
            return sym + (f"({','.join(self.rterm(a) for a in args)})" if args else "")
        if tag == "c":
            _, sym, args = t
            m = self.arity[sym]
            out = sym + (f"({','.join(self.rterm(a) for a in args[:m])})" if m else "")
            for a in args[m:]:
                self.uses_app = True
                out = f"{APPLY}({out},{self.rterm(a)})"
            return out
        _, head, args = t
        out = self.rterm(head)
        for a in args:
            self.uses_app = True
            out = f"{APPLY}({out},{self.rterm(a)})"
        return out

    def rclosed(self, f) -> str:
        """Render a top-level formula, binding its type variables."""
        tvs = sorted(_type_vars(f, set()))
        return self.rform(("q", "!", tuple(tvs), f) if tvs else f)

    def rform(self, f) -> str:
        tag = f[0]
        if tag == "true":
            return "$true"
        if tag == "false":
            return "$false"
        if tag == "not":
            return f"~ ({self.rform(f[1])})"
        if tag == "bin":
            return f"({self.rform(f[2])} {f[1]} {self.rform(f[3])})"
        if tag == "eq":
            return f"({self.rterm(f[1])} = {self.rterm(f[2])})"
        if tag == "q":
            return f"({f[1]}[{','.join(f[2])}] : {self.rform(f[3])})"
        t = f[1]
        if t[0] == "c" and t[1] in self.preds:
            _, sym, args = t
            return sym + (f"({','.join(self.rterm(a) for a in args)})" if args else "")
        return f"{TRUTH}({self.rterm(t)})"


def _type_vars(node, acc: set) -> set:
    if isinstance(node, tuple):
        if len(node) == 2 and node[0] == "tv":
            acc.add(node[1])
        else:
            for x in node:
                _type_vars(x, acc)
    elif isinstance(node, list):
        for x in node:
            _type_vars(x, acc)
    return acc


def _prepare(t: Term, what: str) -> Term:
    t = beta_norm(t)
    if free_vars(t):
        raise TranslationError(f"{what} has unbound variables", t)
    if type_of(t) != BOOL:
        raise TranslationError(f"{what} is not a formula", t)
    return t


def translate(conjecture: Term, lemmas, conjecture_name: str = "goal") -> FofProblem:
    """Encode ``conjecture`` and the ``(thm_id, statement)`` lemmas as a FOF problem."""
    lemmas = [(tid, _prepare(stmt, f"lemma {tid}")) for tid, stmt in lemmas]
    conjecture = _prepare(conjecture, "conjecture")
    risky: list = []
    for _, stmt in lemmas:
        bare_equation_types(stmt, risky)
    bare_equation_types(conjecture, risky)
    tr = _Translator(risky)
    items = []
    seen_names: set = set()

    def unique(base: str) -> str:
        name, i = base, 1
        while name in seen_names:
            name = f"{base}_{i}"
            i += 1
        seen_names.add(name)
        return name

    for tid, stmt in lemmas:
        f = tr.formula(stmt, {})
        items.append((unique("a_" + sanitize(tid)), tid, f))
    goal = tr.formula(conjecture, {})
    tr.finish()
    axioms = [FofFormula(name, "axiom", tr.rclosed(f), tid) for name, tid, f in items]
    for sym, f in tr.defs:
        axioms.append(FofFormula(unique("def_" + sym), "axiom", tr.rclosed(f)))
    for sym, f in tr.untag:
        axioms.append(FofFormula(unique("untag_" + sym), "axiom", tr.rclosed(f)))
    cname = unique("conj_" + sanitize(conjecture_name))
    conj = FofFormula(cname, "conjecture", tr.rclosed(goal), conjecture_name)
    symbols = dict(tr.symbols)
    for s in tr.arity:
        kind, orig, _ = symbols[s]
        symbols[s] = (kind, orig, tr.arity[s])
    if tr.uses_app:
        symbols[APPLY] = ("apply", "", 2)
    symbols[TRUTH] = ("truth", "", 1)
    if tr.type_syms:
        symbols[TAG] = ("tag", "", 2)
    return FofProblem(axioms, conj, symbols)


_SAFE = re.compile(r"^[a-z][a-zA-Z0-9_]*$")


def is_tptp_name(name: str) -> bool:
    return bool(_SAFE.match(name))
