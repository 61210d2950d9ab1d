"""Higher-order types and terms.

Terms are immutable trees with named bound variables.  Type constructors
share the constant namespace of their library (``h4/num``); the logical
constructors ``bool`` and ``fun`` and the logical term constants are global.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping


class KernelError(Exception):
    """Base class of all kernel errors."""


class TypeMismatchError(KernelError):
    pass


class ConstMapError(KernelError):
    pass


# ---------------------------------------------------------------- types


@dataclass(frozen=True, slots=True)
class TyVar:
    name: str

    def __str__(self) -> str:
        return "'" + self.name


@dataclass(frozen=True, slots=True)
class TyApp:
    op: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.op
        return "(" + " ".join([self.op, *map(str, self.args)]) + ")"


Ty = TyVar | TyApp

BOOL = TyApp("bool")
LOGICAL_TYCONS = {"bool": 0, "fun": 2}


def fun(dom: Ty, rng: Ty) -> TyApp:
    return TyApp("fun", (dom, rng))


def fun_n(*tys: Ty) -> Ty:
    """``fun_n(a, b, c)`` is ``a -> b -> c``."""
    out = tys[-1]
    for t in reversed(tys[:-1]):
        out = fun(t, out)
    return out


def is_fun(ty: Ty) -> bool:
    return isinstance(ty, TyApp) and ty.op == "fun"


def dest_fun(ty: Ty) -> tuple[Ty, Ty]:
    if not is_fun(ty):
        raise TypeMismatchError(f"not a function type: {ty}")
    return ty.args[0], ty.args[1]


def fun_arity(ty: Ty) -> int:
    """Number of arrows along the right spine of ``ty``."""
    n = 0
    while is_fun(ty):
        ty = ty.args[1]
        n += 1
    return n


def tyvars(ty: Ty, acc: list | None = None) -> list[str]:
    """Type variables of ``ty`` in first-occurrence order."""
    if acc is None:
        acc = []
    if isinstance(ty, TyVar):
        if ty.name not in acc:
            acc.append(ty.name)
    else:
        for a in ty.args:
            tyvars(a, acc)
    return acc


def tycons(ty: Ty, acc: set | None = None) -> set[str]:
    if acc is None:
        acc = set()
    if isinstance(ty, TyApp):
        acc.add(ty.op)
        for a in ty.args:
            tycons(a, acc)
    return acc


def subst_ty(ty: Ty, theta: Mapping[str, Ty]) -> Ty:
    if isinstance(ty, TyVar):
        return theta.get(ty.name, ty)
    if not ty.args:
        return ty
    return TyApp(ty.op, tuple(subst_ty(a, theta) for a in ty.args))


def rename_tycons(ty: Ty, m: Mapping[str, str]) -> Ty:
    if isinstance(ty, TyVar):
        return ty
    return TyApp(m.get(ty.op, ty.op), tuple(rename_tycons(a, m) for a in ty.args))


def type_match(pattern: Ty, ty: Ty, theta: dict | None = None) -> dict | None:
    """One-way matching of ``pattern`` onto ``ty``; ``None`` if impossible."""
    if theta is None:
        theta = {}
    if isinstance(pattern, TyVar):
        bound = theta.get(pattern.name)
        if bound is None:
            theta[pattern.name] = ty
            return theta
        return theta if bound == ty else None
    if not isinstance(ty, TyApp) or ty.op != pattern.op or len(ty.args) != len(pattern.args):
        return None
    for p, t in zip(pattern.args, ty.args):
        if type_match(p, t, theta) is None:
            return None
    return theta


# ---------------------------------------------------------------- terms


@dataclass(frozen=True, slots=True)
class Const:
    name: str
    ty: Ty


@dataclass(frozen=True, slots=True)
class Var:
    name: str
    ty: Ty


@dataclass(frozen=True, slots=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True, slots=True)
class Abs:
    var: str
    vty: Ty
    body: "Term"


Term = Const | Var | App | Abs

# Logical constants and their type schemes.
_A = TyVar("a")
LOGICAL_CONSTS: dict[str, Ty] = {
    "=": fun_n(_A, _A, BOOL),
    "!": fun(fun(_A, BOOL), BOOL),
    "?": fun(fun(_A, BOOL), BOOL),
    "/\\": fun_n(BOOL, BOOL, BOOL),
    "\\/": fun_n(BOOL, BOOL, BOOL),
    "==>": fun_n(BOOL, BOOL, BOOL),
    "<=>": fun_n(BOOL, BOOL, BOOL),
    "~": fun(BOOL, BOOL),
    "T": BOOL,
    "F": BOOL,
}
LOGICAL_NAMES = frozenset(LOGICAL_CONSTS) | frozenset(LOGICAL_TYCONS)


def is_logical(name: str) -> bool:
    return name in LOGICAL_NAMES


def type_of(t: Term) -> Ty:
    # App chains are walked iteratively; deep left spines are common.
    if isinstance(t, (Const, Var)):
        return t.ty
    if isinstance(t, Abs):
        return fun(t.vty, type_of(t.body))
    nargs = 0
    while isinstance(t, App):
        t = t.fn
        nargs += 1
    ty = type_of(t)
    for _ in range(nargs):
        ty = dest_fun(ty)[1]
    return ty


def mk_app(fn: Term, *args: Term) -> Term:
    """Type-checked application."""
    for a in args:
        dom, _ = dest_fun(type_of(fn))
        aty = type_of(a)
        if dom != aty:
            raise TypeMismatchError(f"argument of type {aty} where {dom} expected")
        fn = App(fn, a)
    return fn


def mk_eq(l: Term, r: Term) -> Term:
    ty = type_of(l)
    return mk_app(Const("=", fun_n(ty, ty, BOOL)), l, r)


def mk_forall(v: Var, body: Term) -> Term:
    return App(Const("!", fun(fun(v.ty, BOOL), BOOL)), Abs(v.name, v.ty, body))


def mk_exists(v: Var, body: Term) -> Term:
    return App(Const("?", fun(fun(v.ty, BOOL), BOOL)), Abs(v.name, v.ty, body))


def mk_binop(op: str, a: Term, b: Term) -> Term:
    return App(App(Const(op, LOGICAL_CONSTS[op]), a), b)


def mk_neg(a: Term) -> Term:
    return App(Const("~", LOGICAL_CONSTS["~"]), a)


TRUE = Const("T", BOOL)
FALSE = Const("F", BOOL)


def strip_comb(t: Term) -> tuple[Term, list[Term]]:
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def list_mk_comb(head: Term, args) -> Term:
    for a in args:
        head = App(head, a)
    return head


# ---------------------------------------------------------------- traversal


def subterms(t: Term) -> Iterator[Term]:
    """All subterm nodes, pre-order, including ``t`` itself."""
    stack = [t]
    while stack:
        u = stack.pop()
        yield u
        if isinstance(u, App):
            stack.append(u.arg)
            stack.append(u.fn)
        elif isinstance(u, Abs):
            stack.append(u.body)


def free_vars(t: Term) -> list[Var]:
    """Free variables in first-occurrence (left-to-right) order."""
    out: list[Var] = []
    seen = set()

    def go(u, bound):
        if isinstance(u, Var):
            if (u.name, u.ty) not in bound and u not in seen:
                seen.add(u)
                out.append(u)
        elif isinstance(u, App):
            go(u.fn, bound)
            go(u.arg, bound)
        elif isinstance(u, Abs):
            go(u.body, bound | {(u.var, u.vty)})

    go(t, frozenset())
    return out


def consts_of(t: Term) -> set[str]:
    return {u.name for u in subterms(t) if isinstance(u, Const)}


def term_tycons(t: Term) -> set[str]:
    acc: set[str] = set()
    for u in subterms(t):
        if isinstance(u, (Const, Var)):
            tycons(u.ty, acc)
        elif isinstance(u, Abs):
            tycons(u.vty, acc)
    return acc


def term_tyvars(t: Term) -> list[str]:
    acc: list[str] = []
    for u in subterms(t):
        if isinstance(u, (Const, Var)):
            tyvars(u.ty, acc)
        elif isinstance(u, Abs):
            tyvars(u.vty, acc)
    return acc


def names_of(t: Term) -> set[str]:
    """Non-logical constant and type-constructor names occurring in ``t``."""
    return {n for n in consts_of(t) | term_tycons(t) if n not in LOGICAL_NAMES}


# ---------------------------------------------------------------- substitution


def _variant(name: str, avoid: set) -> str:
    i = 1
    while f"{name}'{i}" in avoid:
        i += 1
    return f"{name}'{i}"


def subst(t: Term, sigma: Mapping[Var, Term]) -> Term:
    """Capture-avoiding substitution of free variables."""
    if not sigma:
        return t
    if isinstance(t, Var):
        return sigma.get(t, t)
    if isinstance(t, Const):
        return t
    if isinstance(t, App):
        return App(subst(t.fn, sigma), subst(t.arg, sigma))
    bv = Var(t.var, t.vty)
    inner = {k: v for k, v in sigma.items() if k != bv}
    if not inner:
        return t
    incoming = {(w.name) for v in inner.values() for w in free_vars(v)}
    if t.var in incoming:
        avoid = incoming | {w.name for w in free_vars(t.body)}
        fresh = Var(_variant(t.var, avoid), t.vty)
        inner[bv] = fresh
        return Abs(fresh.name, t.vty, subst(t.body, inner))
    return Abs(t.var, t.vty, subst(t.body, inner))


def beta_norm(t: Term) -> Term:
    """Full beta normal form."""
    if isinstance(t, (Const, Var)):
        return t
    if isinstance(t, Abs):
        return Abs(t.var, t.vty, beta_norm(t.body))
    fn = beta_norm(t.fn)
    arg = beta_norm(t.arg)
    if isinstance(fn, Abs):
        return beta_norm(subst(fn.body, {Var(fn.var, fn.vty): arg}))
    return App(fn, arg)


def alpha_normalize(t: Term) -> Term:
    """Rename bound variables to ``%0, %1, ...`` in binder (pre-)order.

    Free variables never start with ``%`` (the parser rejects it), so the
    renaming cannot capture.
    """
    counter = [0]

    def go(u, env):
        if isinstance(u, Var):
            return env.get((u.name, u.ty), u)
        if isinstance(u, Const):
            return u
        if isinstance(u, App):
            return App(go(u.fn, env), go(u.arg, env))
        name = f"%{counter[0]}"
        counter[0] += 1
        env2 = dict(env)
        env2[(u.var, u.vty)] = Var(name, u.vty)
        return Abs(name, u.vty, go(u.body, env2))

    return go(t, {})


def aconv(a: Term, b: Term) -> bool:
    return alpha_normalize(a) == alpha_normalize(b)


# ---------------------------------------------------------------- renaming


def apply_const_map(t: Term, m: Mapping[str, str], signature=None) -> Term:
    """Rename constants and type constructors of ``t`` according to ``m``.

    ``m`` must be injective.  When ``signature`` (a
    :class:`~crosshammer.kernel.syntax.Signature` of the target namespace) is
    given, every renamed constant must be an instance of its declared type.
    """
    targets: dict[str, str] = {}
    for src, dst in m.items():
        if dst in targets and targets[dst] != src:
            raise ConstMapError(f"map is not injective: {targets[dst]} and {src} both map to {dst}")
        targets[dst] = src
    if not m:
        return t
    tycache: dict = {}

    def ty_(ty):
        r = tycache.get(ty)
        if r is None:
            r = tycache[ty] = rename_tycons(ty, m)
        return r

    def go(u):
        if isinstance(u, Const):
            new = Const(m.get(u.name, u.name), ty_(u.ty))
            if signature is not None and u.name in m:
                decl = signature.consts.get(new.name)
                if decl is not None and type_match(decl, new.ty) is None:
                    raise ConstMapError(
                        f"type clash: {u.name} -> {new.name} at {new.ty}, declared {decl}")
            return new
        if isinstance(u, Var):
            return Var(u.name, ty_(u.ty))
        if isinstance(u, App):
            return App(go(u.fn), go(u.arg))
        return Abs(u.var, ty_(u.vty), go(u.body))

    return go(t)


def invert_map(m: Mapping[str, str]) -> dict[str, str]:
    inv: dict[str, str] = {}
    for k, v in m.items():
        if v in inv:
            raise ConstMapError(f"map is not injective at {v}")
        inv[v] = k
    return inv


# ---------------------------------------------------------------- printing


def subterm_strings(t: Term) -> set[str]:
    """Printed subterms of ``t`` with every variable replaced by ``V``.

    Variables on their own are not reported.  Application spines print as
    ``f(a,b)``; each partial application is a subterm of its own.
    """
    out: set[str] = set()

    def go(u) -> str:
        if isinstance(u, Var):
            return "V"
        if isinstance(u, Const):
            out.add(u.name)
            return u.name
        if isinstance(u, Abs):
            s = "\\V." + go(u.body)
            out.add(s)
            return s
        head, args = strip_comb(u)
        h = go(head)
        parts = []
        for a in args:
            parts.append(go(a))
            out.add(f"{h}({','.join(parts)})")
        return f"{h}({','.join(parts)})"

    go(t)
    return out
