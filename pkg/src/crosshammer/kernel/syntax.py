"""Concrete s-expression syntax for types and terms.

Grammar::

    term := '(' term term+ ')' | '(\\' var ':' ty '.' term ')' | ident
    ty   := ident | '(' ident ty+ ')' | "'" ident

An identifier in the signature is a constant; an identifier containing ``/``
(other than the connectives) must be declared; anything else is a variable.
Types of free variables and instances of polymorphic constants are inferred.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .terms import (
    LOGICAL_CONSTS,
    LOGICAL_TYCONS,
    Abs,
    App,
    Const,
    KernelError,
    Term,
    Ty,
    TyApp,
    TypeMismatchError,
    TyVar,
    Var,
    fun,
    strip_comb,
    type_of,
)

_DELIMS = set("() \t\r\n")


class TermSyntaxError(KernelError):
    def __init__(self, msg: str, offset: int):
        super().__init__(f"{msg} at offset {offset}")
        self.offset = offset


class UnknownConstantError(KernelError):
    pass


@dataclass
class Signature:
    """Constant-type and type-constructor-arity tables."""

    consts: dict[str, Ty] = field(default_factory=dict)
    tycons: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for k, v in LOGICAL_CONSTS.items():
            self.consts.setdefault(k, v)
        for k, v in LOGICAL_TYCONS.items():
            self.tycons.setdefault(k, v)

    def check_type(self, ty: Ty) -> None:
        if isinstance(ty, TyVar):
            return
        if ty.op not in self.tycons:
            raise UnknownConstantError(f"unknown type constructor {ty.op}")
        if self.tycons[ty.op] != len(ty.args):
            raise TypeMismatchError(
                f"type constructor {ty.op} has arity {self.tycons[ty.op]}, got {len(ty.args)}")
        for a in ty.args:
            self.check_type(a)


# ---------------------------------------------------------------- printing


def print_type(ty: Ty) -> str:
    return str(ty)


def print_term(t: Term) -> str:
    if isinstance(t, (Const, Var)):
        return t.name
    if isinstance(t, Abs):
        return f"(\\{t.var}:{t.vty}. {print_term(t.body)})"
    head, args = strip_comb(t)
    return "(" + " ".join(print_term(x) for x in [head, *args]) + ")"


# ---------------------------------------------------------------- reader


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.last = 0  # start of the last token consumed

    def ws(self):
        t, n = self.text, len(self.text)
        while self.pos < n and t[self.pos] in " \t\r\n":
            self.pos += 1

    def peek(self) -> str:
        self.ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eof_error(self):
        raise TermSyntaxError("unexpected end of input", self.last)

    def expect(self, ch: str):
        c = self.peek()
        if not c:
            self.eof_error()
        if c != ch:
            raise TermSyntaxError(f"expected {ch!r}, found {c!r}", self.pos)
        self.last = self.pos
        self.pos += 1

    def ident(self, stop=_DELIMS) -> str:
        self.ws()
        start = self.pos
        t, n = self.text, len(self.text)
        while self.pos < n and t[self.pos] not in stop:
            self.pos += 1
        if self.pos == start:
            if start >= n:
                self.eof_error()
            raise TermSyntaxError(f"expected identifier, found {t[start]!r}", start)
        self.last = start
        return t[start:self.pos]


_TY_STOP = _DELIMS | {"."}


def _read_type(r: _Reader, sig: Signature | None) -> Ty:
    c = r.peek()
    if not c:
        r.eof_error()
    if c == "(":
        r.expect("(")
        op = r.ident(_TY_STOP)
        args = []
        while r.peek() != ")":
            if not r.peek():
                r.eof_error()
            args.append(_read_type(r, sig))
        r.expect(")")
        if not args:
            raise TermSyntaxError("type application without arguments", r.last)
        ty = TyApp(op, tuple(args))
    elif c == "'":
        r.pos += 1
        ty = TyVar(r.ident(_TY_STOP))
        return ty
    else:
        ty = TyApp(r.ident(_TY_STOP))
    if sig is not None:
        sig.check_type(TyApp(ty.op, tuple(TyVar("_") for _ in ty.args)))
    return ty


def parse_type(text: str, signature: Signature | None = None) -> Ty:
    r = _Reader(text)
    ty = _read_type(r, signature)
    if r.peek():
        raise TermSyntaxError("trailing input", r.pos)
    return ty


# Raw syntax tree before type inference.
@dataclass
class _RIdent:
    name: str
    offset: int


@dataclass
class _RApp:
    items: list
    offset: int


@dataclass
class _RAbs:
    var: str
    vty: Ty
    body: object
    offset: int


def _read_raw(r: _Reader, sig: Signature):
    c = r.peek()
    if not c:
        r.eof_error()
    if c == ")":
        raise TermSyntaxError("unexpected ')'", r.pos)
    if c != "(":
        off = r.pos
        return _RIdent(r.ident(), off)
    off = r.pos
    r.expect("(")
    t = r.text
    # '(\x:ty. body)' -- but '(\/ a b)' is an application of disjunction.
    if r.pos < len(t) and t[r.pos] == "\\" and t[r.pos + 1:r.pos + 2] not in ("/", ""):
        r.pos += 1
        if t[r.pos:r.pos + 1] == "\\":
            r.pos += 1
        var = r.ident(_DELIMS | {":"})
        r.expect(":")
        vty = _read_type(r, sig)
        r.expect(".")
        body = _read_raw(r, sig)
        r.expect(")")
        return _RAbs(var, vty, body, off)
    items = []
    while True:
        c = r.peek()
        if not c:
            r.eof_error()
        if c == ")":
            break
        items.append(_read_raw(r, sig))
    r.expect(")")
    if len(items) < 2:
        raise TermSyntaxError("application needs at least two terms", off)
    return _RApp(items, off)


# ---------------------------------------------------------------- inference


class _Infer:
    def __init__(self, sig: Signature):
        self.sig = sig
        self.subst: dict[str, Ty] = {}
        self.fresh = itertools.count()
        self.free: dict[str, Ty] = {}

    def new(self) -> TyVar:
        return TyVar(f"?{next(self.fresh)}")

    def walk(self, ty: Ty) -> Ty:
        while isinstance(ty, TyVar) and ty.name in self.subst:
            ty = self.subst[ty.name]
        return ty

    def resolve(self, ty: Ty) -> Ty:
        ty = self.walk(ty)
        if isinstance(ty, TyApp) and ty.args:
            return TyApp(ty.op, tuple(self.resolve(a) for a in ty.args))
        return ty

    def occurs(self, name: str, ty: Ty) -> bool:
        ty = self.walk(ty)
        if isinstance(ty, TyVar):
            return ty.name == name
        return any(self.occurs(name, a) for a in ty.args)

    def unify(self, a: Ty, b: Ty, offset: int):
        a, b = self.walk(a), self.walk(b)
        if a == b:
            return
        # Only inference variables ('?n') are flexible; annotated ones are rigid.
        if isinstance(a, TyVar) and a.name.startswith("?"):
            if self.occurs(a.name, b):
                raise TypeMismatchError(f"cyclic type at offset {offset}")
            self.subst[a.name] = b
            return
        if isinstance(b, TyVar) and b.name.startswith("?"):
            self.unify(b, a, offset)
            return
        if isinstance(a, TyApp) and isinstance(b, TyApp) and a.op == b.op and len(a.args) == len(b.args):
            for x, y in zip(a.args, b.args):
                self.unify(x, y, offset)
            return
        raise TypeMismatchError(
            f"cannot unify {self.resolve(a)} with {self.resolve(b)} at offset {offset}")

    def instantiate(self, scheme: Ty) -> Ty:
        theta: dict[str, Ty] = {}

        def go(ty):
            if isinstance(ty, TyVar):
                if ty.name not in theta:
                    theta[ty.name] = self.new()
                return theta[ty.name]
            return TyApp(ty.op, tuple(go(a) for a in ty.args))

        return go(scheme)

    def infer(self, raw, env: dict) -> tuple[object, Ty]:
        """Returns a pre-term (types may contain inference vars) and its type."""
        if isinstance(raw, _RIdent):
            name = raw.name
            if name in env:
                return Var(name, env[name]), env[name]
            if name in self.sig.consts:
                ty = self.instantiate(self.sig.consts[name])
                return Const(name, ty), ty
            if "/" in name and name not in ("/\\", "\\/"):
                raise UnknownConstantError(f"unknown constant {name} at offset {raw.offset}")
            if name.startswith("%"):
                raise TermSyntaxError(f"reserved variable name {name}", raw.offset)
            if name not in self.free:
                self.free[name] = self.new()
            return Var(name, self.free[name]), self.free[name]
        if isinstance(raw, _RAbs):
            body, bty = self.infer(raw.body, {**env, raw.var: raw.vty})
            return Abs(raw.var, raw.vty, body), fun(raw.vty, bty)
        fn, fty = self.infer(raw.items[0], env)
        for item in raw.items[1:]:
            arg, aty = self.infer(item, env)
            res = self.new()
            self.unify(fty, fun(aty, res), item.offset)
            fn, fty = App(fn, arg), res
        return fn, fty

    def finish(self, t, rename: dict) -> Term:
        def ty_(ty):
            ty = self.resolve(ty)
            return _rename_infer_vars(ty, rename)

        def go(u):
            if isinstance(u, Const):
                return Const(u.name, ty_(u.ty))
            if isinstance(u, Var):
                return Var(u.name, ty_(u.ty))
            if isinstance(u, App):
                return App(go(u.fn), go(u.arg))
            return Abs(u.var, u.vty, go(u.body))

        return go(t)


def _rename_infer_vars(ty: Ty, rename: dict) -> Ty:
    if isinstance(ty, TyVar):
        if ty.name.startswith("?"):
            if ty.name not in rename:
                rename[ty.name] = TyVar(f"_{len(rename)}")
            return rename[ty.name]
        return ty
    if not ty.args:
        return ty
    return TyApp(ty.op, tuple(_rename_infer_vars(a, rename) for a in ty.args))


def parse_term(text: str, signature: Signature, expected: Ty | None = None) -> Term:
    """Parse and type-check a term.

    Raises :class:`TermSyntaxError` (with ``offset``),
    :class:`UnknownConstantError` or :class:`TypeMismatchError`.
    """
    r = _Reader(text)
    raw = _read_raw(r, signature)
    if r.peek():
        raise TermSyntaxError("trailing input", r.pos)
    inf = _Infer(signature)
    pre, ty = inf.infer(raw, {})
    if expected is not None:
        inf.unify(ty, expected, 0)
    return inf.finish(pre, {})


def parse_formula(text: str, signature: Signature) -> Term:
    from .terms import BOOL

    return parse_term(text, signature, expected=BOOL)


def well_typed(t: Term) -> bool:
    try:
        type_of(t)
    except TypeMismatchError:
        return False

    def go(u):
        if isinstance(u, App):
            dom = type_of(u.fn)
            if not (isinstance(dom, TyApp) and dom.op == "fun") or dom.args[0] != type_of(u.arg):
                return False
            return go(u.fn) and go(u.arg)
        if isinstance(u, Abs):
            return go(u.body)
        return True

    return go(t)
