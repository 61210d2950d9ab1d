"""Clause normal form and canonical keys for theorem equivalence.

Two statements are equivalent when their clause forms agree up to the order
of conjuncts and disjuncts, orientation of equalities and renaming of
variables.  :func:`canonical_key` computes a representative of that class.

Only leading universal quantifiers and the propositional skeleton are
normalized; any other quantified or lambda subterm is an opaque atom, printed
with de Bruijn indices and with commutative connectives inside it sorted.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .terms import (
    BOOL,
    Abs,
    App,
    Const,
    KernelError,
    Term,
    TyApp,
    TyVar,
    Var,
    is_logical,
    strip_comb,
    type_of,
)


class NotAFormulaError(KernelError):
    pass


@dataclass(frozen=True, slots=True)
class Literal:
    positive: bool
    atom: Term


Clause = list  # list[Literal]

# ---------------------------------------------------------------- CNF


def strip_forall(t: Term) -> Term:
    while isinstance(t, App) and isinstance(t.fn, Const) and t.fn.name == "!" and isinstance(t.arg, Abs):
        t = t.arg.body
    return t


def _is_bool_eq(head: Term, args: list) -> bool:
    return head.name == "=" and len(args) == 2 and type_of(args[0]) == BOOL


def _nnf(u: Term, pos: bool):
    head, args = strip_comb(u)
    if isinstance(head, Const):
        n, k = head.name, len(args)
        if n == "~" and k == 1:
            return _nnf(args[0], not pos)
        if n in ("/\\", "\\/") and k == 2:
            conj = (n == "/\\") == pos
            return ("and" if conj else "or", [_nnf(args[0], pos), _nnf(args[1], pos)])
        if n == "==>" and k == 2:
            a, b = args
            if pos:
                return ("or", [_nnf(a, False), _nnf(b, True)])
            return ("and", [_nnf(a, True), _nnf(b, False)])
        if (n == "<=>" and k == 2) or (n == "=" and _is_bool_eq(head, args)):
            a, b = args
            if pos:
                return ("and", [("or", [_nnf(a, False), _nnf(b, True)]),
                                ("or", [_nnf(b, False), _nnf(a, True)])])
            return ("or", [("and", [_nnf(a, True), _nnf(b, False)]),
                           ("and", [_nnf(b, True), _nnf(a, False)])])
    return ("lit", Literal(pos, u))


def _distribute(node) -> list[list[Literal]]:
    kind, payload = node
    if kind == "lit":
        return [[payload]]
    parts = [_distribute(x) for x in payload]
    if kind == "and":
        return [c for p in parts for c in p]
    out: list[list[Literal]] = [[]]
    for p in parts:
        out = [a + b for a in out for b in p]
    return out


def to_cnf(t: Term) -> list[list[Literal]]:
    """Clause form of a formula; no literal is merged or dropped."""
    if type_of(t) != BOOL:
        raise NotAFormulaError(f"not a formula: type {type_of(t)}")
    return _distribute(_nnf(strip_forall(t), True))


def eval_cnf(clauses: Sequence[Sequence[Literal]], value: Callable[[Term], bool]) -> bool:
    return all(any(value(l.atom) == l.positive for l in c) for c in clauses)


# ---------------------------------------------------------------- rendering

ConstView = Callable[[str], "str | None"]

_BINDERS = ("!", "?")
_AC = ("/\\", "\\/")
_SYM = ("=", "<=>")
_BARE = ("/\\", "\\/", "==>", "<=>", "~", "T", "F")
_WILD = {"v": "?v", "t": "?t", "k": "?k", "y": "?y"}

# Atoms are compiled once into templates and rendered under many labellings.
# A template is a str, ("s", symbol), ("c", parts) for concatenation, or
# ("o", head, parts, tail) for ``head + " ".join(sorted(parts)) + tail``.
# Symbols are free variables ("v", name, ty), type variables ("t", name),
# constants ("k", name) and type constructors ("y", name); logical names are
# printed verbatim.


def _cat(parts: list):
    out: list = []
    for q in parts:
        if type(q) is str and out and type(out[-1]) is str:
            out[-1] += q
        else:
            out.append(q)
    if len(out) == 1:
        return out[0]
    return ("c", tuple(out))


class _Compiler:
    __slots__ = ("tycache", "syms")

    def __init__(self):
        self.tycache: dict = {}
        self.syms: set = set()

    def ty(self, ty):
        r = self.tycache.get(ty)
        if r is not None:
            self.syms |= r[1]
            return r[0]
        before = self.syms
        self.syms = set()
        if isinstance(ty, TyVar):
            self.syms.add(("t", ty.name))
            node = ("s", ("t", ty.name))
        else:
            head = ty.op if is_logical(ty.op) else ("s", ("y", ty.op))
            if not is_logical(ty.op):
                self.syms.add(("y", ty.op))
            if not ty.args:
                node = head
            else:
                parts = ["(", head]
                for a in ty.args:
                    parts += [" ", self.ty(a)]
                parts.append(")")
                node = _cat(parts)
        self.tycache[ty] = (node, frozenset(self.syms))
        self.syms = before | self.syms
        return node

    def const(self, name: str):
        if is_logical(name):
            return name
        self.syms.add(("k", name))
        return ("s", ("k", name))

    def term(self, u: Term, bound: list):
        if isinstance(u, Var):
            key = (u.name, u.ty)
            for i in range(len(bound) - 1, -1, -1):
                if bound[i] == key:
                    return "$" + str(len(bound) - 1 - i)
            sym = ("v", u.name, u.ty)
            self.syms.add(sym)
            return _cat([("s", sym), ":", self.ty(u.ty)])
        if isinstance(u, Const):
            if u.name in _BARE:
                return u.name
            return _cat([self.const(u.name), ":", self.ty(u.ty)])
        if isinstance(u, Abs):
            bound.append((u.var, u.vty))
            node = _cat(["(\\", self.ty(u.vty), ". ", self.term(u.body, bound), ")"])
            bound.pop()
            return node
        head, args = strip_comb(u)
        if isinstance(head, Const):
            n = head.name
            if n in _AC and len(args) == 2:
                parts: list = []
                self._flatten(u, n, bound, parts)
                return ("o", "(" + n + " ", tuple(parts), ")")
            if n in _SYM and len(args) == 2:
                tag = _cat(["(=:", self.ty(head.ty), " "]) if n == "=" else "(" + n + " "
                return ("o", tag, (self.term(args[0], bound), self.term(args[1], bound)), ")")
            if n in _BINDERS and len(args) == 1 and isinstance(args[0], Abs):
                ab = args[0]
                bound.append((ab.var, ab.vty))
                node = _cat(["(" + n, self.ty(ab.vty), ". ", self.term(ab.body, bound), ")"])
                bound.pop()
                return node
        parts = ["("]
        for i, x in enumerate([head, *args]):
            if i:
                parts.append(" ")
            parts.append(self.term(x, bound))
        parts.append(")")
        return _cat(parts)

    def _flatten(self, u, op, bound, out):
        head, args = strip_comb(u)
        if isinstance(head, Const) and head.name == op and len(args) == 2:
            self._flatten(args[0], op, bound, out)
            self._flatten(args[1], op, bound, out)
        else:
            out.append(self.term(u, bound))


def _render(node, lab) -> str:
    if type(node) is str:
        return node
    tag = node[0]
    if tag == "s":
        return lab[node[1]]
    if tag == "c":
        return "".join([_render(x, lab) for x in node[1]])
    parts = sorted([_render(x, lab) for x in node[2]])
    return _render(node[1], lab) + " ".join(parts) + node[3]


@dataclass(frozen=True)
class CompiledClauses:
    """Clause templates with the symbols occurring in each clause."""

    clauses: tuple  # of tuples of (sign, template)
    syms: tuple  # per clause, frozenset of symbols


def compile_clauses(clauses: Sequence[Sequence[Literal]]) -> CompiledClauses:
    comp = _Compiler()
    out, syms = [], []
    # Distribution shares atom objects between clauses; compile each once.
    seen: dict = {}
    for c in clauses:
        lits, csyms = [], set()
        for l in c:
            hit = seen.get(id(l.atom))
            if hit is None:
                comp.syms = set()
                hit = seen[id(l.atom)] = (comp.term(l.atom, []), frozenset(comp.syms))
            lits.append(("+" if l.positive else "-", hit[0]))
            csyms |= hit[1]
        out.append(tuple(lits))
        syms.append(frozenset(csyms))
    return CompiledClauses(tuple(out), tuple(syms))


def _render_clause(clause, lab) -> tuple:
    return tuple(sorted([sign + _render(node, lab) for sign, node in clause]))


# ---------------------------------------------------------------- keys


@dataclass(frozen=True, slots=True)
class CanonicalKey:
    """Sorted clauses of sorted literal strings."""

    clauses: tuple

    def text(self) -> str:
        return "\n".join(" | ".join(c) for c in self.clauses)

    def __bytes__(self) -> bytes:
        return self.text().encode("utf-8")

    def __str__(self) -> str:
        return self.text()


# Largest number of candidate symbol orders tried exhaustively.
MAX_CANDIDATES = 720


def _render_all(compiled: CompiledClauses, lab) -> tuple:
    return tuple(sorted(_render_clause(c, lab) for c in compiled.clauses))


def key_of_clauses(clauses, view: ConstView | None = None,
                   max_candidates: int = MAX_CANDIDATES) -> CanonicalKey:
    """Canonical key of a clause set (a list of literal lists or a
    :class:`CompiledClauses`).

    ``view`` maps a non-logical constant or type-constructor name to the
    string printed for it, or to ``None`` to abstract it into a numbered
    symbol like a variable.  Without a view every name prints as itself.
    """
    compiled = clauses if isinstance(clauses, CompiledClauses) else compile_clauses(clauses)
    fixed: dict = {}
    clause_syms = []
    for syms in compiled.syms:
        keep = set()
        for s in syms:
            if s[0] in ("k", "y"):
                if s not in fixed:
                    fixed[s] = s[1] if view is None else view(s[1])
                if fixed[s] is not None:
                    continue
            keep.add(s)
        clause_syms.append(keep)
    base = {s: v for s, v in fixed.items() if v is not None}
    symbols = sorted(set().union(*clause_syms), key=repr) if clause_syms else []
    if not symbols:
        return CanonicalKey(_render_all(compiled, base))
    if len(symbols) == 1:
        s = symbols[0]
        return CanonicalKey(_render_all(compiled, {**base, s: s[0] + "0"}))

    occ: dict = {s: [] for s in symbols}
    for i, syms in enumerate(clause_syms):
        for s in syms:
            occ[s].append(i)
    clauses_c = compiled.clauses

    # Colour refinement: a symbol's colour is the multiset of the clauses it
    # occurs in, printed with itself marked and the others by colour.
    labels = {**base, **{s: _WILD[s[0]] for s in symbols}}
    colors: dict = {}
    n_classes = 0
    for _ in range(len(symbols) + 1):
        new = {}
        for s in symbols:
            prev = labels[s]
            labels[s] = "@" + s[0]
            new[s] = (s[0], tuple(sorted(_render_clause(clauses_c[i], labels) for i in occ[s])),
                      colors.get(s, ""))
            labels[s] = prev
        ranks = {c: i for i, c in enumerate(sorted(set(new.values())))}
        colors = {s: str(ranks[new[s]]) for s in symbols}
        if len(ranks) == n_classes or len(ranks) == len(symbols):
            break
        n_classes = len(ranks)
        for s in symbols:
            labels[s] = s[0] + "#" + colors[s]

    groups: dict = {}
    for s in symbols:
        groups.setdefault(int(colors[s]), []).append(s)
    cells = [groups[c] for c in sorted(groups)]
    total = math.prod(math.factorial(len(c)) for c in cells)
    if total > max_candidates:
        cells = [[s] for s in _fallback_order(compiled, cells, base)]

    best = None
    lab = dict(base)
    for choice in itertools.product(*(itertools.permutations(c) for c in cells)):
        i = 0
        for cell in choice:
            for s in cell:
                lab[s] = s[0] + str(i)
                i += 1
        k = _render_all(compiled, lab)
        if best is None or k < best:
            best = k
    return CanonicalKey(best)


def _fallback_order(compiled, cells, base):
    """Deterministic order when exhaustive search is too large.

    Ties inside a colour class are broken by first occurrence in the key
    rendered with wildcards; this is not guaranteed to be canonical.
    """
    labels = dict(base)
    for ci, cell in enumerate(cells):
        for s in cell:
            labels[s] = s[0] + "#" + str(ci)
    order = []
    for ci, cell in enumerate(cells):
        if len(cell) == 1:
            order.append(cell[0])
            continue
        firsts = {}
        for s in cell:
            prev = labels[s]
            labels[s] = "@"
            text = "\n".join("|".join(c) for c in _render_all(compiled, labels))
            labels[s] = prev
            firsts[s] = (text.find("@"), text)
        order.extend(sorted(cell, key=lambda s: firsts[s]))
    return order


def canonical_key(t: Term, view: ConstView | None = None) -> CanonicalKey:
    return key_of_clauses(to_cnf(t), view)
