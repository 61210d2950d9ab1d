"""Synthetic libraries used by the tests, the acceptance suite and the demos.

``lists_a()`` is a small hand-written library of list and arithmetic facts
with genuine dependencies.  ``random_library()`` generates larger algebraic
libraries whose dependencies correlate with shared constants, and
``renamed_copy()`` produces an isomorphic copy with fresh names and a
shuffled (dependency-respecting) theorem order.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass

from .kernel import (
    BOOL,
    Abs,
    App,
    Const,
    Term,
    TyApp,
    TyVar,
    Var,
    apply_const_map,
    fun,
    fun_n,
    mk_binop,
    mk_eq,
    mk_forall,
    mk_neg,
    names_of,
    parse_formula,
    parse_type,
    type_of,
)
from .kernel.terms import rename_tycons
from .library import ConstDecl, Library, Theorem, build_library

# ---------------------------------------------------------------- lists-A

_TYPES = {
    "N": "@num",
    "A": "'a",
    "B": "'b",
    "C": "'c",
    "L": "(@list 'a)",
    "LB": "(@list 'b)",
    "LN": "(@list @num)",
    "LL": "(@list (@list 'a))",
    "P": "(fun 'a bool)",
    "PN": "(fun @num bool)",
    "PL": "(fun (@list 'a) bool)",
    "FAB": "(fun 'a 'b)",
    "FBC": "(fun 'b 'c)",
    "FAA": "(fun 'a 'a)",
    "FCD": "(fun 'c 'd)",
}

_LISTS_A_CONSTS = [
    # id, kind, theory, type-or-arity
    ("num", "type", "num", "0"),
    ("list", "type", "list", "1"),
    ("I", "term", "combin", "(fun 'a 'a)"),
    ("o", "term", "combin", "(fun (fun 'b 'c) (fun (fun 'a 'b) (fun 'a 'c)))"),
    ("0", "term", "num", "@num"),
    ("SUC", "term", "num", "(fun @num @num)"),
    ("+", "term", "num", "(fun @num (fun @num @num))"),
    ("*", "term", "num", "(fun @num (fun @num @num))"),
    ("PRE", "term", "num", "(fun @num @num)"),
    ("<=", "term", "num", "(fun @num (fun @num bool))"),
    ("NIL", "term", "list", "(@list 'a)"),
    ("CONS", "term", "list", "(fun 'a (fun (@list 'a) (@list 'a)))"),
    ("APPEND", "term", "list", "(fun (@list 'a) (fun (@list 'a) (@list 'a)))"),
    ("LENGTH", "term", "list", "(fun (@list 'a) @num)"),
    ("REVERSE", "term", "list", "(fun (@list 'a) (@list 'a))"),
    ("MAP", "term", "list", "(fun (fun 'a 'b) (fun (@list 'a) (@list 'b)))"),
    ("HD", "term", "list", "(fun (@list 'a) 'a)"),
    ("TL", "term", "list", "(fun (@list 'a) (@list 'a))"),
    ("NULL", "term", "list", "(fun (@list 'a) bool)"),
    ("MEM", "term", "list", "(fun 'a (fun (@list 'a) bool))"),
    ("FILTER", "term", "list", "(fun (fun 'a bool) (fun (@list 'a) (@list 'a)))"),
    ("EVERY", "term", "list", "(fun (fun 'a bool) (fun (@list 'a) bool))"),
    ("EXISTS", "term", "list", "(fun (fun 'a bool) (fun (@list 'a) bool))"),
    ("SUM", "term", "list", "(fun (@list @num) @num)"),
    ("REPLICATE", "term", "list", "(fun @num (fun 'a (@list 'a)))"),
    ("SNOC", "term", "rich_list", "(fun 'a (fun (@list 'a) (@list 'a)))"),
    ("FLAT", "term", "rich_list", "(fun (@list (@list 'a)) (@list 'a))"),
    ("LAST", "term", "rich_list", "(fun (@list 'a) 'a)"),
    ("FRONT", "term", "rich_list", "(fun (@list 'a) (@list 'a))"),
    ("EL", "term", "rich_list", "(fun @num (fun (@list 'a) 'a))"),
]


def _q(binders: str, body: str, q: str = "!") -> str:
    for b in reversed(binders.split()):
        name, ty = b.split(":", 1)
        body = f"({q} (\\{name}:{_TYPES.get(ty, ty)}. {body}))"
    return body


def _ex(binders: str, body: str) -> str:
    return _q(binders, body, "?")


# (theory, name, statement, deps)
_LISTS_A_THMS = [
    ("combin", "FUN_EQ_THM", _q("f:FAB g:FAB", "(<=> (= f g) " + _q("x:A", "(= (f x) (g x))") + ")"), []),
    ("combin", "I_THM", _q("x:A", "(= (@I x) x)"), []),
    ("combin", "o_THM", _q("f:FBC g:FAB x:A", "(= (@o f g x) (f (g x)))"), []),
    ("combin", "o_ASSOC", _q("f:FCD g:FBC h:FAB", "(= (@o f (@o g h)) (@o (@o f g) h))"),
     ["FUN_EQ_THM", "o_THM"]),
    ("combin", "I_o_ID", _q("f:FAB", "(/\\ (= (@o @I f) f) (= (@o f @I) f))"),
     ["FUN_EQ_THM", "I_THM", "o_THM"]),
    # num
    ("num", "num_INDUCTION",
     _q("P:PN", "(==> (/\\ (P @0) " + _q("n:N", "(==> (P n) (P (@SUC n)))") + ") " + _q("n:N", "(P n)") + ")"),
     []),
    ("num", "NOT_SUC", _q("n:N", "(~ (= (@SUC n) @0))"), []),
    ("num", "SUC_INJ", _q("m:N n:N", "(<=> (= (@SUC m) (@SUC n)) (= m n))"), []),
    ("num", "num_CASES", _q("n:N", "(\\/ (= n @0) " + _ex("m:N", "(= n (@SUC m))") + ")"), ["num_INDUCTION"]),
    ("num", "ADD_0", _q("n:N", "(= (@+ @0 n) n)"), []),
    ("num", "ADD_SUC", _q("m:N n:N", "(= (@+ (@SUC m) n) (@SUC (@+ m n)))"), []),
    ("num", "ADD_0_R", _q("n:N", "(= (@+ n @0) n)"), ["num_INDUCTION", "ADD_0", "ADD_SUC"]),
    ("num", "ADD_SUC_R", _q("m:N n:N", "(= (@+ m (@SUC n)) (@SUC (@+ m n)))"),
     ["num_INDUCTION", "ADD_0", "ADD_SUC"]),
    ("num", "ADD_COMM", _q("m:N n:N", "(= (@+ m n) (@+ n m))"),
     ["num_INDUCTION", "ADD_0", "ADD_0_R", "ADD_SUC", "ADD_SUC_R"]),
    ("num", "ADD_ASSOC", _q("m:N n:N p:N", "(= (@+ m (@+ n p)) (@+ (@+ m n) p))"),
     ["num_INDUCTION", "ADD_0", "ADD_SUC"]),
    ("num", "ADD_1", _q("n:N", "(= (@+ n (@SUC @0)) (@SUC n))"), ["ADD_SUC_R", "ADD_0_R"]),
    ("num", "ADD_LEFT_CANCEL", _q("m:N n:N p:N", "(<=> (= (@+ p m) (@+ p n)) (= m n))"),
     ["num_INDUCTION", "ADD_0", "ADD_SUC", "SUC_INJ"]),
    ("num", "ADD_RIGHT_CANCEL", _q("m:N n:N p:N", "(<=> (= (@+ m p) (@+ n p)) (= m n))"),
     ["ADD_COMM", "ADD_LEFT_CANCEL"]),
    ("num", "ADD_EQ_0", _q("m:N n:N", "(<=> (= (@+ m n) @0) (/\\ (= m @0) (= n @0)))"),
     ["num_CASES", "ADD_0", "ADD_SUC", "NOT_SUC"]),
    ("num", "PRE_0", "(= (@PRE @0) @0)", []),
    ("num", "PRE_SUC", _q("n:N", "(= (@PRE (@SUC n)) n)"), []),
    ("num", "SUC_PRE", _q("n:N", "(==> (~ (= n @0)) (= (@SUC (@PRE n)) n))"), ["num_CASES", "PRE_SUC"]),
    ("num", "MULT_0", _q("n:N", "(= (@* @0 n) @0)"), []),
    ("num", "MULT_SUC", _q("m:N n:N", "(= (@* (@SUC m) n) (@+ (@* m n) n))"), []),
    ("num", "MULT_0_R", _q("n:N", "(= (@* n @0) @0)"), ["num_INDUCTION", "MULT_0", "MULT_SUC", "ADD_0_R"]),
    ("num", "MULT_1", _q("n:N", "(= (@* (@SUC @0) n) n)"), ["MULT_SUC", "MULT_0", "ADD_0"]),
    ("num", "MULT_SUC_R", _q("m:N n:N", "(= (@* m (@SUC n)) (@+ (@* m n) m))"),
     ["num_INDUCTION", "MULT_0", "MULT_SUC", "ADD_SUC", "ADD_SUC_R", "ADD_ASSOC", "ADD_COMM"]),
    ("num", "MULT_1_R", _q("n:N", "(= (@* n (@SUC @0)) n)"), ["MULT_SUC_R", "MULT_0_R", "ADD_0"]),
    ("num", "MULT_COMM", _q("m:N n:N", "(= (@* m n) (@* n m))"),
     ["num_INDUCTION", "MULT_0", "MULT_0_R", "MULT_SUC", "MULT_SUC_R"]),
    ("num", "LEFT_ADD_DISTRIB", _q("m:N n:N p:N", "(= (@* p (@+ m n)) (@+ (@* p m) (@* p n)))"),
     ["num_INDUCTION", "MULT_0", "MULT_SUC", "ADD_0", "ADD_ASSOC", "ADD_COMM"]),
    ("num", "RIGHT_ADD_DISTRIB", _q("m:N n:N p:N", "(= (@* (@+ m n) p) (@+ (@* m p) (@* n p)))"),
     ["MULT_COMM", "LEFT_ADD_DISTRIB"]),
    ("num", "LE_DEF", _q("m:N n:N", "(<=> (@<= m n) " + _ex("p:N", "(= n (@+ m p))") + ")"), []),
    ("num", "LE_REFL", _q("n:N", "(@<= n n)"), ["LE_DEF", "ADD_0_R"]),
    ("num", "LE_0", _q("n:N", "(@<= @0 n)"), ["LE_DEF", "ADD_0"]),
    ("num", "LE_ADD", _q("m:N n:N", "(@<= m (@+ m n))"), ["LE_DEF"]),
    ("num", "LE_TRANS", _q("m:N n:N p:N", "(==> (/\\ (@<= m n) (@<= n p)) (@<= m p))"), ["LE_DEF", "ADD_ASSOC"]),
    ("num", "LE_SUC", _q("m:N n:N", "(<=> (@<= (@SUC m) (@SUC n)) (@<= m n))"), ["LE_DEF", "ADD_SUC", "SUC_INJ"]),
    # list
    ("list", "list_INDUCT",
     _q("P:PL", "(==> (/\\ (P @NIL) " + _q("h:A t:L", "(==> (P t) (P (@CONS h t)))") + ") " + _q("l:L", "(P l)") + ")"),
     []),
    ("list", "list_CASES", _q("l:L", "(\\/ (= l @NIL) " + _ex("h:A t:L", "(= l (@CONS h t))") + ")"), ["list_INDUCT"]),
    ("list", "NOT_CONS_NIL", _q("h:A t:L", "(~ (= (@CONS h t) @NIL))"), []),
    ("list", "CONS_11", _q("h:A t:L g:A u:L", "(<=> (= (@CONS h t) (@CONS g u)) (/\\ (= h g) (= t u)))"), []),
    ("list", "HD", _q("h:A t:L", "(= (@HD (@CONS h t)) h)"), []),
    ("list", "TL", _q("h:A t:L", "(= (@TL (@CONS h t)) t)"), []),
    ("list", "APPEND_NIL", _q("l:L", "(= (@APPEND @NIL l) l)"), []),
    ("list", "APPEND_CONS", _q("h:A t:L l:L", "(= (@APPEND (@CONS h t) l) (@CONS h (@APPEND t l)))"), []),
    ("list", "APPEND_NIL_R", _q("l:L", "(= (@APPEND l @NIL) l)"), ["list_INDUCT", "APPEND_NIL", "APPEND_CONS"]),
    ("list", "APPEND_ASSOC", _q("k:L l:L m:L", "(= (@APPEND k (@APPEND l m)) (@APPEND (@APPEND k l) m))"),
     ["list_INDUCT", "APPEND_NIL", "APPEND_CONS"]),
    ("list", "APPEND_SING", _q("h:A l:L", "(= (@APPEND (@CONS h @NIL) l) (@CONS h l))"), ["APPEND_CONS", "APPEND_NIL"]),
    ("list", "CONS_APPEND", _q("h:A l:L", "(= (@CONS h l) (@APPEND (@CONS h @NIL) l))"), ["APPEND_SING"]),
    ("list", "APPEND_EQ_NIL", _q("k:L l:L", "(<=> (= (@APPEND k l) @NIL) (/\\ (= k @NIL) (= l @NIL)))"),
     ["list_CASES", "APPEND_NIL", "APPEND_CONS", "NOT_CONS_NIL"]),
    ("list", "LENGTH_NIL", "(= (@LENGTH @NIL) @0)", []),
    ("list", "LENGTH_CONS", _q("h:A t:L", "(= (@LENGTH (@CONS h t)) (@SUC (@LENGTH t)))"), []),
    ("list", "LENGTH_SING", _q("h:A", "(= (@LENGTH (@CONS h @NIL)) (@SUC @0))"), ["LENGTH_CONS", "LENGTH_NIL"]),
    ("list", "LENGTH_APPEND", _q("k:L l:L", "(= (@LENGTH (@APPEND k l)) (@+ (@LENGTH k) (@LENGTH l)))"),
     ["list_INDUCT", "APPEND_NIL", "APPEND_CONS", "LENGTH_NIL", "LENGTH_CONS", "ADD_0", "ADD_SUC"]),
    ("list", "LENGTH_EQ_NIL", _q("l:L", "(<=> (= (@LENGTH l) @0) (= l @NIL))"),
     ["list_CASES", "LENGTH_NIL", "LENGTH_CONS", "NOT_SUC"]),
    ("list", "MAP_NIL", _q("f:FAB", "(= (@MAP f @NIL) @NIL)"), []),
    ("list", "MAP_CONS", _q("f:FAB h:A t:L", "(= (@MAP f (@CONS h t)) (@CONS (f h) (@MAP f t)))"), []),
    ("list", "MAP_SING", _q("f:FAB h:A", "(= (@MAP f (@CONS h @NIL)) (@CONS (f h) @NIL))"), ["MAP_CONS", "MAP_NIL"]),
    ("list", "MAP_APPEND", _q("f:FAB k:L l:L", "(= (@MAP f (@APPEND k l)) (@APPEND (@MAP f k) (@MAP f l)))"),
     ["list_INDUCT", "MAP_NIL", "MAP_CONS", "APPEND_NIL", "APPEND_CONS"]),
    ("list", "LENGTH_MAP", _q("f:FAB l:L", "(= (@LENGTH (@MAP f l)) (@LENGTH l))"),
     ["list_INDUCT", "MAP_NIL", "MAP_CONS", "LENGTH_NIL", "LENGTH_CONS"]),
    ("list", "MAP_I", _q("l:L", "(= (@MAP @I l) l)"), ["list_INDUCT", "MAP_NIL", "MAP_CONS", "I_THM"]),
    ("list", "MAP_ID", _q("l:L", "(= (@MAP (\\x:'a. x) l) l)"), ["MAP_I", "I_THM", "FUN_EQ_THM"]),
    ("list", "MAP_o", _q("f:FBC g:FAB l:L", "(= (@MAP (@o f g) l) (@MAP f (@MAP g l)))"),
     ["list_INDUCT", "MAP_NIL", "MAP_CONS", "o_THM"]),
    ("list", "REVERSE_NIL", "(= (@REVERSE @NIL) @NIL)", []),
    ("list", "REVERSE_CONS", _q("h:A t:L", "(= (@REVERSE (@CONS h t)) (@APPEND (@REVERSE t) (@CONS h @NIL)))"), []),
    ("list", "REVERSE_SING", _q("h:A", "(= (@REVERSE (@CONS h @NIL)) (@CONS h @NIL))"),
     ["REVERSE_CONS", "REVERSE_NIL", "APPEND_NIL"]),
    ("list", "REVERSE_APPEND", _q("k:L l:L", "(= (@REVERSE (@APPEND k l)) (@APPEND (@REVERSE l) (@REVERSE k)))"),
     ["list_INDUCT", "APPEND_NIL", "APPEND_CONS", "REVERSE_NIL", "REVERSE_CONS", "APPEND_NIL_R", "APPEND_ASSOC"]),
    ("list", "REVERSE_REVERSE", _q("l:L", "(= (@REVERSE (@REVERSE l)) l)"),
     ["list_INDUCT", "REVERSE_NIL", "REVERSE_CONS", "REVERSE_APPEND", "APPEND_NIL", "APPEND_CONS"]),
    ("list", "REVERSE_EQ_NIL", _q("l:L", "(<=> (= (@REVERSE l) @NIL) (= l @NIL))"),
     ["REVERSE_REVERSE", "REVERSE_NIL"]),
    ("list", "LENGTH_REVERSE", _q("l:L", "(= (@LENGTH (@REVERSE l)) (@LENGTH l))"),
     ["list_INDUCT", "REVERSE_NIL", "REVERSE_CONS", "LENGTH_NIL", "LENGTH_CONS", "LENGTH_APPEND", "ADD_1"]),
    ("list", "NULL_NIL", "(@NULL @NIL)", []),
    ("list", "NULL_CONS", _q("h:A t:L", "(~ (@NULL (@CONS h t)))"), []),
    ("list", "NULL_EQ", _q("l:L", "(<=> (@NULL l) (= l @NIL))"), ["list_CASES", "NULL_NIL", "NULL_CONS", "NOT_CONS_NIL"]),
    ("list", "NULL_APPEND", _q("k:L l:L", "(<=> (@NULL (@APPEND k l)) (/\\ (@NULL k) (@NULL l)))"),
     ["NULL_EQ", "APPEND_EQ_NIL"]),
    ("list", "MEM_NIL", _q("x:A", "(~ (@MEM x @NIL))"), []),
    ("list", "MEM_CONS", _q("x:A h:A t:L", "(<=> (@MEM x (@CONS h t)) (\\/ (= x h) (@MEM x t)))"), []),
    ("list", "MEM_SING", _q("x:A y:A", "(<=> (@MEM x (@CONS y @NIL)) (= x y))"), ["MEM_CONS", "MEM_NIL"]),
    ("list", "MEM_APPEND", _q("x:A k:L l:L", "(<=> (@MEM x (@APPEND k l)) (\\/ (@MEM x k) (@MEM x l)))"),
     ["list_INDUCT", "MEM_NIL", "MEM_CONS", "APPEND_NIL", "APPEND_CONS"]),
    ("list", "MEM_MAP",
     _q("f:FAB y:B l:L", "(<=> (@MEM y (@MAP f l)) " + _ex("x:A", "(/\\ (= y (f x)) (@MEM x l))") + ")"),
     ["list_INDUCT", "MEM_NIL", "MEM_CONS", "MAP_NIL", "MAP_CONS"]),
    ("list", "MEM_REVERSE", _q("x:A l:L", "(<=> (@MEM x (@REVERSE l)) (@MEM x l))"),
     ["list_INDUCT", "MEM_NIL", "MEM_CONS", "MEM_APPEND", "REVERSE_NIL", "REVERSE_CONS"]),
    ("list", "FILTER_NIL", _q("P:P", "(= (@FILTER P @NIL) @NIL)"), []),
    ("list", "FILTER_CONS_T", _q("P:P h:A t:L", "(==> (P h) (= (@FILTER P (@CONS h t)) (@CONS h (@FILTER P t))))"), []),
    ("list", "FILTER_CONS_F", _q("P:P h:A t:L", "(==> (~ (P h)) (= (@FILTER P (@CONS h t)) (@FILTER P t)))"), []),
    ("list", "FILTER_APPEND", _q("P:P k:L l:L", "(= (@FILTER P (@APPEND k l)) (@APPEND (@FILTER P k) (@FILTER P l)))"),
     ["list_INDUCT", "FILTER_NIL", "FILTER_CONS_T", "FILTER_CONS_F", "APPEND_NIL", "APPEND_CONS"]),
    ("list", "MEM_FILTER", _q("P:P x:A l:L", "(<=> (@MEM x (@FILTER P l)) (/\\ (P x) (@MEM x l)))"),
     ["list_INDUCT", "FILTER_NIL", "FILTER_CONS_T", "FILTER_CONS_F", "MEM_NIL", "MEM_CONS"]),
    ("list", "EVERY_NIL", _q("P:P", "(@EVERY P @NIL)"), []),
    ("list", "EVERY_CONS", _q("P:P h:A t:L", "(<=> (@EVERY P (@CONS h t)) (/\\ (P h) (@EVERY P t)))"), []),
    ("list", "EVERY_SING", _q("P:P h:A", "(<=> (@EVERY P (@CONS h @NIL)) (P h))"), ["EVERY_CONS", "EVERY_NIL"]),
    ("list", "EVERY_APPEND", _q("P:P k:L l:L", "(<=> (@EVERY P (@APPEND k l)) (/\\ (@EVERY P k) (@EVERY P l)))"),
     ["list_INDUCT", "EVERY_NIL", "EVERY_CONS", "APPEND_NIL", "APPEND_CONS"]),
    ("list", "EVERY_MEM", _q("P:P l:L", "(<=> (@EVERY P l) " + _q("x:A", "(==> (@MEM x l) (P x))") + ")"),
     ["list_INDUCT", "EVERY_NIL", "EVERY_CONS", "MEM_NIL", "MEM_CONS"]),
    ("list", "EVERY_REVERSE", _q("P:P l:L", "(<=> (@EVERY P (@REVERSE l)) (@EVERY P l))"),
     ["EVERY_MEM", "MEM_REVERSE"]),
    ("list", "EXISTS_NIL", _q("P:P", "(~ (@EXISTS P @NIL))"), []),
    ("list", "EXISTS_CONS", _q("P:P h:A t:L", "(<=> (@EXISTS P (@CONS h t)) (\\/ (P h) (@EXISTS P t)))"), []),
    ("list", "EXISTS_SING", _q("P:P h:A", "(<=> (@EXISTS P (@CONS h @NIL)) (P h))"), ["EXISTS_CONS", "EXISTS_NIL"]),
    ("list", "NOT_EVERY", _q("P:P l:L", "(<=> (~ (@EVERY P l)) (@EXISTS (\\x:'a. (~ (P x))) l))"),
     ["list_INDUCT", "EVERY_NIL", "EVERY_CONS", "EXISTS_NIL", "EXISTS_CONS"]),
    ("list", "SUM_NIL", "(= (@SUM @NIL) @0)", []),
    ("list", "SUM_CONS", _q("h:N t:LN", "(= (@SUM (@CONS h t)) (@+ h (@SUM t)))"), []),
    ("list", "SUM_SING", _q("n:N", "(= (@SUM (@CONS n @NIL)) n)"), ["SUM_CONS", "SUM_NIL", "ADD_0_R"]),
    ("list", "SUM_APPEND", _q("k:LN l:LN", "(= (@SUM (@APPEND k l)) (@+ (@SUM k) (@SUM l)))"),
     ["list_INDUCT", "SUM_NIL", "SUM_CONS", "APPEND_NIL", "APPEND_CONS", "ADD_0", "ADD_ASSOC"]),
    ("list", "SUM_REVERSE", _q("l:LN", "(= (@SUM (@REVERSE l)) (@SUM l))"),
     ["list_INDUCT", "SUM_NIL", "SUM_CONS", "REVERSE_NIL", "REVERSE_CONS", "SUM_APPEND", "SUM_SING", "ADD_COMM"]),
    ("list", "REPLICATE_0", _q("x:A", "(= (@REPLICATE @0 x) @NIL)"), []),
    ("list", "REPLICATE_SUC", _q("n:N x:A", "(= (@REPLICATE (@SUC n) x) (@CONS x (@REPLICATE n x)))"), []),
    ("list", "LENGTH_REPLICATE", _q("n:N x:A", "(= (@LENGTH (@REPLICATE n x)) n)"),
     ["num_INDUCTION", "REPLICATE_0", "REPLICATE_SUC", "LENGTH_NIL", "LENGTH_CONS"]),
    # rich_list
    ("rich_list", "SNOC_NIL", _q("x:A", "(= (@SNOC x @NIL) (@CONS x @NIL))"), []),
    ("rich_list", "SNOC_CONS", _q("x:A h:A t:L", "(= (@SNOC x (@CONS h t)) (@CONS h (@SNOC x t)))"), []),
    ("rich_list", "SNOC_APPEND", _q("x:A l:L", "(= (@SNOC x l) (@APPEND l (@CONS x @NIL)))"),
     ["list_INDUCT", "SNOC_NIL", "SNOC_CONS", "APPEND_NIL", "APPEND_CONS"]),
    ("rich_list", "LENGTH_SNOC", _q("x:A l:L", "(= (@LENGTH (@SNOC x l)) (@SUC (@LENGTH l)))"),
     ["SNOC_APPEND", "LENGTH_APPEND", "LENGTH_SING", "ADD_1"]),
    ("rich_list", "REVERSE_SNOC", _q("x:A l:L", "(= (@REVERSE (@SNOC x l)) (@CONS x (@REVERSE l)))"),
     ["SNOC_APPEND", "REVERSE_APPEND", "REVERSE_SING", "APPEND_SING"]),
    ("rich_list", "LAST_SING", _q("x:A", "(= (@LAST (@CONS x @NIL)) x)"), []),
    ("rich_list", "LAST_CONS", _q("h:A g:A t:L", "(= (@LAST (@CONS h (@CONS g t))) (@LAST (@CONS g t)))"), []),
    ("rich_list", "LAST_SNOC", _q("x:A l:L", "(= (@LAST (@SNOC x l)) x)"),
     ["list_INDUCT", "SNOC_NIL", "SNOC_CONS", "LAST_SING", "LAST_CONS", "list_CASES"]),
    ("rich_list", "FRONT_SING", _q("x:A", "(= (@FRONT (@CONS x @NIL)) @NIL)"), []),
    ("rich_list", "FRONT_CONS", _q("h:A g:A t:L", "(= (@FRONT (@CONS h (@CONS g t))) (@CONS h (@FRONT (@CONS g t))))"), []),
    ("rich_list", "FRONT_SNOC", _q("x:A l:L", "(= (@FRONT (@SNOC x l)) l)"),
     ["list_INDUCT", "SNOC_NIL", "SNOC_CONS", "FRONT_SING", "FRONT_CONS", "list_CASES"]),
    ("rich_list", "LENGTH_FRONT", _q("l:L", "(==> (~ (= l @NIL)) (= (@LENGTH (@FRONT l)) (@PRE (@LENGTH l))))"),
     ["list_INDUCT", "list_CASES", "FRONT_SING", "FRONT_CONS", "LENGTH_NIL", "LENGTH_CONS", "PRE_SUC"]),
    ("rich_list", "FLAT_NIL", "(= (@FLAT @NIL) @NIL)", []),
    ("rich_list", "FLAT_CONS", _q("h:L t:LL", "(= (@FLAT (@CONS h t)) (@APPEND h (@FLAT t)))"), []),
    ("rich_list", "FLAT_SING", _q("l:L", "(= (@FLAT (@CONS l @NIL)) l)"), ["FLAT_CONS", "FLAT_NIL", "APPEND_NIL_R"]),
    ("rich_list", "EL_0", _q("h:A t:L", "(= (@EL @0 (@CONS h t)) h)"), []),
    ("rich_list", "EL_SUC", _q("n:N h:A t:L", "(= (@EL (@SUC n) (@CONS h t)) (@EL n t))"), []),
]

LISTS_A_TAG = "lists-A"


def _expand(text: str, tag: str) -> str:
    return re.sub(r"@([^\s()]+)", lambda m: f"{tag}/{m.group(1)}", text)


def lists_a_path():
    """Path of the bundled ``lists-A`` library file."""
    from importlib.resources import files

    return files("crosshammer").joinpath("data", "lists-A.lib")


def lists_a(tag: str = LISTS_A_TAG) -> Library:
    """The bundled 30-constant, 120-theorem list/arithmetic library."""
    from .kernel import Signature

    sig = Signature()
    decls = []
    for name, kind, theory, rest in _LISTS_A_CONSTS:
        cid = f"{tag}/{name}"
        if kind == "type":
            sig.tycons[cid] = int(rest)
            decls.append(ConstDecl(cid, "type", theory, arity=int(rest)))
    for name, kind, theory, rest in _LISTS_A_CONSTS:
        if kind == "term":
            cid = f"{tag}/{name}"
            ty = parse_type(_expand(rest, tag), sig)
            sig.consts[cid] = ty
            decls.append(ConstDecl(cid, "term", theory, ty=ty))
    thms = []
    for seq, (theory, name, stmt, deps) in enumerate(_LISTS_A_THMS):
        term = parse_formula(_expand(stmt, tag), sig)
        thms.append(Theorem(f"{tag}/{name}", term, theory, seq, frozenset(f"{tag}/{d}" for d in deps)))
    return build_library(tag, decls, thms)


# ---------------------------------------------------------------- renaming


@dataclass
class RenamedCopy:
    library: Library
    const_map: dict  # original constant id -> copy id
    thm_map: dict  # original theorem id -> copy id


def _rename_bound(t: Term, rng: random.Random) -> Term:
    if isinstance(t, (Const, Var)):
        return t
    if isinstance(t, App):
        return App(_rename_bound(t.fn, rng), _rename_bound(t.arg, rng))
    from .kernel import subst

    new = f"{t.var}{rng.randrange(1000)}"
    while new == t.var:
        new = f"{t.var}{rng.randrange(1000)}"
    body = subst(t.body, {Var(t.var, t.vty): Var(new, t.vty)})
    return Abs(new, t.vty, _rename_bound(body, rng))


def _flip_eqs(t: Term, rng: random.Random) -> Term:
    if isinstance(t, (Const, Var)):
        return t
    if isinstance(t, Abs):
        return Abs(t.var, t.vty, _flip_eqs(t.body, rng))
    fn, arg = _flip_eqs(t.fn, rng), _flip_eqs(t.arg, rng)
    if isinstance(fn, App) and isinstance(fn.fn, Const) and fn.fn.name in ("=", "/\\", "\\/") and rng.random() < 0.5:
        return App(App(fn.fn, arg), fn.arg)
    return App(fn, arg)


def renamed_copy(lib: Library, tag: str, seed: int = 0, shuffle: bool = True,
                 rename_bound: bool = True, flip: bool = False, keep_names: bool = False) -> RenamedCopy:
    """An isomorphic copy of ``lib`` under a fresh tag.

    Constants and theorems get random fresh names (or keep their local names
    with ``keep_names``), theorems are re-ordered along a random topological
    order of the dependency graph, bound variables are renamed and, with
    ``flip``, equalities and connectives have their arguments swapped at
    random.
    """
    rng = random.Random(seed)
    local = [c.id.split("/", 1)[1] for c in lib.consts]
    if keep_names:
        fresh = local
    else:
        fresh = [f"k{i:04d}" for i in range(len(local))]
        rng.shuffle(fresh)
    cmap = {c.id: f"{tag}/{n}" for c, n in zip(lib.consts, fresh)}

    order = list(lib.thms)
    if shuffle:
        remaining = {t.id: set(t.deps) for t in lib.thms}
        users: dict = {t.id: [] for t in lib.thms}
        for t in lib.thms:
            for d in t.deps:
                users[d].append(t.id)
        ready = sorted(i for i, ds in remaining.items() if not ds)
        order = []
        while ready:
            i = ready.pop(rng.randrange(len(ready)))
            order.append(lib.thm(i))
            for u in users[i]:
                remaining[u].discard(i)
                if not remaining[u]:
                    ready.append(u)
    if keep_names:
        tmap = {t.id: f"{tag}/{t.id.split('/', 1)[1]}" for t in lib.thms}
    else:
        names = [f"t{i:05d}" for i in range(len(order))]
        rng.shuffle(names)
        tmap = {t.id: f"{tag}/{n}" for t, n in zip(order, names)}

    consts = []
    for c in lib.consts:
        ty = None if c.is_type else rename_tycons(c.ty, cmap)
        consts.append(ConstDecl(cmap[c.id], c.kind, c.theory, ty=ty, arity=c.arity))
    thms = []
    for seq, t in enumerate(order):
        stmt = apply_const_map(t.statement, cmap)
        if rename_bound:
            stmt = _rename_bound(stmt, rng)
        if flip:
            stmt = _flip_eqs(stmt, rng)
        thms.append(Theorem(tmap[t.id], stmt, t.theory, seq, frozenset(tmap[d] for d in t.deps)))
    return RenamedCopy(build_library(tag, consts, thms), cmap, tmap)


def drop_theorems(lib: Library, fraction: float, seed: int = 0) -> Library:
    rng = random.Random(seed)
    keep = [t.id for t in lib.thms if rng.random() >= fraction]
    return lib.subset(keep)


# ---------------------------------------------------------------- random libraries


def random_library(seed: int, n_consts: int = 40, n_thms: int = 200, tag: str = "rnd",
                   n_theories: int | None = None) -> Library:
    """A random typed algebraic library.

    About a tenth of the constants are type constructors.  Theorems are laws
    (commutativity, associativity, units, distributivity, homomorphisms,
    predicate closure) and random equations over a theory's constants.
    Dependencies prefer earlier theorems sharing constants with the statement.
    """
    rng = random.Random(seed)
    n_types = max(2, n_consts // 10)
    n_terms = n_consts - n_types
    n_theories = n_theories or max(2, n_consts // 12)
    theories = [f"th{i}" for i in range(n_theories)]

    tycons = [f"{tag}/ty{i}" for i in range(n_types)]
    base = [TyApp(c) for c in tycons]

    consts: dict[str, object] = {}
    decls = [ConstDecl(c, "type", theories[min(i * n_theories // n_types, n_theories - 1)], arity=0)
             for i, c in enumerate(tycons)]
    theory_of: dict[str, str] = {}
    shapes = ["const", "unary", "binary", "binary", "binary", "pred", "rel", "unary2"]
    for i in range(n_terms):
        th = theories[min(i * n_theories // n_terms, n_theories - 1)]
        home = base[min(i * n_types // n_terms, n_types - 1)]
        other = rng.choice(base)
        shape = shapes[i % len(shapes)] if i < len(shapes) else rng.choice(shapes)
        ty = {
            "const": home,
            "unary": fun(home, home),
            "unary2": fun(other, home),
            "binary": fun_n(home, home, home),
            "pred": fun(home, BOOL),
            "rel": fun_n(home, home, BOOL),
        }[shape]
        cid = f"{tag}/c{i:03d}"
        consts[cid] = ty
        theory_of[cid] = th
        decls.append(ConstDecl(cid, "term", th, ty=ty))

    by_range: dict = {}
    for cid, ty in consts.items():
        rng_ty = ty
        nargs = 0
        while isinstance(rng_ty, TyApp) and rng_ty.op == "fun":
            rng_ty = rng_ty.args[1]
            nargs += 1
        by_range.setdefault(rng_ty, []).append(cid)

    def c(cid):
        return Const(cid, consts[cid])

    def args_of(cid):
        ty, out = consts[cid], []
        while isinstance(ty, TyApp) and ty.op == "fun":
            out.append(ty.args[0])
            ty = ty.args[1]
        return out

    def gen(ty, depth, vars_, pool):
        choices = [v for v in vars_ if v.ty == ty]
        cands = [k for k in by_range.get(ty, []) if k in pool] or by_range.get(ty, [])
        if depth <= 0 or not cands or (choices and rng.random() < 0.35):
            leaf = [k for k in cands if not args_of(k)]
            if choices and (not leaf or rng.random() < 0.7):
                return rng.choice(choices)
            if leaf:
                return c(rng.choice(leaf))
            if choices:
                return rng.choice(choices)
            if depth <= 0 or not cands:
                v = Var(f"v{len(vars_)}", ty)
                vars_.append(v)
                return v
        k = rng.choice(cands)
        t = c(k)
        for a in args_of(k):
            t = App(t, gen(a, depth - 1, vars_, pool))
        return t

    def close(body, vars_):
        used = {v for v in vars_ if _occurs(v, body)}
        for v in reversed(vars_):
            if v in used:
                body = mk_forall(v, body)
        return body

    binaries = [k for k, ty in consts.items() if len(args_of(k)) == 2 and type_of(Const(k, ty)) is not None
                and _range(ty) != BOOL]
    preds = [k for k in consts if _range(consts[k]) == BOOL and len(args_of(k)) == 1]
    units = [k for k in consts if not args_of(k)]

    def law(th_consts):
        kinds = ["comm", "assoc", "unit", "distrib", "hom", "closure", "eq", "eq", "eq", "impl"]
        kind = rng.choice(kinds)
        bins = [k for k in binaries if k in th_consts] or binaries
        f = rng.choice(bins)
        T = args_of(f)[0]
        x, y, z = (Var(n, T) for n in "xyz")
        if kind == "comm":
            return close(mk_eq(App(App(c(f), x), y), App(App(c(f), y), x)), [x, y])
        if kind == "assoc":
            lhs = App(App(c(f), x), App(App(c(f), y), z))
            rhs = App(App(c(f), App(App(c(f), x), y)), z)
            return close(mk_eq(lhs, rhs), [x, y, z])
        if kind == "unit":
            us = [u for u in units if consts[u] == T] or None
            if us:
                e = c(rng.choice(us))
                return close(mk_eq(App(App(c(f), e), x), x), [x])
        if kind == "distrib":
            gs = [g for g in bins if g != f and args_of(g)[0] == T]
            if gs:
                g = c(rng.choice(gs))
                lhs = App(App(c(f), x), App(App(g, y), z))
                rhs = App(App(g, App(App(c(f), x), y)), App(App(c(f), x), z))
                return close(mk_eq(lhs, rhs), [x, y, z])
        if kind == "hom":
            hs = [h for h in consts if args_of(h) == [T] and _range(consts[h]) == T and h in th_consts] or \
                 [h for h in consts if args_of(h) == [T] and _range(consts[h]) == T]
            if hs:
                h = c(rng.choice(hs))
                lhs = App(h, App(App(c(f), x), y))
                rhs = App(App(c(f), App(h, x)), App(h, y))
                return close(mk_eq(lhs, rhs), [x, y])
        if kind == "closure":
            ps = [p for p in preds if args_of(p)[0] == T]
            if ps:
                p = c(rng.choice(ps))
                body = mk_binop("==>", mk_binop("/\\", App(p, x), App(p, y)), App(p, App(App(c(f), x), y)))
                return close(body, [x, y])
        if kind == "impl":
            ps = [p for p in preds if p in th_consts] or preds
            if ps:
                p = rng.choice(ps)
                T = args_of(p)[0]
                x = Var("x", T)
                vs = [x]
                rhs = gen(BOOL, 2, vs, th_consts)
                return close(mk_binop("==>", App(c(p), x), rhs), vs)
        # random equation
        T = rng.choice([ty for ty in by_range if ty != BOOL and not (isinstance(ty, TyApp) and ty.op == "fun")])
        vs = [Var(n, T) for n in "xyz"]
        lhs = gen(T, 3, vs, th_consts)
        rhs = gen(T, 2, vs, th_consts)
        body = mk_eq(lhs, rhs)
        if rng.random() < 0.2:
            body = mk_neg(body)
        return close(body, vs)

    theory_consts = {th: {k for k in consts if theory_of[k] == th} for th in theories}
    thms: list[Theorem] = []
    stmts_seen: set = set()
    names_by_thm: list[set] = []
    per_theory = [n_thms // n_theories + (1 if i < n_thms % n_theories else 0) for i in range(n_theories)]
    seq = 0
    for ti, th in enumerate(theories):
        pool = set(theory_consts[th])
        if ti:
            pool |= set(rng.sample(sorted(k for t2 in theories[:ti] for k in theory_consts[t2]),
                                   k=min(4, sum(len(theory_consts[t2]) for t2 in theories[:ti]))))
        tries = 0
        made = 0
        while made < per_theory[ti]:
            tries += 1
            stmt = law(pool)
            key = repr(stmt)
            if key in stmts_seen and tries < 50 * n_thms:
                continue
            stmts_seen.add(key)
            names = names_of(stmt)
            # dependencies: earlier theorems sharing constants
            scored = []
            for j, other in enumerate(names_by_thm):
                ov = len(names & other)
                if ov:
                    scored.append((ov + rng.random(), j))
            scored.sort(reverse=True)
            n_deps = rng.choice([0, 1, 2, 2, 3, 3, 4]) if seq else 0
            deps = {thms[j].id for _, j in scored[: n_deps * 2] if rng.random() < 0.7}
            deps = set(sorted(deps)[:n_deps])
            if scored and not deps and n_deps:
                deps = {thms[scored[0][1]].id}
            thms.append(Theorem(f"{tag}/t{seq:05d}", stmt, th, seq, frozenset(deps)))
            names_by_thm.append(names)
            seq += 1
            made += 1
    return build_library(tag, decls, thms)


def _range(ty):
    while isinstance(ty, TyApp) and ty.op == "fun":
        ty = ty.args[1]
    return ty


def _occurs(v: Var, t: Term) -> bool:
    if isinstance(t, Var):
        return t == v
    if isinstance(t, App):
        return _occurs(v, t.fn) or _occurs(v, t.arg)
    if isinstance(t, Abs):
        return _occurs(v, t.body)
    return False
