"""Library exports: constants, theorems, theories and dependencies.

File format (UTF-8, one record per line, ``#`` starts a comment)::

    C <id> <term|type> <theory> <type-or-arity>
    T <id> <theory> <seq> <statement>
    D <id> <dep-id>+
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .kernel import (
    BOOL,
    KernelError,
    Signature,
    Term,
    Ty,
    canonical_key,
    parse_formula,
    parse_type,
    print_term,
    type_of,
)

log = logging.getLogger(__name__)

COMMON_PREFIX = "common"


class LibraryError(Exception):
    pass


class LibraryParseError(LibraryError):
    def __init__(self, msg: str, line: int):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class LibraryValidationError(LibraryError):
    def __init__(self, msg: str, item: str):
        super().__init__(f"{item}: {msg}")
        self.item = item


@dataclass(frozen=True)
class ConstDecl:
    id: str
    kind: str  # "term" or "type"
    theory: str
    ty: Ty | None = None
    arity: int | None = None

    @property
    def is_type(self) -> bool:
        return self.kind == "type"


@dataclass(frozen=True)
class Theorem:
    id: str
    statement: Term
    theory: str
    seq: int
    deps: frozenset = frozenset()


def tag_of(ident: str) -> str:
    return ident.split("/", 1)[0] if "/" in ident else ""


@dataclass(frozen=True)
class Library:
    tag: str
    consts: tuple = ()
    thms: tuple = ()
    theories: tuple = ()
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self._index["thm"] = {t.id: t for t in self.thms}
        self._index["const"] = {c.id: c for c in self.consts}

    # -- lookups
    def thm(self, thm_id: str) -> Theorem:
        try:
            return self._index["thm"][thm_id]
        except KeyError:
            raise KeyError(f"unknown theorem {thm_id}") from None

    def const(self, cid: str) -> ConstDecl:
        return self._index["const"][cid]

    def has_thm(self, thm_id: str) -> bool:
        return thm_id in self._index["thm"]

    def has_const(self, cid: str) -> bool:
        return cid in self._index["const"]

    def __len__(self) -> int:
        return len(self.thms)

    @property
    def signature(self) -> Signature:
        sig = self._index.get("sig")
        if sig is None:
            sig = Signature(
                {c.id: c.ty for c in self.consts if not c.is_type},
                {c.id: c.arity for c in self.consts if c.is_type},
            )
            self._index["sig"] = sig
        return sig

    def theory_thms(self, theory: str) -> list[Theorem]:
        if theory not in self.theories:
            raise KeyError(f"unknown theory {theory}")
        return [t for t in self.thms if t.theory == theory]

    def theory_consts(self, theory: str) -> list[ConstDecl]:
        if theory not in self.theories:
            raise KeyError(f"unknown theory {theory}")
        return [c for c in self.consts if c.theory == theory]

    # -- derived libraries
    def prefix(self, n: int) -> "Library":
        """The library as it was before theorem number ``n``."""
        return Library(self.tag, self.consts, self.thms[:n], self.theories)

    def subset(self, keep: Iterable[str]) -> "Library":
        """Keep the given theorems, renumbering seq densely and dropping
        dependencies on removed theorems."""
        keep = set(keep)
        kept = [t for t in self.thms if t.id in keep]
        ids = {t.id for t in kept}
        thms = tuple(
            Theorem(t.id, t.statement, t.theory, i, frozenset(d for d in t.deps if d in ids))
            for i, t in enumerate(kept)
        )
        return Library(self.tag, self.consts, thms, self.theories)


# ---------------------------------------------------------------- queries


def accessible(lib: Library, thm_id: str) -> list[str]:
    """Theorems proved strictly before ``thm_id``, in order."""
    return [t.id for t in lib.thms[: lib.thm(thm_id).seq]]


def dep(lib: Library, thm_id: str) -> frozenset:
    """Direct dependencies of ``thm_id``."""
    return lib.thm(thm_id).deps


def common_class_count(lib_a: Library, lib_b: Library, theory_a: str, theory_b: str) -> int:
    """Number of equivalence classes shared by two theories.

    Both libraries must already use common names for matched constants.
    """
    ka = {canonical_key(t.statement) for t in lib_a.theory_thms(theory_a)}
    kb = {canonical_key(t.statement) for t in lib_b.theory_thms(theory_b)}
    return len(ka & kb)


# ---------------------------------------------------------------- validation


def _theory_order(consts, thms) -> tuple:
    seen: dict = {}
    for t in thms:
        seen.setdefault(t.theory, None)
    for c in consts:
        seen.setdefault(c.theory, None)
    return tuple(seen)


def _is_formula(t: Term) -> bool:
    try:
        return type_of(t) == BOOL
    except KernelError:
        return False


def build_library(tag: str, consts: Iterable[ConstDecl], thms: Iterable[Theorem],
                  check_prefix: bool = True) -> Library:
    """Assemble and validate a library."""
    consts = tuple(consts)
    thms = tuple(sorted(thms, key=lambda t: t.seq))
    seen: set = set()
    for c in consts:
        if c.id in seen:
            raise LibraryValidationError("duplicate constant id", c.id)
        seen.add(c.id)
        if check_prefix and tag_of(c.id) not in (tag, COMMON_PREFIX):
            raise LibraryValidationError(f"constant prefix does not match tag {tag}", c.id)
    seen = set()
    for t in thms:
        if t.id in seen:
            raise LibraryValidationError("duplicate theorem id", t.id)
        seen.add(t.id)
        if check_prefix and tag_of(t.id) != tag:
            raise LibraryValidationError(f"theorem prefix does not match tag {tag}", t.id)
    for i, t in enumerate(thms):
        if t.seq != i:
            raise LibraryValidationError(f"seq {t.seq} breaks the dense order (expected {i})", t.id)
    by_id = {t.id: t for t in thms}
    for t in thms:
        if t.statement is not None and not _is_formula(t.statement):
            raise LibraryValidationError("statement is not boolean", t.id)
        for d in t.deps:
            if d not in by_id:
                raise LibraryValidationError(f"unknown dependency {d}", t.id)
            if by_id[d].seq >= t.seq:
                raise LibraryValidationError(
                    f"depends on {d} (seq {by_id[d].seq}) which is not earlier than seq {t.seq}", t.id)
    return Library(tag, consts, thms, _theory_order(consts, thms))


# ---------------------------------------------------------------- I/O


def _parse_kind(tok: str, line: int) -> str:
    if tok in ("term", "term-constant", "const"):
        return "term"
    if tok in ("type", "type-constructor", "tycon"):
        return "type"
    raise LibraryParseError(f"unknown constant kind {tok!r}", line)


def parse_library(text: str, tag: str | None = None, source: str = "<string>") -> Library:
    crec, trec, drec = [], [], []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        kind = line[0]
        if kind == "C":
            parts = line.split(None, 4)
            if len(parts) != 5:
                raise LibraryParseError("constant record needs 4 fields", no)
            crec.append((no, parts[1], _parse_kind(parts[2], no), parts[3], parts[4]))
        elif kind == "T":
            parts = line.split(None, 4)
            if len(parts) != 5:
                raise LibraryParseError("theorem record needs 4 fields", no)
            try:
                seq = int(parts[3])
            except ValueError:
                raise LibraryParseError(f"bad seq {parts[3]!r}", no) from None
            trec.append((no, parts[1], parts[2], seq, parts[4]))
        elif kind == "D":
            parts = line.split()
            if len(parts) < 3:
                raise LibraryParseError("dependency record needs an id and at least one dep", no)
            drec.append((no, parts[1], parts[2:]))
        else:
            raise LibraryParseError(f"unknown record type {kind!r}", no)

    if tag is None:
        ids = [r[1] for r in crec if tag_of(r[1]) != COMMON_PREFIX] + [r[1] for r in trec]
        tag = tag_of(ids[0]) if ids else Path(source).stem

    sig = Signature()
    decls = []
    for no, cid, kind, theory, rest in crec:
        if kind == "type":
            try:
                arity = int(rest)
            except ValueError:
                raise LibraryParseError(f"bad arity {rest!r}", no) from None
            if cid in sig.tycons:
                raise LibraryValidationError("duplicate constant id", cid)
            sig.tycons[cid] = arity
    for no, cid, kind, theory, rest in crec:
        if kind == "type":
            decls.append(ConstDecl(cid, "type", theory, arity=sig.tycons[cid]))
            continue
        try:
            ty = parse_type(rest, sig)
        except KernelError as e:
            raise LibraryParseError(str(e), no) from None
        if cid in sig.consts:
            raise LibraryValidationError("duplicate constant id", cid)
        sig.consts[cid] = ty
        decls.append(ConstDecl(cid, "term", theory, ty=ty))

    thms = {}
    for no, tid, theory, seq, stmt in trec:
        try:
            term = parse_formula(stmt, sig)
        except KernelError as e:
            raise LibraryParseError(f"{tid}: {e}", no) from None
        if tid in thms:
            raise LibraryValidationError("duplicate theorem id", tid)
        thms[tid] = [tid, term, theory, seq, set()]
    for no, tid, deps in drec:
        if tid not in thms:
            raise LibraryValidationError(f"dependency record for unknown theorem (line {no})", tid)
        for d in deps:
            if d not in thms:
                log.warning("%s: dropping dependency on %s, not in the export", tid, d)
                continue
            thms[tid][4].add(d)
    return build_library(tag, decls, (Theorem(i, s, th, q, frozenset(ds)) for i, s, th, q, ds in thms.values()))


def load_library(path, tag: str | None = None) -> Library:
    path = Path(path)
    return parse_library(path.read_text(encoding="utf-8"), tag=tag, source=str(path))


def format_library(lib: Library) -> str:
    out = [f"# library {lib.tag}: {len(lib.consts)} constants, {len(lib.thms)} theorems"]
    for c in lib.consts:
        rest = str(c.arity) if c.is_type else str(c.ty)
        out.append(f"C {c.id} {c.kind} {c.theory} {rest}")
    for t in lib.thms:
        out.append(f"T {t.id} {t.theory} {t.seq} {print_term(t.statement)}")
    for t in lib.thms:
        if t.deps:
            out.append(f"D {t.id} " + " ".join(sorted(t.deps, key=lambda d: lib.thm(d).seq)))
    return "\n".join(out) + "\n"


def save_library(lib: Library, path) -> None:
    Path(path).write_text(format_library(lib), encoding="utf-8")
