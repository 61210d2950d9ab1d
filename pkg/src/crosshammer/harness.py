"""End-to-end simulation: reprove every internal theorem under each scenario.

For each theorem in order, the world is cut back to what was known before
it, advice is produced, translated to a first-order problem and handed to a
prover.  Records stream to ``records.jsonl``; problems and their name maps
are kept under ``problems/`` for auditing.
"""
from __future__ import annotations

import csv
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .equivalence import build_index
from .fof.atp import AtpConfig, run_many
from .fof.translate import TranslationError, sanitize, translate
from .library import Library, load_library
from .matching import MatchConfig, MatchState, compute_matching, matching_evolution, merge_namespace
from .scenarios import DISPATCH, SCENARIOS, build_context

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

log = logging.getLogger(__name__)

LABELS = {
    "empty": "empty",
    "internal": "internal predictions",
    "ext-deps": "external dependencies",
    "ext-pred": "external predictions",
    "comb-learn": "combined learning",
    "comb-pred": "combined predictions",
}
# Scenarios whose unchecked variant can differ from the checked one.
UNCHECKED_SCENARIOS = ("ext-deps", "ext-pred", "comb-pred")
NOT_APPLICABLE = "NotApplicable"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    internal: str
    external: str | None = None
    scenarios: tuple = SCENARIOS
    checked: bool = True
    unchecked: bool = False
    k: int = 128
    stride: int = 25
    out: str = "out"
    jobs: int = 1
    features: str = "both"
    threshold: float = 0.0
    limit: int | None = None  # only the first ``limit`` theorems
    atp: AtpConfig = field(default_factory=AtpConfig)

    def validate(self) -> None:
        if self.stride < 1:
            raise ConfigError("stride must be at least 1")
        if self.k < 1:
            raise ConfigError("k must be at least 1")
        if not self.scenarios:
            raise ConfigError("no scenarios configured")
        bad = [s for s in self.scenarios if s not in DISPATCH]
        if bad:
            raise ConfigError(f"unknown scenarios: {', '.join(bad)}")
        if not (self.checked or self.unchecked):
            raise ConfigError("neither checked nor unchecked runs requested")

    @classmethod
    def from_dict(cls, data: dict, base: Path | None = None) -> "RunConfig":
        data = dict(data)
        atp = data.pop("atp", {}) or {}
        known = set(cls.__dataclass_fields__) - {"atp"}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(extra))}")
        for key in ("internal", "external", "out"):
            if data.get(key) and base is not None and not Path(data[key]).is_absolute():
                data[key] = str(base / data[key])
        if "scenarios" in data:
            data["scenarios"] = tuple(data["scenarios"])
        try:
            timeout = float(atp.get("timeout", 30))
            if "binary" in atp:
                atp_cfg = AtpConfig.from_binary(atp["binary"], atp.get("args"), timeout=timeout)
            else:
                atp_cfg = AtpConfig(timeout=timeout)
        except ValueError as e:
            raise ConfigError(str(e)) from e
        if "cache" in atp:
            cache = Path(atp["cache"])
            atp_cfg.cache_dir = str(cache if cache.is_absolute() or base is None else base / cache)
        atp_cfg.jobs = int(data.get("jobs", 1))
        atp_cfg.minimize = bool(atp.get("minimize", False))
        try:
            cfg = cls(atp=atp_cfg, **data)
        except TypeError as e:
            raise ConfigError(str(e)) from e
        cfg.validate()
        return cfg

    @classmethod
    def from_toml(cls, path) -> "RunConfig":
        path = Path(path)
        try:
            data = tomllib.loads(path.read_text(encoding="utf-8"))
        except (OSError, tomllib.TOMLDecodeError) as e:
            raise ConfigError(f"cannot read {path}: {e}") from e
        return cls.from_dict(data, base=path.parent)


@dataclass
class RunRecord:
    theorem: str
    theory: str
    seq: int
    scenario: str
    checked: bool
    applicable: bool
    advice_size: int
    internal: list = field(default_factory=list)
    external: list = field(default_factory=list)
    ext_equivalents: list = field(default_factory=list)  # E(external, conjecture)
    status: str = NOT_APPLICABLE
    used: list = field(default_factory=list)
    time: float = 0.0
    problem: str | None = None
    error: str = ""

    @property
    def label(self) -> str:
        base = LABELS.get(self.scenario, self.scenario)
        return base if self.checked else f"{base} (unchecked)"

    @property
    def solved(self) -> bool:
        return self.status == "Theorem"

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "RunRecord":
        return cls(**data)


def load_records(path) -> list[RunRecord]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(RunRecord.from_json(json.loads(line)))
    return out


def _variants(cfg: RunConfig) -> list[tuple[str, bool]]:
    out = []
    if cfg.checked:
        out += [(s, True) for s in cfg.scenarios]
    if cfg.unchecked:
        out += [(s, False) for s in cfg.scenarios if s in UNCHECKED_SCENARIOS]
    return out


def simulate(cfg: RunConfig, internal: Library | None = None, external: Library | None = None,
             progress=None) -> list[RunRecord]:
    """Run every configured scenario on every internal theorem.

    Libraries may be passed in directly; otherwise they are loaded from the
    paths in ``cfg``.  Configuration problems raise :class:`ConfigError`
    before any prover runs; failures on single theorems are recorded.
    """
    cfg.validate()
    try:
        int_lib = internal if internal is not None else load_library(cfg.internal)
        if external is not None:
            ext_lib = external
        elif cfg.external:
            ext_lib = load_library(cfg.external)
        else:
            ext_lib = Library("external", [], [], ())
    except (OSError, ValueError) as e:
        raise ConfigError(f"cannot load libraries: {e}") from e
    if not cfg.atp.available():
        raise ConfigError(f"prover not found: {cfg.atp.command[0]}")
    out = Path(cfg.out)
    pdir = out / "problems"
    pdir.mkdir(parents=True, exist_ok=True)
    variants = _variants(cfg)
    uses_ext = any(s not in ("empty", "internal") for s, _ in variants)
    mcfg = MatchConfig(threshold=cfg.threshold)
    thms = int_lib.thms if cfg.limit is None else int_lib.thms[: cfg.limit]
    records: list = []
    ctx = None
    snapshot = None
    with open(out / "records.jsonl", "w", encoding="utf-8") as fh:
        for t in thms:
            if ctx is None or t.seq - snapshot >= cfg.stride:
                snapshot = t.seq
                state = MatchState()
                if uses_ext and ext_lib.thms:
                    state = compute_matching(int_lib.prefix(t.seq), ext_lib, mcfg)
                ctx = build_context(int_lib, ext_lib, state, cfg.k, cfg.features)
            conj = ctx.internal.thm(t.id).statement
            ext_eq = ctx.ext_class(conj)
            recs, batch, problems, paths = [], [], [], []
            for scen, checked in variants:
                rec = RunRecord(t.id, t.theory, t.seq, scen, checked, True, 0, ext_equivalents=list(ext_eq))
                try:
                    adv = DISPATCH[scen](ctx, conj, t.seq, checked)
                except Exception as e:  # a failing scenario must not end the run
                    rec.status, rec.error = "Error", f"advice failed: {e}"
                    recs.append(rec)
                    continue
                rec.applicable = adv.applicable
                rec.internal, rec.external = list(adv.internal), list(adv.external)
                rec.advice_size = len(adv.internal) + len(adv.external)
                if not adv.applicable:
                    recs.append(rec)
                    continue
                lemmas = [(i, ctx.internal.thm(i).statement) for i in adv.internal]
                lemmas += [(e, ctx.external.thm(e).statement) for e in adv.external]
                try:
                    problem = translate(conj, lemmas, t.id)
                except TranslationError as e:
                    rec.status, rec.error = "Error", str(e)
                    recs.append(rec)
                    continue
                stem = f"{sanitize(t.id)}__{scen}{'' if checked else '__unchecked'}"
                path = pdir / f"{stem}.p"
                (pdir / f"{stem}.map").write_text(problem.mapping_text(), encoding="utf-8")
                rec.problem = str(path)
                batch.append(rec)
                problems.append(problem)
                paths.append(str(path))
                recs.append(rec)
            for rec, res in zip(batch, run_many(problems, cfg.atp, paths)):
                rec.status, rec.used, rec.time = res.status, sorted(res.used), round(res.time, 3)
                rec.error = res.message
            records.extend(recs)
            for rec in recs:
                fh.write(json.dumps(rec.to_json()) + "\n")
            fh.flush()
            if progress:
                progress(t)
    return records


# ---------------------------------------------------------------- auditing


def _premises(rec: RunRecord) -> list[str]:
    """Lemma ids the prover was offered, read back from the problem's name map."""
    if rec.problem:
        mp = Path(rec.problem).with_suffix(".map")
        if mp.exists():
            ids = []
            for line in mp.read_text(encoding="utf-8").splitlines():
                name, _, tid = line.partition("\t")
                if not name.startswith("conj_"):
                    ids.append(tid)
            return ids
    return rec.internal + rec.external


def audit(records, internal: Library, external: Library) -> list[str]:
    """Premise-availability violations; empty when the run is sound.

    Internal premises must precede the target theorem.  External premises
    are only allowed in unchecked runs and, when the target has external
    equivalents, must precede all of them in the external library.
    """
    problems = []
    for rec in records:
        target = internal.thm(rec.theorem).seq
        offered = _premises(rec)
        for tid in offered:
            where = f"{rec.theorem} [{rec.label}]: {tid}"
            if internal.has_thm(tid):
                if internal.thm(tid).seq >= target:
                    problems.append(f"{where} is not yet proved")
            elif external.has_thm(tid):
                if rec.checked:
                    problems.append(f"{where} is external in a checked run")
                elif rec.ext_equivalents:
                    bound = min(external.thm(e).seq for e in rec.ext_equivalents)
                    if external.thm(tid).seq >= bound:
                        problems.append(f"{where} follows the conjecture in the external library")
            else:
                problems.append(f"{where} is unknown")
        if not set(rec.used) <= set(offered):
            problems.append(f"{rec.theorem} [{rec.label}]: used premises were not offered")
    return problems


# ---------------------------------------------------------------- reporting


@dataclass
class Row:
    label: str
    solved: int
    total: int
    applicable: int | None = None

    @property
    def percent(self) -> float:
        return 100.0 * self.solved / self.total if self.total else 0.0

    @property
    def relative(self) -> float | None:
        if self.applicable is None:
            return None
        return 100.0 * self.solved / self.applicable if self.applicable else 0.0


@dataclass
class Report:
    rows: list
    theories: list  # (theory, n theorems, {label: percent})
    solved_by: dict  # label -> set of theorem ids

    def render(self) -> str:
        lines = [f"{'Scenario':<40} {'Theorem (%)':>12}"]
        for r in self.rows:
            rel = f" ({r.relative:.2f})" if r.relative is not None else ""
            lines.append(f"{r.label:<40} {r.percent:>12.2f}{rel}")
        return "\n".join(lines)

    def render_theories(self) -> str:
        labels = [r.label for r in self.rows]
        lines = ["\t".join(["theory", "theorems", *labels])]
        for theory, n, pct in self.theories:
            lines.append("\t".join([theory, str(n), *(f"{pct[l]:.2f}" for l in labels)]))
        return "\n".join(lines)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["scenario", "solved", "total", "percent", "applicable", "relative_percent"])
            for r in self.rows:
                w.writerow([r.label, r.solved, r.total, f"{r.percent:.2f}",
                            "" if r.applicable is None else r.applicable,
                            "" if r.relative is None else f"{r.relative:.2f}"])


ANY_CHECKED = "any"
ANY_ALL = "any checked or unchecked"


def aggregate(records) -> Report:
    """Solve rates per scenario, union rows, and a per-theory breakdown."""
    records = list(records)
    if not records:
        raise ValueError("no records to aggregate")
    theorems: dict = {}
    for r in records:
        theorems.setdefault(r.theorem, r.theory)
    total = len(theorems)
    order: list = []
    solved: dict = {}
    applicable: dict = {}
    for r in records:
        if r.label not in solved:
            order.append((r.label, r.checked, r.scenario))
            solved[r.label] = set()
            applicable[r.label] = set()
        if r.applicable:
            applicable[r.label].add(r.theorem)
        if r.solved:
            solved[r.label].add(r.theorem)
    checked = [l for l, c, _ in order if c]
    unchecked = [l for l, c, _ in order if not c]
    solved_by = dict(solved)
    rows = []

    def row(label, scen=None):
        app = len(applicable[label]) if scen == "ext-deps" else None
        rows.append(Row(label, len(solved_by[label]), total, app))

    for l, c, s in order:
        if c:
            row(l, s)
    if checked:
        solved_by[ANY_CHECKED] = set().union(*(solved[l] for l in checked))
        rows.append(Row(ANY_CHECKED, len(solved_by[ANY_CHECKED]), total))
    if unchecked:
        for l, c, s in order:
            if not c:
                row(l, s)
        solved_by[ANY_ALL] = set().union(*(solved[l] for l in checked + unchecked))
        rows.append(Row(ANY_ALL, len(solved_by[ANY_ALL]), total))
    theories = []
    for theory in dict.fromkeys(theorems.values()):
        members = {t for t, th in theorems.items() if th == theory}
        pct = {r.label: 100.0 * len(solved_by[r.label] & members) / len(members) for r in rows}
        theories.append((theory, len(members), pct))
    return Report(rows, theories, solved_by)


def report_common_theories(lib_a: Library, lib_b: Library, state: MatchState, top: int | None = None):
    """Theory pairs ranked by shared equivalence classes.

    Rows are ``(theory_a, n_a, theory_b, n_b, common)`` with theorem counts
    per theory; pairs sharing nothing are omitted.
    """
    if state.pairs:
        lib_a, lib_b, _ = merge_namespace(lib_a, lib_b, state)
    ia, ib = build_index(lib_a), build_index(lib_b)

    def keys_by_theory(lib, index):
        out: dict = {}
        for t in lib.thms:
            out.setdefault(t.theory, set()).add(index.key(t.id))
        return out

    ka, kb = keys_by_theory(lib_a, ia), keys_by_theory(lib_b, ib)
    na = {th: len(lib_a.theory_thms(th)) for th in ka}
    nb = {th: len(lib_b.theory_thms(th)) for th in kb}
    rows = []
    for ta, sa in ka.items():
        for tb, sb in kb.items():
            common = len(sa & sb)
            if common:
                rows.append((ta, na[ta], tb, nb[tb], common))
    rows.sort(key=lambda r: (-r[4], r[0], r[2]))
    return rows[:top] if top else rows


def emit_evolution(lib_int: Library, lib_ext: Library, theory: str, out, cfg: MatchConfig | None = None,
                   stride: int = 1) -> list:
    """Write the matched/declared series of ``theory`` as CSV and return it."""
    if theory not in lib_int.theories:
        raise ValueError(f"unknown theory {theory!r}")
    rows = matching_evolution(lib_int, lib_ext, theory, cfg, stride)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["seq", "matched", "declared"])
        w.writerows(rows)
    return rows

