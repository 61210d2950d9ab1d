"""Running first-order provers on FOF problems and reading back their verdicts."""
from __future__ import annotations

import hashlib
import json
import os
import re
import shutil
import subprocess
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .translate import FofProblem

STATUSES = ("Theorem", "CounterSatisfiable", "Timeout", "GaveUp", "Error")

_SZS_MAP = {
    "Theorem": "Theorem",
    "Unsatisfiable": "Theorem",
    "ContradictoryAxioms": "Theorem",
    "CounterSatisfiable": "CounterSatisfiable",
    "Satisfiable": "CounterSatisfiable",
    "Timeout": "Timeout",
    "ResourceOut": "Timeout",
    "GaveUp": "GaveUp",
    "Unknown": "GaveUp",
    "Incomplete": "GaveUp",
}
_STATUS_RE = re.compile(r"SZS status\s+(\w+)")
_FILE_RE = re.compile(r"file\(\s*(?:'[^']*'|[^,()]*)\s*,\s*'?([A-Za-z0-9_]+)'?\s*\)")

# Argument templates for well-known provers; ``{timeout}`` is substituted.
_PRESETS = {
    "eprover": ["--auto", "--proof-object", "--silent", "--cpu-limit={timeout}"],
    "vampire": ["--mode", "casc", "--proof", "tptp", "-t", "{timeout}"],
}


def bundled_prover() -> list[str]:
    return [sys.executable, "-m", "crosshammer.fof.saturate", "--timeout", "{timeout}"]


@dataclass
class AtpConfig:
    """How to invoke a prover.

    ``command`` is the argv prefix; the problem path is appended.  The
    placeholder ``{timeout}`` in any argument is replaced by ``timeout``.
    With no command, E is used if on ``PATH``, else the bundled prover.
    """

    command: list = field(default_factory=list)
    timeout: float = 30.0
    cache_dir: str | None = None
    jobs: int = 1
    minimize: bool = False

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if not self.command:
            exe = shutil.which("eprover")
            self.command = [exe, *_PRESETS["eprover"]] if exe else bundled_prover()

    @classmethod
    def from_binary(cls, binary: str, args: str | None = None, **kw) -> "AtpConfig":
        """Config for ``binary``, with preset arguments for known provers."""
        if args is not None:
            extra = args.split()
        else:
            extra = _PRESETS.get(Path(binary).name, [])
        return cls(command=[binary, *extra], **kw)

    def argv(self, path: str) -> list[str]:
        t = f"{self.timeout:g}"
        return [a.replace("{timeout}", t) for a in self.command] + [path]

    def available(self) -> bool:
        exe = self.command[0]
        return bool(shutil.which(exe) or Path(exe).is_file())


@dataclass(frozen=True)
class AtpResult:
    status: str
    used: frozenset = frozenset()  # theorem ids of the premises used
    time: float = 0.0
    message: str = ""

    def to_json(self) -> dict:
        return {"status": self.status, "used": sorted(self.used), "time": self.time, "message": self.message}

    @classmethod
    def from_json(cls, data: dict) -> "AtpResult":
        return cls(data["status"], frozenset(data["used"]), data["time"], data.get("message", ""))


def parse_output(text: str, premises: dict) -> tuple[str, frozenset]:
    """Status and used premise ids from prover output.

    ``premises`` maps axiom names to theorem ids; other names cited in the
    proof (definitions, the conjecture) are ignored.
    """
    statuses = _STATUS_RE.findall(text)
    if not statuses:
        return "Error", frozenset()
    status = _SZS_MAP.get(statuses[-1], "Error")
    if status != "Theorem":
        return status, frozenset()
    used = frozenset(premises[n] for n in _FILE_RE.findall(text) if n in premises)
    return status, used


def _cache_key(text: str, cfg: AtpConfig) -> str:
    h = hashlib.sha256()
    h.update(json.dumps(cfg.argv("<problem>")).encode())
    h.update(b"\0")
    h.update(text.encode())
    return h.hexdigest()


def _cache_read(cfg: AtpConfig, key: str) -> AtpResult | None:
    if not cfg.cache_dir:
        return None
    p = Path(cfg.cache_dir) / f"{key}.json"
    try:
        return AtpResult.from_json(json.loads(p.read_text(encoding="utf-8")))
    except (OSError, ValueError, KeyError):
        return None


def _cache_write(cfg: AtpConfig, key: str, res: AtpResult) -> None:
    if not cfg.cache_dir:
        return
    d = Path(cfg.cache_dir)
    d.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        json.dump(res.to_json(), fh)
    os.replace(tmp, d / f"{key}.json")


def run_atp(problem: FofProblem, cfg: AtpConfig, path: str | None = None) -> AtpResult:
    """Run the configured prover on ``problem``.

    The problem is written to ``path`` if given (and kept), else to a
    temporary file.  Failures are reported as status ``Error``.
    """
    text = problem.to_tptp()
    key = _cache_key(text, cfg)
    cached = _cache_read(cfg, key)
    if cached is not None:
        return cached
    if not cfg.available():
        return AtpResult("Error", message=f"prover not found: {cfg.command[0]}")
    premises = problem.premise_names()
    tmpdir = None
    if path is None:
        tmpdir = tempfile.TemporaryDirectory()
        path = os.path.join(tmpdir.name, "problem.p")
    try:
        Path(path).write_text(text, encoding="utf-8")
        start = time.monotonic()
        try:
            proc = subprocess.run(cfg.argv(path), capture_output=True, text=True,
                                  timeout=cfg.timeout + 5.0)
        except subprocess.TimeoutExpired:
            res = AtpResult("Timeout", time=time.monotonic() - start)
        except OSError as e:
            return AtpResult("Error", message=str(e))
        else:
            elapsed = time.monotonic() - start
            status, used = parse_output(proc.stdout, premises)
            msg = "" if status != "Error" else (proc.stderr or proc.stdout)[-500:]
            res = AtpResult(status, used, elapsed, msg)
    finally:
        if tmpdir is not None:
            tmpdir.cleanup()
    if res.status != "Error":
        _cache_write(cfg, key, res)
    return res


def minimize(problem: FofProblem, result: AtpResult, cfg: AtpConfig) -> AtpResult:
    """Re-prove from the used premises only; keep the smaller proof if it works."""
    if result.status != "Theorem":
        return result
    names = {n for n, tid in problem.premise_names().items() if tid in result.used}
    if len(names) == len(problem.premise_names()):
        return result
    again = run_atp(problem.restrict(names), cfg)
    if again.status == "Theorem" and again.used <= result.used:
        return AtpResult("Theorem", again.used, result.time + again.time)
    return result


def run_many(problems: list, cfg: AtpConfig, paths: list | None = None) -> list[AtpResult]:
    """Prove several problems with up to ``cfg.jobs`` provers at once."""
    paths = paths or [None] * len(problems)

    def one(i):
        r = run_atp(problems[i], cfg, paths[i])
        return minimize(problems[i], r, cfg) if cfg.minimize else r

    if cfg.jobs <= 1:
        return [one(i) for i in range(len(problems))]
    with ThreadPoolExecutor(max_workers=cfg.jobs) as ex:
        return list(ex.map(one, range(len(problems))))
