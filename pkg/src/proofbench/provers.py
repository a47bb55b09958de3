"""Prover portfolio: lemma export, a builtin propositional checker, and
concurrent dispatch to external prover commands with timeouts.

External provers are described in a TOML registry and invoked through a
command template; their verdict is classified purely from output patterns.
The builtin checker abstracts non-propositional subformulas to atoms and
decides the hypotheses-imply-goal skeleton exhaustively (up to 20 atoms)
or by a budgeted splitting search.
"""

from __future__ import annotations

import hashlib
import os
import shlex
import shutil
import signal
import subprocess
import sys
import tempfile
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Union

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .formula import Binary, BoolLit, Formula, Unary, print_formula
from .session import Lemma

ATOM_LIMIT_EXHAUSTIVE = 20
DEFAULT_STEP_BUDGET = 100_000
TIMEOUT_GRACE_S = 1.0

BUILTIN_NAME = "builtin"


class RegistryError(ValueError):
    """Malformed prover registry file."""


@dataclass(frozen=True)
class ProverConfig:
    name: str
    command_template: str
    timeout_s: float
    enabled: bool = True
    valid_patterns: tuple[str, ...] = ()
    invalid_patterns: tuple[str, ...] = ()
    note: str = ""

    def __post_init__(self) -> None:
        if self.timeout_s <= 0:
            raise RegistryError(f"prover {self.name!r}: timeout must be positive")


BUILTIN_CONFIG = ProverConfig(
    name=BUILTIN_NAME,
    command_template="",
    timeout_s=10.0,
    enabled=True,
)


@dataclass(frozen=True)
class ProverVerdict:
    kind: str  # valid | countermodel | unknown | timeout | error
    elapsed: float
    detail: str = ""


@dataclass(frozen=True)
class PortfolioResult:
    verdicts: tuple[tuple[str, ProverVerdict], ...]
    overall_valid: bool
    fingerprint: str

    def verdict(self, prover_name: str) -> ProverVerdict:
        for name, v in self.verdicts:
            if name == prover_name:
                return v
        raise KeyError(prover_name)


# ---------------------------------------------------------------------------
# Lemma exchange format

def export_lemma(lemma: Lemma) -> str:
    """One `hyp:` line per hypothesis, then the `goal:` line; deterministic."""
    lines = [f"hyp: {print_formula(h.formula)}" for h in lemma.hypotheses]
    lines.append(f"goal: {print_formula(lemma.goal)}")
    return "\n".join(lines) + "\n"


def lemma_fingerprint(lemma: Lemma) -> str:
    return hashlib.sha256(export_lemma(lemma).encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# Builtin propositional checker
#
# The skeleton keeps `&`, `or`, `=>`, `<=>`, `not` and boolean literals;
# every other subformula becomes an atom keyed by its canonical print.

_PROP_BINARY = frozenset({"&", "or", "=>", "<=>"})

_CONST_TRUE = ("const", True)
_CONST_FALSE = ("const", False)


def _abstract(f: Formula, atoms: dict[str, int]):
    if isinstance(f, BoolLit):
        return _CONST_TRUE if f.value else _CONST_FALSE
    if isinstance(f, Unary) and f.op == "not":
        return ("not", _abstract(f.operand, atoms))
    if isinstance(f, Binary) and f.op in _PROP_BINARY:
        return (f.op, _abstract(f.left, atoms), _abstract(f.right, atoms))
    key = print_formula(f)
    index = atoms.setdefault(key, len(atoms))
    return ("atom", index)


def _atoms_of(node, out: set[int]) -> None:
    tag = node[0]
    if tag == "atom":
        out.add(node[1])
    elif tag == "not":
        _atoms_of(node[1], out)
    elif tag in _PROP_BINARY:
        _atoms_of(node[1], out)
        _atoms_of(node[2], out)


def _atom_mask(i: int, n_atoms: int) -> int:
    """Truth of atom i across all 2**n valuations, one bit per valuation."""
    run = 1 << i
    mask = ((1 << run) - 1) << run
    filled = run << 1
    total = 1 << n_atoms
    while filled < total:
        mask |= mask << filled
        filled <<= 1
    return mask


def _eval_mask(node, masks: list[int], full: int) -> int:
    tag = node[0]
    if tag == "const":
        return full if node[1] else 0
    if tag == "atom":
        return masks[node[1]]
    if tag == "not":
        return full ^ _eval_mask(node[1], masks, full)
    left = _eval_mask(node[1], masks, full)
    right = _eval_mask(node[2], masks, full)
    if tag == "&":
        return left & right
    if tag == "or":
        return left | right
    if tag == "=>":
        return (full ^ left) | right
    if tag == "<=>":
        return full ^ (left ^ right)
    raise ValueError(f"bad skeleton node {tag!r}")


class _BudgetExhausted(Exception):
    pass


def _partial_eval(node, assignment: dict[int, bool]):
    """Three-valued simplification under a partial assignment."""
    tag = node[0]
    if tag == "const":
        return node[1]
    if tag == "atom":
        return assignment.get(node[1])
    if tag == "not":
        sub = _partial_eval(node[1], assignment)
        return None if sub is None else not sub
    left = _partial_eval(node[1], assignment)
    right = _partial_eval(node[2], assignment)
    if tag == "&":
        if left is False or right is False:
            return False
        if left is True and right is True:
            return True
        return None
    if tag == "or":
        if left is True or right is True:
            return True
        if left is False and right is False:
            return False
        return None
    if tag == "=>":
        if left is False or right is True:
            return True
        if left is True and right is False:
            return False
        return None
    if tag == "<=>":
        if left is None or right is None:
            return None
        return left == right
    raise ValueError(f"bad skeleton node {tag!r}")


def _split_valid(node, n_atoms: int, budget: list[int]) -> tuple[bool, dict[int, bool] | None]:
    """Validity by case splitting; returns (valid, falsifying assignment)."""

    def search(assignment: dict[int, bool], next_atom: int):
        budget[0] -= 1
        if budget[0] < 0:
            raise _BudgetExhausted
        value = _partial_eval(node, assignment)
        if value is True:
            return None
        if value is False:
            return dict(assignment)
        while next_atom in assignment:
            next_atom += 1
        if next_atom >= n_atoms:
            # fully assigned yet undetermined cannot happen
            raise AssertionError("undetermined formula with all atoms assigned")
        for v in (False, True):
            assignment[next_atom] = v
            found = search(assignment, next_atom + 1)
            del assignment[next_atom]
            if found is not None:
                return found
        return None

    falsifying = search({}, 0)
    return falsifying is None, falsifying


def builtin_prove(lemma: Lemma, step_budget: int = DEFAULT_STEP_BUDGET) -> ProverVerdict:
    """Decide the propositional skeleton of hypotheses => goal.

    valid: the skeleton is a tautology. countermodel: a falsifying valuation
    exists and every goal atom also occurs in some hypothesis (otherwise the
    refutation says nothing about the original lemma and the verdict is
    unknown). unknown: budget exhausted.
    """
    if step_budget < 1:
        raise ValueError("step_budget must be >= 1")
    started = time.monotonic()
    atoms: dict[str, int] = {}
    hyp_nodes = [_abstract(h.formula, atoms) for h in lemma.hypotheses]
    goal_node = _abstract(lemma.goal, atoms)

    node = goal_node
    for h in reversed(hyp_nodes):
        node = ("=>", h, node)
    n_atoms = len(atoms)

    goal_atoms: set[int] = set()
    _atoms_of(goal_node, goal_atoms)
    hyp_atoms: set[int] = set()
    for h in hyp_nodes:
        _atoms_of(h, hyp_atoms)
    supported = goal_atoms <= hyp_atoms

    def done(kind: str, detail: str = "") -> ProverVerdict:
        return ProverVerdict(kind, elapsed=time.monotonic() - started, detail=detail)

    if n_atoms <= ATOM_LIMIT_EXHAUSTIVE:
        full = (1 << (1 << n_atoms)) - 1
        masks = [_atom_mask(i, n_atoms) for i in range(n_atoms)]
        result = _eval_mask(node, masks, full)
        if result == full:
            return done("valid")
        if not supported:
            return done("unknown", "goal mentions atoms not present in any hypothesis")
        witness = (full ^ result).bit_length() - 1
        names = _atom_names(atoms)
        assignment = ", ".join(
            f"{names[i]}={'true' if (witness >> i) & 1 else 'false'}"
            for i in range(n_atoms)
        )
        return done("countermodel", assignment)

    try:
        valid, falsifying = _split_valid(node, n_atoms, [step_budget])
    except _BudgetExhausted:
        return done("unknown", f"step budget {step_budget} exhausted")
    if valid:
        return done("valid")
    if not supported:
        return done("unknown", "goal mentions atoms not present in any hypothesis")
    names = _atom_names(atoms)
    assignment = ", ".join(
        f"{names[i]}={'true' if v else 'false'}"
        for i, v in sorted((falsifying or {}).items())
    )
    return done("countermodel", assignment)


def _atom_names(atoms: dict[str, int]) -> dict[int, str]:
    return {index: key for key, index in atoms.items()}


# ---------------------------------------------------------------------------
# Registry

def discover_provers(registry_path: Union[str, Path, None]) -> list[ProverConfig]:
    """Load the registry, disable entries whose executable is not on PATH,
    and append the builtin checker."""
    configs: list[ProverConfig] = []
    if registry_path is not None:
        configs = _load_registry(Path(registry_path))
    checked = [_resolve(cfg) for cfg in configs]
    checked.append(BUILTIN_CONFIG)
    return checked


def _load_registry(path: Path) -> list[ProverConfig]:
    try:
        data = tomllib.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise RegistryError(f"cannot read {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise RegistryError(f"malformed registry {path}: {exc}") from exc

    entries = data.get("prover", [])
    if not isinstance(entries, list):
        raise RegistryError("expected an array of [[prover]] tables")
    stray = set(data) - {"prover"}
    if stray:
        raise RegistryError(f"unexpected top-level keys: {sorted(stray)}")

    configs: list[ProverConfig] = []
    seen: set[str] = set()
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise RegistryError(f"prover entry {i + 1} is not a table")
        try:
            name = entry["name"]
            command = entry["command"]
        except KeyError as exc:
            raise RegistryError(f"prover entry {i + 1} is missing {exc}") from None
        if name == BUILTIN_NAME:
            raise RegistryError(f"prover name {BUILTIN_NAME!r} is reserved")
        if name in seen:
            raise RegistryError(f"duplicate prover name {name!r}")
        seen.add(name)
        unknown = set(entry) - {
            "name", "command", "timeout_s", "valid_patterns", "invalid_patterns", "enabled",
        }
        if unknown:
            raise RegistryError(f"prover {name!r}: unknown keys {sorted(unknown)}")
        configs.append(
            ProverConfig(
                name=name,
                command_template=command,
                timeout_s=float(entry.get("timeout_s", 10.0)),
                enabled=bool(entry.get("enabled", True)),
                valid_patterns=tuple(entry.get("valid_patterns", ())),
                invalid_patterns=tuple(entry.get("invalid_patterns", ())),
            )
        )
    return configs


def _resolve(cfg: ProverConfig) -> ProverConfig:
    if not cfg.enabled:
        return cfg
    try:
        argv0 = shlex.split(cfg.command_template)[0]
    except (ValueError, IndexError):
        return replace(cfg, enabled=False, note="empty or unparseable command")
    if shutil.which(argv0) is None:
        return replace(cfg, enabled=False, note=f"executable not found: {argv0}")
    return cfg


# ---------------------------------------------------------------------------
# Portfolio dispatch

def run_portfolio(
    lemma: Lemma,
    registry: list[ProverConfig],
    stop_on_valid: bool = False,
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> PortfolioResult:
    """Run every enabled prover concurrently on the exported lemma."""
    enabled = [p for p in registry if p.enabled]
    if not enabled:
        raise ValueError("no enabled prover in the registry")

    text = export_lemma(lemma)
    fingerprint = hashlib.sha256(text.encode("utf-8")).hexdigest()

    cancel = threading.Event()
    procs: dict[str, subprocess.Popen] = {}
    procs_lock = threading.Lock()

    with tempfile.NamedTemporaryFile(
        "w", suffix=".lemma", delete=False, encoding="utf-8"
    ) as tmp:
        tmp.write(text)
        input_path = tmp.name

    def kill_all() -> None:
        with procs_lock:
            for proc in procs.values():
                if proc.poll() is None:
                    _kill_process_group(proc)

    def run_one(cfg: ProverConfig) -> ProverVerdict:
        if cancel.is_set():
            return ProverVerdict("unknown", 0.0, "cancelled: portfolio already valid")
        if cfg.name == BUILTIN_NAME:
            verdict = builtin_prove(lemma, step_budget=step_budget)
        else:
            verdict = _run_external(cfg, input_path, procs, procs_lock, cancel)
        if verdict.kind == "valid" and stop_on_valid:
            cancel.set()
            kill_all()
        return verdict

    try:
        with ThreadPoolExecutor(max_workers=len(enabled)) as pool:
            results = list(pool.map(run_one, enabled))
    finally:
        Path(input_path).unlink(missing_ok=True)

    verdicts = tuple(zip((p.name for p in enabled), results))
    overall = any(v.kind == "valid" for _, v in verdicts)
    return PortfolioResult(verdicts=verdicts, overall_valid=overall, fingerprint=fingerprint)


def _kill_process_group(proc: subprocess.Popen) -> None:
    try:
        os.killpg(os.getpgid(proc.pid), signal.SIGKILL)
    except (ProcessLookupError, PermissionError, OSError):
        proc.kill()


def _run_external(
    cfg: ProverConfig,
    input_path: str,
    procs: dict[str, subprocess.Popen],
    procs_lock: threading.Lock,
    cancel: threading.Event,
) -> ProverVerdict:
    started = time.monotonic()

    def done(kind: str, detail: str = "") -> ProverVerdict:
        return ProverVerdict(kind, elapsed=time.monotonic() - started, detail=detail)

    try:
        command = cfg.command_template.format(
            input=input_path, timeout_s=cfg.timeout_s
        )
    except (KeyError, IndexError, ValueError) as exc:
        return done("error", f"template expansion failed: {exc}")
    argv = shlex.split(command)
    if not argv:
        return done("error", "empty command after expansion")

    try:
        # new session so a timeout kill reaps the prover's children too
        proc = subprocess.Popen(
            argv,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            stdin=subprocess.DEVNULL,
            start_new_session=True,
        )
    except OSError as exc:
        return done("error", f"spawn failed: {exc}")
    with procs_lock:
        procs[cfg.name] = proc

    try:
        stdout, stderr = proc.communicate(timeout=cfg.timeout_s)
    except subprocess.TimeoutExpired:
        _kill_process_group(proc)
        proc.communicate()
        return done("timeout", f"killed after {cfg.timeout_s}s")

    if cancel.is_set():
        return done("unknown", "cancelled: portfolio already valid")
    output = stdout.decode("utf-8", errors="replace") + stderr.decode(
        "utf-8", errors="replace"
    )
    if any(p in output for p in cfg.valid_patterns):
        return done("valid")
    if any(p in output for p in cfg.invalid_patterns):
        return done("countermodel")
    if proc.returncode != 0:
        return done("error", f"exit code {proc.returncode} with no known pattern")
    return done("unknown", "no known pattern in output")
