"""Apply a script to many proof obligations, one fresh session each."""

from __future__ import annotations

import fnmatch
from dataclasses import dataclass
from typing import Union

from .pomodel import PogFile
from .provers import BUILTIN_CONFIG, PortfolioResult, ProverConfig, run_portfolio
from .script import Script, format_command, parse_script
from .session import CommandError, apply_command, current_lemma, open_po

ABORT_ON_ERROR = "abort_on_error"
KEEP_GOING = "keep_going"


@dataclass(frozen=True)
class PoReplay:
    po_name: str
    lemma_size: int
    selected: tuple[str, ...]
    error: str | None
    skipped: tuple[str, ...]
    prover_result: PortfolioResult | None


@dataclass(frozen=True)
class ReplayReport:
    entries: tuple[PoReplay, ...]

    @property
    def all_proved(self) -> bool:
        return all(
            e.prover_result is not None and e.prover_result.overall_valid
            for e in self.entries
        )

    @property
    def any_error(self) -> bool:
        return any(e.error is not None or e.skipped for e in self.entries)


def select_pos(pog: PogFile, selector: str) -> list[int]:
    """Indices of obligations whose name matches any comma-separated
    fnmatch pattern in ``selector`` (file order)."""
    patterns = [p.strip() for p in selector.split(",") if p.strip()]
    if not patterns:
        patterns = ["*"]
    return [
        i
        for i, po in enumerate(pog.pos)
        if any(fnmatch.fnmatchcase(po.name, p) for p in patterns)
    ]


def replay(
    script: Union[Script, str],
    pog: PogFile,
    selector: str = "*",
    mode: str = ABORT_ON_ERROR,
    registry: list[ProverConfig] | None = None,
    stop_on_valid: bool = False,
) -> ReplayReport:
    """Run the script against every selected obligation.

    ``abort_on_error`` stops an obligation's replay at the first failed
    condition; ``keep_going`` records the command as skipped and continues.
    Navigation commands are inert here (the selector drives which
    obligations run); ``pr`` dispatches the portfolio on the current lemma.
    """
    if isinstance(script, str):
        script = parse_script(script)
    if mode not in (ABORT_ON_ERROR, KEEP_GOING):
        raise ValueError(f"unknown replay mode {mode!r}")
    indices = select_pos(pog, selector)
    if not indices:
        raise ValueError(f"selector {selector!r} matches no proof obligation")
    if registry is None:
        registry = [BUILTIN_CONFIG]

    return ReplayReport(
        entries=tuple(
            _replay_one(script, pog, i, mode, registry, stop_on_valid) for i in indices
        )
    )


def _replay_one(
    script: Script,
    pog: PogFile,
    index: int,
    mode: str,
    registry: list[ProverConfig],
    stop_on_valid: bool,
) -> PoReplay:
    state = open_po(pog, index)
    error: str | None = None
    skipped: list[str] = []
    prover_result: PortfolioResult | None = None
    for cmd in script.commands:
        if cmd.name in ("ne", "pv"):
            continue
        if cmd.name == "pr":
            prover_result = run_portfolio(
                current_lemma(state), registry, stop_on_valid=stop_on_valid
            )
            continue
        try:
            state = apply_command(state, cmd)
        except CommandError as exc:
            if mode == ABORT_ON_ERROR:
                error = f"{format_command(cmd)}: {exc}"
                break
            skipped.append(format_command(cmd))
    lemma = current_lemma(state)
    return PoReplay(
        po_name=state.po.name,
        lemma_size=len(lemma.hypotheses),
        selected=tuple(h.id for h in lemma.hypotheses),
        error=error,
        skipped=tuple(skipped),
        prover_result=prover_result,
    )
