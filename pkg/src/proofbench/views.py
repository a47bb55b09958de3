"""JSON-friendly dict views shared by the CLI (--json) and the HTTP API."""

from __future__ import annotations

from .formula import print_formula
from .provers import PortfolioResult, ProverConfig
from .replay import ReplayReport
from .session import SessionState


def state_view(state: SessionState) -> dict:
    po = state.po
    order = {h.id: i for i, h in enumerate(po.hypotheses)}
    return {
        "po": {"name": po.name, "group": po.group.value},
        "goal": print_formula(po.goal),
        "hypotheses": [
            {
                "id": h.id,
                "origin": h.origin.value,
                "text": print_formula(h.formula),
                "selected": h.id in state.selected,
            }
            for h in po.hypotheses
        ],
        "contexts": [
            {
                "name": c.name,
                "size": len(c.members),
                "current": c.name == state.current_context,
                "members": sorted(c.members, key=order.__getitem__),
            }
            for c in state.contexts
        ],
        "lexicons": [
            {
                "name": l.name,
                "size": len(l.ids),
                "current": l.name == state.current_lexicon,
                "ids": sorted(l.ids),
            }
            for l in state.lexicons
        ],
        "selected": [h.id for h in po.hypotheses if h.id in state.selected],
        "log": list(state.log),
    }


def portfolio_view(result: PortfolioResult) -> dict:
    return {
        "overall_valid": result.overall_valid,
        "fingerprint": result.fingerprint,
        "verdicts": [
            {
                "prover": name,
                "kind": v.kind,
                "elapsed_s": round(v.elapsed, 6),
                "detail": v.detail,
            }
            for name, v in result.verdicts
        ],
    }


def replay_view(report: ReplayReport) -> dict:
    return {
        "all_proved": report.all_proved,
        "any_error": report.any_error,
        "entries": [
            {
                "po": e.po_name,
                "lemma_size": e.lemma_size,
                "selected": list(e.selected),
                "error": e.error,
                "skipped": list(e.skipped),
                "portfolio": portfolio_view(e.prover_result) if e.prover_result else None,
            }
            for e in report.entries
        ],
    }


def prover_view(cfg: ProverConfig) -> dict:
    return {
        "name": cfg.name,
        "command": cfg.command_template,
        "timeout_s": cfg.timeout_s,
        "enabled": cfg.enabled,
        "valid_patterns": list(cfg.valid_patterns),
        "invalid_patterns": list(cfg.invalid_patterns),
        "note": cfg.note,
    }
