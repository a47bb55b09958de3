"""Command-line front end: interactive REPL plus batch subcommands.

Exit codes: 0 success, 1 usage or load errors, 2 replay completed but not
every selected obligation was proved (or, for scripts without `pr`, some
command failed).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import IO

from .pomodel import PogError, generate_synthetic, load_pog, save_pog
from .provers import RegistryError, discover_provers, run_portfolio
from .replay import ABORT_ON_ERROR, KEEP_GOING, replay as run_replay
from .script import ScriptError, parse_script
from .session import CommandError, Workbench, current_lemma
from .views import prover_view, replay_view

REGISTRY_ENV = "PROOFBENCH_REGISTRY"

REPL_HELP = """\
selection:  ah | dh | chctx(name) | chlex(name) | mklex | mklex(id, ...)
            mkctx(Some) | mkctx(All) | mkctx(hyp, ...)   [as <name>]
navigate:   ne | pv          provers: pr
inspect:    po | ctx | lex | hyp [context] | lemma | script
other:      save-script <path> | help | quit
Separate commands with & on one line; # starts a comment."""


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2)
        raise UsageError(message)


def _registry_path(value: str | None) -> str | None:
    return value if value is not None else os.environ.get(REGISTRY_ENV)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (PogError, RegistryError, ScriptError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="proofbench")
    sub = parser.add_subparsers(dest="command", required=True)

    p_repl = sub.add_parser("repl", help="interactive session on a .pog file")
    p_repl.add_argument("pog")
    p_repl.add_argument("--registry", default=None, help=f"prover registry (default ${REGISTRY_ENV})")
    p_repl.set_defaults(func=_cmd_repl)

    p_replay = sub.add_parser("replay", help="apply a script across proof obligations")
    p_replay.add_argument("pog")
    p_replay.add_argument("script")
    p_replay.add_argument("--pos", default="*", help="comma-separated name patterns")
    p_replay.add_argument("--keep-going", action="store_true",
                          help="skip failing commands instead of aborting the obligation")
    p_replay.add_argument("--stop-on-valid", action="store_true")
    p_replay.add_argument("--registry", default=None)
    p_replay.add_argument("--json", action="store_true")
    p_replay.set_defaults(func=_cmd_replay)

    p_gen = sub.add_parser("generate", help="write a synthetic benchmark corpus")
    p_gen.add_argument("--pos", type=int, required=True, help="number of proof obligations")
    p_gen.add_argument("--hyps", type=int, required=True, help="hypotheses per obligation")
    p_gen.add_argument("--relevant-fraction", type=float, default=0.1)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=_cmd_generate)

    p_provers = sub.add_parser("provers", help="inspect the prover registry")
    provers_sub = p_provers.add_subparsers(dest="provers_command", required=True)
    for name in ("list", "check"):
        p = provers_sub.add_parser(name)
        p.add_argument("--registry", default=None)
        p.add_argument("--json", action="store_true")
        p.set_defaults(func=_cmd_provers)

    p_serve = sub.add_parser("serve", help="serve the HTTP API (and web UI if built)")
    p_serve.add_argument("pog")
    p_serve.add_argument("--registry", default=None)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--ui-dir", default=None)
    p_serve.set_defaults(func=_cmd_serve)

    return parser


# ---------------------------------------------------------------------------
# repl

def _cmd_repl(args) -> int:
    pog = load_pog(args.pog)
    registry = discover_provers(_registry_path(args.registry))
    return run_repl(pog, registry, sys.stdin, sys.stdout)


def run_repl(pog, registry, stdin: IO[str], stdout: IO[str]) -> int:
    wb = Workbench(pog)
    interactive = hasattr(stdin, "isatty") and stdin.isatty()

    def say(text: str = "") -> None:
        print(text, file=stdout)

    say(f"{pog.component_name}: {len(pog.pos)} proof obligations loaded (ne opens the first)")
    while True:
        if interactive:
            stdout.write("pb> ")
            stdout.flush()
        line = stdin.readline()
        if not line:
            return 0
        try:
            if _repl_line(wb, registry, line.strip(), say):
                return 0
        except CommandError as exc:
            say(f"error: {exc}")
        except (ScriptError, UsageError) as exc:
            say(f"error: {exc}")
        except Exception as exc:  # the prompt must survive anything
            say(f"error: internal: {exc!r}")


def _repl_line(wb: Workbench, registry, line: str, say) -> bool:
    """Handle one input line; returns True on quit."""
    if not line or line.startswith("#"):
        return False
    head = line.split(None, 1)[0]
    if head == "quit":
        return True
    if head == "help":
        say(REPL_HELP)
        return False
    if head in ("po", "ctx", "lex", "hyp", "lemma", "script", "save-script"):
        _repl_inspect(wb, head, line, say)
        return False

    for cmd in parse_script(line).commands:
        if cmd.name == "pr":
            _repl_prove(wb, registry, say)
            continue
        changed, message = wb.execute(cmd)
        if message:
            say(message)
    return False


def _repl_prove(wb: Workbench, registry, say) -> None:
    session = _require_session(wb)
    lemma = current_lemma(session)
    say(f"running provers on a lemma with {len(lemma.hypotheses)} hypotheses ...")
    result = run_portfolio(lemma, registry)
    for name, verdict in result.verdicts:
        detail = f" ({verdict.detail})" if verdict.detail else ""
        say(f"  {name}: {verdict.kind} [{verdict.elapsed:.2f}s]{detail}")
    say(f"overall: {'valid' if result.overall_valid else 'not valid'}")
    if result.overall_valid:
        wb.proved.add(session.po.name)


def _require_session(wb: Workbench):
    if wb.session is None:
        raise CommandError("no proof obligation open (use ne to open one)")
    return wb.session


def _repl_inspect(wb: Workbench, head: str, line: str, say) -> None:
    if head == "po":
        for i, po in enumerate(wb.pog.pos):
            cursor = ">" if i == wb.index else " "
            proved = "*" if po.name in wb.proved else " "
            say(f"{cursor}{proved} {i:>3}  {po.name}  [{po.group.value}]")
        return

    session = _require_session(wb)
    if head == "ctx":
        for c in session.contexts:
            marker = ">" if c.name == session.current_context else " "
            say(f"{marker} {c.name} ({len(c.members)})")
    elif head == "lex":
        for l in session.lexicons:
            marker = ">" if l.name == session.current_lexicon else " "
            say(f"{marker} {l.name} ({len(l.ids)}): {' '.join(sorted(l.ids))}")
    elif head == "hyp":
        parts = line.split()
        name = parts[1] if len(parts) > 1 else session.current_context
        ctx = session.context(name)
        if ctx is None:
            raise CommandError(f"unknown context: {name}")
        from .formula import print_formula

        for h in session.po.hypotheses:
            if h.id in ctx.members:
                mark = "*" if h.id in session.selected else " "
                say(f"{mark} {h.id} [{h.origin.value}] {print_formula(h.formula)}")
    elif head == "lemma":
        from .provers import export_lemma

        say(export_lemma(current_lemma(session)).rstrip("\n"))
    elif head == "script":
        for entry in session.log:
            say(entry)
    elif head == "save-script":
        parts = line.split(None, 1)
        if len(parts) < 2:
            raise CommandError("save-script needs a path")
        path = Path(parts[1].strip())
        path.write_text("\n".join(session.log) + ("\n" if session.log else ""), encoding="utf-8")
        say(f"saved {len(session.log)} commands to {path}")


# ---------------------------------------------------------------------------
# replay

def _cmd_replay(args) -> int:
    pog = load_pog(args.pog)
    script_text = Path(args.script).read_text(encoding="utf-8")
    script = parse_script(script_text)
    registry = discover_provers(_registry_path(args.registry))
    mode = KEEP_GOING if args.keep_going else ABORT_ON_ERROR
    try:
        report = run_replay(
            script, pog, selector=args.pos, mode=mode,
            registry=registry, stop_on_valid=args.stop_on_valid,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if args.json:
        print(json.dumps(replay_view(report), indent=2))
    else:
        for e in report.entries:
            verdicts = ""
            if e.prover_result is not None:
                verdicts = " ".join(f"{n}:{v.kind}" for n, v in e.prover_result.verdicts)
            status = f"error: {e.error}" if e.error else (
                f"skipped: {', '.join(e.skipped)}" if e.skipped else "ok"
            )
            print(f"{e.po_name:<24} |S|={e.lemma_size:<6} {status:<32} {verdicts}")

    has_pr = any(c.name == "pr" for c in script.commands)
    if has_pr:
        return 0 if report.all_proved else 2
    return 0 if not report.any_error else 2


# ---------------------------------------------------------------------------
# generate

def _cmd_generate(args) -> int:
    try:
        pog = generate_synthetic(args.pos, args.hyps, args.relevant_fraction, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    save_pog(pog, args.out)
    print(
        f"wrote {len(pog.pos)} proof obligations x {args.hyps} hypotheses "
        f"(seed {args.seed}) to {args.out}"
    )
    return 0


# ---------------------------------------------------------------------------
# provers

def _cmd_provers(args) -> int:
    registry = discover_provers(_registry_path(args.registry))
    if args.json:
        print(json.dumps([prover_view(p) for p in registry], indent=2))
    else:
        for p in registry:
            status = "enabled" if p.enabled else f"disabled ({p.note or 'by registry'})"
            command = p.command_template or "(in-process propositional checker)"
            print(f"{p.name:<12} {status:<40} timeout={p.timeout_s:g}s  {command}")
    if args.provers_command == "check":
        return 0 if all(p.enabled for p in registry) else 2
    return 0


# ---------------------------------------------------------------------------
# serve

def _cmd_serve(args) -> int:
    from .service import serve

    serve(
        args.pog,
        registry_path=_registry_path(args.registry),
        host=args.host,
        port=args.port,
        ui_dir=args.ui_dir,
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
