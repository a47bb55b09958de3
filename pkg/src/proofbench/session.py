"""Interactive selection state over one proof obligation.

A session holds the obligation, the named contexts and lexicons, the
current context/lexicon, and the accumulating set of selected hypotheses
from which the current lemma is read off. Commands are pure: each returns
a fresh state and appends its canonical text to the replayable log;
condition violations raise CommandError and leave the state untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .formula import Formula, free_identifiers, is_valid_identifier
from .pomodel import (
    Hypothesis,
    PogFile,
    ProofObligation,
    goal_lexicon,
    predefined_contexts,
)
from .script import Command, format_command


class CommandError(Exception):
    """A command's side condition failed; the session state is unchanged."""


@dataclass(frozen=True)
class Context:
    name: str
    members: frozenset[str]


@dataclass(frozen=True)
class Lexicon:
    name: str
    ids: frozenset[str]


@dataclass(frozen=True)
class Lemma:
    hypotheses: tuple[Hypothesis, ...]
    goal: Formula


@dataclass(frozen=True)
class SessionState:
    po: ProofObligation
    contexts: tuple[Context, ...]
    lexicons: tuple[Lexicon, ...]
    current_context: str
    current_lexicon: str
    selected: frozenset[str]
    log: tuple[str, ...]
    next_context_index: int
    next_lexicon_index: int
    predefined_context_names: frozenset[str]
    # static per obligation, computed once at open
    fv_by_id: dict[str, frozenset[str]]
    all_free_ids: frozenset[str]

    def context(self, name: str) -> Context | None:
        for c in self.contexts:
            if c.name == name:
                return c
        return None

    def lexicon(self, name: str) -> Lexicon | None:
        for l in self.lexicons:
            if l.name == name:
                return l
        return None

    @property
    def current_context_members(self) -> frozenset[str]:
        ctx = self.context(self.current_context)
        assert ctx is not None
        return ctx.members

    @property
    def current_lexicon_ids(self) -> frozenset[str]:
        lex = self.lexicon(self.current_lexicon)
        assert lex is not None
        return lex.ids


def open_po(pog: PogFile, index: int) -> SessionState:
    """Fresh session: pre-defined contexts, the goal lexicon, current
    context ``local``, current lexicon ``goal``, nothing selected."""
    if not 0 <= index < len(pog.pos):
        raise IndexError(f"proof obligation index {index} out of range")
    po = pog.pos[index]
    contexts = tuple(
        Context(name, members) for name, members in predefined_contexts(po).items()
    )
    lexicons = (Lexicon("goal", goal_lexicon(po)),)
    fv_by_id = {h.id: free_identifiers(h.formula) for h in po.hypotheses}
    all_free = frozenset().union(*fv_by_id.values()) if fv_by_id else frozenset()
    state = SessionState(
        po=po,
        contexts=contexts,
        lexicons=lexicons,
        current_context="local",
        current_lexicon="goal",
        selected=frozenset(),
        log=(),
        next_context_index=1,
        next_lexicon_index=1,
        predefined_context_names=frozenset(c.name for c in contexts),
        fv_by_id=fv_by_id,
        all_free_ids=all_free | free_identifiers(po.goal),
    )
    _check(state)
    return state


def _check(state: SessionState) -> None:
    """Structural invariants, enforced after every command."""
    hyp_ids = frozenset(state.fv_by_id)
    assert state.selected <= hyp_ids
    assert state.context(state.current_context) is not None
    assert state.lexicon(state.current_lexicon) is not None
    for c in state.contexts:
        assert c.members <= hyp_ids, f"context {c.name} escapes the obligation"
    for l in state.lexicons:
        assert l.ids <= state.all_free_ids, f"lexicon {l.name} escapes the obligation"
    assert state.predefined_context_names <= {c.name for c in state.contexts}


def _logged(state: SessionState, cmd: Command, **changes) -> SessionState:
    new = replace(state, log=state.log + (format_command(cmd),), **changes)
    _check(new)
    return new


def cmd_ah(state: SessionState) -> SessionState:
    """Add the current context's hypotheses to the selection."""
    return _logged(
        state, Command("ah"), selected=state.selected | state.current_context_members
    )


def cmd_dh(state: SessionState) -> SessionState:
    """Remove the current context's hypotheses from the selection."""
    return _logged(
        state, Command("dh"), selected=state.selected - state.current_context_members
    )


def cmd_chctx(state: SessionState, name: str) -> SessionState:
    if state.context(name) is None:
        raise CommandError(f"unknown context: {name}")
    return _logged(state, Command("chctx", (name,)), current_context=name)


def cmd_chlex(state: SessionState, name: str) -> SessionState:
    if state.lexicon(name) is None:
        raise CommandError(f"unknown lexicon: {name}")
    return _logged(state, Command("chlex", (name,)), current_lexicon=name)


def _fresh_name(prefix: str, taken: set[str], counter: int) -> tuple[str, int]:
    k = counter
    while f"{prefix}{k}" in taken:
        k += 1
    return f"{prefix}{k}", k + 1


def _creation_name(
    prefix: str, counter: int, as_name: str | None, taken: set[str]
) -> tuple[str, int]:
    if as_name is None:
        return _fresh_name(prefix, taken, counter)
    if not is_valid_identifier(as_name):
        raise CommandError(f"bad name: {as_name}")
    if as_name in taken:
        raise CommandError(f"name already in use: {as_name}")
    return as_name, counter


def cmd_mklex(state: SessionState, as_name: str | None = None) -> SessionState:
    """New lexicon from the free identifiers of the current context;
    it becomes the current lexicon."""
    ids = frozenset().union(
        *(state.fv_by_id[h] for h in state.current_context_members)
    )
    if not ids:
        raise CommandError(
            f"the current context {state.current_context} has no free identifiers"
        )
    taken = {l.name for l in state.lexicons}
    name, counter = _creation_name("lex_", state.next_lexicon_index, as_name, taken)
    return _logged(
        state,
        Command("mklex", as_name=as_name),
        lexicons=state.lexicons + (Lexicon(name, ids),),
        current_lexicon=name,
        next_lexicon_index=counter,
    )


def cmd_mklex_ids(
    state: SessionState, ids: tuple[str, ...], as_name: str | None = None
) -> SessionState:
    """New lexicon with exactly the given identifiers, which must all belong
    to the current lexicon; it becomes the current lexicon."""
    if not ids:
        raise CommandError("mklex needs at least one identifier")
    current = state.current_lexicon_ids
    for i in ids:
        if i not in current:
            raise CommandError(
                f"identifier {i} is not in the current lexicon {state.current_lexicon}"
            )
    taken = {l.name for l in state.lexicons}
    name, counter = _creation_name("lex_", state.next_lexicon_index, as_name, taken)
    return _logged(
        state,
        Command("mklex", tuple(ids), as_name),
        lexicons=state.lexicons + (Lexicon(name, frozenset(ids)),),
        current_lexicon=name,
        next_lexicon_index=counter,
    )


def _add_context(
    state: SessionState, cmd: Command, members: frozenset[str], as_name: str | None
) -> SessionState:
    taken = {c.name for c in state.contexts}
    name, counter = _creation_name("ctx_", state.next_context_index, as_name, taken)
    return _logged(
        state,
        cmd,
        contexts=state.contexts + (Context(name, members),),
        current_context=name,
        next_context_index=counter,
    )


def cmd_mkctx_some(state: SessionState, as_name: str | None = None) -> SessionState:
    """New context: hypotheses of the current context sharing at least one
    free identifier with the current lexicon; becomes the current context."""
    lex = state.current_lexicon_ids
    members = frozenset(
        h for h in state.current_context_members if state.fv_by_id[h] & lex
    )
    if not members:
        raise CommandError(
            f"no hypothesis in {state.current_context} shares an identifier "
            f"with lexicon {state.current_lexicon}"
        )
    return _add_context(state, Command("mkctx", ("Some",), as_name), members, as_name)


def cmd_mkctx_all(state: SessionState, as_name: str | None = None) -> SessionState:
    """New context: hypotheses of the current context whose free identifiers
    include the whole current lexicon; becomes the current context."""
    lex = state.current_lexicon_ids
    members = frozenset(
        h for h in state.current_context_members if lex <= state.fv_by_id[h]
    )
    if not members:
        raise CommandError(
            f"no hypothesis in {state.current_context} covers all of "
            f"lexicon {state.current_lexicon}"
        )
    return _add_context(state, Command("mkctx", ("All",), as_name), members, as_name)


def cmd_mkctx_ids(
    state: SessionState, hyp_ids: tuple[str, ...], as_name: str | None = None
) -> SessionState:
    """New context with exactly the given hypotheses, which must all belong
    to the current context; becomes the current context."""
    if not hyp_ids:
        raise CommandError("mkctx needs at least one hypothesis id")
    current = state.current_context_members
    for h in hyp_ids:
        if h not in current:
            raise CommandError(
                f"hypothesis {h} is not in the current context {state.current_context}"
            )
    return _add_context(
        state, Command("mkctx", tuple(hyp_ids), as_name), frozenset(hyp_ids), as_name
    )


def current_lemma(state: SessionState) -> Lemma:
    """The selected hypotheses in obligation order, with the original goal."""
    return Lemma(
        hypotheses=tuple(h for h in state.po.hypotheses if h.id in state.selected),
        goal=state.po.goal,
    )


def apply_command(state: SessionState, cmd: Command) -> SessionState:
    """Dispatch one of the nine selection commands. Navigation and prover
    commands are driven by the workbench, not by the session."""
    if cmd.name == "ah":
        return cmd_ah(state)
    if cmd.name == "dh":
        return cmd_dh(state)
    if cmd.name == "chctx":
        return cmd_chctx(state, cmd.args[0])
    if cmd.name == "chlex":
        return cmd_chlex(state, cmd.args[0])
    if cmd.name == "mklex":
        if cmd.args:
            return cmd_mklex_ids(state, cmd.args, cmd.as_name)
        return cmd_mklex(state, cmd.as_name)
    if cmd.name == "mkctx":
        if cmd.args == ("Some",):
            return cmd_mkctx_some(state, cmd.as_name)
        if cmd.args == ("All",):
            return cmd_mkctx_all(state, cmd.as_name)
        return cmd_mkctx_ids(state, cmd.args, cmd.as_name)
    raise ValueError(f"not a session command: {cmd.name}")


class Workbench:
    """Navigation cursor over a .pog file plus the live session.

    Starts with no obligation open; ``ne`` opens the first one. Moving to
    another obligation archives the finished session's log under its name
    and opens a fresh state, so scripts are the only cross-obligation
    carrier of selection steps.
    """

    def __init__(self, pog: PogFile):
        self.pog = pog
        self.index: int = -1
        self.session: SessionState | None = None
        self.archive: list[tuple[str, tuple[str, ...]]] = []
        self.proved: set[str] = set()

    def open_index(self, index: int) -> None:
        self._archive_current()
        self.session = open_po(self.pog, index)
        self.index = index

    def _archive_current(self) -> None:
        if self.session is not None:
            self.archive.append((self.session.po.name, self.session.log))

    def next_po(self) -> tuple[bool, str]:
        if self.index + 1 >= len(self.pog.pos):
            return False, "already at the last proof obligation"
        self.open_index(self.index + 1)
        return True, f"opened {self.session.po.name}"

    def prev_po(self) -> tuple[bool, str]:
        if self.index <= 0:
            return False, "already at the first proof obligation"
        self.open_index(self.index - 1)
        return True, f"opened {self.session.po.name}"

    def execute(self, cmd: Command) -> tuple[bool, str | None]:
        """Run a selection or navigation command.

        Returns (state_changed, message). Raises CommandError on condition
        violations; ``pr`` is the caller's job (it needs a prover registry).
        """
        if cmd.name == "ne":
            return self.next_po()
        if cmd.name == "pv":
            return self.prev_po()
        if cmd.name == "pr":
            raise ValueError("pr is dispatched by the caller, not the workbench")
        if self.session is None:
            raise CommandError("no proof obligation open (use ne to open one)")
        self.session = apply_command(self.session, cmd)
        return True, None
