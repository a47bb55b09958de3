"""Shared random generators and independent oracles.

The oracles here deliberately re-derive expected behavior through
different machinery than the package uses: an occurrence walker for free
identifiers, a dict-based model of the command semantics, a product-
enumeration truth table for the propositional checker, and plain set
comprehensions for the relevance filters.
"""

from __future__ import annotations

import itertools
import random

from proofbench.formula import (
    Apply,
    Binary,
    BoolLit,
    Formula,
    Ident,
    IntLit,
    Quantified,
    Unary,
    print_formula,
)
from proofbench.pomodel import Hypothesis, OriginTag, PoGroup, PogFile, ProofObligation
from proofbench.script import Command
from proofbench.session import CommandError, SessionState, apply_command, open_po

IDENT_POOL = [
    "a", "b", "c", "d", "x", "y", "z", "u", "v", "w",
    "S", "T", "f", "g", "cnt", "lim", "val", "k1", "m2", "q9",
]

BINARY_OP_LIST = [
    "&", "or", "=>", "<=>",
    "=", "/=", "<", "<=", ">", ">=", ":", "/:", "<:", "<<:",
    "+", "-", "*", "/", "mod", "|->",
]

ORIGIN_LIST = list(OriginTag)


# ---------------------------------------------------------------------------
# Random formulas

def random_formula(rng: random.Random, depth: int) -> Formula:
    if depth <= 0:
        r = rng.random()
        if r < 0.55:
            return Ident(rng.choice(IDENT_POOL))
        if r < 0.85:
            return IntLit(rng.randrange(0, 50))
        return BoolLit(rng.random() < 0.5)
    r = rng.random()
    if r < 0.40:
        op = rng.choice(BINARY_OP_LIST)
        return Binary(op, random_formula(rng, depth - 1), random_formula(rng, depth - 1))
    if r < 0.52:
        return Unary(rng.choice(["not", "neg"]), random_formula(rng, depth - 1))
    if r < 0.64:
        kind = rng.choice(["forall", "exists"])
        bound = tuple(rng.sample(IDENT_POOL, rng.randrange(1, 3)))
        return Quantified(kind, bound, random_formula(rng, depth - 1))
    if r < 0.76:
        args = tuple(
            random_formula(rng, depth - 2 if depth >= 2 else 0)
            for _ in range(rng.randrange(1, 4))
        )
        return Apply(random_formula(rng, depth - 2 if depth >= 2 else 0), args)
    return random_formula(rng, depth - 1)


# ---------------------------------------------------------------------------
# Free-identifier oracle: explicit occurrence walk with a binder-scope list

def fv_oracle(f: Formula) -> frozenset[str]:
    free: set[str] = set()

    def walk(node: Formula, binders: list[set[str]]) -> None:
        if isinstance(node, Ident):
            if not any(node.name in scope for scope in binders):
                free.add(node.name)
        elif isinstance(node, (IntLit, BoolLit)):
            pass
        elif isinstance(node, Unary):
            walk(node.operand, binders)
        elif isinstance(node, Binary):
            walk(node.left, binders)
            walk(node.right, binders)
        elif isinstance(node, Quantified):
            walk(node.body, binders + [set(node.bound)])
        elif isinstance(node, Apply):
            walk(node.fn, binders)
            for a in node.args:
                walk(a, binders)

    walk(f, [])
    return frozenset(free)


# ---------------------------------------------------------------------------
# Random proof obligations and session states

def random_po(
    rng: random.Random,
    name: str = "rand.1",
    min_hyps: int = 0,
    max_hyps: int = 10,
) -> ProofObligation:
    n = rng.randrange(min_hyps, max_hyps + 1)
    hyps = tuple(
        Hypothesis(f"h{i + 1}", rng.choice(ORIGIN_LIST), random_formula(rng, rng.randrange(0, 4)))
        for i in range(n)
    )
    goal = random_formula(rng, rng.randrange(0, 4))
    return ProofObligation(name, PoGroup.OPERATIONS, hyps, goal)


COMMAND_KINDS = [
    "ah", "dh", "chctx", "chlex", "mklex", "mklex_ids",
    "mkctx_some", "mkctx_all", "mkctx_ids",
]


def random_command(
    rng: random.Random, state: SessionState, kind: str | None = None
) -> Command:
    """A command plausible in ``state`` (still sometimes violating a condition)."""
    if kind is None:
        kind = rng.choice(COMMAND_KINDS)
    if kind in ("ah", "dh"):
        return Command(kind)
    if kind == "chctx":
        names = [c.name for c in state.contexts] + ["missing_ctx"]
        return Command("chctx", (rng.choice(names),))
    if kind == "chlex":
        names = [l.name for l in state.lexicons] + ["missing_lex"]
        return Command("chlex", (rng.choice(names),))
    if kind == "mklex":
        return Command("mklex")
    if kind == "mklex_ids":
        pool = sorted(state.current_lexicon_ids) + ["stranger"]
        k = rng.randrange(1, min(3, len(pool)) + 1)
        return Command("mklex", tuple(rng.sample(pool, k)))
    if kind == "mkctx_some":
        return Command("mkctx", ("Some",))
    if kind == "mkctx_all":
        return Command("mkctx", ("All",))
    pool = sorted(state.current_context_members) + ["h999"]
    k = rng.randrange(1, min(3, len(pool)) + 1)
    return Command("mkctx", tuple(rng.sample(pool, k)))


def random_state(rng: random.Random, warmup: int = 6) -> SessionState:
    po = random_po(rng)
    pog = PogFile("randomized", (po,))
    state = open_po(pog, 0)
    # bias toward wide contexts and non-trivial lexicons so that the
    # filtering commands succeed often enough to exercise their effects
    if rng.random() < 0.6:
        state = apply_command(state, Command("chctx", ("all",)))
        try:
            state = apply_command(state, Command("mklex"))
        except CommandError:
            pass
    for _ in range(rng.randrange(0, warmup + 1)):
        try:
            state = apply_command(state, random_command(rng, state))
        except CommandError:
            pass
    return state


# ---------------------------------------------------------------------------
# Independent model of the command semantics (dict-based, fv via the oracle)

def table1_expected(state: SessionState, cmd: Command):
    """Expected outcome of one command: either ("error",) or a dict with the
    expected contexts, lexicons, current names and selection."""
    contexts = {c.name: c.members for c in state.contexts}
    lexicons = {l.name: l.ids for l in state.lexicons}
    c, l, s = state.current_context, state.current_lexicon, state.selected
    fv = {h.id: fv_oracle(h.formula) for h in state.po.hypotheses}

    def ok(**overrides):
        out = {"contexts": contexts, "lexicons": lexicons, "c": c, "l": l, "s": s}
        out.update(overrides)
        return out

    def fresh(prefix: str, counter: int, taken) -> str:
        k = counter
        while f"{prefix}{k}" in taken:
            k += 1
        return f"{prefix}{k}"

    if cmd.name == "ah":
        return ok(s=s | contexts[c])
    if cmd.name == "dh":
        return ok(s=s - contexts[c])
    if cmd.name == "chctx":
        if cmd.args[0] not in contexts:
            return ("error",)
        return ok(c=cmd.args[0])
    if cmd.name == "chlex":
        if cmd.args[0] not in lexicons:
            return ("error",)
        return ok(l=cmd.args[0])
    if cmd.name == "mklex":
        if cmd.args:
            if any(i not in lexicons[l] for i in cmd.args):
                return ("error",)
            ids = frozenset(cmd.args)
        else:
            ids = frozenset().union(*(fv[h] for h in contexts[c])) if contexts[c] else frozenset()
            if not ids:
                return ("error",)
        name = cmd.as_name or fresh("lex_", state.next_lexicon_index, lexicons)
        if cmd.as_name is not None and cmd.as_name in lexicons:
            return ("error",)
        return ok(lexicons={**lexicons, name: ids}, l=name)
    if cmd.name == "mkctx":
        if cmd.args == ("Some",):
            members = frozenset(h for h in contexts[c] if fv[h] & lexicons[l])
        elif cmd.args == ("All",):
            members = frozenset(h for h in contexts[c] if lexicons[l] <= fv[h])
        else:
            if any(h not in contexts[c] for h in cmd.args):
                return ("error",)
            members = frozenset(cmd.args)
        if not members:
            return ("error",)
        name = cmd.as_name or fresh("ctx_", state.next_context_index, contexts)
        if cmd.as_name is not None and cmd.as_name in contexts:
            return ("error",)
        return ok(contexts={**contexts, name: members}, c=name)
    raise ValueError(cmd.name)


# ---------------------------------------------------------------------------
# Relevance-filter oracles

def brute_force_some(po: ProofObligation, context_ids, lexicon_ids) -> frozenset[str]:
    return frozenset(
        h.id
        for h in po.hypotheses
        if h.id in context_ids and fv_oracle(h.formula) & set(lexicon_ids)
    )


def brute_force_all(po: ProofObligation, context_ids, lexicon_ids) -> frozenset[str]:
    return frozenset(
        h.id
        for h in po.hypotheses
        if h.id in context_ids and set(lexicon_ids) <= fv_oracle(h.formula)
    )


# ---------------------------------------------------------------------------
# Propositional truth-table oracle

_PROP_OPS = ("&", "or", "=>", "<=>")


def _skeleton(f: Formula, table: dict[str, int]):
    if isinstance(f, BoolLit):
        return ("c", f.value)
    if isinstance(f, Unary) and f.op == "not":
        return ("n", _skeleton(f.operand, table))
    if isinstance(f, Binary) and f.op in _PROP_OPS:
        return (f.op, _skeleton(f.left, table), _skeleton(f.right, table))
    key = print_formula(f)
    if key not in table:
        table[key] = len(table)
    return ("a", table[key])


def _eval(node, valuation) -> bool:
    tag = node[0]
    if tag == "c":
        return node[1]
    if tag == "a":
        return valuation[node[1]]
    if tag == "n":
        return not _eval(node[1], valuation)
    left, right = _eval(node[1], valuation), _eval(node[2], valuation)
    if tag == "&":
        return left and right
    if tag == "or":
        return left or right
    if tag == "=>":
        return (not left) or right
    return left == right


def _atom_indices(node, out: set[int]) -> None:
    if node[0] == "a":
        out.add(node[1])
    elif node[0] == "n":
        _atom_indices(node[1], out)
    elif node[0] in _PROP_OPS:
        _atom_indices(node[1], out)
        _atom_indices(node[2], out)


def truth_table_verdict(hypotheses: list[Formula], goal: Formula) -> str:
    """Exhaustive oracle for the builtin checker; usable up to ~14 atoms."""
    table: dict[str, int] = {}
    hyp_nodes = [_skeleton(f, table) for f in hypotheses]
    goal_node = _skeleton(goal, table)
    n = len(table)
    assert n <= 14, "oracle is for small lemmas"
    tautology = True
    for bits in itertools.product((False, True), repeat=n):
        if all(_eval(h, bits) for h in hyp_nodes) and not _eval(goal_node, bits):
            tautology = False
            break
    if tautology:
        return "valid"
    goal_atoms: set[int] = set()
    _atom_indices(goal_node, goal_atoms)
    hyp_atoms: set[int] = set()
    for h in hyp_nodes:
        _atom_indices(h, hyp_atoms)
    return "countermodel" if goal_atoms <= hyp_atoms else "unknown"


_PROP_ATOMS = [Binary(">", Ident(f"p{i}"), IntLit(0)) for i in range(10)]


def random_prop_formula(rng: random.Random, depth: int, n_atoms: int) -> Formula:
    if depth <= 0 or rng.random() < 0.3:
        return _PROP_ATOMS[rng.randrange(n_atoms)]
    r = rng.random()
    if r < 0.2:
        return Unary("not", random_prop_formula(rng, depth - 1, n_atoms))
    op = rng.choice(_PROP_OPS)
    return Binary(
        op,
        random_prop_formula(rng, depth - 1, n_atoms),
        random_prop_formula(rng, depth - 1, n_atoms),
    )


def random_prop_lemma(rng: random.Random):
    """(hypotheses, goal) over at most 10 distinct comparison atoms."""
    n_atoms = rng.randrange(1, 11)
    hyps = [
        random_prop_formula(rng, rng.randrange(0, 4), n_atoms)
        for _ in range(rng.randrange(0, 5))
    ]
    goal = random_prop_formula(rng, rng.randrange(0, 4), n_atoms)
    return hyps, goal
