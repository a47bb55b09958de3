"""Proof obligations: origin-tagged hypotheses, the .pog XML dialect,
pre-defined contexts, and a synthetic corpus generator for benchmarks.
"""

from __future__ import annotations

import math
import random
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Union

from .formula import (
    Binary,
    Formula,
    FormulaSyntaxError,
    Ident,
    IntLit,
    Quantified,
    free_identifiers,
    parse_formula,
    print_formula,
)


class OriginTag(Enum):
    """Template clause a hypothesis stems from in its B component."""

    CONSTRAINTS = "constraints"
    ABSTRACT_PROPERTIES = "abstract_properties"
    PROPERTIES = "properties"
    SEEN_PROPERTIES = "seen_properties"
    INCLUDED_PROPERTIES = "included_properties"
    INCLUDED_INVARIANTS = "included_invariants"
    SEEN_INVARIANTS = "seen_invariants"
    INVARIANTS = "invariants"
    ABSTRACT_PRECONDITION = "abstract_precondition"
    LOCAL = "local"
    B_DEFINITIONS = "b_definitions"


class PoGroup(Enum):
    ASSERTIONS = "assertions"
    INITIALIZATION = "initialization"
    OPERATIONS = "operations"
    WELL_DEFINEDNESS = "well_definedness"


class PogError(ValueError):
    """Malformed .pog content or I/O-level load/save failure."""


@dataclass(frozen=True)
class Hypothesis:
    id: str
    origin: OriginTag
    formula: Formula
    typing: str | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise PogError("hypothesis id must be non-empty")


@dataclass(frozen=True)
class ProofObligation:
    name: str
    group: PoGroup
    hypotheses: tuple[Hypothesis, ...]
    goal: Formula
    planted: frozenset[str] | None = None  # synthetic corpora only

    def __post_init__(self) -> None:
        if not self.name:
            raise PogError("proof obligation name must be non-empty")
        seen: set[str] = set()
        for h in self.hypotheses:
            if h.id in seen:
                raise PogError(f"duplicate hypothesis id {h.id!r} in {self.name!r}")
            seen.add(h.id)
        if self.planted is not None:
            stray = self.planted - seen
            if stray:
                raise PogError(
                    f"planted ids not among hypotheses of {self.name!r}: {sorted(stray)}"
                )

    def hypothesis(self, hyp_id: str) -> Hypothesis:
        for h in self.hypotheses:
            if h.id == hyp_id:
                return h
        raise KeyError(hyp_id)


@dataclass(frozen=True)
class PogFile:
    component_name: str
    pos: tuple[ProofObligation, ...]

    def __post_init__(self) -> None:
        names = [po.name for po in self.pos]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise PogError(f"duplicate proof obligation names: {dup}")

    def po_index(self, name: str) -> int:
        for i, po in enumerate(self.pos):
            if po.name == name:
                return i
        raise KeyError(name)


# ---------------------------------------------------------------------------
# File format

def load_pog(path: Union[str, Path]) -> PogFile:
    """Read a .pog file; all formulas parsed, ids and names validated."""
    try:
        tree = ET.parse(str(path))
    except OSError as exc:
        raise PogError(f"cannot read {path}: {exc}") from exc
    except ET.ParseError as exc:
        raise PogError(f"malformed XML in {path}: {exc}") from exc

    root = tree.getroot()
    if root.tag != "pog":
        raise PogError(f"expected <pog> root element, got <{root.tag}>")
    component = root.get("component")
    if component is None:
        raise PogError("<pog> element is missing the component attribute")

    pos = []
    for po_el in root:
        if po_el.tag != "po":
            raise PogError(f"unexpected <{po_el.tag}> element under <pog>")
        pos.append(_load_po(po_el))
    return PogFile(component_name=component, pos=tuple(pos))


def _load_po(po_el: ET.Element) -> ProofObligation:
    name = po_el.get("name")
    if not name:
        raise PogError("<po> element is missing the name attribute")
    group_text = po_el.get("group")
    try:
        group = PoGroup(group_text)
    except ValueError:
        raise PogError(f"unknown group {group_text!r} on proof obligation {name!r}") from None

    hyps: list[Hypothesis] = []
    goal: Formula | None = None
    planted: frozenset[str] | None = None
    for el in po_el:
        if el.tag == "hyp":
            hyp_id = el.get("id")
            if not hyp_id:
                raise PogError(f"<hyp> without id in proof obligation {name!r}")
            origin_text = el.get("origin")
            try:
                origin = OriginTag(origin_text)
            except ValueError:
                raise PogError(
                    f"unknown origin tag {origin_text!r} on hypothesis {hyp_id!r} "
                    f"of proof obligation {name!r}"
                ) from None
            try:
                f = parse_formula(el.text or "")
            except FormulaSyntaxError as exc:
                raise PogError(
                    f"bad formula in proof obligation {name!r}, hypothesis {hyp_id!r}: {exc}"
                ) from exc
            hyps.append(Hypothesis(hyp_id, origin, f, typing=el.get("typing")))
        elif el.tag == "goal":
            if goal is not None:
                raise PogError(f"multiple <goal> elements in proof obligation {name!r}")
            try:
                goal = parse_formula(el.text or "")
            except FormulaSyntaxError as exc:
                raise PogError(f"bad goal in proof obligation {name!r}: {exc}") from exc
        elif el.tag == "planted":
            ids = (el.get("ids") or "").split()
            planted = frozenset(ids)
        else:
            raise PogError(f"unexpected <{el.tag}> element in proof obligation {name!r}")
    if goal is None:
        raise PogError(f"proof obligation {name!r} has no goal")
    try:
        return ProofObligation(name, group, tuple(hyps), goal, planted=planted)
    except PogError:
        raise
    except ValueError as exc:
        raise PogError(str(exc)) from exc


def save_pog(pog: PogFile, path: Union[str, Path]) -> None:
    """Write ``pog`` to ``path``; formulas are canonicalized on the way out."""
    root = ET.Element("pog", component=pog.component_name)
    for po in pog.pos:
        po_el = ET.SubElement(root, "po", name=po.name, group=po.group.value)
        for h in po.hypotheses:
            attrs = {"id": h.id, "origin": h.origin.value}
            if h.typing is not None:
                attrs["typing"] = h.typing
            hyp_el = ET.SubElement(po_el, "hyp", attrs)
            hyp_el.text = print_formula(h.formula)
        goal_el = ET.SubElement(po_el, "goal")
        goal_el.text = print_formula(po.goal)
        if po.planted is not None:
            ET.SubElement(po_el, "planted", ids=" ".join(sorted(po.planted)))
    tree = ET.ElementTree(root)
    ET.indent(tree)
    try:
        tree.write(str(path), encoding="utf-8", xml_declaration=True)
    except OSError as exc:
        raise PogError(f"cannot write {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# Pre-defined selections

def predefined_contexts(po: ProofObligation) -> dict[str, frozenset[str]]:
    """Name -> hypothesis-id set for the contexts every session starts with.

    Order: ``all``, ``local``, ``global``, then one context per origin tag
    that is non-empty in the obligation (the ``local`` tag is already covered
    by the pre-defined ``local`` entry). Empty per-tag contexts are omitted.
    """
    all_ids = [h.id for h in po.hypotheses]
    by_tag: dict[OriginTag, list[str]] = {}
    for h in po.hypotheses:
        by_tag.setdefault(h.origin, []).append(h.id)
    local = by_tag.get(OriginTag.LOCAL, [])
    local_set = frozenset(local)

    contexts: dict[str, frozenset[str]] = {
        "all": frozenset(all_ids),
        "local": local_set,
        "global": frozenset(all_ids) - local_set,
    }
    for tag in OriginTag:
        if tag is OriginTag.LOCAL:
            continue
        ids = by_tag.get(tag)
        if ids:
            contexts[tag.value] = frozenset(ids)
    return contexts


def goal_lexicon(po: ProofObligation) -> frozenset[str]:
    """Identifier set of the pre-defined ``goal`` lexicon: fv of the goal."""
    return free_identifiers(po.goal)


# ---------------------------------------------------------------------------
# Synthetic corpora
#
# Each generated obligation hides a planted subset of hypotheses from which
# the goal follows propositionally; every planted hypothesis shares an
# identifier with the goal, the local hypotheses mention all of those
# identifiers, and the remaining hypotheses draw on disjoint identifier
# pools so relevance filters can be benchmarked against the planted ids.

_DECOY_TAG_WEIGHTS = [
    (OriginTag.CONSTRAINTS, 2),
    (OriginTag.ABSTRACT_PROPERTIES, 8),
    (OriginTag.PROPERTIES, 14),
    (OriginTag.SEEN_PROPERTIES, 30),
    (OriginTag.INCLUDED_PROPERTIES, 10),
    (OriginTag.INCLUDED_INVARIANTS, 8),
    (OriginTag.SEEN_INVARIANTS, 12),
    (OriginTag.INVARIANTS, 10),
    (OriginTag.ABSTRACT_PRECONDITION, 4),
    (OriginTag.B_DEFINITIONS, 2),
]

_TAG_PREFIX = {
    OriginTag.CONSTRAINTS: "prm",
    OriginTag.ABSTRACT_PROPERTIES: "apr",
    OriginTag.PROPERTIES: "prp",
    OriginTag.SEEN_PROPERTIES: "spr",
    OriginTag.INCLUDED_PROPERTIES: "ipr",
    OriginTag.INCLUDED_INVARIANTS: "iin",
    OriginTag.SEEN_INVARIANTS: "sin",
    OriginTag.INVARIANTS: "inv",
    OriginTag.ABSTRACT_PRECONDITION: "apc",
    OriginTag.B_DEFINITIONS: "bdf",
}


def generate_synthetic(
    n_pos: int, n_hyps: int, relevant_fraction: float, seed: int
) -> PogFile:
    """Deterministic benchmark corpus: ``n_pos`` obligations of ``n_hyps``
    hypotheses each, with ceil(relevant_fraction * n_hyps) planted ones."""
    if n_pos < 1:
        raise ValueError("n_pos must be >= 1")
    if n_hyps < 1:
        raise ValueError("n_hyps must be >= 1")
    if not 0.0 < relevant_fraction <= 1.0:
        raise ValueError("relevant_fraction must be in (0, 1]")
    rng = random.Random(seed)
    pos = tuple(
        _synthetic_po(rng, i, n_hyps, relevant_fraction) for i in range(n_pos)
    )
    return PogFile(component_name=f"synthetic_{seed}", pos=pos)


def _synthetic_po(
    rng: random.Random, index: int, n_hyps: int, relevant_fraction: float
) -> ProofObligation:
    n_relevant = min(n_hyps, math.ceil(relevant_fraction * n_hyps))
    n_local = min(2, n_hyps - n_relevant)
    n_decoy = n_hyps - n_relevant - n_local

    relevant_ids = [f"rv{index}_{j}" for j in range(n_relevant)]
    atoms = [Binary(">", Ident(name), IntLit(0)) for name in relevant_ids]

    entries: list[tuple[OriginTag, Formula, bool]] = []  # (origin, formula, planted)
    decoy_tags = [t for t, _ in _DECOY_TAG_WEIGHTS]
    decoy_weights = [w for _, w in _DECOY_TAG_WEIGHTS]
    for atom in atoms:
        tag = rng.choices(decoy_tags, weights=decoy_weights)[0]
        entries.append((tag, atom, True))

    op_var = f"use{index}"
    if n_local >= 1:
        total: Formula = Ident(relevant_ids[0])
        for name in relevant_ids[1:]:
            total = Binary("+", total, Ident(name))
        entries.append((OriginTag.LOCAL, Binary("<=", Ident(op_var), total), False))
    if n_local >= 2:
        entries.append((OriginTag.LOCAL, Binary("<=", IntLit(0), Ident(op_var)), False))

    counters: dict[OriginTag, int] = {}
    for _ in range(n_decoy):
        tag = rng.choices(decoy_tags, weights=decoy_weights)[0]
        k = counters.get(tag, 0)
        counters[tag] = k + 2
        entries.append((tag, _decoy_formula(rng, tag, index, k), False))

    rng.shuffle(entries)
    hyps = []
    planted = set()
    for n, (tag, f, is_planted) in enumerate(entries, start=1):
        hyp_id = f"h{n}"
        hyps.append(Hypothesis(hyp_id, tag, f))
        if is_planted:
            planted.add(hyp_id)

    goal: Formula = atoms[0]
    for atom in atoms[1:]:
        goal = Binary("&", goal, atom)
    return ProofObligation(
        name=f"op{index + 1}.1",
        group=PoGroup.OPERATIONS,
        hypotheses=tuple(hyps),
        goal=goal,
        planted=frozenset(planted),
    )


def _decoy_formula(rng: random.Random, tag: OriginTag, index: int, k: int) -> Formula:
    prefix = _TAG_PREFIX[tag]
    a = Ident(f"{prefix}{index}_{k}")
    b = Ident(f"{prefix}{index}_{k + 1}")
    shape = rng.randrange(5)
    if shape == 0:
        return Binary("<", a, Binary("+", b, IntLit(rng.randrange(1, 100))))
    if shape == 1:
        return Binary(":", a, b)
    if shape == 2:
        return Binary("=", a, Binary("*", b, IntLit(rng.randrange(2, 10))))
    if shape == 3:
        return Binary("/=", a, b)
    q = f"q{k}"
    return Quantified(
        "forall",
        (q,),
        Binary(
            "=>",
            Binary(":", Ident(q), a),
            Binary(">=", Binary("+", Ident(q), Ident(b.name)), IntLit(0)),
        ),
    )
