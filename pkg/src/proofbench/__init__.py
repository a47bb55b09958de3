"""proofbench: trim machine-generated proof obligations down to lemmas by
scripted hypothesis selection, and dispatch them to a prover portfolio."""

__version__ = "0.1.0"

from .formula import (
    Apply,
    Binary,
    BoolLit,
    Formula,
    FormulaSyntaxError,
    Ident,
    IntLit,
    Quantified,
    Unary,
    free_identifiers,
    parse_formula,
    print_formula,
)
from .pomodel import (
    Hypothesis,
    OriginTag,
    PoGroup,
    PogError,
    PogFile,
    ProofObligation,
    generate_synthetic,
    goal_lexicon,
    load_pog,
    predefined_contexts,
    save_pog,
)
from .provers import (
    BUILTIN_CONFIG,
    PortfolioResult,
    ProverConfig,
    ProverVerdict,
    RegistryError,
    builtin_prove,
    discover_provers,
    export_lemma,
    lemma_fingerprint,
    run_portfolio,
)
from .replay import PoReplay, ReplayReport, replay, select_pos
from .script import Command, Script, ScriptError, format_command, format_script, parse_script
from .session import (
    CommandError,
    Context,
    Lemma,
    Lexicon,
    SessionState,
    Workbench,
    apply_command,
    current_lemma,
    open_po,
)

__all__ = [name for name in dir() if not name.startswith("_")]
