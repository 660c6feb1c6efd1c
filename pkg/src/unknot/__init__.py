"""Unknot detection toolkit.

Decides whether a knot diagram is the unknot by translating it into an
involutory quandle presentation and racing two engines over it: an
equational theorem prover that tries to derive the triviality goal, and a
finite model finder that hunts for a small quandle countermodel.  Either
answer is certified (a replayable proof, or a machine-checked model), and
classical coloring invariants cross-check the model side.  A Reidemeister
move engine transforms labelled diagrams and extracts the equations each
move contributes.
"""

from .budget import SearchBudget
from .diagrams import (
    KnotDiagram,
    ParseError,
    RelationInput,
    load_input,
    parse_gauss,
    parse_pd,
    parse_relations,
    serialize_gauss,
    serialize_pd,
)
from .invariants import (
    ColoringReport,
    determinant,
    dihedral_countermodel,
    dihedral_quandle,
    fox_colorings,
    smallest_prime_divisor,
)
from .modelfind import (
    FiniteQuandle,
    SearchOutcome,
    check_model,
    check_model_report,
    find_minimal_countermodel,
    find_model,
    format_interpretation,
)
from .moves import (
    LabelledTrace,
    MoveError,
    MoveRecord,
    MoveSpec,
    TraceReport,
    apply_move,
    check_trace_properties,
    parse_move,
    parse_moves,
    trace_equations,
    subset_axiom_refute,
)
from .presentation import (
    Presentation,
    arcs_of,
    format_prover_input,
    presentation_from_relations,
    presentation_of,
    presentation_of_input,
)
from .proofcheck import verify_proof, verify_proof_report
from .prover import (
    ALL_AXIOMS,
    Proof,
    ProveOutcome,
    format_proof,
    saturate,
    saturate_equations,
)
from .runner import DecisionReport, batch_decide, decide, prove, refute

__version__ = "0.1.0"

__all__ = [
    "ALL_AXIOMS",
    "ColoringReport",
    "DecisionReport",
    "FiniteQuandle",
    "KnotDiagram",
    "LabelledTrace",
    "MoveError",
    "MoveRecord",
    "MoveSpec",
    "ParseError",
    "Presentation",
    "Proof",
    "ProveOutcome",
    "RelationInput",
    "SearchBudget",
    "SearchOutcome",
    "TraceReport",
    "apply_move",
    "arcs_of",
    "batch_decide",
    "check_model",
    "check_model_report",
    "check_trace_properties",
    "decide",
    "determinant",
    "dihedral_countermodel",
    "dihedral_quandle",
    "find_minimal_countermodel",
    "find_model",
    "format_interpretation",
    "format_proof",
    "format_prover_input",
    "fox_colorings",
    "load_input",
    "parse_gauss",
    "parse_move",
    "parse_moves",
    "parse_pd",
    "parse_relations",
    "presentation_from_relations",
    "presentation_of",
    "presentation_of_input",
    "prove",
    "refute",
    "trace_equations",
    "saturate",
    "saturate_equations",
    "serialize_gauss",
    "serialize_pd",
    "smallest_prime_divisor",
    "subset_axiom_refute",
    "verify_proof",
    "verify_proof_report",
    "__version__",
]
