"""Max-entropy pseudo-expectations over fields, their checks and the exhaustive oracles."""

from .boolean import BooleanPE, boolean_value, indicator_objective, to_boolean_pe
from .codec import dump_pe, load_pe, parse_pe, save_pe
from .expansion import ExpansionResult, Refutation, expansion_check, find_refutation_exhaustive
from .pseudo import (
    ClosureOrder,
    PEStatus,
    PseudoExpectation,
    Step,
    build_max_entropy,
    replay_derivations,
)
from .verify import equivalence_classes, index_vectors, moment_matrix, verify_pe
