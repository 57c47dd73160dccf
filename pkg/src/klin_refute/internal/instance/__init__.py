"""k-LIN instances: model, generators, evaluation and the text format."""

from .codec import dump, load, parse, serialize
from .evaluate import brute_force_val, iter_assignments, phi_advantage, satisfied, val_at
from .generate import clustered_lhs, gen_planted, gen_random, gen_semirandom
from .model import (
    Equation,
    KLinInstance,
    SparseVec,
    vec_add,
    vec_neg,
    vec_scale,
    vec_sub,
)
