"""Tensor complementarity toolkit.

Classify tensors as (strictly) semi-positive or copositive, solve small
TCP(q, A) instances, and run seeded verification batteries.

The dispatchers ``classify.classify`` and ``generate.generate`` live in their
submodules; re-exporting them here would shadow the submodule names.
"""
from .classify import (
    COPOSITIVE, PROPERTIES, SEMI_POSITIVE, STRICTLY_COPOSITIVE, STRICTLY_SEMI_POSITIVE,
    SearchBudget, Status, Tolerances, Verdict, classify_copositive,
    classify_semi_positive, classify_strictly_semi_positive, feasibility_search, simplex_minimize,
)
from .generate import GenSpec, gen_instance, sample_q
from .io import FormatError, load, store
from .solve import (
    SolveBudget, TcpInstance, counterexample_q, q_tensor_probe, solve_any, solve_fb_newton,
    solve_support_enum, verify_solution,
)
from .tensor import (
    Tensor, as_tensor, build_tensor, embed, identity, map_apply, map_jacobian, poly_eval,
    principal_subtensor, symmetrize, zeros,
)

__version__ = "0.1.0"
