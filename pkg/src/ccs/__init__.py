"""CCS toolkit: SOS transitions, finite LTSs, bisimilarity and contraction checkers,
context classification and unique-solution harnesses."""

from .context import Classification, apply, classify, compose, context_step, iterate, parse_context
from .equiv import (
    Verdict,
    check,
    contraction,
    expansion,
    rooted_bisim,
    rooted_contraction,
    strong_bisim,
    weak_bisim,
)
from .lts import explore, saturate, to_dot, weak_lts
from .semantics import step, trace_holds
from .solutions import SystemSpec, is_solution, unique_solution
from .syntax import TAU, In, Out, parse, parse_definitions, pretty

__all__ = [
    "Classification", "SystemSpec", "TAU", "In", "Out", "Verdict",
    "apply", "check", "classify", "compose", "context_step", "contraction", "expansion",
    "explore", "is_solution", "iterate", "parse", "parse_context", "parse_definitions",
    "pretty", "rooted_bisim", "rooted_contraction", "saturate", "step", "strong_bisim",
    "to_dot", "trace_holds", "unique_solution", "weak_bisim", "weak_lts",
]
