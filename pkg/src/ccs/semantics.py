"""One-step SOS transitions and action-list predicates."""
from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .errors import BudgetExceeded, NotVisible, OpenTerm, UnguardedRecursion
from .syntax import (
    TAU,
    Action,
    Label,
    Nil,
    Par,
    Prefix,
    Process,
    Rec,
    Relab,
    Restr,
    Sum,
    Var,
    action_key,
    canonical,
    free_variables,
    is_tau,
    pretty,
    relabel_action,
    substitute,
)

# nested REC unfoldings allowed without passing a prefix
UNFOLD_BUDGET = 64

Transition = tuple[Action, Process]


def _restricted(u: Action, names: frozenset) -> bool:
    return not is_tau(u) and u.name in names


def _derive(p: Process, unfoldings: int) -> frozenset:
    """All (u, p') with p -u-> p' derivable from the SOS rules.  Targets are not canonical."""
    match p:
        case Nil():
            return frozenset()
        case Prefix(u, body):
            return frozenset({(u, body)})
        case Sum(left, right):
            return _derive(left, unfoldings) | _derive(right, unfoldings)
        case Par(left, right):
            lt = _derive(left, unfoldings)
            rt = _derive(right, unfoldings)
            out = {(u, Par(l2, right)) for u, l2 in lt}
            out |= {(u, Par(left, r2)) for u, r2 in rt}
            for u, l2 in lt:
                if is_tau(u):
                    continue
                for v, r2 in rt:
                    if not is_tau(v) and v == u.complement():
                        out.add((TAU, Par(l2, r2)))
            return frozenset(out)
        case Restr(ns, body):
            return frozenset(
                (u, Restr(ns, b2)) for u, b2 in _derive(body, unfoldings) if not _restricted(u, ns)
            )
        case Relab(body, rf):
            return frozenset(
                (relabel_action(rf, u), Relab(b2, rf)) for u, b2 in _derive(body, unfoldings)
            )
        case Rec(var, body):
            if unfoldings >= UNFOLD_BUDGET:
                raise UnguardedRecursion(
                    f"more than {UNFOLD_BUDGET} nested unfoldings without a prefix in {pretty(p)}"
                )
            return _derive(substitute(body, var, p), unfoldings + 1)
        case Var(name):
            raise OpenTerm(f"free variable {name}")
    raise TypeError(p)


@lru_cache(maxsize=1 << 16)
def _step_cached(p: Process) -> frozenset:
    return frozenset((u, canonical(q)) for u, q in _derive(p, 0))


def step(p: Process) -> frozenset:
    """The set of (action, canonical target) pairs of ``p``."""
    if free_variables(p):
        raise OpenTerm(f"cannot step open term {pretty(p)}: free {sorted(free_variables(p))}")
    return _step_cached(p)


def sorted_transitions(ts) -> list[Transition]:
    return sorted(ts, key=lambda t: (action_key(t[0]), pretty(t[1])))


def trace_holds(p: Process, acts: Sequence[Action], q: Process, budget: int = 10_000) -> bool:
    """Is there a derivation p -acts[0]-> ... -acts[-1]-> q ?"""
    frontier = {canonical(p)}
    seen = len(frontier)
    for u in acts:
        nxt = set()
        for s in frontier:
            nxt.update(t for v, t in step(s) if v == u)
        frontier = nxt
        seen += len(frontier)
        if seen > budget:
            raise BudgetExceeded(f"trace exploration exceeded {budget} states")
        if not frontier:
            return False
    return canonical(q) in frontier


def trace_endpoints(p: Process, acts: Sequence[Action]) -> frozenset:
    frontier = {canonical(p)}
    for u in acts:
        frontier = {t for s in frontier for v, t in step(s) if v == u}
    return frozenset(frontier)


def no_label(acts: Sequence[Action]) -> bool:
    return all(is_tau(u) for u in acts)


def unique_label(u: Action, acts: Sequence[Action]) -> bool:
    if not isinstance(u, Label):
        raise NotVisible("unique_label expects a visible action")
    visible = [i for i, v in enumerate(acts) if not is_tau(v)]
    return len(visible) == 1 and acts[visible[0]] == u
