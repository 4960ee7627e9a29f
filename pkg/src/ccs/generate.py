"""Deterministic random generators for processes, contexts and solution families.

Every generated process is closed and finite-state: recursion bodies only place
their variable along prefix and sum spines, so unfolding never grows a term.
"""
from __future__ import annotations

import random
from typing import Callable, Sequence

from .context import (
    HOLE,
    CPar,
    CPrefix,
    CRelab,
    CRestr,
    CSum,
    Context,
    apply,
    classify,
    fixpoint,
    has_hole,
    leaf,
    normalize,
)
from .errors import BudgetExceeded, UnguardedRecursion
from .solutions import VARIANTS, SystemSpec, is_solution
from .syntax import (
    NIL,
    TAU,
    Action,
    In,
    Out,
    Par,
    Prefix,
    Process,
    Rec,
    Relab,
    Relabeling,
    Restr,
    Sum,
    canonical,
)

NAMES = ("a", "b")


def rng_for(seed: int, index: int, salt: str = "") -> random.Random:
    """Independent stream for case ``index`` of a run seeded with ``seed``."""
    return random.Random(f"{seed}:{salt}:{index}")


def random_action(rng: random.Random, names: Sequence[str] = NAMES, tau_weight: float = 0.25) -> Action:
    if rng.random() < tau_weight:
        return TAU
    name = rng.choice(list(names))
    return Out(name) if rng.random() < 0.5 else In(name)


def random_relabeling(rng: random.Random, names: Sequence[str] = NAMES) -> Relabeling:
    old = rng.choice(list(names))
    new = rng.choice([n for n in names if n != old] or [old])
    return Relabeling(((old, new),))


def random_process(
    rng: random.Random, depth: int = 3, names: Sequence[str] = NAMES, *, rec: bool = True, par: bool = True
) -> Process:
    """A closed finite-state process of the given operator depth."""
    if depth <= 0:
        return NIL if rng.random() < 0.5 else Prefix(random_action(rng, names), NIL)
    kinds = ["nil", "prefix", "prefix", "sum", "sum"]
    if par:
        kinds += ["par", "restr", "relab"]
    if rec:
        kinds.append("rec")
    kind = rng.choice(kinds)
    sub = lambda d=depth - 1: random_process(rng, d, names, rec=rec, par=par)  # noqa: E731
    if kind == "nil":
        return NIL
    if kind == "prefix":
        return Prefix(random_action(rng, names), sub())
    if kind == "sum":
        return Sum(sub(), sub())
    if kind == "par":
        # keep parallel components shallow so state spaces stay small
        return Par(sub(min(depth - 1, 1)), sub(min(depth - 1, 2)))
    if kind == "restr":
        return Restr(frozenset({rng.choice(list(names))}), sub())
    if kind == "relab":
        return Relab(sub(), random_relabeling(rng, names))
    body = random_spine(rng, depth - 1, names, hole_weight=0.5)
    return fixpoint(body)


# ---------------------------------------------------------------------------
# Contexts


def random_spine(
    rng: random.Random, depth: int, names: Sequence[str] = NAMES, *, hole_weight: float = 0.4, guarded: bool = False
) -> Context:
    """A context whose holes sit on a prefix/sum spine, each under at least one prefix."""
    if depth <= 0:
        if guarded and rng.random() < hole_weight:
            return HOLE
        return leaf(random_process(rng, 0, names))
    r = rng.random()
    if guarded and r < hole_weight * 0.5:
        return HOLE
    if r < 0.55:
        body = random_spine(rng, depth - 1, names, hole_weight=hole_weight, guarded=True)
        return normalize(CPrefix(random_action(rng, names), body))
    if r < 0.85:
        left = random_spine(rng, depth - 1, names, hole_weight=hole_weight, guarded=guarded)
        right = random_spine(rng, depth - 1, names, hole_weight=hole_weight, guarded=guarded)
        return normalize(CSum(left, right))
    return leaf(random_process(rng, min(depth, 2), names, rec=False))


def random_context(rng: random.Random, depth: int = 3, names: Sequence[str] = NAMES, *, hole_weight: float = 0.3) -> Context:
    """An arbitrary context over every operator (holes anywhere, including unguarded)."""
    if depth <= 0 or rng.random() < hole_weight * 0.5:
        return HOLE if rng.random() < 0.6 else leaf(random_process(rng, 1, names, rec=False))
    kind = rng.choice(["prefix", "prefix", "sum", "par", "restr", "relab"])
    sub = lambda: random_context(rng, depth - 1, names, hole_weight=hole_weight)  # noqa: E731
    if kind == "prefix":
        c = CPrefix(random_action(rng, names), sub())
    elif kind == "sum":
        c = CSum(sub(), sub())
    elif kind == "par":
        c = CPar(sub(), leaf(random_process(rng, 1, names, rec=False)))
        if rng.random() < 0.5:
            c = CPar(c.right, c.left)
    elif kind == "restr":
        c = CRestr(frozenset({rng.choice(list(names))}), sub())
    else:
        c = CRelab(sub(), random_relabeling(rng, names))
    return normalize(c)


def random_body(
    rng: random.Random, variant: str, depth: int = 3, names: Sequence[str] = NAMES, *, attempts: int = 200
) -> Context:
    """A spine body with at least one hole meeting the hypotheses of ``variant``."""
    wanted = VARIANTS[variant].hypotheses
    for _ in range(attempts):
        body = random_spine(rng, depth, names, hole_weight=0.5)
        if variant == "rooted-contraction" and rng.random() < 0.4:
            # a sum beside a non-prefixed constant: weakly guarded, not a guarded sum
            extra = Sum(Prefix(random_action(rng, names), NIL), Prefix(random_action(rng, names), NIL))
            body = CSum(body, leaf(extra))
        if not has_hole(body):
            continue
        cls = classify(body)
        if all(getattr(cls, flag) for flag in wanted):
            return body
    raise RuntimeError(f"no {variant} body found in {attempts} attempts")


# ---------------------------------------------------------------------------
# Perturbations


def _positions(p: Process) -> list[tuple]:
    """Paths to every subterm, as tuples of child indices."""
    out = [()]
    children = _children(p)
    for i, c in enumerate(children):
        out.extend((i,) + path for path in _positions(c))
    return out


def _children(p: Process) -> list[Process]:
    match p:
        case Prefix(_, b) | Restr(_, b) | Relab(b, _) | Rec(_, b):
            return [b]
        case Sum(l, r) | Par(l, r):
            return [l, r]
    return []


def _rebuild(p: Process, children: list[Process]) -> Process:
    match p:
        case Prefix(u, _):
            return Prefix(u, children[0])
        case Restr(ns, _):
            return Restr(ns, children[0])
        case Relab(_, rf):
            return Relab(children[0], rf)
        case Rec(x, _):
            return Rec(x, children[0])
        case Sum():
            return Sum(*children)
        case Par():
            return Par(*children)
    return p


def _at(p: Process, path: tuple) -> Process:
    for i in path:
        p = _children(p)[i]
    return p


def _replace(p: Process, path: tuple, new: Process) -> Process:
    if not path:
        return new
    kids = _children(p)
    kids[path[0]] = _replace(kids[path[0]], path[1:], new)
    return _rebuild(p, kids)


REWRITES: dict[str, Callable[[random.Random, Process], Process | None]] = {
    # laws that preserve rooted bisimilarity when applied under a prefix
    "tau-after-prefix": lambda rng, s: Prefix(s.action, Prefix(TAU, s.body)) if isinstance(s, Prefix) else None,
    "tau-absorb": lambda rng, s: Sum(s, Prefix(TAU, s)),
    "drop-tau": lambda rng, s: s.body if isinstance(s, Prefix) and s.action == TAU else None,
    "swap-sum": lambda rng, s: Sum(s.right, s.left) if isinstance(s, Sum) else None,
    "tau-prefix": lambda rng, s: Prefix(TAU, s),
    "dup-sum": lambda rng, s: Sum(s, s),
}


def mutate(rng: random.Random, p: Process, names: Sequence[str] = NAMES) -> Process:
    """Apply one random local rewrite, or replace a subterm by a fresh random one."""
    positions = [path for path in _positions(p) if not _under_rec(p, path)]
    for _ in range(20):
        path = rng.choice(positions)
        sub = _at(p, path)
        if rng.random() < 0.15:
            return canonical(_replace(p, path, random_process(rng, 1, names, rec=False)))
        name = rng.choice(sorted(REWRITES))
        new = REWRITES[name](rng, sub)
        if new is not None:
            return canonical(_replace(p, path, new))
    return p


def _under_rec(p: Process, path: tuple) -> bool:
    # rewriting inside a rec body could place the bound variable under par
    node = p
    for i in path:
        if isinstance(node, Rec):
            return True
        node = _children(node)[i]
    return False


def random_pair(rng: random.Random, depth: int = 3, names: Sequence[str] = NAMES) -> tuple[Process, Process]:
    """Two processes that are related often enough to exercise both verdicts."""
    p = random_process(rng, depth, names)
    r = rng.random()
    if r < 0.25:
        q = random_process(rng, depth, names)
    else:
        q = p
        for _ in range(rng.choice([1, 1, 2])):
            q = mutate(rng, q, names)
    if rng.random() < 0.5:
        p, q = q, p
    return canonical(p), canonical(q)


def pair_corpus(
    seed: int, n: int, depth: int = 3, names: Sequence[str] = NAMES, *, max_states: int = 2000
) -> list[tuple[Process, Process]]:
    """``n`` pairs whose state spaces fit in ``max_states``."""
    from .lts import weak_lts

    out = []
    i = 0
    while len(out) < n:
        rng = rng_for(seed, i, "pair")
        i += 1
        p, q = random_pair(rng, depth, names)
        try:
            weak_lts(p, max_states)
            weak_lts(q, max_states)
        except (BudgetExceeded, UnguardedRecursion):
            continue
        out.append((p, q))
    return out


# ---------------------------------------------------------------------------
# Solution families


def tau_paddings(body: Context) -> list[Context]:
    """Bodies with one extra tau inserted after some prefix."""
    out = []

    def go(c: Context, rebuild):
        match c:
            case CPrefix(u, b):
                out.append(rebuild(CPrefix(u, CPrefix(TAU, b))))
                go(b, lambda x: rebuild(CPrefix(u, x)))
            case CSum(l, r):
                go(l, lambda x: rebuild(CSum(x, r)))
                go(r, lambda x: rebuild(CSum(l, x)))

    go(body, lambda x: x)
    return [normalize(c) for c in out]


def solution_family(body: Context, variant: str, *, max_states: int = 2000) -> list[Process]:
    """Solutions of ``body`` for ``variant``: the fixpoint, its unfoldings and tau-padded fixpoints.

    Candidates failing the solutionhood check are dropped.
    """
    spec = SystemSpec.for_variant(body, variant)
    p0 = fixpoint(body)
    p1 = apply(body, p0)
    candidates = [p0, p1, apply(body, p1)]
    for padded in tau_paddings(body):
        fp = fixpoint(padded)
        candidates += [fp, apply(padded, fp)]
    out: list[Process] = []
    for c in candidates:
        c = canonical(c)
        if c in out:
            continue
        try:
            if is_solution(spec, c, max_states=max_states):
                out.append(c)
        except BudgetExceeded:
            continue
    return out


def solution_case(
    rng: random.Random, variant: str, depth: int = 3, names: Sequence[str] = NAMES, *, max_states: int = 2000
) -> tuple[Context, Process, Process]:
    """A body for ``variant`` with two of its solutions (possibly the same one)."""
    body = random_body(rng, variant, depth, names)
    family = solution_family(body, variant, max_states=max_states)
    p = rng.choice(family)
    q = rng.choice(family)
    return body, p, q
