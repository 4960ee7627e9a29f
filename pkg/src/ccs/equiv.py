"""Greatest-fixpoint checkers for the behavioural equivalences and preorders.

Every relation is computed over the product of the states of two saturated
LTSs, starting from all pairs and deleting pairs that violate a clause until
nothing changes.  Clause shapes, for a pair (s, t) and relation R:

=============  ===========================  ==============================
relation       s -u-> s' answered by t ...   t -u-> t' answered by s ...
=============  ===========================  ==============================
strong         t -u-> t', R                  s -u-> s', R
weak           t =u=>^ t', R                 s =u=>^ s', R
expansion      t -u->^ t', R                 s =u=> s', R
contraction    t -u->^ t', R                 s =u=>^ s', weak bisimilar
=============  ===========================  ==============================

Rooted bisimilarity and rooted contraction are one-round checks at the roots
on top of the weak and contraction relations.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable

from .lts import DEFAULT_MAX_STATES, WeakLts, weak_lts
from .syntax import Action, Process, pretty

EQUIVALENCES = ("strong", "weak", "rooted")
PREORDERS = ("expansion", "contraction", "rooted-contraction")
RELATIONS = EQUIVALENCES + PREORDERS

Pair = tuple[int, int]


@dataclass(frozen=True)
class Distinguisher:
    left: int
    right: int
    clause: int  # 1: challenge from the left process, 2: from the right
    action: Action
    derivative: int


@dataclass(frozen=True, eq=False)
class Verdict:
    relation: str
    holds: bool
    left: WeakLts
    right: WeakLts
    witness: frozenset | None = None
    distinguisher: Distinguisher | None = None

    def __bool__(self):
        return self.holds

    def explain(self) -> str:
        if self.holds:
            return f"{self.relation}: holds (witness of {len(self.witness)} pairs)"
        d = self.distinguisher
        side, other = (self.left, self.right) if d.clause == 1 else (self.right, self.left)
        mover = d.left if d.clause == 1 else d.right
        return (
            f"{self.relation}: fails at ({pretty(self.left.states[d.left])}, "
            f"{pretty(self.right.states[d.right])}): clause {d.clause}, "
            f"{pretty(side.states[mover])} -{d.action}-> {pretty(side.states[d.derivative])} "
            f"has no matching answer"
        )

    def witness_pairs(self) -> list[tuple[str, str]]:
        return sorted(
            (pretty(self.left.states[s]), pretty(self.right.states[t])) for s, t in self.witness or ()
        )


# ---------------------------------------------------------------------------
# Clause evaluation


def _left_answers(kind: str, w: WeakLts, t: int, u: Action) -> frozenset:
    if kind == "strong":
        return w.post(t, u)
    if kind == "weak":
        return w.weak_hat(t, u)
    return w.step_hat(t, u)  # expansion, contraction


def _right_answers(kind: str, w: WeakLts, s: int, u: Action) -> frozenset:
    if kind == "strong":
        return w.post(s, u)
    if kind == "expansion":
        return w.weak(s, u)
    return w.weak_hat(s, u)  # weak, contraction


def violation(
    kind: str,
    pair: Pair,
    rel,
    w1: WeakLts,
    w2: WeakLts,
    *,
    right_rel=None,
    clauses: tuple[int, ...] = (1, 2),
) -> Distinguisher | None:
    """First clause of ``kind`` that ``pair`` violates with respect to ``rel``.

    ``right_rel`` overrides the relation used by clause 2 (contraction uses
    weak bisimilarity there).
    """
    s, t = pair
    if 1 in clauses:
        for u, s1 in w1.succ[s]:
            if not any((s1, t1) in rel for t1 in _left_answers(kind, w2, t, u)):
                return Distinguisher(s, t, 1, u, s1)
    if 2 in clauses:
        rel2 = rel if right_rel is None else right_rel
        for u, t1 in w2.succ[t]:
            if not any((s1, t1) in rel2 for s1 in _right_answers(kind, w1, s, u)):
                return Distinguisher(s, t, 2, u, t1)
    return None


def check_clauses(kind: str, rel: Iterable[Pair], w1: WeakLts, w2: WeakLts, right_rel=None) -> list:
    """All violations of ``kind``'s clauses by pairs of ``rel`` (empty iff rel is closed)."""
    rel = frozenset(rel)
    if kind == "contraction" and right_rel is None:
        right_rel = weak_relation(w1, w2)
    out = []
    for pair in sorted(rel):
        d = violation(kind, pair, rel, w1, w2, right_rel=right_rel)
        if d is not None:
            out.append(d)
    return out


def greatest_fixpoint(kind, w1, w2, candidates=None, *, right_rel=None, clauses=(1, 2)) -> frozenset:
    """Delete clause violators from ``candidates`` (default: all pairs) until stable."""
    if candidates is None:
        candidates = product(range(len(w1)), range(len(w2)))
    rel = set(candidates)
    changed = True
    while changed:
        changed = False
        for pair in sorted(rel):
            if violation(kind, pair, rel, w1, w2, right_rel=right_rel, clauses=clauses):
                rel.discard(pair)
                changed = True
    return frozenset(rel)


def _refine(w1: WeakLts, w2: WeakLts, weak: bool) -> frozenset:
    """Signature-based partition refinement over the disjoint union of both LTSs."""
    n1 = len(w1)
    systems = [(w1, 0), (w2, n1)]
    moves: list[list[tuple[Action, tuple[int, ...]]]] = []
    for w, off in systems:
        for s in range(len(w)):
            if weak:
                row = [(u, tuple(t + off for t in ts)) for u, ts in w.hat_succ[s]]
            else:
                grouped: dict = {}
                for u, t in w.succ[s]:
                    grouped.setdefault(u, []).append(t + off)
                row = [(u, tuple(ts)) for u, ts in grouped.items()]
            moves.append(row)
    block = [0] * len(moves)
    count = 1
    while True:
        sigs = [
            (block[x], frozenset((u, block[y]) for u, ys in moves[x] for y in ys))
            for x in range(len(moves))
        ]
        numbering: dict = {}
        new_block = [numbering.setdefault(sig, len(numbering)) for sig in sigs]
        if len(numbering) == count:
            break
        block, count = new_block, len(numbering)
    return frozenset(
        (s, t) for s in range(n1) for t in range(len(w2)) if block[s] == block[n1 + t]
    )


def strong_relation(w1: WeakLts, w2: WeakLts, engine: str = "naive") -> frozenset:
    if engine == "partition":
        return _refine(w1, w2, weak=False)
    return greatest_fixpoint("strong", w1, w2)


def weak_relation(w1: WeakLts, w2: WeakLts, engine: str = "naive") -> frozenset:
    if engine == "partition":
        return _refine(w1, w2, weak=True)
    return greatest_fixpoint("weak", w1, w2)


def expansion_relation(w1: WeakLts, w2: WeakLts) -> frozenset:
    return greatest_fixpoint("expansion", w1, w2)


def contraction_relation(w1: WeakLts, w2: WeakLts, wb: frozenset | None = None) -> frozenset:
    if wb is None:
        wb = weak_relation(w1, w2)
    # clause 2 only mentions weak bisimilarity, so it is a static filter
    candidates = [
        pair
        for pair in product(range(len(w1)), range(len(w2)))
        if violation("contraction", pair, frozenset(), w1, w2, right_rel=wb, clauses=(2,)) is None
    ]
    return greatest_fixpoint("contraction", w1, w2, candidates, right_rel=wb, clauses=(1,))


# ---------------------------------------------------------------------------
# Process-level checkers


@lru_cache(maxsize=2048)
def _relation(kind: str, p: Process, q: Process, max_states: int, engine: str) -> frozenset:
    w1, w2 = weak_lts(p, max_states), weak_lts(q, max_states)
    if kind == "strong":
        return strong_relation(w1, w2, engine)
    if kind == "weak":
        return weak_relation(w1, w2, engine)
    if kind == "expansion":
        return expansion_relation(w1, w2)
    if kind == "contraction":
        return contraction_relation(w1, w2, _relation("weak", p, q, max_states, engine))
    raise ValueError(kind)


def _gfp_verdict(kind, p, q, max_states, engine) -> Verdict:
    w1, w2 = weak_lts(p, max_states), weak_lts(q, max_states)
    rel = _relation(kind, p, q, max_states, engine)
    root = (w1.root, w2.root)
    if root in rel:
        return Verdict(kind, True, w1, w2, witness=rel)
    right_rel = _relation("weak", p, q, max_states, engine) if kind == "contraction" else None
    d = violation(kind, root, rel, w1, w2, right_rel=right_rel)
    assert d is not None, "a pair outside the greatest fixpoint must violate a clause"
    return Verdict(kind, False, w1, w2, distinguisher=d)


def strong_bisim(p: Process, q: Process, *, max_states: int = DEFAULT_MAX_STATES, engine: str = "naive") -> Verdict:
    return _gfp_verdict("strong", p, q, max_states, engine)


def weak_bisim(p: Process, q: Process, *, max_states: int = DEFAULT_MAX_STATES, engine: str = "naive") -> Verdict:
    return _gfp_verdict("weak", p, q, max_states, engine)


def expansion(p: Process, q: Process, *, max_states: int = DEFAULT_MAX_STATES) -> Verdict:
    """Decides p expands q: q is at least as fast as p."""
    return _gfp_verdict("expansion", p, q, max_states, "naive")


def contraction(p: Process, q: Process, *, max_states: int = DEFAULT_MAX_STATES, engine: str = "naive") -> Verdict:
    """Decides p contracts to q."""
    return _gfp_verdict("contraction", p, q, max_states, engine)


def _root_check(relation, w1, w2, left_answers, left_rel, right_answers, right_rel, witness) -> Verdict:
    s, t = w1.root, w2.root
    for u, s1 in w1.succ[s]:
        if not any((s1, t1) in left_rel for t1 in left_answers(w2, t, u)):
            return Verdict(relation, False, w1, w2, distinguisher=Distinguisher(s, t, 1, u, s1))
    for u, t1 in w2.succ[t]:
        if not any((s1, t1) in right_rel for s1 in right_answers(w1, s, u)):
            return Verdict(relation, False, w1, w2, distinguisher=Distinguisher(s, t, 2, u, t1))
    return Verdict(relation, True, w1, w2, witness=witness | {(s, t)})


def rooted_bisim(p: Process, q: Process, *, max_states: int = DEFAULT_MAX_STATES, engine: str = "naive") -> Verdict:
    """Root moves answered by full weak moves (at least one tau for tau) into weak bisimilarity."""
    w1, w2 = weak_lts(p, max_states), weak_lts(q, max_states)
    wb = _relation("weak", p, q, max_states, engine)
    return _root_check(
        "rooted", w1, w2, WeakLts.weak, wb, WeakLts.weak, wb, wb
    )


def rooted_contraction(p: Process, q: Process, *, max_states: int = DEFAULT_MAX_STATES, engine: str = "naive") -> Verdict:
    """Left root moves matched by exactly one step into contraction; right ones by full weak moves into weak bisimilarity."""
    w1, w2 = weak_lts(p, max_states), weak_lts(q, max_states)
    wb = _relation("weak", p, q, max_states, engine)
    ctr = _relation("contraction", p, q, max_states, engine)
    return _root_check(
        "rooted-contraction", w1, w2, WeakLts.post, ctr, WeakLts.weak, wb, ctr
    )


CHECKERS = {
    "strong": strong_bisim,
    "weak": weak_bisim,
    "rooted": rooted_bisim,
    "expansion": expansion,
    "contraction": contraction,
    "rooted-contraction": rooted_contraction,
}


def check(relation: str, p: Process, q: Process, *, max_states: int = DEFAULT_MAX_STATES) -> Verdict:
    try:
        fn = CHECKERS[relation]
    except KeyError:
        raise ValueError(f"unknown relation {relation!r}; choose from {', '.join(RELATIONS)}") from None
    return fn(p, q, max_states=max_states)


def holds(relation: str, p: Process, q: Process, *, max_states: int = DEFAULT_MAX_STATES) -> bool:
    return check(relation, p, q, max_states=max_states).holds
