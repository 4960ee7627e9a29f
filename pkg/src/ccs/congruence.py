"""Sum- and context-closure characterisations of the rooted relations.

Universal statements over summands or contexts are checked either through a
single characteristic probe (a summand on a fresh label) or by bounded
enumeration, in which case the answer is a ``TriState``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count
from string import ascii_lowercase
from typing import Iterable, Iterator, Sequence, Union

from .context import (
    HOLE,
    CPar,
    CPrefix,
    CRelab,
    CRestr,
    CSum,
    Context,
    apply,
    leaf,
    pretty as pretty_context,
)
from .equiv import check, contraction, rooted_bisim, weak_bisim, weak_relation
from .errors import HypothesisFailed
from .lts import DEFAULT_MAX_STATES, is_stable, weak_lts
from .syntax import (
    NIL,
    RESERVED,
    TAU,
    In,
    Label,
    Out,
    Prefix,
    Process,
    Relabeling,
    Sum,
    names,
    pretty,
)


@dataclass(frozen=True)
class Confirmed:
    evidence: str

    status = "confirmed"


@dataclass(frozen=True)
class Refuted:
    witness: object

    status = "refuted"


@dataclass(frozen=True)
class Inconclusive:
    bound: str

    status = "inconclusive"


TriState = Union[Confirmed, Refuted, Inconclusive]


# ---------------------------------------------------------------------------
# Free actions


def _candidate_names() -> Iterator[str]:
    for ch in ascii_lowercase:
        if ch not in RESERVED:
            yield ch
    for i in count(1):
        for ch in ascii_lowercase:
            yield f"{ch}{i}"


def fresh_name(*processes: Process) -> str:
    """The first of a, b, ..., z, a1, b1, ... occurring in none of ``processes``."""
    used = set().union(*(names(p) for p in processes)) if processes else set()
    return next(n for n in _candidate_names() if n not in used)


def weak_labels(p: Process, *, max_states: int = DEFAULT_MAX_STATES) -> frozenset:
    """Visible labels ``l`` with ``p =l=> p'`` for some ``p'``."""
    w = weak_lts(p, max_states)
    return frozenset(u for u in w.weak_actions(w.root) if isinstance(u, Label))


def free_action(*processes: Process, max_states: int = DEFAULT_MAX_STATES) -> Label:
    """A label none of ``processes`` can perform weakly from its root."""
    label = In(fresh_name(*processes))
    for p in processes:
        assert label not in weak_labels(p, max_states=max_states)
    return label


# ---------------------------------------------------------------------------
# Sum closure


def sum_equiv_bounded(
    p: Process, q: Process, probes: Iterable[Process], *, max_states: int = DEFAULT_MAX_STATES
) -> TriState:
    probes = list(probes)
    for r in probes:
        if not weak_bisim(Sum(p, r), Sum(q, r), max_states=max_states):
            return Refuted(r)
    return Confirmed(f"p + r ~~ q + r for all {len(probes)} probes")


def decide_rooted_via_sum(p: Process, q: Process, *, max_states: int = DEFAULT_MAX_STATES) -> bool:
    """Rooted bisimilarity decided as weak bisimilarity of ``p + a.0`` and ``q + a.0``, ``a`` free."""
    r = Prefix(free_action(p, q, max_states=max_states), NIL)
    return weak_bisim(Sum(p, r), Sum(q, r), max_states=max_states).holds


def decide_rooted_contraction_via_sum(
    p: Process, q: Process, *, max_states: int = DEFAULT_MAX_STATES
) -> bool:
    r = Prefix(free_action(p, q, max_states=max_states), NIL)
    return contraction(Sum(p, r), Sum(q, r), max_states=max_states).holds


# ---------------------------------------------------------------------------
# Composition closure


def _atoms(alphabet: Sequence[str]) -> list[Context]:
    procs = [NIL]
    procs += [Prefix(In(a), NIL) for a in alphabet]
    procs += [Prefix(Out(a), NIL) for a in alphabet]
    procs.append(Prefix(TAU, NIL))
    return [leaf(p) for p in procs]


def contexts_by_depth(depth: int, alphabet: Sequence[str]) -> Iterator[Context]:
    """Contexts built from the identity by ``depth`` layers of operators.

    Each layer wraps a context of the previous layer in a prefix, restriction
    or relabeling, or puts it beside a small constant in a sum or parallel.
    Contexts are yielded once, shallowest first.
    """
    alphabet = sorted(alphabet)
    atoms = _atoms(alphabet)
    actions = [TAU] + [In(a) for a in alphabet] + [Out(a) for a in alphabet]
    relabelings = [Relabeling(((a, b),)) for a in alphabet for b in alphabet if a != b]
    seen = {HOLE}
    layer = [HOLE]
    yield HOLE
    for _ in range(depth):
        nxt = []
        for c in layer:
            candidates = [CSum(c, x) for x in atoms] + [CSum(x, c) for x in atoms]
            candidates += [CPar(c, x) for x in atoms] + [CPar(x, c) for x in atoms]
            candidates += [CPrefix(u, c) for u in actions]
            candidates += [CRestr(frozenset({a}), c) for a in alphabet]
            candidates += [CRelab(c, rf) for rf in relabelings]
            for d in candidates:
                if d not in seen:
                    seen.add(d)
                    nxt.append(d)
                    yield d
        layer = nxt


def composition_closure_bounded(
    relation: str,
    p: Process,
    q: Process,
    depth: int,
    alphabet: Iterable[str] = ("a", "b"),
    *,
    max_states: int = DEFAULT_MAX_STATES,
) -> TriState:
    """Search contexts up to ``depth`` layers for one that separates ``p`` and ``q``."""
    if relation not in ("weak", "contraction"):
        raise ValueError(f"composition closure supports weak and contraction, not {relation!r}")
    n = 0
    for c in contexts_by_depth(depth, tuple(alphabet)):
        n += 1
        if not check(relation, apply(c, p), apply(c, q), max_states=max_states):
            return Refuted(c)
    return Confirmed(f"all {n} contexts up to depth {depth}")


# ---------------------------------------------------------------------------
# Weak bisimilarity versus rooted bisimilarity up to a tau prefix


@dataclass(frozen=True)
class HennessyDengReport:
    weak: bool
    rooted: bool  # p ~~c q
    rooted_tau_right: bool  # p ~~c t.q
    rooted_tau_left: bool  # t.p ~~c q

    @property
    def disjunction(self) -> bool:
        return self.rooted or self.rooted_tau_right or self.rooted_tau_left

    @property
    def holds(self) -> bool:
        return self.weak == self.disjunction

    @property
    def via(self) -> str | None:
        for name in ("rooted", "rooted_tau_right", "rooted_tau_left"):
            if getattr(self, name):
                return name
        return None


def hennessy_deng_check(p: Process, q: Process, *, max_states: int = DEFAULT_MAX_STATES) -> HennessyDengReport:
    tp, tq = Prefix(TAU, p), Prefix(TAU, q)
    return HennessyDengReport(
        weak=weak_bisim(p, q, max_states=max_states).holds,
        rooted=rooted_bisim(p, q, max_states=max_states).holds,
        rooted_tau_right=rooted_bisim(p, tq, max_states=max_states).holds,
        rooted_tau_left=rooted_bisim(tp, q, max_states=max_states).holds,
    )


# ---------------------------------------------------------------------------
# Stable common non-derivative


@dataclass
class Prop3Report:
    hypothesis: dict[str, bool]
    probes: list[Process] = field(default_factory=list)
    sum_closure: TriState | None = None
    rooted: bool | None = None
    refuting_probe: Process | None = None

    @property
    def agreement(self) -> bool:
        """Probe confirmation and rooted bisimilarity tell the same story."""
        confirmed = isinstance(self.sum_closure, Confirmed)
        return confirmed == bool(self.rooted)


def _derivative_bisimilar_to(p: Process, k: Process, max_states: int) -> bool:
    w, wk = weak_lts(p, max_states), weak_lts(k, max_states)
    rel = weak_relation(w, wk)
    derivatives = {t for u in w.weak_actions(w.root) for t in w.weak(w.root, u)}
    return any((s, wk.root) in rel for s in derivatives)


def prop3_instance_check(
    p: Process,
    q: Process,
    k: Process,
    probes: Iterable[Process] = (),
    *,
    max_states: int = DEFAULT_MAX_STATES,
) -> Prop3Report:
    """Check that ``k`` is a stable process unrelated to every weak derivative of p and q, then compare
    sum closure over the probes (always including ``k`` and ``c.k`` for fresh ``c``) with rooted bisimilarity.
    """
    wk = weak_lts(k, max_states)
    hyp = {
        "stability": is_stable(wk, wk.root),
        "derivatives": not (
            _derivative_bisimilar_to(p, k, max_states) or _derivative_bisimilar_to(q, k, max_states)
        ),
    }
    report = Prop3Report(hyp)
    failed = [name for name, ok in hyp.items() if not ok]
    if failed:
        raise HypothesisFailed(failed, report)
    c = In(fresh_name(p, q, k))
    all_probes = [k, Prefix(c, k)] + [r for r in probes if r not in (k, Prefix(c, k))]
    report.probes = all_probes
    report.sum_closure = sum_equiv_bounded(p, q, all_probes, max_states=max_states)
    report.rooted = rooted_bisim(p, q, max_states=max_states).holds
    if isinstance(report.sum_closure, Refuted):
        report.refuting_probe = report.sum_closure.witness
    return report


def describe(t: TriState) -> str:
    if isinstance(t, Refuted):
        w = t.witness
        shown = pretty(w) if isinstance(w, Process) else pretty_context(w)
        return f"refuted by {shown}"
    if isinstance(t, Confirmed):
        return f"confirmed ({t.evidence})"
    return f"inconclusive ({t.bound})"
