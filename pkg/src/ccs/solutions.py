"""Solutions of single-variable equations and contractions, and unique-solution harnesses.

Each theorem variant names the guardedness hypotheses on the body, the relation
used for solutionhood and the relation its conclusion promises between any two
solutions.  The lemma-level helpers (``unfold_decompose``,
``contraction_trace_transfer``, ``solution_transfer``) expose the steps of the
uniqueness argument so they can be checked on concrete instances.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .context import Context, apply, classify, compose, context_step, iterate, normalize, pretty as pretty_context
from .equiv import Verdict, check, contraction as contraction_check, weak_bisim
from .errors import HypothesisFailed, PreconditionFailed
from .lts import DEFAULT_MAX_STATES, find_weak_trace, weak_lts
from .semantics import no_label
from .syntax import Action, Label, Process, canonical, is_tau, pretty


@dataclass(frozen=True)
class Variant:
    name: str
    flavor: str  # "equation" or "contraction"
    relation: str  # solutionhood relation
    hypotheses: tuple[str, ...]  # classification flags required of the body
    conclusion: str  # relation promised between two solutions
    theorem: str


VARIANTS = {
    v.name: v
    for v in (
        Variant("strong", "equation", "strong", ("wg",), "strong", "strong-unique-solution"),
        Variant("weak", "equation", "weak", ("sg", "seq", "gcontext"), "weak", "unique-solution-of-equations"),
        Variant("rooted", "equation", "rooted", ("sg", "seq"), "rooted", "obs-unique-solution"),
        Variant("contraction", "contraction", "contraction", ("wgs",), "weak", "unique-solution-of-contractions"),
        Variant(
            "rooted-contraction", "contraction", "rooted-contraction", ("wg",), "rooted",
            "unique-solution-of-rooted-contractions",
        ),
    )
}


@dataclass(frozen=True)
class SystemSpec:
    """A single equation ``X = body`` or contraction ``X >= body``."""

    body: Context
    flavor: str = "equation"
    relation: str = "weak"

    def __post_init__(self):
        allowed = {"equation": ("strong", "weak", "rooted"), "contraction": ("contraction", "rooted-contraction")}
        if self.relation not in allowed.get(self.flavor, ()):
            raise ValueError(f"{self.flavor} systems cannot use relation {self.relation!r}")

    @classmethod
    def for_variant(cls, body: Context, variant: str) -> "SystemSpec":
        v = VARIANTS[variant]
        return cls(body, v.flavor, v.relation)

    @property
    def variant(self) -> Variant:
        return VARIANTS[self.relation]


@dataclass
class SolutionReport:
    theorem: str
    hypothesis_checks: dict[str, bool]
    conclusion: Verdict | None = None

    @property
    def hypotheses_hold(self) -> bool:
        return all(self.hypothesis_checks.values())

    @property
    def failed(self) -> list[str]:
        return [k for k, ok in self.hypothesis_checks.items() if not ok]

    @property
    def guarantee_met(self) -> bool | None:
        """None when the theorem does not apply; otherwise whether its conclusion holds."""
        if self.conclusion is None:
            return None
        return self.conclusion.holds


def is_solution(spec: SystemSpec, p: Process, *, max_states: int = DEFAULT_MAX_STATES) -> bool:
    """``p R body[p]``; for contractions this is ``p`` contracting to its unfolding."""
    return check(spec.relation, p, apply(spec.body, p), max_states=max_states).holds


def unique_solution(
    spec: SystemSpec,
    p: Process,
    q: Process,
    *,
    max_states: int = DEFAULT_MAX_STATES,
    strict: bool = True,
) -> SolutionReport:
    """Check the theorem's hypotheses for ``spec`` on ``p`` and ``q``, then its conclusion.

    The conclusion is only decided when every hypothesis holds.  With ``strict``
    a failed hypothesis raises ``HypothesisFailed`` carrying the report.
    """
    v = spec.variant
    cls = classify(spec.body)
    checks = {flag: getattr(cls, flag) for flag in v.hypotheses}
    checks["solution(p)"] = is_solution(spec, p, max_states=max_states)
    checks["solution(q)"] = is_solution(spec, q, max_states=max_states)
    report = SolutionReport(v.theorem, checks)
    if not report.hypotheses_hold:
        if strict:
            raise HypothesisFailed(report.failed, report)
        return report
    report.conclusion = check(v.conclusion, p, q, max_states=max_states)
    return report


# ---------------------------------------------------------------------------
# Unfolding


@dataclass(frozen=True)
class Decomposition:
    context: Context
    path: tuple[Context, ...]  # contexts visited, starting with C o E^n


def unfold_decompose(
    c: Context, e: Context, n: int, acts: Sequence[Action], *, sums: str = "guarded"
) -> list[Decomposition]:
    """Contexts ``C'`` with ``C o E^n -acts-> C'`` using hole-inert steps.

    With ``sums="guarded"`` the body must be WGS and ``c`` a GCONTEXT; with
    ``sums="any"`` a WG body suffices.  Either way the first ``n`` transitions
    of ``(C o E^n)[P]`` cannot involve ``P``.
    """
    if len(acts) > n:
        raise PreconditionFailed(f"trace of length {len(acts)} exceeds {n} unfoldings")
    ce, ee = classify(c), classify(e)
    if sums == "guarded":
        if not ce.gcontext:
            raise PreconditionFailed(f"outer context {pretty_context(c)} is not a GCONTEXT")
        if not ee.wgs:
            raise PreconditionFailed(f"body {pretty_context(e)} is not WGS")
    elif sums == "any":
        if not ee.wg:
            raise PreconditionFailed(f"body {pretty_context(e)} is not WG")
    else:
        raise ValueError(sums)
    start = normalize(compose(c, iterate(e, n)))
    frontier = {start: (start,)}
    for u in acts:
        nxt: dict = {}
        for d, path in sorted(frontier.items(), key=lambda kv: pretty_context(kv[0])):
            for v, d2 in context_step(d):
                if v == u and d2 not in nxt:
                    nxt[d2] = path + (d2,)
        frontier = nxt
    return [Decomposition(d, frontier[d]) for d in sorted(frontier, key=pretty_context)]


# ---------------------------------------------------------------------------
# Trace transfer along a contraction


def _label_discipline(acts: Sequence[Action]) -> bool:
    return no_label(acts) or sum(1 for u in acts if isinstance(u, Label)) == 1


def _find_path(w, s: int, acts: Sequence[Action], end: int | None) -> list[int] | None:
    """A state sequence following ``acts`` from ``s`` (ending at ``end`` if given)."""
    layers = [{s: None}]
    for u in acts:
        nxt: dict = {}
        for x in sorted(layers[-1]):
            for y in sorted(w.post(x, u)):
                nxt.setdefault(y, x)
        if not nxt:
            return None
        layers.append(nxt)
    last = layers[-1]
    if end is None:
        target = min(last)
    elif end in last:
        target = end
    else:
        return None
    path = [target]
    for layer in reversed(layers[1:]):
        path.append(layer[path[-1]])
    return path[::-1]


@dataclass(frozen=True)
class Transfer:
    acts: tuple[Action, ...]
    state: Process
    left_state: Process


def contraction_trace_transfer(
    p: Process,
    q: Process,
    acts: Sequence[Action],
    *,
    p_end: Process | None = None,
    rooted: bool = False,
    max_states: int = DEFAULT_MAX_STATES,
) -> Transfer | None:
    """Match a trace of ``p`` by a trace of ``q`` no longer than it.

    Each step ``s -u-> s'`` is answered by ``t -u-> t'`` or, for tau, by staying
    put, so the label character of the trace is preserved.  With ``rooted`` the
    first step is always answered by exactly one step.  Returns None when
    ``acts`` (ending at ``p_end``) is not a trace of ``p``.
    """
    if not _label_discipline(acts):
        raise PreconditionFailed("trace must carry no label or exactly one label")
    verdict = contraction_check(p, q, max_states=max_states)
    if not verdict.holds:
        raise PreconditionFailed(f"{pretty(p)} does not contract to {pretty(q)}")
    w1, w2 = verdict.left, verdict.right
    rel = verdict.witness
    end = None if p_end is None else w1.state_of(p_end)
    path = _find_path(w1, w1.root, acts, end)
    if path is None:
        return None
    t = w2.root
    out: list[Action] = []
    for i, u in enumerate(acts):
        s1 = path[i + 1]
        exact = rooted and i == 0
        # staying put first keeps the transferred trace as short as possible
        if is_tau(u) and not exact and (s1, t) in rel:
            continue
        t1 = next((x for x in sorted(w2.post(t, u)) if (s1, x) in rel), None)
        if t1 is None:
            if exact:
                raise PreconditionFailed("first step has no one-step answer into contraction")
            raise AssertionError("contraction relation is not closed under clause 1")
        out.append(u)
        t = t1
    return Transfer(tuple(out), w2.states[t], w1.states[path[-1]])


# ---------------------------------------------------------------------------
# Solution transfer (the key lemma behind uniqueness)


@dataclass
class TransferEvidence:
    target: Process  # R with C[P] =u=> R
    trace: tuple[Action, ...]  # shortest trace realising it
    unfoldings: int
    transferred: tuple[Action, ...]  # matching trace of (C o E^n)[P]
    context: Context  # C'
    contracts: bool  # R contracts to C'[P]
    answer: Process | None  # state of C[Q] weakly bisimilar to C'[Q]

    @property
    def ok(self) -> bool:
        return self.contracts and self.answer is not None


def solution_transfer(
    e: Context,
    p: Process,
    q: Process,
    c: Context,
    u: Action,
    *,
    variant: str = "contraction",
    max_states: int = DEFAULT_MAX_STATES,
) -> list[TransferEvidence]:
    """For every ``C[P] =u=> R`` exhibit ``C'`` with ``R`` contracting to ``C'[P]`` and a matching move of ``C[Q]``.

    ``variant="contraction"`` needs a WGS body and a GCONTEXT ``c``; the answer of
    ``C[Q]`` may stay put on tau.  ``variant="rooted-contraction"`` needs a WG body
    and the answer must be a full weak transition.
    """
    rooted = variant == "rooted-contraction"
    if variant not in ("contraction", "rooted-contraction"):
        raise ValueError(variant)
    ec, cc = classify(e), classify(c)
    if rooted and not ec.wg:
        raise PreconditionFailed(f"body {pretty_context(e)} is not WG")
    if not rooted and not (ec.wgs and cc.gcontext):
        raise PreconditionFailed("needs a WGS body and a GCONTEXT outer context")
    spec = SystemSpec(e, "contraction", variant)
    for name, x in (("p", p), ("q", q)):
        if not is_solution(spec, x, max_states=max_states):
            raise PreconditionFailed(f"{name} = {pretty(x)} is not a solution")

    cp, cq = apply(c, p), apply(c, q)
    w = weak_lts(cp, max_states)
    wq = weak_lts(cq, max_states)
    q_answers = wq.weak(wq.root, u) if rooted else wq.weak_hat(wq.root, u)
    out = []
    for r in sorted(w.weak(w.root, u)):
        trace = find_weak_trace(w, w.root, u, r)
        n = len(trace)
        cn = normalize(compose(c, iterate(e, n)))
        tr = contraction_trace_transfer(
            cp, apply(cn, p), trace, p_end=w.states[r], rooted=rooted, max_states=max_states
        )
        assert tr is not None
        candidates = unfold_decompose(c, e, n, tr.acts, sums="any" if rooted else "guarded")
        target = canonical(tr.state)
        chosen = next((d.context for d in candidates if canonical(apply(d.context, p)) == target), None)
        if chosen is None:
            raise AssertionError("unfolded context does not reach the transferred state")
        contracts = contraction_check(w.states[r], apply(chosen, p), max_states=max_states).holds
        cq_prime = apply(chosen, q)
        answer = next(
            (wq.states[t] for t in sorted(q_answers) if weak_bisim(wq.states[t], cq_prime, max_states=max_states)),
            None,
        )
        out.append(TransferEvidence(w.states[r], tuple(trace), n, tr.acts, chosen, contracts, answer))
    return out
