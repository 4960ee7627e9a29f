"""Randomised property suites over generated corpora.

Each property runs ``cases`` deterministic cases derived from the seed and
reports how many passed.  Cases that exceed the state budget are skipped and
counted separately.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Iterator

from . import generate as gen
from .config import RunConfig
from .congruence import decide_rooted_contraction_via_sum, decide_rooted_via_sum, hennessy_deng_check
from .context import apply, classify, context_step, parse_context
from .equiv import check, check_clauses, strong_relation, weak_relation
from .errors import BudgetExceeded, HypothesisFailed, UnguardedRecursion
from .lts import WeakLts, weak_lts
from .semantics import step
from .solutions import SystemSpec, contraction_trace_transfer, is_solution, unique_solution
from .syntax import TAU, Label, canonical, is_tau, parse

SUITE_MAX_STATES = 2000


@dataclass
class PropertyResult:
    name: str
    passed: int = 0
    total: int = 0
    skipped: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def record(self, ok: bool, detail: str = "") -> None:
        self.total += 1
        if ok:
            self.passed += 1
        elif len(self.failures) < 5:
            self.failures.append(detail)


@dataclass
class SuiteResult:
    config: RunConfig
    properties: list[PropertyResult]

    @property
    def ok(self) -> bool:
        return all(p.ok for p in self.properties)

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "seed": self.config.seed,
            "cases": self.config.cases,
            "properties": [
                {
                    "name": p.name,
                    "passed": p.passed,
                    "total": p.total,
                    "skipped": p.skipped,
                    "failures": p.failures,
                }
                for p in self.properties
            ],
        }


# ---------------------------------------------------------------------------
# Shared oracles


def trace_weak_edges(w: WeakLts, s: int) -> set:
    """(u, t) reachable from ``s`` by a nonempty trace with no label (u = tau) or exactly one label u."""
    out = set()
    start = (s, None, False)  # state, label taken, nonempty
    seen = {start}
    todo = [start]
    while todo:
        x, lab, moved = todo.pop()
        if moved:
            out.add((lab if lab is not None else TAU, x))
        for u, y in w.succ[x]:
            if is_tau(u):
                nxt = (y, lab, True)
            elif lab is None:
                nxt = (y, u, True)
            else:
                continue
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return out


def disciplined_traces(w: WeakLts, max_len: int) -> Iterator[tuple[tuple, int]]:
    """Distinct (trace, end state) from the root with no label or a single label."""
    seen = set()
    stack = [(w.root, (), 0)]
    while stack:
        x, acts, labels = stack.pop()
        if (acts, x) in seen:
            continue
        seen.add((acts, x))
        yield acts, x
        if len(acts) == max_len:
            continue
        for u, y in w.succ[x]:
            extra = 0 if is_tau(u) else 1
            if labels + extra <= 1:
                stack.append((y, acts + (u,), labels + extra))


def _corpus(cfg: RunConfig):
    return gen.pair_corpus(cfg.seed, cfg.cases, cfg.depth, cfg.names, max_states=min(cfg.max_states, SUITE_MAX_STATES))


# ---------------------------------------------------------------------------
# Properties


def prop_weak_trace(cfg: RunConfig, res: PropertyResult) -> None:
    for p, q in _corpus(cfg):
        for x in (p, q):
            w = weak_lts(x, cfg.max_states)
            if len(w) > 50:
                res.skipped += 1
                continue
            ok = all(
                trace_weak_edges(w, s)
                == {(u, t) for u in w.weak_actions(s) for t in w.weak(s, u)}
                for s in range(len(w))
            )
            res.record(ok, str(x))


def prop_inclusions(cfg: RunConfig, res: PropertyResult) -> None:
    implies = lambda a, b: (not a) or b  # noqa: E731
    for p, q in _corpus(cfg):
        v = {k: check(k, p, q, max_states=cfg.max_states).holds for k in
             ("strong", "weak", "rooted", "expansion", "contraction", "rooted-contraction")}
        back_rc = check("rooted-contraction", q, p, max_states=cfg.max_states).holds
        ok = (
            implies(v["strong"], v["rooted"])
            and implies(v["rooted"], v["weak"])
            and implies(v["strong"], v["expansion"])
            and implies(v["expansion"], v["contraction"])
            and implies(v["contraction"], v["weak"])
            and implies(v["rooted-contraction"], v["contraction"])
            and implies(v["rooted-contraction"] and back_rc, v["rooted"])
        )
        res.record(ok, f"{p} / {q}: {v}")


def prop_fixpoint(cfg: RunConfig, res: PropertyResult) -> None:
    for p, q in _corpus(cfg):
        v = check("weak", p, q, max_states=cfg.max_states)
        rel = weak_relation(v.left, v.right)
        res.record(not check_clauses("weak", rel, v.left, v.right), f"{p} / {q}")


def prop_partition(cfg: RunConfig, res: PropertyResult) -> None:
    for p, q in _corpus(cfg):
        w1, w2 = weak_lts(p, cfg.max_states), weak_lts(q, cfg.max_states)
        ok = strong_relation(w1, w2) == strong_relation(w1, w2, "partition") and weak_relation(
            w1, w2
        ) == weak_relation(w1, w2, "partition")
        res.record(ok, f"{p} / {q}")


def prop_laws(cfg: RunConfig, res: PropertyResult) -> None:
    corpus = _corpus(cfg)
    for i, (p, q) in enumerate(corpus):
        r = corpus[(i + 1) % len(corpus)][0]
        ok = True
        for k in ("weak", "rooted", "expansion", "contraction", "rooted-contraction"):
            ok &= check(k, p, p).holds
            if k in ("weak", "rooted"):
                ok &= check(k, p, q).holds == check(k, q, p).holds
        for k in ("weak", "rooted", "contraction", "rooted-contraction"):
            # transitivity along p, q and q's mutation
            if check(k, p, q).holds and check(k, q, r).holds:
                ok &= check(k, p, r).holds
        res.record(ok, f"{p} / {q}")


def prop_classify(cfg: RunConfig, res: PropertyResult) -> None:
    for i in range(cfg.cases):
        c = gen.random_context(gen.rng_for(cfg.seed, i, "ctx"), cfg.depth + 1, cfg.names)
        res.record(all(classify(c).implications().values()), str(c))


def prop_hole_inert(cfg: RunConfig, res: PropertyResult) -> None:
    for i in range(cfg.cases):
        rng = gen.rng_for(cfg.seed, i, "inert")
        c = gen.random_context(rng, cfg.depth, cfg.names)
        p = gen.random_process(rng, 2, cfg.names)
        try:
            actual = step(apply(c, p))
        except UnguardedRecursion:
            res.skipped += 1
            continue
        predicted = {(u, canonical(apply(d, p))) for u, d in context_step(c)}
        ok = predicted <= actual
        if classify(c).wg:
            ok &= predicted == actual
        res.record(ok, f"{c} [{p}]")


def prop_rooted_sum(cfg: RunConfig, res: PropertyResult) -> None:
    for p, q in _corpus(cfg):
        res.record(decide_rooted_via_sum(p, q) == check("rooted", p, q).holds, f"{p} / {q}")


def prop_rooted_contraction_sum(cfg: RunConfig, res: PropertyResult) -> None:
    for p, q in _corpus(cfg):
        ok = decide_rooted_contraction_via_sum(p, q) == check("rooted-contraction", p, q).holds
        res.record(ok, f"{p} / {q}")


def prop_hennessy_deng(cfg: RunConfig, res: PropertyResult) -> None:
    for p, q in _corpus(cfg):
        res.record(hennessy_deng_check(p, q).holds, f"{p} / {q}")


def prop_congruence(cfg: RunConfig, res: PropertyResult) -> None:
    """Rooted bisimilarity and rooted contraction are preserved by every context; weak
    bisimilarity by guarded-sum contexts."""
    pairs = _corpus(cfg)
    for i, (p, q) in enumerate(pairs):
        c = gen.random_context(gen.rng_for(cfg.seed, i, "cong"), cfg.depth, cfg.names)
        try:
            cp, cq = apply(c, p), apply(c, q)
            ok = True
            for rel in ("strong", "rooted", "rooted-contraction"):
                if check(rel, p, q).holds:
                    ok &= check(rel, cp, cq, max_states=SUITE_MAX_STATES).holds
            if classify(c).gcontext and check("weak", p, q).holds:
                ok &= check("weak", cp, cq, max_states=SUITE_MAX_STATES).holds
        except BudgetExceeded:
            res.skipped += 1
            continue
        res.record(ok, f"{c}: {p} / {q}")


def _solution_prop(variant: str):
    def run(cfg: RunConfig, res: PropertyResult) -> None:
        for i in range(cfg.cases):
            rng = gen.rng_for(cfg.seed, i, variant)
            body, p, q = gen.solution_case(rng, variant, cfg.depth, cfg.names, max_states=SUITE_MAX_STATES)
            report = unique_solution(SystemSpec.for_variant(body, variant), p, q, max_states=SUITE_MAX_STATES)
            res.record(bool(report.guarantee_met), f"{body}: {p} / {q}")

    run.__doc__ = f"Two solutions of a generated {variant} body are related as the theorem promises."
    return run


def prop_negative_controls(cfg: RunConfig, res: PropertyResult) -> None:
    """Non-sequential bodies admit solutions that are not weakly bisimilar."""
    controls = [
        ("a.0 | _", "rec k. a.k", "(rec k. a.k) | b.0"),
        ("nu {a} (a._ | 'a.0)", "0", "b.0"),
    ]
    for body_text, p_text, q_text in controls:
        body, p, q = parse_context(body_text), parse(p_text), parse(q_text)
        spec = SystemSpec.for_variant(body, "weak")
        distinct = is_solution(spec, p) and is_solution(spec, q) and not check("weak", p, q).holds
        try:
            unique_solution(SystemSpec.for_variant(body, "rooted"), p, q)
            rejected = False
        except HypothesisFailed as exc:
            rejected = "seq" in exc.failed
        res.record(distinct and rejected, body_text)


def prop_trace_transfer(cfg: RunConfig, res: PropertyResult) -> None:
    for p, q in _corpus(cfg):
        v = check("contraction", p, q)
        if not v.holds:
            continue
        ok = True
        for acts, end in disciplined_traces(v.left, 4):
            tr = contraction_trace_transfer(p, q, list(acts), p_end=v.left.states[end])
            if tr is None:
                ok = False
                continue
            labels = lambda xs: [u for u in xs if isinstance(u, Label)]  # noqa: E731
            ok &= len(tr.acts) <= len(acts) and labels(tr.acts) == labels(acts)
        res.record(ok, f"{p} / {q}")


PROPERTIES: dict[str, Callable[[RunConfig, PropertyResult], None]] = {
    "lts.weak-trace": prop_weak_trace,
    "equiv.inclusions": prop_inclusions,
    "equiv.fixpoint": prop_fixpoint,
    "equiv.partition": prop_partition,
    "equiv.laws": prop_laws,
    "context.implications": prop_classify,
    "context.hole-inert": prop_hole_inert,
    "congruence.rooted-via-sum": prop_rooted_sum,
    "congruence.rooted-contraction-via-sum": prop_rooted_contraction_sum,
    "congruence.hennessy-deng": prop_hennessy_deng,
    "congruence.contexts": prop_congruence,
    "solutions.strong": _solution_prop("strong"),
    "solutions.rooted": _solution_prop("rooted"),
    "solutions.contraction": _solution_prop("contraction"),
    "solutions.rooted-contraction": _solution_prop("rooted-contraction"),
    "solutions.negative-controls": prop_negative_controls,
    "solutions.trace-transfer": prop_trace_transfer,
}


def run_suite(cfg: RunConfig, only: list[str] | None = None) -> SuiteResult:
    results = []
    for name, fn in PROPERTIES.items():
        if only and not any(name.startswith(o) for o in only):
            continue
        res = PropertyResult(name)
        t0 = time.perf_counter()
        fn(cfg, res)
        res.seconds = time.perf_counter() - t0
        results.append(res)
    return SuiteResult(cfg, results)
