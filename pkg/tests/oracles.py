"""Independent reference implementations used to cross-check the library.

Nothing here reuses the library's semantics, exploration or fixpoint code; only
the AST classes and ``canonical`` (for comparing states) are shared.
"""
from __future__ import annotations

from ccs.syntax import (
    TAU,
    Label,
    Nil,
    Par,
    Prefix,
    Rec,
    Relab,
    Restr,
    Sum,
    Var,
    canonical,
)


# ---------------------------------------------------------------------------
# Transition rules as a naive recursive evaluator


def _subst(p, x, v):
    if isinstance(p, Var):
        return v if p.name == x else p
    if isinstance(p, Nil):
        return p
    if isinstance(p, Prefix):
        return Prefix(p.action, _subst(p.body, x, v))
    if isinstance(p, Sum):
        return Sum(_subst(p.left, x, v), _subst(p.right, x, v))
    if isinstance(p, Par):
        return Par(_subst(p.left, x, v), _subst(p.right, x, v))
    if isinstance(p, Restr):
        return Restr(p.names, _subst(p.body, x, v))
    if isinstance(p, Relab):
        return Relab(_subst(p.body, x, v), p.rf)
    if isinstance(p, Rec):
        # values substituted here are always closed, so no capture is possible
        return p if p.var == x else Rec(p.var, _subst(p.body, x, v))
    raise TypeError(p)


def naive_step(p, fuel=64):
    """All (action, canonical target) pairs, derived rule by rule."""
    out = set()
    if isinstance(p, Prefix):
        out.add((p.action, p.body))
    elif isinstance(p, Sum):
        out |= naive_step(p.left, fuel)
        out |= naive_step(p.right, fuel)
    elif isinstance(p, Par):
        left = naive_step(p.left, fuel)
        right = naive_step(p.right, fuel)
        for u, l2 in left:
            out.add((u, Par(l2, p.right)))
        for u, r2 in right:
            out.add((u, Par(p.left, r2)))
        for u, l2 in left:
            for v, r2 in right:
                if isinstance(u, Label) and isinstance(v, Label) and u.name == v.name and u.output != v.output:
                    out.add((TAU, Par(l2, r2)))
    elif isinstance(p, Restr):
        for u, b in naive_step(p.body, fuel):
            if u == TAU or u.name not in p.names:
                out.add((u, Restr(p.names, b)))
    elif isinstance(p, Relab):
        mapping = dict(p.rf.pairs)
        for u, b in naive_step(p.body, fuel):
            v = u if u == TAU else Label(mapping.get(u.name, u.name), u.output)
            out.add((v, Relab(b, p.rf)))
    elif isinstance(p, Rec):
        if fuel == 0:
            raise RecursionError("unguarded")
        out |= naive_step(_subst(p.body, p.var, p), fuel - 1)
    elif not isinstance(p, Nil):
        raise TypeError(p)
    return {(u, canonical(q)) for u, q in out}


def reachable(p, limit=5000):
    p = canonical(p)
    seen = {p: naive_step(p)}
    todo = [p]
    while todo:
        x = todo.pop()
        for _, y in seen[x]:
            if y not in seen:
                if len(seen) >= limit:
                    raise RuntimeError("too many states")
                seen[y] = naive_step(y)
                todo.append(y)
    return seen


# ---------------------------------------------------------------------------
# Weak transitions by trace search


class Graph:
    """Process-level transition graph with weak moves found by searching traces."""

    def __init__(self, *roots):
        self.succ = {}
        for r in roots:
            self.succ.update(reachable(r))

    def strong(self, s, u):
        return {t for v, t in self.succ[s] if v == u}

    def weak(self, s, u):
        """Nonempty traces: tau-only for tau, exactly one u otherwise."""
        out = set()
        seen = set()
        todo = [(s, False, False)]  # state, label taken, moved
        while todo:
            node = todo.pop()
            if node in seen:
                continue
            seen.add(node)
            x, took, moved = node
            if moved and (took or u == TAU):
                out.add(x)
            for v, y in self.succ[x]:
                if v == TAU:
                    todo.append((y, took, True))
                elif v == u and not took:
                    todo.append((y, True, True))
        return out

    def weak_hat(self, s, u):
        return self.weak(s, u) | {s} if u == TAU else self.weak(s, u)

    def step_hat(self, s, u):
        return self.strong(s, u) | {s} if u == TAU else self.strong(s, u)


def clause_violations(kind, rel, g, right_rel=None):
    """Pairs of ``rel`` violating the clauses of ``kind`` (process-level)."""
    left_ans = {"strong": g.strong, "weak": g.weak_hat, "expansion": g.step_hat, "contraction": g.step_hat}[kind]
    right_ans = {"strong": g.strong, "weak": g.weak_hat, "expansion": g.weak, "contraction": g.weak_hat}[kind]
    rel2 = rel if right_rel is None else right_rel
    bad = []
    for s, t in rel:
        ok = all(any((s1, t1) in rel for t1 in left_ans(t, u)) for u, s1 in g.succ[s])
        ok = ok and all(any((s1, t1) in rel2 for s1 in right_ans(s, u)) for u, t1 in g.succ[t])
        if not ok:
            bad.append((s, t))
    return bad


def gfp(kind, g, right_rel=None, start=None):
    """Largest clause-closed subset of ``start`` (default: all pairs)."""
    states = list(g.succ)
    rel = {(s, t) for s in states for t in states} if start is None else set(start)
    while True:
        bad = clause_violations(kind, rel, g, right_rel)
        if not bad:
            return rel
        rel -= set(bad)


def oracle_relation(kind, p, q):
    """Decide any of the six relations from the definitions, on the joint state graph."""
    p, q = canonical(p), canonical(q)
    g = Graph(p, q)
    if kind in ("strong", "weak", "expansion"):
        return (p, q) in gfp(kind, g)
    wb = gfp("weak", g)
    if kind == "contraction":
        return (p, q) in gfp("contraction", g, wb)
    if kind == "rooted":
        return all(any((s1, t1) in wb for t1 in g.weak(q, u)) for u, s1 in g.succ[p]) and all(
            any((s1, t1) in wb for s1 in g.weak(p, u)) for u, t1 in g.succ[q]
        )
    if kind == "rooted-contraction":
        ctr = gfp("contraction", g, wb)
        return all(any((s1, t1) in ctr for t1 in g.strong(q, u)) for u, s1 in g.succ[p]) and all(
            any((s1, t1) in wb for s1 in g.weak(p, u)) for u, t1 in g.succ[q]
        )
    raise ValueError(kind)
