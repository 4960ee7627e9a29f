"""Single-variable multi-hole contexts and their guardedness classes.

A context is a process tree with a distinguished ``Hole`` leaf.  Hole-free
subtrees are kept as ``Leaf`` constants, which is what lets the classifiers
treat them uniformly as members of every class.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

from .errors import ContextError, OpenTerm
from .semantics import step
from .syntax import (
    HOLE_NAME,
    TAU,
    Action,
    Label,
    Nil,
    Par,
    Prefix,
    Process,
    Rec,
    Relab,
    Relabeling,
    Restr,
    Sum,
    Var,
    canonical,
    free_variables,
    is_tau,
    parse,
    pretty as pretty_process,
    relabel_action,
)


@dataclass(frozen=True)
class Hole:
    def __str__(self):
        return HOLE_NAME


@dataclass(frozen=True)
class Leaf:
    process: Process

    def __post_init__(self):
        if free_variables(self.process):
            raise OpenTerm(f"context constant {pretty_process(self.process)} is open")

    def __str__(self):
        return pretty_process(self.process)


@dataclass(frozen=True)
class CPrefix:
    action: Action
    body: "Context"


@dataclass(frozen=True)
class CSum:
    left: "Context"
    right: "Context"


@dataclass(frozen=True)
class CPar:
    left: "Context"
    right: "Context"


@dataclass(frozen=True)
class CRestr:
    names: frozenset
    body: "Context"

    def __post_init__(self):
        if not isinstance(self.names, frozenset):
            object.__setattr__(self, "names", frozenset(self.names))
        if not self.names:
            raise ValueError("restriction needs at least one name")


@dataclass(frozen=True)
class CRelab:
    body: "Context"
    rf: Relabeling


Context = Union[Hole, Leaf, CPrefix, CSum, CPar, CRestr, CRelab]
HOLE = Hole()


# ---------------------------------------------------------------------------
# Construction


@lru_cache(maxsize=1 << 16)
def has_hole(c: Context) -> bool:
    match c:
        case Hole():
            return True
        case Leaf():
            return False
        case CPrefix(_, b) | CRestr(_, b) | CRelab(b, _):
            return has_hole(b)
        case CSum(l, r) | CPar(l, r):
            return has_hole(l) or has_hole(r)
    raise TypeError(c)


def leaf(p: Process) -> Leaf:
    return Leaf(canonical(p))


def normalize(c: Context) -> Context:
    """Collapse every hole-free subtree into a canonical ``Leaf``."""
    if not has_hole(c):
        return leaf(to_process(c))
    match c:
        case Hole():
            return c
        case CPrefix(u, b):
            return CPrefix(u, normalize(b))
        case CSum(l, r):
            return CSum(normalize(l), normalize(r))
        case CPar(l, r):
            return CPar(normalize(l), normalize(r))
        case CRestr(ns, b):
            return CRestr(ns, normalize(b))
        case CRelab(b, rf):
            return CRelab(normalize(b), rf)
    raise TypeError(c)


def from_process(p: Process, hole: str = HOLE_NAME) -> Context:
    """Read a process whose free variable ``hole`` marks the holes."""
    fv = free_variables(p)
    if hole not in fv:
        if fv:
            raise OpenTerm(f"context has free variables {sorted(fv)}")
        return leaf(p)
    match p:
        case Var():
            return HOLE
        case Prefix(u, b):
            return CPrefix(u, from_process(b, hole))
        case Sum(l, r):
            return CSum(from_process(l, hole), from_process(r, hole))
        case Par(l, r):
            return CPar(from_process(l, hole), from_process(r, hole))
        case Restr(ns, b):
            return CRestr(ns, from_process(b, hole))
        case Relab(b, rf):
            return CRelab(from_process(b, hole), rf)
        case Rec():
            raise ContextError(f"hole under a rec binder in {pretty_process(p)}")
    raise TypeError(p)


def parse_context(text: str) -> Context:
    """Parse the process grammar extended with ``_`` for the hole."""
    return from_process(parse(text, allow_hole=True))


def to_process(c: Context, hole: Process | None = None) -> Process:
    """Rebuild a process, putting ``hole`` (default: the variable ``_``) at each hole."""
    if hole is None:
        hole = Var(HOLE_NAME)
    match c:
        case Hole():
            return hole
        case Leaf(p):
            return p
        case CPrefix(u, b):
            return Prefix(u, to_process(b, hole))
        case CSum(l, r):
            return Sum(to_process(l, hole), to_process(r, hole))
        case CPar(l, r):
            return Par(to_process(l, hole), to_process(r, hole))
        case CRestr(ns, b):
            return Restr(ns, to_process(b, hole))
        case CRelab(b, rf):
            return Relab(to_process(b, hole), rf)
    raise TypeError(c)


def pretty(c: Context) -> str:
    return pretty_process(to_process(c))


def apply(c: Context, p: Process) -> Process:
    """C[p]: every hole replaced by the closed process ``p``."""
    if free_variables(p):
        raise OpenTerm(f"cannot fill a context with open term {pretty_process(p)}")
    return to_process(c, p)


def compose(outer: Context, inner: Context) -> Context:
    match outer:
        case Hole():
            return inner
        case Leaf():
            return outer
        case CPrefix(u, b):
            return normalize(CPrefix(u, compose(b, inner)))
        case CSum(l, r):
            return normalize(CSum(compose(l, inner), compose(r, inner)))
        case CPar(l, r):
            return normalize(CPar(compose(l, inner), compose(r, inner)))
        case CRestr(ns, b):
            return normalize(CRestr(ns, compose(b, inner)))
        case CRelab(b, rf):
            return normalize(CRelab(compose(b, inner), rf))
    raise TypeError(outer)


def iterate(e: Context, n: int) -> Context:
    out: Context = HOLE
    for _ in range(n):
        out = compose(e, out)
    return out


def fixpoint(e: Context, var: str = "X") -> Process:
    """The recursive process ``rec X. e[X]``."""
    return canonical(Rec(var, to_process(e, Var(var))))


def depth(c: Context) -> int:
    match c:
        case Hole() | Leaf():
            return 0
        case CPrefix(_, b) | CRestr(_, b) | CRelab(b, _):
            return 1 + depth(b)
        case CSum(l, r) | CPar(l, r):
            return 1 + max(depth(l), depth(r))
    raise TypeError(c)


# ---------------------------------------------------------------------------
# Classification


@dataclass(frozen=True)
class Classification:
    context: bool = True
    gcontext: bool = True
    wg: bool = True
    wgs: bool = True
    sg: bool = True
    seq: bool = True

    FLAGS = ("context", "gcontext", "wg", "wgs", "sg", "seq")

    def as_dict(self) -> dict[str, bool]:
        return {k: getattr(self, k) for k in self.FLAGS}

    def implications(self) -> dict[str, bool]:
        """The lattice facts every classification must satisfy."""
        imp = lambda a, b: (not a) or b  # noqa: E731
        return {
            "wgs=>wg": imp(self.wgs, self.wg),
            "wgs=>gcontext": imp(self.wgs, self.gcontext),
            "sg=>wg": imp(self.sg, self.wg),
            "wg=>context": imp(self.wg, self.context),
            "gcontext=>context": imp(self.gcontext, self.context),
            "seq=>context": imp(self.seq, self.context),
        }


CONSTANT = Classification()
IDENTITY = Classification(wg=False, wgs=False, sg=False)


def _prefixed(c: Context) -> bool:
    """A summand of a guarded sum: a prefix over a GCONTEXT."""
    match c:
        case CPrefix(_, b):
            return classify(b).gcontext
        case Leaf(p):
            return isinstance(p, Prefix)
    return False


@lru_cache(maxsize=1 << 16)
def classify(c: Context) -> Classification:
    """Membership of ``c`` in each of the six inductive context classes."""
    if not has_hole(c):
        return CONSTANT
    match c:
        case Hole():
            return IDENTITY
        case CPrefix(u, b):
            inner = classify(b)
            return Classification(
                gcontext=inner.gcontext,
                wg=True,
                wgs=inner.gcontext,
                sg=inner.sg if is_tau(u) else True,
                seq=inner.seq,
            )
        case CSum(l, r):
            a, b = classify(l), classify(r)
            guarded = _prefixed(l) and _prefixed(r)
            return Classification(
                gcontext=guarded,
                wg=a.wg and b.wg,
                wgs=guarded,
                sg=a.sg and b.sg,
                seq=a.seq and b.seq,
            )
        case CPar(l, r):
            a, b = classify(l), classify(r)
            return Classification(
                gcontext=a.gcontext and b.gcontext,
                wg=a.wg and b.wg,
                wgs=a.wgs and b.wgs,
                sg=a.sg and b.sg,
                seq=False,
            )
        case CRestr(_, b) | CRelab(b, _):
            inner = classify(b)
            return Classification(
                gcontext=inner.gcontext, wg=inner.wg, wgs=inner.wgs, sg=inner.sg, seq=False
            )
    raise TypeError(c)


# ---------------------------------------------------------------------------
# Hole-inert transitions


@lru_cache(maxsize=1 << 16)
def context_step(c: Context) -> frozenset:
    """SOS transitions of ``c`` in which holes never move."""
    match c:
        case Hole():
            return frozenset()
        case Leaf(p):
            return frozenset((u, Leaf(q)) for u, q in step(p))
        case CPrefix(u, b):
            return frozenset({(u, b)})
        case CSum(l, r):
            return context_step(l) | context_step(r)
        case CPar(l, r):
            lt, rt = context_step(l), context_step(r)
            out = {(u, normalize(CPar(l2, r))) for u, l2 in lt}
            out |= {(u, normalize(CPar(l, r2))) for u, r2 in rt}
            for u, l2 in lt:
                for v, r2 in rt:
                    if isinstance(u, Label) and isinstance(v, Label) and v == u.complement():
                        out.add((TAU, normalize(CPar(l2, r2))))
            return frozenset(out)
        case CRestr(ns, b):
            return frozenset(
                (u, normalize(CRestr(ns, b2)))
                for u, b2 in context_step(b)
                if is_tau(u) or u.name not in ns
            )
        case CRelab(b, rf):
            return frozenset(
                (relabel_action(rf, u), normalize(CRelab(b2, rf))) for u, b2 in context_step(b)
            )
    raise TypeError(c)


# ---------------------------------------------------------------------------
# Weak guardedness of expressions with free variables


@dataclass(frozen=True)
class GuardReport:
    holds: bool
    unguarded: tuple[str, ...] = ()
    notes: tuple[str, ...] = field(default=())


def weakly_guarded_report(e: Process) -> GuardReport:
    """Check that every free variable occurrence outside a rec lies under a prefix.

    Occurrences inside a rec body cannot be turned into a context hole, so the
    condition is vacuous for them; they are listed in ``notes``.
    """
    unguarded: list[str] = []
    notes: list[str] = []

    def go(p: Process, bound: frozenset, guarded: bool, under_rec: bool):
        match p:
            case Nil():
                return
            case Var(name):
                if name in bound:
                    return
                if under_rec:
                    notes.append(f"free {name} under rec: condition vacuous")
                elif not guarded:
                    unguarded.append(name)
            case Prefix(_, b):
                go(b, bound, True, under_rec)
            case Sum(l, r) | Par(l, r):
                go(l, bound, guarded, under_rec)
                go(r, bound, guarded, under_rec)
            case Restr(_, b) | Relab(b, _):
                go(b, bound, guarded, under_rec)
            case Rec(x, b):
                go(b, bound | {x}, guarded, True)
            case _:
                raise TypeError(p)

    go(e, frozenset(), False, False)
    return GuardReport(not unguarded, tuple(unguarded), tuple(dict.fromkeys(notes)))


def weakly_guarded_expr(e: Process) -> bool:
    return weakly_guarded_report(e).holds
