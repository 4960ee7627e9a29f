"""Finite LTS construction, tau-saturation and DOT export."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

from .errors import OpenTerm, StateBudgetExceeded
from .semantics import sorted_transitions, step
from .syntax import TAU, Action, Label, Process, action_key, canonical, free_variables, is_tau, pretty

DEFAULT_MAX_STATES = 10_000


@dataclass(frozen=True, eq=False)
class Lts:
    states: tuple[Process, ...]
    edges: tuple[tuple[int, Action, int], ...]
    root: int = 0

    @cached_property
    def index(self) -> dict[Process, int]:
        return {p: i for i, p in enumerate(self.states)}

    @cached_property
    def succ(self) -> tuple[tuple[tuple[Action, int], ...], ...]:
        out: list[list] = [[] for _ in self.states]
        for s, u, t in self.edges:
            out[s].append((u, t))
        return tuple(tuple(x) for x in out)

    @cached_property
    def _post(self) -> dict[tuple[int, Action], frozenset]:
        table: dict[tuple[int, Action], set] = {}
        for s, u, t in self.edges:
            table.setdefault((s, u), set()).add(t)
        return {k: frozenset(v) for k, v in table.items()}

    def post(self, s: int, u: Action) -> frozenset:
        return self._post.get((s, u), frozenset())

    def state_of(self, p: Process) -> int:
        return self.index[canonical(p)]

    def __len__(self):
        return len(self.states)

    @property
    def actions(self) -> list[Action]:
        return sorted({u for _, u, _ in self.edges}, key=action_key)


def explore(p: Process, max_states: int = DEFAULT_MAX_STATES) -> Lts:
    """Breadth-first closure of ``p`` under ``step``."""
    if free_variables(p):
        raise OpenTerm(f"cannot explore open term {pretty(p)}")
    root = canonical(p)
    index = {root: 0}
    states = [root]
    edges = []
    queue = deque([root])
    while queue:
        s = queue.popleft()
        si = index[s]
        for u, t in sorted_transitions(step(s)):
            if t not in index:
                if len(states) >= max_states:
                    frontier = [pretty(x) for x in list(queue)[:5]] or [pretty(t)]
                    raise StateBudgetExceeded(len(states), frontier)
                index[t] = len(states)
                states.append(t)
                queue.append(t)
            edges.append((si, u, index[t]))
    return Lts(tuple(states), tuple(edges), 0)


@dataclass(frozen=True, eq=False)
class WeakLts:
    """An LTS together with its tau-closure and weak transitions.

    Accessors, for state ``s`` and action ``u``:
      ``post(s,u)``      one strong step
      ``step_hat(s,u)``  one step, or staying put when u is tau
      ``weak(s,u)``      eps . u . eps (at least one step even for tau)
      ``weak_hat(s,u)``  eps for tau, ``weak`` for labels
    """

    base: Lts
    eps: tuple[frozenset, ...]
    _weak: dict = field(repr=False)

    @property
    def states(self):
        return self.base.states

    @property
    def succ(self):
        return self.base.succ

    @property
    def root(self) -> int:
        return self.base.root

    def __len__(self):
        return len(self.base)

    def state_of(self, p: Process) -> int:
        return self.base.state_of(p)

    def post(self, s: int, u: Action) -> frozenset:
        return self.base.post(s, u)

    def step_hat(self, s: int, u: Action) -> frozenset:
        if is_tau(u):
            return self.base.post(s, u) | {s}
        return self.base.post(s, u)

    def weak(self, s: int, u: Action) -> frozenset:
        return self._weak.get((s, u), frozenset())

    def weak_hat(self, s: int, u: Action) -> frozenset:
        return self.eps[s] if is_tau(u) else self.weak(s, u)

    def weak_actions(self, s: int) -> list[Action]:
        return sorted({u for (x, u) in self._weak if x == s}, key=action_key)

    @cached_property
    def hat_succ(self) -> tuple[tuple[tuple[Action, frozenset], ...], ...]:
        """Per state, the ``weak_hat`` targets for tau and for every weakly enabled label."""
        table: list[list] = [[(TAU, self.eps[s])] for s in range(len(self))]
        for (s, u), targets in sorted(self._weak.items(), key=lambda kv: (kv[0][0], action_key(kv[0][1]))):
            if not is_tau(u):
                table[s].append((u, targets))
        return tuple(tuple(row) for row in table)

    @cached_property
    def weak_edges(self) -> tuple[tuple[int, Label, int], ...]:
        """Visible weak triples (s, l, s') in deterministic order."""
        out = []
        for (s, u), targets in self._weak.items():
            if not is_tau(u):
                out.extend((s, u, t) for t in targets)
        return tuple(sorted(out, key=lambda e: (e[0], action_key(e[1]), e[2])))


def _eps_closure(l: Lts) -> tuple[frozenset, ...]:
    closure = []
    for s in range(len(l)):
        seen = {s}
        todo = [s]
        while todo:
            x = todo.pop()
            for t in l.post(x, TAU):
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        closure.append(frozenset(seen))
    return tuple(closure)


def saturate(l: Lts) -> WeakLts:
    eps = _eps_closure(l)
    weak: dict[tuple[int, Action], set] = {}
    for s in range(len(l)):
        for s1 in eps[s]:
            for u, s2 in l.succ[s1]:
                weak.setdefault((s, u), set()).update(eps[s2])
    return WeakLts(l, eps, {k: frozenset(v) for k, v in weak.items()})


@lru_cache(maxsize=4096)
def weak_lts(p: Process, max_states: int = DEFAULT_MAX_STATES) -> WeakLts:
    """Cached ``saturate(explore(p))``."""
    return saturate(explore(p, max_states))


def is_stable(l: Lts | WeakLts, s: int) -> bool:
    return not l.post(s, TAU)


def find_weak_trace(w: WeakLts, s: int, u: Action, target: int) -> list[Action] | None:
    """A shortest action list realising ``s =u=> target``, or None.

    For tau the list is nonempty and tau-only; for a label it contains that label once.
    """
    # phase 0: label not yet taken (or tau with no step yet), 1: done
    start = (s, 0)
    parent: dict = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        x, phase = node
        if node == (target, 1):
            acts = []
            while parent[node] is not None:
                node, a = parent[node]
                acts.append(a)
            return acts[::-1]
        for a, y in w.succ[x]:
            if is_tau(a):
                nxt = (y, 1) if is_tau(u) else (y, phase)
            elif a == u and phase == 0:
                nxt = (y, 1)
            else:
                continue
            if nxt not in parent:
                parent[nxt] = (node, a)
                queue.append(nxt)
    return None


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(l: Lts, name: str = "lts") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  __root [shape=point, label=""];']
    for i, p in enumerate(l.states):
        shape = "doublecircle" if i == l.root else "ellipse"
        lines.append(f'  s{i} [shape={shape}, label="{_dot_escape(pretty(p))}"];')
    lines.append(f"  __root -> s{l.root};")
    for s, u, t in l.edges:
        lines.append(f'  s{s} -> s{t} [label="{_dot_escape(str(u))}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
