import pytest
from hypothesis import given

from conftest import processes
from oracles import Graph
from ccs.errors import OpenTerm, StateBudgetExceeded
from ccs.lts import explore, find_weak_trace, is_stable, saturate, to_dot, weak_lts
from ccs.semantics import no_label, trace_holds, unique_label
from ccs.syntax import NIL, TAU, In, is_tau, parse


def test_explore_examples():
    l = explore(parse("a.0 | 'a.0"))
    assert (len(l), len(l.edges)) == (4, 5)
    assert (len(explore(NIL)), len(explore(NIL).edges)) == (1, 0)
    rec = explore(parse("rec A. a.A"))
    assert len(rec) == 1 and rec.edges == ((0, In("a"), 0),)


def test_explore_budget():
    with pytest.raises(StateBudgetExceeded) as info:
        explore(parse("rec A. (a.A | b.0)"), max_states=50)
    assert info.value.visited == 50 and info.value.frontier
    with pytest.raises(OpenTerm):
        explore(parse("a.X"))


def test_saturate_examples():
    w = saturate(explore(parse("t.a.0")))
    a0, nil = w.state_of(parse("a.0")), w.state_of(NIL)
    assert a0 in w.eps[w.root]
    assert nil in w.weak(w.root, In("a"))
    assert all(s in w.eps[s] for s in range(len(w)))
    assert w.weak_hat(w.root, TAU) == w.eps[w.root]
    assert w.step_hat(w.root, TAU) == {w.root, a0}


def test_stability():
    for text, stable in (("a.0", True), ("t.0", False), ("a.0 | 'a.0", False)):
        l = explore(parse(text))
        assert is_stable(l, l.root) is stable


def test_dot():
    assert to_dot(explore(NIL)).count("->") == 1  # only the root marker
    dot = to_dot(explore(parse("a.0")))
    assert 'label="a"' in dot and dot.count("[shape=") == 3
    assert to_dot(explore(parse("a.0 | 'a.0"))) == to_dot(explore(parse("a.0 | 'a.0")))


@given(processes)
def test_eps_is_reflexive_transitive_and_contains_tau(p):
    w = weak_lts(p)
    for s in range(len(w)):
        assert s in w.eps[s]
        assert w.post(s, TAU) <= w.eps[s]
        for t in w.eps[s]:
            assert w.eps[t] <= w.eps[s]


@given(processes)
def test_weak_matches_trace_oracle(p):
    w = weak_lts(p)
    g = Graph(p)
    for s in range(len(w)):
        x = w.states[s]
        for u in {u for _, u, _ in w.base.edges} | {TAU}:
            assert {w.states[t] for t in w.weak(s, u)} == g.weak(x, u)


@given(processes)
def test_weak_transitions_have_traces(p):
    w = weak_lts(p)
    for s in range(len(w)):
        for u in w.weak_actions(s):
            for t in w.weak(s, u):
                acts = find_weak_trace(w, s, u, t)
                assert acts and trace_holds(w.states[s], acts, w.states[t])
                assert no_label(acts) if is_tau(u) else unique_label(u, acts)


def test_saturate_is_deterministic():
    l = explore(parse("rec A. (a.t.A + t.b.0)"))
    assert saturate(l)._weak == saturate(l)._weak
