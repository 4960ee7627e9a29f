import pytest
from hypothesis import given

from conftest import finite_processes, processes
from oracles import naive_step
from ccs.errors import NotVisible, OpenTerm, UnguardedRecursion
from ccs.semantics import no_label, step, trace_holds, unique_label
from ccs.syntax import NIL, TAU, In, Out, Par, Prefix, Relab, Relabeling, Restr, Sum, canonical, parse

a, b = In("a"), In("b")


def test_ex_a_three_transitions():
    got = step(parse("a.0 | 'a.0"))
    assert got == {
        (a, parse("0 | 'a.0")),
        (Out("a"), parse("a.0 | 0")),
        (TAU, parse("0 | 0")),
    }


def test_rec_unfolds():
    assert step(parse("rec A. a.A")) == {(a, canonical(parse("rec A. a.A")))}
    assert step(NIL) == frozenset()


def test_unguarded_recursion_is_an_error():
    with pytest.raises(UnguardedRecursion):
        step(parse("rec A. A"))
    with pytest.raises(OpenTerm):
        step(parse("a.X"))


@given(processes)
def test_step_matches_naive_evaluator(p):
    assert step(p) == naive_step(p)


@given(finite_processes)
def test_step_matches_naive_evaluator_on_finite_terms(p):
    assert step(p) == naive_step(p)


@given(finite_processes, finite_processes)
def test_sum_and_par_symmetry(p, q):
    assert step(Sum(p, q)) == step(Sum(q, p))
    swapped = {(u, canonical(Par(t.right, t.left))) for u, t in step(Par(q, p))}
    assert step(Par(p, q)) == swapped


@given(finite_processes)
def test_restriction_blocks_names(p):
    for u, _ in step(Restr({"a"}, p)):
        assert u == TAU or u.name != "a"


@given(finite_processes)
def test_relabeling_transitions(p):
    rf = Relabeling.of({"a": "b"})
    expected = {(rf(u), canonical(Relab(q, rf))) for u, q in step(p)}
    assert step(Relab(p, rf)) == expected


def test_trace_holds():
    p = parse("a.0 | 'a.0")
    assert trace_holds(p, [], p)
    assert trace_holds(parse("a.0"), [a], NIL)
    assert trace_holds(p, [TAU], parse("0 | 0"))
    assert not trace_holds(p, [b], NIL)


def test_label_lists():
    assert no_label([]) and no_label([TAU, TAU]) and not no_label([TAU, a])
    assert unique_label(a, [TAU, a, TAU])
    assert not unique_label(a, [a, b])
    assert not unique_label(a, [a, a])
    with pytest.raises(NotVisible):
        unique_label(TAU, [TAU])


def test_prefix_step():
    assert step(Prefix(a, NIL)) == {(a, NIL)}
