import random
import sys
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from ccs import generate as gen  # noqa: E402
from ccs.syntax import NIL, TAU, In, Out, Par, Prefix, Rec, Relab, Relabeling, Restr, Sum, Var  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, passed: bool, detail: str = "") -> None:
    ACCEPTANCE[criterion] = (passed, detail)


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


# ---------------------------------------------------------------------------
# Strategies

names = st.sampled_from(["a", "b", "c"])
actions = st.one_of(st.just(TAU), names.map(In), names.map(Out))


def _extend(children):
    return st.one_of(
        st.builds(Prefix, actions, children),
        st.builds(Sum, children, children),
        st.builds(Par, children, children),
        st.builds(lambda ns, b: Restr(frozenset(ns), b), st.sets(names, min_size=1, max_size=2), children),
        st.builds(lambda o, n, b: Relab(b, Relabeling(((o, n),))), names, names, children),
    )


# finite (rec-free) closed terms of bounded size
finite_processes = st.recursive(st.just(NIL), _extend, max_leaves=8)

# syntax-only terms, possibly open and with binders
syntax_terms = st.recursive(
    st.one_of(st.just(NIL), st.sampled_from(["X", "Y"]).map(Var)),
    lambda ch: st.one_of(_extend(ch), st.builds(Rec, st.sampled_from(["X", "Y"]), ch)),
    max_leaves=8,
)

seeds = st.integers(min_value=0, max_value=2**32)
# generated closed finite-state processes, including recursion
processes = seeds.map(lambda s: gen.random_process(random.Random(s), 3))
pairs = seeds.map(lambda s: gen.random_pair(random.Random(s), 3))
contexts = seeds.map(lambda s: gen.random_context(random.Random(s), 3))
