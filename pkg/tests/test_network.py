import pytest
from hypothesis import given, settings, strategies as st

from cutsets.network import (
    LocalState, ModelError, disable, enabled_labels, initial_states, parse_network,
    serialize_network, step,
)
from cutsets.oracle import RandomSpec, random_network

from .conftest import locals_of

MINIMAL = """automaton a : 2
a 1 -> 2 on l
init a in {1}
"""


def label_names(net):
    return {lab.name for lab in net.labels}


def test_parse_minimal_document():
    net, ctx = parse_network(MINIMAL)
    assert net.names == ("a",)
    assert net.sizes == (2,)
    assert label_names(net) == {"l"}
    assert ctx[0] == {1}


def test_parse_example(ex1):
    net, ctx = ex1
    assert net.names == ("a", "b", "c", "d")
    assert net.sizes == (3, 3, 2, 2)
    assert len(net.labels) == 6
    assert sum(len(net.transitions(a)) for a in range(4)) == 12
    assert [sorted(ctx[a]) for a in range(4)] == [[1], [1], [1, 2], [2]]
    l1 = net.label("l1")
    assert l1.precond == locals_of(net, "a=1", "b=3")
    assert l1.postcond == locals_of(net, "a=3", "b=2")


@pytest.mark.parametrize("doc, fragment", [
    ("automaton a : 2\na 1 -> 2 on l\ninit a in {}\n", "empty context"),
    ("automaton a : 2\ninit a in {1}\nautomaton a : 3\n", "duplicate automaton"),
    ("automaton a : 2\ninit a in {3}\n", "out of range"),
    ("automaton a : 2\nb 1 -> 2 on l\ninit a in {1}\n", "unknown automaton"),
    ("automaton a : 2\na 1 -> 2 on l\n", "missing init"),
    ("automaton a : 2\ninit a in {1}\ninit a in {2}\n", "duplicate init"),
    ("automaton a : 2\na 1 -> 2 on l\na 1 -> 2 on l\ninit a in {1}\n", "already has a transition"),
    ("automaton a : 2\na 1 -> 2 on l\na 2 -> 1 on l\ninit a in {1}\n", "already has a transition"),
    ("automaton a : 2\na 1 => 2 on l\ninit a in {1}\n", "syntax error"),
    ("automaton a : 0\n", "states"),
])
def test_parse_errors(doc, fragment):
    with pytest.raises(ModelError, match=fragment):
        parse_network(doc)


def test_parse_error_position():
    with pytest.raises(ModelError) as info:
        parse_network("automaton a : 2\n\n   bogus line\n")
    assert info.value.line == 3
    assert info.value.column == 4


def test_comments_and_blank_lines():
    doc = "# header\n\nautomaton a : 2   # two states\n\ta 1 -> 2 on l # move\ninit a in { 1 , 2 }\n"
    net, ctx = parse_network(doc)
    assert ctx[0] == {1, 2}
    assert net.transitions(0) == [(1, "l", 2)]


def test_serialize_roundtrip(ex1):
    net, ctx = ex1
    text = serialize_network(net, ctx)
    assert parse_network(text) == (net, ctx)
    assert serialize_network(*parse_network(text)) == text


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_serialize_roundtrip_random(seed):
    net, ctx = random_network(RandomSpec(n_automata=4, n_states=3, n_labels=8, seed=seed))
    assert parse_network(serialize_network(net, ctx)) == (net, ctx)


def test_disable_nothing(ex1):
    net, _ = ex1
    assert disable(net, ()) == net


@pytest.mark.parametrize("states, removed", [
    (("b=1",), {"l2", "l5", "l6"}),
    (("c=2", "d=2"), {"l3", "l5"}),
])
def test_disable(ex1, states, removed):
    net, _ = ex1
    out = disable(net, locals_of(net, *states))
    assert label_names(out) == label_names(net) - removed
    assert out.sizes == net.sizes


def test_disable_unknown_state(ex1):
    net, _ = ex1
    with pytest.raises(ModelError):
        disable(net, [LocalState(0, 9)])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.data())
def test_disable_monotone(seed, data):
    net, _ = random_network(RandomSpec(n_automata=4, n_states=3, n_labels=10, seed=seed))
    pool = net.local_states()
    a = data.draw(st.sets(st.sampled_from(pool)))
    b = data.draw(st.sets(st.sampled_from(pool)))
    assert label_names(disable(net, a | b)) == label_names(disable(net, a)) & label_names(disable(net, b))


@pytest.mark.parametrize("state", [(1, 1, 1, 2), (1, 1, 2, 2)])
def test_enabled_labels(ex1, state):
    net, _ = ex1
    assert {lab.name for lab in enabled_labels(net, state)} == {"l2", "l5"}


def test_enabled_labels_deadlock():
    net, _ = parse_network(MINIMAL)
    assert enabled_labels(net, (2,)) == []


def test_step(ex1):
    net, _ = ex1
    assert step(net, (1, 1, 1, 2), "l5") == (1, 3, 1, 1)
    assert step(net, (1, 1, 1, 2), "l2") == (2, 2, 1, 2)
    with pytest.raises(ModelError, match="not enabled"):
        step(net, (1, 1, 1, 2), "l1")


def test_step_self_loop():
    net, _ = parse_network("automaton a : 1\na 1 -> 1 on l\ninit a in {1}\n")
    assert step(net, (1,), "l") == (1,)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.data())
def test_step_keeps_untouched_automata(seed, data):
    net, _ = random_network(RandomSpec(n_automata=5, n_states=3, n_labels=12, seed=seed))
    s = tuple(data.draw(st.integers(1, k)) for k in net.sizes)
    for lab in enabled_labels(net, s):
        nxt = step(net, s, lab)
        touched = {a for a, _, _ in lab.moves}
        assert all(nxt[b] == s[b] for b in range(net.n_automata) if b not in touched)
        assert all(nxt[a] == j for a, _, j in lab.moves)


def test_initial_states(ex1):
    net, ctx = ex1
    assert list(initial_states(net, ctx)) == [(1, 1, 1, 2), (1, 1, 2, 2)]
    net1, ctx1 = parse_network(MINIMAL)
    assert list(initial_states(net1, ctx1)) == [(1,)]
    doc = "".join(f"automaton {x} : 2\ninit {x} in {{1,2}}\n" for x in "pqr")
    assert len(list(initial_states(*parse_network(doc)))) == 8


def test_local_state_codes_follow_order(ex1):
    net, _ = ex1
    lss = net.local_states()
    assert lss == sorted(lss)
    assert [net.code(x) for x in lss] == list(range(len(lss)))
    assert [net.decode(net.code(x)) for x in lss] == lss
