import itertools

from hypothesis import given, settings, strategies as st

from ksso import (
    Automaton,
    Run,
    build_observer,
    classify_beliefs,
    initial_secret_subautomaton,
    is_nonsecret_run,
    nonsecret_subautomaton,
)
from ksso.oracle import GeneratorParams, random_automaton


def test_ghat_fixture_d(fixture_d):
    ghat = initial_secret_subautomaton(fixture_d)
    assert ghat.states == ("1", "3")
    assert ghat.initials == {"1"}
    assert list(ghat.triples()) == [("1", "b", "3")]
    assert ghat.alphabet == fixture_d.alphabet


def test_ghat_empty_without_secrets(fixture_d):
    g = Automaton(fixture_d.states, fixture_d.alphabet, fixture_d.transitions, fixture_d.initials, frozenset())
    assert len(initial_secret_subautomaton(g)) == 0


def test_ghat_example(example):
    ghat = initial_secret_subautomaton(example)
    assert ghat.states == ("5", "6", "7", "8")
    assert ghat.initials == {"5", "7"}
    assert ghat.secrets == {"5", "7"}
    assert list(ghat.triples()) == [("5", "u", "6"), ("6", "c", "6"), ("7", "b", "8"), ("8", "c", "8")]


def test_gtilde_fixture_d(fixture_d):
    part = classify_beliefs(build_observer(fixture_d), fixture_d.secrets)
    gtilde = nonsecret_subautomaton(fixture_d, part.hybrid)
    assert gtilde.initials == {"0"}
    assert gtilde.states == ("0",)
    assert gtilde.transitions == {}


def test_gtilde_example(example):
    part = classify_beliefs(build_observer(example), example.secrets)
    gtilde = nonsecret_subautomaton(example, part.hybrid)
    assert gtilde.initials >= {"1", "2", "3", "4"}
    assert gtilde.initials == {"1", "2", "3", "4", "6"}
    assert gtilde.states == ("1", "2", "3", "4", "6")
    assert list(gtilde.triples()) == [("1", "u", "2"), ("2", "b", "3"), ("3", "u", "4"), ("6", "c", "6")]


def test_gtilde_empty_when_no_hybrid(example):
    g = Automaton(example.states, example.alphabet, example.transitions, example.initials, frozenset())
    assert len(nonsecret_subautomaton(g, [])) == 0


def _runs(aut, x, length):
    if length == 0:
        yield Run(x)
        return
    for ev in aut.alphabet.events:
        for y in aut.transitions.get((x, ev), ()):
            for r in _runs(aut, y, length - 1):
                yield Run(x, ((ev, y),) + r.steps)


params = st.builds(
    GeneratorParams,
    n_states=st.integers(1, 6),
    n_obs_events=st.integers(1, 2),
    n_unobs_events=st.integers(0, 1),
    transition_density=st.sampled_from([0.2, 0.4]),
    secret_fraction=st.sampled_from([0.2, 0.4, 0.6]),
    seed=st.integers(0, 2**63),
)


@settings(max_examples=100, deadline=None)
@given(params)
def test_gtilde_runs_are_exactly_nonsecret_runs(p):
    g = random_automaton(p)
    part = classify_beliefs(build_observer(g), g.secrets)
    gtilde = nonsecret_subautomaton(g, part.hybrid)
    assert not set(gtilde.states) & g.secrets
    for src, _, dst in gtilde.triples():
        assert src not in g.secrets and dst not in g.secrets
    roots = {x for q in part.hybrid for x in q} - g.secrets
    assert gtilde.initials == roots
    for x0 in sorted(roots):
        for n in range(4):
            in_g = {r for r in _runs(g, x0, n) if is_nonsecret_run(g, r)}
            in_gtilde = set(_runs(gtilde, x0, n))
            assert in_g == in_gtilde


@settings(max_examples=100, deadline=None)
@given(params)
def test_ghat_preserves_language_from_secrets(p):
    g = random_automaton(p)
    ghat = initial_secret_subautomaton(g)
    for xs in sorted(g.secrets):
        for n in range(4):
            for seq in itertools.product(g.alphabet.events, repeat=n):
                ok_g = any(r.events == seq for r in _runs(g, xs, n))
                ok_hat = any(r.events == seq for r in _runs(ghat, xs, n))
                assert ok_g == ok_hat
