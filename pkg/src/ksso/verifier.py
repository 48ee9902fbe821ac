"""Opacity decisions built on the concurrent composition.

:func:`check_k_sso` runs the whole pipeline: observer, 0-step gate,
subautomata, composition, then a breadth-first search whose depth counts only
observable moves.  Reaching a composed state whose right component is
:data:`~ksso.composition.DEAD` within ``K`` observable steps refutes opacity.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Any, NamedTuple

from .automaton import Automaton, accessible_part, natural_key
from .composition import DEAD, CcAutomaton, CcEvent, CcState, build_concurrent_composition
from .observer import BeliefPartition, ObserverAutomaton, build_multi_root_observer, build_observer, classify_beliefs
from .subautomata import initial_secret_subautomaton, nonsecret_subautomaton

__all__ = [
    "UNBOUNDED",
    "Reach",
    "WitnessStep",
    "Witness",
    "Verdict",
    "Construction",
    "construct",
    "observable_depth_reach",
    "check_zero_sso",
    "check_k_sso",
    "check_inf_sso",
    "upper_bound_kstar",
    "normalize_k",
]

UNBOUNDED = None


class Reach(NamedTuple):
    start: CcState
    steps: tuple[tuple[CcEvent, CcState], ...]
    depth: int

    @property
    def target(self) -> CcState:
        return self.steps[-1][1] if self.steps else self.start


def observable_depth_reach(cc: CcAutomaton, k: int | None) -> Reach | None:
    """Find a DEAD-right state within ``k`` observable steps of an initial state.

    ``k=UNBOUNDED`` searches the whole composition.  The returned path has
    minimal observable depth.
    """
    if k is not None and k < 0:
        raise ValueError("bound must be non-negative")
    parent: dict[CcState, tuple[CcState, CcEvent] | None] = {}
    layer: list[CcState] = []
    for s in cc.initials:
        assert s.right is not DEAD, "initial composed state with DEAD right component"
        if s not in parent:
            parent[s] = None
            layer.append(s)

    depth = 0
    while layer:
        # unobservable moves stay within the layer
        members = list(layer)
        queue = deque(layer)
        while queue:
            s = queue.popleft()
            for e, t in cc.successors(s):
                if not e.observable and t not in parent:
                    parent[t] = (s, e)
                    members.append(t)
                    queue.append(t)

        for s in members:
            if s.right is DEAD:
                return _trace(parent, s, depth)

        if k is not None and depth >= k:
            return None
        nxt = []
        for s in members:
            for e, t in cc.successors(s):
                if e.observable and t not in parent:
                    parent[t] = (s, e)
                    nxt.append(t)
        layer = nxt
        depth += 1
    return None


def _trace(parent, target: CcState, depth: int) -> Reach:
    steps = []
    s = target
    while parent[s] is not None:
        prev, e = parent[s]
        steps.append((e, s))
        s = prev
    steps.reverse()
    return Reach(s, tuple(steps), depth)


# -- verdicts ---------------------------------------------------------------


class WitnessStep(NamedTuple):
    event: CcEvent
    left: str
    right: frozenset[str] | None  # None marks DEAD

    def state_label(self) -> str:
        return _pair_label(self.left, self.right)


def _pair_label(left: str, right: frozenset[str] | None) -> str:
    if right is None:
        return f"({left}, ∅)"
    return f"({left}, {{{','.join(sorted(right, key=natural_key))}}})"


@dataclass(frozen=True)
class Witness:
    """Counterexample to opacity.

    ``alpha`` is an observation after which ``secret_state`` is possible; the
    path is a composed run from ``(secret_state, start_right)`` to a DEAD-right
    state.  For a 0-step violation the path is empty.
    """

    alpha: tuple[str, ...]
    secret_state: str
    path: tuple[WitnessStep, ...] = ()
    observable_depth: int = 0
    start_right: frozenset[str] | None = None
    beta: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.beta is None:
            object.__setattr__(
                self, "beta", tuple(s.event.right for s in self.path if s.event.observable)
            )

    @property
    def left_events(self) -> tuple[str, ...]:
        return tuple(s.event.left for s in self.path)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "alpha": list(self.alpha),
            "secret_state": self.secret_state,
            "path": [
                {
                    "event_left": s.event.left,
                    "event_right": s.event.right if s.event.observable else "eps",
                    "state": s.state_label(),
                }
                for s in self.path
            ],
            "observable_depth": self.observable_depth,
        }
        if self.start_right is not None:
            d["start"] = _pair_label(self.secret_state, self.start_right)
        if self.beta:
            d["beta"] = list(self.beta)
        return d


@dataclass(frozen=True)
class Verdict:
    property: str  # "0-sso" | "k-sso" | "inf-sso"
    opaque: bool
    k: int | None = None
    k_normalized: int | None = None
    kstar: int | None = None
    witness: Witness | None = None
    sizes: dict[str, int | None] = field(default_factory=dict)
    elapsed_ms: float = 0.0
    mode: str | None = None  # set by the oracle only

    def __post_init__(self):
        if self.opaque != (self.witness is None):
            raise ValueError("a verdict carries a witness exactly when opacity fails")

    def to_dict(self) -> dict[str, Any]:
        d = {
            "property": self.property,
            "k": self.k,
            "k_normalized": self.k_normalized,
            "kstar": self.kstar,
            "opaque": self.opaque,
            "witness": self.witness.to_dict() if self.witness else None,
            "sizes": dict(self.sizes),
            "elapsed_ms": self.elapsed_ms,
        }
        if self.mode is not None:
            d["mode"] = self.mode
        return d


# -- pipeline -------------------------------------------------------------


def upper_bound_kstar(ghat: Automaton, g: Automaton) -> int:
    if len(ghat) == 0:
        return 0
    return len(ghat) * 2 ** len(g.nonsecrets) - 1


def normalize_k(k: int, kstar: int) -> int:
    return min(k, kstar)


@dataclass(frozen=True)
class Construction:
    """Every intermediate structure built for one system."""

    g: Automaton
    observer: ObserverAutomaton
    partition: BeliefPartition
    ghat: Automaton
    gtilde: Automaton
    gtilde_obs: ObserverAutomaton
    cc: CcAutomaton
    kstar: int

    def sizes(self) -> dict[str, int]:
        return {"states": len(self.g), "observer": len(self.observer), "cc": len(self.cc)}


def _compose(g: Automaton, obs: ObserverAutomaton) -> Construction:
    partition = classify_beliefs(obs, g.secrets)
    ghat = initial_secret_subautomaton(g)
    gtilde = nonsecret_subautomaton(g, partition.hybrid)
    roots = [q - g.secrets for q in partition.hybrid]
    gtilde_obs = build_multi_root_observer(gtilde, roots)
    cc = build_concurrent_composition(ghat, gtilde_obs, partition.hybrid, g.secrets)
    bound = len(ghat) * 2 ** len(g.nonsecrets)
    assert len(cc) <= bound, "composition exceeds |X^| * 2^|X \\ X_S| states"
    assert len(obs) <= 2 ** len(g) - 1
    return Construction(g, obs, partition, ghat, gtilde, gtilde_obs, cc, upper_bound_kstar(ghat, g))


def construct(g: Automaton) -> Construction:
    """Build all structures for the accessible part of ``g`` (no early exit)."""
    g = accessible_part(g, g.initials)
    return _compose(g, build_observer(g))


def _zero_witness(obs: ObserverAutomaton, secrets: frozenset[str]) -> Witness | None:
    for q in obs.beliefs:
        members = obs.members(q)
        if members <= secrets:
            x = obs.source.names(q)[0]
            return Witness(alpha=obs.access_word(q), secret_state=x)
    return None


def check_zero_sso(obs: ObserverAutomaton, secrets) -> Verdict:
    witness = _zero_witness(obs, frozenset(secrets))
    return Verdict(
        property="0-sso",
        opaque=witness is None,
        k=0,
        k_normalized=0,
        witness=witness,
        sizes={"states": len(obs.source), "observer": len(obs), "cc": None},
    )


def _witness_from_reach(c: Construction, reach: Reach) -> Witness:
    cc = c.cc
    q = cc.origin[reach.start]
    alpha = c.observer.access_word(c.observer.belief_of(q))
    steps = tuple(WitnessStep(e, s.left, cc.right_members(s)) for e, s in reach.steps)
    return Witness(
        alpha=alpha,
        secret_state=reach.start.left,
        path=steps,
        observable_depth=reach.depth,
        start_right=cc.right_members(reach.start),
    )


def _run(g: Automaton, k: int | None, prop: str, cross_check: bool = False) -> Verdict:
    t0 = time.perf_counter()
    g = accessible_part(g, g.initials)
    obs = build_observer(g)
    zero = check_zero_sso(obs, g.secrets)

    def elapsed():
        return (time.perf_counter() - t0) * 1000.0

    if not zero.opaque:
        return Verdict(
            property=prop,
            opaque=False,
            k=k,
            k_normalized=None,
            kstar=None,
            witness=zero.witness,
            sizes=zero.sizes,
            elapsed_ms=elapsed(),
        )

    c = _compose(g, obs)
    if k == 0:
        return Verdict(prop, True, 0, 0, c.kstar, None, c.sizes(), elapsed())

    bound = UNBOUNDED if k is None else normalize_k(k, c.kstar)
    reach = observable_depth_reach(c.cc, bound)
    if cross_check and k is None:
        other = observable_depth_reach(c.cc, c.kstar)
        assert (reach is None) == (other is None), "unbounded and K* searches disagree"
        assert reach is None or reach.depth == other.depth
    witness = None if reach is None else _witness_from_reach(c, reach)
    return Verdict(
        property=prop,
        opaque=reach is None,
        k=k,
        k_normalized=c.kstar if k is None else bound,
        kstar=c.kstar,
        witness=witness,
        sizes=c.sizes(),
        elapsed_ms=elapsed(),
    )


def check_k_sso(g: Automaton, k: int) -> Verdict:
    if not isinstance(k, int) or k < 0:
        raise ValueError(f"K must be a non-negative integer, got {k!r}")
    return _run(g, k, "k-sso")


def check_inf_sso(g: Automaton, cross_check: bool = False) -> Verdict:
    """Strong infinite-step opacity via an unbounded search.

    With ``cross_check`` the search bounded at K* is also run and both results
    are asserted equal.
    """
    return _run(g, None, "inf-sso", cross_check=cross_check)
