"""Concurrent composition of the initial-secret subautomaton with the
multi-rooted observer of the non-secret subautomaton.

A composed state pairs a concrete state reached after a secret visit (left)
with the belief of non-secret runs that still match the observation so far
(right).  When no such run survives the right component becomes :data:`DEAD`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .automaton import Automaton, natural_key
from .observer import ObserverAutomaton

__all__ = ["DEAD", "CcState", "CcEvent", "CcAutomaton", "build_concurrent_composition"]


class _Dead:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "DEAD"

    def __str__(self) -> str:
        return "∅"

    def __reduce__(self):
        return (_Dead, ())


DEAD = _Dead()


class CcState(NamedTuple):
    left: str
    right: "int | _Dead"

    @property
    def dead(self) -> bool:
        return self.right is DEAD


class CcEvent(NamedTuple):
    left: str
    right: str | None  # None is the empty string

    @property
    def observable(self) -> bool:
        return self.right is not None

    def label(self) -> str:
        return f"({self.left},{self.right if self.right is not None else 'ε'})"


def state_key(s: CcState) -> tuple:
    if s.right is DEAD:
        return (natural_key(s.left), 1, 0)
    return (natural_key(s.left), 0, s.right)


@dataclass(frozen=True)
class CcAutomaton:
    ghat: Automaton
    gtilde_obs: ObserverAutomaton
    states: tuple[CcState, ...]
    events: tuple[CcEvent, ...]
    trans: dict[CcState, tuple[tuple[CcEvent, CcState], ...]]
    initials: tuple[CcState, ...]
    # initial state -> hybrid belief of the system observer it came from
    origin: dict[CcState, frozenset[str]]

    def __len__(self) -> int:
        return len(self.states)

    def right_members(self, s: CcState) -> frozenset[str] | None:
        if s.right is DEAD:
            return None
        return self.gtilde_obs.members(s.right)

    def label(self, s: CcState) -> str:
        if s.right is DEAD:
            return f"({s.left}, ∅)"
        return f"({s.left}, {self.gtilde_obs.label(s.right)})"

    def successors(self, s: CcState) -> tuple[tuple[CcEvent, CcState], ...]:
        return self.trans.get(s, ())


def build_concurrent_composition(
    ghat: Automaton,
    gtilde_obs: ObserverAutomaton,
    hybrid: Iterable[Iterable[str]],
    secrets: Iterable[str],
) -> CcAutomaton:
    secrets = frozenset(secrets)
    hybrid = sorted((frozenset(q) for q in hybrid), key=lambda q: sorted(map(natural_key, q)))
    gtilde = gtilde_obs.source

    expected = {q - secrets for q in hybrid}
    actual = {gtilde_obs.members(r) for r in gtilde_obs.roots}
    if expected != actual:
        raise ValueError("observer roots do not match the non-secret parts of the hybrid beliefs")
    # right components live in G̃, which has no secret states
    assert not secrets & set(gtilde.states), "secret state in the non-secret subautomaton"

    origin: dict[CcState, frozenset[str]] = {}
    for q in hybrid:
        y = gtilde.mask(q - secrets)
        for x in sorted(q & secrets, key=natural_key):
            origin.setdefault(CcState(x, y), q)
    initials = tuple(sorted(origin, key=state_key))

    alpha = ghat.alphabet
    events = tuple(
        CcEvent(ev, ev) if ev in alpha.observable else CcEvent(ev, None) for ev in alpha.events
    )

    trans: dict[CcState, tuple[tuple[CcEvent, CcState], ...]] = {}
    seen = set(initials)
    order = list(initials)
    queue = deque(initials)
    while queue:
        s = queue.popleft()
        out = []
        for e in events:
            lefts = ghat.transitions.get((s.left, e.left))
            if not lefts:
                continue
            if e.observable and s.right is not DEAD:
                r = gtilde_obs.successor(s.right, e.left)
                right = DEAD if r is None else r
            else:
                right = s.right
            for x in sorted(lefts, key=natural_key):
                t = CcState(x, right)
                out.append((e, t))
                if t not in seen:
                    seen.add(t)
                    order.append(t)
                    queue.append(t)
        if out:
            trans[s] = tuple(out)

    return CcAutomaton(
        ghat=ghat,
        gtilde_obs=gtilde_obs,
        states=tuple(order),
        events=events,
        trans=trans,
        initials=initials,
        origin=origin,
    )
