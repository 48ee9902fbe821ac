"""Subset construction over observable events.

Beliefs are integer bit masks over the source automaton's state indices; use
:meth:`ObserverAutomaton.members` to turn one back into state names.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .automaton import Automaton

__all__ = [
    "ObserverAutomaton",
    "BeliefPartition",
    "unobservable_closure",
    "build_observer",
    "build_multi_root_observer",
    "classify_beliefs",
]


def closure_mask(aut: Automaton, mask: int) -> int:
    seen = mask
    frontier = mask
    unobs = aut.unobservable
    while frontier:
        nxt = 0
        for ev in unobs:
            nxt |= aut.image(frontier, ev)
        frontier = nxt & ~seen
        seen |= nxt
    return seen


def unobservable_closure(aut: Automaton, states: Iterable[str]) -> frozenset[str]:
    return frozenset(aut.names(closure_mask(aut, aut.mask(states))))


@dataclass(frozen=True)
class ObserverAutomaton:
    """Deterministic observer; possibly with several roots.

    ``beliefs`` lists every reachable belief in breadth-first discovery order,
    and ``trans`` is the partial map ``(belief, event) -> belief``.
    """

    source: Automaton
    roots: tuple[int, ...]
    beliefs: tuple[int, ...]
    trans: dict[tuple[int, str], int]
    # first-discovery parent links, used to recover shortest observations
    _parent: dict = field(repr=False, compare=False, default_factory=dict)

    @property
    def events(self) -> tuple[str, ...]:
        return self.source.observable

    def __len__(self) -> int:
        return len(self.beliefs)

    def members(self, belief: int) -> frozenset[str]:
        return frozenset(self.source.names(belief))

    def label(self, belief: int) -> str:
        return "{" + ",".join(self.source.names(belief)) + "}"

    def successor(self, belief: int, event: str) -> int | None:
        return self.trans.get((belief, event))

    def belief_of(self, states: Iterable[str]) -> int:
        return self.source.mask(states)

    def run(self, observation: Iterable[str], root: int | None = None) -> int | None:
        """Belief reached from ``root`` (default: the only root) along ``observation``."""
        if root is None:
            if len(self.roots) != 1:
                raise ValueError("observer has several roots; pass one explicitly")
            root = self.roots[0]
        q: int | None = root
        for ev in observation:
            q = self.trans.get((q, ev))
            if q is None:
                return None
        return q

    def access_word(self, belief: int) -> tuple[str, ...]:
        """A shortest observation leading from some root to ``belief``."""
        word = []
        while True:
            link = self._parent[belief]
            if link is None:
                return tuple(reversed(word))
            belief, ev = link
            word.append(ev)

    def edges(self):
        for q in self.beliefs:
            for ev in self.events:
                r = self.trans.get((q, ev))
                if r is not None:
                    yield q, ev, r


def _explore(aut: Automaton, roots: Iterable[int]) -> ObserverAutomaton:
    root_list: list[int] = []
    parent: dict[int, tuple[int, str] | None] = {}
    for r in sorted(set(roots)):
        if r == 0:
            raise ValueError("observer roots must be nonempty")
        root_list.append(r)
        parent[r] = None

    order = list(root_list)
    trans: dict[tuple[int, str], int] = {}
    queue = deque(root_list)
    events = aut.observable
    while queue:
        q = queue.popleft()
        for ev in events:
            # observable event first, unobservable tail after
            nxt = aut.image(q, ev)
            if not nxt:
                continue
            nxt = closure_mask(aut, nxt)
            trans[(q, ev)] = nxt
            if nxt not in parent:
                parent[nxt] = (q, ev)
                order.append(nxt)
                queue.append(nxt)
    return ObserverAutomaton(aut, tuple(root_list), tuple(order), trans, parent)


def build_observer(aut: Automaton) -> ObserverAutomaton:
    root = closure_mask(aut, aut.mask(aut.initials))
    return _explore(aut, [root] if root else [])


def build_multi_root_observer(aut: Automaton, roots: Iterable[Iterable[str]]) -> ObserverAutomaton:
    """Observer of ``aut`` started from each given root set.

    Roots are taken literally; they are not closed under unobservable events.
    """
    return _explore(aut, [aut.mask(r) for r in roots])


@dataclass(frozen=True)
class BeliefPartition:
    secret: frozenset[frozenset[str]]
    nonsecret: frozenset[frozenset[str]]
    hybrid: frozenset[frozenset[str]]


def classify_beliefs(obs: ObserverAutomaton, secrets: Iterable[str]) -> BeliefPartition:
    secrets = frozenset(secrets)
    sec, ns, hyb = set(), set(), set()
    for q in obs.beliefs:
        members = obs.members(q)
        if members <= secrets:
            sec.add(members)
        elif members.isdisjoint(secrets):
            ns.add(members)
        else:
            hyb.add(members)
    return BeliefPartition(frozenset(sec), frozenset(ns), frozenset(hyb))
