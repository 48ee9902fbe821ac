"""The two restrictions of a system used by the composition.

Both functions return plain :class:`~ksso.automaton.Automaton` values over the
full event alphabet of the input.
"""

from __future__ import annotations

from typing import Iterable

from .automaton import Automaton, accessible_part


def initial_secret_subautomaton(g: Automaton) -> Automaton:
    """Part of ``g`` reachable from its secret states, rooted at them.

    Secret labels are kept.  Empty when ``g`` has no secret states.
    """
    return accessible_part(g, g.secrets)


def nonsecret_roots(g: Automaton, hybrid: Iterable[Iterable[str]]) -> frozenset[str]:
    roots: set[str] = set()
    for q in hybrid:
        roots.update(x for x in q if x not in g.secrets)
    return frozenset(roots)


def nonsecret_subautomaton(g: Automaton, hybrid: Iterable[Iterable[str]]) -> Automaton:
    """Delete the secret states of ``g`` (and their transitions), then keep
    what is reachable from the non-secret members of the hybrid beliefs."""
    keep = g.nonsecrets
    trans = {}
    for (src, ev), dsts in g.transitions.items():
        if src in keep:
            dsts = dsts & keep
            if dsts:
                trans[(src, ev)] = dsts
    pruned = Automaton(
        states=tuple(keep),
        alphabet=g.alphabet,
        transitions=trans,
        initials=frozenset(),
        secrets=frozenset(),
    )
    return accessible_part(pruned, nonsecret_roots(g, hybrid))
