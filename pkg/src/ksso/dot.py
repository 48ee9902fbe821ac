"""Graphviz DOT rendering with deterministic node and edge order."""

from __future__ import annotations

from .automaton import Automaton, natural_key
from .composition import CcAutomaton, state_key
from .observer import ObserverAutomaton


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _header(name: str) -> list[str]:
    return [f"digraph {_q(name)} {{", "  rankdir=LR;", "  node [shape=circle];"]


def _start_edges(ids: list[str]) -> list[str]:
    lines = []
    for i, node in enumerate(ids):
        lines.append(f'  "__start{i}" [shape=point, style=invis, label=""];')
        lines.append(f'  "__start{i}" -> {node};')
    return lines


def automaton_to_dot(aut: Automaton, name: str = "G") -> str:
    """Secret states are drawn as double circles."""
    lines = _header(name)
    for x in aut.states:
        shape = ' [shape=doublecircle]' if x in aut.secrets else ""
        lines.append(f"  {_q(x)}{shape};")
    lines += _start_edges([_q(x) for x in sorted(aut.initials, key=natural_key)])
    for src, ev, dst in aut.triples():
        lines.append(f"  {_q(src)} -> {_q(dst)} [label={_q(ev)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def observer_to_dot(obs: ObserverAutomaton, name: str = "Obs") -> str:
    order = sorted(obs.beliefs, key=lambda q: [natural_key(x) for x in obs.source.names(q)])
    lines = _header(name)
    lines[2] = "  node [shape=box];"
    for q in order:
        lines.append(f"  {_q(obs.label(q))};")
    roots = sorted(obs.roots, key=order.index)
    lines += _start_edges([_q(obs.label(r)) for r in roots])
    for q in order:
        for ev in obs.events:
            r = obs.successor(q, ev)
            if r is not None:
                lines.append(f"  {_q(obs.label(q))} -> {_q(obs.label(r))} [label={_q(ev)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cc_to_dot(cc: CcAutomaton, name: str = "Cc") -> str:
    """DEAD-right states are filled grey."""
    order = sorted(cc.states, key=state_key)
    lines = _header(name)
    lines[2] = "  node [shape=box];"
    for s in order:
        style = " [style=filled, fillcolor=lightgrey]" if s.dead else ""
        lines.append(f"  {_q(cc.label(s))}{style};")
    lines += _start_edges([_q(cc.label(s)) for s in cc.initials])
    for s in order:
        for e, t in cc.successors(s):
            lines.append(f"  {_q(cc.label(s))} -> {_q(cc.label(t))} [label={_q(e.label())}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
