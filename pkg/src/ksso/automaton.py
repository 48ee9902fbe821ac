"""Nondeterministic finite automata with a partially observable alphabet.

States and events are string identifiers.  Internally every automaton maps its
states to dense indices (in natural sort order) so that sets of states can be
handled as integer bit masks by the determinization code.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

__all__ = [
    "AutomatonError",
    "ParseError",
    "EventAlphabet",
    "Automaton",
    "Run",
    "natural_key",
    "parse_automaton",
    "load_automaton",
    "serialize_automaton",
    "step",
    "execute",
    "project",
    "accessible_part",
    "is_nonsecret_run",
]


class AutomatonError(ValueError):
    """Raised on invalid models or on queries naming unknown states/events."""


class ParseError(AutomatonError):
    def __init__(self, lineno: int | None, message: str):
        self.lineno = lineno
        self.message = message
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(where + message)


def natural_key(ident: str) -> tuple:
    """Sort key placing numeric identifiers first, in numeric order."""
    if ident.isdigit():
        return (0, int(ident), ident)
    return (1, 0, ident)


def _sorted(idents: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(idents, key=natural_key))


@dataclass(frozen=True)
class EventAlphabet:
    observable: frozenset[str]
    unobservable: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "observable", frozenset(self.observable))
        object.__setattr__(self, "unobservable", frozenset(self.unobservable))
        both = self.observable & self.unobservable
        if both:
            raise AutomatonError(
                f"event declared both observable and unobservable: {', '.join(_sorted(both))}"
            )
        for ev in self.observable | self.unobservable:
            if not isinstance(ev, str) or not ev:
                raise AutomatonError(f"invalid event identifier {ev!r}")

    @property
    def events(self) -> tuple[str, ...]:
        return _sorted(self.observable | self.unobservable)

    def __contains__(self, event: object) -> bool:
        return event in self.observable or event in self.unobservable

    def is_observable(self, event: str) -> bool:
        if event in self.observable:
            return True
        if event in self.unobservable:
            return False
        raise AutomatonError(f"unknown event {event!r}")


@dataclass(frozen=True)
class Automaton:
    """An NFA ``(X, Sigma, delta, X0)`` together with its secret states.

    ``transitions`` maps ``(state, event)`` to the set of successor states;
    missing keys mean no transition.  Use :meth:`build` to construct one from
    raw triples.
    """

    states: tuple[str, ...]
    alphabet: EventAlphabet
    transitions: Mapping[tuple[str, str], frozenset[str]]
    initials: frozenset[str]
    secrets: frozenset[str]

    _index: dict = field(init=False, repr=False, compare=False)
    _succ: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        states = _sorted(self.states)
        if len(set(states)) != len(states):
            raise AutomatonError("duplicate state identifiers")
        for x in states:
            if not isinstance(x, str) or not x:
                raise AutomatonError(f"invalid state identifier {x!r}")
        index = {x: i for i, x in enumerate(states)}
        initials = frozenset(self.initials)
        secrets = frozenset(self.secrets)
        for label, group in (("initial", initials), ("secret", secrets)):
            unknown = group - index.keys()
            if unknown:
                raise AutomatonError(f"undeclared {label} state(s): {', '.join(_sorted(unknown))}")

        trans: dict[tuple[str, str], frozenset[str]] = {}
        succ = {ev: [0] * len(states) for ev in self.alphabet.events}
        for (src, ev), dsts in self.transitions.items():
            if src not in index:
                raise AutomatonError(f"undeclared state {src!r}")
            if ev not in self.alphabet:
                raise AutomatonError(f"undeclared event {ev!r}")
            dsts = frozenset(dsts)
            for dst in dsts:
                if dst not in index:
                    raise AutomatonError(f"undeclared state {dst!r}")
            if dsts:
                trans[(src, ev)] = dsts
                m = 0
                for dst in dsts:
                    m |= 1 << index[dst]
                succ[ev][index[src]] = m

        object.__setattr__(self, "states", states)
        object.__setattr__(self, "initials", initials)
        object.__setattr__(self, "secrets", secrets)
        object.__setattr__(self, "transitions", trans)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_succ", succ)

    @classmethod
    def build(
        cls,
        states: Iterable[str],
        observable: Iterable[str],
        unobservable: Iterable[str],
        transitions: Iterable[tuple[str, str, str]],
        initials: Iterable[str],
        secrets: Iterable[str] = (),
    ) -> "Automaton":
        delta: dict[tuple[str, str], set[str]] = {}
        for src, ev, dst in transitions:
            delta.setdefault((src, ev), set()).add(dst)
        return cls(
            states=tuple(states),
            alphabet=EventAlphabet(frozenset(observable), frozenset(unobservable)),
            transitions={k: frozenset(v) for k, v in delta.items()},
            initials=frozenset(initials),
            secrets=frozenset(secrets),
        )

    # -- convenience views -------------------------------------------------

    @property
    def nonsecrets(self) -> frozenset[str]:
        return frozenset(self.states) - self.secrets

    @property
    def observable(self) -> tuple[str, ...]:
        return _sorted(self.alphabet.observable)

    @property
    def unobservable(self) -> tuple[str, ...]:
        return _sorted(self.alphabet.unobservable)

    def __len__(self) -> int:
        return len(self.states)

    def triples(self) -> Iterator[tuple[str, str, str]]:
        """All transitions ``(src, event, dst)`` in deterministic order."""
        for src in self.states:
            for ev in self.alphabet.events:
                for dst in _sorted(self.transitions.get((src, ev), ())):
                    yield src, ev, dst

    # -- bit-mask helpers (dense index order == natural order) -------------

    def mask(self, names: Iterable[str]) -> int:
        m = 0
        for x in names:
            try:
                m |= 1 << self._index[x]
            except KeyError:
                raise AutomatonError(f"unknown state {x!r}") from None
        return m

    def names(self, mask: int) -> tuple[str, ...]:
        out = []
        i = 0
        while mask:
            if mask & 1:
                out.append(self.states[i])
            mask >>= 1
            i += 1
        return tuple(out)

    def image(self, mask: int, event: str) -> int:
        """Union of successors of every state in ``mask`` under ``event``."""
        row = self._succ[event]
        out = 0
        i = 0
        while mask:
            if mask & 1:
                out |= row[i]
            mask >>= 1
            i += 1
        return out

    def _check_state(self, x: str) -> None:
        if x not in self._index:
            raise AutomatonError(f"unknown state {x!r}")

    def _check_event(self, ev: str) -> None:
        if ev not in self.alphabet:
            raise AutomatonError(f"unknown event {ev!r}")


class Run(NamedTuple):
    start: str
    steps: tuple[tuple[str, str], ...] = ()

    @property
    def states(self) -> tuple[str, ...]:
        return (self.start,) + tuple(x for _, x in self.steps)

    @property
    def events(self) -> tuple[str, ...]:
        return tuple(ev for ev, _ in self.steps)

    @property
    def end(self) -> str:
        return self.steps[-1][1] if self.steps else self.start


def step(aut: Automaton, x: str, event: str) -> frozenset[str]:
    aut._check_state(x)
    aut._check_event(event)
    return aut.transitions.get((x, event), frozenset())


def execute(aut: Automaton, source: Iterable[str], seq: Sequence[str]) -> frozenset[str]:
    """Set of states reachable from ``source`` by exactly the event sequence ``seq``."""
    for ev in seq:
        aut._check_event(ev)
    m = aut.mask(source)
    for ev in seq:
        if not m:
            break
        m = aut.image(m, ev)
    return frozenset(aut.names(m))


def project(seq: Sequence[str], alphabet: EventAlphabet) -> tuple[str, ...]:
    """Natural projection: erase unobservable events."""
    return tuple(ev for ev in seq if alphabet.is_observable(ev))


def accessible_part(aut: Automaton, roots: Iterable[str]) -> Automaton:
    """Restrict ``aut`` to the states reachable from ``roots``; roots become the initials."""
    roots = frozenset(roots)
    seen = aut.mask(roots)
    frontier = seen
    events = aut.alphabet.events
    while frontier:
        nxt = 0
        for ev in events:
            nxt |= aut.image(frontier, ev)
        frontier = nxt & ~seen
        seen |= nxt
    keep = frozenset(aut.names(seen))
    trans = {
        (src, ev): dsts
        for (src, ev), dsts in aut.transitions.items()
        if src in keep
    }
    return Automaton(
        states=tuple(keep),
        alphabet=aut.alphabet,
        transitions=trans,
        initials=roots,
        secrets=aut.secrets & keep,
    )


def is_nonsecret_run(aut: Automaton, run: Run) -> bool:
    cur = run.start
    aut._check_state(cur)
    for ev, nxt in run.steps:
        if nxt not in step(aut, cur, ev):
            raise AutomatonError(f"invalid run: {nxt!r} is not a {ev!r}-successor of {cur!r}")
        cur = nxt
    return not any(x in aut.secrets for x in run.states)


# -- text format ------------------------------------------------------------

_SECTIONS = ("states", "initial", "secret", "observable", "unobservable")
_HEADER = re.compile(r"^\s*([A-Za-z_]+)\s*:(.*)$")


def parse_automaton(text: str) -> Automaton:
    """Parse the line-oriented ``.aut`` format.

    Errors are reported as :class:`ParseError` carrying the offending line.
    """
    sections: dict[str, tuple[int, list[str]]] = {}
    trans: list[tuple[int, str, str, str]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if not m:
            raise ParseError(lineno, f"expected '<section>: ...', got {line!r}")
        key, rest = m.group(1).lower(), m.group(2).split()
        if key == "trans":
            if len(rest) != 3:
                raise ParseError(lineno, "trans needs exactly '<src> <event> <dst>'")
            trans.append((lineno, *rest))
        elif key in _SECTIONS:
            if key in sections:
                raise ParseError(lineno, f"duplicate section {key!r}")
            sections[key] = (lineno, rest)
        else:
            raise ParseError(lineno, f"unknown section {key!r}")

    def ids(key: str) -> tuple[int | None, list[str]]:
        return sections.get(key, (None, []))

    st_line, states = ids("states")
    if not states:
        raise ParseError(st_line, "empty state set")
    seen: set[str] = set()
    for x in states:
        if x in seen:
            raise ParseError(st_line, f"duplicate state {x!r}")
        seen.add(x)

    obs_line, observable = ids("observable")
    uo_line, unobservable = ids("unobservable")
    events: dict[str, bool] = {}
    for line_no, group, flag in ((obs_line, observable, True), (uo_line, unobservable, False)):
        for ev in group:
            if ev in events:
                if events[ev] != flag:
                    raise ParseError(line_no, f"event {ev!r} declared both observable and unobservable")
                raise ParseError(line_no, f"duplicate event {ev!r}")
            events[ev] = flag

    init_line, initial = ids("initial")
    if not initial:
        raise ParseError(init_line, "empty initial set")
    sec_line, secret = ids("secret")
    for line_no, group in ((init_line, initial), (sec_line, secret)):
        for x in group:
            if x not in seen:
                raise ParseError(line_no, f"undeclared state {x!r}")

    triples = []
    for lineno, src, ev, dst in trans:
        for x in (src, dst):
            if x not in seen:
                raise ParseError(lineno, f"undeclared state {x!r}")
        if ev not in events:
            raise ParseError(lineno, f"undeclared event {ev!r}")
        triples.append((src, ev, dst))

    return Automaton.build(
        states,
        observable,
        unobservable,
        triples,
        initials=initial,
        secrets=secret,
    )


def load_automaton(path) -> Automaton:
    with open(path, encoding="utf-8") as fh:
        return parse_automaton(fh.read())


def serialize_automaton(aut: Automaton) -> str:
    """Canonical ``.aut`` text; ``parse_automaton`` inverts it exactly."""
    lines = [
        "states: " + " ".join(aut.states),
        "initial: " + " ".join(_sorted(aut.initials)),
        "secret: " + " ".join(_sorted(aut.secrets)),
        "observable: " + " ".join(aut.observable),
        "unobservable: " + " ".join(aut.unobservable),
    ]
    lines.extend(f"trans: {src} {ev} {dst}" for src, ev, dst in aut.triples())
    return "\n".join(line.rstrip() for line in lines) + "\n"
