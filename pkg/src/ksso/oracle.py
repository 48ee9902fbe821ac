"""Brute-force K-SSO decision straight from the run-based definition.

Nothing here touches the observer or composition code.  Beliefs are computed
by searching the product of the system with the linear automaton of an
observation string, which amounts to enumerating all runs whose unobservable
segments are cycle-free (cutting such a cycle changes neither the projection
nor the set of states that matter).  :func:`enumerate_belief` offers the
literal run enumeration for cross-checking.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .automaton import Automaton, accessible_part, natural_key
from .verifier import Verdict, Witness

__all__ = [
    "OracleConfig",
    "GeneratorParams",
    "EnvelopeError",
    "observation_belief",
    "enumerate_belief",
    "oracle_k_sso",
    "random_automaton",
]

DEFAULT_MAX_STATES = 8


class EnvelopeError(ValueError):
    """The instance is too large for an exact brute-force answer."""


@dataclass(frozen=True)
class OracleConfig:
    max_total_len: int | None = None  # cap on run length explored per product search
    max_obs_len: int | None = None  # cap on |alpha|; default 2**|X|
    seed: int = 0
    max_states: int = DEFAULT_MAX_STATES
    allow_bounded: bool = False


def _sorted(xs: Iterable[str]) -> list[str]:
    return sorted(xs, key=natural_key)


class _Search:
    """Product-graph reachability with bookkeeping of truncation."""

    def __init__(self, g: Automaton, max_total_len: int | None):
        self.g = g
        self.max_total_len = max_total_len
        self.truncated = False

    def reach(
        self,
        sources: Iterable[str],
        obs: Sequence[str],
        allowed: frozenset[str] | None = None,
    ) -> frozenset[str]:
        """States x such that some run from ``sources`` with projection ``obs``
        ends in x, optionally confined to ``allowed`` states."""
        g = self.g
        n = len(obs)
        start = [(x, 0) for x in sources if allowed is None or x in allowed]
        dist = {node: 0 for node in start}
        queue = deque(start)
        ends = set()
        while queue:
            x, i = queue.popleft()
            if i == n:
                ends.add(x)
            d = dist[(x, i)]
            if self.max_total_len is not None and d >= self.max_total_len:
                self.truncated = True
                continue
            for ev in g.alphabet.events:
                if g.alphabet.is_observable(ev):
                    if i == n or obs[i] != ev:
                        continue
                    j = i + 1
                else:
                    j = i
                for y in g.transitions.get((x, ev), ()):
                    if allowed is not None and y not in allowed:
                        continue
                    if (y, j) not in dist:
                        dist[(y, j)] = d + 1
                        queue.append((y, j))
        return frozenset(ends)


def observation_belief(g: Automaton, alpha: Sequence[str]) -> frozenset[str]:
    """All states in which ``g`` may be after producing observation ``alpha``."""
    return _Search(g, None).reach(g.initials, alpha)


def enumerate_belief(g: Automaton, alpha: Sequence[str], repeat: int = 0) -> frozenset[str]:
    """Run enumeration, one unobservable segment at a time.

    Within a segment every run is walked explicitly, visiting each state at
    most ``repeat + 1`` times, so ``repeat=0`` covers exactly the cycle-free
    segments.  Segments are joined at observable events; runs reaching the
    same state at the same position are merged there, since their futures
    coincide.
    """
    unobs = g.unobservable
    cache: dict[str, frozenset[str]] = {}

    def segment_ends(x: str) -> frozenset[str]:
        if x in cache:
            return cache[x]
        ends: set[str] = set()
        visits: Counter = Counter({x: 1})

        def walk(y: str) -> None:
            ends.add(y)
            for ev in unobs:
                for z in g.transitions.get((y, ev), ()):
                    if visits[z] <= repeat:
                        visits[z] += 1
                        walk(z)
                        visits[z] -= 1

        walk(x)
        cache[x] = frozenset(ends)
        return cache[x]

    current = set(g.initials)
    for ev in alpha:
        after = set()
        for x in current:
            for y in segment_ends(x):
                after.update(g.transitions.get((y, ev), ()))
        current = after
    out: set[str] = set()
    for x in current:
        out |= segment_ends(x)
    return frozenset(out)


def _words(events: Sequence[str], max_len: int) -> Iterator[tuple[str, ...]]:
    for n in range(max_len + 1):
        yield from itertools.product(events, repeat=n)


def oracle_k_sso(g: Automaton, k: int, cfg: OracleConfig = OracleConfig()) -> Verdict:
    """Decide K-SSO by exhaustive search over observations.

    A violation is an observation ``alpha``, a secret state ``x_s`` possible
    after it, and a continuation ``beta`` with ``|beta| <= k`` that ``x_s`` can
    produce while no non-secret state possible after ``alpha`` can produce
    ``beta`` through non-secret states only.

    Distinct observations leading to the same belief are explored once, and
    the search stops when no new belief appears, so the result is exact unless
    a cap was hit; the verdict's ``mode`` says which.
    """
    if k < 0:
        raise ValueError("K must be non-negative")
    t0 = time.perf_counter()
    g = accessible_part(g, g.initials)
    if len(g) > cfg.max_states and not cfg.allow_bounded:
        raise EnvelopeError(
            f"{len(g)} states exceeds the oracle envelope of {cfg.max_states}; "
            "allow bounded results explicitly"
        )
    max_obs_len = cfg.max_obs_len if cfg.max_obs_len is not None else 2 ** len(g)
    search = _Search(g, cfg.max_total_len)
    observable = g.observable
    nonsecret = g.nonsecrets
    capped = False

    def violation(alpha: tuple[str, ...], belief: frozenset[str]) -> Witness | None:
        covers = belief & nonsecret
        for xs in _sorted(belief & g.secrets):
            for beta in _words(observable, k):
                if not search.reach([xs], beta):
                    continue
                if not search.reach(covers, beta, allowed=nonsecret):
                    return Witness(alpha=alpha, secret_state=xs, observable_depth=len(beta), beta=beta)
        return None

    witness = None
    root = search.reach(g.initials, ())
    seen = {root}
    queue = deque([((), root)])
    while queue:
        alpha, belief = queue.popleft()
        witness = violation(alpha, belief)
        if witness is not None:
            break
        if len(alpha) >= max_obs_len:
            capped = True
            continue
        for ev in observable:
            nxt = alpha + (ev,)
            b = search.reach(g.initials, nxt)
            if b and b not in seen:
                seen.add(b)
                queue.append((nxt, b))

    # a violation found before the alpha cap is still exact; truncated cover
    # searches never are
    exact = len(g) <= cfg.max_states and not search.truncated and (witness is not None or not capped)
    return Verdict(
        property="k-sso",
        opaque=witness is None,
        k=k,
        k_normalized=k,
        witness=witness,
        sizes={"states": len(g), "observer": len(seen), "cc": None},
        elapsed_ms=(time.perf_counter() - t0) * 1000.0,
        mode="exact" if exact else "bounded",
    )


# -- random instances -----------------------------------------------------


@dataclass(frozen=True)
class GeneratorParams:
    n_states: int = 5
    n_obs_events: int = 2
    n_unobs_events: int = 1
    transition_density: float = 0.3
    secret_fraction: float = 0.3
    seed: int = 0
    extra_initial_prob: float = 0.1

    def __post_init__(self):
        if self.n_states < 1:
            raise ValueError("n_states must be at least 1")
        for name in ("transition_density", "secret_fraction", "extra_initial_prob"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.n_obs_events < 0 or self.n_unobs_events < 0:
            raise ValueError("event counts must be non-negative")


_OBS_NAMES = "abcdefghijklmnopqrst"
_UNOBS_NAMES = "uvwxyz"


def _event_names(pool: str, n: int, prefix: str) -> list[str]:
    if n <= len(pool):
        return list(pool[:n])
    return [f"{prefix}{i}" for i in range(n)]


def random_automaton(p: GeneratorParams) -> Automaton:
    """Seeded random NFA, restricted to its accessible part."""
    rng = random.Random(p.seed)
    states = [str(i) for i in range(p.n_states)]
    obs = _event_names(_OBS_NAMES, p.n_obs_events, "o")
    unobs = _event_names(_UNOBS_NAMES, p.n_unobs_events, "uo")
    triples = [
        (x, ev, y)
        for x in states
        for ev in obs + unobs
        for y in states
        if rng.random() < p.transition_density
    ]
    initials = ["0"] + [x for x in states[1:] if rng.random() < p.extra_initial_prob]
    g = Automaton.build(states, obs, unobs, triples, initials)
    g = accessible_part(g, g.initials)
    n_secret = math.ceil(p.secret_fraction * len(g))
    secrets = rng.sample(list(g.states), n_secret)
    return Automaton(g.states, g.alphabet, g.transitions, g.initials, frozenset(secrets))
