"""Seeded random instance family and the verifier/oracle agreement sweep."""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .oracle import GeneratorParams, OracleConfig, oracle_k_sso, random_automaton
from .verifier import check_k_sso

DENSITIES = (0.2, 0.4)
SECRET_FRACTIONS = (0.2, 0.4)
STATE_COUNTS = (2, 3, 4, 5, 6)
OBS_COUNTS = (1, 2)
UNOBS_COUNTS = (0, 1)
KS = (0, 1, 2, 3, 4)


def instance_family(n_cases: int, seed: int = 0) -> list[GeneratorParams]:
    """``n_cases`` generator settings cycling through the test grid.

    Every instance has at most 6 states, 2 observable and 1 unobservable event.
    """
    grid = list(itertools.product(STATE_COUNTS, OBS_COUNTS, UNOBS_COUNTS, DENSITIES, SECRET_FRACTIONS))
    rng = random.Random(seed)
    out = []
    for i in range(n_cases):
        n, n_obs, n_uo, dens, frac = grid[i % len(grid)]
        out.append(
            GeneratorParams(
                n_states=n,
                n_obs_events=n_obs,
                n_unobs_events=n_uo,
                transition_density=dens,
                secret_fraction=frac,
                seed=rng.getrandbits(64),
            )
        )
    return out


@dataclass(frozen=True)
class Disagreement:
    params: GeneratorParams
    k: int
    verifier: bool
    oracle: bool


def compare(params: GeneratorParams, ks=KS) -> list[Disagreement]:
    g = random_automaton(params)
    out = []
    for k in ks:
        v = check_k_sso(g, k).opaque
        o = oracle_k_sso(g, k, OracleConfig()).opaque
        if v != o:
            out.append(Disagreement(params, k, v, o))
    return out


def run_selftest(n_cases: int, seed: int = 0, workers: int = 1, ks=KS) -> list[Disagreement]:
    family = instance_family(n_cases, seed)
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(compare, family, itertools.repeat(ks)))
    else:
        results = [compare(p, ks) for p in family]
    return [d for r in results for d in r]
