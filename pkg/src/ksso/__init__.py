"""Verification of strong K-step opacity for partially observed NFAs."""

from .automaton import (
    Automaton,
    AutomatonError,
    EventAlphabet,
    ParseError,
    Run,
    accessible_part,
    execute,
    is_nonsecret_run,
    load_automaton,
    parse_automaton,
    project,
    serialize_automaton,
    step,
)
from .composition import DEAD, CcAutomaton, CcEvent, CcState, build_concurrent_composition
from .observer import (
    BeliefPartition,
    ObserverAutomaton,
    build_multi_root_observer,
    build_observer,
    classify_beliefs,
    unobservable_closure,
)
from .oracle import GeneratorParams, OracleConfig, oracle_k_sso, random_automaton
from .subautomata import initial_secret_subautomaton, nonsecret_subautomaton
from .verifier import (
    UNBOUNDED,
    Verdict,
    Witness,
    check_inf_sso,
    check_k_sso,
    check_zero_sso,
    construct,
    normalize_k,
    observable_depth_reach,
    upper_bound_kstar,
)

__version__ = "0.1.0"
