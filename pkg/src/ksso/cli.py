"""Command-line front end.

Exit status for ``check`` and ``oracle``: 0 when the system is opaque, 1 when
it is not, 2 on usage or model errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .automaton import AutomatonError, load_automaton, serialize_automaton
from .dot import automaton_to_dot, cc_to_dot, observer_to_dot
from .oracle import EnvelopeError, GeneratorParams, OracleConfig, oracle_k_sso, random_automaton
from .selftest import run_selftest
from .verifier import check_inf_sso, check_k_sso, construct

OUT_DIR_ENV = "KSSO_OUT_DIR"

EXPORTS = {
    "obs": ("obs.dot", lambda c: observer_to_dot(c.observer, "Obs(G)")),
    "ghat": ("ghat.dot", lambda c: automaton_to_dot(c.ghat, "G_hat")),
    "gtilde": ("gtilde.dot", lambda c: automaton_to_dot(c.gtilde, "G_tilde")),
    "gtildeobs": ("gtildeobs.dot", lambda c: observer_to_dot(c.gtilde_obs, "G_tilde_obs")),
    "cc": ("cc.dot", lambda c: cc_to_dot(c.cc, "Cc")),
}


class UsageError(Exception):
    pass


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {v}")
    return v


def _fraction(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ksso", description="Strong K-step opacity verification for NFAs.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide 0-SSO, K-SSO or Inf-SSO; prints a JSON verdict")
    c.add_argument("model")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--k", "-k", type=_nonneg, metavar="N")
    g.add_argument("--inf", action="store_true")
    g.add_argument("--zero", action="store_true")
    c.add_argument("--cross-check", action="store_true", help="with --inf, also run the K* search and compare")

    b = sub.add_parser("bound", help="print the upper bound K*")
    b.add_argument("model")

    o = sub.add_parser("observer", help="print the observer as DOT")
    o.add_argument("model")

    cm = sub.add_parser("compose", help="write all five constructed automata as DOT files")
    cm.add_argument("model")
    cm.add_argument("--out", "-o", help=f"output directory (default: ${OUT_DIR_ENV} or .)")
    cm.add_argument("--what", choices=sorted(EXPORTS))

    e = sub.add_parser("export", help="print one constructed automaton as DOT")
    e.add_argument("model")
    e.add_argument("--what", choices=sorted(EXPORTS), required=True)
    e.add_argument("--output", "-o", help="write to a file instead of stdout")

    r = sub.add_parser("oracle", help="brute-force K-SSO decision (small models only)")
    r.add_argument("model")
    r.add_argument("--k", "-k", type=_nonneg, required=True, metavar="N")
    r.add_argument("--max-obs-len", type=_nonneg)
    r.add_argument("--max-total-len", type=_nonneg)
    r.add_argument("--bounded", action="store_true", help="accept non-exact results beyond the size envelope")

    gen = sub.add_parser("gen", help="print a seeded random model in .aut format")
    gen.add_argument("--states", type=int, default=5)
    gen.add_argument("--obs", type=_nonneg, default=2)
    gen.add_argument("--unobs", type=_nonneg, default=1)
    gen.add_argument("--density", type=_fraction, default=0.3)
    gen.add_argument("--secret-fraction", type=_fraction, default=0.3)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--output", "-o")

    s = sub.add_parser("selftest", help="verifier/oracle agreement on random models")
    s.add_argument("--cases", type=_nonneg, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    return p


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _check(args) -> int:
    g = load_automaton(args.model)
    if args.inf:
        v = check_inf_sso(g, cross_check=args.cross_check)
    else:
        v = check_k_sso(g, 0 if args.zero else args.k)
    print(json.dumps(v.to_dict(), indent=2, ensure_ascii=False))
    return 0 if v.opaque else 1


def _oracle(args) -> int:
    g = load_automaton(args.model)
    cfg = OracleConfig(
        max_total_len=args.max_total_len,
        max_obs_len=args.max_obs_len,
        allow_bounded=args.bounded,
    )
    try:
        v = oracle_k_sso(g, args.k, cfg)
    except EnvelopeError as exc:
        raise UsageError(f"{exc} (pass --bounded)") from None
    print(json.dumps(v.to_dict(), indent=2, ensure_ascii=False))
    return 0 if v.opaque else 1


def _compose(args) -> int:
    c = construct(load_automaton(args.model))
    out = Path(args.out or os.environ.get(OUT_DIR_ENV) or ".")
    out.mkdir(parents=True, exist_ok=True)
    for key in [args.what] if args.what else EXPORTS:
        fname, render = EXPORTS[key]
        (out / fname).write_text(render(c), encoding="utf-8")
        print(out / fname)
    return 0


def _export(args) -> int:
    c = construct(load_automaton(args.model))
    _emit(EXPORTS[args.what][1](c), args.output)
    return 0


def _gen(args) -> int:
    try:
        params = GeneratorParams(
            n_states=args.states,
            n_obs_events=args.obs,
            n_unobs_events=args.unobs,
            transition_density=args.density,
            secret_fraction=args.secret_fraction,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(serialize_automaton(random_automaton(params)), args.output)
    return 0


def _selftest(args) -> int:
    bad = run_selftest(args.cases, args.seed, workers=args.workers)
    for d in bad:
        print(f"DISAGREE k={d.k} verifier={d.verifier} oracle={d.oracle} params={d.params}")
    print(f"{args.cases} cases, {len(bad)} disagreements")
    return 1 if bad else 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "check": _check,
        "bound": lambda a: print(construct(load_automaton(a.model)).kstar) or 0,
        "observer": lambda a: _emit(observer_to_dot(construct(load_automaton(a.model)).observer, "Obs(G)"), None) or 0,
        "compose": _compose,
        "export": _export,
        "oracle": _oracle,
        "gen": _gen,
        "selftest": _selftest,
    }
    try:
        return handlers[args.command](args)
    except (AutomatonError, UsageError, OSError) as exc:
        print(f"ksso: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
