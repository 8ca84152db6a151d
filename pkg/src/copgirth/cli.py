"""Command-line entry point: ``copgirth <command> ...``.

Graph arguments are either an edge-list path or a generator spec such as
``petersen``, ``cycle:9``, ``lps:5,13``, ``random_regular:20,3,7``,
``subdivide:1:girth9_cubic`` or ``bidirected:heawood``. Summaries are JSON
with sorted keys and embed the run config and version; traces are TSV.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
import warnings
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from . import generators as gen
from .adversaries import make_adversary
from .digraph_strategies import simulate_evasion_digraph_growth, simulate_evasion_outdegree
from .dispersion import (check_lemma_rho_decrease, check_lemma_same_outneighbor,
                         check_lemma_unique_geodesic, is_t_dispersed)
from .edgelist import read_edge_list, write_edge_list
from .errors import CopGirthError, InvalidInputError
from .expander_cops import (ClampWarning, ExpanderParams, check_ball_bound, girth_exponent_report,
                            monte_carlo_capture_rate)
from .expansion import (BRUTE_FORCE_MAX_N, h_gamma_bruteforce, second_eigenvalue, spectral_hgamma_bound,
                        weak_meyniel_exponent)
from .girth_strategies import TRACE_HEADER, params_for_graph, simulate_evasion
from .graph import Digraph, Graph
from .solver import cop_number

_GENERATORS = {
    "cycle": lambda n: gen.cycle_graph(n),
    "path": lambda n: gen.path_graph(n),
    "complete": lambda n: gen.complete_graph(n),
    "complete_bipartite": lambda a, b: gen.complete_bipartite_graph(a, b),
    "hypercube": lambda k: gen.hypercube_graph(k),
    "dicycle": lambda n: gen.directed_cycle(n),
    "random_tree": lambda n, seed=0: gen.random_tree(n, seed),
    "random_regular": lambda n, d, seed=0: gen.random_regular(n, d, seed),
    "lps": lambda p, q: gen.lps_graph(p, q, verify=False).graph,
}


def _number(tok: str):
    try:
        return int(tok)
    except ValueError:
        return float(tok)


def resolve_graph(spec: str) -> Graph | Digraph:
    """Load an edge-list file or build a graph from a generator spec."""
    if Path(spec).is_file():
        return read_edge_list(spec)[0]
    m = re.fullmatch(r"subdivide:(\d+):(.+)", spec)
    if m:
        inner = resolve_graph(m.group(2))
        if isinstance(inner, Digraph):
            raise InvalidInputError("subdivide takes an undirected graph")
        return gen.subdivide(inner, int(m.group(1)))
    if spec.startswith("bidirected:"):
        inner = resolve_graph(spec.split(":", 1)[1])
        return inner if isinstance(inner, Digraph) else Digraph.bidirected(inner)
    if spec.startswith("random_digraph:"):
        n, p, seed = spec.split(":", 1)[1].split(",")
        return gen.random_digraph(int(n), float(p), int(seed))
    name, _, args = spec.partition(":")
    if name in _GENERATORS and args:
        try:
            return _GENERATORS[name](*(_number(a) for a in args.split(",")))
        except TypeError as exc:
            raise InvalidInputError(f"bad arguments in generator spec {spec!r}") from exc
    if spec.endswith((".el", ".txt", ".edges")):
        raise InvalidInputError(f"no such file: {spec}")
    return gen.named_fixture(spec)


def as_digraph(g) -> Digraph:
    return g if isinstance(g, Digraph) else Digraph.bidirected(g)


def as_graph(g) -> Graph:
    if isinstance(g, Digraph):
        raise InvalidInputError("this command needs an undirected graph")
    return g


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return _jsonable(float(x))
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def emit(args, result: dict) -> str:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "trace")}
    text = json.dumps(_jsonable({"command": args.command, "config": config, "version": __version__,
                                 "result": result}), sort_keys=True, indent=2)
    print(text)
    return text


# --- commands ----------------------------------------------------------------

def cmd_girth(args):
    g = resolve_graph(args.graph)
    if isinstance(g, Digraph):
        g = g.underlying()
    return {"n": g.n, "girth": g.girth}


def cmd_cop_number(args):
    g = resolve_graph(args.graph)
    res = cop_number(g, args.kmax, args.budget)
    return {"n": g.n, **res.as_dict()}


def _write_trace(path, trace):
    with open(path, "w") as fh:
        fh.write(TRACE_HEADER + "\n")
        for row in trace:
            fh.write(row.tsv() + "\n")


def _evasion_summary(res, trace_path):
    out = res.as_dict()
    if res.examples:
        out["violation_examples"] = res.examples
    if trace_path:
        _write_trace(trace_path, res.trace)
    return out


def cmd_verify_lower_bound(args):
    g = as_graph(resolve_graph(args.graph))
    params = params_for_graph(g, args.t, args.h, args.q)
    k = params.K if args.cops is None else args.cops
    adversary = make_adversary(args.adversary, g, k, args.seed, args.budget)
    res = simulate_evasion(g, adversary, params, k, max_rounds=args.rounds, start=args.start,
                           record_trace=bool(args.trace))
    return _evasion_summary(res, args.trace)


def cmd_verify_lower_bound_digraph(args):
    d = as_digraph(resolve_graph(args.graph))
    from .digraph_strategies import digraph_params

    params = digraph_params(d, args.t, args.h, args.q)
    k = params.K if args.cops is None else args.cops
    adversary = make_adversary(args.adversary, d, k, args.seed, args.budget)
    kw = dict(q=args.q, max_rounds=args.rounds, start=args.start, record_trace=bool(args.trace))
    if args.h == 1:
        res = simulate_evasion_outdegree(d, adversary, args.t, k, **kw)
    else:
        res = simulate_evasion_digraph_growth(d, adversary, args.t, args.h, k, **kw)
    return _evasion_summary(res, args.trace)


def cmd_dispersion(args):
    d = as_digraph(resolve_graph(args.graph))
    cert = is_t_dispersed(d, args.t, digon_exception=args.digon_exception == "on")
    out = {"n": d.n, "arcs": d.m, **cert.as_dict()}
    if args.lemmas and cert.dispersed:
        reports = [check_lemma_unique_geodesic(d, args.t, args.digon_exception == "on"),
                   check_lemma_same_outneighbor(d, args.t), check_lemma_rho_decrease(d, args.t)]
        out["lemmas"] = {r.name: {"checked": r.checked, "counterexamples": r.counterexamples[:5]}
                         for r in reports}
    return out


def cmd_spectral(args):
    g = as_graph(resolve_graph(args.graph))
    rep = second_eigenvalue(g, tol=args.tol, seed=args.seed)
    out = {"spectral": rep.as_dict()}
    if rep.bipartite:
        out["hgamma_bound"] = spectral_hgamma_bound(rep, args.gamma).as_dict()
    if g.n <= BRUTE_FORCE_MAX_N:
        out["hgamma_exact"] = h_gamma_bruteforce(g, args.gamma)
    eps = (rep.d / rep.lambda2) ** 2 - 1 if rep.lambda2 > 0 else None
    if eps is not None and rep.d >= 3:
        cor, thm = weak_meyniel_exponent(rep.d, min(eps, rep.d - 2))
        out["weak_meyniel"] = {"eps": min(eps, rep.d - 2), "corollary_exponent": cor, "theorem_exponent": thm}
    return out


def cmd_lps(args):
    res = gen.lps_graph(args.p, args.q, max_n=args.max_n)
    if args.output:
        write_edge_list(res.graph, args.output)
    return {"provenance": res.provenance, "generators": [list(x) for x in res.generators]}


def _default_eps(g, gamma):
    rep = second_eigenvalue(g)
    if rep.bipartite:
        b = spectral_hgamma_bound(rep, gamma)
        if b.certified_epsilon is not None and b.certified_epsilon > 0:
            return float(b.certified_epsilon), rep
    return None, rep


def cmd_expander_capture(args):
    g = as_graph(resolve_graph(args.graph))
    eps, rep = (args.eps, None) if args.eps is not None else _default_eps(g, args.gamma)
    if eps is None:
        raise InvalidInputError("no certified expansion; pass --eps")
    eps = min(eps, g.max_degree - 2)
    params = ExpanderParams(g.n, g.max_degree, eps, args.gamma, args.delta_slack, args.p_override)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ClampWarning)
        if params.clamped:
            warnings.warn(f"p = {params.p_raw:.3g} > 1 clamped to 1", ClampWarning)
        res = monte_carlo_capture_rate(g, params, args.trials, args.seed, execute_per_trial=args.execute)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return {**res.as_dict(), "eps": eps, "ball_bound": check_ball_bound(g, params),
            "failures": res.failures[:5]}


def cmd_exponent_report(args):
    g = as_graph(resolve_graph(args.graph))
    rep = second_eigenvalue(g)
    certified = None
    if rep.bipartite:
        b = spectral_hgamma_bound(rep, args.gamma)
        certified = None if b.certified_epsilon is None else float(b.certified_epsilon)
    return girth_exponent_report(g, rep, delta_slack=args.delta_slack, eps_certified=certified)


# --- parser ------------------------------------------------------------------

def _strategy_flags(p):
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--h", type=int, default=1)
    p.add_argument("--q", type=int, default=None, help="branching parameter (default: measured)")
    p.add_argument("--cops", type=int, default=None, help="cop count (default: the bound K)")
    p.add_argument("--adversary", choices=("greedy", "random", "optimal"), default="greedy")
    p.add_argument("--rounds", type=int, default=1000, help="cop moves to simulate")
    p.add_argument("--start", type=int, default=0, help="vertex where the cops start")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=None, help="state budget for the optimal adversary")
    p.add_argument("--trace", default=None, help="write a TSV state trace here")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="copgirth", description="Cops and robbers on high-girth graphs.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("girth", help="exact girth")
    p.add_argument("graph")
    p.set_defaults(func=cmd_girth)

    p = sub.add_parser("cop-number", help="exact cop number")
    p.add_argument("graph")
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--budget", type=int, default=None, help="state budget (env COPGIRTH_STATE_BUDGET)")
    p.set_defaults(func=cmd_cop_number)

    p = sub.add_parser("verify-lower-bound", help="robber weight strategy with auditing")
    p.add_argument("graph")
    _strategy_flags(p)
    p.set_defaults(func=cmd_verify_lower_bound)

    p = sub.add_parser("dispersion", help="t-dispersion certificate")
    p.add_argument("graph")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--digon-exception", choices=("on", "off"), default="on")
    p.add_argument("--lemmas", action="store_true", help="also run the lemma checks")
    p.set_defaults(func=cmd_dispersion)

    p = sub.add_parser("verify-lower-bound-digraph", help="digraph robber strategies")
    p.add_argument("graph")
    _strategy_flags(p)
    p.set_defaults(func=cmd_verify_lower_bound_digraph)

    p = sub.add_parser("spectral", help="second eigenvalue and expansion bounds")
    p.add_argument("graph")
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("lps", help="LPS Ramanujan graph with provenance")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--max-n", type=int, default=gen.DEFAULT_MAX_LPS_VERTICES)
    p.add_argument("--output", default=None, help="also write the edge list here")
    p.set_defaults(func=cmd_lps)

    p = sub.add_parser("expander-capture", help="Monte-Carlo run of the random cop placement")
    p.add_argument("graph")
    p.add_argument("--delta-slack", type=float, default=0.1)
    p.add_argument("--gamma", type=float, default=0.3)
    p.add_argument("--eps", type=float, default=None, help="expansion (default: certified spectral bound)")
    p.add_argument("--p-override", type=float, default=None, help="force the placement probability")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--execute", type=int, default=4, help="robber starts played out per trial")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_expander_capture)

    p = sub.add_parser("exponent-report", help="finite-n exponent arithmetic")
    p.add_argument("graph")
    p.add_argument("--delta-slack", type=float, default=0.1)
    p.add_argument("--gamma", type=float, default=0.3)
    p.set_defaults(func=cmd_exponent_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except CopGirthError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    emit(args, result)
    return 0


if __name__ == "__main__":
    sys.exit(main())
