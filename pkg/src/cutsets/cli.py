"""Command-line front end.

Exit codes: 0 success (``CUT`` for verify), 1 model/input error, 2 invalid
target, 3 ``NOT-CUT``, 4 exploration budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from . import glc as glc_mod
from . import oracle, solver
from .network import AutomataNetwork, Context, LocalState, ModelError, disable, load_network
from .synthetic import RegulatorySpec, default_targets, regulatory_network

log = logging.getLogger("cutsets")

EXIT_OK, EXIT_INPUT, EXIT_TARGET, EXIT_NOT_CUT, EXIT_BUDGET = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    model: Optional[str] = None
    targets: list[str] = field(default_factory=list)
    n: int = 2
    obs: str = "all"
    json_path: Optional[str] = None
    dot_path: Optional[str] = None
    budget: int = oracle.DEFAULT_BUDGET
    seed: int = 0
    chain: int = 0
    prune: bool = False


def _load(cfg: RunConfig) -> tuple[AutomataNetwork, Context]:
    try:
        return load_network(cfg.model)
    except OSError as e:
        raise CliError(f"cannot read model {cfg.model!r}: {e.strerror}", EXIT_INPUT) from e
    except ModelError as e:
        raise CliError(f"{cfg.model}: {e}", EXIT_INPUT) from e


def _targets(net: AutomataNetwork, cfg: RunConfig) -> list[LocalState]:
    if not cfg.targets:
        raise CliError("at least one --target name=i is required", EXIT_TARGET)
    out = []
    for t in cfg.targets:
        try:
            ls = net.parse_local(t)
        except ModelError as e:
            raise CliError(f"invalid target {t!r}: {e}", EXIT_TARGET) from e
        if ls not in out:
            out.append(ls)
    return out


def _obs(net: AutomataNetwork, g: glc_mod.Glc, cfg: RunConfig,
         whole_network: bool = False) -> frozenset[LocalState]:
    if cfg.obs == "all":
        # local states outside the GLC never occur in solver results
        return frozenset(net.local_states()) if whole_network else solver.observe_all(g)
    try:
        with open(cfg.obs, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise CliError(f"cannot read obs file {cfg.obs!r}: {e.strerror}", EXIT_INPUT) from e
    items = []
    for line in text.splitlines():
        items += line.split("#", 1)[0].replace(",", " ").split()
    try:
        return frozenset(net.parse_local(x) for x in items)
    except ModelError as e:
        raise CliError(f"{cfg.obs}: {e}", EXIT_INPUT) from e


def _check_n(cfg: RunConfig) -> None:
    if cfg.n < 1:
        raise CliError("--n must be >= 1", EXIT_INPUT)


def _sort_family(fam) -> list[frozenset[LocalState]]:
    return sorted(fam, key=lambda s: (len(s), sorted(s)))


def _counts(fam) -> dict[str, int]:
    counts: dict[str, int] = {}
    for s in fam:
        counts[str(len(s))] = counts.get(str(len(s)), 0) + 1
    return dict(sorted(counts.items(), key=lambda kv: int(kv[0])))


def _names(net: AutomataNetwork, fam) -> list[list[str]]:
    return [[net.fmt(x) for x in sorted(s)] for s in fam]


def _glc_summary(g: glc_mod.Glc) -> dict:
    comps = g.components()
    return {
        "nodes": len(g),
        "edges": g.n_edges,
        "sccs": len(comps),
        "nontrivial_sccs": sum(1 for c in comps if len(c) > 1),
        "largest_scc": max((len(c) for c in comps), default=0),
    }


def _emit_json(doc: dict, path: str, out) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path == "-":
        out.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _build(cfg: RunConfig):
    net, ctx = _load(cfg)
    targets = _targets(net, cfg)
    g = glc_mod.build_glc(net, ctx, targets)
    if cfg.prune:
        g = glc_mod.prune_glc(g)
    return net, ctx, targets, g


def cmd_cutsets(cfg: RunConfig, out=sys.stdout) -> int:
    _check_n(cfg)
    net, _, targets, g = _build(cfg)
    obs = _obs(net, g, cfg)
    v = solver.solve(g, obs, cfg.n)
    report: dict = {"targets": {}, "glc": _glc_summary(g), "stats": {}}
    lines = []
    for t in targets:
        fam = v.family(t)
        entry = {"cutsets": _names(net, fam), "counts": _counts(fam)}
        lines.append(f"{net.fmt(t)}: {len(fam)} cut sets (N={cfg.n})")
        lines += [f"  {net.fmt_set(s)}" for s in fam]
        lines.append("  counts: " + ", ".join(f"{k}-sets={c}" for k, c in entry["counts"].items()))
        if cfg.chain:
            chained = solver.chain_cutsets(v, t, cfg.chain)
            entry["chained"] = _names(net, chained)
            lines.append(f"  chained ({cfg.chain} rounds): {len(chained)} sets")
            lines += [f"    {net.fmt_set(s)}" for s in chained]
        report["targets"][net.fmt(t)] = entry
    st = solver.trace_stats(v, targets)
    report["stats"] = {"n": cfg.n, "visits": st["visits"], "first_pass": st["first_pass"],
                       "revisits": st["revisits"]}
    if cfg.dot_path:
        with open(cfg.dot_path, "w", encoding="utf-8") as fh:
            fh.write(glc_mod.export_dot(g))
    if cfg.json_path:
        _emit_json(report, cfg.json_path, out)
    if cfg.json_path != "-":
        s = report["glc"]
        lines.append(f"glc: {s['nodes']} nodes, {s['edges']} edges; "
                     f"visits: {st['visits']} ({st['first_pass']} first pass); "
                     f"time: {st['wall_time']:.3f}s")
        out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_glc(cfg: RunConfig, out=sys.stdout) -> int:
    net, _, targets, g = _build(cfg)
    if cfg.dot_path:
        with open(cfg.dot_path, "w", encoding="utf-8") as fh:
            fh.write(glc_mod.export_dot(g))
    if cfg.json_path:
        doc = {"glc": g.to_json(), "summary": _glc_summary(g)}
        _emit_json(doc, cfg.json_path, out)
    if cfg.json_path != "-":
        s = _glc_summary(g)
        lines = [f"{s['nodes']} nodes, {s['edges']} edges, {s['sccs']} SCCs "
                 f"({s['nontrivial_sccs']} with more than one node, largest {s['largest_scc']})"]
        for comp in g.components():
            if len(comp) > 1:
                lines.append(f"  rank {g.rank[comp[0]]}: " + "; ".join(g.label(i) for i in comp))
        out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(cfg: RunConfig, cutset: str, out=sys.stdout) -> int:
    net, ctx = _load(cfg)
    targets = _targets(net, cfg)
    if len(targets) != 1:
        raise CliError("verify takes exactly one --target", EXIT_TARGET)
    try:
        kls = net.parse_locals(cutset)
    except ModelError as e:
        raise CliError(f"invalid cut set {cutset!r}: {e}", EXIT_INPUT) from e
    try:
        trace = oracle.find_trace(disable(net, kls), ctx, targets[0], cfg.budget)
    except oracle.BudgetExceeded as e:
        raise CliError(str(e), EXIT_BUDGET) from e
    if trace is None:
        out.write("CUT\n")
        return EXIT_OK
    init, labels = trace
    start = ", ".join(f"{n}={i}" for n, i in zip(net.names, init))
    out.write(f"NOT-CUT\nfrom ({start}) via [{', '.join(labels)}]\n")
    return EXIT_NOT_CUT


def cmd_oracle(cfg: RunConfig, out=sys.stdout) -> int:
    _check_n(cfg)
    net, ctx, targets, g = _build(cfg)
    obs = _obs(net, g, cfg, whole_network=True)
    v = solver.solve(g, obs, cfg.n)
    lines = []
    report: dict = {"targets": {}}
    for t in targets:
        try:
            exact = oracle.enumerate_cut_nsets(net, ctx, t, sorted(obs), cfg.n, cfg.budget)
            found = v.family(t)
            verified = [s for s in found if oracle.is_cut_set(net, ctx, t, s, cfg.budget)]
        except oracle.BudgetExceeded as e:
            raise CliError(str(e), EXIT_BUDGET) from e
        both = [s for s in exact if s in found]
        oracle_only = [s for s in exact if s not in found]
        solver_only = _sort_family(s for s in found if s not in exact)
        failed = [s for s in found if s not in verified]
        report["targets"][net.fmt(t)] = {
            "oracle": _names(net, exact), "solver": _names(net, found),
            "both": _names(net, both), "oracle_only": _names(net, oracle_only),
            "solver_only": _names(net, solver_only), "solver_not_cut": _names(net, failed),
        }
        lines.append(f"{net.fmt(t)} (N={cfg.n})")
        if exact == [frozenset()]:
            lines.append("  oracle: already unreachable (the empty set cuts)")
        for title, fam in (("oracle", exact), ("solver", found), ("both", both),
                           ("oracle only", oracle_only), ("solver only (non-minimal)", solver_only),
                           ("solver sets failing verification", failed)):
            lines.append(f"  {title}: " + (" ".join(net.fmt_set(s) for s in fam) or "-"))
    if cfg.json_path:
        _emit_json(report, cfg.json_path, out)
    if cfg.json_path != "-":
        out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_bench(cfg: RunConfig, components: int, max_n: int, out=sys.stdout) -> int:
    spec = RegulatorySpec(n_components=components, seed=cfg.seed)
    net, ctx = regulatory_network(spec)
    targets = default_targets(spec)
    t0 = time.perf_counter()
    g = glc_mod.build_glc(net, ctx, targets)
    build = time.perf_counter() - t0
    s = _glc_summary(g)
    lines = [f"synthetic network: {components} components, seed {cfg.seed}",
             f"glc: {s['nodes']} nodes, {s['edges']} edges, largest SCC {s['largest_scc']} "
             f"(built in {build:.2f}s)",
             "N  visited  time     " + "  ".join(net.fmt(t) for t in targets)]
    prev = {t: 0 for t in targets}
    rows = []
    for n in range(1, max_n + 1):
        v = solver.solve(g, None, n)
        sizes = {t: len(v.family(t)) for t in targets}
        lines.append(f"{n:<2} {v.stats.visits:<8} {v.stats.wall_time:<8.2f} "
                     + "  ".join(f"+{sizes[t] - prev[t]}" for t in targets))
        rows.append({"n": n, "visits": v.stats.visits, "time": v.stats.wall_time,
                     "sets": {net.fmt(t): sizes[t] for t in targets}})
        prev = sizes
    if cfg.json_path:
        _emit_json({"glc": s, "rows": rows}, cfg.json_path, out)
    if cfg.json_path != "-":
        out.write("\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("model", help="model file")
    common.add_argument("--target", action="append", default=[], metavar="NAME=I",
                        help="target local state (repeatable)")
    common.add_argument("--json", dest="json_path", metavar="PATH",
                        help="write JSON to PATH ('-' for stdout instead of text)")
    solving = argparse.ArgumentParser(add_help=False)
    solving.add_argument("--n", type=int, default=2, help="maximum cut set cardinality")
    solving.add_argument("--obs", default="all", metavar="FILE|all",
                         help="observed local states (default: every local state in the GLC)")
    solving.add_argument("--prune", action="store_true",
                         help="drop objectives without solutions before solving")
    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET,
                        help="maximum global states explored by the oracle")

    p = argparse.ArgumentParser(prog="cutsets", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("cutsets", parents=[common, solving], help="compute cut N-sets")
    c.add_argument("--dot", dest="dot_path", metavar="PATH", help="also write the GLC as DOT")
    c.add_argument("--chain", type=int, default=0, metavar="ROUNDS",
                   help="posterior enlarging rounds")
    g = sub.add_parser("glc", parents=[common], help="build and export the GLC")
    g.add_argument("--dot", dest="dot_path", metavar="PATH")
    g.add_argument("--prune", action="store_true")
    v = sub.add_parser("verify", parents=[common, budget], help="check one cut set exactly")
    v.add_argument("cutset", help="comma-separated local states, e.g. 'b=1,c=2'")
    sub.add_parser("oracle", parents=[common, solving, budget],
                   help="exhaustive cut sets and diff against the solver")
    b = sub.add_parser("bench", help="scalability run on a synthetic network")
    b.add_argument("--components", type=int, default=RegulatorySpec.n_components)
    b.add_argument("--n", type=int, default=3, help="largest N to run")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--json", dest="json_path", metavar="PATH")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    level = os.environ.get("CUTSETS_LOG", "error").upper()
    logging.basicConfig(level=getattr(logging, level, logging.ERROR),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        model=getattr(args, "model", None), targets=getattr(args, "target", []),
        n=getattr(args, "n", 2), obs=getattr(args, "obs", "all"), json_path=args.json_path,
        dot_path=getattr(args, "dot_path", None),
        budget=getattr(args, "budget", oracle.DEFAULT_BUDGET),
        seed=getattr(args, "seed", 0), chain=getattr(args, "chain", 0),
        prune=getattr(args, "prune", False),
    )
    log.debug("config %s", cfg)
    try:
        if args.command == "cutsets":
            return cmd_cutsets(cfg, sys.stdout)
        if args.command == "glc":
            return cmd_glc(cfg, sys.stdout)
        if args.command == "verify":
            return cmd_verify(cfg, args.cutset, sys.stdout)
        if args.command == "oracle":
            return cmd_oracle(cfg, sys.stdout)
        return cmd_bench(cfg, args.components, args.n, sys.stdout)
    except CliError as e:
        print(f"cutsets: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
