"""Cut N-sets for local-state reachability in automata networks."""
from .glc import Glc, Objective, Solution, build_glc, compute_sol, prune_glc
from .network import AutomataNetwork, Context, LocalState, disable, load_network, parse_network
from .solver import Valuation, chain_cutsets, solve

__all__ = [
    "AutomataNetwork", "Context", "Glc", "LocalState", "Objective", "Solution", "Valuation",
    "build_glc", "chain_cutsets", "compute_sol", "disable", "load_network", "parse_network",
    "prune_glc", "solve",
]
