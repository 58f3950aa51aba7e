"""Approximate Quantum Max Cut by rounding a level-2 SDP relaxation."""

import json
from dataclasses import dataclass, field

from . import _core
from ._core import InputError, NumericalError, SolverFailure, alpha_gw, ratio_constant

__all__ = [
    "Graph",
    "InputError",
    "NumericalError",
    "SolverFailure",
    "alpha_gw",
    "certify",
    "exact_opt",
    "ratio_constant",
    "run",
    "solve",
]


@dataclass(frozen=True)
class Graph:
    n: int
    edges: list = field(default_factory=list)  # (i, j, w) triples

    @classmethod
    def generate(cls, spec):
        n, edges = _core.generate(spec)
        return cls(n, edges)

    @classmethod
    def parse(cls, text):
        n, edges = _core.parse_edge_list(text)
        return cls(n, edges)


def exact_opt(graph):
    return _core.exact_opt(graph.n, graph.edges)


def solve(graph, tol_feas=1e-6, max_iterations=20000):
    out = _core.solve_sdp(graph.n, graph.edges, tol_feas, max_iterations)
    out["residuals"] = json.loads(out["residuals"])
    return out


def run(graph, rounds=1000, seed=None, *, name="", alpha0=_core.DEFAULT_ALPHA0, deterministic=False,
        energy="auto", tol_feas=1e-6, max_iterations=20000, certify=False):
    """Solve, round `rounds` times, and return the report as a dict."""
    text = _core.run_pipeline_json(graph.n, graph.edges, name, rounds, seed, alpha0, deterministic, energy,
                                   tol_feas, max_iterations, certify)
    return json.loads(text)


def certify(alpha0=_core.DEFAULT_ALPHA0, sweep=False):
    return json.loads(_core.certify_json(alpha0, sweep))
