"""Discrete homotopy of metric graphs: critical spectra, circle covers, convergence."""

import json

from . import _core
from ._core import DomainError, Engine, Graph, UnresolvedError, gh_bounds, gh_exact, run_cli

FORMAT_VERSION = _core.FORMAT_VERSION

__all__ = [
    "DomainError",
    "Engine",
    "Graph",
    "UnresolvedError",
    "cover_ball",
    "distance",
    "experiment",
    "generators",
    "gh_bounds",
    "gh_exact",
    "h1_class",
    "is_null",
    "run_cli",
    "spectrum",
]


def _enc(obj):
    return "" if obj is None else json.dumps(obj)


def distance(graph, p, q):
    """Distance between points given as {"vertex": v} or {"edge": e, "offset": t}."""
    return graph.distance(_enc(p), _enc(q))


def is_null(engine, chain, max_states=0, max_points=0):
    """Verdict for a loop {"scale": eps, "points": [...]} at the basepoint."""
    return json.loads(engine.is_null(_enc(chain), max_states, max_points))


def h1_class(engine, chain):
    return json.loads(engine.h1_class(_enc(chain)))


def spectrum(engine, min_scale, max_scale, eta, threads=0):
    return json.loads(_core.spectrum(engine, min_scale, max_scale, eta, threads))


def cover_ball(engine, eps, radius, kernel=None):
    return json.loads(_core.cover_ball(engine, eps, radius, _enc(kernel)))


def generators(engine, eps, eta, threads=0):
    return json.loads(_core.generators(engine, eps, eta, threads))


def experiment(config=None):
    return json.loads(_core.experiment(_enc(config)))
