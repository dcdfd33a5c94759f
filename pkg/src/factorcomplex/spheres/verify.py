"""Exhaustive checks of the degree, inclusion and closure statements on dual graphs.

Each verifier returns ``{"checked": int, "violations": [...]}``; a violation
embeds the offending graphs as lg-v1 JSON.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Sequence

from .enumerate import _check_caps, enumerate_graphs
from .graph import (
    LabeledGraph,
    collapse_edge,
    decomposition_ranks,
    degree,
    in_FCDg,
    in_FCDg_loose,
    is_cut,
    pillar_edges,
    tau_d_graph,
)


def _report(checked: int, violations: list, **extra) -> dict:
    out = {"checked": checked, "violations": violations}
    out.update(extra)
    return out


def _degree_pillar(g: LabeledGraph):
    checked, bad = 0, []
    if len(g.edges) < 2:
        return checked, bad
    pillar = set(pillar_edges(g))
    d = degree(g)
    for i in range(len(g.edges)):
        if i in pillar:
            continue
        h = collapse_edge(g, i)
        checked += 1
        if degree(h) != d or len(pillar_edges(h)) != len(pillar):
            bad.append({"graph": g.to_json(), "edge": list(g.edges[i]), "collapsed": h.to_json(),
                        "degree_before": d, "degree_after": degree(h)})
    return checked, bad


def _degree_inclusion(g: LabeledGraph):
    if degree(g) > g.n - 2:
        return 0, []
    if in_FCDg(g):
        return 1, []
    return 1, [{"graph": g.to_json(), "degree": degree(g)}]


def _face_closure(g: LabeledGraph):
    checked, bad = 0, []
    if len(g.edges) < 2 or not in_FCDg(g):
        return checked, bad
    for i in range(len(g.edges)):
        h = collapse_edge(g, i)
        checked += 1
        if not in_FCDg(h):
            bad.append({"graph": g.to_json(), "edge": list(g.edges[i]), "collapsed": h.to_json()})
    return checked, bad


def _decomposition_sum(g: LabeledGraph):
    if not is_cut(g):
        return 0, []
    ranks = decomposition_ranks(g)
    if sum(ranks) == g.n and all(r > 0 for r in ranks):
        return 1, []
    return 1, [{"graph": g.to_json(), "ranks": ranks}]


def _rank_invariance(g: LabeledGraph):
    # LabeledGraph validates total rank on construction, so a drift raises
    if len(g.edges) < 2:
        return 0, []
    for i in range(len(g.edges)):
        collapse_edge(g, i)
    return len(g.edges), []


CHECKS: dict[str, Callable] = {
    "degree_pillar": _degree_pillar,
    "degree_inclusion": _degree_inclusion,
    "face_closure": _face_closure,
    "decomposition_sum": _decomposition_sum,
    "rank_invariance": _rank_invariance,
}


def _run_chunk(args):
    name, graphs = args
    fn = CHECKS[name]
    checked, bad = 0, []
    for g in graphs:
        c, b = fn(g)
        checked += c
        bad.extend(b)
    return checked, bad


def run_check(name: str, graphs: Sequence[LabeledGraph], threads: int = 1) -> dict:
    """Apply one named check to every graph; results are merged in input order."""
    if threads <= 1 or len(graphs) < 1000:
        checked, bad = _run_chunk((name, graphs))
        return _report(checked, bad)
    size = -(-len(graphs) // (threads * 4))
    chunks = [(name, graphs[i:i + size]) for i in range(0, len(graphs), size)]
    checked, bad = 0, []
    with ProcessPoolExecutor(max_workers=threads) as pool:
        for c, b in pool.map(_run_chunk, chunks):
            checked += c
            bad.extend(b)
    return _report(checked, bad)


def verify_degree_pillar(n: int, max_edges: int, threads: int = 1) -> dict:
    """Collapsing an edge off the pillar never changes the degree."""
    _check_caps(n, max_edges)
    return run_check("degree_pillar", enumerate_graphs(n, max_edges), threads)


def verify_degree_inclusion(n: int, max_edges: int, threads: int = 1) -> dict:
    """Degree at most n - 2 forces membership; also reports where the loose reading differs."""
    _check_caps(n, max_edges)
    graphs = enumerate_graphs(n, max_edges)
    rep = run_check("degree_inclusion", graphs, threads)
    rep["reading_divergences"] = reading_divergences(graphs)
    return rep


def verify_face_closure(n: int, max_edges: int, threads: int = 1) -> dict:
    """Membership survives every single-edge collapse."""
    _check_caps(n, max_edges)
    return run_check("face_closure", enumerate_graphs(n, max_edges), threads)


def verify_decomposition_sums(n: int, max_edges: int, threads: int = 1) -> dict:
    _check_caps(n, max_edges)
    return run_check("decomposition_sum", enumerate_graphs(n, max_edges), threads)


def integer_partitions(n: int, largest: int | None = None) -> Iterable[list[int]]:
    largest = n if largest is None else largest
    if n == 0:
        yield []
        return
    for first in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - first, first):
            yield [first] + rest


def verify_tau_d(n: int) -> dict:
    """Star graphs of every partition of n have degree 2n - k.

    With two or more parts the star is also cut and gives back its ranks; the
    one-part star is a single edge to a genus-n leaf, which is not cut.
    """
    checked, bad = 0, []
    for ranks in integer_partitions(n):
        g = tau_d_graph(ranks)
        checked += 1
        k = len(ranks)
        ok = degree(g) == 2 * n - k
        if k >= 2:
            ok = ok and in_FCDg(g) and decomposition_ranks(g) == sorted(ranks)
        else:
            ok = ok and not in_FCDg(g)
        if not ok:
            bad.append({"ranks": ranks, "graph": g.to_json(), "degree": degree(g)})
    return _report(checked, bad)


def reading_divergences(graphs: Iterable[LabeledGraph]) -> list[dict]:
    """Graphs on which the literal and the loop-at-base readings of membership disagree."""
    return [g.to_json() for g in graphs if in_FCDg(g) != in_FCDg_loose(g)]


def verify_all(n: int, max_edges: int, threads: int = 1) -> dict:
    """Every sphere-side check for ranks 1..n, keyed by check then rank."""
    _check_caps(n, max_edges)
    out: dict = {}
    for m in range(1, n + 1):
        graphs = enumerate_graphs(m, max_edges)
        for name in CHECKS:
            out.setdefault(name, {})[str(m)] = run_check(name, graphs, threads)
        out.setdefault("tau_d", {})[str(m)] = verify_tau_d(m)
        out.setdefault("reading_divergences", {})[str(m)] = reading_divergences(graphs)
    total = sum(r["checked"] for k, v in out.items() if k != "reading_divergences" for r in v.values())
    bad = sum(len(r["violations"]) for k, v in out.items() if k != "reading_divergences" for r in v.values())
    out["summary"] = {"n": n, "max_edges": max_edges, "checked": total, "violations": bad}
    return out
