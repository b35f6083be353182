"""The ordinal graph G_n and the path function F(n, alpha).

``G_n`` has a successor edge ``a+1 -> a`` at every successor vertex and, at a
limit vertex, edges to the first ``n`` terms of its approximating sequence.
``F(n, alpha)`` is the largest number of successor edges on a path from
``alpha`` to ``0``.  :func:`f_value` evaluates it through the recursion
(zero / successor / limit); :func:`build_graph` materialises the graph so the
recursion can be checked against an honest longest-path computation.
"""
from __future__ import annotations

import csv
import io
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .ordinal import DEFAULT_POLICY, ZERO, FundSeqPolicy, Ordinal, format_ordinal, fund_seq

__all__ = [
    "OrdGraph",
    "FPath",
    "GraphTooLargeError",
    "f_value",
    "f_witness",
    "build_graph",
    "longest_successor_path",
    "export_dot",
    "find_separation",
    "f_table",
    "table_to_csv",
    "DEFAULT_VERTEX_BOUND",
]

DEFAULT_VERTEX_BOUND = 10**5


class GraphTooLargeError(ValueError):
    pass


@lru_cache(maxsize=None)
def _f(n: int, a: Ordinal, policy: FundSeqPolicy) -> int:
    if a.is_zero:
        return 0
    k = a.finite_part
    if k:
        # k successor edges in a row
        return _f(n, a.limit_part, policy) + k
    best = 0
    for m in range(1, n + 1):
        v = _f(n, fund_seq(policy, a, m), policy)
        if v > best:
            best = v
    return best


def f_value(n: int, alpha: Ordinal, policy: FundSeqPolicy = DEFAULT_POLICY) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    return _f(n, alpha, policy)


@dataclass(frozen=True)
class FPath:
    vertices: tuple  # Ordinals from alpha down to 0
    successor_edges: int


def f_witness(n: int, alpha: Ordinal, policy: FundSeqPolicy = DEFAULT_POLICY) -> FPath:
    """A path from ``alpha`` to 0 in G_n with F(n, alpha) successor edges."""
    path = [alpha]
    count = 0
    a = alpha
    while not a.is_zero:
        if a.is_successor:
            a = a.predecessor()
            count += 1
        else:
            target = _f(n, a, policy)
            a = next(b for b in (fund_seq(policy, a, m) for m in range(1, n + 1)) if _f(n, b, policy) == target)
        path.append(a)
    return FPath(tuple(path), count)


@dataclass(frozen=True)
class OrdGraph:
    n: int
    root: Ordinal
    vertices: frozenset
    edges: tuple  # (source, target, "successor" | "limit")


def build_graph(n: int, root: Ordinal, policy: FundSeqPolicy = DEFAULT_POLICY,
                max_vertices: int = DEFAULT_VERTEX_BOUND) -> OrdGraph:
    """The subgraph of G_n reachable from ``root``."""
    seen = {root}
    queue = deque([root])
    edges = []
    while queue:
        a = queue.popleft()
        if a.is_zero:
            continue
        if a.is_successor:
            out = [(a.predecessor(), "successor")]
        else:
            out = [(fund_seq(policy, a, m), "limit") for m in range(1, n + 1)]
        for b, kind in out:
            edges.append((a, b, kind))
            if b not in seen:
                seen.add(b)
                if len(seen) > max_vertices:
                    raise GraphTooLargeError(f"more than {max_vertices} vertices reachable from {root}")
                queue.append(b)
    return OrdGraph(n, root, frozenset(seen), tuple(edges))


def longest_successor_path(g: OrdGraph) -> int:
    """Max successor-edge count over root-to-0 paths, by DP in topological order.

    Uses only the explicit edge list, never the ordinal structure.
    """
    out_edges: dict = {v: [] for v in g.vertices}
    indeg = {v: 0 for v in g.vertices}
    for a, b, kind in g.edges:
        out_edges[a].append((b, kind))
        indeg[b] += 1
    order = []
    queue = deque(v for v in g.vertices if indeg[v] == 0)
    while queue:
        v = queue.popleft()
        order.append(v)
        for b, _ in out_edges[v]:
            indeg[b] -= 1
            if indeg[b] == 0:
                queue.append(b)
    if len(order) != len(g.vertices):
        raise ValueError("graph has a cycle")
    best: dict = {}
    for v in reversed(order):
        if v == ZERO:
            best[v] = 0
            continue
        vals = [best[b] + (kind == "successor") for b, kind in out_edges[v] if best.get(b) is not None]
        best[v] = max(vals) if vals else None
    if best.get(g.root) is None:
        raise ValueError("no path from the root to 0")
    return best[g.root]


def _dot_id(a: Ordinal) -> str:
    return '"' + format_ordinal(a) + '"'


def export_dot(g: OrdGraph) -> str:
    """DOT digraph: solid successor edges, dashed limit edges."""
    lines = [f"digraph G_{g.n} {{", "  rankdir=TB;"]
    for v in sorted(g.vertices, reverse=True):
        lines.append(f"  {_dot_id(v)} [label={_dot_id(v)}];")
    for a, b, kind in g.edges:
        style = "solid" if kind == "successor" else "dashed"
        lines.append(f"  {_dot_id(a)} -> {_dot_id(b)} [style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def find_separation(alpha: Ordinal, beta: Ordinal, policy: FundSeqPolicy = DEFAULT_POLICY,
                    scan_limit: int = 50) -> int | None:
    """Least N with F(n, alpha) < F(n, beta) for every N < n <= scan_limit.

    None when the inequality already fails at ``scan_limit`` (no evidence).
    """
    if not alpha < beta:
        raise ValueError(f"need alpha < beta, got {alpha} and {beta}")
    last_bad = 0
    for n in range(1, scan_limit + 1):
        if not _f(n, alpha, policy) < _f(n, beta, policy):
            last_bad = n
    if last_bad == scan_limit:
        return None
    return last_bad


def f_table(alphas: Iterable[Ordinal], ns: Iterable[int], policy: FundSeqPolicy = DEFAULT_POLICY) -> list[dict]:
    ns = list(ns)
    return [{"alpha": format_ordinal(a), "n": n, "F": f_value(n, a, policy)} for a in alphas for n in ns]


def table_to_csv(rows: list[dict], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=header, extrasaction="ignore")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()
