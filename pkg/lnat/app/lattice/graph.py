"""Shortest paths over difference-constraint graphs.

A constraint ``y_head - y_tail <= weight`` is an arc ``tail -> head``. The
distance from ``s`` to ``v`` is then the largest value ``y_v - y_s`` can take
over the (real) solution set. Weights are exact integers or fractions; a
missing distance is ``None`` rather than a large sentinel number.
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction
from typing import NamedTuple

import networkx as nx

Weight = int | Fraction


class Arc(NamedTuple):
    """Constraint ``y[head] - y[tail] <= weight``."""

    tail: int
    head: int
    weight: Weight


class NegativeCycleError(Exception):
    """Raised when a difference-constraint system has no solution.

    Attributes:
        cycle: Nodes of one negative cycle, first node repeated at the end.
    """

    def __init__(self, cycle: Sequence[int]) -> None:
        self.cycle = tuple(cycle)
        super().__init__(f"Negative cycle {' -> '.join(str(v) for v in self.cycle)}")


def constraint_graph(n_nodes: int, arcs: Sequence[Arc]) -> nx.DiGraph:
    """Directed graph on ``0 .. n_nodes - 1``; parallel arcs keep the tightest weight."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(n_nodes))
    for arc in arcs:
        if arc.tail == arc.head:
            if arc.weight < 0:
                raise NegativeCycleError((arc.tail, arc.head))
            continue
        if graph.has_edge(arc.tail, arc.head):
            current = graph[arc.tail][arc.head]["weight"]
            if arc.weight >= current:
                continue
        graph.add_edge(arc.tail, arc.head, weight=arc.weight)
    return graph


def _negative_cycle(graph: nx.DiGraph, source: int) -> NegativeCycleError:
    try:
        cycle = nx.find_negative_cycle(graph, source, weight="weight")
    except nx.NetworkXError:  # pragma: no cover - only called after NetworkXUnbounded
        cycle = [source, source]
    return NegativeCycleError(cycle)


def _lengths(graph: nx.DiGraph, source: int) -> list[Weight | None]:
    try:
        found = nx.single_source_bellman_ford_path_length(graph, source, weight="weight")
    except nx.NetworkXUnbounded:
        raise _negative_cycle(graph, source) from None
    return [found.get(v) for v in range(graph.number_of_nodes())]


def shortest_distances(n_nodes: int, arcs: Sequence[Arc], source: int) -> list[Weight | None]:
    """Single-source shortest paths by Bellman-Ford.

    Args:
        n_nodes: Number of nodes, labelled ``0 .. n_nodes - 1``.
        arcs: Arcs of the constraint graph.
        source: Start node.

    Returns:
        Distance per node, ``None`` for nodes unreachable from ``source``.

    Raises:
        NegativeCycleError: If a negative cycle is reachable from ``source``.
    """
    return _lengths(constraint_graph(n_nodes, arcs), source)


def all_pairs_distances(n_nodes: int, arcs: Sequence[Arc]) -> list[list[Weight | None]]:
    """Shortest distances from every node, sharing one graph.

    Raises:
        NegativeCycleError: If the system is infeasible.
    """
    graph = constraint_graph(n_nodes, arcs)
    return [_lengths(graph, source) for source in range(n_nodes)]
