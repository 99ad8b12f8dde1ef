from dataclasses import dataclass
from typing import Tuple

import networkx as nx

from uniflab.util import InstanceFormatError


@dataclass(frozen=True)
class CnfFormula:
    """Clauses of signed, 1-based literals in the DIMACS convention.

    Clauses may hold fewer than three literals; the reductions pad them by
    repeating the last literal.
    """

    num_vars: int
    clauses: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        for clause in self.clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise InstanceFormatError("literal {} outside 1..{}".format(lit, self.num_vars))

    @property
    def is_monotone(self):
        return all(lit > 0 for clause in self.clauses for lit in clause)


# not-all-equal instances share the clause layout
NaeInstance = CnfFormula


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``1..num_vertices``.

    Graphs with fewer than three vertices are accepted, including the empty one.
    """

    num_vertices: int
    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        for u, v in self.edges:
            if u == v:
                raise InstanceFormatError("self-loop on vertex {}".format(u))
            if not (1 <= u <= self.num_vertices and 1 <= v <= self.num_vertices):
                raise InstanceFormatError("edge {} outside 1..{}".format((u, v), self.num_vertices))

    def to_networkx(self):
        g = nx.Graph()
        g.add_nodes_from(range(1, self.num_vertices + 1))
        g.add_edges_from(self.edges)
        return g

    @classmethod
    def from_networkx(cls, g):
        nodes = sorted(g.nodes())
        index = {v: k + 1 for k, v in enumerate(nodes)}
        edges = tuple(sorted(tuple(sorted((index[u], index[v]))) for u, v in g.edges()))
        return cls(len(nodes), edges)


def is_proper_coloring(graph: Graph, colors) -> bool:
    return all(colors[u] != colors[v] for u, v in graph.edges)
