"""Symmetric-arc graphs and one-vertex wedge composites.

Every undirected edge ``i`` is stored as the arc pair ``(2i, 2i+1)``, so the
inverse of arc ``a`` is always ``a ^ 1``. Graphs are immutable after
construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

__all__ = [
    "Graph",
    "WedgeGraph",
    "build_johnson",
    "build_star",
    "build_hypercube",
    "build_complete",
    "wedge",
    "johnson_star",
    "write_edgelist",
]

MAX_HYPERCUBE_DIM = 20


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple connected graph stored as symmetric arcs.

    Attributes
    ----------
    vertex_count : int
    origin, terminus : ndarray of int
        ``origin[a]`` and ``terminus[a]`` for every arc id ``a``.
    labels : tuple, optional
        Per-vertex labels (sorted k-tuples for Johnson graphs, bitmasks
        for hypercubes).
    """

    vertex_count: int
    origin: np.ndarray
    terminus: np.ndarray
    labels: Optional[tuple] = None
    name: str = ""

    def __post_init__(self):
        if self.origin.shape != self.terminus.shape or self.origin.size % 2:
            raise ValueError("arcs must come in inverse pairs")
        if self.origin.size and (self.origin.min() < 0 or self.origin.max() >= self.vertex_count):
            raise ValueError("arc endpoint out of range")
        if np.any(self.origin[0::2] != self.terminus[1::2]) or np.any(self.origin[1::2] != self.terminus[0::2]):
            raise ValueError("arc 2i+1 must be the reverse of arc 2i")
        if np.any(self.origin == self.terminus):
            raise ValueError("self-loops are not allowed")
        self.origin.setflags(write=False)
        self.terminus.setflags(write=False)

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Sequence[tuple[int, int]], labels=None, name=""):
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        origin = np.empty(2 * len(e), dtype=np.int64)
        terminus = np.empty_like(origin)
        origin[0::2], terminus[0::2] = e[:, 0], e[:, 1]
        origin[1::2], terminus[1::2] = e[:, 1], e[:, 0]
        return cls(vertex_count, origin, terminus, labels=labels, name=name)

    @property
    def arc_count(self) -> int:
        return int(self.origin.size)

    @property
    def edge_count(self) -> int:
        return self.arc_count // 2

    @cached_property
    def inverse(self) -> np.ndarray:
        inv = np.arange(self.arc_count) ^ 1
        inv.setflags(write=False)
        return inv

    @cached_property
    def degree(self) -> np.ndarray:
        deg = np.bincount(self.terminus, minlength=self.vertex_count)
        deg.setflags(write=False)
        return deg

    @property
    def edges(self) -> np.ndarray:
        return np.stack([self.origin[0::2], self.terminus[0::2]], axis=1)

    def adjacency(self) -> sparse.csr_matrix:
        data = np.ones(self.arc_count)
        return sparse.csr_matrix((data, (self.origin, self.terminus)),
                                 shape=(self.vertex_count, self.vertex_count))

    def is_connected(self) -> bool:
        if self.vertex_count <= 1:
            return True
        n_comp, _ = csgraph.connected_components(self.adjacency(), directed=False)
        return n_comp == 1

    def is_simple(self) -> bool:
        e = np.sort(self.edges, axis=1)
        return len(np.unique(e, axis=0)) == len(e)

    def distances_from(self, v: int) -> np.ndarray:
        """Unweighted shortest-path distance from ``v`` to every vertex."""
        d = csgraph.shortest_path(self.adjacency(), directed=False, unweighted=True, indices=v)
        return d

    def __repr__(self):
        return f"Graph({self.name or 'anonymous'}, V={self.vertex_count}, A={self.arc_count})"


@dataclass(frozen=True, eq=False)
class WedgeGraph:
    """Two graphs glued at one shared vertex ``v_star``.

    Arcs of the first graph keep ids ``0 .. |A_1|-1`` and are tagged as
    the walker's home component; arcs of the second graph follow. The
    leaf set holds the degree-one vertices of the second graph, where the
    walk reflects with phase -1.
    """

    graph: Graph
    v_star: int
    first_arc_count: int
    leaf_set: frozenset = field(default_factory=frozenset)
    params: Optional[dict] = None

    @property
    def arc_count(self) -> int:
        return self.graph.arc_count

    @cached_property
    def in_second(self) -> np.ndarray:
        """Boolean arc mask of the second component (the target arc set A_S)."""
        mask = np.zeros(self.graph.arc_count, dtype=bool)
        mask[self.first_arc_count:] = True
        mask.setflags(write=False)
        return mask

    @property
    def first_arcs(self) -> np.ndarray:
        return np.arange(self.first_arc_count)

    @property
    def second_arcs(self) -> np.ndarray:
        return np.arange(self.first_arc_count, self.graph.arc_count)

    @cached_property
    def leaf_mask(self) -> np.ndarray:
        mask = np.zeros(self.graph.vertex_count, dtype=bool)
        mask[list(self.leaf_set)] = True
        mask.setflags(write=False)
        return mask

    def __repr__(self):
        return f"WedgeGraph({self.graph.name}, v*={self.v_star}, leaves={len(self.leaf_set)})"


def build_johnson(n: int, k: int, *, strict: bool = True) -> Graph:
    """Johnson graph J(n, k): k-subsets of {0..n-1}, adjacent iff they share k-1 elements.

    With ``strict`` (the default) only the large-n regime ``n > 2k`` is
    accepted, where every distance class from a vertex is nonempty and the
    class reduction is well defined. ``strict=False`` admits any
    ``1 <= k <= n-1``.
    """
    if k < 1 or n < 2 or k > n - 1:
        raise ValueError(f"J({n},{k}) needs 1 <= k <= n-1")
    if strict and n <= 2 * k:
        raise ValueError(f"J({n},{k}) outside the regime n > 2k")
    verts = list(itertools.combinations(range(n), k))
    index = {v: i for i, v in enumerate(verts)}
    edges = []
    for i, v in enumerate(verts):
        members = set(v)
        outside = [x for x in range(n) if x not in members]
        for out in v:
            rest = members - {out}
            for new in outside:
                j = index[tuple(sorted(rest | {new}))]
                if j > i:
                    edges.append((i, j))
    return Graph.from_edges(len(verts), edges, labels=tuple(verts), name=f"J({n},{k})")


def build_star(m: int) -> Graph:
    """Star S_m; vertex 0 is the center."""
    if m < 1:
        raise ValueError("a star needs at least one leaf")
    return Graph.from_edges(m + 1, [(0, i) for i in range(1, m + 1)], name=f"S_{m}")


def build_hypercube(n: int) -> Graph:
    if not 1 <= n <= MAX_HYPERCUBE_DIM:
        raise ValueError(f"hypercube dimension must be in [1, {MAX_HYPERCUBE_DIM}]")
    size = 1 << n
    edges = [(v, v | (1 << b)) for v in range(size) for b in range(n) if not v & (1 << b)]
    return Graph.from_edges(size, edges, labels=tuple(range(size)), name=f"Q_{n}")


def build_complete(n: int) -> Graph:
    if n < 2:
        raise ValueError("K_n needs n >= 2")
    return Graph.from_edges(n, list(itertools.combinations(range(n), 2)), name=f"K_{n}")


def wedge(g1: Graph, v1: int, g2: Graph, v2: int, params: Optional[dict] = None) -> WedgeGraph:
    """Identify vertex ``v1`` of ``g1`` with vertex ``v2`` of ``g2``.

    Vertices of ``g1`` keep their ids; the remaining vertices of ``g2``
    are appended in their original order.
    """
    for g, v in ((g1, v1), (g2, v2)):
        if not 0 <= v < g.vertex_count:
            raise ValueError(f"vertex {v} not in {g!r}")
        if not g.is_connected():
            raise ValueError(f"{g!r} is not connected")
    relabel = np.empty(g2.vertex_count, dtype=np.int64)
    others = [u for u in range(g2.vertex_count) if u != v2]
    relabel[v2] = v1
    relabel[others] = g1.vertex_count + np.arange(len(others))

    origin = np.concatenate([g1.origin, relabel[g2.origin]])
    terminus = np.concatenate([g1.terminus, relabel[g2.terminus]])
    labels = None
    if g1.labels is not None:
        labels = tuple(g1.labels) + (None,) * len(others)
    merged = Graph(g1.vertex_count + len(others), origin, terminus, labels=labels,
                   name=f"{g1.name}^{g2.name}")
    leaves = frozenset(int(relabel[u]) for u in others if g2.degree[u] == 1)
    return WedgeGraph(merged, v1, g1.arc_count, leaves, params)


def johnson_star(n: int, k: int, m: int, v_star: int = 0) -> WedgeGraph:
    """J(n, k) with the center of S_m glued onto Johnson vertex ``v_star``."""
    return wedge(build_johnson(n, k), v_star, build_star(m), 0, params={"n": n, "k": k, "m": m})


def write_edgelist(graph: Graph, path) -> None:
    """Dump ``u v`` per undirected edge, zero-based ids."""
    lines = [f"{u} {v}" for u, v in graph.edges.tolist()]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))
