"""The kernel graph: an edge {x, y} wherever K(x, y) != 0, x != y.

Components, BFS spanning forest and fundamental cycles are computed once in
:func:`build_graph`. Traversal order is ascending by index everywhere, so
forests, cycles and everything derived from them are reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import DisconnectedPair
from .kernels import SymmetricKernel


@dataclass(frozen=True)
class Path:
    """A walk p_0, ..., p_n along graph edges; ``length`` is n."""

    vertices: tuple

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def is_cycle(self) -> bool:
        return self.vertices[0] == self.vertices[-1]

    def steps(self) -> Iterator[tuple]:
        v = self.vertices
        return zip(v, v[1:])

    def reversed(self) -> "Path":
        return Path(self.vertices[::-1])

    def __add__(self, other: "Path") -> "Path":
        if self.vertices[-1] != other.vertices[0]:
            raise ValueError("paths do not meet")
        return Path(self.vertices + other.vertices[1:])


@dataclass(frozen=True, eq=False)
class KernelGraph:
    n: int
    neighbors: tuple  # ascending neighbor tuple per vertex
    adjacency_rows: tuple  # bytes per vertex; adjacency_rows[i][j] == 1 iff edge
    edge_count: int
    components: tuple  # sorted vertex tuples, ordered by base vertex
    component_of: tuple
    parent: tuple  # BFS parent, -1 at component bases
    depth: tuple

    @property
    def bases(self) -> tuple:
        return tuple(c[0] for c in self.components)

    def has_edge(self, i: int, j: int) -> bool:
        return i != j and self.adjacency_rows[i][j] == 1

    def edges(self) -> Iterator[tuple]:
        """All edges (i, j) with i < j in lexicographic order."""
        for i, nbrs in enumerate(self.neighbors):
            for j in nbrs:
                if j > i:
                    yield (i, j)

    def is_tree_edge(self, i: int, j: int) -> bool:
        return self.parent[j] == i or self.parent[i] == j

    def forest(self) -> list:
        """Tree edges as sorted (min, max) pairs, in lexicographic order."""
        return sorted((min(v, p), max(v, p)) for v, p in enumerate(self.parent) if p >= 0)

    def non_tree_edges(self) -> Iterator[tuple]:
        parent = self.parent
        for i, j in self.edges():
            if parent[j] != i and parent[i] != j:
                yield (i, j)

    @property
    def cycle_rank(self) -> int:
        """Number of fundamental cycles: |E| - n + #components."""
        return self.edge_count - self.n + len(self.components)

    def fundamental_cycle(self, u: int, v: int) -> Path:
        """Cycle of a non-tree edge {u, v}: tree path u -> v, then back to u."""
        return Path(tree_path(self, u, v).vertices + (u,))

    def fundamental_cycles(self) -> Iterator[Path]:
        for u, v in self.non_tree_edges():
            yield self.fundamental_cycle(u, v)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "edges": self.edge_count,
            "components": [list(c) for c in self.components],
            "bases": list(self.bases),
            "forest": [list(e) for e in self.forest()],
            "fundamental_cycles": [list(c.vertices) for c in self.fundamental_cycles()],
        }


def build_graph(K: SymmetricKernel) -> KernelGraph:
    n = K.n
    mask = K.spec.nonzero_mask
    rows = []
    for i, r in enumerate(K.entries):
        row = mask(r)
        row[i] = 0  # no self-loops
        rows.append(bytes(row))
    idx = list(range(n))
    neighbors = tuple(tuple(idx[j] for j in range(n) if row[j]) for row in rows)
    edge_count = sum(len(nb) for nb in neighbors) // 2

    parent = [-1] * n
    depth = [0] * n
    component_of = [-1] * n
    components = []
    for base in range(n):
        if component_of[base] >= 0:
            continue
        cid = len(components)
        component_of[base] = cid
        members = [base]
        queue = deque([base])
        while queue:
            x = queue.popleft()
            dx = depth[x] + 1
            for y in neighbors[x]:
                if component_of[y] < 0:
                    component_of[y] = cid
                    parent[y] = x
                    depth[y] = dx
                    members.append(y)
                    queue.append(y)
        components.append(tuple(sorted(members)))

    return KernelGraph(
        n=n,
        neighbors=neighbors,
        adjacency_rows=tuple(rows),
        edge_count=edge_count,
        components=tuple(components),
        component_of=tuple(component_of),
        parent=tuple(parent),
        depth=tuple(depth),
    )


def tree_path(G: KernelGraph, x: int, y: int) -> Path:
    """The unique forest path from x to y."""
    if G.component_of[x] != G.component_of[y]:
        raise DisconnectedPair(f"{x} and {y} lie in different components")
    parent, depth = G.parent, G.depth
    left, right = [x], [y]
    a, b = x, y
    while depth[a] > depth[b]:
        a = parent[a]
        left.append(a)
    while depth[b] > depth[a]:
        b = parent[b]
        right.append(b)
    while a != b:
        a, b = parent[a], parent[b]
        left.append(a)
        right.append(b)
    right.pop()
    return Path(tuple(left) + tuple(reversed(right)))


def is_path(G: KernelGraph, vertices: Sequence[int]) -> bool:
    return all(G.has_edge(a, b) for a, b in zip(vertices, vertices[1:]))
