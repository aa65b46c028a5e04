"""Mutable undirected simple graphs over bitset rows.

Each adjacency row is a Python ``int`` used as a packed bitset: bit ``v`` of
``rows[u]`` is set iff ``{u, v}`` is an edge.  Python integers are stored as
arrays of machine words, so row intersections and popcounts run word-packed
without an extra dependency.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

Edge = tuple[int, int]


class GraphError(ValueError):
    """Raised when an update violates the simple-graph contract."""


def edge(u: int, v: int) -> Edge:
    """Canonical form of the edge ``{u, v}`` (smaller id first)."""
    return (u, v) if u < v else (v, u)


def iter_bits(x: int) -> Iterator[int]:
    """Yield the positions of set bits of ``x`` in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def lowest_bit(x: int) -> int:
    """Position of the lowest set bit, or -1 when ``x == 0``."""
    return (x & -x).bit_length() - 1


class Graph:
    """Undirected simple graph on the fixed vertex set ``0..n-1``."""

    __slots__ = ("n", "rows", "degree", "m")

    def __init__(self, n: int, edges: Iterable[Edge] = ()) -> None:
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        self.n = n
        self.rows = [0] * n
        self.degree = [0] * n
        self.m = 0
        for u, v in edges:
            self.insert_edge(u, v)

    def _check(self, u: int, v: int) -> None:
        if u == v:
            raise GraphError(f"self-loop at {u}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise GraphError(f"edge ({u}, {v}) out of range for n={self.n}")

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and (self.rows[u] >> v) & 1 == 1

    def insert_edge(self, u: int, v: int) -> None:
        self._check(u, v)
        if (self.rows[u] >> v) & 1:
            raise GraphError(f"edge ({u}, {v}) already present")
        self.rows[u] |= 1 << v
        self.rows[v] |= 1 << u
        self.degree[u] += 1
        self.degree[v] += 1
        self.m += 1

    def delete_edge(self, u: int, v: int) -> None:
        self._check(u, v)
        if not (self.rows[u] >> v) & 1:
            raise GraphError(f"edge ({u}, {v}) not present")
        self.rows[u] &= ~(1 << v)
        self.rows[v] &= ~(1 << u)
        self.degree[u] -= 1
        self.degree[v] -= 1
        self.m -= 1

    def delete_vertex_edges(self, u: int) -> list[Edge]:
        """Delete every edge incident to ``u``; vertex deletion in a fixed-capacity graph."""
        removed = [edge(u, w) for w in iter_bits(self.rows[u])]
        for a, b in removed:
            self.delete_edge(a, b)
        return removed

    def neighbors(self, u: int) -> Iterator[int]:
        return iter_bits(self.rows[u])

    def common_neighbors(self, u: int, v: int) -> int:
        return self.rows[u] & self.rows[v]

    def edges(self) -> Iterator[Edge]:
        """All edges in lexicographic order."""
        for u, row in enumerate(self.rows):
            for v in iter_bits(row >> (u + 1)):
                yield (u, u + 1 + v)

    def max_degree(self) -> int:
        return max(self.degree, default=0)

    def copy(self) -> Graph:
        g = Graph.__new__(Graph)
        g.n = self.n
        g.rows = list(self.rows)
        g.degree = list(self.degree)
        g.m = self.m
        return g

    def induced(self, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
        """Induced subgraph relabelled to ``0..k-1`` plus the new-to-old id map."""
        ids = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(ids)}
        sub = Graph(len(ids))
        for i, v in enumerate(ids):
            for w in iter_bits(self.rows[v]):
                j = pos.get(w)
                if j is not None and i < j:
                    sub.insert_edge(i, j)
        return sub, ids

    def to_numpy(self) -> np.ndarray:
        """Dense boolean adjacency matrix."""
        n = self.n
        if n == 0:
            return np.zeros((0, 0), dtype=bool)
        nbytes = (n + 7) // 8
        buf = b"".join(row.to_bytes(nbytes, "little") for row in self.rows)
        bits = np.unpackbits(np.frombuffer(buf, dtype=np.uint8).reshape(n, nbytes),
                             axis=1, bitorder="little")
        return bits[:, :n].astype(bool)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def complement_induced(g: Graph, s: Iterable[int]) -> tuple[Graph, list[int]]:
    """Complement of ``g[s]``, relabelled to ``0..|s|-1``, with the id map back to ``g``."""
    ids = sorted(set(s))
    k = len(ids)
    for v in ids:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex {v} out of range")
    # gather the induced rows in new coordinates, then flip within the k-bit window
    pos = {v: i for i, v in enumerate(ids)}
    full = (1 << k) - 1
    out = Graph(k)
    for i, v in enumerate(ids):
        row = 0
        for w in iter_bits(g.rows[v]):
            j = pos.get(w)
            if j is not None:
                row |= 1 << j
        comp = full & ~row & ~(1 << i)
        out.rows[i] = comp
        out.degree[i] = comp.bit_count()
    out.m = sum(out.degree) // 2
    return out, ids


def read_edge_list(path: str | Path) -> Graph:
    """Read the ``n m`` header plus ``u v`` lines format."""
    tokens = Path(path).read_text().split()
    if len(tokens) < 2:
        raise GraphError(f"{path}: missing 'n m' header")
    n, m = int(tokens[0]), int(tokens[1])
    body = tokens[2:]
    if len(body) != 2 * m:
        raise GraphError(f"{path}: header announces {m} edges, found {len(body) / 2:g}")
    it = iter(int(t) for t in body)
    return Graph(n, zip(it, it))


def write_edge_list(g: Graph, path: str | Path) -> None:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges()]
    Path(path).write_text("\n".join(lines) + "\n")
