"""Definition-level ground truth.

Everything here works on a plain ``dict[int, set[int]]`` adjacency built from
an edge list; none of it touches the bitset graph's update code.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

Adjacency = Mapping[int, set]

DEFAULT_GUARD = 512


class OracleGuardError(ValueError):
    """Instance too large for a brute-force check."""


def _guard(n: int, guard: Optional[int]) -> None:
    if guard is not None and n > guard:
        raise OracleGuardError(f"n={n} exceeds oracle guard {guard}")


class ShadowGraph:
    """Set-of-pairs mirror of an update trace."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()) -> None:
        self.n = n
        self.adj: dict[int, set[int]] = {v: set() for v in range(n)}
        for u, v in edges:
            self.add(u, v)

    @classmethod
    def of(cls, g) -> ShadowGraph:
        """Mirror anything exposing ``n`` and ``edges()``."""
        return cls(g.n, list(g.edges()))

    def add(self, u: int, v: int) -> None:
        assert u != v and v not in self.adj[u], (u, v)
        self.adj[u].add(v)
        self.adj[v].add(u)

    def remove(self, u: int, v: int) -> None:
        assert v in self.adj[u], (u, v)
        self.adj[u].discard(v)
        self.adj[v].discard(u)

    def has(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u in self.adj for v in self.adj[u] if u < v)

    @property
    def m(self) -> int:
        return sum(len(s) for s in self.adj.values()) // 2


def _adj(g) -> tuple[int, Adjacency]:
    if isinstance(g, ShadowGraph):
        return g.n, g.adj
    sh = ShadowGraph.of(g)
    return sh.n, sh.adj


def find_triangle(g, guard: Optional[int] = DEFAULT_GUARD) -> Optional[tuple[int, int, int]]:
    n, adj = _adj(g)
    _guard(n, guard)
    for x in range(n):
        for y in adj[x]:
            if y <= x:
                continue
            for z in adj[x] & adj[y]:
                if z > y:
                    return (x, y, z)
    return None


def oracle_triangle(g, guard: Optional[int] = DEFAULT_GUARD) -> bool:
    return find_triangle(g, guard) is not None


def is_triangle(g, t: Sequence[int]) -> bool:
    _, adj = _adj(g)
    if len(set(t)) != 3:
        return False
    x, y, z = t
    return y in adj[x] and z in adj[x] and z in adj[y]


def oracle_aetd(inst, guard: Optional[int] = DEFAULT_GUARD) -> dict[tuple[int, int], bool]:
    """For every X-Z edge, whether some Y vertex closes a triangle."""
    n, adj = _adj(inst.g)
    _guard(n, guard)
    ys = set(inst.Y)
    out = {}
    for x in inst.X:
        for z in sorted(adj[x]):
            if z in inst.Z:
                out[(x, z)] = any(y in ys and z in adj[y] for y in adj[x])
    return out


def components(g) -> list[set[int]]:
    n, adj = _adj(g)
    seen: set[int] = set()
    out = []
    for s in range(n):
        if s in seen:
            continue
        comp = {s}
        frontier = [s]
        while frontier:
            u = frontier.pop()
            for w in adj[u]:
                if w not in comp:
                    comp.add(w)
                    frontier.append(w)
        seen |= comp
        out.append(comp)
    return out


def is_clique(g, k: Iterable[int]) -> bool:
    _, adj = _adj(g)
    return all(b in adj[a] for a, b in combinations(list(k), 2))


def is_maximal_clique(g, k: Iterable[int], within: Optional[set[int]] = None) -> bool:
    """``k`` is a non-empty clique and no vertex of ``within`` (default all) extends it."""
    n, adj = _adj(g)
    k = set(k)
    if not k or not is_clique(g, k):
        return False
    pool = set(range(n)) if within is None else within
    if not k <= pool:
        return False
    return not any(k <= adj[w] for w in pool - k)


def oracle_max_clique_check(g, k: Iterable[int], component_scoped: bool = False,
                            guard: Optional[int] = DEFAULT_GUARD) -> bool:
    """Maximal clique of ``g``; with ``component_scoped``, a maximal clique in every component."""
    n, _ = _adj(g)
    _guard(n, guard)
    k = set(k)
    if not component_scoped:
        return is_maximal_clique(g, k)
    for comp in components(g):
        if not is_maximal_clique(g, k & comp, within=comp):
            return False
    return True


def oracle_mis_check(g, s: Iterable[int], guard: Optional[int] = DEFAULT_GUARD) -> bool:
    n, adj = _adj(g)
    _guard(n, guard)
    s = set(s)
    if any(adj[v] & s for v in s):
        return False
    return all(adj[v] & s for v in range(n) if v not in s)


def oracle_oumv(dense: Sequence[Sequence[int]], queries) -> list[bool]:
    """Whether each query ``(X', Y')`` spans a 1-entry of the matrix."""
    return [any(dense[x][y] for x in xs for y in ys) for xs, ys in queries]
