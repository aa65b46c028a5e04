"""Fully dynamic maximal independent set with per-vertex dominator counters."""

from __future__ import annotations

from typing import Protocol

from .graph import Graph, iter_bits

Delta = list[tuple[int, bool]]


class MisBackend(Protocol):
    """What the clique reductions need from a dynamic MIS engine."""

    g: Graph
    recourse_total: int

    def insert(self, u: int, v: int) -> Delta: ...

    def delete(self, u: int, v: int) -> Delta: ...

    def members(self) -> set[int]: ...

    def contains(self, v: int) -> bool: ...


class DynamicMis:
    """Counter-based MIS that is deterministic and safe against adaptive updates.

    ``mis_nbr_count[v]`` is the number of neighbours of ``v`` in the set.
    Inserting an edge inside the set evicts its larger endpoint and re-admits
    any of that vertex's neighbours left undominated; deleting an edge admits
    an endpoint whose count dropped to zero.  Every update does ``O(deg)`` work.

    ``work`` counts elementary operations (edge updates, counter updates and
    neighbour visits) for cost measurements.
    """

    def __init__(self, g: Graph, copy: bool = True) -> None:
        self.g = g.copy() if copy else g
        n = self.g.n
        self.in_mis = [False] * n
        self.mis_nbr_count = [0] * n
        self.recourse_total = 0
        self.updates = 0
        self.work = 0
        for v in range(n):
            if self.mis_nbr_count[v] == 0:
                self._join(v)
        self.recourse_total = 0
        self.work = 0

    def _join(self, v: int) -> None:
        self.in_mis[v] = True
        cnt = self.mis_nbr_count
        for w in iter_bits(self.g.rows[v]):
            cnt[w] += 1
            self.work += 1

    def _leave(self, v: int) -> None:
        self.in_mis[v] = False
        cnt = self.mis_nbr_count
        for w in iter_bits(self.g.rows[v]):
            cnt[w] -= 1
            self.work += 1

    def members(self) -> set[int]:
        return {v for v, s in enumerate(self.in_mis) if s}

    def contains(self, v: int) -> bool:
        return self.in_mis[v]

    def insert(self, u: int, v: int) -> Delta:
        self.g.insert_edge(u, v)
        self.updates += 1
        self.work += 1
        inm, cnt = self.in_mis, self.mis_nbr_count
        if inm[u]:
            cnt[v] += 1
        if inm[v]:
            cnt[u] += 1
        if not (inm[u] and inm[v]):
            return []
        out = max(u, v)
        self._leave(out)
        delta = [(out, False)]
        for w in iter_bits(self.g.rows[out]):
            self.work += 1
            if not inm[w] and cnt[w] == 0:
                self._join(w)
                delta.append((w, True))
        delta.sort()
        self.recourse_total += len(delta)
        return delta

    def delete(self, u: int, v: int) -> Delta:
        self.g.delete_edge(u, v)
        self.updates += 1
        self.work += 1
        inm, cnt = self.in_mis, self.mis_nbr_count
        if inm[u]:
            cnt[v] -= 1
        if inm[v]:
            cnt[u] -= 1
        delta = []
        for x in sorted((u, v)):
            if not inm[x] and cnt[x] == 0:
                self._join(x)
                delta.append((x, True))
        self.recourse_total += len(delta)
        return delta

    def check(self) -> None:
        """Assert the counters and both MIS invariants (linear time, for tests)."""
        rows = self.g.rows
        mask = sum(1 << v for v, s in enumerate(self.in_mis) if s)
        for v in range(self.g.n):
            c = (rows[v] & mask).bit_count()
            assert c == self.mis_nbr_count[v], f"counter of {v}: {self.mis_nbr_count[v]} != {c}"
            if self.in_mis[v]:
                assert c == 0, f"{v} has a neighbour in the set"
            else:
                assert c >= 1, f"{v} is undominated"
