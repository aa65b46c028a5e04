"""Decremental connectivity via a spanning forest and smaller-side replacement search."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .graph import Graph, iter_bits


@dataclass(frozen=True)
class Split:
    """A component broke in two: ``label_a`` kept its label, ``label_b`` is new."""

    label_a: int
    size_a: int
    label_b: int
    size_b: int


class DecrementalConnectivity:
    """Connected components of a graph under edge deletions.

    A spanning forest is kept as bitset rows.  Deleting a forest edge explores
    both halves of the cut tree in lockstep; the half that runs out first is
    the smaller one, and only its vertices are scanned for a replacement edge
    or relabelled on a split.
    """

    def __init__(self, g: Graph, copy: bool = True) -> None:
        self.g = g.copy() if copy else g
        n = self.g.n
        self.forest = [0] * n
        self.comp_id = [-1] * n
        self.comp_size: dict[int, int] = {}
        self._next_label = 0
        self.work = 0
        rows = self.g.rows
        for s in range(n):
            if self.comp_id[s] != -1:
                continue
            label = self._fresh()
            self.comp_id[s] = label
            stack = [s]
            size = 1
            while stack:
                u = stack.pop()
                for w in iter_bits(rows[u]):
                    if self.comp_id[w] == -1:
                        self.comp_id[w] = label
                        self.forest[u] |= 1 << w
                        self.forest[w] |= 1 << u
                        stack.append(w)
                        size += 1
            self.comp_size[label] = size

    def _fresh(self) -> int:
        label = self._next_label
        self._next_label += 1
        return label

    def component_of(self, v: int) -> int:
        return self.comp_id[v]

    def connected(self, u: int, v: int) -> bool:
        return self.comp_id[u] == self.comp_id[v]

    def size_of(self, v: int) -> int:
        return self.comp_size[self.comp_id[v]]

    def largest(self) -> int:
        """Label of a maximum-size component (smallest label on ties)."""
        return min(self.comp_size, key=lambda c: (-self.comp_size[c], c))

    def components(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for v, c in enumerate(self.comp_id):
            out.setdefault(c, []).append(v)
        return out

    def members(self, label: int) -> list[int]:
        return [v for v, c in enumerate(self.comp_id) if c == label]

    def _tree_walk(self, root: int) -> Iterator[int]:
        seen = {root}
        stack = [root]
        forest = self.forest
        while stack:
            u = stack.pop()
            yield u
            for w in iter_bits(forest[u]):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)

    def _smaller_side(self, a: int, b: int) -> list[int]:
        """Vertices of the smaller tree half after cutting ``{a, b}``."""
        walks = (self._tree_walk(a), self._tree_walk(b))
        found: tuple[list[int], list[int]] = ([], [])
        while True:
            for side in (0, 1):
                nxt = next(walks[side], None)
                if nxt is None:
                    return found[side]
                found[side].append(nxt)
                self.work += 1

    def delete(self, u: int, v: int) -> Optional[Split]:
        self.g.delete_edge(u, v)
        if not (self.forest[u] >> v) & 1:
            return None
        self.forest[u] &= ~(1 << v)
        self.forest[v] &= ~(1 << u)
        small = self._smaller_side(u, v)
        mask = 0
        for x in small:
            mask |= 1 << x
        rows = self.g.rows
        for x in small:
            self.work += 1
            out = rows[x] & ~mask
            if out:
                y = (out & -out).bit_length() - 1
                self.forest[x] |= 1 << y
                self.forest[y] |= 1 << x
                return None
        old = self.comp_id[u]
        label = self._fresh()
        for x in small:
            self.comp_id[x] = label
        self.comp_size[old] -= len(small)
        self.comp_size[label] = len(small)
        return Split(old, self.comp_size[old], label, len(small))
