"""Decremental maximal cliques through a pivot reduction to dynamic MIS."""

from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np

from .connectivity import DecrementalConnectivity, Split
from .decr_triangle import DecrementalTriangle
from .graph import Graph, complement_induced, edge, iter_bits
from .mis import DynamicMis, MisBackend
from .triangles import BalanceConfig


class CliqueFailure(RuntimeError):
    """Every sampled pivot left the big component; the answer is withheld, never wrong."""


def default_gamma(n: int) -> int:
    return math.ceil(2 * math.log2(max(n, 2))) + 4


def lowest_degree_vertex(g: Graph) -> int:
    return min(range(g.n), key=lambda v: (g.degree[v], v))


class PivotClique:
    """Maximal clique of the pivot's component under edge deletions.

    The pivot ``v`` fixes ``G' = G[N(v)]^c``.  A maximal independent set ``S``
    of ``G'`` plus ``v`` is a maximal clique of ``G``.  Deleting ``{v, w}``
    strips every ``G'`` edge at ``w`` (``w`` is *eliminated*, stays in ``S`` and
    drops out of the output); deleting an edge inside ``N(v)`` inserts it into
    ``G'``; other deletions are ignored.  Updates fed to the MIS engine depend
    only on the deletion sequence, so an adaptive-safe engine keeps the whole
    structure adaptive-safe.
    """

    def __init__(self, g: Graph, pivot: Optional[int] = None,
                 mis_factory: Callable[[Graph], MisBackend] = DynamicMis) -> None:
        if g.n == 0:
            raise ValueError("empty vertex set")
        self.pivot = lowest_degree_vertex(g) if pivot is None else pivot
        self.ids = list(iter_bits(g.rows[self.pivot]))
        self.pos = {w: i for i, w in enumerate(self.ids)}
        self.initial_degree = len(self.ids)
        gprime, _ = complement_induced(g, self.ids)
        self.mis = mis_factory(gprime)
        self.eliminated: set[int] = set()
        self.work = 0

    @property
    def gprime(self) -> Graph:
        return self.mis.g

    @property
    def mis_updates(self) -> int:
        return self.mis.updates

    def delete(self, a: int, b: int) -> None:
        self.work += 1
        v = self.pivot
        if a == v or b == v:
            w = b if a == v else a
            self.eliminated.add(w)
            i = self.pos[w]
            for j in list(iter_bits(self.gprime.rows[i])):
                self.mis.delete(i, j)
            return
        i, j = self.pos.get(a), self.pos.get(b)
        if i is None or j is None or a in self.eliminated or b in self.eliminated:
            return
        self.mis.insert(i, j)

    def clique(self) -> set[int]:
        out = {self.pivot}
        for i, w in enumerate(self.ids):
            if self.mis.contains(i) and w not in self.eliminated:
                out.add(w)
        return out


class BigComponent:
    """Maximal clique of the component holding more than half of ``n0`` vertices.

    Runs ``gamma`` pivot cliques with independent uniformly random pivots and
    reports the one with the smallest index whose pivot is still inside the
    big component.  Copies whose pivot fell out are discarded for good.  When
    none is left the structure raises :class:`CliqueFailure`, or, with
    ``resample=True``, draws ``gamma`` fresh pivots from the current component.
    """

    def __init__(self, conn: DecrementalConnectivity, members: list[int], n0: int, label: int,
                 rng: np.random.Generator, gamma: int, resample: bool = False) -> None:
        self.conn = conn
        self.n0 = n0
        self.label = label
        self.gamma = gamma
        self.rng = rng
        self.resample = resample
        self.rebuilds = 0
        self._spawn(members)

    def _spawn(self, members: list[int]) -> None:
        picks = self.rng.integers(0, len(members), size=self.gamma)
        self.pivots = [members[k] for k in picks.tolist()]
        self.copies: list[Optional[PivotClique]] = [PivotClique(self.conn.g, pivot=p) for p in self.pivots]
        self.valid_front = 0

    def delete(self, a: int, b: int) -> None:
        for c in self.copies:
            if c is not None:
                c.delete(a, b)

    def retarget(self, label: int) -> None:
        """The big component shrank to ``label``; drop copies whose pivot is elsewhere."""
        self.label = label
        comp_id = self.conn.comp_id
        for i, c in enumerate(self.copies):
            if c is not None and comp_id[c.pivot] != label:
                self.copies[i] = None
        front = next((i for i, c in enumerate(self.copies) if c is not None), None)
        if front is not None:
            self.valid_front = front
        elif self.resample:
            self.rebuilds += 1
            self._spawn(self.conn.members(label))
        else:
            raise CliqueFailure(f"all {self.gamma} pivots left the big component")

    def clique(self) -> set[int]:
        return self.copies[self.valid_front].clique()

    @property
    def work(self) -> int:
        return sum(c.work + c.mis.work for c in self.copies if c is not None)


class CliqueLevel:
    """One node of the recursion: a vertex set of size ``n0`` and its big component, if any."""

    def __init__(self, owner: Mccc, vertices: list[int], depth: int) -> None:
        self.vertices = vertices
        self.n0 = len(vertices)
        self.depth = depth
        self.star: Optional[BigComponent] = None
        self.children: list[CliqueLevel] = []
        comp_id = owner.conn.comp_id
        groups: dict[int, list[int]] = {}
        for v in vertices:
            groups.setdefault(comp_id[v], []).append(v)
        for label, members in sorted(groups.items(), key=lambda kv: kv[1][0]):
            if 2 * len(members) > self.n0:
                self.star = BigComponent(owner.conn, members, self.n0, label,
                                         owner.spawn_rng(), owner.gamma, owner.resample)
                owner.star_of[label] = self
            else:
                self.children.append(CliqueLevel(owner, members, depth + 1))

    def on_split(self, owner: Mccc, split: Split) -> None:
        big, small = split.label_a, split.label_b
        if split.size_b > split.size_a:
            big, small = small, big
        big_size = owner.conn.comp_size[big]
        del owner.star_of[split.label_a]
        if 2 * big_size > self.n0:
            self.star.retarget(big)
            owner.star_of[big] = self
            parts = [small]
        else:
            self.star = None
            parts = [big, small]
        for label in parts:
            self.children.append(CliqueLevel(owner, owner.conn.members(label), self.depth + 1))


class Mccc:
    """A maximal clique in every connected component, under oblivious deletions.

    Components are tracked by a decremental connectivity structure.  Each
    component is the big component of exactly one recursion level; deletions
    go straight to that level, and splits spawn child levels.

    The pivot sampling is only sound against deletion sequences fixed in
    advance.  ``resample=True`` trades the failure signal for fresh pivots,
    which keeps every answer correct under adaptive deletions at unbounded cost.
    """

    def __init__(self, g: Graph, seed=0, gamma: Optional[int] = None, resample: bool = False) -> None:
        self.conn = DecrementalConnectivity(g)
        self.gamma = default_gamma(g.n) if gamma is None else gamma
        self.resample = resample
        self._seeds = np.random.SeedSequence(seed)
        self.star_of: dict[int, CliqueLevel] = {}
        self.root = CliqueLevel(self, list(range(g.n)), 0)

    def spawn_rng(self) -> np.random.Generator:
        return np.random.default_rng(self._seeds.spawn(1)[0])

    @property
    def g(self) -> Graph:
        return self.conn.g

    def delete(self, a: int, b: int) -> set[int]:
        label = self.conn.comp_id[a]
        split = self.conn.delete(a, b)
        level = self.star_of[label]
        level.star.delete(a, b)
        if split is not None:
            level.on_split(self, split)
        return self.output()

    def clique_of(self, v: int) -> set[int]:
        return self.star_of[self.conn.comp_id[v]].star.clique()

    def output(self) -> set[int]:
        out: set[int] = set()
        for level in self.star_of.values():
            out |= level.star.clique()
        return out

    @property
    def rebuilds(self) -> int:
        return sum(lv.star.rebuilds for lv in self.levels() if lv.star is not None)

    def levels(self) -> list[CliqueLevel]:
        out, stack = [], [self.root]
        while stack:
            lv = stack.pop()
            out.append(lv)
            stack.extend(lv.children)
        return out


class ThreeMaxClique:
    """A clique that has at least three vertices or is maximal, under adaptive deletions.

    Reports the decremental detector's triangle while one exists, then the
    smallest remaining edge (every edge of a triangle-free graph is a maximal
    clique), then vertex 0 once the graph is empty.
    """

    def __init__(self, g: Graph, seed=0, cfg: Optional[BalanceConfig] = None) -> None:
        if g.n == 0:
            raise ValueError("empty vertex set")
        self.tri = DecrementalTriangle(g, seed, cfg)

    @property
    def g(self) -> Graph:
        return self.tri.external

    def phase(self) -> str:
        if self.tri.active is not None:
            return "triangle"
        return "edge" if self.g.m else "vertex"

    def report(self) -> tuple[int, ...]:
        if self.tri.active is not None:
            return self.tri.active
        for u, row in enumerate(self.g.rows):
            if row:
                return edge(u, (row & -row).bit_length() - 1)
        return (0,)

    def delete(self, a: int, b: int) -> tuple[int, ...]:
        self.tri.delete(a, b)
        return self.report()
