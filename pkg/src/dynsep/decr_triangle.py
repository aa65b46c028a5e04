"""Staged decremental triangle detection and a naive incremental detector."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bmm import prune_triangle_free_edges
from .graph import Edge, Graph, edge
from .triangles import BalanceConfig, Triangle, TriangleSet, balanced_triangle_set, triangle_stats


@dataclass
class StageRecord:
    stage: int
    edges_at_start: int
    triangles_selected: int
    removed: list[Edge] = field(default_factory=list)
    graph: Optional[Graph] = None
    tset: Optional[TriangleSet] = None


class DecrementalTriangle:
    """Maintains an explicit triangle of a graph under adversarial edge deletions.

    Each stage selects a balanced triangle set of the current (pruned) graph
    and keeps reporting one of its surviving triangles.  When the adversary
    has destroyed the whole set, edges outside triangles are pruned and the
    next stage starts; pruned edges turn later deletions into no-ops.
    """

    def __init__(self, g: Graph, seed=0, cfg: Optional[BalanceConfig] = None,
                 record: bool = False) -> None:
        self.external = g.copy()
        self.g = g.copy()
        self.cfg = cfg or BalanceConfig()
        self.seed = seed
        self.record = record
        self.removed_internal: set[Edge] = set()
        self.stage = -1
        self.stage_log: list[StageRecord] = []
        self.t_set: Optional[TriangleSet] = None
        self._active_idx: Optional[int] = None
        self.active: Optional[Triangle] = None
        self._prune()
        self._next_stage()

    @property
    def terminated(self) -> bool:
        return self.active is None

    def _prune(self) -> list[Edge]:
        dead = prune_triangle_free_edges(self.g)
        self.removed_internal.update(dead)
        return dead

    def _next_stage(self) -> None:
        while self.g.m:
            self.stage += 1
            rng = np.random.default_rng([self.seed, self.stage])
            tset = balanced_triangle_set(self.g, rng, self.cfg)
            self.stage_log.append(StageRecord(
                self.stage, self.g.m, len(tset),
                graph=self.g.copy() if self.record else None,
                tset=tset if self.record else None,
            ))
            if len(tset):
                self.t_set = tset
                self._select()
                return
            # nothing sampled: the stage is over before it starts
            self.stage_log[-1].removed.extend(self._prune())
        self.t_set = None
        self._active_idx = None
        self.active = None

    def _select(self) -> None:
        self._active_idx = self.t_set.first_alive()
        self.active = self.t_set.triangle(self._active_idx)

    def delete(self, u: int, v: int) -> Optional[Triangle]:
        """Process the deletion of ``{u, v}`` and return the active triangle (``None`` once triangle-free)."""
        e = edge(u, v)
        self.external.delete_edge(*e)
        if e in self.removed_internal or self.t_set is None:
            return self.active
        self.g.delete_edge(*e)
        self.stage_log[-1].removed.append(e)
        self.t_set.kill_edge(*e)
        if self.t_set.alive_count == 0:
            self.stage_log[-1].removed.extend(self._prune())
            self._next_stage()
        elif not self.t_set.is_alive(self._active_idx):
            self._select()
        return self.active


def stage_progress(rec: StageRecord) -> tuple[float, int, float]:
    """Value removed during a recorded stage, the stage's edge count, and its realized balance factor.

    Returns ``(sum of v_{G_i}(e) over removed edges, |E(G_i)|, max mult(e) / v_{G_i}(e))``.
    """
    if rec.graph is None or rec.tset is None:
        raise ValueError("stage was not recorded; construct with record=True")
    stats = triangle_stats(rec.graph)
    values = stats.values()
    removed = sum(values[e] for e in rec.removed)
    alpha = max((mult / values[e] for e, mult in rec.tset.multiplicity().items()), default=0.0)
    return removed, rec.graph.m, alpha


class IncrementalTriangle:
    """Reports YES from the first insertion that closes a triangle onwards."""

    def __init__(self, n: int) -> None:
        self.g = Graph(n)
        self.found = False
        self.witness: Optional[Triangle] = None

    def insert(self, u: int, v: int) -> bool:
        self.g.insert_edge(u, v)
        if not self.found:
            common = self.g.rows[u] & self.g.rows[v]
            if common:
                w = (common & -common).bit_length() - 1
                self.found = True
                self.witness = tuple(sorted((u, v, w)))
        return self.found
