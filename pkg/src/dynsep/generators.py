"""Seeded instance and update-trace generators."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import networkx as nx
import numpy as np

from .graph import Edge, Graph, GraphError
from .reductions import TripartiteInstance

KINDS = ("gnp", "regular", "tripartite", "k4-lattice")


def gnp(n: int, p: float, seed=0) -> Graph:
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < p
    return Graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def random_regular(n: int, d: int, seed=0) -> Graph:
    if n * d % 2 or d >= n:
        raise ValueError(f"no {d}-regular graph on {n} vertices")
    h = nx.random_regular_graph(d, n, seed=int(np.random.default_rng(seed).integers(2**31)))
    return Graph(n, h.edges())


def tripartite(n: int, p: float, seed=0, max_degree: Optional[int] = None) -> TripartiteInstance:
    """Random tripartite graph with parts as equal as possible.

    With ``max_degree`` set, candidate edges are visited in random order and
    kept only while both endpoints stay under the cap.
    """
    rng = np.random.default_rng(seed)
    nx_, ny_ = -(-n // 3), -(-(n - -(-n // 3)) // 2)
    nz_ = n - nx_ - ny_
    part = [0] * nx_ + [1] * ny_ + [2] * nz_
    cand = [(u, v) for u in range(n) for v in range(u + 1, n) if part[u] != part[v]]
    keep = rng.random(len(cand)) < p
    order = rng.permutation(len(cand))
    g = Graph(n)
    for k in order.tolist():
        if not keep[k]:
            continue
        u, v = cand[k]
        if max_degree is not None and (g.degree[u] >= max_degree or g.degree[v] >= max_degree):
            continue
        g.insert_edge(u, v)
    return TripartiteInstance(nx_, ny_, nz_, g)


def k4_lattice(side: int) -> Graph:
    """King's graph on a ``side x side`` grid: every unit square spans a K4."""
    g = Graph(side * side)
    for r in range(side):
        for c in range(side):
            v = r * side + c
            for dr, dc in ((0, 1), (1, -1), (1, 0), (1, 1)):
                rr, cc = r + dr, c + dc
                if 0 <= rr < side and 0 <= cc < side:
                    g.insert_edge(v, rr * side + cc)
    return g


def gen_instance(kind: str, seed=0, n: int = 0, p: float = 0.5, d: int = 3,
                 max_degree: Optional[int] = None) -> Union[Graph, TripartiteInstance]:
    if kind == "gnp":
        return gnp(n, p, seed)
    if kind == "regular":
        return random_regular(n, d, seed)
    if kind == "tripartite":
        return tripartite(n, p, seed, max_degree)
    if kind == "k4-lattice":
        return k4_lattice(max(1, math.isqrt(n)))
    raise ValueError(f"unknown instance kind {kind!r}; choose from {', '.join(KINDS)}")


@dataclass
class Op:
    op: str
    u: int
    v: int

    def to_json(self) -> str:
        return json.dumps({"op": self.op, "u": self.u, "v": self.v})


@dataclass
class Trace:
    ops: list[Op] = field(default_factory=list)
    mode: str = "oblivious"
    seed: int = 0

    def __len__(self) -> int:
        return len(self.ops)

    def validate(self, g: Graph) -> None:
        """Replay on a copy; raises :class:`GraphError` on a bad deletion or insertion."""
        h = g.copy()
        for i, o in enumerate(self.ops):
            try:
                if o.op == "del":
                    h.delete_edge(o.u, o.v)
                elif o.op == "ins":
                    h.insert_edge(o.u, o.v)
                else:
                    raise GraphError(f"unknown op {o.op!r}")
            except GraphError as exc:
                raise GraphError(f"trace op {i}: {exc}") from exc

    def is_decremental(self) -> bool:
        return all(o.op == "del" for o in self.ops)

    def dump(self, path: Union[str, Path]) -> None:
        Path(path).write_text("".join(o.to_json() + "\n" for o in self.ops))

    @classmethod
    def load(cls, path: Union[str, Path], mode: str = "oblivious", seed: int = 0) -> Trace:
        ops = []
        for line in Path(path).read_text().splitlines():
            if line.strip():
                rec = json.loads(line)
                ops.append(Op(rec["op"], int(rec["u"]), int(rec["v"])))
        return cls(ops, mode, seed)


def gen_trace(g: Graph, mode: str = "oblivious", seed=0, steps: Optional[int] = None,
              p_insert: float = 0.5) -> Trace:
    """``oblivious``: every edge deleted once in random order.

    ``random``: ``steps`` fully dynamic updates, each an insertion of a random
    non-edge with probability ``p_insert`` and a deletion of a random edge
    otherwise.
    """
    rng = np.random.default_rng(seed)
    if mode == "oblivious":
        es = list(g.edges())
        return Trace([Op("del", *es[k]) for k in rng.permutation(len(es)).tolist()], mode, seed)
    if mode != "random":
        raise ValueError(f"unknown trace mode {mode!r}")
    if g.n < 2:
        return Trace([], mode, seed)
    listed = list(g.edges())
    present: set[Edge] = set(listed)
    full = g.n * (g.n - 1) // 2
    ops = []
    for _ in range(steps if steps is not None else 10 * g.n):
        ins = listed == [] or (len(present) < full and rng.random() < p_insert)
        if ins:
            while True:
                u, v = sorted(rng.choice(g.n, size=2, replace=False).tolist())
                if (u, v) not in present:
                    break
            present.add((u, v))
            listed.append((u, v))
            ops.append(Op("ins", u, v))
        else:
            k = int(rng.integers(len(listed)))
            listed[k], listed[-1] = listed[-1], listed[k]
            u, v = listed.pop()
            present.discard((u, v))
            ops.append(Op("del", u, v))
    return Trace(ops, mode, seed)
