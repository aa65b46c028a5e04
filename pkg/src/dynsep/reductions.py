"""Fine-grained reductions run as executable adaptive adversaries.

Each solver answers a static question (triangle detection, all-edges
triangle detection, OuMv) only by feeding updates to a dynamic data structure
and reading its output back.  The number of updates it is forced to make is
reported alongside the answer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .bmm import BoolMatrix
from .clique import Mccc
from .decr_triangle import IncrementalTriangle
from .graph import Edge, Graph, edge, iter_bits
from .mis import DynamicMis


class ReductionInvariantError(AssertionError):
    """A structural invariant of a reduction broke; always an implementation bug."""


@dataclass
class TripartiteInstance:
    """Graph on parts ``X = [0, nx)``, ``Y = [nx, nx+ny)``, ``Z = [nx+ny, n)`` with no intra-part edges."""

    nx: int
    ny: int
    nz: int
    g: Graph

    def __post_init__(self) -> None:
        if self.g.n != self.nx + self.ny + self.nz:
            raise ValueError("part sizes do not add up to the vertex count")
        for u, v in self.g.edges():
            if self.part(u) == self.part(v):
                raise ValueError(f"intra-part edge ({u}, {v})")

    @property
    def X(self) -> range:
        return range(0, self.nx)

    @property
    def Y(self) -> range:
        return range(self.nx, self.nx + self.ny)

    @property
    def Z(self) -> range:
        return range(self.nx + self.ny, self.g.n)

    def part(self, v: int) -> int:
        return 0 if v < self.nx else 1 if v < self.nx + self.ny else 2

    def xz_edges(self) -> list[Edge]:
        return [(u, v) for u, v in self.g.edges() if self.part(u) == 0 and self.part(v) == 2]


@dataclass
class AetdResult:
    answers: dict[Edge, bool]
    deletions: int
    reports: list[tuple[int, int, int]] = field(default_factory=list)
    rebuilds: int = 0


def solve_aetd_via_mccc(inst: TripartiteInstance, seed=0) -> AetdResult:
    """All-edges triangle detection by deleting edges out of per-component cliques.

    Repeatedly takes the component of the smallest non-isolated vertex.  Its
    clique is either a triangle (answer YES for its X-Z edge, delete that
    edge) or an edge in no triangle (delete it).  The clique structure runs
    with pivot resampling since these deletions depend on its output.
    """
    mc = Mccc(inst.g, seed=seed, resample=True)
    g = mc.g
    answers = {e: False for e in inst.xz_edges()}
    res = AetdResult(answers, 0)
    ptr = 0
    while g.m:
        while g.degree[ptr] == 0:
            ptr += 1
        k = sorted(mc.clique_of(ptr), key=inst.part)
        if len(k) == 3:
            x, _, z = k
            if inst.part(x) != 0 or inst.part(z) != 2:
                raise ReductionInvariantError(f"clique {k} is not an X-Y-Z triangle")
            answers[(x, z)] = True
            res.reports.append(tuple(sorted(k)))
            target = (x, z)
        elif len(k) == 2:
            target = edge(*k)
        else:
            raise ReductionInvariantError(f"clique {k} of a non-singleton tripartite component")
        mc.delete(*target)
        res.deletions += 1
    res.rebuilds = mc.rebuilds
    return res


class NaiveMaximalClique:
    """Fully dynamic maximal clique recomputed greedily by id on every query."""

    def __init__(self, g: Graph) -> None:
        self.g = g.copy()

    def insert(self, u: int, v: int) -> None:
        self.g.insert_edge(u, v)

    def delete(self, u: int, v: int) -> None:
        self.g.delete_edge(u, v)

    def clique(self) -> list[int]:
        out = []
        cand = (1 << self.g.n) - 1
        while cand:
            v = (cand & -cand).bit_length() - 1
            out.append(v)
            cand &= self.g.rows[v]
        return out


@dataclass
class TriangleReductionResult:
    answer: bool
    updates: int
    triangle: Optional[tuple[int, int, int]] = None
    marks: int = 0
    steps: int = 0


def solve_triangle_via_fd_clique(g: Graph) -> TriangleReductionResult:
    """Triangle detection through a fully dynamic maximal clique and vertex marking.

    Marked vertices are made adjacent to everything so they sit in every
    maximal clique and can be ignored.  Among the unmarked part of the
    clique: three or more vertices form a triangle, two vertices are an
    edge in no triangle (delete it), one vertex lies in no triangle (mark it).
    """
    fd = NaiveMaximalClique(g)
    res = TriangleReductionResult(False, 0)
    marked = 0
    full = (1 << g.n) - 1
    while marked != full:
        res.steps += 1
        rest = [v for v in fd.clique() if not (marked >> v) & 1]
        if len(rest) >= 3:
            res.answer = True
            res.triangle = tuple(rest[:3])
            return res
        if len(rest) == 2:
            fd.delete(*rest)
            res.updates += 1
        elif len(rest) == 1:
            v = rest[0]
            for w in iter_bits(full & ~fd.g.rows[v] & ~(1 << v)):
                fd.insert(v, w)
                res.updates += 1
            marked |= 1 << v
            res.marks += 1
        else:
            raise ReductionInvariantError("clique contains only marked vertices")
    return res


def _check_incmis_invariants(gp: Graph, n: int, marked: int) -> None:
    low = (1 << n) - 1
    for u in range(n):
        is_marked = (marked >> u) & 1
        cross1 = gp.rows[u] >> n
        cross2 = gp.rows[u + n] & low
        want = marked if is_marked else 0
        if cross1 != want or cross2 != want:
            raise ReductionInvariantError(f"(I) cross edges of {u} are not the marked bi-clique")
        if is_marked:
            others = low & ~(1 << u)
            if (gp.rows[u] & low) != others or ((gp.rows[u + n] >> n) & low) != others:
                raise ReductionInvariantError(f"(II) marked {u} is not adjacent to its whole copy")


def solve_triangle_via_incr_mis(g: Graph, check: bool = True, mis_cls=DynamicMis) -> TriangleReductionResult:
    """Triangle detection through an incremental MIS on two copies of the complement.

    Copy ``i`` lives on ids ``i * n + u``.  The MIS part ``K`` of a copy free
    of marked vertices decides the step: one vertex gets marked and joined to
    all marked vertices of the other copy, two vertices are an edge in no
    triangle whose complement edge is inserted in both copies, three or more
    are a triangle.  The answer is NO once the copies are complete.
    """
    n = g.n
    gp = Graph(2 * n)
    for u in range(n):
        for v in iter_bits(((1 << n) - 1) & ~g.rows[u] & ~((1 << (u + 1)) - 1)):
            gp.insert_edge(u, v)
            gp.insert_edge(u + n, v + n)
    mis = mis_cls(gp, copy=False)
    complete = n * (n - 1) // 2
    intra = gp.m // 2
    marked = 0
    res = TriangleReductionResult(False, 0)
    while intra < complete:
        res.steps += 1
        s = [v for v in range(2 * n) if mis.contains(v)]
        k1 = [v for v in s if v < n]
        k2 = [v - n for v in s if v >= n]
        if not any((marked >> v) & 1 for v in k1):
            k = k1
        elif not any((marked >> v) & 1 for v in k2):
            k = k2
        else:
            raise ReductionInvariantError("both copies hold a marked MIS vertex")
        if len(k) >= 3:
            res.answer = True
            res.triangle = tuple(k[:3])
            return res
        if len(k) == 2:
            u, v = k
            if check and not (g.has_edge(u, v) and g.rows[u] & g.rows[v] == 0):
                raise ReductionInvariantError(f"(III) inserting ({u}, {v}) which is not a triangle-free G-edge")
            mis.insert(u, v)
            mis.insert(u + n, v + n)
            res.updates += 2
            intra += 1
        elif len(k) == 1:
            v = k[0]
            marked |= 1 << v
            res.marks += 1
            for u in iter_bits(marked):
                mis.insert(v, u + n)
                res.updates += 1
                if u != v:
                    mis.insert(u, v + n)
                    res.updates += 1
        else:
            raise ReductionInvariantError("empty MIS part in an incomplete copy")
        if check:
            _check_incmis_invariants(gp, n, marked)
    return res


@dataclass
class OumvResult:
    answers: list[bool]
    groups: int
    resets: int = 0
    resets_triangle: int = 0
    resets_exhausted: int = 0
    insertions: int = 0


def cube_root_ceil(n: int) -> int:
    g = max(1, round(n ** (1 / 3)))
    while g ** 3 < n:
        g += 1
    while g > 1 and (g - 1) ** 3 >= n:
        g -= 1
    return g


class _OumvCell:
    """One incremental triangle instance on parts ``X_i``, ``Y_j`` and fresh ``Z_{i,j}``."""

    def __init__(self, xs: range, ys: range, zsize: int, dense) -> None:
        self.xs, self.ys, self.zsize = xs, ys, zsize
        self.dense = dense
        self.build()

    def build(self) -> int:
        nx, ny = len(self.xs), len(self.ys)
        self.inst = IncrementalTriangle(nx + ny + self.zsize)
        self.next_z = 0
        count = 0
        for a, x in enumerate(self.xs):
            for b, y in enumerate(self.ys):
                if self.dense[x][y]:
                    self.inst.insert(a, nx + b)
                    count += 1
        return count

    def attach(self, xq: list[int], yq: list[int]) -> tuple[bool, int]:
        """Join a fresh isolated Z node to the query rows and columns of this cell."""
        nx, ny = len(self.xs), len(self.ys)
        z = nx + ny + self.next_z
        self.next_z += 1
        count = 0
        for x in xq:
            self.inst.insert(z, x - self.xs.start)
            count += 1
        for y in yq:
            self.inst.insert(z, nx + y - self.ys.start)
            count += 1
        return self.inst.found, count


def oumv_via_incr_triangle(m: BoolMatrix, queries: Sequence[tuple[Sequence[int], Sequence[int]]]) -> OumvResult:
    """Answer OuMv queries with ``g**2`` incremental triangle instances, ``g = ceil(n**(1/3))``."""
    n = max(m.rows, m.cols, 1)
    dense = m.to_dense().tolist()
    groups = cube_root_ceil(n)
    xsize = -(-m.rows // groups) if m.rows else 0
    ysize = -(-m.cols // groups) if m.cols else 0
    zsize = -(-2 * n // groups)
    xparts = [range(min(i * xsize, m.rows), min((i + 1) * xsize, m.rows)) for i in range(groups)]
    yparts = [range(min(j * ysize, m.cols), min((j + 1) * ysize, m.cols)) for j in range(groups)]
    cells = {(i, j): _OumvCell(xparts[i], yparts[j], zsize, dense)
             for i in range(groups) for j in range(groups)}
    res = OumvResult([], groups)
    exhausted_per_cell = {key: 0 for key in cells}
    for xq, yq in queries:
        xset, yset = set(xq), set(yq)
        answer = False
        triangles = 0
        for key, cell in cells.items():
            xs = sorted(x for x in cell.xs if x in xset)
            ys = sorted(y for y in cell.ys if y in yset)
            if not xs and not ys:
                continue
            found, count = cell.attach(xs, ys)
            res.insertions += count
            if found:
                answer = True
                triangles += 1
                break
        if triangles > 1:
            raise ReductionInvariantError("one query closed more than one triangle")
        res.answers.append(answer)
        for key, cell in cells.items():
            if cell.inst.found:
                res.resets_triangle += 1
            elif cell.next_z >= cell.zsize:
                res.resets_exhausted += 1
                exhausted_per_cell[key] += 1
                if exhausted_per_cell[key] > groups:
                    raise ReductionInvariantError(f"cell {key} exhausted more than g times")
            else:
                continue
            res.resets += 1
            res.insertions += cell.build()
    return res
