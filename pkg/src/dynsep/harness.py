"""Experiment runner: drives one data structure through a trace and checks every output."""

from __future__ import annotations

import csv
import io
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import oracles
from .clique import CliqueFailure, Mccc, PivotClique, ThreeMaxClique
from .decr_triangle import DecrementalTriangle, stage_progress
from .generators import Op, Trace, gen_instance, gen_trace
from .graph import Edge, Graph, edge, read_edge_list
from .mis import DynamicMis
from .reductions import TripartiteInstance

ALGORITHMS = ("mis", "decr-triangle", "clique-pivot", "clique3", "mccc")
OBLIVIOUS = ("oblivious", "random")
POLICIES = ("kill-active", "kill-output-vertex")
FULLY_DYNAMIC = ("mis",)

COLUMNS = ["seed", "step", "op", "u", "v", "output", "recourse", "stage", "rebuilds",
           "work", "verified", "ok", "time_ns"]
STAGE_COLUMNS = ["seed", "stage", "edges", "triangles", "removed_edges", "removed_value", "alpha"]


class ConfigError(ValueError):
    """Unusable experiment configuration."""


@dataclass
class InstanceSpec:
    kind: str = "gnp"
    n: int = 32
    p: float = 0.5
    d: int = 3
    max_degree: Optional[int] = None
    path: Optional[str] = None

    def build(self, seed: int) -> Graph:
        if self.path is not None:
            return read_edge_list(self.path)
        inst = gen_instance(self.kind, seed, n=self.n, p=self.p, d=self.d, max_degree=self.max_degree)
        return inst.g if isinstance(inst, TripartiteInstance) else inst


@dataclass
class RunConfig:
    """One experiment.  ``trace`` is a trace mode, an adaptive policy name, or a trace file path."""

    algo: str
    instance: InstanceSpec = field(default_factory=InstanceSpec)
    trace: str = "oblivious"
    steps: Optional[int] = None
    seed: int = 0
    reps: int = 1
    verify: str = "auto"
    oracle_guard: int = oracles.DEFAULT_GUARD
    gamma: Optional[int] = None
    resample: bool = False
    pivot: Optional[int] = None
    record_stages: bool = False

    def validate(self) -> None:
        if self.algo not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algo!r}; choose from {', '.join(ALGORITHMS)}")
        if self.verify not in ("auto", "off"):
            raise ConfigError(f"--verify must be auto or off, not {self.verify!r}")
        if self.reps < 1:
            raise ConfigError("reps must be positive")
        if self.trace not in OBLIVIOUS + POLICIES and not os.path.exists(self.trace):
            raise ConfigError(f"trace {self.trace!r} is neither a mode, a policy nor a file")

    @property
    def adaptive(self) -> bool:
        return self.trace in POLICIES


@dataclass
class RunReport:
    config: RunConfig
    rows: list[dict] = field(default_factory=list)
    updates: int = 0
    mismatches: int = 0
    declared_failures: int = 0
    verified_rows: int = 0
    stages: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.mismatches == 0

    def merge(self, other: RunReport) -> None:
        self.rows.extend(other.rows)
        self.updates += other.updates
        self.mismatches += other.mismatches
        self.declared_failures += other.declared_failures
        self.verified_rows += other.verified_rows
        self.stages.extend(other.stages)

    def summary(self) -> str:
        c = self.config
        return (f"{c.algo} trace={c.trace} reps={c.reps} updates={self.updates} "
                f"verified={self.verified_rows} mismatches={self.mismatches} "
                f"declared_failures={self.declared_failures} {'OK' if self.ok else 'FAIL'}")

    def to_csv(self, timing: bool = True) -> str:
        return rows_to_csv(self.rows, COLUMNS if timing else COLUMNS[:-1])

    def stages_csv(self) -> str:
        return rows_to_csv(self.stages, STAGE_COLUMNS)


def rows_to_csv(rows: list[dict], cols: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, cols, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _fmt(out) -> str:
    if out is None:
        return "NONE"
    return " ".join(map(str, sorted(out)))


class EdgePool:
    """Edge set with O(1) random choice, insertion and removal."""

    def __init__(self, edges) -> None:
        self.items: list[Edge] = list(edges)
        self.pos = {e: i for i, e in enumerate(self.items)}

    def __len__(self) -> int:
        return len(self.items)

    def add(self, e: Edge) -> None:
        self.pos[e] = len(self.items)
        self.items.append(e)

    def remove(self, e: Edge) -> None:
        i = self.pos.pop(e)
        last = self.items.pop()
        if i < len(self.items):
            self.items[i] = last
            self.pos[last] = i

    def choice(self, rng: np.random.Generator) -> Edge:
        return self.items[int(rng.integers(len(self.items)))]


def _internal_edges(g: Graph, out) -> list[Edge]:
    vs = sorted(out)
    return [(a, b) for i, a in enumerate(vs) for b in vs[i + 1:] if g.has_edge(a, b)]


class _Runner:
    """Adapter giving every structure the same apply / output / check surface."""

    recourse = 0
    stage = 0
    rebuilds = 0
    work = 0

    def __init__(self, g: Graph, cfg: RunConfig, seed: int) -> None:
        self.g = g.copy()

    def apply(self, op: Op) -> None:
        raise NotImplementedError

    def output(self):
        raise NotImplementedError

    def check(self, shadow: oracles.ShadowGraph) -> bool:
        raise NotImplementedError

    def target(self) -> list[Edge]:
        """Edges of the current output that a killing adversary may delete."""
        return _internal_edges(self.g, self.output())


class _MisRunner(_Runner):
    def __init__(self, g, cfg, seed):
        self.mis = DynamicMis(g)
        self.g = self.mis.g

    def apply(self, op):
        if op.op == "ins":
            self.mis.insert(op.u, op.v)
        else:
            self.mis.delete(op.u, op.v)
        self.recourse = self.mis.recourse_total
        self.work = self.mis.work

    def output(self):
        return self.mis.members()

    def check(self, shadow):
        return oracles.oracle_mis_check(shadow, self.output(), guard=None)


class _TriangleRunner(_Runner):
    def __init__(self, g, cfg, seed):
        self.tri = DecrementalTriangle(g, seed, record=cfg.record_stages)
        self.g = self.tri.external
        self.free_confirmed = False

    def stage_rows(self, seed: int) -> list[dict]:
        """Per-stage ``(|E(G_i)|, |T_i|, value removed, realized alpha)``."""
        rows = []
        for rec in self.tri.stage_log:
            removed, m, alpha = stage_progress(rec) if rec.triangles_selected else (0.0, rec.edges_at_start, 0.0)
            rows.append({"seed": seed, "stage": rec.stage, "edges": m, "triangles": rec.triangles_selected,
                         "removed_edges": len(rec.removed), "removed_value": f"{removed:.9g}",
                         "alpha": f"{alpha:.6g}"})
        return rows

    def apply(self, op):
        self.tri.delete(op.u, op.v)
        self.stage = self.tri.stage

    def output(self):
        return self.tri.active

    def check(self, shadow):
        t = self.tri.active
        if t is not None:
            return oracles.is_triangle(shadow, t)
        # deletions keep a triangle-free graph triangle-free
        if not self.free_confirmed:
            self.free_confirmed = not oracles.oracle_triangle(shadow, guard=None)
        return self.free_confirmed

    def target(self):
        t = self.tri.active
        return [] if t is None else [edge(t[0], t[1]), edge(t[0], t[2]), edge(t[1], t[2])]


class _PivotRunner(_Runner):
    def __init__(self, g, cfg, seed):
        self.g = g.copy()
        self.pc = PivotClique(self.g, pivot=cfg.pivot)

    def apply(self, op):
        self.g.delete_edge(op.u, op.v)
        self.pc.delete(op.u, op.v)
        self.recourse = self.pc.mis.recourse_total
        self.work = self.pc.work + self.pc.mis.work

    def output(self):
        return self.pc.clique()

    def check(self, shadow):
        comp = next(c for c in oracles.components(shadow) if self.pc.pivot in c)
        return oracles.is_maximal_clique(shadow, self.output(), within=comp)


class _Clique3Runner(_Runner):
    ORDER = {"triangle": 0, "edge": 1, "vertex": 2}

    def __init__(self, g, cfg, seed):
        self.c3 = ThreeMaxClique(g, seed)
        self.g = self.c3.g
        self.phase = self.ORDER[self.c3.phase()]

    def apply(self, op):
        self.c3.delete(op.u, op.v)
        self.stage = self.c3.tri.stage

    def output(self):
        return self.c3.report()

    def check(self, shadow):
        phase = self.ORDER[self.c3.phase()]
        ordered = phase >= self.phase
        self.phase = phase
        k = self.output()
        if len(k) >= 3:
            good = oracles.is_clique(shadow, k)
        else:
            good = oracles.is_maximal_clique(shadow, k)
        return ordered and good


class _McccRunner(_Runner):
    def __init__(self, g, cfg, seed):
        self.mc = Mccc(g, seed=seed, gamma=cfg.gamma, resample=cfg.resample)
        self.g = self.mc.g
        self._out = self.mc.output()

    def apply(self, op):
        self._out = self.mc.delete(op.u, op.v)
        self.rebuilds = self.mc.rebuilds
        self.work = self.mc.conn.work + sum(lv.star.work for lv in self.mc.star_of.values())

    def output(self):
        return self._out

    def check(self, shadow):
        return oracles.oracle_max_clique_check(shadow, self._out, component_scoped=True, guard=None)


RUNNERS = {
    "mis": _MisRunner,
    "decr-triangle": _TriangleRunner,
    "clique-pivot": _PivotRunner,
    "clique3": _Clique3Runner,
    "mccc": _McccRunner,
}


def _adaptive_op(policy: str, runner: _Runner, pool: EdgePool, rng: np.random.Generator,
                 fully_dynamic: bool) -> Optional[Op]:
    """Next update chosen after looking at the current output."""
    g = runner.g
    if fully_dynamic:
        # insert inside the output to force an eviction, or cut a dominated vertex loose
        out = sorted(runner.output())
        if len(out) >= 2 and (g.m == 0 or rng.random() < 0.5):
            a, b = rng.choice(out, size=2, replace=False).tolist()
            if not g.has_edge(a, b):
                return Op("ins", *edge(a, b))
        x = out[int(rng.integers(len(out)))] if out else 0
        nbrs = list(g.neighbors(x))
        if nbrs:
            return Op("del", *edge(x, nbrs[int(rng.integers(len(nbrs)))]))
        if len(pool):
            return Op("del", *pool.choice(rng))
        return None
    targets = runner.target()
    if targets:
        if policy == "kill-output-vertex":
            verts = sorted({v for e in targets for v in e})
            x = verts[int(rng.integers(len(verts)))]
            targets = [e for e in targets if x in e]
        return Op("del", *targets[int(rng.integers(len(targets)))])
    if policy == "kill-active" and len(pool):
        return Op("del", *pool.choice(rng))
    return None


def _ops(cfg: RunConfig, g: Graph, seed: int):
    if cfg.trace in OBLIVIOUS:
        # for a deletions-only structure a random trace is a random full deletion order
        mode = cfg.trace if cfg.algo in FULLY_DYNAMIC else "oblivious"
        trace = gen_trace(g, mode, seed, steps=cfg.steps)
    else:
        trace = Trace.load(cfg.trace, seed=seed)
    trace.validate(g)
    if cfg.algo not in FULLY_DYNAMIC and not trace.is_decremental():
        raise ConfigError(f"{cfg.algo} only supports deletions")
    return iter(trace.ops)


def run_single(cfg: RunConfig, seed: int) -> RunReport:
    g = cfg.instance.build(seed)
    report = RunReport(cfg)
    verify = cfg.verify == "auto" and g.n <= cfg.oracle_guard
    shadow = oracles.ShadowGraph.of(g) if verify else None
    fully_dynamic = cfg.algo in FULLY_DYNAMIC
    if cfg.algo == "clique-pivot" and g.n == 0:
        raise ConfigError("clique-pivot needs at least one vertex")
    rng = np.random.default_rng([seed, 1])
    ops = None if cfg.adaptive else _ops(cfg, g, seed)
    pool = EdgePool(g.edges()) if cfg.adaptive else None
    limit = cfg.steps if cfg.steps is not None else (10 * g.n if fully_dynamic else None)

    def row(step: int, op: Optional[Op], runner: Optional[_Runner], output: str, ok: Optional[bool], dt: int):
        report.rows.append({
            "seed": seed, "step": step, "op": op.op if op else "init",
            "u": op.u if op else "", "v": op.v if op else "", "output": output,
            "recourse": runner.recourse if runner else 0, "stage": runner.stage if runner else 0,
            "rebuilds": runner.rebuilds if runner else 0, "work": runner.work if runner else 0,
            "verified": int(ok is not None), "ok": "" if ok is None else int(ok), "time_ns": dt,
        })
        if ok is not None:
            report.verified_rows += 1
            report.mismatches += not ok

    t0 = time.perf_counter_ns()
    try:
        runner = RUNNERS[cfg.algo](g, cfg, seed)
    except CliqueFailure:
        report.declared_failures += 1
        row(0, None, None, "FAIL", None, time.perf_counter_ns() - t0)
        return report
    dt = time.perf_counter_ns() - t0
    row(0, None, runner, _fmt(runner.output()), runner.check(shadow) if verify else None, dt)
    step = 0
    while limit is None or step < limit:
        if cfg.adaptive:
            op = _adaptive_op(cfg.trace, runner, pool, rng, fully_dynamic)
        else:
            op = next(ops, None)
        if op is None:
            break
        step += 1
        t0 = time.perf_counter_ns()
        try:
            runner.apply(op)
        except CliqueFailure:
            report.declared_failures += 1
            report.updates += 1
            row(step, op, runner, "FAIL", None, time.perf_counter_ns() - t0)
            break
        dt = time.perf_counter_ns() - t0
        report.updates += 1
        if pool is not None:
            e = edge(op.u, op.v)
            pool.add(e) if op.op == "ins" else pool.remove(e)
        ok = None
        if verify:
            shadow.add(op.u, op.v) if op.op == "ins" else shadow.remove(op.u, op.v)
            ok = runner.check(shadow)
        row(step, op, runner, _fmt(runner.output()), ok, dt)
    if cfg.record_stages and isinstance(runner, _TriangleRunner):
        report.stages = runner.stage_rows(seed)
    return report


def worker_count() -> int:
    """``DYNSEP_THREADS`` if set, else the CPU count."""
    cap = os.environ.get("DYNSEP_THREADS")
    return max(1, int(cap)) if cap else os.cpu_count() or 1


def run_experiment(cfg: RunConfig) -> RunReport:
    """Run ``cfg.reps`` repetitions with seeds ``seed, seed + 1, ...``; rows are ordered by seed."""
    cfg.validate()
    seeds = [cfg.seed + r for r in range(cfg.reps)]
    workers = min(worker_count(), len(seeds))
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(run_single, [cfg] * len(seeds), seeds))
    else:
        parts = [run_single(cfg, s) for s in seeds]
    report = RunReport(cfg)
    for part in parts:
        report.merge(part)
    return report


def config_echo(cfg: RunConfig) -> dict:
    return asdict(cfg)
