"""Command-line entry point ``dynsep``."""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import oracles
from .bmm import BoolMatrix
from .generators import KINDS, gen_instance, gen_trace
from .graph import Graph, read_edge_list, write_edge_list
from .harness import (ConfigError, InstanceSpec, RunConfig, rows_to_csv, run_experiment, run_single,
                      worker_count)
from .reductions import (TripartiteInstance, oumv_via_incr_triangle, solve_aetd_via_mccc,
                         solve_triangle_via_fd_clique, solve_triangle_via_incr_mis)
from .triangles import balance_violations, balanced_triangle_set, realized_alpha, triangle_stats, uncovered_edges


def parse_spec(text: str) -> dict:
    """``"gnp:n=64,p=0.3"`` becomes ``{"kind": "gnp", "n": 64, "p": 0.3}``."""
    kind, _, rest = text.partition(":")
    out: dict = {"kind": kind}
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise ConfigError(f"bad spec item {item!r}; expected key=value")
        out[key.strip().replace("-", "_")] = float(val) if "." in val else int(val)
    return out


def instance_spec(text: str) -> InstanceSpec:
    if Path(text).exists():
        return InstanceSpec(path=text)
    fields = parse_spec(text)
    if fields["kind"] not in KINDS:
        raise ConfigError(f"{text!r} is neither a file nor an instance spec ({', '.join(KINDS)})")
    return InstanceSpec(**fields)


def emit(text: str, dest: Optional[str]) -> None:
    if dest:
        Path(dest).write_text(text)
    else:
        sys.stdout.write(text)


def write_rows(rows: list[dict], dest: Optional[str], cols: Optional[list[str]] = None) -> None:
    emit(rows_to_csv(rows, cols or list(rows[0])), dest)


def cmd_gen(a) -> int:
    fields = parse_spec(a.spec)
    kind = fields.pop("kind")
    inst = gen_instance(kind, a.seed, **fields)
    g = inst.g if isinstance(inst, TripartiteInstance) else inst
    write_edge_list(g, a.out)
    if a.trace_out:
        gen_trace(g, a.trace, a.seed, steps=a.steps).dump(a.trace_out)
    print(f"wrote {a.out}: n={g.n} m={g.m} max_degree={g.max_degree()}", file=sys.stderr)
    return 0


def cmd_stats(a) -> int:
    """Per-edge tau and value as CSV; totals and balanced-set figures on stderr."""
    g = instance_spec(a.instance).build(a.seed)
    stats = triangle_stats(g)
    write_rows([{"u": int(u), "v": int(v), "tau": int(t), "value": f"{x:.9g}"}
                for (u, v), t, x in zip(stats.edges, stats.tau, stats.v_edge)],
               a.csv, ["u", "v", "tau", "value"])
    tset = balanced_triangle_set(g, a.seed)
    print(f"n={g.n} m={g.m} max_degree={g.max_degree()} triangles={len(stats.triangles)} "
          f"participating={stats.participating} total_value={stats.total_edge_value:.9g} "
          f"balanced_set={len(tset)} uncovered={len(uncovered_edges(tset, stats))} "
          f"violations={len(balance_violations(tset, stats))} "
          f"alpha={realized_alpha(tset, stats.values()):.6g}", file=sys.stderr)
    return 0


def cmd_run(a) -> int:
    cfg = RunConfig(
        algo=a.command, instance=instance_spec(a.instance), trace=a.trace, steps=a.steps,
        seed=a.seed, reps=a.reps, verify=a.verify, oracle_guard=a.oracle_guard,
        gamma=getattr(a, "gamma", None), resample=getattr(a, "resample", False),
        pivot=getattr(a, "pivot", None), record_stages=bool(getattr(a, "stages_csv", None)),
    )
    report = run_experiment(cfg)
    emit(report.to_csv(), a.csv)
    if cfg.record_stages:
        Path(a.stages_csv).write_text(report.stages_csv())
    print(report.summary(), file=sys.stderr)
    return 0 if report.ok else 1


def _tripartite(a) -> TripartiteInstance:
    if Path(a.input).exists():
        if not a.parts:
            raise ConfigError("an edge-list input needs --parts NX,NY,NZ")
        nx_, ny_, nz_ = (int(x) for x in a.parts.split(","))
        return TripartiteInstance(nx_, ny_, nz_, read_edge_list(a.input))
    fields = parse_spec(a.input)
    fields.pop("kind")
    return gen_instance("tripartite", a.seed, **fields)


def _matrix(a) -> np.ndarray:
    if Path(a.input).exists():
        return np.array([[int(c) for c in line.split()] for line in Path(a.input).read_text().splitlines()
                         if line.strip()], dtype=np.uint8)
    fields = parse_spec(a.input)
    n = int(fields.get("n", 16))
    return (np.random.default_rng(a.seed).random((n, n)) < fields.get("p", 0.05)).astype(np.uint8)


def cmd_reduce(a) -> int:
    verify = a.verify == "auto"
    t0 = time.perf_counter_ns()
    if a.kind == "aetd":
        inst = _tripartite(a)
        res = solve_aetd_via_mccc(inst, a.seed)
        dt = time.perf_counter_ns() - t0
        n = inst.g.n
        truth = oracles.oracle_aetd(inst, guard=None) if verify and n <= a.oracle_guard else None
        row = {"reduction": "aetd", "n": n, "m": inst.g.m, "max_degree": inst.g.max_degree(),
               "queried_edges": len(res.answers), "yes": sum(res.answers.values()),
               "answer_bits": "".join("1" if res.answers[e] else "0" for e in sorted(res.answers)),
               "forced_updates": res.deletions, "resets": res.rebuilds}
        ok = None if truth is None else truth == res.answers
    elif a.kind in ("tri-fdmc", "tri-incmis"):
        g = _graph(a)
        res = (solve_triangle_via_fd_clique if a.kind == "tri-fdmc" else solve_triangle_via_incr_mis)(g)
        dt = time.perf_counter_ns() - t0
        truth = oracles.oracle_triangle(g, guard=None) if verify and g.n <= a.oracle_guard else None
        row = {"reduction": a.kind, "n": g.n, "m": g.m, "max_degree": g.max_degree(),
               "answer": int(res.answer), "forced_updates": res.updates, "marks": res.marks,
               "steps": res.steps, "resets": 0}
        ok = None if truth is None else truth == res.answer
    else:
        dense = _matrix(a)
        n = max(dense.shape)
        rng = np.random.default_rng([a.seed, 2])
        count = a.queries if a.queries is not None else n
        queries = [(set(np.flatnonzero(rng.random(dense.shape[0]) < a.density).tolist()),
                    set(np.flatnonzero(rng.random(dense.shape[1]) < a.density).tolist()))
                   for _ in range(count)]
        res = oumv_via_incr_triangle(BoolMatrix.from_dense(dense), queries)
        dt = time.perf_counter_ns() - t0
        truth = oracles.oracle_oumv(dense.tolist(), queries) if verify else None
        row = {"reduction": "oumv", "n": n, "queries": count, "groups": res.groups,
               "answer_bits": "".join(str(int(x)) for x in res.answers),
               "forced_updates": res.insertions, "resets": res.resets,
               "resets_triangle": res.resets_triangle, "resets_exhausted": res.resets_exhausted}
        ok = None if truth is None else truth == res.answers
    row.update({"seed": a.seed, "verified": int(ok is not None), "ok": "" if ok is None else int(ok),
                "time_ns": dt})
    write_rows([row], a.csv)
    return 0 if ok is not False else 1


def _graph(a) -> Graph:
    spec = instance_spec(a.input)
    return spec.build(a.seed)


def _bench_one(cfg: RunConfig, seed: int) -> dict:
    t0 = time.perf_counter_ns()
    rep = run_single(cfg, seed)
    dt = time.perf_counter_ns() - t0
    last = rep.rows[-1] if rep.rows else {}
    return {"algo": cfg.algo, "seed": seed, "updates": rep.updates, "work": last.get("work", 0),
            "recourse": last.get("recourse", 0), "stages": last.get("stage", 0) + 1,
            "rebuilds": last.get("rebuilds", 0), "declared_failures": rep.declared_failures,
            "mismatches": rep.mismatches, "update_ns": sum(r["time_ns"] for r in rep.rows[1:]),
            "total_ns": dt}


def cmd_bench(a) -> int:
    cfg = RunConfig(algo=a.algo, instance=instance_spec(a.instance), trace=a.trace, steps=a.steps,
                    seed=a.seed, reps=a.reps, verify=a.verify, oracle_guard=a.oracle_guard)
    cfg.validate()
    seeds = [a.seed + r for r in range(a.reps)]
    workers = min(worker_count(), len(seeds))
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            rows = list(ex.map(_bench_one, [cfg] * len(seeds), seeds))
    else:
        rows = [_bench_one(cfg, s) for s in seeds]
    write_rows(rows, a.csv)
    return 0 if all(r["mismatches"] == 0 for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--csv", help="write results here instead of stdout")
    common.add_argument("--verify", choices=("auto", "off"), default="auto",
                        help="check every output against brute force when n is within the guard")
    common.add_argument("--oracle-guard", type=int, default=oracles.DEFAULT_GUARD, metavar="N")

    p = argparse.ArgumentParser(prog="dynsep", description="Dynamic graph structures and reductions.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate an instance (and optionally a trace)")
    g.add_argument("spec", help="e.g. gnp:n=64,p=0.3  regular:n=64,d=8  tripartite:n=30,p=0.4,max_degree=5")
    g.add_argument("--out", required=True)
    g.add_argument("--trace", default="oblivious", choices=("oblivious", "random"))
    g.add_argument("--trace-out")
    g.add_argument("--steps", type=int)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("stats", parents=[common], help="triangle values and balanced-set statistics")
    s.add_argument("instance")
    s.set_defaults(func=cmd_stats)

    for name, text in (("mis", "fully dynamic maximal independent set"),
                       ("decr-triangle", "decremental triangle detection"),
                       ("clique-pivot", "maximal clique of the pivot's component"),
                       ("clique3", "clique of size >= 3 or maximal"),
                       ("mccc", "maximal clique in every component")):
        r = sub.add_parser(name, parents=[common], help=text)
        r.add_argument("instance", help="edge-list file or generator spec")
        r.add_argument("--trace", "--adversary", dest="trace", default="random" if name == "mis" else "oblivious",
                       help="oblivious | random | kill-active | kill-output-vertex | trace file")
        r.add_argument("--steps", type=int)
        r.add_argument("--reps", type=int, default=1)
        if name == "mccc":
            r.add_argument("--gamma", type=int)
            r.add_argument("--resample", action="store_true")
        if name == "clique-pivot":
            r.add_argument("--pivot", type=int)
        if name == "decr-triangle":
            r.add_argument("--stages-csv", help="also write one row per stage here")
        r.set_defaults(func=cmd_run)

    red = sub.add_parser("reduce", parents=[common], help="solve a static problem through a dynamic structure")
    red.add_argument("kind", choices=("aetd", "tri-fdmc", "tri-incmis", "oumv"))
    red.add_argument("input", help="edge-list / 0-1 matrix file or generator spec")
    red.add_argument("--parts", help="NX,NY,NZ for an edge-list AETD input")
    red.add_argument("--queries", type=int)
    red.add_argument("--density", type=float, default=0.3, help="OuMv query set density")
    red.set_defaults(func=cmd_reduce)

    b = sub.add_parser("bench", parents=[common], help="one summary row per seed")
    b.add_argument("algo")
    b.add_argument("instance")
    b.add_argument("--trace", default="oblivious")
    b.add_argument("--steps", type=int)
    b.add_argument("--reps", type=int, default=4)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"dynsep: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
