"""Config-driven command line frontend.

Subcommands:

    qwalk simulate <config.json> [--out-dir D] [--plot SNAPSHOT_INDEX]
    qwalk benchmark --n N --iters K [--engine serial|parallel] [--threads T]
    qwalk graph <family> <params...> [--arcs] | qwalk graph <file> [--arcs]

Exit codes: 0 success, 1 config parse/validation error (the message names the
offending key), 2 runtime numeric failure, 3 I/O failure while writing
outputs.  The QWALK_THREADS environment variable supplies the default thread
count for the parallel engine.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import coined as coined_mod
from . import ctqw as ctqw_mod
from .backend import (
    init_engine,
    matrix_new,
    matrix_set,
    matvec_mul,
    move_to_device,
    stop_engine,
    vector_new,
    vector_scale,
    vector_set,
)
from .errors import (
    ConfigError,
    MarkedVertexOutOfRange,
    QuantumWalkError,
    UnsupportedGraphForPersistentShift,
)
from .graph_io import load_graph_file
from .graphs import Graph, arc_basis, arc_index, cycle, degree, grid, hypercube, line
from .plotting import distribution_svg, write_svg
from .state import SimRange, VertexBasis, WalkState

_MODELS = ("ctqw", "coined")
_ENGINES = ("serial", "parallel")
_SINK_TYPES = ("json", "csv", "svg", "frames")

_COMMON_KEYS = {
    "schema", "model", "graph", "marked", "initial_state", "range",
    "engine", "threads", "tolerance", "outputs",
}
_MODEL_KEYS = {
    "ctqw": _COMMON_KEYS | {"gamma", "delta_t"},
    "coined": _COMMON_KEYS | {"shift", "coin", "marked_policy"},
}
_FAMILY_KEYS = {
    "cycle": {"n"},
    "line": {"n"},
    "grid": {"nx", "ny", "periodic"},
    "hypercube": {"dim"},
}
_SINK_KEYS = {
    "json": {"type", "path"},
    "csv": {"type", "path"},
    "svg": {"type", "path", "snapshot", "width", "height", "title"},
    "frames": {"type", "dir"},
}


@dataclass
class DistributionRecord:
    k: int
    t: float
    p: np.ndarray


@dataclass
class RunPlan:
    model: str
    graph: Graph
    graph_desc: dict
    spec: object
    psi0: WalkState
    sim_range: SimRange
    engine: str
    threads: int | None
    tolerance: float
    outputs: list[dict]
    out_dir: Path


# --------------------------------------------------------------------------
# config validation
# --------------------------------------------------------------------------

def _require_number(cfg: dict, key: str, *, positive=False) -> float:
    if key not in cfg:
        raise ConfigError(key, "required key is missing")
    val = cfg[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(key, f"expected a number, got {val!r}")
    if positive and not val > 0:
        raise ConfigError(key, f"must be positive, got {val}")
    return float(val)


def _positive_int(key: str, val) -> int:
    if isinstance(val, bool) or not isinstance(val, int) or val < 1:
        raise ConfigError(key, f"expected a positive integer, got {val!r}")
    return val


def _build_graph(gcfg) -> tuple[Graph, dict]:
    if not isinstance(gcfg, dict):
        raise ConfigError("graph", "expected an object")
    if ("family" in gcfg) == ("file" in gcfg):
        raise ConfigError("graph", 'exactly one of "family" or "file" is required')

    if "family" in gcfg:
        family = gcfg["family"]
        if family not in _FAMILY_KEYS:
            raise ConfigError("graph.family", f"unknown family {family!r}")
        allowed = _FAMILY_KEYS[family] | {"family"}
        for key in gcfg:
            if key not in allowed:
                raise ConfigError(f"graph.{key}", "unknown key")
        try:
            if family == "cycle":
                g = cycle(_positive_int("graph.n", gcfg.get("n")))
                desc = {"family": "cycle", "n": g.n}
            elif family == "line":
                g = line(_positive_int("graph.n", gcfg.get("n")))
                desc = {"family": "line", "n": g.n}
            elif family == "grid":
                nx = _positive_int("graph.nx", gcfg.get("nx"))
                ny = _positive_int("graph.ny", gcfg.get("ny"))
                periodic = gcfg.get("periodic", True)
                if not isinstance(periodic, bool):
                    raise ConfigError("graph.periodic", "expected true or false")
                g = grid(nx, ny, periodic)
                desc = {"family": "grid", "nx": nx, "ny": ny, "periodic": periodic}
            else:
                g = hypercube(_positive_int("graph.dim", gcfg.get("dim")))
                desc = {"family": "hypercube", "dim": gcfg["dim"]}
        except QuantumWalkError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError("graph", str(exc)) from exc
        return g, desc

    for key in gcfg:
        if key not in {"file", "format"}:
            raise ConfigError(f"graph.{key}", "unknown key")
    path = gcfg["file"]
    fmt = gcfg.get("format")
    try:
        g = load_graph_file(path, fmt)
    except ConfigError:
        raise
    except OSError as exc:
        raise ConfigError("graph.file", f"cannot read {path}: {exc}") from exc
    except QuantumWalkError as exc:
        raise ConfigError("graph.file", f"invalid graph in {path}: {exc}") from exc
    desc = {"file": str(path)}
    if fmt:
        desc["format"] = fmt
    return g, desc


def _parse_label(label) -> tuple:
    if not isinstance(label, str) or ":" not in label:
        raise ConfigError("initial_state", f"malformed basis label {label!r}")
    prefix, _, rest = label.partition(":")
    try:
        if prefix == "v":
            return ("v", int(rest))
        if prefix == "a":
            v, w = rest.split(",")
            return ("a", int(v), int(w))
    except ValueError:
        pass
    raise ConfigError("initial_state", f"malformed basis label {label!r}")


def _assemble_state(terms, model: str, graph: Graph) -> WalkState:
    if not isinstance(terms, list) or not terms:
        raise ConfigError("initial_state", "expected a non-empty list of [label, re, im] terms")
    if model == "ctqw":
        basis = VertexBasis(graph.n)
        amp = np.zeros(graph.n, dtype=np.complex128)
    else:
        basis = arc_basis(graph)
        amp = np.zeros(basis.size, dtype=np.complex128)
    for term in terms:
        if not (isinstance(term, list) and len(term) == 3):
            raise ConfigError("initial_state", f"malformed term {term!r}")
        label, re, im = term
        for part in (re, im):
            if isinstance(part, bool) or not isinstance(part, (int, float)):
                raise ConfigError("initial_state", f"non-numeric amplitude in {term!r}")
        parsed = _parse_label(label)
        if model == "ctqw":
            if parsed[0] != "v":
                raise ConfigError("initial_state", "ctqw states use vertex labels 'v:<id>'")
            v = parsed[1]
            if not (0 <= v < graph.n):
                raise ConfigError("initial_state", f"vertex {v} out of range")
            amp[v] += complex(re, im)
        else:
            if parsed[0] != "a":
                raise ConfigError("initial_state", "coined states use arc labels 'a:<tail>,<head>'")
            try:
                idx = arc_index(basis, parsed[1], parsed[2])
            except QuantumWalkError as exc:
                raise ConfigError("initial_state", str(exc)) from exc
            amp[idx] += complex(re, im)
    norm = float(np.linalg.norm(amp))
    if abs(norm - 1.0) > 1e-8:
        raise ConfigError("initial_state", f"assembled state has norm {norm!r}, expected 1")
    return WalkState(basis, amp)


def _validate_outputs(sinks, snapshot_count: int) -> list[dict]:
    if sinks is None:
        return []
    if not isinstance(sinks, list):
        raise ConfigError("outputs", "expected a list of output sinks")
    out = []
    for i, sink in enumerate(sinks):
        where = f"outputs[{i}]"
        if not isinstance(sink, dict) or "type" not in sink:
            raise ConfigError(where, 'each sink needs a "type"')
        stype = sink["type"]
        if stype not in _SINK_TYPES:
            raise ConfigError(f"{where}.type", f"unknown sink type {stype!r}")
        for key in sink:
            if key not in _SINK_KEYS[stype]:
                raise ConfigError(f"{where}.{key}", "unknown key")
        if stype == "frames":
            if not isinstance(sink.get("dir"), str):
                raise ConfigError(f"{where}.dir", "expected a directory path")
        else:
            if not isinstance(sink.get("path"), str):
                raise ConfigError(f"{where}.path", "expected a file path")
        if stype == "svg":
            snap = sink.get("snapshot", -1)
            if isinstance(snap, bool) or not isinstance(snap, int):
                raise ConfigError(f"{where}.snapshot", "expected an integer index")
            if not (-snapshot_count <= snap < snapshot_count):
                raise ConfigError(
                    f"{where}.snapshot",
                    f"index {snap} out of range for {snapshot_count} snapshots",
                )
        out.append(dict(sink))
    return out


def _validate_config(cfg, out_dir: str | None, plot_index: int | None) -> RunPlan:
    if not isinstance(cfg, dict):
        raise ConfigError("config", "top level must be an object")
    if cfg.get("schema", 1) != 1:
        raise ConfigError("schema", f"unsupported schema version {cfg.get('schema')!r}")
    model = cfg.get("model")
    if model not in _MODELS:
        raise ConfigError("model", f"expected one of {_MODELS}, got {model!r}")
    for key in cfg:
        if key not in _MODEL_KEYS[model]:
            raise ConfigError(key, f"unknown key for model {model!r}")
    if "graph" not in cfg:
        raise ConfigError("graph", "required key is missing")
    graph, graph_desc = _build_graph(cfg["graph"])

    marked = cfg.get("marked", [])
    if not isinstance(marked, list) or any(
        isinstance(v, bool) or not isinstance(v, int) for v in marked
    ):
        raise ConfigError("marked", "expected a list of vertex ids")
    for v in marked:
        if not (0 <= v < graph.n):
            raise ConfigError("marked", f"vertex {v} out of range")

    tolerance = cfg.get("tolerance", ctqw_mod.DEFAULT_TOLERANCE)
    if isinstance(tolerance, bool) or not isinstance(tolerance, (int, float)) or not tolerance > 0:
        raise ConfigError("tolerance", f"expected a positive number, got {tolerance!r}")

    if model == "ctqw":
        gamma = _require_number(cfg, "gamma", positive=True)
        delta_t = _require_number(cfg, "delta_t", positive=True)
        try:
            spec = ctqw_mod.CtqwSpec(graph, gamma, delta_t, frozenset(marked))
        except (QuantumWalkError, ValueError) as exc:
            raise ConfigError("marked", str(exc)) from exc
    else:
        shift = cfg.get("shift", "flipflop")
        coin = cfg.get("coin", "grover")
        policy = cfg.get("marked_policy", "minus_identity" if marked else "none")
        try:
            spec = coined_mod.CoinedSpec(graph, shift, coin, frozenset(marked), policy)
        except UnsupportedGraphForPersistentShift as exc:
            raise ConfigError("shift", str(exc)) from exc
        except MarkedVertexOutOfRange as exc:
            raise ConfigError("marked", str(exc)) from exc
        except ValueError as exc:
            # CoinedSpec messages are "key: detail"
            key, sep, rest = str(exc).partition(": ")
            raise ConfigError(key if sep else "model", rest or str(exc)) from exc

    if "range" not in cfg:
        raise ConfigError("range", "required key is missing")
    try:
        sim_range = SimRange.coerce(cfg["range"])
    except (ValueError, TypeError) as exc:
        raise ConfigError("range", str(exc)) from exc
    snapshot_count = len(sim_range.indices())

    if "initial_state" not in cfg:
        raise ConfigError("initial_state", "required key is missing")
    psi0 = _assemble_state(cfg["initial_state"], model, graph)

    engine = cfg.get("engine", "serial")
    if engine not in _ENGINES:
        raise ConfigError("engine", f"expected one of {_ENGINES}, got {engine!r}")
    threads = cfg.get("threads")
    if threads is None:
        env = os.environ.get("QWALK_THREADS")
        if env:
            try:
                threads = int(env)
            except ValueError:
                raise ConfigError("threads", f"QWALK_THREADS={env!r} is not an integer") from None
    if threads is not None:
        threads = _positive_int("threads", threads)

    outputs = _validate_outputs(cfg.get("outputs"), snapshot_count)
    if plot_index is not None:
        if not (-snapshot_count <= plot_index < snapshot_count):
            raise ConfigError(
                "--plot", f"index {plot_index} out of range for {snapshot_count} snapshots"
            )
        outputs.append(
            {"type": "svg", "path": f"snapshot_{plot_index}.svg", "snapshot": plot_index}
        )

    return RunPlan(
        model=model,
        graph=graph,
        graph_desc=graph_desc,
        spec=spec,
        psi0=psi0,
        sim_range=sim_range,
        engine=engine,
        threads=threads,
        tolerance=float(tolerance),
        outputs=outputs,
        out_dir=Path(out_dir) if out_dir else Path("."),
    )


# --------------------------------------------------------------------------
# execution and sinks
# --------------------------------------------------------------------------

def _execute(plan: RunPlan) -> list[DistributionRecord]:
    engine = init_engine(plan.engine, plan.threads)
    try:
        if plan.model == "ctqw":
            states = ctqw_mod.simulate(engine, plan.spec, plan.sim_range, plan.psi0, plan.tolerance)
            probs = ctqw_mod.probability_distribution(states)
            times = [k * plan.spec.delta_t for k in plan.sim_range.indices()]
        else:
            states = coined_mod.simulate(engine, plan.spec, plan.sim_range, plan.psi0)
            probs = coined_mod.probability_distribution(plan.graph, states)
            times = list(plan.sim_range.indices())
    finally:
        stop_engine(engine)
    return [
        DistributionRecord(k, t, p)
        for k, t, p in zip(plan.sim_range.indices(), times, probs)
    ]


def _resolve(plan: RunPlan, path: str) -> Path:
    p = Path(path)
    if not p.is_absolute():
        p = plan.out_dir / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _write_json_sink(path: Path, plan: RunPlan, records: list[DistributionRecord]) -> None:
    doc = {
        "schema": 1,
        "model": plan.model,
        "graph": plan.graph_desc,
        "snapshots": [
            {"k": r.k, "t": r.t, "p": [float(x) for x in r.p]} for r in records
        ],
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, separators=(",", ":"))
        f.write("\n")


def _write_csv_rows(f, records: list[DistributionRecord]) -> None:
    writer = csv.writer(f, lineterminator="\n")
    writer.writerow(["snapshot", "t", "vertex", "probability"])
    for r in records:
        for v, p in enumerate(r.p):
            writer.writerow([r.k, r.t, v, float(p)])


def _write_csv_sink(path: Path, records: list[DistributionRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        _write_csv_rows(f, records)


def _write_frames_sink(dir_path: Path, records: list[DistributionRecord]) -> None:
    dir_path.mkdir(parents=True, exist_ok=True)
    for r in records:
        with open(dir_path / f"frame_{r.k:05d}.csv", "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["vertex", "probability"])
            for v, p in enumerate(r.p):
                writer.writerow([v, float(p)])


def _write_svg_sink(path: Path, sink: dict, plan: RunPlan, records) -> None:
    record = records[sink.get("snapshot", -1)]
    svg = distribution_svg(
        record.p,
        plan.graph,
        width=sink.get("width", 960),
        height=sink.get("height", 540),
        title=sink.get("title", f"snapshot k={record.k}, t={record.t}"),
    )
    write_svg(path, svg)


def _write_outputs(plan: RunPlan, records: list[DistributionRecord]) -> None:
    if plan.outputs:
        plan.out_dir.mkdir(parents=True, exist_ok=True)
    for sink in plan.outputs:
        stype = sink["type"]
        if stype == "json":
            _write_json_sink(_resolve(plan, sink["path"]), plan, records)
        elif stype == "csv":
            _write_csv_sink(_resolve(plan, sink["path"]), records)
        elif stype == "frames":
            _write_frames_sink(_resolve(plan, sink["dir"]), records)
        else:
            _write_svg_sink(_resolve(plan, sink["path"]), sink, plan, records)


def cmd_simulate(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as f:
            cfg = json.load(f)
    except OSError as exc:
        print(f"config error: config: cannot read {args.config}: {exc}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"config error: config: invalid JSON: {exc}", file=sys.stderr)
        return 1
    try:
        plan = _validate_config(cfg, args.out_dir, args.plot)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    try:
        records = _execute(plan)
    except MemoryError:
        print("runtime error: out of memory", file=sys.stderr)
        return 2
    except QuantumWalkError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2

    try:
        _write_outputs(plan, records)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    return 0


# --------------------------------------------------------------------------
# benchmark
# --------------------------------------------------------------------------

def run_benchmark(engine_kind: str, n: int, iters: int, threads: int | None = None):
    """Time the uniform matvec workload: vector all 2+2i, matrix all 3+3i.

    Returns (report, result).  Setup (structure fill plus device movement) and
    the multiplication loop are timed separately.  The vector is rescaled to
    unit max-magnitude between iterations: the self-feeding product grows by a
    factor of about 4.24*n per pass and would overflow double precision within
    ~90 iterations at n=2000, which would make cross-engine comparison of the
    results meaningless.  The rescale is O(n) against the O(n^2) multiply, so
    the timing is unaffected.
    """
    engine = init_engine(engine_kind, threads)
    try:
        t0 = time.perf_counter()
        vec = vector_new(n)
        for i in range(n):
            vector_set(vec, i, 2.0, 2.0)
        mat = matrix_new(n, n)
        for i in range(n):
            for j in range(n):
                matrix_set(mat, i, j, 3.0, 3.0)
        v_dev = move_to_device(engine, vec)
        m_dev = move_to_device(engine, mat)
        setup_seconds = time.perf_counter() - t0

        t1 = time.perf_counter()
        res = matvec_mul(engine, v_dev, m_dev)
        for _ in range(iters - 1):
            scale = 1.0 / float(np.abs(res.entries).max())
            res = vector_scale(engine, scale, move_to_device(engine, res))
            res = matvec_mul(engine, move_to_device(engine, res), m_dev)
        loop_seconds = time.perf_counter() - t1
    finally:
        stop_engine(engine)

    report = {
        "engine": engine_kind,
        "threads": threads if threads is not None else "auto",
        "n": n,
        "iters": iters,
        "setup_seconds": setup_seconds,
        "loop_seconds": loop_seconds,
    }
    return report, res


def cmd_benchmark(args) -> int:
    try:
        report, _ = run_benchmark(args.engine, args.n, args.iters, args.threads)
    except MemoryError:
        print(f"runtime error: cannot allocate the n={args.n} workload", file=sys.stderr)
        return 2
    print(json.dumps(report))
    return 0


# --------------------------------------------------------------------------
# graph inspection
# --------------------------------------------------------------------------

def _graph_from_cli_spec(spec: list[str], periodic: bool, fmt: str | None) -> Graph:
    family = spec[0]
    if family in _FAMILY_KEYS:
        params = spec[1:]
        try:
            ints = [int(p) for p in params]
        except ValueError:
            raise ConfigError("graph", f"non-integer parameter in {params}") from None
        if family in ("cycle", "line"):
            if len(ints) != 1:
                raise ConfigError("graph", f"{family} takes one size parameter")
            return cycle(ints[0]) if family == "cycle" else line(ints[0])
        if family == "grid":
            if len(ints) != 2:
                raise ConfigError("graph", "grid takes two size parameters")
            return grid(ints[0], ints[1], periodic)
        if len(ints) != 1:
            raise ConfigError("graph", "hypercube takes one dimension parameter")
        return hypercube(ints[0])
    if len(spec) != 1:
        raise ConfigError("graph", f"unknown family {family!r}")
    return load_graph_file(spec[0], fmt)


def cmd_graph(args) -> int:
    try:
        g = _graph_from_cli_spec(args.spec, not args.open, args.format)
    except QuantumWalkError as exc:
        print(f"invalid graph: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"invalid graph: {exc}", file=sys.stderr)
        return 1
    print(f"{g.n} vertices, {g.num_edges} edges")
    print("degree sequence: " + " ".join(str(degree(g, v)) for v in range(g.n)))
    if args.arcs:
        basis = arc_basis(g)
        for i, (v, w) in enumerate(basis.arcs):
            print(f"{i}: ({v},{w})")
    return 0


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------

def _positive_int_arg(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwalk", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a walk described by a JSON config")
    p_sim.add_argument("config", help="path to the JSON run configuration")
    p_sim.add_argument("--out-dir", default=None, help="directory for relative output paths")
    p_sim.add_argument(
        "--plot", type=int, default=None, metavar="SNAPSHOT_INDEX",
        help="also write an SVG of the given snapshot index",
    )
    p_sim.set_defaults(func=cmd_simulate)

    p_bench = sub.add_parser("benchmark", help="time the uniform matvec workload")
    p_bench.add_argument("--n", type=_positive_int_arg, required=True, help="matrix order")
    p_bench.add_argument(
        "--iters", type=_positive_int_arg, required=True, help="number of multiplications"
    )
    p_bench.add_argument("--engine", choices=_ENGINES, default="serial")
    p_bench.add_argument("--threads", type=_positive_int_arg, default=None)
    p_bench.set_defaults(func=cmd_benchmark)

    p_graph = sub.add_parser("graph", help="describe a graph family or file")
    p_graph.add_argument("spec", nargs="+", help="family name with parameters, or a file path")
    p_graph.add_argument("--arcs", action="store_true", help="print the ordered arc list")
    p_graph.add_argument("--open", action="store_true", help="non-periodic grid boundaries")
    p_graph.add_argument("--format", choices=("mtx", "edges"), default=None)
    p_graph.set_defaults(func=cmd_graph)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
