"""Acceptance suite.

Each test prints one [PASS]/[FAIL] line (visible with pytest -s).  Every
criterion is checked at its stated tolerance against an oracle that is
independent of the code path under test: a dense Hermitian eigendecomposition
for continuous-time evolution, dense operator powers for coined steps, and a
plain lexicographic sort for the arc ordering.
"""

import csv
import json
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from conftest import (
    dense_coined_step,
    dense_grover_coin,
    dense_hamiltonian,
    eigh_evolve,
    random_connected_graph,
    random_graph_with_arc_bound,
    sorted_arcs,
)
from qwalk import backend as B
from qwalk import cli
from qwalk import coined as CO
from qwalk import ctqw as CT
from qwalk import graphs as G
from qwalk.state import WalkState


@contextmanager
def criterion(name, budget_seconds=None):
    t0 = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - t0
        if budget_seconds is not None:
            assert elapsed < budget_seconds, (
                f"{name}: took {elapsed:.2f}s, budget {budget_seconds}s"
            )
    except Exception:
        print(f"[FAIL] {name}")
        raise
    print(f"[PASS] {name} ({elapsed:.2f}s)")


@pytest.fixture(scope="module")
def engine():
    eng = B.init_engine("serial")
    yield eng
    B.stop_engine(eng)


def test_two_vertex_closed_form(engine):
    with criterion("two-vertex closed form p1(t) = sin^2(t)", budget_seconds=1.0):
        g = G.graph_from_adjacency([[0, 1], [1, 0]])
        spec = CT.CtqwSpec(g, gamma=1.0, delta_t=1.0)
        h = CT.build_hamiltonian(spec)
        psi0 = CT.ket(spec, 0)
        for t in np.linspace(0.0, 2.0 * np.pi, 50):
            out = CT.evolve_state(engine, h, psi0, float(t))
            p1 = abs(out.amplitudes[1]) ** 2
            assert abs(p1 - math.sin(t) ** 2) <= 1e-10


def test_ctqw_oracle_suite(engine):
    with criterion("continuous-time oracle suite (200 random instances)", budget_seconds=30.0):
        rng = np.random.default_rng(2024)
        for _ in range(200):
            g = random_connected_graph(rng, max_n=32)
            gamma = float(rng.uniform(1e-3, 1.0))
            t = float(rng.uniform(1e-3, 5.0))
            spec = CT.CtqwSpec(g, gamma, 1.0)
            h = CT.build_hamiltonian(spec)
            psi0 = CT.ket(spec, int(rng.integers(0, g.n)))
            out = CT.evolve_state(engine, h, psi0, t)
            expected = eigh_evolve(dense_hamiltonian(g, gamma), psi0.amplitudes, t)
            assert np.max(np.abs(out.amplitudes - expected)) <= 1e-8


def test_cycle101_snapshot_properties(engine):
    with criterion("cycle(101) snapshot at t=50: norm, symmetry, oracle", budget_seconds=10.0):
        n, start = 101, 50
        spec = CT.CtqwSpec(G.cycle(n), gamma=0.35, delta_t=2.5)
        psi0 = CT.ket(spec, start)
        states = CT.simulate(engine, spec, 21, psi0)  # t = 0, 2.5, ..., 50
        p = CT.probability_distribution(states)[-1]

        assert abs(p.sum() - 1.0) <= 1e-10
        for k in range(1, n // 2 + 1):
            assert abs(p[(start + k) % n] - p[(start - k) % n]) <= 1e-10

        expected_amp = eigh_evolve(
            dense_hamiltonian(G.cycle(n), 0.35), psi0.amplitudes, 50.0
        )
        assert np.max(np.abs(states[-1].amplitudes - expected_amp)) <= 1e-8
        assert np.max(np.abs(p - np.abs(expected_amp) ** 2)) <= 1e-8


def test_coined_oracle_suite(engine):
    with criterion("coined oracle suite (200 random graphs)", budget_seconds=60.0):
        rng = np.random.default_rng(4096)
        for _ in range(200):
            g = random_graph_with_arc_bound(rng, max_arcs=64)
            spec = CO.CoinedSpec(g, "flipflop", "grover")
            u_sparse = CO.evolution_operator(engine, spec)
            u_dense = u_sparse.to_dense()
            dim = u_dense.shape[0]
            assert np.max(np.abs(u_dense.conj().T @ u_dense - np.eye(dim))) <= 1e-12

            t = int(rng.integers(1, 101))
            amp = np.zeros(dim, dtype=complex)
            amp[int(rng.integers(0, dim))] = 1.0
            psi0 = WalkState(G.arc_basis(g), amp)
            states = CO.simulate(engine, spec, (t, t + 1, 1), psi0)
            expected = np.linalg.matrix_power(dense_coined_step(g), t) @ amp
            assert np.max(np.abs(states[0].amplitudes - expected)) <= 1e-10


def _dense_persistent_grid_step(nx, ny, arcs, pos):
    dim = len(arcs)
    s = np.zeros((dim, dim), dtype=complex)
    for j, (v, w) in enumerate(arcs):
        vx, vy = v % nx, v // nx
        wx, wy = w % nx, w // nx
        dx, dy = (wx - vx) % nx, (wy - vy) % ny
        if dy == 0:
            step = 1 if dx == 1 else -1
            target = ((wx + step) % nx) + nx * wy
        else:
            step = 1 if dy == 1 else -1
            target = wx + nx * ((wy + step) % ny)
        s[pos[(w, target)], j] = 1.0
    return s


def test_grid_snapshot_properties(engine):
    with criterion(
        "grid(21,21) persistent walk, 60 steps: norm, 4-fold symmetry, oracle",
        budget_seconds=30.0,
    ):
        nx = ny = 21
        g = G.grid(nx, ny, periodic=True)
        cx = cy = 10
        center = cx + nx * cy
        amp = 0.5
        psi0 = (
            amp * CO.ket(g, center, center + 1)
            + amp * CO.ket(g, center, center - 1)
            + amp * CO.ket(g, center, center + nx)
            + amp * CO.ket(g, center, center - nx)
        )
        spec = CO.CoinedSpec(g, "persistent", "grover")
        states = CO.simulate(engine, spec, (60, 61, 1), psi0)
        final = states[0]
        (p,) = CO.probability_distribution(g, [final])

        assert abs(p.sum() - 1.0) <= 1e-10

        for v in range(g.n):
            x, y = v % nx, v // nx
            rx, ry = (cx - (y - cy)) % nx, (cy + (x - cx)) % ny
            assert abs(p[v] - p[rx + nx * ry]) <= 1e-10

        arcs = sorted_arcs(g)
        pos = {a: i for i, a in enumerate(arcs)}
        u_dense = _dense_persistent_grid_step(nx, ny, arcs, pos) @ dense_grover_coin(g)
        assert len(arcs) == 1764
        expected = psi0.amplitudes.copy()
        for _ in range(60):
            expected = u_dense @ expected
        assert np.max(np.abs(final.amplitudes - expected)) <= 1e-9


def test_arc_ordering_conformance(engine):
    with criterion("arc ordering and coin block-diagonality (100 random graphs)"):
        rng = np.random.default_rng(8192)
        for _ in range(100):
            g = random_graph_with_arc_bound(rng, max_arcs=80)
            basis = G.arc_basis(g)
            listed = [tuple(map(int, a)) for a in basis.arcs]
            assert listed == sorted_arcs(g)

            coin = CO.grover_coin(basis)
            offs = basis.tail_offsets
            rows = np.repeat(np.arange(coin.n_rows), np.diff(coin.row_offsets))
            tails = basis.arcs[:, 0]
            for r, c in zip(rows, coin.col_indices):
                v = int(tails[r])
                assert offs[v] <= c < offs[v + 1]


def test_backend_equivalence_and_benchmark():
    with criterion("backend equivalence on the uniform workload (n=2000, iters=100)"):
        serial_report, serial_res = cli.run_benchmark("serial", 2000, 100)
        parallel_report, parallel_res = cli.run_benchmark("parallel", 2000, 100, threads=4)
        print(json.dumps(serial_report))
        print(json.dumps(parallel_report))
        assert serial_report["loop_seconds"] > 0.0
        assert parallel_report["loop_seconds"] > 0.0
        assert np.max(np.abs(serial_res.entries - parallel_res.entries)) <= 1e-12
        speedup = serial_report["loop_seconds"] / parallel_report["loop_seconds"]
        # informational only; absolute times are machine dependent
        print(f"parallel speedup on the multiplication loop: {speedup:.2f}x")

        # single raw multiplication sanity value at small n: 4 * (2+2i)(3+3i)
        _, small = cli.run_benchmark("serial", 4, 1)
        assert np.allclose(small.entries, 48.0j, atol=1e-12)


def test_cli_determinism_and_round_trip(tmp_path):
    with criterion("CLI byte-determinism and JSON/CSV agreement"):
        cfg = {
            "schema": 1,
            "model": "ctqw",
            "graph": {"family": "cycle", "n": 31},
            "gamma": 0.35,
            "delta_t": 0.5,
            "initial_state": [["v:15", 1.0, 0.0]],
            "range": 9,
            "engine": "serial",
            "outputs": [
                {"type": "json", "path": "run.json"},
                {"type": "csv", "path": "run.csv"},
            ],
        }
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps(cfg))
        for d in ("r1", "r2"):
            assert cli.main(["simulate", str(cfg_path), "--out-dir", str(tmp_path / d)]) == 0
        json1 = (tmp_path / "r1" / "run.json").read_bytes()
        json2 = (tmp_path / "r2" / "run.json").read_bytes()
        assert json1 == json2

        doc = json.loads(json1)
        table = {}
        with open(tmp_path / "r1" / "run.csv") as f:
            for row in csv.DictReader(f):
                table[(int(row["snapshot"]), int(row["vertex"]))] = float(row["probability"])
        for snap in doc["snapshots"]:
            assert abs(sum(snap["p"]) - 1.0) <= 1e-10
            for v, p in enumerate(snap["p"]):
                assert abs(table[(snap["k"], v)] - p) <= 1e-15
