import json
import math
import os
import subprocess
from pathlib import Path

import pytest

import parmc

REPO = Path(__file__).resolve().parents[2]
TRIANGLE = "MULTICUT\n0 1 1\n1 2 1\n0 2 -2\n"


def triangle():
    return parmc.WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, -2.0)])


def test_graph_round_trip():
    g = parmc.parse_instance("MULTICUT\n0 1 1.0\n1 0 0.5\n")
    assert g.num_nodes == 2
    assert g.edges == [(0, 1, 1.5)]
    h = parmc.parse_instance(parmc.serialize_instance(g))
    assert h.edges == g.edges
    assert g.find_edge(1, 0) == 0
    assert g.find_edge(0, 0) is None


def test_parse_error_is_value_error():
    with pytest.raises(ValueError, match="line 2"):
        parmc.parse_instance("MULTICUT\n0 0 1\n")


def test_file_io(tmp_path):
    path = tmp_path / "tri.txt"
    parmc.write_instance(path, triangle())
    assert parmc.read_instance(path).edges == triangle().edges


def test_clustering_cost():
    g = triangle()
    assert parmc.clustering_cost(g, [0, 0, 0]) == 0.0
    assert parmc.clustering_cost(g, [0, 1, 1]) == -1.0
    assert parmc.clustering_cost(g, [0, 1, 2]) == 0.0
    with pytest.raises(ValueError):
        parmc.clustering_cost(g, [0, 1])


@pytest.mark.parametrize("mode", ["P", "PD", "PD+", "GAEC"])
def test_solve_triangle(mode):
    s = parmc.solve(triangle(), parmc.SolverConfig(mode=mode, threads=1))
    assert s.primal_cost == -1.0
    assert len(s.labeling.cluster_of) == 3


def test_dual_bound_triangle():
    cfg = parmc.SolverConfig(mode="D", mp_iterations=1)
    assert parmc.dual_bound(triangle(), cfg) == -1.0
    s = parmc.solve(triangle(), cfg)
    assert s.lower_bound == -1.0
    assert s.labeling.cluster_of == [0, 1, 2]
    assert math.isinf(parmc.solve(triangle(), parmc.SolverConfig(mode="P")).lower_bound)


def test_config_errors():
    with pytest.raises(ValueError):
        parmc.SolverConfig(mode="nope")
    with pytest.raises(ValueError):
        parmc.solve(triangle(), parmc.SolverConfig(mp_iterations=0))
    assert parmc.SolverConfig(mode="PD+").effective_cycle_length() == 7


def test_sandwich_on_random_graphs():
    for seed in range(30):
        g = parmc.generate_random(6, 0.6, seed)
        opt, labels = parmc.brute_force_optimum(g)
        assert parmc.clustering_cost(g, labels) == pytest.approx(opt)
        lb = parmc.dual_bound(g, parmc.SolverConfig(mode="D", mp_iterations=20))
        pd = parmc.solve(g, parmc.SolverConfig(mode="PD", threads=1))
        assert lb <= opt + 1e-9 <= pd.primal_cost + 2e-9
        assert pd.trace[0].lower_bound_valid


def test_contraction_and_gaec():
    g = parmc.WeightedGraph(3, [(0, 1, 2.0), (1, 2, 3.0), (0, 2, -1.0)])
    f = parmc.connected_components(3, [(1, 2)])
    assert f.map == [0, 1, 1]
    contracted, joined = parmc.contract_graph(g, f)
    assert contracted.edges == [(0, 1, 1.0)]
    assert joined == 3.0
    cost, labels = parmc.naive_gaec(triangle())
    assert cost == -1.0
    assert parmc.greedy_additive_contraction(triangle()).map == labels


def test_separation_and_generators():
    assert parmc.separate_conflicted_cycles(triangle(), 3) == [[0, 1, 2]]
    grid = parmc.generate_grid(3, 3, stride=2, seed=1)
    assert (grid.num_nodes, grid.num_edges) == (9, 16)
    assert parmc.generate_random(8, 0.5, 3).edges == parmc.generate_random(8, 0.5, 3).edges


@pytest.mark.skipif("PARMC_TOOL" not in os.environ, reason="CLI binary not given")
def test_cli_report_matches_schema(tmp_path):
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads((REPO / "schemas" / "run_report.schema.json").read_text())
    instance = tmp_path / "tri.txt"
    instance.write_text(TRIANGLE)
    for mode in ["P", "PD", "PD+", "D", "GAEC"]:
        out = subprocess.run(
            [os.environ["PARMC_TOOL"], "solve", "-i", str(instance), "--mode", mode],
            check=True, capture_output=True, text=True,
        ).stdout
        report = json.loads(out)
        jsonschema.validate(report, schema)
        assert len(report["node_labels"]) == 3
