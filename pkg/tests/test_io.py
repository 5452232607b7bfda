import json

import numpy as np
import pytest

from nbm.core import SymmetricGraph, build_probability
from nbm.estimator import fit
from nbm.io import (
    DataFormatError,
    fit_report,
    format_edge_list,
    parse_edge_list,
    read_sidecar,
    write_matrix_csv,
    write_sidecar,
)


def test_edge_list_round_trip_is_idempotent(small_network):
    text = format_edge_list(small_network.graph)
    graph = parse_edge_list(text)
    np.testing.assert_array_equal(graph.adjacency, small_network.graph.adjacency)
    assert format_edge_list(graph) == text


def test_isolated_trailing_nodes_survive():
    g = SymmetricGraph.from_edges(6, [(0, 1)])
    assert parse_edge_list(format_edge_list(g)).n == 6


def test_edges_sorted_zero_based():
    g = SymmetricGraph.from_edges(4, [(3, 1), (0, 2), (1, 0)])
    lines = format_edge_list(g).splitlines()[1:]
    assert lines == ["0 1", "0 2", "1 3"]


def test_plain_edge_list_without_header():
    g = parse_edge_list("0 1\n2 1\n\n# comment\n")
    assert g.n == 3 and g.adjacency[1, 2] == 1


@pytest.mark.parametrize("text", ["0 1 2\n", "a b\n", "1 1\n", "-1 2\n", "# nodes 2\n0 5\n"])
def test_malformed_input(text):
    with pytest.raises(DataFormatError):
        parse_edge_list(text)


def test_sidecar_round_trip(tmp_path, small_network):
    path = tmp_path / "truth.json"
    write_sidecar(path, small_network.params, small_network.config.to_dict())
    params = read_sidecar(path)
    np.testing.assert_array_equal(params.z.labels, small_network.z.labels)
    np.testing.assert_array_equal(params.H, small_network.params.H)
    np.testing.assert_array_equal(build_probability(params).entries, small_network.P.entries)
    data = json.loads(path.read_text())
    assert data["format_version"] == 1 and data["seed"] == 7


def test_bad_sidecar(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{}")
    with pytest.raises(DataFormatError):
        read_sidecar(path)


def test_report_contents(small_network):
    result = fit(small_network.graph, 4, 2, seed=0)
    report = fit_report(result, small_network.params)
    json.dumps(report)
    assert set(report["truth"]) == {"clustering_error", "meta_clustering_error", "estimation_error"}
    assert len(report["block_singular_values"]) == 8
    assert report["model"] == "NBM"
    assert "truth" not in fit_report(result)


def test_matrix_csv_is_exact(tmp_path):
    M = np.random.default_rng(0).random((3, 3))
    path = tmp_path / "m.csv"
    write_matrix_csv(path, M)
    np.testing.assert_array_equal(np.loadtxt(path, delimiter=","), M)
