"""
Unit tests for edge-list export and import.
"""
import numpy as np
import pytest

from src.graphs import generate, read_edge_list, write_edge_list
from src.graphs.io import sidecar_path
from src.schemas.family import RandomRegularSpec


def test_edge_list_round_trip(tmp_path):
    g = generate(RandomRegularSpec(d=3, n=20, seed=2))
    path = write_edge_list(g, tmp_path / "g.edges")
    assert sidecar_path(path).exists()
    assert path.read_text().splitlines()[0] == "v 20"

    h = read_edge_list(path)
    assert h.family == g.family
    assert np.array_equal(h.edges(), g.edges())


def test_edge_list_mismatch_rejected(tmp_path, cycle6):
    path = write_edge_list(cycle6, tmp_path / "c.edges")
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(ValueError):
        read_edge_list(path)


@pytest.mark.parametrize("bad_edge", ["0 6", "-1 2"])
def test_edge_list_vertex_out_of_range(tmp_path, cycle6, bad_edge):
    path = write_edge_list(cycle6, tmp_path / "c.edges")
    lines = path.read_text().splitlines()
    lines[-1] = bad_edge
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(ValueError, match="out of range"):
        read_edge_list(path)
