from src.graphs.generators import generate, percolation_bonds
from src.graphs.io import read_edge_list, write_edge_list
from src.graphs.queries import (
    DegreeStats,
    all_pairs_distances,
    ball,
    degree_stats,
    diameter,
    distance,
    distances_from,
    distances_to_set,
    eccentricity,
)
from src.graphs.topology import GraphTopology, build_topology
