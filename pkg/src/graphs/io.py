"""
Edge-list export/import.

Format: first line ``v <count>``, then one ``u w`` pair per line with u < w,
sorted. A YAML sidecar ``<path>.meta`` records the family spec.
"""
import logging
from pathlib import Path
from typing import List, Union

import yaml

from src.graphs.topology import GraphTopology, build_topology
from src.schemas.family import parse_family

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def sidecar_path(path: PathLike) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".meta")


def write_edge_list(g: GraphTopology, path: PathLike) -> Path:
    """Write the edge list and its metadata sidecar; returns the edge-list path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"v {g.vertex_count}"]
    lines.extend(f"{u} {w}" for u, w in g.edges().tolist())
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    meta = {
        "family": g.family.model_dump(mode="json"),
        "vertex_count": g.vertex_count,
        "edge_count": g.edge_count,
    }
    with open(sidecar_path(path), "w", encoding="utf-8") as f:
        yaml.safe_dump(meta, f, sort_keys=True)
    logger.info(f"Wrote {g!r} to {path}")
    return path


def read_edge_list(path: PathLike) -> GraphTopology:
    """
    Read a graph written by write_edge_list.

    Raises:
        ValueError: If the file is malformed or disagrees with its sidecar
    """
    path = Path(path)
    with open(sidecar_path(path), "r", encoding="utf-8") as f:
        meta = yaml.safe_load(f)
    family = parse_family(meta["family"])

    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().split()
        if len(header) != 2 or header[0] != "v":
            raise ValueError(f"{path}: expected 'v <count>' header, got {' '.join(header)!r}")
        count = int(header[1])
        neighbors: List[List[int]] = [[] for _ in range(count)]
        edges = 0
        for lineno, line in enumerate(f, start=2):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'u w', got {line.strip()!r}")
            u, w = int(parts[0]), int(parts[1])
            if not (0 <= u < count and 0 <= w < count):
                raise ValueError(f"{path}:{lineno}: vertex id out of range 0..{count - 1} in {line.strip()!r}")
            neighbors[u].append(w)
            neighbors[w].append(u)
            edges += 1

    if count != meta["vertex_count"] or edges != meta["edge_count"]:
        raise ValueError(f"{path}: edge list does not match its metadata sidecar")
    return build_topology(neighbors, family)
