"""Defining graph files for raagscl.

A graph file is a JSON document with ``generators`` (ordered list of names)
and ``edges`` (list of 2-element name lists).
"""

import json
from pathlib import Path
from typing import Any

from raagscl.errors import PresentationError
from raagscl.logger import setup_logger
from raagscl.raag_core import DefiningGraph

MAX_GRAPH_SIZE = 1024 * 1024  # 1 MB

FIXTURE_GRAPHS: dict[str, DefiningGraph] = {
    "f2": DefiningGraph.free(["a", "b"]),
    "z2": DefiningGraph.free_abelian(["a", "b"]),
    "path3": DefiningGraph.path(["a", "b", "c"]),
}


def graph_to_dict(graph: DefiningGraph) -> dict[str, Any]:
    """Serializable form with edges sorted by generator order."""
    edges = sorted(sorted(edge, key=graph.index) for edge in graph.edges)
    return {"generators": list(graph.generators), "edges": edges}


def graph_from_dict(data: Any) -> DefiningGraph:
    """Build a graph from its parsed JSON form.

    Raises:
        PresentationError: If fields are missing or have the wrong shape
    """
    if not isinstance(data, dict):
        setup_logger().error("Graph document must be an object")
        raise PresentationError("Graph document must be an object")
    generators = data.get("generators")
    edges = data.get("edges", [])
    if not isinstance(generators, list) or not all(isinstance(g, str) for g in generators):
        setup_logger().error("'generators' must be a list of strings")
        raise PresentationError("'generators' must be a list of strings")
    if not isinstance(edges, list) or not all(
        isinstance(edge, list) and all(isinstance(end, str) for end in edge) for edge in edges
    ):
        setup_logger().error("'edges' must be a list of generator-name pairs")
        raise PresentationError("'edges' must be a list of generator-name pairs")
    return DefiningGraph.from_names(generators, edges)


def load_graph(graph_path: Path) -> DefiningGraph:
    """Load a defining graph from a JSON file.

    Args:
        graph_path: Path to the graph file

    Returns:
        The validated DefiningGraph

    Raises:
        FileNotFoundError: If file doesn't exist
        ValueError: If the file is too large or not valid JSON
        PresentationError: If the document does not describe a simplicial graph
    """
    logger = setup_logger()

    if not graph_path.exists():
        logger.error(f"Graph file not found: {graph_path}")
        raise FileNotFoundError(f"Graph file not found: {graph_path}")

    file_size = graph_path.stat().st_size
    if file_size > MAX_GRAPH_SIZE:
        logger.error(f"Graph file too large: {file_size} bytes (max {MAX_GRAPH_SIZE})")
        raise ValueError(f"Graph file too large: {file_size} bytes (max {MAX_GRAPH_SIZE})")

    try:
        data = json.loads(graph_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        logger.error(f"Invalid graph file '{graph_path}': {e}")
        raise ValueError(f"Invalid graph file: {e}") from e

    try:
        graph = graph_from_dict(data)
    except PresentationError as e:
        logger.error(f"Invalid graph in '{graph_path}': {e}")
        raise

    logger.info(
        f"Loaded graph {graph_path.name}: {graph.rank} generators, {len(graph.edges)} edges"
    )
    return graph


def save_graph(graph: DefiningGraph, graph_path: Path) -> None:
    graph_path.parent.mkdir(parents=True, exist_ok=True)
    graph_path.write_text(json.dumps(graph_to_dict(graph), indent=2) + "\n", encoding="utf-8")


def resolve_graph(graph_path: Path | None, fixture: str | None) -> DefiningGraph:
    """Pick the graph for a run: an explicit file wins over a fixture name.

    Raises:
        PresentationError: If neither is given or the fixture name is unknown
    """
    if graph_path is not None:
        return load_graph(graph_path)
    if fixture is None:
        setup_logger().error("No graph given: pass --graph FILE or --fixture NAME")
        raise PresentationError("No graph given: pass --graph FILE or --fixture NAME")
    try:
        return FIXTURE_GRAPHS[fixture]
    except KeyError:
        known = ", ".join(sorted(FIXTURE_GRAPHS))
        setup_logger().error(f"Unknown fixture '{fixture}' (known: {known})")
        raise PresentationError(f"Unknown fixture '{fixture}' (known: {known})") from None
