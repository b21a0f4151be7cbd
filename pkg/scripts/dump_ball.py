#!/usr/bin/env python3
"""Dump a finite ball of a RAAG cube complex as JSON."""

import argparse
import sys
from pathlib import Path

from raagscl.graph_io import FIXTURE_GRAPHS, resolve_graph
from raagscl.oracle import build_ball, dump_ball


def write_ball(graph_path: Path | None, fixture: str | None, radius: int, output: Path | None) -> None:
    graph = resolve_graph(graph_path, fixture)
    ball = build_ball(graph, radius)
    document = dump_ball(ball)
    if output is None:
        sys.stdout.write(document)
        return
    output.write_text(document, encoding="utf-8")
    print(
        f"{output}: {len(ball.vertices)} vertices, {len(ball.edges)} edges, "
        f"{len(ball.hyperplane_classes)} hyperplane classes"
    )


def main() -> None:
    parser = argparse.ArgumentParser(description="Dump the ball complex of a RAAG for inspection")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--graph", type=Path, help="defining graph JSON file")
    source.add_argument("--fixture", choices=sorted(FIXTURE_GRAPHS), help="built-in defining graph")
    parser.add_argument("--radius", type=int, default=3, help="ball radius (default 3, cap 6)")
    parser.add_argument("--output", type=Path, help="write here instead of stdout")
    args = parser.parse_args()

    try:
        write_ball(args.graph, args.fixture, args.radius, args.output)
    except (OSError, ValueError) as e:
        print(f"error - {e}", file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    main()
