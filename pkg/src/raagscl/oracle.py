"""Brute-force ground truth on a finite ball of the RAAG cube complex.

The ball holds every vertex of length at most ``radius``, the Cayley edges
and squares between them, and the hyperplane classes obtained by closing
edges under square-opposite parallelism. Queries are answered from BFS
distances and from connected components after a class's edges are removed;
nothing here calls the normal-form machinery except to name vertices.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Any

import networkx as nx

from raagscl.counting_qm import Segment
from raagscl.cube_geom import (
    Halfspace,
    HalfspaceRelation,
    side_vertex,
    translate_halfspace,
)
from raagscl.errors import BallCapError, InvariantViolation, OutOfBallError
from raagscl.logger import setup_logger
from raagscl.raag_core import (
    DefiningGraph,
    GroupElement,
    identity,
    invert,
    iter_ball,
    letter_element,
    multiply,
)

DEFAULT_BALL_CAP = 6

Edge = tuple[GroupElement, int]  # (tail, generator): the edge tail → tail·generator
Square = tuple[GroupElement, int, int]  # (corner, u, v) with u < v commuting


@dataclass(frozen=True)
class OracleVerdict:
    query: str
    answer: Any
    interior_safe: bool


@dataclass(frozen=True, eq=False)
class BallComplex:
    """Explicit ball of radius ``radius`` around the identity vertex."""

    graph: DefiningGraph
    radius: int
    vertices: tuple[GroupElement, ...]
    cayley: nx.Graph = field(repr=False)
    edges: tuple[Edge, ...] = field(repr=False)
    squares: tuple[Square, ...] = field(repr=False)
    hyperplane_classes: tuple[frozenset[Edge], ...] = field(repr=False)
    _sides: dict[int, list[frozenset[GroupElement]]] = field(
        default_factory=dict, init=False, repr=False
    )

    def __contains__(self, vertex: object) -> bool:
        return vertex in self.cayley

    @cached_property
    def class_of(self) -> dict[Edge, int]:
        return {edge: k for k, edges in enumerate(self.hyperplane_classes) for edge in edges}

    @cached_property
    def depth(self) -> dict[GroupElement, int]:
        """BFS distance of every vertex from the identity."""
        return dict(nx.single_source_shortest_path_length(self.cayley, identity(self.graph)))

    @cached_property
    def class_labels(self) -> tuple[int, ...]:
        return tuple(next(iter(edges))[1] for edges in self.hyperplane_classes)

    @cached_property
    def crossing_labels(self) -> dict[int, frozenset[int]]:
        """Labels of the classes crossing each class inside some square."""
        crossing: dict[int, set[int]] = {k: set() for k in range(len(self.hyperplane_classes))}
        for corner, u, v in self.squares:
            first, second = self.class_of[(corner, u)], self.class_of[(corner, v)]
            crossing[first].add(v)
            crossing[second].add(u)
        return {k: frozenset(labels) for k, labels in crossing.items()}

    def head(self, edge: Edge) -> GroupElement:
        tail, generator = edge
        return multiply(tail, letter_element(self.graph, generator))

    def sides(self, class_id: int) -> list[frozenset[GroupElement]]:
        """Vertex components left after deleting the class's edges."""
        if class_id not in self._sides:
            removed = [(tail, self.head((tail, v))) for tail, v in self.hyperplane_classes[class_id]]
            cut = nx.restricted_view(self.cayley, [], removed)
            self._sides[class_id] = [
                frozenset(component) for component in nx.connected_components(cut)
            ]
        return self._sides[class_id]

    def side_of(self, class_id: int, vertex: GroupElement) -> frozenset[GroupElement]:
        for component in self.sides(class_id):
            if vertex in component:
                return component
        raise OutOfBallError(f"Vertex '{vertex}' is not in the ball of radius {self.radius}")

    def locate(self, halfspace: Halfspace) -> tuple[int, frozenset[GroupElement]]:
        """Hyperplane class and side set of a named halfspace.

        Raises:
            OutOfBallError: If the hyperplane's base edge is not in the ball
        """
        edge = (halfspace.base, halfspace.label)
        if edge not in self.class_of:
            raise OutOfBallError(
                f"Halfspace {halfspace.describe()} has no edge in the ball of radius {self.radius}"
            )
        class_id = self.class_of[edge]
        return class_id, self.side_of(class_id, side_vertex(halfspace))


def build_ball(graph: DefiningGraph, radius: int, cap: int = DEFAULT_BALL_CAP) -> BallComplex:
    """Enumerate the ball of the given radius with its squares and hyperplane classes.

    Raises:
        BallCapError: If radius exceeds the cap
        ValueError: If radius is negative
    """
    logger = setup_logger()
    if radius < 0:
        logger.error(f"Ball radius must be >= 0, got {radius}")
        raise ValueError(f"Ball radius must be >= 0, got {radius}")
    if radius > cap:
        logger.error(f"Ball radius {radius} exceeds cap {cap}")
        raise BallCapError(f"Ball radius {radius} exceeds cap {cap}")

    vertices = tuple(iter_ball(graph, range(graph.rank), radius))
    members = set(vertices)
    steps = [letter_element(graph, v) for v in range(graph.rank)]

    cayley = nx.Graph()
    cayley.add_nodes_from(vertices)
    edges: list[Edge] = []
    for tail in vertices:
        for v, step in enumerate(steps):
            head = multiply(tail, step)
            if head in members:
                edges.append((tail, v))
                cayley.add_edge(tail, head, label=v)

    squares: list[Square] = []
    for corner in vertices:
        for u, v in combinations(range(graph.rank), 2):
            if not graph.commute(u, v):
                continue
            along_u, along_v = multiply(corner, steps[u]), multiply(corner, steps[v])
            if {along_u, along_v, multiply(along_u, steps[v])} <= members:
                squares.append((corner, u, v))

    parallel = nx.Graph()
    parallel.add_nodes_from(edges)
    for corner, u, v in squares:
        parallel.add_edge((corner, u), (multiply(corner, steps[v]), u))
        parallel.add_edge((corner, v), (multiply(corner, steps[u]), v))
    classes = sorted(
        (frozenset(component) for component in nx.connected_components(parallel)),
        key=lambda component: min((tail.shortlex_key, v) for tail, v in component),
    )

    logger.info(
        f"Built ball of radius {radius}: {len(vertices)} vertices, {len(edges)} edges, "
        f"{len(squares)} squares, {len(classes)} hyperplane classes"
    )
    return BallComplex(graph, radius, vertices, cayley, tuple(edges), tuple(squares), tuple(classes))


def _require(ball: BallComplex, *vertices: GroupElement) -> None:
    for vertex in vertices:
        if vertex.graph != ball.graph or vertex not in ball:
            raise OutOfBallError(f"Vertex '{vertex}' is not in the ball of radius {ball.radius}")


def _distance(ball: BallComplex, x: GroupElement, y: GroupElement) -> int:
    return int(nx.shortest_path_length(ball.cayley, x, y))


def interior_safe(ball: BallComplex, operands: Sequence[GroupElement], slack: int = 0) -> bool:
    """Margin rule: |z| + diameter(operands) + slack ≤ radius for every operand z."""
    _require(ball, *operands)
    diameter = max((_distance(ball, x, y) for x, y in combinations(operands, 2)), default=0)
    return all(ball.depth[z] + diameter + slack <= ball.radius for z in operands)


def _halfspace_vertices(halfspaces: Iterable[Halfspace]) -> list[GroupElement]:
    return [
        vertex
        for halfspace in halfspaces
        for vertex in (side_vertex(halfspace), side_vertex(halfspace.complement()))
    ]


def oracle_distance(ball: BallComplex, x: GroupElement, y: GroupElement) -> OracleVerdict:
    """BFS distance inside the ball."""
    _require(ball, x, y)
    return OracleVerdict("distance", _distance(ball, x, y), interior_safe(ball, [x, y]))


def oracle_median(
    ball: BallComplex, x: GroupElement, y: GroupElement, z: GroupElement
) -> OracleVerdict:
    """The vertex lying on a geodesic between each pair, found by exhaustion.

    Raises:
        InvariantViolation: If an interior-safe query does not have exactly one candidate
    """
    _require(ball, x, y, z)
    safe = interior_safe(ball, [x, y, z])
    maps = [dict(nx.single_source_shortest_path_length(ball.cayley, p)) for p in (x, y, z)]
    pairs = [(0, 1), (1, 2), (0, 2)]
    gaps = [maps[i][(x, y, z)[j]] for i, j in pairs]
    candidates = [
        m
        for m in ball.vertices
        if all(maps[i][m] + maps[j][m] == gap for (i, j), gap in zip(pairs, gaps, strict=True))
    ]
    if len(candidates) != 1:
        if safe:
            setup_logger().error(f"Median of '{x}', '{y}', '{z}' has {len(candidates)} candidates")
            raise InvariantViolation(
                f"Median of '{x}', '{y}', '{z}' has {len(candidates)} candidates in the ball"
            )
        return OracleVerdict("median", None, False)
    return OracleVerdict("median", candidates[0], safe)


def oracle_side(ball: BallComplex, x: GroupElement, halfspace: Halfspace) -> OracleVerdict:
    """Whether x lies in the halfspace's component."""
    _require(ball, x)
    _, side = ball.locate(halfspace)
    operands = [x, *_halfspace_vertices([halfspace])]
    return OracleVerdict("side", x in side, interior_safe(ball, operands, slack=1))


def _relation_from_sets(
    ball: BallComplex, first: Halfspace, second: Halfspace
) -> HalfspaceRelation:
    class_1, inside_1 = ball.locate(first)
    class_2, inside_2 = ball.locate(second)
    _, outside_1 = ball.locate(first.complement())
    _, outside_2 = ball.locate(second.complement())
    if class_1 == class_2:
        return (
            HalfspaceRelation.EQUAL if inside_1 == inside_2 else HalfspaceRelation.COMPLEMENT_EQUAL
        )
    if not inside_1 & outside_2:
        return HalfspaceRelation.SECOND_CONTAINS_FIRST
    if not outside_1 & inside_2:
        return HalfspaceRelation.FIRST_CONTAINS_SECOND
    if not inside_1 & inside_2:
        return HalfspaceRelation.COMPLEMENT_CONTAINS_FIRST
    if not outside_1 & outside_2:
        return HalfspaceRelation.FIRST_CONTAINS_COMPLEMENT
    return HalfspaceRelation.TRANSVERSE


def oracle_relation(ball: BallComplex, first: Halfspace, second: Halfspace) -> OracleVerdict:
    """Relation by containment of side sets; transverse when all four quadrants are inhabited."""
    answer = _relation_from_sets(ball, first, second)
    operands = _halfspace_vertices([first, second])
    return OracleVerdict("relation", answer, interior_safe(ball, operands, slack=2))


def oracle_tightly_nested(ball: BallComplex, outer: Halfspace, inner: Halfspace) -> OracleVerdict:
    """outer ⊋ inner with no class on a geodesic between them giving a halfspace in between."""
    operands = _halfspace_vertices([outer, inner])
    safe = interior_safe(ball, operands, slack=2)
    if _relation_from_sets(ball, outer, inner) is not HalfspaceRelation.FIRST_CONTAINS_SECOND:
        return OracleVerdict("tightly_nested", False, safe)

    outer_class, outer_side = ball.locate(outer)
    inner_class, inner_side = ball.locate(inner)
    start, end = side_vertex(outer.complement()), side_vertex(inner)
    from_start = dict(nx.single_source_shortest_path_length(ball.cayley, start))
    from_end = dict(nx.single_source_shortest_path_length(ball.cayley, end))
    gap = from_start[end]
    between = {m for m in ball.vertices if from_start[m] + from_end[m] == gap}
    crossed = {
        ball.class_of[(tail, v)]
        for tail, v in ball.edges
        if tail in between and ball.head((tail, v)) in between
    } - {outer_class, inner_class}
    for class_id in crossed:
        for side in ball.sides(class_id):
            if inner_side < side < outer_side:
                return OracleVerdict("tightly_nested", False, safe)
    return OracleVerdict("tightly_nested", True, safe)


def oracle_copies(
    ball: BallComplex, gamma: Segment, x: GroupElement, y: GroupElement
) -> OracleVerdict:
    """Witnesses g in the ball with every member of g·γ separating y from x.

    Translates with the same chain count once, keeping the shortlex-least
    witness.
    """
    _require(ball, x, y)
    operands = [x, y, *_halfspace_vertices(gamma.chain)]
    reach = max(ball.depth.get(vertex, ball.radius + 1) for vertex in operands)
    safe = all(vertex in ball for vertex in operands) and interior_safe(
        ball, [x, y], slack=reach + 1
    )

    seen: set[tuple[tuple[int, frozenset[GroupElement]], ...]] = set()
    witnesses: list[GroupElement] = []
    for g in ball.vertices:
        try:
            located = tuple(ball.locate(translate_halfspace(g, member)) for member in gamma.chain)
        except OutOfBallError:
            continue
        if not all(y in side and x not in side for _, side in located):
            continue
        if located in seen:
            continue
        seen.add(located)
        witnesses.append(g)
    return OracleVerdict("copies", tuple(witnesses), safe)


def oracle_coset_min(
    ball: BallComplex, x: GroupElement, subset: Iterable[int]
) -> OracleVerdict:
    """Shortlex-least vertex of x·⟨subset⟩ among the ball's vertices."""
    _require(ball, x)
    allowed = frozenset(subset)
    x_inverse = invert(x)
    members = [
        vertex
        for vertex in ball.vertices
        if all(letter.generator in allowed for letter in multiply(x_inverse, vertex).letters)
    ]
    least = min(members, key=lambda vertex: vertex.shortlex_key)
    return OracleVerdict("coset_min", least, True)


def oracle_raag_like_violations(ball: BallComplex) -> list[str]:
    """Exhaustive check of the four RAAG-like conditions inside the ball.

    - no inversions: every class has all tails on one side and all heads on the other
    - non-transverse: no square pairs two classes with the same label
    - tightly nested classes at a common vertex are not crossed by the other's label
    - no halfspace sits tightly inside a translate of its own complement
    """
    violations: list[str] = []
    for class_id, edges in enumerate(ball.hyperplane_classes):
        tails = {ball.side_of(class_id, tail) for tail, _ in edges}
        heads = {ball.side_of(class_id, ball.head(edge)) for edge in edges}
        if len(tails) != 1 or len(heads) != 1 or tails == heads:
            violations.append(f"class {class_id}: inversion or split class")

    for corner, u, v in ball.squares:
        first, second = ball.class_of[(corner, u)], ball.class_of[(corner, v)]
        if first == second or ball.class_labels[first] == ball.class_labels[second]:
            violations.append(f"square at '{corner}': self-crossing or same-label crossing")

    # squares at a vertex need two more layers to be present
    interior = [vertex for vertex in ball.vertices if ball.depth[vertex] + 2 <= ball.radius]
    for vertex in interior:
        around = []
        for _, neighbour, label in ball.cayley.edges(vertex, data="label"):
            outgoing = ball.head((vertex, label)) == neighbour
            tail = vertex if outgoing else neighbour
            class_id = ball.class_of[(tail, label)]
            around.append((class_id, label, outgoing, ball.side_of(class_id, neighbour)))
        for (c1, l1, out1, far1), (c2, l2, out2, far2) in combinations(around, 2):
            if c1 == c2 or far1 & far2:
                continue
            # disjoint far sides: the two halfspaces through this vertex are tightly nested
            if l2 in ball.crossing_labels[c1] or l1 in ball.crossing_labels[c2]:
                violations.append(f"vertex '{vertex}': tightly nested classes {c1}, {c2} crossed")
            # each label has one outgoing and one incoming edge per vertex, so this
            # only fires on a Cayley graph with two same-label edges leaving a vertex
            if l1 == l2 and out1 == out2:
                violations.append(f"vertex '{vertex}': halfspace tightly inside its translate")
    return violations


def dump_ball(ball: BallComplex) -> str:
    """JSON document listing the ball's vertices, edges and hyperplane classes."""
    graph = ball.graph

    def edge_entry(edge: Edge) -> list[str]:
        tail, v = edge
        return [str(tail), graph.name(v)]

    document = {
        "generators": list(graph.generators),
        "radius": ball.radius,
        "vertices": [str(vertex) for vertex in ball.vertices],
        "edges": [edge_entry(edge) for edge in ball.edges],
        "squares": [[str(corner), graph.name(u), graph.name(v)] for corner, u, v in ball.squares],
        "hyperplane_classes": [
            sorted((edge_entry(edge) for edge in edges), key=lambda entry: (len(entry[0]), entry))
            for edges in ball.hyperplane_classes
        ],
    }
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def chain_of_witness(gamma: Segment, g: GroupElement) -> tuple[Halfspace, ...]:
    """The translated chain g·γ."""
    return tuple(translate_halfspace(g, member) for member in gamma.chain)

