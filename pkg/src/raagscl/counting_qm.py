"""Segments, copy counting and the counting quasimorphism.

A segment is a chain Φ₀ ⊋ Φ₁ ⊋ … ⊋ Φ_r of tightly nested halfspaces. Its
copies in an interval are the translates g·γ whose members all lie in the
interval; ω_γ(x, y) counts a largest non-overlapping family of copies of γ
in [x, y] minus the same count for the reversed segment.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from itertools import combinations, pairwise

import networkx as nx

from raagscl.axis import AxisData, AxisWindow, axis_window
from raagscl.cube_geom import (
    Halfspace,
    HalfspaceRelation,
    Interval,
    interval,
    relation,
    side_vertex,
    translate_halfspace,
)
from raagscl.errors import InvariantViolation
from raagscl.logger import setup_logger
from raagscl.raag_core import (
    Constraint,
    GroupElement,
    coset_intersection,
    identity,
    invert,
    multiply,
    translate_witness,
)

RADIUS_SLACK = 4  # added to |I| + longest base word for the default witness radius


@dataclass(frozen=True)
class Segment:
    """A tightly nested chain together with an interval containing it.

    Two segments are equal when their chains are; the ambient interval only
    certifies the tight nesting.
    """

    chain: tuple[Halfspace, ...]
    ambient: Interval = field(compare=False, repr=False)
    positions: tuple[int, ...] = field(compare=False)

    def __len__(self) -> int:
        return len(self.chain)

    @property
    def first(self) -> Halfspace:
        return self.chain[0]

    @property
    def last(self) -> Halfspace:
        return self.chain[-1]

    def describe(self) -> str:
        return " > ".join(halfspace.describe() for halfspace in self.chain)


@dataclass(frozen=True)
class CopyInInterval:
    positions: tuple[int, ...]
    witness: GroupElement
    interval: Interval = field(compare=False, repr=False)

    @property
    def halfspaces(self) -> tuple[Halfspace, ...]:
        return tuple(self.interval.halfspaces[p] for p in self.positions)


@dataclass(frozen=True)
class QmValue:
    c_forward: int
    c_reverse: int

    @property
    def omega(self) -> int:
        return self.c_forward - self.c_reverse


def make_segment(ambient: Interval, positions: Sequence[int]) -> Segment:
    """Segment read off consecutive heap covers of an interval.

    Raises:
        ValueError: If positions are empty, out of range, or not a cover chain
    """
    chosen = tuple(positions)
    if not chosen:
        setup_logger().error("A segment needs at least one halfspace")
        raise ValueError("A segment needs at least one halfspace")
    for p in chosen:
        if not 0 <= p < len(ambient):
            setup_logger().error(f"Position {p} outside interval of length {len(ambient)}")
            raise ValueError(f"Position {p} outside interval of length {len(ambient)}")
    for i, j in pairwise(chosen):
        if not ambient.heap.is_cover(i, j):
            setup_logger().error(f"Positions {i} and {j} are not tightly nested")
            raise ValueError(f"Positions {i} and {j} are not tightly nested")
    return Segment(tuple(ambient.halfspaces[p] for p in chosen), ambient, chosen)


def segment_from_halfspaces(ambient: Interval, chain: Sequence[Halfspace]) -> Segment:
    """Locate a chain in an interval and validate it.

    Raises:
        ValueError: If a member is not in the interval or the chain is not tight
    """
    positions = []
    for halfspace in chain:
        position = ambient.position_of(halfspace)
        if position is None:
            setup_logger().error(f"Halfspace {halfspace.describe()} is not in the ambient interval")
            raise ValueError(f"Halfspace {halfspace.describe()} is not in the ambient interval")
        positions.append(position)
    return make_segment(ambient, positions)


def reverse_segment(gamma: Segment) -> Segment:
    """γ̄ = (Φ̄_r, …, Φ̄₀) inside [target, source]."""
    ambient = interval(gamma.ambient.target, gamma.ambient.source)
    return segment_from_halfspaces(
        ambient, [halfspace.complement() for halfspace in reversed(gamma.chain)]
    )


def segments_overlap(first: Segment, second: Segment) -> bool:
    """True iff some member of one equals or crosses some member of the other."""
    clashing = (HalfspaceRelation.EQUAL, HalfspaceRelation.TRANSVERSE)
    return any(relation(a, b) in clashing for a in first.chain for b in second.chain)


def segment_precedes(first: Segment, second: Segment) -> bool:
    """The order first > second: the last member of first strictly contains the first of second."""
    return relation(first.last, second.first) is HalfspaceRelation.FIRST_CONTAINS_SECOND


def middle_vertex(outer: Halfspace, inner: Halfspace) -> GroupElement | None:
    """A vertex in outer \\ inner adjacent to both hyperplanes.

    Tightly nested pairs have touching carriers, so this exists for every
    consecutive pair of a segment.
    """
    graph = outer.base.graph
    return coset_intersection(
        side_vertex(outer),
        graph.link(outer.label),
        side_vertex(inner.complement()),
        graph.link(inner.label),
    )


def default_witness_radius(gamma: Segment, within: Interval) -> int:
    return len(within) + max(len(halfspace.base) for halfspace in gamma.chain) + RADIUS_SLACK


def _candidate_chains(
    within: Interval, pattern: Sequence[tuple[int, int]]
) -> Iterator[tuple[int, ...]]:
    def matches(position: int, step: int) -> bool:
        halfspace = within.halfspaces[position]
        return (halfspace.label, halfspace.sign) == pattern[step]

    def extend(chain: list[int]) -> Iterator[tuple[int, ...]]:
        if len(chain) == len(pattern):
            yield tuple(chain)
            return
        for following in within.heap.successors(chain[-1]):
            if matches(following, len(chain)):
                yield from extend([*chain, following])

    for start in range(len(within)):
        if matches(start, 0):
            yield from extend([start])


def _witness(
    gamma: Segment,
    own_middles: Sequence[GroupElement],
    targets: Sequence[Halfspace],
    radius: int,
) -> GroupElement | None:
    graph = gamma.first.base.graph
    constraints: list[Constraint] = []
    # g must carry each middle vertex of γ to a middle vertex of the candidate pair
    for k, (outer, inner) in enumerate(pairwise(targets)):
        middle = middle_vertex(outer, inner)
        if middle is None:
            return None
        shared = graph.link(outer.label) & graph.link(inner.label)
        constraints.append((own_middles[k], middle, shared))
    for source, target in zip(gamma.chain, targets, strict=True):
        constraints.append((source.base, target.base, graph.link(source.label)))
    # pivot on the smallest ball: cliques first, then fewer generators
    constraints.sort(key=lambda c: (not graph.is_clique(c[2]), len(c[2])))
    return translate_witness(constraints, radius)


def enumerate_copies(
    gamma: Segment, within: Interval, radius: int | None = None
) -> list[CopyInInterval]:
    """All copies of γ inside an interval, found by witness search.

    Candidates are heap-cover chains whose (label, sign) sequence matches γ;
    each is kept only when a translating element is found within ``radius``.

    Args:
        gamma: Segment to look for
        within: Interval to search
        radius: Witness search bound; defaults to |I| + longest base word + 4

    Returns:
        Copies ordered by their position tuples
    """
    if radius is None:
        radius = default_witness_radius(gamma, within)
    own_middles = []
    for outer, inner in pairwise(gamma.chain):
        middle = middle_vertex(outer, inner)
        if middle is None:
            setup_logger().error(f"Segment {gamma.describe()} has non-touching members")
            raise InvariantViolation(f"Segment {gamma.describe()} has non-touching members")
        own_middles.append(middle)

    pattern = [(halfspace.label, halfspace.sign) for halfspace in gamma.chain]
    copies = []
    for candidate in _candidate_chains(within, pattern):
        targets = [within.halfspaces[p] for p in candidate]
        witness = _witness(gamma, own_middles, targets, radius)
        if witness is None:
            continue
        for source, target in zip(gamma.chain, targets, strict=True):
            if translate_halfspace(witness, source) != target:
                message = f"Witness '{witness}' maps {source.describe()} off {target.describe()}"
                setup_logger().error(message)
                raise InvariantViolation(message)
        copies.append(CopyInInterval(candidate, witness, within))
    return copies


def _positions_overlap(within: Interval, first: Sequence[int], second: Sequence[int]) -> bool:
    return any(p == q or not within.heap.comparable(p, q) for p in first for q in second)


def count_nonoverlapping(copies: Sequence[CopyInInterval], within: Interval) -> int:
    """Size of a largest pairwise non-overlapping family of copies.

    Inside one interval non-overlapping copies are always comparable, so this
    is the longest path in the containment DAG.

    Raises:
        ValueError: If a copy does not lie in ``within``
    """
    for copy in copies:
        if copy.interval != within or not all(0 <= p < len(within) for p in copy.positions):
            setup_logger().error("Copy does not lie in the given interval")
            raise ValueError("Copy does not lie in the given interval")
    if not copies:
        return 0

    dag = nx.DiGraph()
    dag.add_nodes_from(range(len(copies)))
    for (i, first), (j, second) in combinations(enumerate(copies), 2):
        if _positions_overlap(within, first.positions, second.positions):
            continue
        if all(within.heap.precedes(p, q) for p in first.positions for q in second.positions):
            dag.add_edge(i, j)
        elif all(within.heap.precedes(q, p) for p in first.positions for q in second.positions):
            dag.add_edge(j, i)
        else:
            message = (
                f"Non-overlapping copies at {first.positions} and {second.positions} "
                "are not comparable"
            )
            setup_logger().error(message)
            raise InvariantViolation(message)
    return int(nx.dag_longest_path_length(dag)) + 1


def omega(gamma: Segment, x: GroupElement, y: GroupElement, radius: int | None = None) -> QmValue:
    """ω_γ(x, y) with both counts."""
    within = interval(x, y)
    forward = count_nonoverlapping(enumerate_copies(gamma, within, radius), within)
    reverse = count_nonoverlapping(enumerate_copies(reverse_segment(gamma), within, radius), within)
    return QmValue(forward, reverse)


def phi(gamma: Segment, basepoint: GroupElement, g: GroupElement, radius: int | None = None) -> int:
    """φ_γ(g) = ω_γ(x₀, g·x₀)."""
    return omega(gamma, basepoint, multiply(g, basepoint), radius).omega


def find_maximal_g_nested(ax: AxisData) -> Segment:
    """A maximal g-nested segment in [o, go].

    Starts from the first position of [o, go] and extends at either end by
    the smallest tight neighbour that keeps Φ_r ⊋ gΦ₀, judged in [o, g²o]
    where position p + delta holds g times position p.
    """
    window = axis_window(ax, 2).interval
    heap = window.heap
    delta = ax.delta

    def g_nested(first: int, last: int) -> bool:
        return heap.precedes(last, first + delta)

    chain = [0]
    while True:
        options = [
            (q, True)
            for q in heap.predecessors(chain[0])
            if q < delta and g_nested(q, chain[-1])
        ]
        options += [
            (q, False)
            for q in heap.successors(chain[-1])
            if q < delta and g_nested(chain[0], q)
        ]
        if not options:
            break
        position, above = min(options)
        if above:
            chain.insert(0, position)
        else:
            chain.append(position)

    gamma = make_segment(axis_window(ax, 1).interval, chain)
    setup_logger().debug(f"Maximal g-nested segment for '{ax.g}': {gamma.describe()}")
    return gamma


def check_lesser_or_greater(alpha: Segment, h: GroupElement, window: AxisWindow) -> bool:
    """True iff exactly one of h·ᾱ > α and α > h·ᾱ holds, judged in an axis window.

    Raises:
        ValueError: If α or h·ᾱ is not inside the window
    """
    image = [translate_halfspace(h, halfspace.complement()) for halfspace in reversed(alpha.chain)]
    span = window.interval
    alpha_positions = [span.position_of(halfspace) for halfspace in alpha.chain]
    image_positions = [span.position_of(halfspace) for halfspace in image]
    if None in alpha_positions or None in image_positions:
        setup_logger().error("Segment and its reversed translate must both lie in the window")
        raise ValueError("Segment and its reversed translate must both lie in the window")
    heap = span.heap
    image_greater = heap.precedes(image_positions[-1], alpha_positions[0])
    alpha_greater = heap.precedes(alpha_positions[-1], image_positions[0])
    return image_greater != alpha_greater


def check_maximal_characterisation(gamma: Segment, ax: AxisData) -> bool:
    """Check that γ's neighbours in [o, go] cross the adjacent translates.

    Every Ψ ∈ [o, go] strictly containing Φ₀ must be transverse to g⁻¹Φ_r,
    and every Ψ strictly inside Φ_r transverse to gΦ₀.
    """
    fundamental = axis_window(ax, 1).interval
    first = fundamental.position_of(gamma.first)
    last = fundamental.position_of(gamma.last)
    if first is None or last is None:
        setup_logger().error("Segment does not lie in [o, go]")
        raise ValueError("Segment does not lie in [o, go]")
    back = translate_halfspace(invert(ax.g), gamma.last)
    ahead = translate_halfspace(ax.g, gamma.first)
    heap = fundamental.heap
    for q, candidate in enumerate(fundamental.halfspaces):
        if heap.precedes(q, first) and relation(candidate, back) is not HalfspaceRelation.TRANSVERSE:
            return False
        if heap.precedes(last, q) and relation(candidate, ahead) is not HalfspaceRelation.TRANSVERSE:
            return False
    return True


def is_g_nested(gamma: Segment, ax: AxisData) -> bool:
    """γ > gγ."""
    return (
        relation(gamma.last, translate_halfspace(ax.g, gamma.first))
        is HalfspaceRelation.FIRST_CONTAINS_SECOND
    )


def reverse_copies_in_window(
    gamma: Segment, ax: AxisData, n: int, radius: int | None = None
) -> list[CopyInInterval]:
    """Copies of γ̄ inside [o, gⁿo]; empty whenever γ is maximal g-nested."""
    window = axis_window(ax, n).interval
    return enumerate_copies(reverse_segment(gamma), window, radius)


def forward_copies_in_window(gamma: Segment, ax: AxisData, n: int) -> list[CopyInInterval]:
    """The copies gᵏγ, k < n, of a segment in [o, go], placed directly in [o, gⁿo].

    Raises:
        InvariantViolation: If a translate is not where the axis periodicity puts it
    """
    window = axis_window(ax, n).interval
    fundamental = axis_window(ax, 1).interval
    if gamma.ambient != fundamental:
        setup_logger().error("Segment does not lie in [o, go]")
        raise ValueError("Segment does not lie in [o, go]")
    copies = []
    translate = identity(ax.g.graph)
    for k in range(n):
        positions = tuple(p + k * ax.delta for p in gamma.positions)
        for source, p in zip(gamma.chain, positions, strict=True):
            if translate_halfspace(translate, source) != window.halfspaces[p]:
                message = f"g^{k} maps {source.describe()} off window position {p}"
                setup_logger().error(message)
                raise InvariantViolation(message)
        copies.append(CopyInInterval(positions, translate, window))
        translate = multiply(ax.g, translate)
    return copies
