"""Halfspace combinatorics of the RAAG cube complex.

Vertices are group elements and the edge from g to g·v is labelled v. The
hyperplane dual to that edge is named by (v, shortest element of g·⟨lk(v)⟩);
its positive side is the one containing base·v.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

from raagscl.errors import InvariantViolation, PresentationError
from raagscl.logger import setup_logger
from raagscl.raag_core import (
    GroupElement,
    Heap,
    Letter,
    check_same_graph,
    coset_intersection,
    invert,
    is_heap_minimal,
    multiply,
    normal_form,
    strip_parabolic_right,
)


class HalfspaceRelation(Enum):
    """How two halfspaces sit relative to each other."""

    EQUAL = "equal"
    COMPLEMENT_EQUAL = "complement_equal"
    TRANSVERSE = "transverse"
    FIRST_CONTAINS_SECOND = "first_contains_second"  # Φ ⊋ Ψ
    SECOND_CONTAINS_FIRST = "second_contains_first"  # Φ ⊊ Ψ
    FIRST_CONTAINS_COMPLEMENT = "first_contains_complement"  # Φ ⊋ Ψ̄
    COMPLEMENT_CONTAINS_FIRST = "complement_contains_first"  # Φ ⊊ Ψ̄

    @property
    def is_nesting(self) -> bool:
        return self not in (
            HalfspaceRelation.EQUAL,
            HalfspaceRelation.COMPLEMENT_EQUAL,
            HalfspaceRelation.TRANSVERSE,
        )


@dataclass(frozen=True)
class Hyperplane:
    label: int  # generator id
    base: GroupElement  # already stripped by lk(label)


@dataclass(frozen=True)
class Halfspace:
    hyperplane: Hyperplane
    sign: int  # +1: side containing base·label

    @property
    def label(self) -> int:
        return self.hyperplane.label

    @property
    def base(self) -> GroupElement:
        return self.hyperplane.base

    def complement(self) -> Halfspace:
        return Halfspace(self.hyperplane, -self.sign)

    def describe(self) -> str:
        graph = self.base.graph
        sign = "+" if self.sign > 0 else "-"
        return f"{sign}{graph.name(self.label)}@[{self.base}]"


def complement(halfspace: Halfspace) -> Halfspace:
    return halfspace.complement()


def _step(vertex: GroupElement, letter: Letter) -> GroupElement:
    return normal_form(vertex.graph, vertex.letters + (letter,))


def hyperplane_of_edge(lower: GroupElement, label: int) -> Hyperplane:
    """Hyperplane dual to the edge from ``lower`` to lower·label."""
    return Hyperplane(label, strip_parabolic_right(lower, lower.graph.link(label)))


def halfspace_of_step(vertex: GroupElement, letter: Letter) -> Halfspace:
    """Halfspace entered by walking from ``vertex`` along ``letter``."""
    lower = vertex if letter.sign > 0 else _step(vertex, letter)
    return Halfspace(hyperplane_of_edge(lower, letter.generator), letter.sign)


def side_vertex(halfspace: Halfspace) -> GroupElement:
    """A vertex of the halfspace adjacent to its hyperplane.

    The carrier vertices on that side form the coset side_vertex·⟨lk(label)⟩.
    """
    if halfspace.sign > 0:
        return _step(halfspace.base, Letter(halfspace.label, 1))
    return halfspace.base


def distance(x: GroupElement, y: GroupElement) -> int:
    """Combinatorial distance: the length of x⁻¹y."""
    check_same_graph(x, y)
    return len(multiply(invert(x), y))


@dataclass(frozen=True)
class Interval:
    """The halfspaces containing ``target`` but not ``source``.

    Positions follow ``letters``, a reduced word for source⁻¹·target; the
    heap of that word orders them by containment.
    """

    source: GroupElement
    target: GroupElement
    letters: tuple[Letter, ...]
    heap: Heap = field(compare=False, repr=False)
    halfspaces: tuple[Halfspace, ...] = field(compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.halfspaces)

    @cached_property
    def _positions(self) -> dict[Halfspace, int]:
        return {halfspace: i for i, halfspace in enumerate(self.halfspaces)}

    def position_of(self, halfspace: Halfspace) -> int | None:
        return self._positions.get(halfspace)

    def contains(self, halfspace: Halfspace) -> bool:
        return halfspace in self._positions

    def relation_at(self, i: int, j: int) -> HalfspaceRelation:
        """Relation of positions i and j read off the heap."""
        if i == j:
            return HalfspaceRelation.EQUAL
        if self.heap.precedes(i, j):
            return HalfspaceRelation.FIRST_CONTAINS_SECOND
        if self.heap.precedes(j, i):
            return HalfspaceRelation.SECOND_CONTAINS_FIRST
        return HalfspaceRelation.TRANSVERSE


def interval_along(source: GroupElement, letters: Sequence[Letter]) -> Interval:
    """Interval from ``source`` to source·letters, indexed along the given word.

    Raises:
        ValueError: If ``letters`` is not a reduced word
    """
    graph = source.graph
    word = tuple(letters)
    vertex = source
    halfspaces = []
    for letter in word:
        halfspaces.append(halfspace_of_step(vertex, letter))
        vertex = _step(vertex, letter)
    if len(normal_form(graph, word)) != len(word):
        setup_logger().error(f"Word '{normal_form(graph, word)}' has cancellation; not reduced")
        raise ValueError(f"Word '{normal_form(graph, word)}' has cancellation; not reduced")
    return Interval(source, vertex, word, Heap.from_letters(graph, word), tuple(halfspaces))


def interval(x: GroupElement, y: GroupElement) -> Interval:
    """The interval [x, y], positions in canonical order of x⁻¹y."""
    check_same_graph(x, y)
    return interval_along(x, multiply(invert(x), y).letters)


def hyperplane_crosses(hyperplane: Hyperplane, x: GroupElement, y: GroupElement) -> bool:
    """True iff the hyperplane separates x from y."""
    check_same_graph(x, y, hyperplane.base)
    vertex = x
    for letter in multiply(invert(x), y).letters:
        if (
            letter.generator == hyperplane.label
            and halfspace_of_step(vertex, letter).hyperplane == hyperplane
        ):
            return True
        vertex = _step(vertex, letter)
    return False


def member(x: GroupElement, halfspace: Halfspace) -> bool:
    """True iff vertex x lies in the halfspace."""
    crossed = hyperplane_crosses(halfspace.hyperplane, halfspace.base, x)
    return crossed == (halfspace.sign > 0)


def hyperplanes_cross(first: Hyperplane, second: Hyperplane) -> bool:
    """Distinct hyperplanes cross iff some square has edges dual to both.

    Such a square has a corner z with z·⟨lk(v)⟩ = first's coset and
    z·⟨lk(w)⟩ = second's, and exists only for commuting labels v, w.
    """
    graph = check_same_graph(first.base, second.base)
    if not graph.commute(first.label, second.label):
        return False
    corner = coset_intersection(
        first.base, graph.link(first.label), second.base, graph.link(second.label)
    )
    return corner is not None


def relation(first: Halfspace, second: Halfspace) -> HalfspaceRelation:
    """Classify a pair of halfspaces.

    For disjoint hyperplanes H₁, H₂ let σ₁ be the side of H₁ holding H₂ and
    σ₂ the side of H₂ holding H₁. Then (H₁, −σ₁) ⊆ (H₂, σ₂), and the two
    signs pick which of the four containments is meant:

        first.sign  second.sign   relation
        −σ₁         σ₂            SECOND_CONTAINS_FIRST
        σ₁          −σ₂           FIRST_CONTAINS_SECOND
        −σ₁         −σ₂           COMPLEMENT_CONTAINS_FIRST
        σ₁          σ₂            FIRST_CONTAINS_COMPLEMENT
    """
    h1, h2 = first.hyperplane, second.hyperplane
    check_same_graph(h1.base, h2.base)
    if h1 == h2:
        return (
            HalfspaceRelation.EQUAL
            if first.sign == second.sign
            else HalfspaceRelation.COMPLEMENT_EQUAL
        )
    if hyperplanes_cross(h1, h2):
        return HalfspaceRelation.TRANSVERSE

    sigma1 = 1 if member(h2.base, Halfspace(h1, 1)) else -1
    sigma2 = 1 if member(h1.base, Halfspace(h2, 1)) else -1
    outer = first.sign == sigma1
    inner = second.sign == sigma2
    if not outer and inner:
        return HalfspaceRelation.SECOND_CONTAINS_FIRST
    if outer and not inner:
        return HalfspaceRelation.FIRST_CONTAINS_SECOND
    if not outer and not inner:
        return HalfspaceRelation.COMPLEMENT_CONTAINS_FIRST
    return HalfspaceRelation.FIRST_CONTAINS_COMPLEMENT


def tightly_nested_in(within: Interval, i: int, j: int) -> bool:
    """True iff position i covers position j in the interval's heap.

    Any halfspace strictly between two members of an interval is itself a
    member, so the cover relation is the global answer.

    Raises:
        ValueError: If i == j
        IndexError: If a position is out of range
    """
    if i == j:
        setup_logger().error("tightly_nested_in needs two distinct positions")
        raise ValueError("tightly_nested_in needs two distinct positions")
    return within.heap.is_cover(i, j)


def tightly_nested(outer: Halfspace, inner: Halfspace) -> bool:
    """True iff outer ⊋ inner with no halfspace strictly between."""
    if relation(outer, inner) is not HalfspaceRelation.FIRST_CONTAINS_SECOND:
        return False
    ambient = interval(side_vertex(outer.complement()), side_vertex(inner))
    i, j = ambient.position_of(outer), ambient.position_of(inner)
    if i is None or j is None:
        message = f"{outer.describe()} ⊋ {inner.describe()} but not both in their ambient interval"
        setup_logger().error(message)
        raise InvariantViolation(message)
    return ambient.heap.is_cover(i, j)


def _meet(u: GroupElement, w: GroupElement) -> GroupElement:
    # largest common prefix trace: pull common heap-minimal letters off both words
    graph = u.graph
    left, right = list(u.letters), list(w.letters)
    common: list[Letter] = []
    while True:
        leading = {
            letter: i for i, letter in enumerate(left) if is_heap_minimal(graph, left, i)
        }
        for j, letter in enumerate(right):
            if letter in leading and is_heap_minimal(graph, right, j):
                del left[leading[letter]]
                del right[j]
                common.append(letter)
                break
        else:
            break
    return normal_form(graph, common)


def median(x: GroupElement, y: GroupElement, z: GroupElement) -> GroupElement:
    """The unique vertex on geodesics between each pair of x, y, z."""
    check_same_graph(x, y, z)
    x_inverse = invert(x)
    return multiply(x, _meet(multiply(x_inverse, y), multiply(x_inverse, z)))


def translate_halfspace(g: GroupElement, halfspace: Halfspace) -> Halfspace:
    """The halfspace g·Φ. Translation keeps label and sign."""
    if g.graph != halfspace.base.graph:
        setup_logger().error("Element and halfspace belong to different defining graphs")
        raise PresentationError("Element and halfspace belong to different defining graphs")
    if g.is_identity:
        return halfspace
    return Halfspace(hyperplane_of_edge(multiply(g, halfspace.base), halfspace.label), halfspace.sign)
