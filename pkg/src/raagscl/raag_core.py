"""Right-angled Artin group arithmetic.

Elements are kept in the shortlex-least linearization of their trace
(heap of pieces). Normalization piles letters on one stack per generator:
a letter pushes its sign onto its own stack and a blocking 0 onto the stack
of every generator it does not commute with, and cancels instead when its
own stack shows the inverse letter on top. Reading the stacks back from the
bottom, always taking the smallest generator whose bottom entry is a letter,
spells the canonical word.
"""

from __future__ import annotations

import re
from collections import deque
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx

from raagscl.errors import PresentationError
from raagscl.logger import setup_logger

_TOKEN = re.compile(r"^(?P<name>[A-Za-z_][A-Za-z0-9_]*)(?:\^(?P<exp>[+-]?\d+))?$")


@dataclass(frozen=True, eq=False)
class DefiningGraph:
    """Finite simplicial graph presenting a RAAG.

    Generators are referred to by their index in ``generators``; that order
    seeds every shortlex tie-break.
    """

    generators: tuple[str, ...]
    edges: frozenset[frozenset[str]]

    def __post_init__(self) -> None:
        if len(set(self.generators)) != len(self.generators):
            setup_logger().error(f"Duplicate generator names in {list(self.generators)}")
            raise PresentationError(f"Duplicate generator names in {list(self.generators)}")
        declared = set(self.generators)
        for edge in self.edges:
            if len(edge) != 2:
                setup_logger().error(f"Self-loop or malformed edge {sorted(edge)}")
                raise PresentationError(f"Self-loop or malformed edge {sorted(edge)}")
            unknown = edge - declared
            if unknown:
                setup_logger().error(f"Edge {sorted(edge)} uses undeclared {sorted(unknown)}")
                raise PresentationError(f"Edge {sorted(edge)} uses undeclared {sorted(unknown)}")

    @classmethod
    def from_names(
        cls, generators: Sequence[str], edges: Iterable[Sequence[str]] = ()
    ) -> DefiningGraph:
        """Build a graph from generator names and name pairs.

        Raises:
            PresentationError: If names repeat, an edge is a loop or uses an unknown name
        """
        pairs = []
        for edge in edges:
            if len(edge) != 2:
                setup_logger().error(f"Edge {list(edge)} must have exactly 2 endpoints")
                raise PresentationError(f"Edge {list(edge)} must have exactly 2 endpoints")
            pairs.append(frozenset(edge))
        return cls(tuple(generators), frozenset(pairs))

    @classmethod
    def free(cls, generators: Sequence[str]) -> DefiningGraph:
        """Edgeless graph: the free group."""
        return cls.from_names(generators)

    @classmethod
    def free_abelian(cls, generators: Sequence[str]) -> DefiningGraph:
        """Complete graph: the free abelian group."""
        names = list(generators)
        pairs = [(u, v) for i, u in enumerate(names) for v in names[i + 1 :]]
        return cls.from_names(names, pairs)

    @classmethod
    def path(cls, generators: Sequence[str]) -> DefiningGraph:
        """Path graph with consecutive generators adjacent."""
        names = list(generators)
        return cls.from_names(names, list(zip(names, names[1:], strict=False)))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, DefiningGraph):
            return NotImplemented
        return self.generators == other.generators and self.edges == other.edges

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.generators, self.edges))

    @property
    def rank(self) -> int:
        return len(self.generators)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.generators)}

    def index(self, name: str) -> int:
        """Return the id of a generator name.

        Raises:
            PresentationError: If the name is not a declared generator
        """
        try:
            return self._index[name]
        except KeyError:
            setup_logger().error(f"Unknown generator '{name}'")
            raise PresentationError(f"Unknown generator '{name}'") from None

    def name(self, generator: int) -> str:
        return self.generators[generator]

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        links: list[set[int]] = [set() for _ in self.generators]
        for edge in self.edges:
            u, v = (self._index[name] for name in edge)
            links[u].add(v)
            links[v].add(u)
        return tuple(frozenset(link) for link in links)

    @cached_property
    def blockers(self) -> tuple[tuple[int, ...], ...]:
        # generators that do not commute with v, v included
        return tuple(
            tuple(j for j in range(self.rank) if j not in self.adjacency[v])
            for v in range(self.rank)
        )

    def link(self, generator: int) -> frozenset[int]:
        """Generators adjacent to ``generator``."""
        return self.adjacency[generator]

    def commute(self, u: int, v: int) -> bool:
        """True iff u and v are distinct and adjacent."""
        return v in self.adjacency[u]

    def is_clique(self, subset: Iterable[int]) -> bool:
        members = sorted(subset)
        return all(self.commute(u, v) for i, u in enumerate(members) for v in members[i + 1 :])


@dataclass(frozen=True, slots=True)
class Letter:
    """A generator or its inverse."""

    generator: int
    sign: int  # +1 or -1

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            setup_logger().error(f"Letter sign must be +1 or -1, got {self.sign}")
            raise PresentationError(f"Letter sign must be +1 or -1, got {self.sign}")

    def inverse(self) -> Letter:
        return Letter(self.generator, -self.sign)

    @property
    def sort_key(self) -> tuple[int, int]:
        # +1 before -1 within a generator
        return (self.generator, 0 if self.sign > 0 else 1)


@dataclass(frozen=True)
class GroupElement:
    """A RAAG element in canonical normal form. Doubles as a cube complex vertex.

    Build these with normal_form() or the helpers below, never directly from
    an arbitrary letter sequence.
    """

    letters: tuple[Letter, ...]
    graph: DefiningGraph = field(repr=False)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_word(self.graph, self.letters)

    def __mul__(self, other: GroupElement) -> GroupElement:
        return multiply(self, other)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    @property
    def shortlex_key(self) -> tuple[int, tuple[tuple[int, int], ...]]:
        return (len(self.letters), tuple(letter.sort_key for letter in self.letters))

    def inverse(self) -> GroupElement:
        return invert(self)


def check_same_graph(*elements: GroupElement) -> DefiningGraph:
    graph = elements[0].graph
    for element in elements[1:]:
        if element.graph != graph:
            setup_logger().error("Elements belong to different defining graphs")
            raise PresentationError("Elements belong to different defining graphs")
    return graph


def normal_form(graph: DefiningGraph, raw: Iterable[Letter]) -> GroupElement:
    """Reduce and canonicalize a letter sequence.

    Args:
        graph: Ambient defining graph
        raw: Letters in any order, possibly unreduced

    Returns:
        The element in shortlex-least trace normal form

    Raises:
        PresentationError: If a letter uses an undeclared generator
    """
    rank = graph.rank
    blockers = graph.blockers
    piles: list[deque[int]] = [deque() for _ in range(rank)]
    size = 0

    for letter in raw:
        v = letter.generator
        if not 0 <= v < rank:
            setup_logger().error(f"Letter uses undeclared generator id {v}")
            raise PresentationError(f"Letter uses undeclared generator id {v}")
        pile = piles[v]
        if pile and pile[-1] == -letter.sign:
            for j in blockers[v]:
                piles[j].pop()
            size -= 1
        else:
            pile.append(letter.sign)
            for j in blockers[v]:
                if j != v:
                    piles[j].append(0)
            size += 1

    word: list[Letter] = []
    while size:
        v = next(j for j in range(rank) if piles[j] and piles[j][0])
        word.append(Letter(v, piles[v][0]))
        for j in blockers[v]:
            piles[j].popleft()
        size -= 1
    return GroupElement(tuple(word), graph)


def identity(graph: DefiningGraph) -> GroupElement:
    return GroupElement((), graph)


def letter_element(graph: DefiningGraph, generator: int, sign: int = 1) -> GroupElement:
    """The element spelled by a single letter."""
    return normal_form(graph, [Letter(generator, sign)])


def multiply(x: GroupElement, y: GroupElement) -> GroupElement:
    """Canonical form of x·y.

    Raises:
        PresentationError: If x and y come from different graphs
    """
    graph = check_same_graph(x, y)
    if not y.letters:
        return x
    if not x.letters:
        return y
    return normal_form(graph, x.letters + y.letters)


def invert(x: GroupElement) -> GroupElement:
    """Canonical form of x⁻¹."""
    return normal_form(x.graph, (letter.inverse() for letter in reversed(x.letters)))


def power(x: GroupElement, n: int) -> GroupElement:
    """x raised to an integer power."""
    base = x if n >= 0 else invert(x)
    return normal_form(x.graph, base.letters * abs(n))


def abelianization(x: GroupElement) -> tuple[int, ...]:
    """Exponent sum of each generator."""
    sums = [0] * x.graph.rank
    for letter in x.letters:
        sums[letter.generator] += letter.sign
    return tuple(sums)


def in_commutator_subgroup(x: GroupElement) -> bool:
    """RAAG abelianizations are free abelian, so [G,G] is the kernel of exponent sums."""
    return not any(abelianization(x))


@dataclass(frozen=True, eq=False)
class Heap:
    """Dependence order on the positions of a reduced word.

    ``order`` holds an arc i → j for i < j whenever the two letters share a
    generator or their generators do not commute. Closure and covers are
    computed on demand.
    """

    letters: tuple[Letter, ...]
    order: nx.DiGraph

    @classmethod
    def from_letters(cls, graph: DefiningGraph, letters: Sequence[Letter]) -> Heap:
        order = nx.DiGraph()
        order.add_nodes_from(range(len(letters)))
        for j, later in enumerate(letters):
            for i in range(j):
                if not graph.commute(letters[i].generator, later.generator):
                    order.add_edge(i, j)
        return cls(tuple(letters), order)

    def __len__(self) -> int:
        return len(self.letters)

    @cached_property
    def closure(self) -> nx.DiGraph:
        return nx.transitive_closure_dag(self.order)

    @cached_property
    def covers(self) -> nx.DiGraph:
        return nx.transitive_reduction(self.order)

    def _check(self, *positions: int) -> None:
        for position in positions:
            if not 0 <= position < len(self.letters):
                raise IndexError(f"Position {position} outside heap of size {len(self.letters)}")

    def precedes(self, i: int, j: int) -> bool:
        """Strict heap order i < j."""
        self._check(i, j)
        return bool(self.closure.has_edge(i, j))

    def comparable(self, i: int, j: int) -> bool:
        return i == j or self.precedes(i, j) or self.precedes(j, i)

    def is_cover(self, i: int, j: int) -> bool:
        """True iff i < j with nothing strictly between."""
        self._check(i, j)
        return bool(self.covers.has_edge(i, j))

    def successors(self, i: int) -> list[int]:
        """Positions covering i, ascending."""
        self._check(i)
        return sorted(self.covers.successors(i))

    def predecessors(self, i: int) -> list[int]:
        """Positions covered by i, ascending."""
        self._check(i)
        return sorted(self.covers.predecessors(i))

    def minimal(self) -> list[int]:
        return [i for i in range(len(self.letters)) if self.order.in_degree(i) == 0]

    def maximal(self) -> list[int]:
        return [i for i in range(len(self.letters)) if self.order.out_degree(i) == 0]

    def linear_extensions(self) -> Iterator[list[int]]:
        return nx.all_topological_sorts(self.order)


def heap_of(x: GroupElement) -> Heap:
    return Heap.from_letters(x.graph, x.letters)


def is_heap_maximal(graph: DefiningGraph, letters: Sequence[Letter], i: int) -> bool:
    v = letters[i].generator
    return all(graph.commute(v, later.generator) for later in letters[i + 1 :])


def is_heap_minimal(graph: DefiningGraph, letters: Sequence[Letter], i: int) -> bool:
    v = letters[i].generator
    return all(graph.commute(v, earlier.generator) for earlier in letters[:i])


def strip_parabolic_right(x: GroupElement, subset: Iterable[int]) -> GroupElement:
    """Minimal-length representative of the coset x·⟨subset⟩.

    Repeatedly deletes heap-maximal letters whose generator is in the subset.
    """
    allowed = frozenset(subset)
    letters = list(x.letters)
    while True:
        for i in range(len(letters) - 1, -1, -1):
            if letters[i].generator in allowed and is_heap_maximal(x.graph, letters, i):
                del letters[i]
                break
        else:
            break
    if len(letters) == len(x.letters):
        return x
    return normal_form(x.graph, letters)


def in_same_coset(x: GroupElement, y: GroupElement, subset: Iterable[int]) -> bool:
    """True iff x·⟨subset⟩ = y·⟨subset⟩."""
    check_same_graph(x, y)
    allowed = frozenset(subset)
    return strip_parabolic_right(x, allowed) == strip_parabolic_right(y, allowed)


def coset_intersection(
    c0: GroupElement, a_subset: Iterable[int], c1: GroupElement, b_subset: Iterable[int]
) -> GroupElement | None:
    """Some element of c0·⟨A⟩ ∩ c1·⟨B⟩, or None if they are disjoint.

    The cosets meet iff c0⁻¹c1 ∈ ⟨A⟩⟨B⟩. Stripping B on the right leaves the
    minimal representative of c0⁻¹c1·⟨B⟩, which lies in ⟨A⟩ exactly when the
    product decomposition exists.
    """
    check_same_graph(c0, c1)
    a_allowed = frozenset(a_subset)
    remainder = strip_parabolic_right(multiply(invert(c0), c1), b_subset)
    if any(letter.generator not in a_allowed for letter in remainder.letters):
        return None
    return multiply(c0, remainder)


def iter_ball(graph: DefiningGraph, subset: Iterable[int], radius: int) -> Iterator[GroupElement]:
    """Elements of ⟨subset⟩ of length ≤ radius, by length then shortlex."""
    generators = sorted(frozenset(subset))
    steps = [Letter(v, sign) for v in generators for sign in (1, -1)]
    layer = [identity(graph)]
    seen = set(layer)
    yield from layer
    for length in range(1, radius + 1):
        grown = set()
        for x in layer:
            for step in steps:
                y = normal_form(graph, x.letters + (step,))
                if len(y) == length and y not in seen:
                    grown.add(y)
        if not grown:
            return
        layer = sorted(grown, key=lambda element: element.shortlex_key)
        seen.update(layer)
        yield from layer


Constraint = tuple[GroupElement, GroupElement, frozenset[int]]


def translate_witness(constraints: Sequence[Constraint], radius: int) -> GroupElement | None:
    """Find g with g·aᵢ·⟨Sᵢ⟩ = bᵢ·⟨Sᵢ⟩ for every constraint (aᵢ, bᵢ, Sᵢ).

    Candidates are g = b₀·ℓ·a₀⁻¹ for ℓ ∈ ⟨S₀⟩ with |ℓ| ≤ radius, tried by
    length then shortlex. Every returned g satisfies all constraints; None
    only means nothing was found within the radius.

    Raises:
        ValueError: If constraints is empty
    """
    if not constraints:
        setup_logger().error("translate_witness needs at least one constraint")
        raise ValueError("translate_witness needs at least one constraint")
    a0, b0, pivot = constraints[0]
    graph = check_same_graph(a0, b0, *(element for a, b, _ in constraints for element in (a, b)))
    a0_inverse = invert(a0)
    for ell in iter_ball(graph, pivot, radius):
        g = multiply(multiply(b0, ell), a0_inverse)
        if all(in_same_coset(multiply(g, a), b, subset) for a, b, subset in constraints):
            return g
    return None


def parse_word(graph: DefiningGraph, text: str) -> list[Letter]:
    """Parse whitespace-separated tokens like ``a``, ``b^-1`` or ``a^3``.

    ``1`` or an empty string denotes the identity.

    Raises:
        PresentationError: If a token is malformed or names an unknown generator
    """
    letters: list[Letter] = []
    for token in text.replace("⁻¹", "^-1").split():
        if token == "1":
            continue
        match = _TOKEN.match(token)
        if match is None:
            setup_logger().error(f"Malformed word token '{token}'")
            raise PresentationError(f"Malformed word token '{token}'")
        generator = graph.index(match.group("name"))
        exponent = int(match.group("exp") or 1)
        sign = 1 if exponent > 0 else -1
        letters.extend(Letter(generator, sign) for _ in range(abs(exponent)))
    return letters


def element_from_word(graph: DefiningGraph, text: str) -> GroupElement:
    """Parse and normalize a word string."""
    return normal_form(graph, parse_word(graph, text))


def format_word(graph: DefiningGraph, letters: Sequence[Letter]) -> str:
    """Render letters as tokens; the empty word renders as ``1``."""
    if not letters:
        return "1"
    return " ".join(
        graph.name(letter.generator) + ("" if letter.sign > 0 else "^-1") for letter in letters
    )
