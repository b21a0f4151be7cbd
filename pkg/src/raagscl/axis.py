"""Translation length and axis windows of RAAG elements."""

from __future__ import annotations

from dataclasses import dataclass

from raagscl.cube_geom import Interval, interval_along
from raagscl.errors import InvariantViolation, NotApplicableError
from raagscl.logger import setup_logger
from raagscl.raag_core import (
    GroupElement,
    Letter,
    identity,
    invert,
    is_heap_maximal,
    is_heap_minimal,
    letter_element,
    multiply,
    normal_form,
    power,
)

PERIODICITY_CHECK = 6  # powers checked for d(o, gⁿo) = n·delta


@dataclass(frozen=True)
class AxisData:
    """g = h·c·h⁻¹ with c cyclically reduced; o = h realizes the translation length."""

    g: GroupElement
    conjugator: GroupElement  # h
    core: GroupElement  # c
    delta: int  # |c|

    @property
    def base_vertex(self) -> GroupElement:
        return self.conjugator

    @property
    def is_hyperbolic(self) -> bool:
        return self.delta > 0


@dataclass(frozen=True)
class AxisWindow:
    """The interval [gˢo, gᵐo] laid out along the word c^(m−s)."""

    axis: AxisData
    n_from: int
    n_to: int
    interval: Interval
    blocks: tuple[int, ...]  # k such that the position lies in [gᵏo, gᵏ⁺¹o]

    def block_of(self, position: int) -> int:
        return self.blocks[position]

    def positions_in_block(self, block: int) -> range:
        """Positions of [gᵏo, gᵏ⁺¹o] inside the window."""
        if not self.n_from <= block < self.n_to:
            return range(0)
        offset = (block - self.n_from) * self.axis.delta
        return range(offset, offset + self.axis.delta)


def _cancelling_letter(core: GroupElement) -> Letter | None:
    letters = core.letters
    graph = core.graph
    for i, letter in enumerate(letters):
        if not is_heap_minimal(graph, letters, i):
            continue
        for j in range(len(letters) - 1, -1, -1):
            if (
                j != i
                and letters[j] == letter.inverse()
                and is_heap_maximal(graph, letters, j)
            ):
                return letter
    return None


def cyclically_reduce(g: GroupElement) -> AxisData:
    """Conjugate g to a cyclically reduced core.

    While some heap-minimal letter ℓ of c has ℓ⁻¹ at a heap-maximal
    position, c becomes ℓ⁻¹·c·ℓ and ℓ joins the conjugator.

    Raises:
        InvariantViolation: If d(o, gⁿo) ≠ n·delta for some n ≤ 6
    """
    logger = setup_logger()
    graph = g.graph
    conjugator = identity(graph)
    core = g
    while (letter := _cancelling_letter(core)) is not None:
        core = normal_form(graph, (letter.inverse(), *core.letters, letter))
        conjugator = multiply(conjugator, letter_element(graph, letter.generator, letter.sign))

    if multiply(conjugator, multiply(core, invert(conjugator))) != g:
        logger.error(f"Cyclic reduction of '{g}' does not conjugate back")
        raise InvariantViolation(f"Cyclic reduction of '{g}' does not conjugate back")

    delta = len(core)
    for n in range(1, PERIODICITY_CHECK + 1):
        length = len(power(core, n))
        if length != n * delta:
            logger.error(f"Periodicity failed for '{g}': |c^{n}| = {length}, expected {n * delta}")
            raise InvariantViolation(
                f"Periodicity failed for '{g}': d(o, g^{n} o) = {length}, expected {n * delta}"
            )

    logger.debug(f"Axis of '{g}': h = '{conjugator}', c = '{core}', delta = {delta}")
    return AxisData(g, conjugator, core, delta)


def axis_window(ax: AxisData, n: int, start: int = 0) -> AxisWindow:
    """The window [gˢo, gˢ⁺ⁿo] of the axis halfspaces.

    Raises:
        NotApplicableError: If g is the identity (the only elliptic element)
        ValueError: If n is negative
    """
    if not ax.is_hyperbolic:
        setup_logger().error("Axis window requested for the identity")
        raise NotApplicableError("The identity is elliptic; it has no axis")
    if n < 0:
        setup_logger().error(f"Window length must be >= 0, got {n}")
        raise ValueError(f"Window length must be >= 0, got {n}")
    source = multiply(ax.conjugator, power(ax.core, start))
    window = interval_along(source, ax.core.letters * n)
    blocks = tuple(start + i // ax.delta for i in range(n * ax.delta))
    return AxisWindow(ax, start, start + n, window, blocks)
