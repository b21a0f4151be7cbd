"""Sampled property suites and the oracle cross-check.

Each suite draws its instances from a seeded ``random.Random`` so a run is
reproducible from its RunConfig. Failures are collected as report content
with the words that produced them; nothing here raises on a failed check.
"""

from __future__ import annotations

import random
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from functools import partial
from itertools import combinations, product
from typing import Any

from raagscl.axis import axis_window, cyclically_reduce
from raagscl.config import RunConfig
from raagscl.counting_qm import (
    Segment,
    check_lesser_or_greater,
    check_maximal_characterisation,
    enumerate_copies,
    find_maximal_g_nested,
    is_g_nested,
    make_segment,
    omega,
    phi,
    reverse_segment,
)
from raagscl.cube_geom import (
    Halfspace,
    HalfspaceRelation,
    Interval,
    distance,
    halfspace_of_step,
    interval,
    median,
    member,
    relation,
    tightly_nested,
    translate_halfspace,
)
from raagscl.errors import InvariantViolation
from raagscl.graph_io import resolve_graph
from raagscl.logger import setup_logger
from raagscl.oracle import (
    BallComplex,
    OracleVerdict,
    build_ball,
    chain_of_witness,
    oracle_copies,
    oracle_coset_min,
    oracle_distance,
    oracle_median,
    oracle_raag_like_violations,
    oracle_relation,
    oracle_side,
    oracle_tightly_nested,
)
from raagscl.raag_core import (
    DefiningGraph,
    GroupElement,
    Letter,
    identity,
    invert,
    multiply,
    normal_form,
    power,
    strip_parabolic_right,
)

MAX_WORD_LENGTH = 8
WINDOW_POWERS = 3
MAX_FAILURES_KEPT = 10

RelationFn = Callable[[Halfspace, Halfspace], HalfspaceRelation]


@dataclass
class SuiteResult:
    """Outcome of one named check run over many instances."""

    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, counterexample: str) -> None:
        self.checked += 1
        if not ok and len(self.failures) < MAX_FAILURES_KEPT:
            self.failures.append(counterexample)


@dataclass
class Report:
    title: str
    suites: list[SuiteResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(suite.passed for suite in self.suites)

    def suite(self, name: str) -> SuiteResult:
        for existing in self.suites:
            if existing.name == name:
                return existing
        created = SuiteResult(name)
        self.suites.append(created)
        return created

    def to_dict(self) -> dict[str, Any]:
        return {
            "title": self.title,
            "passed": self.passed,
            "suites": [
                {"name": s.name, "checked": s.checked, "passed": s.passed, "failures": s.failures}
                for s in self.suites
            ],
        }

    def render(self) -> str:
        lines = [self.title]
        for suite in self.suites:
            status = "PASS" if suite.passed else "FAIL"
            lines.append(f"  {status} {suite.name} ({suite.checked} checked)")
            lines.extend(f"      counterexample: {failure}" for failure in suite.failures)
        if not self.suites:
            lines.append("  (no checks run)")
        return "\n".join(lines)


def random_word(rng: random.Random, graph: DefiningGraph, length: int) -> list[Letter]:
    return [Letter(rng.randrange(graph.rank), rng.choice((1, -1))) for _ in range(length)]


def random_element(
    rng: random.Random, graph: DefiningGraph, max_length: int = MAX_WORD_LENGTH
) -> GroupElement:
    return normal_form(graph, random_word(rng, graph, rng.randint(0, max_length)))


def random_nonidentity(
    rng: random.Random, graph: DefiningGraph, max_length: int = MAX_WORD_LENGTH
) -> GroupElement:
    while True:
        g = random_element(rng, graph, max(max_length, 1))
        if not g.is_identity:
            return g


def random_segment(
    rng: random.Random, graph: DefiningGraph, max_length: int = 4, max_size: int = 3
) -> Segment:
    """A random chain of heap covers inside [1, g] for a short random g."""
    within = interval(identity(graph), random_nonidentity(rng, graph, max_length))
    chain = [rng.randrange(len(within))]
    while len(chain) < max_size and (following := within.heap.successors(chain[-1])):
        chain.append(rng.choice(following))
    return make_segment(within, chain)


def _guarded(suite: SuiteResult, label: str, check: Callable[[], bool]) -> None:
    try:
        ok = check()
    except (InvariantViolation, ValueError) as e:
        suite.record(False, f"{label}: {type(e).__name__}: {e}")
        return
    suite.record(ok, label)


def _normal_form_checks(rng: random.Random, graph: DefiningGraph, report: Report) -> None:
    raw = random_word(rng, graph, rng.randint(0, MAX_WORD_LENGTH))
    x = normal_form(graph, raw)
    y, z = random_element(rng, graph), random_element(rng, graph)
    label = f"x = '{x}', y = '{y}', z = '{z}'"
    _guarded(
        report.suite("normal_form"),
        label,
        lambda: normal_form(graph, x.letters) == x
        and len(x) <= len(raw)
        and multiply(x, invert(x)).is_identity
        and multiply(multiply(x, y), z) == multiply(x, multiply(y, z)),
    )


def _median_checks(rng: random.Random, graph: DefiningGraph, report: Report) -> None:
    x, y, z = (random_element(rng, graph) for _ in range(3))

    def check() -> bool:
        m = median(x, y, z)
        on_geodesics = all(
            distance(p, m) + distance(m, q) == distance(p, q) for p, q in ((x, y), (y, z), (x, z))
        )
        return on_geodesics and median(z, x, y) == m and median(y, z, x) == m

    _guarded(report.suite("median"), f"x = '{x}', y = '{y}', z = '{z}'", check)


def _raag_like_checks(rng: random.Random, graph: DefiningGraph, report: Report) -> None:
    gamma = random_segment(rng, graph, max_size=2)
    phi_0 = gamma.first
    h = random_element(rng, graph)
    label = f"halfspaces {gamma.describe()}, h = '{h}'"
    _guarded(
        report.suite("raag_like_no_inversions"),
        label,
        lambda: translate_halfspace(h, phi_0.complement()) != phi_0,
    )
    _guarded(
        report.suite("raag_like_non_transverse"),
        label,
        lambda: relation(phi_0, translate_halfspace(h, phi_0)) is not HalfspaceRelation.TRANSVERSE,
    )
    if len(gamma) == 2:
        _guarded(
            report.suite("raag_like_tight_pairs"),
            label,
            lambda: relation(phi_0, translate_halfspace(h, gamma.last))
            is not HalfspaceRelation.TRANSVERSE,
        )
    _guarded(
        report.suite("raag_like_no_tight_self_nesting"),
        label,
        lambda: not tightly_nested(translate_halfspace(h, phi_0.complement()), phi_0),
    )


def _axis_checks(rng: random.Random, graph: DefiningGraph, report: Report) -> None:
    g = random_nonidentity(rng, graph)
    label = f"g = '{g}'"

    def hyperbolic() -> bool:
        ax = cyclically_reduce(g)
        o = ax.base_vertex
        return ax.delta >= 1 and all(
            distance(o, multiply(power(g, n), o)) == n * ax.delta for n in range(1, 7)
        )

    def window() -> bool:
        ax = cyclically_reduce(g)
        span = axis_window(ax, WINDOW_POWERS).interval
        oriented = all(
            member(span.target, h) and not member(span.source, h) for h in span.halfspaces
        )
        shifted = all(
            translate_halfspace(g, span.halfspaces[p]) == span.halfspaces[p + ax.delta]
            for p in range(len(span) - ax.delta)
        )
        return oriented and shifted

    _guarded(report.suite("hyperbolicity"), label, hyperbolic)
    _guarded(report.suite("axis_window"), label, window)


def _defect_checks(rng: random.Random, graph: DefiningGraph, report: Report) -> None:
    gamma = random_segment(rng, graph)
    x, y, z = (random_element(rng, graph) for _ in range(3))
    g, h = random_element(rng, graph), random_element(rng, graph)
    label = f"segment {gamma.describe()}, x = '{x}', y = '{y}', z = '{z}', g = '{g}', h = '{h}'"

    def median_defect() -> bool:
        m = median(x, y, z)
        whole, left, right = omega(gamma, x, y), omega(gamma, x, m), omega(gamma, m, y)
        per_count = all(
            abs(getattr(whole, part) - getattr(left, part) - getattr(right, part)) <= 1
            for part in ("c_forward", "c_reverse")
        )
        return per_count and abs(whole.omega - left.omega - right.omega) <= 2

    def triangle() -> bool:
        total = omega(gamma, x, y).omega + omega(gamma, y, z).omega + omega(gamma, z, x).omega
        return abs(total) <= 6

    def quasimorphism() -> bool:
        o = identity(graph)
        return abs(phi(gamma, o, multiply(g, h)) - phi(gamma, o, g) - phi(gamma, o, h)) <= 6

    _guarded(report.suite("median_defect"), label, median_defect)
    _guarded(report.suite("triangle_defect"), label, triangle)
    _guarded(report.suite("quasimorphism_defect"), label, quasimorphism)
    _guarded(
        report.suite("antisymmetry"),
        label,
        lambda: omega(gamma, x, y).omega == -omega(gamma, y, x).omega,
    )
    _guarded(
        report.suite("g_invariance"),
        label,
        lambda: omega(gamma, x, y) == omega(gamma, multiply(g, x), multiply(g, y)),
    )


def _structural_checks(rng: random.Random, graph: DefiningGraph, report: Report) -> None:
    g = random_nonidentity(rng, graph)
    label = f"g = '{g}'"
    maximal = report.suite("maximal_g_nested")
    try:
        ax = cyclically_reduce(g)
        gamma = find_maximal_g_nested(ax)
    except (InvariantViolation, ValueError) as e:
        maximal.record(False, f"{label}: {type(e).__name__}: {e}")
        return
    _guarded(
        maximal, label, lambda: is_g_nested(gamma, ax) and check_maximal_characterisation(gamma, ax)
    )

    def no_reverse_copy() -> bool:
        span = axis_window(ax, WINDOW_POWERS, start=-1).interval
        return not enumerate_copies(reverse_segment(gamma), span)

    _guarded(report.suite("no_reverse_copy_on_axis"), label, no_reverse_copy)


def reflecting_elements(graph: DefiningGraph) -> list[GroupElement]:
    """[u, v] and u v⁻¹ u v for every non-commuting pair of generators.

    Their axes cross walls of both orientations, so reversed segments have
    copies on them. A complete graph gives none: translations of a free
    abelian group never flip a halfspace.
    """
    elements = []
    for u, v in combinations(range(graph.rank), 2):
        if graph.commute(u, v):
            continue
        elements.append(
            normal_form(graph, [Letter(u, 1), Letter(v, 1), Letter(u, -1), Letter(v, -1)])
        )
        elements.append(
            normal_form(graph, [Letter(u, 1), Letter(v, -1), Letter(u, 1), Letter(v, 1)])
        )
    return elements


def _lesser_or_greater_checks(graph: DefiningGraph, report: Report) -> None:
    elements = reflecting_elements(graph)
    if not elements:
        return
    suite = report.suite("lesser_or_greater")
    for g in elements:
        window = axis_window(cyclically_reduce(g), WINDOW_POWERS)
        for alpha in _cover_chains(window.interval):
            label = f"g = '{g}', alpha = {alpha.describe()}"
            try:
                reflections = enumerate_copies(reverse_segment(alpha), window.interval)
            except (InvariantViolation, ValueError) as e:
                suite.record(False, f"{label}: {type(e).__name__}: {e}")
                continue
            for copy in reflections:
                check = partial(check_lesser_or_greater, alpha, copy.witness, window)
                _guarded(suite, f"{label}, h = '{copy.witness}'", check)
    if suite.checked == 0:
        suite.record(False, "no reversed copy found on any commutator axis")


def property_suites(config: RunConfig, graph: DefiningGraph | None = None) -> Report:
    """Run every sampled invariant suite ``config.samples`` times.

    Returns:
        Report with one SuiteResult per check; empty when samples is 0
    """
    logger = setup_logger()
    if graph is None:
        graph = resolve_graph(config.graph_path, config.fixture)
    report = Report(f"Property suites (samples={config.samples}, seed={config.seed})")
    rng = random.Random(config.seed)
    for _ in range(config.samples):
        _normal_form_checks(rng, graph, report)
        _median_checks(rng, graph, report)
        _raag_like_checks(rng, graph, report)
        _axis_checks(rng, graph, report)
        _defect_checks(rng, graph, report)
        _structural_checks(rng, graph, report)
    if config.samples > 0:
        _lesser_or_greater_checks(graph, report)
    for suite in report.suites:
        if suite.passed:
            logger.info(f"Suite {suite.name}: {suite.checked} checked, all passed")
        else:
            logger.warning(f"Suite {suite.name}: {len(suite.failures)} failures")
    return report


def _interior(ball: BallComplex, depth: int) -> list[GroupElement]:
    return [vertex for vertex in ball.vertices if ball.depth[vertex] <= depth]


def _interior_halfspaces(ball: BallComplex, depth: int) -> Iterator[Halfspace]:
    for tail, v in ball.edges:
        if ball.depth[tail] < depth and ball.depth[ball.head((tail, v))] <= depth:
            positive = halfspace_of_step(tail, Letter(v, 1))
            yield positive
            yield positive.complement()


def _compare(report: Report, name: str, verdict: OracleVerdict, expected: Any, label: str) -> None:
    if verdict.interior_safe:
        report.suite(name).record(verdict.answer == expected, label)


def oracle_crosscheck(
    config: RunConfig,
    graph: DefiningGraph | None = None,
    relation_fn: RelationFn = relation,
) -> Report:
    """Compare the fast path with the ball oracle on every interior-safe query.

    Args:
        config: Run settings; ``oracle_radius`` and ``ball_cap`` size the ball
        graph: Overrides the graph named by ``config``
        relation_fn: Fast-path relation under test; replaceable for fault injection

    Returns:
        Report of mismatches per query kind; empty when the radius is 0
    """
    logger = setup_logger()
    if graph is None:
        graph = resolve_graph(config.graph_path, config.fixture)
    radius = config.oracle_radius
    report = Report(f"Oracle cross-check (radius={radius})")
    if radius == 0:
        return report

    ball = build_ball(graph, radius, config.ball_cap)
    near = _interior(ball, radius // 2)
    halfspaces = list(dict.fromkeys(_interior_halfspaces(ball, radius // 2)))

    for x, y in product(near, repeat=2):
        _compare(report, "distance", oracle_distance(ball, x, y), distance(x, y), f"'{x}', '{y}'")

    for x, y, z in product(_interior(ball, radius // 3), repeat=3):
        label = f"'{x}', '{y}', '{z}'"
        try:
            verdict = oracle_median(ball, x, y, z)
        except InvariantViolation as e:
            report.suite("median").record(False, f"{label}: {e}")
            continue
        _compare(report, "median", verdict, median(x, y, z), label)

    for x, halfspace in product(near, halfspaces):
        verdict = oracle_side(ball, x, halfspace)
        _compare(report, "side", verdict, member(x, halfspace), f"'{x}' in {halfspace.describe()}")

    for first, second in product(halfspaces, repeat=2):
        label = f"{first.describe()} vs {second.describe()}"
        verdict = oracle_relation(ball, first, second)
        _compare(report, "relation", verdict, relation_fn(first, second), label)
        if verdict.answer is HalfspaceRelation.FIRST_CONTAINS_SECOND:
            tight = oracle_tightly_nested(ball, first, second)
            _compare(report, "tightly_nested", tight, tightly_nested(first, second), label)

    for x, v in product(near, range(graph.rank)):
        subset = graph.link(v)
        verdict = oracle_coset_min(ball, x, subset)
        label = f"'{x}' by lk({graph.name(v)})"
        _compare(report, "coset_min", verdict, strip_parabolic_right(x, subset), label)

    for seed, y in product(_segment_seeds(graph), near):
        within = interval(identity(graph), y)
        for gamma in _segments_at(seed):
            verdict = oracle_copies(ball, gamma, identity(graph), y)
            if not verdict.interior_safe:
                continue
            expected = {chain_of_witness(gamma, g) for g in verdict.answer}
            found = {copy.halfspaces for copy in enumerate_copies(gamma, within)}
            label = f"segment {gamma.describe()} in [1, '{y}']"
            report.suite("copies").record(expected == found, label)

    violations = oracle_raag_like_violations(ball)
    suite = report.suite("raag_like_exhaustive")
    suite.checked = len(ball.hyperplane_classes)
    suite.failures.extend(violations[:MAX_FAILURES_KEPT])

    mismatches = sum(len(s.failures) for s in report.suites)
    logger.info(f"Oracle cross-check on radius {radius}: {mismatches} mismatches")
    return report


def _segment_seeds(graph: DefiningGraph) -> list[GroupElement]:
    seeds = [normal_form(graph, [Letter(v, 1)]) for v in range(graph.rank)]
    seeds += [
        normal_form(graph, [Letter(u, 1), Letter(v, 1)])
        for u, v in combinations(range(graph.rank), 2)
        if not graph.commute(u, v)
    ]
    return seeds


def _segments_at(g: GroupElement) -> list[Segment]:
    return _cover_chains(interval(identity(g.graph), g))


def _cover_chains(within: Interval) -> list[Segment]:
    """Every chain of heap covers in an interval, as a segment."""
    chains: list[list[int]] = [[p] for p in range(len(within))]
    segments = []
    while chains:
        chain = chains.pop()
        segments.append(make_segment(within, chain))
        chains.extend([*chain, q] for q in within.heap.successors(chain[-1]))
    return segments
