"""Tests for the oracle module."""

import json

import pytest

from raagscl.counting_qm import make_segment
from raagscl.cube_geom import HalfspaceRelation, halfspace_of_step, interval
from raagscl.errors import BallCapError, OutOfBallError
from raagscl.oracle import (
    build_ball,
    chain_of_witness,
    dump_ball,
    interior_safe,
    oracle_copies,
    oracle_coset_min,
    oracle_distance,
    oracle_median,
    oracle_raag_like_violations,
    oracle_relation,
    oracle_side,
    oracle_tightly_nested,
)
from raagscl.raag_core import element_from_word, identity


def w(graph, text):
    return element_from_word(graph, text)


def step(graph, at, letter_text):
    (letter,) = w(graph, letter_text).letters
    return halfspace_of_step(w(graph, at), letter)


@pytest.fixture
def f2_ball(f2):
    return build_ball(f2, 4)


@pytest.fixture
def z2_ball(z2):
    return build_ball(z2, 4)


class TestBuildBall:
    """Tests for build_ball."""

    def test_free_ball(self, f2):
        """The radius-2 ball of the 4-valent tree."""
        ball = build_ball(f2, 2)
        assert len(ball.vertices) == 17
        assert len(ball.edges) == 16
        assert ball.squares == ()
        assert len(ball.hyperplane_classes) == 16

    def test_lattice_ball(self, z2):
        """The radius-2 diamond in ℤ²: four squares, eight hyperplane classes."""
        ball = build_ball(z2, 2)
        assert len(ball.vertices) == 13
        assert len(ball.edges) == 16
        assert len(ball.squares) == 4
        assert len(ball.hyperplane_classes) == 8

    def test_radius_zero(self, path3):
        """Radius 0 is the identity alone."""
        ball = build_ball(path3, 0)
        assert ball.vertices == (identity(path3),)
        assert ball.edges == ()

    def test_depth(self, z2):
        """Depth is word length."""
        ball = build_ball(z2, 3)
        assert ball.depth[w(z2, "a b^-1")] == 2
        assert w(z2, "a b^-1") in ball
        assert w(z2, "a^2 b^2") not in ball

    def test_negative_radius(self, f2):
        """Negative radii are rejected."""
        with pytest.raises(ValueError):
            build_ball(f2, -1)

    def test_cap(self, f2):
        """Radii over the cap raise BallCapError."""
        with pytest.raises(BallCapError):
            build_ball(f2, 3, cap=2)


class TestMargins:
    """Tests for interior_safe."""

    def test_interior_safe(self, z2_ball, z2):
        """|z| + diameter + slack must fit in the radius."""
        assert interior_safe(z2_ball, [identity(z2), w(z2, "a b")])
        assert not interior_safe(z2_ball, [identity(z2), w(z2, "a b")], slack=1)
        assert not interior_safe(z2_ball, [w(z2, "a^2"), w(z2, "b^-1")])

    def test_outside_operand(self, z2_ball, z2):
        """Operands outside the ball raise OutOfBallError."""
        with pytest.raises(OutOfBallError):
            interior_safe(z2_ball, [w(z2, "a^5")])


class TestQueries:
    """Tests for the individual oracle queries."""

    def test_distance(self, z2_ball, z2):
        """BFS distance agrees with word length."""
        verdict = oracle_distance(z2_ball, identity(z2), w(z2, "a b"))
        assert verdict.answer == 2
        assert verdict.interior_safe

    def test_distance_outside(self, f2_ball, f2):
        """Vertices beyond the radius are refused."""
        with pytest.raises(OutOfBallError):
            oracle_distance(f2_ball, identity(f2), w(f2, "a^5"))

    def test_median(self, z2_ball, z2, f2_ball, f2):
        """Medians by exhaustion."""
        verdict = oracle_median(z2_ball, identity(z2), w(z2, "a b"), w(z2, "b"))
        assert verdict.answer == w(z2, "b")
        assert verdict.interior_safe
        verdict = oracle_median(f2_ball, identity(f2), w(f2, "a b"), w(f2, "a"))
        assert verdict.answer == w(f2, "a")

    def test_side(self, z2_ball, z2):
        """Membership by component."""
        halfspace = step(z2, "1", "a")
        inside = oracle_side(z2_ball, w(z2, "a"), halfspace)
        assert inside.answer is True
        assert inside.interior_safe
        assert oracle_side(z2_ball, w(z2, "b"), halfspace).answer is False
        assert oracle_side(z2_ball, w(z2, "a b"), halfspace).answer is True

    def test_relation(self, z2_ball, z2, f2_ball, f2):
        """Relations from side sets."""
        crossing = oracle_relation(z2_ball, step(z2, "1", "a"), step(z2, "1", "b"))
        assert crossing.answer is HalfspaceRelation.TRANSVERSE
        nested = oracle_relation(f2_ball, step(f2, "1", "a"), step(f2, "a", "a"))
        assert nested.answer is HalfspaceRelation.FIRST_CONTAINS_SECOND
        same = oracle_relation(f2_ball, step(f2, "1", "a"), step(f2, "1", "a"))
        assert same.answer is HalfspaceRelation.EQUAL
        assert same.interior_safe

    def test_locate_outside(self, f2_ball, f2):
        """A hyperplane with no edge in the ball cannot be located."""
        with pytest.raises(OutOfBallError):
            f2_ball.locate(step(f2, "a^4", "b"))

    def test_tightly_nested(self, f2_ball, f2):
        """A b-wall between two a-walls breaks tightness."""
        outer = step(f2, "1", "a")
        assert oracle_tightly_nested(f2_ball, outer, step(f2, "a", "a")).answer is True
        assert oracle_tightly_nested(f2_ball, outer, step(f2, "a b", "a")).answer is False
        assert oracle_tightly_nested(f2_ball, outer, step(f2, "1", "b")).answer is False

    def test_coset_min(self, z2_ball, z2):
        """The shortest element of a²b·⟨a⟩ is b."""
        verdict = oracle_coset_min(z2_ball, w(z2, "a^2 b"), {0})
        assert verdict.answer == w(z2, "b")
        assert verdict.interior_safe

    def test_copies(self, f2_ball, f2):
        """The a-wall has two translates separating a² from 1."""
        gamma = make_segment(interval(identity(f2), w(f2, "a")), [0])
        verdict = oracle_copies(f2_ball, gamma, identity(f2), w(f2, "a^2"))
        assert verdict.answer == (identity(f2), w(f2, "a"))
        assert chain_of_witness(gamma, w(f2, "a")) == (step(f2, "a", "a"),)


class TestRaagLike:
    """Tests for oracle_raag_like_violations."""

    @pytest.mark.parametrize("name", ["f2", "z2", "path3"])
    def test_fixtures_are_raag_like(self, request, name):
        """Every fixture graph passes the exhaustive check."""
        graph = request.getfixturevalue(name)
        assert oracle_raag_like_violations(build_ball(graph, 3)) == []


class TestDumpBall:
    """Tests for dump_ball."""

    def test_dump(self, f2):
        """The JSON lists vertices in ball order."""
        document = json.loads(dump_ball(build_ball(f2, 1)))
        assert document["generators"] == ["a", "b"]
        assert document["radius"] == 1
        assert document["vertices"] == ["1", "a", "a^-1", "b", "b^-1"]
        assert len(document["edges"]) == 4
        assert document["squares"] == []
        assert len(document["hyperplane_classes"]) == 4
