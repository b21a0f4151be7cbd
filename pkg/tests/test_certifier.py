"""Tests for the certifier module."""

import dataclasses
import json
from fractions import Fraction
from unittest.mock import patch

import pytest

from raagscl.certifier import (
    NOT_IN_COMMUTATOR_SUBGROUP,
    PowerRow,
    QmCertificate,
    certify,
    certify_element,
    describe_element,
    deserialize_segment,
    load_certificate,
    phi_bar_lower_bound,
    save_certificate,
    scl_lower_bound,
    verify_certificate,
)
from raagscl.config import RunConfig
from raagscl.errors import CertificateParseError, NotApplicableError, PresentationError
from raagscl.raag_core import element_from_word, identity

COMMUTATOR = "a b a^-1 b^-1"


@pytest.fixture
def commutator_certificate(f2):
    return certify_element(element_from_word(f2, COMMUTATOR), max_power=4)


class TestBounds:
    """Tests for the bound arithmetic."""

    def test_phi_bar_clamped_at_one(self):
        """Premises certify exactly 1 even when ω/n is larger."""
        table = (PowerRow.counted(1, 2, 0), PowerRow.counted(2, 3, 0))
        assert phi_bar_lower_bound(table) == 1

    def test_phi_bar_takes_minimum(self):
        """A weak row lowers the bound."""
        table = (PowerRow.counted(1, 1, 0), PowerRow.counted(2, 1, 0))
        assert phi_bar_lower_bound(table) == Fraction(1, 2)

    def test_scl_bound(self):
        """φ̄ over twice the homogenized defect, only on [G, G]."""
        assert scl_lower_bound(Fraction(1), True) == Fraction(1, 24)
        assert scl_lower_bound(Fraction(1), False) is None


class TestCertifyElement:
    """Tests for certify_element."""

    def test_commutator(self, commutator_certificate):
        """[a, b] in F₂ gets scl ≥ 1/24."""
        cert = commutator_certificate
        assert cert.delta == 4
        assert cert.conjugator == "1"
        assert cert.core == COMMUTATOR
        assert [row.n for row in cert.table] == [1, 2, 3, 4]
        assert all(row.c_forward >= row.n and row.c_reverse == 0 for row in cert.table)
        assert cert.phi_bar_lower == 1
        assert cert.scl_lower == Fraction(1, 24)
        assert cert.in_commutator_subgroup
        assert cert.notes == ()

    def test_segment_serialized(self, commutator_certificate):
        """The segment is named by (label, base, sign)."""
        assert commutator_certificate.segment == (
            ("a", "1", 1),
            ("b", "a", 1),
            ("a", "a b a^-1", -1),
            ("b", "a b a^-1 b^-1", -1),
        )

    def test_outside_commutator_subgroup(self, z2):
        """ab in ℤ² only certifies φ̄ ≥ 1."""
        cert = certify_element(element_from_word(z2, "a b"), max_power=3)
        assert cert.phi_bar_lower == 1
        assert cert.scl_lower is None
        assert cert.notes == (NOT_IN_COMMUTATOR_SUBGROUP,)

    def test_conjugated_element(self, path3):
        """Conjugates are handled through the axis data."""
        cert = certify_element(element_from_word(path3, "c a c^-1"), max_power=3)
        assert cert.conjugator == "c"
        assert cert.core == "a"
        assert cert.scl_lower is None

    def test_identity_not_applicable(self, f2):
        """The identity has no axis."""
        with pytest.raises(NotApplicableError):
            certify_element(identity(f2))

    def test_certify_from_config(self):
        """certify resolves the fixture graph and parses the word."""
        config = RunConfig(graph_path=None, word=COMMUTATOR, fixture="f2", max_power=2)
        assert certify(config).scl_lower == Fraction(1, 24)

    def test_unknown_generator(self):
        """Words naming undeclared generators are presentation errors."""
        config = RunConfig(graph_path=None, word="a z", fixture="f2")
        with pytest.raises(PresentationError):
            certify(config)


class TestVerify:
    """Tests for verify_certificate."""

    def test_fresh_certificate_verifies(self, commutator_certificate):
        """A certificate straight from the pipeline passes."""
        assert verify_certificate(commutator_certificate)

    def test_tampered_count(self, commutator_certificate):
        """Changing a count is caught."""
        rows = list(commutator_certificate.table)
        rows[1] = PowerRow.counted(2, 3, 0)
        tampered = dataclasses.replace(commutator_certificate, table=tuple(rows))
        assert not verify_certificate(tampered)

    def test_tampered_omega(self, commutator_certificate):
        """A decremented omega entry is a verification failure."""
        rows = list(commutator_certificate.table)
        row = rows[1]
        rows[1] = PowerRow(row.n, row.c_forward, row.c_reverse, row.omega - 1)
        tampered = dataclasses.replace(commutator_certificate, table=tuple(rows))
        assert not verify_certificate(tampered)

    def test_tampered_bound(self, commutator_certificate):
        """A claimed bound above what the table supports is caught."""
        tampered = dataclasses.replace(commutator_certificate, scl_lower=Fraction(1, 12))
        assert not verify_certificate(tampered)

    def test_tampered_segment(self, commutator_certificate):
        """A segment member moved off the axis is caught."""
        segment = list(commutator_certificate.segment)
        segment[0] = ("a", "b", 1)
        tampered = dataclasses.replace(commutator_certificate, segment=tuple(segment))
        assert not verify_certificate(tampered)

    def test_tampered_constants(self, commutator_certificate):
        """Defect constants are fixed."""
        tampered = dataclasses.replace(commutator_certificate, defect_bound=5)
        assert not verify_certificate(tampered)

    def test_unparseable_element(self, commutator_certificate):
        """Garbage words fail verification instead of raising."""
        tampered = dataclasses.replace(commutator_certificate, element="a ^ ^")
        assert not verify_certificate(tampered)

    def test_bad_sign(self, f2):
        """Halfspace signs are ±1."""
        with pytest.raises(PresentationError):
            deserialize_segment(f2, (("a", "1", 0),))


class TestCertificateFiles:
    """Tests for saving, loading and parsing certificates."""

    def test_save_and_load(self, tmp_path, commutator_certificate):
        """A saved certificate loads back equal and still verifies."""
        path = tmp_path / "out" / "cert.json"
        save_certificate(commutator_certificate, path)
        loaded = load_certificate(path)
        assert loaded == commutator_certificate
        assert verify_certificate(loaded)

    def test_fraction_format(self, commutator_certificate):
        """Rationals are stored as numerator/denominator objects."""
        data = commutator_certificate.to_dict()
        assert data["format_version"] == 1
        assert data["scl_lower"] == {"numerator": 1, "denominator": 24}
        assert data["table"][0] == {"n": 1, "c_forward": 1, "c_reverse": 0, "omega": 1}

    def test_missing_file(self, tmp_path):
        """Missing files raise FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            load_certificate(tmp_path / "missing.json")

    def test_invalid_json(self, tmp_path):
        """Broken JSON is a parse error."""
        path = tmp_path / "cert.json"
        path.write_text("{")
        with pytest.raises(CertificateParseError, match="Invalid JSON"):
            load_certificate(path)

    def test_file_too_large(self, tmp_path, commutator_certificate):
        """Oversized files are refused."""
        path = tmp_path / "cert.json"
        save_certificate(commutator_certificate, path)
        with (
            patch("raagscl.certifier.MAX_CERTIFICATE_SIZE", 10),
            pytest.raises(ValueError, match="too large"),
        ):
            load_certificate(path)

    def test_missing_field_location(self, commutator_certificate):
        """Parse errors name the offending field."""
        data = commutator_certificate.to_dict()
        del data["axis"]
        with pytest.raises(CertificateParseError) as excinfo:
            QmCertificate.from_dict(data)
        assert excinfo.value.location == "axis"

    def test_bool_is_not_an_int(self, commutator_certificate):
        """true is not accepted as a delta."""
        data = commutator_certificate.to_dict()
        data["axis"]["delta"] = True
        with pytest.raises(CertificateParseError) as excinfo:
            QmCertificate.from_dict(data)
        assert excinfo.value.location == "axis.delta"

    def test_inconsistent_omega_parses(self, commutator_certificate):
        """A claimed omega is read as written and left to verification."""
        data = commutator_certificate.to_dict()
        data["table"][2]["omega"] = 7
        row = QmCertificate.from_dict(data).table[2]
        assert row.omega == 7
        assert not row.consistent

    def test_unsupported_version(self, commutator_certificate):
        """Only format version 1 is read."""
        data = commutator_certificate.to_dict()
        data["format_version"] = 2
        with pytest.raises(CertificateParseError, match="Unsupported"):
            QmCertificate.from_dict(data)

    def test_bad_denominator(self, commutator_certificate):
        """Denominators must be positive."""
        data = commutator_certificate.to_dict()
        data["phi_bar_lower"] = {"numerator": 1, "denominator": 0}
        with pytest.raises(CertificateParseError) as excinfo:
            QmCertificate.from_dict(data)
        assert excinfo.value.location == "phi_bar_lower.denominator"

    def test_document_roundtrip_is_stable(self, commutator_certificate):
        """to_dict of a parsed document reproduces it."""
        data = json.loads(json.dumps(commutator_certificate.to_dict()))
        assert QmCertificate.from_dict(data).to_dict() == data


class TestDescribeElement:
    """Tests for describe_element."""

    def test_summary(self, f2):
        """Normal form, abelianization and axis data."""
        summary = describe_element(element_from_word(f2, "a b b a^-1"))
        assert summary["element"] == "a b b a^-1"
        assert summary["length"] == 4
        assert summary["abelianization"] == {"a": 0, "b": 2}
        assert not summary["in_commutator_subgroup"]
        assert summary["axis"] == {"conjugator": "a", "core": "b b", "delta": 2}
        assert "segment" in summary

    def test_identity(self, f2):
        """The identity has no axis."""
        summary = describe_element(identity(f2))
        assert summary["element"] == "1"
        assert summary["axis"] is None


class TestFixtureElements:
    """Every fixture element is certified up to n = 6."""

    @pytest.mark.parametrize(
        "fixture, word",
        [
            ("f2", "a b a^-1 b^-1"),
            ("f2", "a b a b"),
            ("f2", "a^2 b"),
            ("z2", "a b"),
            ("z2", "a^2 b^3"),
            ("path3", "a b c"),
            ("path3", "a b c^-1 b a"),
        ],
    )
    def test_effective_bound(self, request, fixture, word):
        """ω(o, gⁿo) ≥ n and no reverse copies for n = 1..6."""
        graph = request.getfixturevalue(fixture)
        cert = certify_element(element_from_word(graph, word), max_power=6)
        assert [row.n for row in cert.table] == [1, 2, 3, 4, 5, 6]
        for row in cert.table:
            assert row.c_forward >= row.n
            assert row.c_reverse == 0
        assert cert.phi_bar_lower == 1
        assert verify_certificate(cert)
