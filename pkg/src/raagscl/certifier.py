"""End-to-end scl lower bound certificates.

For g ≠ 1 the pipeline builds the axis, picks a maximal g-nested segment γ
in [o, go], tabulates c_γ and c_γ̄ on [o, gⁿo] for n = 1..N and turns the
premises c_γ ≥ n, c_γ̄ = 0 into φ̄_γ(g) ≥ 1. With defect 6, homogenized
defect 12 and Bavard duality that gives scl(g) ≥ 1/24 on [G, G].
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from raagscl.axis import AxisData, axis_window, cyclically_reduce
from raagscl.config import RunConfig
from raagscl.counting_qm import (
    CopyInInterval,
    Segment,
    check_maximal_characterisation,
    count_nonoverlapping,
    enumerate_copies,
    find_maximal_g_nested,
    forward_copies_in_window,
    is_g_nested,
    reverse_copies_in_window,
    segment_from_halfspaces,
)
from raagscl.cube_geom import Halfspace, Hyperplane
from raagscl.errors import (
    CertificateParseError,
    InvariantViolation,
    NotApplicableError,
    PresentationError,
)
from raagscl.graph_io import graph_from_dict, graph_to_dict, resolve_graph
from raagscl.logger import setup_logger
from raagscl.raag_core import (
    DefiningGraph,
    GroupElement,
    abelianization,
    element_from_word,
    in_commutator_subgroup,
)

FORMAT_VERSION = 1
MAX_CERTIFICATE_SIZE = 1024 * 1024  # 1 MB
DEFECT_BOUND = 6
HOMOGENIZED_DEFECT_BOUND = 2 * DEFECT_BOUND
NOT_IN_COMMUTATOR_SUBGROUP = "not in commutator subgroup: scl undefined, only phi_bar >= 1 is certified"


@dataclass(frozen=True)
class PowerRow:
    """One row of the power table; ``omega`` is the value as claimed."""

    n: int
    c_forward: int
    c_reverse: int
    omega: int

    @classmethod
    def counted(cls, n: int, c_forward: int, c_reverse: int) -> PowerRow:
        return cls(n, c_forward, c_reverse, c_forward - c_reverse)

    @property
    def consistent(self) -> bool:
        return self.omega == self.c_forward - self.c_reverse


@dataclass(frozen=True)
class QmCertificate:
    """Everything needed to re-derive the bound from scratch."""

    graph: DefiningGraph
    element: str
    conjugator: str
    core: str
    delta: int
    segment: tuple[tuple[str, str, int], ...]  # (label, base word, sign) per member
    table: tuple[PowerRow, ...]
    phi_bar_lower: Fraction
    scl_lower: Fraction | None
    in_commutator_subgroup: bool
    notes: tuple[str, ...] = ()
    defect_bound: int = DEFECT_BOUND
    homogenized_defect_bound: int = HOMOGENIZED_DEFECT_BOUND
    format_version: int = field(default=FORMAT_VERSION)

    def to_dict(self) -> dict[str, Any]:
        return {
            "format_version": self.format_version,
            "graph": graph_to_dict(self.graph),
            "element": self.element,
            "axis": {"conjugator": self.conjugator, "core": self.core, "delta": self.delta},
            "segment": [
                {"label": label, "base": base, "sign": sign} for label, base, sign in self.segment
            ],
            "table": [
                {"n": row.n, "c_forward": row.c_forward, "c_reverse": row.c_reverse, "omega": row.omega}
                for row in self.table
            ],
            "defect_bound": self.defect_bound,
            "homogenized_defect_bound": self.homogenized_defect_bound,
            "phi_bar_lower": _fraction_to_dict(self.phi_bar_lower),
            "scl_lower": None if self.scl_lower is None else _fraction_to_dict(self.scl_lower),
            "in_commutator_subgroup": self.in_commutator_subgroup,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, data: Any) -> QmCertificate:
        """Parse a certificate document.

        Raises:
            CertificateParseError: On a missing or mistyped field, with its location
        """
        if not isinstance(data, dict):
            raise CertificateParseError("Certificate must be an object")
        version = _expect(data, "format_version", int, "format_version")
        if version != FORMAT_VERSION:
            raise CertificateParseError(f"Unsupported format version {version}", "format_version")
        try:
            graph = graph_from_dict(_expect(data, "graph", dict, "graph"))
        except PresentationError as e:
            raise CertificateParseError(str(e), "graph") from e

        axis = _expect(data, "axis", dict, "axis")
        segment = []
        for i, entry in enumerate(_expect(data, "segment", list, "segment")):
            where = f"segment.{i}"
            if not isinstance(entry, dict):
                raise CertificateParseError("Segment entry must be an object", where)
            segment.append(
                (
                    _expect(entry, "label", str, f"{where}.label"),
                    _expect(entry, "base", str, f"{where}.base"),
                    _expect(entry, "sign", int, f"{where}.sign"),
                )
            )

        table = []
        for i, entry in enumerate(_expect(data, "table", list, "table")):
            where = f"table.{i}"
            if not isinstance(entry, dict):
                raise CertificateParseError("Table entry must be an object", where)
            table.append(
                PowerRow(
                    _expect(entry, "n", int, f"{where}.n"),
                    _expect(entry, "c_forward", int, f"{where}.c_forward"),
                    _expect(entry, "c_reverse", int, f"{where}.c_reverse"),
                    _expect(entry, "omega", int, f"{where}.omega"),
                )
            )

        scl_data = data.get("scl_lower")
        notes = _expect(data, "notes", list, "notes")
        if not all(isinstance(note, str) for note in notes):
            raise CertificateParseError("Notes must be strings", "notes")
        return cls(
            graph=graph,
            element=_expect(data, "element", str, "element"),
            conjugator=_expect(axis, "conjugator", str, "axis.conjugator"),
            core=_expect(axis, "core", str, "axis.core"),
            delta=_expect(axis, "delta", int, "axis.delta"),
            segment=tuple(segment),
            table=tuple(table),
            phi_bar_lower=_fraction_from_dict(data.get("phi_bar_lower"), "phi_bar_lower"),
            scl_lower=None if scl_data is None else _fraction_from_dict(scl_data, "scl_lower"),
            in_commutator_subgroup=_expect(
                data, "in_commutator_subgroup", bool, "in_commutator_subgroup"
            ),
            notes=tuple(notes),
            defect_bound=_expect(data, "defect_bound", int, "defect_bound"),
            homogenized_defect_bound=_expect(
                data, "homogenized_defect_bound", int, "homogenized_defect_bound"
            ),
            format_version=version,
        )


def _expect(data: dict[str, Any], key: str, kind: type, location: str) -> Any:
    if key not in data:
        raise CertificateParseError(f"Missing field '{key}'", location)
    value = data[key]
    # bool is an int subclass; keep the two apart
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise CertificateParseError(f"Field '{key}' must be {kind.__name__}", location)
    return value


def _fraction_to_dict(value: Fraction) -> dict[str, int]:
    return {"numerator": value.numerator, "denominator": value.denominator}


def _fraction_from_dict(data: Any, location: str) -> Fraction:
    if not isinstance(data, dict):
        raise CertificateParseError("Rational must be a numerator/denominator object", location)
    numerator = _expect(data, "numerator", int, f"{location}.numerator")
    denominator = _expect(data, "denominator", int, f"{location}.denominator")
    if denominator <= 0:
        raise CertificateParseError("Denominator must be positive", f"{location}.denominator")
    return Fraction(numerator, denominator)


def serialize_segment(gamma: Segment) -> tuple[tuple[str, str, int], ...]:
    graph = gamma.first.base.graph
    return tuple(
        (graph.name(member.label), str(member.base), member.sign) for member in gamma.chain
    )


def deserialize_segment(
    graph: DefiningGraph, entries: tuple[tuple[str, str, int], ...]
) -> list[Halfspace]:
    """Halfspaces named by (label, base word, sign).

    Raises:
        PresentationError: If a label or word does not parse, or a sign is not ±1
    """
    chain = []
    for label, base, sign in entries:
        if sign not in (1, -1):
            setup_logger().error(f"Halfspace sign must be 1 or -1, got {sign}")
            raise PresentationError(f"Halfspace sign must be 1 or -1, got {sign}")
        chain.append(Halfspace(Hyperplane(graph.index(label), element_from_word(graph, base)), sign))
    return chain


def phi_bar_lower_bound(table: tuple[PowerRow, ...]) -> Fraction:
    """min(1, minₙ ω(o, gⁿo)/n): the premises certify exactly 1."""
    return min([Fraction(1), *(Fraction(row.omega, row.n) for row in table)])


def scl_lower_bound(phi_bar: Fraction, commutator: bool) -> Fraction | None:
    """Bavard bound φ̄(g) / (2·D(φ̄)), only on [G, G]."""
    if not commutator:
        return None
    return phi_bar / (2 * HOMOGENIZED_DEFECT_BOUND)


def _merge(direct: list[CopyInInterval], found: list[CopyInInterval]) -> list[CopyInInterval]:
    by_positions = {copy.positions: copy for copy in found}
    for copy in direct:
        by_positions.setdefault(copy.positions, copy)
    return [by_positions[key] for key in sorted(by_positions)]


def tabulate(
    gamma: Segment, ax: AxisData, max_power: int, radius: int | None = None
) -> tuple[PowerRow, ...]:
    """Rows n = 1..N of (c_γ, c_γ̄) on [o, gⁿo].

    Raises:
        InvariantViolation: If the translates gᵏγ overlap or a reverse copy turns up
    """
    logger = setup_logger()
    rows = []
    for n in range(1, max_power + 1):
        window = axis_window(ax, n).interval
        direct = forward_copies_in_window(gamma, ax, n)
        if count_nonoverlapping(direct, window) != n:
            logger.error(f"Translates of the segment overlap in [o, g^{n} o]")
            raise InvariantViolation(f"Translates of the segment overlap in [o, g^{n} o]")
        copies = _merge(direct, enumerate_copies(gamma, window, radius))
        reverse = reverse_copies_in_window(gamma, ax, n, radius)
        if reverse:
            logger.error(f"Reverse copy of the segment found in [o, g^{n} o]")
            raise InvariantViolation(
                f"Reverse copy of the segment at positions {reverse[0].positions} in [o, g^{n} o]"
            )
        row = PowerRow.counted(n, count_nonoverlapping(copies, window), 0)
        logger.debug(f"n = {n}: c_forward = {row.c_forward}, c_reverse = {row.c_reverse}")
        rows.append(row)
    return tuple(rows)


def certify_element(
    g: GroupElement, max_power: int = 6, radius: int | None = None
) -> QmCertificate:
    """Build a certificate for one element.

    Raises:
        NotApplicableError: If g is the identity
        InvariantViolation: If any premise fails to hold
    """
    logger = setup_logger()
    if g.is_identity:
        logger.error("Certificate requested for the identity")
        raise NotApplicableError("scl bound not applicable: the identity has no axis")
    if max_power < 1:
        logger.error(f"max_power must be >= 1, got {max_power}")
        raise ValueError(f"max_power must be >= 1, got {max_power}")

    ax = cyclically_reduce(g)
    gamma = find_maximal_g_nested(ax)
    if not is_g_nested(gamma, ax) or not check_maximal_characterisation(gamma, ax):
        logger.error(f"Segment {gamma.describe()} is not maximal g-nested for '{g}'")
        raise InvariantViolation(f"Segment {gamma.describe()} is not maximal g-nested for '{g}'")

    table = tabulate(gamma, ax, max_power, radius)
    for row in table:
        if row.c_forward < row.n:
            logger.error(f"c_forward({row.n}) = {row.c_forward} < {row.n}")
            raise InvariantViolation(f"c_forward({row.n}) = {row.c_forward} < {row.n}")
    phi_bar = phi_bar_lower_bound(table)
    commutator = in_commutator_subgroup(g)
    notes = () if commutator else (NOT_IN_COMMUTATOR_SUBGROUP,)
    certificate = QmCertificate(
        graph=g.graph,
        element=str(g),
        conjugator=str(ax.conjugator),
        core=str(ax.core),
        delta=ax.delta,
        segment=serialize_segment(gamma),
        table=table,
        phi_bar_lower=phi_bar,
        scl_lower=scl_lower_bound(phi_bar, commutator),
        in_commutator_subgroup=commutator,
        notes=notes,
    )
    logger.info(
        f"Certified '{g}': segment of length {len(gamma)}, phi_bar >= {phi_bar}, "
        f"scl >= {certificate.scl_lower}"
    )
    return certificate


def certify(config: RunConfig) -> QmCertificate:
    """Certificate for the run's graph and word."""
    graph = resolve_graph(config.graph_path, config.fixture)
    return certify_element(
        element_from_word(graph, config.word), config.max_power, config.witness_radius
    )


def _recheck(cert: QmCertificate, radius: int | None) -> str | None:
    if cert.format_version != FORMAT_VERSION:
        return f"format version {cert.format_version}"
    if (cert.defect_bound, cert.homogenized_defect_bound) != (
        DEFECT_BOUND,
        HOMOGENIZED_DEFECT_BOUND,
    ):
        return "defect constants"
    graph = cert.graph
    g = element_from_word(graph, cert.element)
    if g.is_identity or str(g) != cert.element:
        return "element is not a reduced nonidentity word"
    ax = cyclically_reduce(g)
    if (str(ax.conjugator), str(ax.core), ax.delta) != (cert.conjugator, cert.core, cert.delta):
        return "axis data"

    try:
        gamma = segment_from_halfspaces(
            axis_window(ax, 1).interval, deserialize_segment(graph, cert.segment)
        )
    except ValueError as e:
        return f"segment: {e}"
    if not is_g_nested(gamma, ax) or not check_maximal_characterisation(gamma, ax):
        return "segment is not maximal g-nested"

    if [row.n for row in cert.table] != list(range(1, len(cert.table) + 1)) or not cert.table:
        return "table rows must be n = 1..N"
    for row in cert.table:
        if not row.consistent:
            return f"omega({row.n}) = {row.omega} differs from c_forward - c_reverse"
    if tabulate(gamma, ax, len(cert.table), radius) != cert.table:
        return "table counts"
    if any(row.c_forward < row.n or row.c_reverse != 0 for row in cert.table):
        return "table premises"

    commutator = in_commutator_subgroup(g)
    phi_bar = phi_bar_lower_bound(cert.table)
    if cert.in_commutator_subgroup != commutator or cert.phi_bar_lower != phi_bar:
        return "phi_bar bound"
    if cert.scl_lower != scl_lower_bound(phi_bar, commutator):
        return "scl bound"
    return None


def verify_certificate(cert: QmCertificate, radius: int | None = None) -> bool:
    """Recompute every field of a certificate; True iff all of them match."""
    logger = setup_logger()
    try:
        problem = _recheck(cert, radius)
    except (InvariantViolation, PresentationError, ValueError) as e:
        problem = f"{type(e).__name__}: {e}"
    if problem is not None:
        logger.warning(f"Certificate for '{cert.element}' rejected: {problem}")
        return False
    logger.info(f"Certificate for '{cert.element}' verified")
    return True


def save_certificate(cert: QmCertificate, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(cert.to_dict(), indent=2) + "\n", encoding="utf-8")
    setup_logger().info(f"Wrote certificate to {path}")


def load_certificate(path: Path) -> QmCertificate:
    """Read a certificate file.

    Raises:
        FileNotFoundError: If file doesn't exist
        ValueError: If the file is too large
        CertificateParseError: If the document is malformed
    """
    logger = setup_logger()
    if not path.exists():
        logger.error(f"Certificate file not found: {path}")
        raise FileNotFoundError(f"Certificate file not found: {path}")
    file_size = path.stat().st_size
    if file_size > MAX_CERTIFICATE_SIZE:
        logger.error(f"Certificate file too large: {file_size} bytes")
        raise ValueError(f"Certificate file too large: {file_size} bytes (max {MAX_CERTIFICATE_SIZE})")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        logger.error(f"Invalid certificate file '{path}': {e}")
        raise CertificateParseError(f"Invalid JSON: {e.msg} (line {e.lineno})") from e
    try:
        return QmCertificate.from_dict(data)
    except CertificateParseError as e:
        logger.error(f"Invalid certificate in '{path}': {e}")
        raise


def describe_element(g: GroupElement) -> dict[str, Any]:
    """Summary for the ``info`` command: normal form, abelianization and axis."""
    graph = g.graph
    summary: dict[str, Any] = {
        "element": str(g),
        "length": len(g),
        "abelianization": dict(zip(graph.generators, abelianization(g), strict=True)),
        "in_commutator_subgroup": in_commutator_subgroup(g),
    }
    if g.is_identity:
        summary["axis"] = None
        return summary
    ax = cyclically_reduce(g)
    gamma = find_maximal_g_nested(ax)
    summary["axis"] = {"conjugator": str(ax.conjugator), "core": str(ax.core), "delta": ax.delta}
    summary["segment"] = gamma.describe()
    return summary
