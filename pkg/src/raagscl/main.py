"""Command-line entry point for raagscl.

Subcommands: certify, verify, props, crosscheck, info. Exit codes are 0 when
every check passes, 1 when a check fails and 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path
from typing import Any

from raagscl.certifier import (
    certify,
    describe_element,
    load_certificate,
    save_certificate,
    verify_certificate,
)
from raagscl.config import RunConfig, load_config, save_config
from raagscl.errors import (
    BallCapError,
    CertificateParseError,
    InvariantViolation,
    NotApplicableError,
    PresentationError,
)
from raagscl.graph_io import FIXTURE_GRAPHS, resolve_graph
from raagscl.logger import setup_logger
from raagscl.raag_core import element_from_word
from raagscl.suites import Report, oracle_crosscheck, property_suites

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="raagscl",
        description="Certify stable commutator length lower bounds in right-angled Artin groups",
    )
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group()
    source.add_argument("--graph", type=Path, help="defining graph JSON file")
    source.add_argument("--fixture", choices=sorted(FIXTURE_GRAPHS), help="built-in defining graph")
    common.add_argument("--word", help="group element, e.g. 'a b a^-1 b^-1'")
    common.add_argument("--word-file", type=Path, help="read the word from a file")
    common.add_argument("-N", "--max-power", type=int, help="largest power n tabulated (default 6)")
    common.add_argument("--radius", type=int, help="witness search radius for copy enumeration")
    common.add_argument("--seed", type=int, help="sampler seed (also RAAGSCL_SEED)")
    common.add_argument("--samples", type=int, help="instances per property suite")
    common.add_argument("--oracle-radius", type=int, help="ball radius for the cross-check")
    common.add_argument("--output", type=Path, help="write the certificate or report here")

    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("certify", parents=[common], help="emit an scl lower bound certificate")
    verify = commands.add_parser("verify", parents=[common], help="re-check a certificate file")
    verify.add_argument("certificate", type=Path, help="certificate JSON file")
    commands.add_parser("props", parents=[common], help="run the sampled property suites")
    commands.add_parser("crosscheck", parents=[common], help="compare against the ball oracle")
    commands.add_parser("info", parents=[common], help="show normal form and axis data")
    return parser


def _run_config(args: argparse.Namespace, settings: dict[str, Any]) -> RunConfig:
    word = args.word
    if args.word_file is not None:
        word = args.word_file.read_text(encoding="utf-8").strip()
    config = RunConfig.from_settings(
        settings,
        graph_path=args.graph,
        word=word,
        fixture=args.fixture,
        max_power=args.max_power,
        witness_radius=args.radius,
        samples=args.samples,
        oracle_radius=args.oracle_radius,
        seed=args.seed,
        output=args.output,
    )
    if args.fixture is not None:
        config = dataclasses.replace(config, graph_path=None)
    return config


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        print(text)
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(text + "\n", encoding="utf-8")


def _finish_report(report: Report, output: Path | None) -> int:
    if output is not None:
        _emit(json.dumps(report.to_dict(), indent=2), output)
    print(report.render())
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def _require_word(config: RunConfig) -> None:
    if not config.word:
        raise PresentationError("No word given: pass --word or --word-file")


def _certify(config: RunConfig, settings: dict[str, Any]) -> int:
    _require_word(config)
    certificate = certify(config)
    output = config.output
    if output is None and settings.get("output_dir"):
        output = Path(settings["output_dir"]) / "certificate.json"
    if output is None:
        print(json.dumps(certificate.to_dict(), indent=2))
    else:
        save_certificate(certificate, output)
        print(f"Certificate written to {output}")
    print(f"phi_bar >= {certificate.phi_bar_lower}", file=sys.stderr)
    if certificate.scl_lower is None:
        print(f"scl: {', '.join(certificate.notes)}", file=sys.stderr)
    else:
        print(f"scl >= {certificate.scl_lower}", file=sys.stderr)
    return EXIT_OK


def _verify(path: Path, config: RunConfig) -> int:
    certificate = load_certificate(path)
    if verify_certificate(certificate, config.witness_radius):
        print(f"{path}: verified")
        return EXIT_OK
    print(f"{path}: FAILED verification", file=sys.stderr)
    return EXIT_CHECK_FAILED


def _info(config: RunConfig) -> int:
    _require_word(config)
    graph = resolve_graph(config.graph_path, config.fixture)
    summary = describe_element(element_from_word(graph, config.word))
    _emit(json.dumps(summary, indent=2, ensure_ascii=False), config.output)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    """Parse arguments, run one subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    logger = setup_logger()
    settings = load_config()
    try:
        config = _run_config(args, settings)
        logger.info(f"raagscl {args.command}: graph={config.graph_path or config.fixture}")
        if args.command == "certify":
            code = _certify(config, settings)
        elif args.command == "verify":
            code = _verify(args.certificate, config)
        elif args.command == "props":
            code = _finish_report(property_suites(config), config.output)
        elif args.command == "crosscheck":
            code = _finish_report(oracle_crosscheck(config), config.output)
        else:
            code = _info(config)
    except (
        PresentationError,
        CertificateParseError,
        FileNotFoundError,
        NotApplicableError,
        BallCapError,
    ) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as e:
        logger.error(f"Invariant violated: {e}")
        print(f"check failed: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:
        logger.exception("Unexpected failure")
        raise

    if args.graph is not None:
        settings["last_graph"] = str(args.graph)
        save_config(settings)
    return code
