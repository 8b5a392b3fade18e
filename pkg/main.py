#!/usr/bin/env python3
"""
Metabelian tops of Artin systems and one-relator groups
Main entry point for the command line
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

from config import config
from errors import AnalysisError, InputError
from models import Report
from service import AnalysisService, exit_code_for_error
from utils import discover_fixtures, load_graph, load_one_relator

logger = logging.getLogger(__name__)


def setup_logging(verbose: bool = False):
    """Configure logging once for the process"""
    settings = config.get_logging_config()
    level = logging.DEBUG if verbose else getattr(logging, settings["level"].upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(settings["file"]),
            logging.StreamHandler()
        ]
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--window", type=int, default=None,
                        help=f"membership search window (default {config.window})")
    common.add_argument("--free-product-convention", action="store_true",
                        help="non-edges carry no relation instead of commuting")
    common.add_argument("--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(
        prog="artin-metabelian",
        description="Derived-group homology and finite presentability of metabelian tops")
    commands = parser.add_subparsers(dest="command", required=True)

    classify = commands.add_parser("classify", parents=[common], help="finite type and abelianization")
    classify.add_argument("graph_file")

    homology = commands.add_parser("homology", parents=[common], help="Γ'_ab and the metabelian-top verdict")
    homology.add_argument("graph_file", nargs="?")
    homology.add_argument("--all", metavar="DIR", help="run on every graph file under DIR")

    onerel = commands.add_parser("onerel", parents=[common], help="two-generator one-relator groups")
    onerel.add_argument("--gens", help="comma-separated generator names, e.g. x,y")
    onerel.add_argument("--relator", help="relator word, e.g. 'x y x^-1 y^-1'")
    onerel.add_argument("--file", help="one-relator fixture file")

    alexander = commands.add_parser("alexander", parents=[common], help="knot groups from the Alexander polynomial")
    alexander.add_argument("--poly", required=True, help="Laurent polynomial, e.g. '1 - t + t^2'")
    alexander.add_argument("--variable", default="t")
    return parser


def emit(report: Report, as_json: bool):
    print(report.to_json() if as_json else report.render_text())


def run_batch(service: AnalysisService, directory: str, args: argparse.Namespace) -> int:
    paths = discover_fixtures(directory)
    reports = service.run_batch(paths, args.window, args.free_product_convention or None)
    if args.json:
        print(json.dumps([r.model_dump(mode="json") for r in reports], indent=2, ensure_ascii=False))
    else:
        for path, report in zip(paths, reports):
            print(f"{path.stem:<12} {report.headline}")
    return max((r.exit_code for r in reports), default=0)


def run_command(args: argparse.Namespace) -> int:
    service = AnalysisService()
    free_product = True if args.free_product_convention else None

    if args.command == "classify":
        report = service.classify(load_graph(args.graph_file))
    elif args.command == "homology":
        if args.all:
            return run_batch(service, args.all, args)
        if not args.graph_file:
            raise InputError("homology needs a graph file or --all DIR")
        report = service.homology(load_graph(args.graph_file), args.window, free_product)
    elif args.command == "onerel":
        if args.file:
            data = load_one_relator(args.file)
            report = service.onerel(data.relator, data.generators)
        elif args.relator:
            gens = [g.strip() for g in args.gens.split(",")] if args.gens else None
            report = service.onerel(args.relator, gens)
        else:
            raise InputError("onerel needs --relator or --file")
    else:
        report = service.alexander(args.poly, args.variable)

    emit(report, args.json)
    return report.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one command and return its exit code"""
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        return run_command(args)
    except AnalysisError as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return exit_code_for_error(e)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
