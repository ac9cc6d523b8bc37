"""
Command line for the triangle-free graph search pipeline.

    python cli.py gen-mtf --n 11 --k 4 --output mtf_4_11.g6
    python cli.py extend --k 4 --n 11 --d 5 --input hosts.g6
    python cli.py certify-lower-bound --k 4 --n 10 --report cert.txt
    python cli.py verify
"""
import argparse
import logging
import os
import sys
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from utils.coloring import VerificationError
from utils.expand import HeuristicBudget
from utils.extend import DEFAULT_HOST_CAP
from utils.pipeline import BUNDLED_FIXTURES, PipelineConfig, run

logger = logging.getLogger("cli")

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_INVALID = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Generate, extend and classify triangle-free k-chromatic graphs.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, help="chromatic number")
    common.add_argument("--n", type=int, help="order")
    common.add_argument("--workers", type=int, default=int(os.getenv("SEARCH_WORKERS", "1")))
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--input", dest="input_path", help="graph6 input file")
    common.add_argument("--output", dest="output_path", help="graph6 output file (default: stdout)")
    common.add_argument("--report", dest="report_path", help="report file")
    common.add_argument("--quiet", action="store_true", help="no progress bars")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-mtf", parents=[common], help="maximal triangle-free graphs (optionally chi = k)")
    p.add_argument("--min-degree", type=int, default=2)

    for name, help_text in (("extend", "maximum-degree extension of hosts"),
                            ("certify-lower-bound", "case analysis proving no (k,n)-graph exists")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--d", type=int, help="maximum degree")
        p.add_argument("--girth", dest="girth_min", type=int, default=3, choices=(3, 5))
        p.add_argument("--vertex-critical", dest="vertex_critical_only", action="store_true")
        p.add_argument("--all-sets", dest="maximal_sets_only", action="store_false",
                       help="attach to all independent sets (outputs need not be mtf)")
        p.add_argument("--host-cap", type=int, default=DEFAULT_HOST_CAP, help="largest host order generated on the fly")

    sub.add_parser("expand", parents=[common], help="all k-chromatic spanning subgraphs by edge removal")
    sub.add_parser("classify", parents=[common], help="per-graph records and count tables")
    sub.add_parser("mycielski", parents=[common], help="Mycielski seeds from (k-1)-chromatic graphs")
    sub.add_parser("canon", parents=[common], help="canonical forms of a graph6 stream, deduplicated")
    sub.add_parser("descend", parents=[common], help="remove non-critical vertices")

    p = sub.add_parser("heuristic", parents=[common], help="search for non-vertex-critical graphs")
    p.add_argument("--max-iterations", type=int, default=10)
    p.add_argument("--harvest-quota", type=int, default=1)
    p.add_argument("--max-pool", type=int, default=100000)
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--samples", type=int, default=16)
    p.add_argument("--target-order", type=int, help="keep descending until this order")

    p = sub.add_parser("verify", parents=[common], help="check the bundled fixtures (and --input with --k)")
    p.add_argument("--fixture", dest="fixtures", action="append", choices=sorted(BUNDLED_FIXTURES))

    p = sub.add_parser("tables", parents=[common], help="count tables for orders n..n-max")
    p.add_argument("--n-max", type=int)

    p = sub.add_parser("cross-check", parents=[common], help="mtf method against extension method")
    p.add_argument("--host-cap", type=int, default=DEFAULT_HOST_CAP)
    p.add_argument("--full", dest="full_sets", action="store_true",
                   help="compare all (k,n)-graphs (edge-removal expansion) instead of the mtf ones")
    return parser


def config_from_args(args: argparse.Namespace) -> PipelineConfig:
    values = {key: value for key, value in vars(args).items()
              if value is not None and key not in {"quiet", "verbose"}}
    budget_keys = {"max_iterations", "harvest_quota", "max_pool", "mode", "samples"}
    budget = {key: values.pop(key) for key in list(values) if key in budget_keys}
    if budget:
        values["budget"] = HeuristicBudget(**budget)
    return PipelineConfig(**values)


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else getattr(logging, os.getenv("LOG_LEVEL", "INFO").upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    try:
        config = config_from_args(args)
    except ValidationError as e:
        print(f"error: invalid configuration: {e.errors()[0].get('msg', e)}", file=sys.stderr)
        return EXIT_INVALID

    try:
        result = run(config, progress=not args.quiet and sys.stderr.isatty())
    except VerificationError as e:
        logger.error(f"Verification failed: {e}")
        return EXIT_VERIFICATION
    except (ValueError, OSError) as e:
        logger.error(f"{config.command} failed: {e}")
        return EXIT_INVALID

    if result.report and not config.report_path:
        sys.stderr.write(result.report)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
