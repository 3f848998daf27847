"""Command line interface for the Scoot metric and benchmark."""

from pathlib import Path
from typing import List, Optional
import argparse
import logging
import os
import sys

import anyio

from . import __version__
from .benchmark import MEASURES, RANKED_MEASURES, ScootBenchmark
from .core.config import ProtocolConfig, ScootConfig, stats_code
from .core.types import MEASURE_FIELDS, DataError, InvalidParameterError, ScootError
from .dataset.fixtures import make_fixture_set
from .dataset.manifest import index_dataset, save_ranked_manifest
from .dataset.report import REPORT_FORMATS, ScoreReport, format_float, render_report, write_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


def setup_logging(verbose: bool = False):
    """Setup logging configuration."""
    level = logging.DEBUG if verbose else logging.INFO

    # Configure root logger; stdout is reserved for results
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%H:%M:%S',
        stream=sys.stderr
    )

    # Reduce noise from external libraries
    logging.getLogger('PIL').setLevel(logging.WARNING)


class ScootArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _metric_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group('metric configuration')
    group.add_argument(
        '--grid-k',
        type=int,
        help='Blocks per image side (default: 4)',
        metavar='K'
    )
    group.add_argument(
        '--levels',
        type=int,
        help='Number of tone grades (default: 6)',
        metavar='N'
    )
    group.add_argument(
        '--stats',
        nargs='+',
        help='Statistics as letter codes H, C, E, e.g. "CE" or "H C E" (default: CE)',
        metavar='CODE'
    )
    group.add_argument(
        '--directions',
        nargs='+',
        help='Direction angles in degrees, y axis down (90 = one row below), '
             'or "all8" (default: 90 135 180 225)',
        metavar='ANGLE'
    )
    return parent


def _protocol_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group('benchmark protocol')
    group.add_argument(
        '--downsize-px',
        type=int,
        help='mm1: pixels removed from each reference dimension (default: 5)',
        metavar='PX'
    )
    group.add_argument(
        '--rotate-deg',
        type=float,
        help='mm2: counter-clockwise rotation of the reference (default: 5)',
        metavar='DEG'
    )
    group.add_argument(
        '--rotate-canvas',
        choices=('crop', 'expand'),
        help='mm2: keep the reference size or grow to the rotated frame (default: crop)'
    )
    group.add_argument(
        '--stroke-threshold',
        type=int,
        help='mm3: gray threshold for the light-stroke reference (default: 170)',
        metavar='GRAY'
    )
    return parent


def _run_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group('output and execution')
    group.add_argument(
        '--out', '-o',
        type=Path,
        help='Write the report to FILE',
        metavar='FILE'
    )
    group.add_argument(
        '--format',
        choices=REPORT_FORMATS,
        help='Report format (default: from the --out suffix, else json)'
    )
    group.add_argument(
        '--jobs', '-j',
        type=int,
        help='Items evaluated in parallel (default: $SCOOT_JOBS or 1)',
        metavar='N'
    )
    return parent


def create_argument_parser() -> argparse.ArgumentParser:
    """Create the command line argument parser."""
    parser = ScootArgumentParser(
        prog='scoot',
        description='Scoot - structure co-occurrence texture similarity for facial sketches',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s score synthetic.png reference.png          # Score one sketch
  %(prog)s batch ranked.json --out scores.csv         # Score a whole manifest
  %(prog)s mm1 ranked.json --out mm1.json             # Downsize stability
  %(prog)s mm2 ranked.json --rotate-deg 5             # Rotation stability
  %(prog)s mm3 ranked.json --stroke-threshold 170     # Light-stroke test
  %(prog)s judge triplets.json                        # 2AFC agreement
  %(prog)s sweep ranked.json --k-list 1 2 4 8 --levels-list 2 4 6 8
  %(prog)s fixtures ./fixtures --count 20             # Synthetic benchmark set
  %(prog)s index ./dataset --out ranked.json          # Manifest from a dataset tree

Exit status:
  0 success, 1 usage or configuration error, 2 data error

Environment Variables:
  SCOOT_JOBS      Default for --jobs
  SCOOT_VERBOSE   Set to enable debug logging
        """
    )
    parser.add_argument(
        '--verbose', '-v',
        action='store_true',
        help='Enable verbose logging'
    )
    parser.add_argument(
        '--version',
        action='version',
        version=f'%(prog)s {__version__}'
    )

    metric, protocol, run = _metric_options(), _protocol_options(), _run_options()
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')
    subparsers.required = True

    score = subparsers.add_parser('score', parents=[metric], help='Score one synthetic sketch against a reference')
    score.add_argument('synthetic', type=Path, help='Synthetic sketch (resized to the reference if needed)')
    score.add_argument('reference', type=Path, help='Reference sketch')

    batch = subparsers.add_parser('batch', parents=[metric, run],
                                  help='Score every candidate of a ranked manifest')
    batch.add_argument('manifest', type=Path, help='Ranked manifest (JSON)')

    for name, help_text in (('mm1', 'Ranking stability under a downsized reference'),
                            ('mm2', 'Ranking stability under a rotated reference'),
                            ('mm3', 'Synthetic sketches against light-stroke references')):
        measure = subparsers.add_parser(name, parents=[metric, protocol, run], help=help_text)
        measure.add_argument('manifest', type=Path, help='Ranked manifest (JSON)')

    judge = subparsers.add_parser('judge', parents=[metric, run], help='Agreement with 2AFC human judgments')
    judge.add_argument('triplets', type=Path, help='Triplet manifest (JSON)')

    sweep = subparsers.add_parser('sweep', parents=[metric, protocol, run],
                                  help='Run measures over a grid of k, levels and statistics')
    sweep.add_argument('manifest', type=Path, nargs='?', help='Ranked manifest (JSON)')
    sweep.add_argument('--k-list', type=int, nargs='+', help='Grid sizes (default: --grid-k)', metavar='K')
    sweep.add_argument('--levels-list', type=int, nargs='+', help='Grade counts (default: --levels)', metavar='N')
    sweep.add_argument('--stats-list', nargs='+', help='Statistic combinations, e.g. H C E HC HE CE HCE',
                       metavar='CODE')
    sweep.add_argument('--measures', nargs='+', choices=MEASURES, default=list(RANKED_MEASURES),
                       help='Measures to run (default: %(default)s)')
    sweep.add_argument('--triplets', type=Path, help='Triplet manifest, required for judge', metavar='FILE')

    fixtures = subparsers.add_parser('fixtures', help='Write a synthetic benchmark set')
    fixtures.add_argument('out_dir', type=Path, help='Destination directory')
    fixtures.add_argument('--count', type=int, default=20, help='Reference sketches (default: %(default)s)')
    fixtures.add_argument('--size', type=int, default=128, help='Sketch side in pixels (default: %(default)s)')
    fixtures.add_argument('--seed', type=int, default=0, help='Random seed (default: %(default)s)')

    index = subparsers.add_parser('index', help='Build a ranked manifest from reference/ and synthetic/<algorithm>/')
    index.add_argument('root', type=Path, help='Dataset root')
    index.add_argument('--out', '-o', type=Path, required=True, help='Manifest to write', metavar='FILE')

    return parser


def resolve_jobs(value: Optional[int]) -> int:
    """--jobs, else $SCOOT_JOBS, else 1."""
    if value is None:
        env = os.environ.get('SCOOT_JOBS', '').strip()
        if not env:
            return 1
        try:
            value = int(env)
        except ValueError:
            raise InvalidParameterError(f"SCOOT_JOBS must be an integer, got {env!r}") from None
    if value < 1:
        raise InvalidParameterError(f"jobs must be at least 1, got {value}")
    return value


def resolve_format(args) -> str:
    if args.format:
        return args.format
    if args.out is not None and args.out.suffix.lower() == '.csv':
        return 'csv'
    return 'json'


def emit_report(report: ScoreReport, args, print_rows: bool = False) -> None:
    """Write the report to --out, or print it when the rows are the result."""
    report_format = resolve_format(args)
    if args.out is not None:
        write_report(report, args.out, report_format)
    elif print_rows:
        sys.stdout.write(render_report(report, args.format or 'csv'))


def display_aggregate(report: ScoreReport) -> None:
    """Print the aggregate of a single-measure report."""
    attr = MEASURE_FIELDS[report.command]
    value = getattr(report.aggregate, attr)
    excluded = sum(1 for row in report.rows if not row.ok)
    text = "n/a" if value is None else format_float(value)
    suffix = f" ({excluded} of {len(report.rows)} items excluded)" if excluded else ""
    print(f"{attr}: {text}{suffix}")


async def run_command(args) -> int:
    """Dispatch a parsed command line."""
    if args.command == 'fixtures':
        if args.count < 1 or args.size < 16:
            raise InvalidParameterError("fixtures need --count >= 1 and --size >= 16")
        ranked, triplets = make_fixture_set(args.out_dir, args.count, (args.size, args.size), args.seed)
        print(ranked)
        print(triplets)
        return EXIT_OK

    if args.command == 'index':
        manifest = index_dataset(args.root)
        save_ranked_manifest(manifest, args.out)
        print(f"{len(manifest)} entries written to {args.out}")
        return EXIT_OK

    # Validate everything before any work starts
    config = ScootConfig.from_cli_args(args)
    protocol = ProtocolConfig.from_cli_args(args)
    jobs = resolve_jobs(getattr(args, 'jobs', None))
    logger.debug("Configuration: %s", config)
    benchmark = ScootBenchmark(config, protocol, jobs)

    if args.command == 'score':
        value = await benchmark.score(args.synthetic, args.reference)
        print(f"{value:.6f}")
        return EXIT_OK

    if args.command == 'batch':
        report = await benchmark.batch(args.manifest)
        emit_report(report, args, print_rows=True)
        return EXIT_OK

    if args.command == 'sweep':
        report = await benchmark.sweep(
            args.manifest,
            args.k_list or [config.grid_k],
            args.levels_list or [config.levels],
            args.stats_list or [stats_code(config.stats)],
            args.measures,
            args.triplets,
        )
        emit_report(report, args, print_rows=True)
        return EXIT_OK

    runners = {
        'mm1': lambda: benchmark.mm1(args.manifest),
        'mm2': lambda: benchmark.mm2(args.manifest),
        'mm3': lambda: benchmark.mm3(args.manifest),
        'judge': lambda: benchmark.judge(args.triplets),
    }
    report = await runners[args.command]()
    emit_report(report, args)
    display_aggregate(report)
    return EXIT_OK


async def async_main(args: Optional[List[str]] = None) -> int:
    """Async main entry point for the CLI."""
    parser = create_argument_parser()
    parsed_args = parser.parse_args(args)

    # Setup logging
    env_verbose = bool(os.environ.get('SCOOT_VERBOSE', ""))
    setup_logging(parsed_args.verbose or env_verbose)

    try:
        return await run_command(parsed_args)

    except InvalidParameterError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE

    except DataError as e:
        logger.error("Data error: %s", e)
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_DATA

    except ScootError as e:
        logger.error("Scoot error: %s", e)
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_DATA

    except Exception as e:
        logger.exception("Unexpected error: %s", e)
        print(f"Unexpected error: {e}", file=sys.stderr)
        return EXIT_DATA


def main(args: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI."""
    try:
        return anyio.run(async_main, args)
    except KeyboardInterrupt:
        print("\nInterrupted by user.", file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
