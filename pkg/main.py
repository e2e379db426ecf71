import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from dotenv import dotenv_values

from config.config import (
    DEFAULT_N,
    DEFAULT_RESOLUTION,
    DEFAULT_SAMPLER,
    DEFAULT_WORKERS,
    LOG_LEVEL,
    MAX_INTEGER_LIMIT,
    MAX_RESOLUTION,
    MIN_RESOLUTION,
    get_default_seed,
)
from src.exceptions import BrokenStickError, ConfigError
from src.model import SamplerKind
from src.predicates import EventDescriptor, all_events, parse_events
from src.probability import Method, cross_validate
from src.probability.validation import CrossValidationReport
from src.report import format_csv, format_integer_solutions, format_json, format_text
from src.solvers import PUBLISHED_INTEGER_SOLUTIONS, find_integer_circum_solutions
from src.visualization import RegionPlotter

logger = logging.getLogger(__name__)

FORMATTERS = {'json': format_json, 'csv': format_csv, 'text': format_text}

CONFIG_HELP = """
Config file: flat key=value lines, keys named after the long flags
(events, methods, n, seed, sampler, format, plot, resolution, out, limit,
workers, verify_paper). Flags override the file; the file overrides the
BROKEN_STICK_SEED environment variable.

Report schema (schema_version 1): JSON holds flat `records` (case, predicate,
method, value, uncertainty, n, seed, failures) and a `summary`; CSV holds the
summary, one row per case: schema_version, case, label, p_exists, p_acute,
ratio, <predicate>_<method>[_uncertainty] columns, agree and note.
"""


@dataclass
class RunConfig:
    events: List[EventDescriptor] = field(default_factory=all_events)
    n: int = DEFAULT_N
    seed: int = 0
    methods: List[Method] = field(default_factory=lambda: list(Method))
    output_format: str = 'text'
    sampler: SamplerKind = SamplerKind(DEFAULT_SAMPLER)
    plot: Optional[EventDescriptor] = None
    resolution: int = DEFAULT_RESOLUTION
    out: Optional[str] = None
    limit: Optional[int] = None
    verify_paper: bool = False
    workers: int = DEFAULT_WORKERS
    run_events: bool = True


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='broken-stick',
        description='Probabilities that the parts of a broken stick give a (acute) triangle.',
        epilog=CONFIG_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument('--events', nargs='+', help="'all', an interpretation, or interpretation:exists|acute")
    parser.add_argument('--methods', help="'all' or a comma list of closed-form, quadrature, monte-carlo")
    parser.add_argument('--n', help='Monte Carlo sample count')
    parser.add_argument('--seed', help='Monte Carlo seed (default BROKEN_STICK_SEED)')
    parser.add_argument('--sampler', choices=['direct', 'parallelogram'])
    parser.add_argument('--format', dest='format', choices=sorted(FORMATTERS))
    parser.add_argument('--plot', metavar='EVENT', help='Write an SVG of the event region')
    parser.add_argument('--resolution', help=f'Plot pixels per axis, {MIN_RESOLUTION}..{MAX_RESOLUTION}')
    parser.add_argument('--out', metavar='PATH', help='Report file, or the SVG path in plot mode')
    parser.add_argument('--config', metavar='FILE', help='key=value defaults file')
    parser.add_argument('--verify-paper', dest='verify_paper', action='store_true', default=None,
                        help='Check the published integer solutions are found')
    parser.add_argument('--limit', help='Largest circumradius for the integer solution search')
    parser.add_argument('--workers', help='Threads for Monte Carlo')
    return parser


def _to_int(name: str, value: str) -> int:
    try:
        return int(str(value).strip())
    except ValueError as e:
        raise ConfigError(f"{name} must be an integer, got '{value}'") from e


def _to_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    return str(value).strip().lower() in ('1', 'true', 'yes', 'on')


def _parse_methods(text: str) -> List[Method]:
    if text.strip().lower() == 'all':
        return list(Method)
    methods = []
    for item in text.split(','):
        try:
            methods.append(Method(item.strip().lower()))
        except ValueError as e:
            raise ConfigError(f"unknown method '{item}'") from e
    return methods


def load_config(args: argparse.Namespace) -> RunConfig:
    """
    Merge flags, the optional config file and the environment.

    Args:
        args: Parsed command line

    Returns:
        Validated RunConfig
    """
    settings: Dict[str, object] = {}
    if args.config:
        if not os.path.exists(args.config):
            raise ConfigError(f"config file '{args.config}' not found")
        for key, value in dotenv_values(args.config).items():
            if value is not None:
                settings[key.strip().lower().replace('-', '_')] = value
    for key, value in vars(args).items():
        if key != 'config' and value is not None:
            settings[key] = value

    config = RunConfig()
    if 'seed' not in settings:
        try:
            config.seed = get_default_seed()
        except ValueError as e:
            raise ConfigError(f"BROKEN_STICK_SEED must be an integer: {e}") from e
    if 'events' in settings:
        raw = settings['events']
        items = raw if isinstance(raw, list) else [raw]
        config.events = parse_events(part for item in items for part in str(item).split(',') if part.strip())
    if 'methods' in settings:
        config.methods = _parse_methods(str(settings['methods']))
    if 'n' in settings:
        config.n = _to_int('n', settings['n'])
    if 'seed' in settings:
        config.seed = _to_int('seed', settings['seed'])
    if 'sampler' in settings:
        try:
            config.sampler = SamplerKind(str(settings['sampler']).strip().lower())
        except ValueError as e:
            raise ConfigError(f"unknown sampler '{settings['sampler']}'") from e
    if 'format' in settings:
        config.output_format = str(settings['format']).strip().lower()
    if 'plot' in settings:
        events = EventDescriptor.parse(str(settings['plot']))
        if len(events) != 1:
            raise ConfigError("--plot needs a single event such as 'sides:exists'")
        config.plot = events[0]
    if 'resolution' in settings:
        config.resolution = _to_int('resolution', settings['resolution'])
    if 'out' in settings:
        config.out = str(settings['out'])
    if 'limit' in settings:
        config.limit = _to_int('limit', settings['limit'])
    if 'verify_paper' in settings:
        config.verify_paper = _to_bool(settings['verify_paper'])
    if 'workers' in settings:
        config.workers = _to_int('workers', settings['workers'])
    config.run_events = 'events' in settings or (config.plot is None and config.limit is None)

    validate_config(config)
    return config


def validate_config(config: RunConfig):
    if config.n < 1:
        raise ConfigError(f"n must be at least 1, got {config.n}")
    if not 0 <= config.seed < 2 ** 64:
        raise ConfigError(f"seed must be a 64-bit unsigned integer, got {config.seed}")
    if not MIN_RESOLUTION <= config.resolution <= MAX_RESOLUTION:
        raise ConfigError(f"resolution must lie in [{MIN_RESOLUTION}, {MAX_RESOLUTION}]")
    if config.output_format not in FORMATTERS:
        raise ConfigError(f"unknown format '{config.output_format}'")
    if config.workers < 1:
        raise ConfigError(f"workers must be at least 1, got {config.workers}")
    if config.limit is not None and not 1 <= config.limit <= MAX_INTEGER_LIMIT:
        raise ConfigError(f"limit must lie in [1, {MAX_INTEGER_LIMIT}], got {config.limit}")
    if not config.methods:
        raise ConfigError("no methods selected")


class BrokenStickApp:
    def __init__(self, config: RunConfig, stdout=None):
        self.config = config
        self.stdout = stdout or sys.stdout
        self.plotter = RegionPlotter()

    def setup(self) -> bool:
        """Prepare the output location."""
        try:
            directory = os.path.dirname(self.config.out) if self.config.out else ''
            if directory:
                os.makedirs(directory, exist_ok=True)
            return True
        except OSError as e:
            logger.error("Error during setup: %s", e)
            return False

    def run(self) -> int:
        """Run every requested mode; returns the process exit status."""
        status = 0
        if self.config.limit is not None:
            status = max(status, self._run_integer_solutions())
        if self.config.plot is not None:
            status = max(status, self._run_plot())
        if self.config.run_events:
            status = max(status, self._run_events())
        return status

    def _run_events(self) -> int:
        reports: List[CrossValidationReport] = []
        for event in self.config.events:
            logger.info("Evaluating %s", event)
            reports.append(cross_validate(event, self.config.n, self.config.seed, self.config.sampler,
                                          self.config.methods, self.config.workers))
        text = FORMATTERS[self.config.output_format](reports)
        report_to_file = self.config.out and self.config.plot is None
        self._emit(text, self.config.out if report_to_file else None)
        failed = [str(r.event) for r in reports if not r.passed]
        if failed:
            logger.warning("Cross-validation failed for %s", ', '.join(failed))
            return 1
        return 0

    def _run_plot(self) -> int:
        try:
            path, fraction = self.plotter.plot_region(self.config.plot, self.config.resolution, self.config.out)
        except OSError as e:
            logger.error("Could not write plot: %s", e)
            return 1
        print(f"{path}: area ratio {fraction:.6f}", file=self.stdout)
        return 0

    def _run_integer_solutions(self) -> int:
        solutions = find_integer_circum_solutions(self.config.limit)
        print(format_integer_solutions(solutions), end='', file=self.stdout)
        if not self.config.verify_paper:
            return 0
        expected = [q for q in PUBLISHED_INTEGER_SOLUTIONS if q[3] <= self.config.limit]
        missing = [q for q in expected if q not in solutions]
        print(f"published solutions found: {len(expected) - len(missing)}/{len(PUBLISHED_INTEGER_SOLUTIONS)}",
              file=self.stdout)
        if missing:
            print(f"missing: {missing}", file=self.stdout)
            return 1
        return 0

    def _emit(self, text: str, path: Optional[str]):
        if path:
            with open(path, 'w', encoding='utf-8') as handle:
                handle.write(text)
            logger.info("Report written to %s", path)
        else:
            self.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    logging.basicConfig(level=LOG_LEVEL, format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2

    app = BrokenStickApp(config, stdout)
    if not app.setup():
        return 2
    try:
        return app.run()
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2
    except BrokenStickError as e:
        logger.error("Run failed: %s", e)
        return 1
    except OSError as e:
        logger.error("Could not write output: %s", e)
        return 1


if __name__ == "__main__":
    sys.exit(main())
