"""Command-line entry point `isar-lint`."""
import argparse
import configparser
import sys
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, TextIO

from .commons import ENCODING, PathLike, Severity
from .isarlint import IsarLinter
from .keywords import KeywordFileError
from .lint_engine import Report, UnknownBundle, UnknownLint
from .lint_rules import DEFAULT_RULE_SETS, RuleSets, builtin_store
from .presenters import PRESENTERS, aggregate_stats, generate_docs, list_lints

EXIT_CLEAN = 0
EXIT_LINTS = 1
EXIT_ERROR = 2

FORMATS = tuple(PRESENTERS)
FAIL_LEVELS = ('info', 'warn', 'error', 'none')
LIST_KEYS = ('bundles', 'enable', 'disable')
_SECTION = 'isarlint'


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    paths: List[str] = field(default_factory=list)
    bundles: List[str] = field(default_factory=list)
    enable: List[str] = field(default_factory=list)
    disable: List[str] = field(default_factory=list)
    format: str = 'text'
    fail_level: Optional[Severity] = Severity.ERROR
    stats: bool = False
    keywords: Optional[str] = None
    threads: int = 1
    keep_going: bool = False
    verbose: bool = False
    timing: bool = False
    output: Optional[str] = None
    rule_sets: RuleSets = DEFAULT_RULE_SETS


def _split_list(value: str) -> List[str]:
    return [item.strip() for item in value.split(',') if item.strip()]


def parse_fail_level(value: str) -> Optional[Severity]:
    if value.strip().lower() == 'none':
        return None
    return Severity.parse(value)


def _parse_int(key: str, value: str, source: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f'{source}: {key} must be an integer, got {value!r}') from None


def parse_config(text: str, source: str = '<config>') -> Dict[str, object]:
    """Read `key = value` lines into typed settings

    :raises ConfigError: for unknown keys or values of the wrong type
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(f'[{_SECTION}]\n{text}', source=source)
    except configparser.Error as e:
        raise ConfigError(f'{source}: {e}') from None
    rule_keys = RuleSets.keys()
    settings: Dict[str, object] = {}
    overrides: Dict[str, object] = {}
    for key, value in parser.items(_SECTION):
        if key in LIST_KEYS:
            settings[key] = _split_list(value)
        elif key == 'fail_level':
            try:
                settings[key] = parse_fail_level(value)
            except ValueError as e:
                raise ConfigError(f'{source}: {e}') from None
        elif key == 'format':
            if value not in FORMATS:
                raise ConfigError(f'{source}: unknown format {value!r}')
            settings[key] = value
        elif key == 'threads':
            settings[key] = _parse_int(key, value, source)
        elif key == 'keywords':
            settings[key] = value
        elif key == 'apply_chain_threshold':
            overrides[key] = _parse_int(key, value, source)
        elif key in rule_keys:
            overrides[key] = frozenset(_split_list(value))
        else:
            raise ConfigError(f'{source}: unknown configuration key {key!r}')
    if overrides:
        settings['rule_sets'] = replace(DEFAULT_RULE_SETS, **overrides)
    return settings


def load_config(path: PathLike) -> Dict[str, object]:
    try:
        with open(path, 'r', encoding=ENCODING) as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError(f'cannot read configuration {path}: {e}') from None
    return parse_config(text, source=str(path))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='isar-lint',
        description='Lint Isabelle/Isar theory files for formalization anti-patterns.',
    )
    parser.add_argument('paths', nargs='*', help='theory files or directories')
    parser.add_argument(
        '--bundle', action='append', default=None, dest='bundles', metavar='NAME',
        help='activate a bundle, repeatable',
    )
    parser.add_argument(
        '--enable', action='append', default=None, metavar='NAME',
        help='activate a lint, repeatable',
    )
    parser.add_argument(
        '--disable', action='append', default=None, metavar='NAME',
        help='deactivate a lint, repeatable',
    )
    parser.add_argument('--format', choices=FORMATS, default=None)
    parser.add_argument(
        '--fail-level', choices=FAIL_LEVELS, default=None,
        help='exit with 1 if a lint of this severity or higher triggers (default: error)',
    )
    parser.add_argument('--stats', action='store_true', help='add corpus statistics')
    parser.add_argument('--docs', action='store_true', help='print lint documentation')
    parser.add_argument('--list-lints', action='store_true', help='list registered lints')
    parser.add_argument('--keywords', metavar='FILE', help='extra keyword table')
    parser.add_argument('--config', metavar='FILE', help='key = value configuration')
    parser.add_argument('--threads', type=int, default=None)
    parser.add_argument(
        '--keep-going', action='store_true', help='skip unreadable files instead of stopping'
    )
    parser.add_argument('--verbose', action='store_true', help='print log output')
    parser.add_argument(
        '--timing', action='store_true', help='print per-theory latency to standard error'
    )
    parser.add_argument('--output', metavar='FILE', help='write the report to FILE')
    return parser


def _flag_list(values: Optional[List[str]]) -> Optional[List[str]]:
    if values is None:
        return None
    return [item for value in values for item in _split_list(value)]


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge command-line flags over the configuration file"""
    settings = load_config(args.config) if args.config else {}
    config = RunConfig(**settings)
    config.paths = list(args.paths)
    for key in LIST_KEYS:
        values = _flag_list(getattr(args, key))
        if values is not None:
            setattr(config, key, values)
    if args.format is not None:
        config.format = args.format
    if args.fail_level is not None:
        config.fail_level = parse_fail_level(args.fail_level)
    if args.threads is not None:
        config.threads = args.threads
    if args.keywords is not None:
        config.keywords = args.keywords
    config.stats = args.stats
    config.keep_going = args.keep_going
    config.verbose = args.verbose
    config.timing = args.timing
    config.output = args.output
    return config


def exit_code(reports: Sequence[Report], fail_level: Optional[Severity]) -> int:
    if fail_level is None:
        return EXIT_CLEAN
    failing = any(r.severity >= fail_level for report in reports for r in report)
    return EXIT_LINTS if failing else EXIT_CLEAN


def _emit(text: str, output: Optional[str], stdout: TextIO):
    if output is None:
        stdout.write(text)
        return
    with open(output, 'w', encoding=ENCODING) as fh:
        fh.write(text)


def _present(reports: List[Report], config: RunConfig) -> str:
    if config.format == 'text':
        return PRESENTERS['text'](reports, with_stats=config.stats)
    return PRESENTERS[config.format](reports)


def _print_timing(reports: List[Report], stderr: TextIO):
    stats = aggregate_stats(reports)
    if stats.median_latency is None:
        return
    stderr.write(
        f'theories: {stats.files}, median latency: {stats.median_latency * 1000:.1f} ms, '
        f'mean latency: {stats.mean_latency * 1000:.1f} ms\n'
    )


def main(
    argv: Optional[Sequence[str]] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> int:
    """Run the linter

    :return: 0 when no lint at or above the fail level triggered, 1 when one
        did, 2 for usage, configuration and IO errors
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_CLEAN if e.code in (0, None) else EXIT_ERROR
    try:
        config = resolve_config(args)
        if args.docs or args.list_lints:
            store = builtin_store(config.rule_sets)
            _emit(generate_docs(store) if args.docs else list_lints(store), config.output, stdout)
            return EXIT_CLEAN
        if not config.paths:
            stderr.write('isar-lint: no input paths given\n')
            return EXIT_ERROR
        try:
            linter = IsarLinter(
                bundles=config.bundles,
                enable=config.enable,
                disable=config.disable,
                keywords_file=config.keywords,
                rule_sets=config.rule_sets,
                threads=config.threads,
                keep_going=config.keep_going,
                verbose=config.verbose,
                progress=True,
            )
        except (KeywordFileError, UnknownLint, UnknownBundle, ConfigError):
            raise
        except (ValueError, OSError) as e:
            raise ConfigError(str(e)) from None
        run = linter.lint_paths(config.paths)
        for path, message in run.errors:
            stderr.write(f'isar-lint: cannot read {path}: {message}\n')
        if run.errors and not config.keep_going:
            return EXIT_ERROR
        _emit(_present(run.reports, config), config.output, stdout)
        if config.timing:
            _print_timing(run.reports, stderr)
        return exit_code(run.reports, config.fail_level)
    except (ConfigError, KeywordFileError, UnknownLint, UnknownBundle, OSError) as e:
        stderr.write(f'isar-lint: {e}\n')
        return EXIT_ERROR
