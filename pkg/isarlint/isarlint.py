import hashlib
import os
import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from jina.logging.logger import JinaLogger
from jina.logging.profile import TimeContext
from tqdm import tqdm

from .commons import PathLike, discover_theories, read_theory
from .isar_model import split_commands
from .keywords import BUILTIN_KEYWORDS, load_keywords
from .lint_engine import Report, Selection, lint_document, resolve_selection
from .lint_rules import DEFAULT_RULE_SETS, RuleSets, builtin_store
from .outer_lexer import tokenize


class LintRun(NamedTuple):
    reports: List[Report]
    errors: List[Tuple[str, str]]


class IsarLinter:
    """Lints Isabelle theory files with a fixed selection of lints.

    The keyword table, rule sets, lint store and selection are set up once;
    afterwards the linter only reads them, so files can be linted from
    several threads.
    """

    def __init__(
        self,
        bundles: Sequence[str] = (),
        enable: Sequence[str] = (),
        disable: Sequence[str] = (),
        keywords_file: Optional[PathLike] = None,
        rule_sets: Optional[RuleSets] = None,
        threads: int = 1,
        keep_going: bool = False,
        verbose: bool = False,
        progress: bool = False,
        *args,
        **kwargs,
    ):
        """
        :param bundles: bundles to activate. Without a standalone bundle the
            `default` bundle is used; add-on bundles extend it
        :param enable: extra lints to activate
        :param disable: lints to deactivate, applied last
        :param keywords_file: `word<TAB>category` file overlaid on the built-in
            keyword table
        :param rule_sets: method, command and attribute sets and thresholds
            the built-in lints use. Validated against the keyword table
        :param threads: nr of files linted in parallel. 0 or less means one
            thread per CPU
        :param keep_going: lint the remaining files when one cannot be read
        :param verbose: print log output
        :param progress: show a progress bar over files on standard error
            when it is a terminal
        """
        self.threads = threads if threads > 0 else (os.cpu_count() or 1)
        self.keep_going = keep_going
        self.progress = progress
        self.logger = JinaLogger(self.__class__.__name__, quiet=not verbose)

        self.keywords = (
            load_keywords(keywords_file) if keywords_file is not None else BUILTIN_KEYWORDS
        )
        self.rule_sets = (rule_sets or DEFAULT_RULE_SETS).validate(self.keywords)
        self.store = builtin_store(self.rule_sets, verbose=verbose)
        self.selection: Selection = resolve_selection(self.store, bundles, enable, disable)
        self.logger.debug(f'active lints: {", ".join(self.selection)}')

        self._cache: Dict[str, Tuple[str, Report]] = {}  # path to (content digest, report)
        self._lock = threading.Lock()

    def lint_text(self, text: str, path: str = '<text>') -> Report:
        """Lint theory source

        :param text: the theory text
        :param path: the path recorded in the report
        :return: the report, with the time spent in `elapsed` (seconds)
        """
        with TimeContext(f'linting {path}', self.logger) as timer:
            commands = split_commands(tokenize(text, self.keywords))
            report = lint_document(commands, self.selection, self.store, path)
        report.elapsed = timer.duration
        return report

    def lint_file(self, path: PathLike) -> Report:
        """Lint one theory file. The last report per path is kept and returned
        again while the file content stays the same.

        :raises OSError: if the file cannot be read
        :raises UnicodeDecodeError: if it is not UTF-8
        """
        key = str(path)
        text = read_theory(path)
        digest = hashlib.sha256(text.encode('utf-8')).hexdigest()
        with self._lock:
            cached = self._cache.get(key)
        if cached is not None and cached[0] == digest:
            return cached[1]
        report = self.lint_text(text, key)
        with self._lock:
            self._cache[key] = (digest, report)
        return report

    def _lint_or_error(self, path: PathLike):
        try:
            return self.lint_file(path)
        except (OSError, UnicodeDecodeError) as e:
            return e

    def lint_paths(self, paths: Iterable[PathLike]) -> LintRun:
        """Lint every theory under `paths`, directories searched recursively

        :return: the reports in path order, and `(path, message)` for every
            file that could not be read. Without `keep_going` the run stops
            collecting reports at the first such file.
        """
        files = discover_theories(paths)
        self.logger.info(f'linting {len(files)} theories with {self.threads} threads')
        reports: List[Report] = []
        errors: List[Tuple[str, str]] = []
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            outcomes = tqdm(
                executor.map(self._lint_or_error, files),
                total=len(files),
                desc='linting',
                unit='theory',
                file=sys.stderr,
                disable=None if self.progress else True,
            )
            for path, outcome in zip(files, outcomes):
                if isinstance(outcome, Report):
                    reports.append(outcome)
                    continue
                errors.append((str(path), str(outcome)))
                if not self.keep_going:
                    self.logger.error(f'cannot read {path}: {outcome}')
                    break
                self.logger.warning(f'skipping {path}: {outcome}')
        return LintRun(reports, errors)
