"""Lint interface, lint store, bundles and the per-document driver.

A lint has a name, a fixed severity and a check function over the proper
commands of a document. Concrete lints are written against one of three
abstractions:

- `ParserLint`: a token parser run on each command, with a hook for matches
- `AstLint`: visitor hooks over parsed proof methods and statement heads
- `ProperCommandsLint`: a function over the whole filtered command list
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import (
    Any,
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)

from jina.logging.logger import JinaLogger

from .combinators import NoParseError, Parser, parse_prefix
from .commons import Severity, SourceRange
from .isar_model import (
    METHOD_KEYWORDS,
    STATEMENT_KEYWORDS,
    Command,
    CombinedMethod,
    MalformedHead,
    MalformedMethod,
    Method,
    SimpleMethod,
    StatementHead,
    proper_commands,
)
from .outer_lexer import sloc_of_tokens


class DuplicateLint(ValueError):
    pass


class FrozenStore(RuntimeError):
    pass


class UnknownLint(LookupError):
    pass


class UnknownBundle(LookupError):
    pass


class Abstraction(str, Enum):
    PARSER = 'parser'
    AST = 'ast'
    PROPER_COMMANDS = 'proper_commands'

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class LintDescriptor:
    name: str
    severity: Severity
    short_description: str
    long_description: str = ''
    abstraction: Abstraction = Abstraction.PROPER_COMMANDS


class Edit(NamedTuple):
    range: SourceRange
    replacement: str


@dataclass(frozen=True)
class LintResult:
    lint_name: str
    severity: Severity
    message: str
    range: SourceRange
    command_index: int
    edit: Optional[Edit] = None

    def sort_key(self) -> Tuple[int, int, str]:
        return self.range.start_line, self.range.start_col, self.lint_name


@dataclass
class Report:
    """Results of linting one document, sorted by position then lint name"""

    path: str
    results: List[LintResult] = field(default_factory=list)
    sloc: int = 0
    elapsed: float = 0.0

    def __post_init__(self):
        self.results = sorted(self.results, key=LintResult.sort_key)

    def __len__(self) -> int:
        return len(self.results)

    def __iter__(self) -> Iterator[LintResult]:
        return iter(self.results)

    def max_severity(self) -> Optional[Severity]:
        return max((r.severity for r in self.results), default=None)


Check = Callable[[Sequence[Command]], Iterable[LintResult]]


class Lint(ABC):
    """Base of all built-in lints. An instance is the check function of its
    descriptor: calling it on the proper commands yields the results."""

    name: str
    severity: Severity
    short_description: str
    long_description: str = ''
    abstraction: Abstraction

    def __init__(self, rule_sets: Any = None):
        """
        :param rule_sets: the rule constants the lint reads, e.g. method name sets
        """
        self.rule_sets = rule_sets

    @property
    def descriptor(self) -> LintDescriptor:
        return LintDescriptor(
            self.name,
            self.severity,
            self.short_description,
            self.long_description,
            self.abstraction,
        )

    def result(
        self,
        command: Command,
        message: str,
        range: Optional[SourceRange] = None,
        edit: Optional[Edit] = None,
    ) -> LintResult:
        return LintResult(
            self.name,
            self.severity,
            message,
            command.range if range is None else range,
            command.index,
            edit,
        )

    def __call__(self, commands: Sequence[Command]) -> List[LintResult]:
        return list(self.lint(commands))

    @abstractmethod
    def lint(self, commands: Sequence[Command]) -> Iterable[LintResult]:
        ...


class ParserLint(Lint):
    """Runs `parser` on the proper tokens of every command. A command whose
    tokens do not start with a match produces nothing."""

    abstraction = Abstraction.PARSER

    def __init__(self, rule_sets: Any = None):
        super().__init__(rule_sets)
        self.parser = self.build_parser()

    @abstractmethod
    def build_parser(self) -> Parser:
        ...

    @abstractmethod
    def on_match(self, command: Command, value: Any) -> Iterable[LintResult]:
        ...

    def lint(self, commands: Sequence[Command]) -> Iterator[LintResult]:
        for command in commands:
            try:
                value, _ = parse_prefix(self.parser, command.proper_tokens)
            except NoParseError:
                continue
            yield from self.on_match(command, value)


class AstLint(Lint):
    """Visits the methods of `apply`/`by`/`proof` commands and the heads of
    statements. Commands that do not parse are skipped.

    Override `visit_method` to look at whole methods, or the node hooks
    `simple_method`/`combined_method` which the default walk calls for every
    node; override `visit_statement` for statement heads.
    """

    abstraction = Abstraction.AST

    def lint(self, commands: Sequence[Command]) -> Iterator[LintResult]:
        for command in commands:
            try:
                found: List[LintResult] = []
                if command.keyword in METHOD_KEYWORDS:
                    for method in command.methods():
                        found.extend(self.visit_method(command, method))
                if command.keyword in STATEMENT_KEYWORDS:
                    found.extend(self.visit_statement(command, command.head()))
            except (MalformedMethod, MalformedHead):
                continue
            yield from found

    def visit_method(self, command: Command, method: Method) -> Iterable[LintResult]:
        if isinstance(method, SimpleMethod):
            yield from self.simple_method(command, method)
        elif isinstance(method, CombinedMethod):
            yield from self.combined_method(command, method)
            yield from self.visit_method(command, method.left)
            yield from self.visit_method(command, method.right)

    def simple_method(self, command: Command, method: SimpleMethod) -> Iterable[LintResult]:
        return ()

    def combined_method(
        self, command: Command, method: CombinedMethod
    ) -> Iterable[LintResult]:
        return ()

    def visit_statement(self, command: Command, head: StatementHead) -> Iterable[LintResult]:
        return ()


class ProperCommandsLint(Lint):
    """Sees the whole list of proper commands at once, for lints that relate
    neighbouring commands"""

    abstraction = Abstraction.PROPER_COMMANDS


@dataclass(frozen=True)
class Bundle:
    name: str
    lints: FrozenSet[str]
    add_on: bool = False


@dataclass(frozen=True)
class Selection:
    names: FrozenSet[str] = frozenset()

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.names))

    def __len__(self) -> int:
        return len(self.names)


DEFAULT_BUNDLE = 'default'


class LintStore:
    """Repository of lints and bundles

    Lints and bundles are registered at startup; `freeze` makes the store
    read-only so it can be shared between linting threads.
    """

    def __init__(self, verbose: bool = False):
        """
        :param verbose: let the store's logger print registration events
        """
        self._lints: Dict[str, Tuple[LintDescriptor, Check]] = {}
        self._bundles: Dict[str, Bundle] = {}
        self._frozen = False
        self.logger = JinaLogger(self.__class__.__name__, quiet=not verbose)

    def _check_writable(self):
        if self._frozen:
            raise FrozenStore('The lint store is frozen')

    def register_lint(self, descriptor: LintDescriptor, check: Check) -> 'LintStore':
        self._check_writable()
        if descriptor.name in self._lints:
            raise DuplicateLint(f'Lint {descriptor.name!r} is already registered')
        self._lints[descriptor.name] = (descriptor, check)
        self.logger.debug(f'registered lint {descriptor.name}')
        return self

    def register(self, lint: Lint) -> 'LintStore':
        return self.register_lint(lint.descriptor, lint)

    def register_bundle(
        self, name: str, lints: Iterable[str], add_on: bool = False
    ) -> 'LintStore':
        """
        :param name: bundle name, unique within the store
        :param lints: member lint names, all registered already
        :param add_on: whether the bundle extends other bundles instead of
            standing for a selection of its own
        """
        self._check_writable()
        members = frozenset(lints)
        if not members:
            raise ValueError(f'Bundle {name!r} is empty')
        if name in self._bundles:
            raise ValueError(f'Bundle {name!r} is already registered')
        unknown = sorted(members - set(self._lints))
        if unknown:
            raise UnknownLint(f'Bundle {name!r} names unknown lints: {", ".join(unknown)}')
        self._bundles[name] = Bundle(name, members, add_on)
        return self

    def freeze(self) -> 'LintStore':
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    def __len__(self) -> int:
        return len(self._lints)

    def __contains__(self, name: str) -> bool:
        return name in self._lints

    @property
    def descriptors(self) -> List[LintDescriptor]:
        return [self._lints[name][0] for name in sorted(self._lints)]

    @property
    def bundles(self) -> Mapping[str, Bundle]:
        return {name: self._bundles[name] for name in sorted(self._bundles)}

    def get(self, name: str) -> Tuple[LintDescriptor, Check]:
        try:
            return self._lints[name]
        except KeyError:
            raise UnknownLint(f'Unknown lint {name!r}') from None

    def bundle(self, name: str) -> Bundle:
        try:
            return self._bundles[name]
        except KeyError:
            raise UnknownBundle(
                f'Unknown bundle {name!r}. Known bundles: {", ".join(sorted(self._bundles))}'
            ) from None

    def bundles_of(self, lint_name: str) -> List[str]:
        return [b.name for b in self.bundles.values() if lint_name in b.lints]


def register_lint(store: LintStore, descriptor: LintDescriptor, check: Check) -> LintStore:
    return store.register_lint(descriptor, check)


def resolve_selection(
    store: LintStore,
    bundles: Iterable[str] = (),
    enable: Iterable[str] = (),
    disable: Iterable[str] = (),
) -> Selection:
    """Turn bundle names and enable/disable lists into the set of active lints

    The standalone bundles given form the base; with none given, the
    `default` bundle does. Add-on bundles and `enable` extend the base,
    `disable` is subtracted last.

    :raises UnknownBundle: for a bundle name not in the store
    :raises UnknownLint: for an enabled or disabled name not in the store
    """
    chosen = [store.bundle(name) for name in bundles]
    enable, disable = list(enable), list(disable)
    for name in enable + disable:
        store.get(name)
    base = [b for b in chosen if not b.add_on]
    if not base and DEFAULT_BUNDLE in store.bundles:
        base = [store.bundle(DEFAULT_BUNDLE)]
    names = set()
    for b in base + [b for b in chosen if b.add_on]:
        names |= b.lints
    names |= set(enable)
    names -= set(disable)
    return Selection(frozenset(names))


def lint_document(
    commands: Sequence[Command],
    selection: Selection,
    store: LintStore,
    path: str = '',
) -> Report:
    """Run every selected lint over the proper commands of one document

    A lint that raises contributes no results; the failure is logged at debug
    level and the other lints still run.

    :param commands: all commands of the document, as from `split_commands`
    :param selection: the active lints
    :param store: where the selected lints are looked up
    :param path: the document path recorded in the report
    """
    proper = proper_commands(commands)
    results: List[LintResult] = []
    for name in selection:
        _, check = store.get(name)
        try:
            results.extend(check(proper))
        except Exception as e:
            store.logger.debug(f'lint {name} failed on {path or "<text>"}: {e!r}')
    sloc = sloc_of_tokens(t for command in commands for t in command.tokens)
    return Report(path, results, sloc)
