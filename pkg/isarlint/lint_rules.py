"""The built-in lint catalog and its bundles."""
from dataclasses import dataclass, fields
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .combinators import Parser, any_token, many, maybe, skip, some, word
from .commons import Severity
from .isar_model import (
    ATTRIBUTES,
    GOAL_KEYWORDS,
    TARGET,
    Attribute,
    Combinator,
    Command,
    CombinedMethod,
    MalformedMethod,
    Method,
    Restrict,
    SimpleMethod,
    StatementHead,
    count_combinators,
    iter_methods,
    method_source,
)
from .keywords import CommandCategory, KeywordTable
from .lint_engine import (
    AstLint,
    Edit,
    Lint,
    LintResult,
    LintStore,
    ParserLint,
    ProperCommandsLint,
)


def _words(text: str) -> FrozenSet[str]:
    return frozenset(text.split())


@dataclass(frozen=True)
class RuleSets:
    """Name sets and thresholds the built-in lints are calibrated with"""

    tactic_methods: FrozenSet[str] = _words(
        'insert subgoal_tac rule_tac erule_tac drule_tac frule_tac cut_tac '
        'induct_tac case_tac rotate_tac tactic'
    )
    low_level_methods: FrozenSet[str] = _words(
        'rule erule drule frule insert subst intro elim'
    )
    simplifier_methods: FrozenSet[str] = _words('simp simp_all auto fastforce force')
    bad_style_commands: FrozenSet[str] = _words('back apply_end')
    counterexample_commands: FrozenSet[str] = _words('nitpick quickcheck nunchaku')
    proof_finder_commands: FrozenSet[str] = _words('sledgehammer try try0 solve_direct')
    diagnostic_commands: FrozenSet[str] = _words('find_theorems find_consts')
    transforming_attributes: FrozenSet[str] = _words(
        'simplified unfolded folded rotated THEN OF of where'
    )
    apply_chain_threshold: int = 5

    COMMAND_SETS = (
        'bad_style_commands',
        'counterexample_commands',
        'proof_finder_commands',
        'diagnostic_commands',
    )

    @classmethod
    def keys(cls) -> List[str]:
        return [f.name for f in fields(cls)]

    def validate(self, keywords: KeywordTable) -> 'RuleSets':
        """
        :raises ValueError: if the chain threshold is below 2 or a command set
            names a word that is not a command of `keywords`
        """
        if self.apply_chain_threshold < 2:
            raise ValueError(
                f'apply_chain_threshold must be at least 2, got {self.apply_chain_threshold}'
            )
        for key in self.COMMAND_SETS:
            unknown = sorted(w for w in getattr(self, key) if not keywords.is_command(w))
            if unknown:
                raise ValueError(f'{key} names unknown commands: {", ".join(unknown)}')
        return self


DEFAULT_RULE_SETS = RuleSets()


def _command_words(names: Iterable[str]) -> Parser:
    return some(lambda t: t.is_command and t.source in names)


# Parser lints


class GlobalAttributeOnUnnamedLemma(ParserLint):
    name = 'global_attribute_on_unnamed_lemma'
    severity = Severity.ERROR
    short_description = 'Unnamed lemma with attributes'
    long_description = (
        'An unnamed lemma that is added to a global theorem set, e.g. with '
        '`[simp]` or `[cong]`, cannot be referred to or removed again by name. '
        'Give the lemma a name.'
    )

    def build_parser(self) -> Parser:
        return (
            _command_words(GOAL_KEYWORDS) + maybe(TARGET) + ATTRIBUTES + skip(word(':'))
        )

    def on_match(self, command: Command, value) -> Iterator[LintResult]:
        attributes = value[-1]
        if attributes:
            names = ', '.join(str(a) for a in attributes)
            yield self.result(command, f'Unnamed {command.keyword} with attributes [{names}]')


class CounterExampleFinder(ParserLint):
    name = 'counter_example_finder'
    severity = Severity.ERROR
    short_description = 'Counter-example finder without expected outcome'
    long_description = (
        'Counter-example finders such as nitpick or quickcheck may stay in a '
        'finished theory only as regression tests with an `expect` option. '
        'Nitpick used as a model finder with `satisfy` is accepted.'
    )

    def build_parser(self) -> Parser:
        options = maybe(ATTRIBUTES) + skip(many(any_token))
        return _command_words(self.rule_sets.counterexample_commands) + options

    def on_match(self, command: Command, value) -> Iterator[LintResult]:
        _, options = value
        allowed = {'expect'} | ({'satisfy'} if command.keyword == 'nitpick' else set())
        if not any(option.name in allowed for option in options or ()):
            yield self.result(command, f'{command.keyword} without an expect option')


def _option_enabled(option: Attribute) -> bool:
    args = option.arg_text
    if not args:
        return True
    value = args[1] if len(args) > 1 and args[0] == '=' else args[0]
    return value.lower() == 'true'


class SmtOracle(ParserLint):
    name = 'smt_oracle'
    severity = Severity.ERROR
    short_description = 'SMT oracle enabled'
    long_description = (
        'Setting `smt_oracle` trusts the external SMT solver without proof '
        'reconstruction. It is not allowed in the AFP.'
    )

    def build_parser(self) -> Parser:
        config = skip(word('[')) + ATTRIBUTES + skip(word(']'))
        return many(config | skip(any_token))

    def on_match(self, command: Command, value) -> Iterator[LintResult]:
        for options in value:
            if isinstance(options, tuple) and any(
                o.name == 'smt_oracle' and _option_enabled(o) for o in options
            ):
                yield self.result(command, 'The SMT oracle is enabled')
                return


class _CommandMembership(ParserLint):
    rule_set: str
    message: str

    def build_parser(self) -> Parser:
        return _command_words(getattr(self.rule_sets, self.rule_set))

    def on_match(self, command: Command, value) -> Iterator[LintResult]:
        yield self.result(command, self.message.format(keyword=command.keyword))


class BadStyleCommand(_CommandMembership):
    name = 'bad_style_command'
    severity = Severity.ERROR
    short_description = 'Command that is bad style in finished theories'
    long_description = (
        '`back` depends on the order in which alternatives are enumerated, '
        '`apply_end` works on an outer goal from inside a proof block.'
    )
    rule_set = 'bad_style_commands'
    message = 'Bad style command {keyword}'


class ProofFinder(_CommandMembership):
    name = 'proof_finder'
    severity = Severity.INFO
    short_description = 'Interactive proof finder left in the theory'
    long_description = (
        'Proof finders such as sledgehammer are useful while developing a '
        'proof, but finished sessions should not run them.'
    )
    rule_set = 'proof_finder_commands'
    message = 'Proof finder {keyword} in theory'


class DiagnosticCommand(_CommandMembership):
    name = 'diagnostic_command'
    severity = Severity.INFO
    short_description = 'Left-over diagnostic command'
    long_description = 'Search commands like find_theorems belong in interactive sessions.'
    rule_set = 'diagnostic_commands'
    message = 'Diagnostic command {keyword} in theory'


# AST lints


class TacticProofs(AstLint):
    name = 'tactic_proofs'
    severity = Severity.ERROR
    short_description = 'Proof uses tactic methods'
    long_description = (
        'Tactic methods like `subgoal_tac` or `rule_tac` rely on generated '
        'names and goal numbering, so the proof breaks on small changes.'
    )

    def visit_method(self, command: Command, method: Method) -> Iterator[LintResult]:
        tactics = sorted(
            {
                m.name
                for m in iter_methods(method)
                if isinstance(m, SimpleMethod) and m.name in self.rule_sets.tactic_methods
            }
        )
        if tactics:
            yield self.result(command, f'Tactic method {", ".join(tactics)} used')


class ImplicitRule(AstLint):
    name = 'implicit_rule'
    severity = Severity.WARN
    short_description = 'rule method without explicit rule'
    long_description = (
        'A bare `rule` picks some introduction or elimination rule from the '
        'context. Name the rule that is meant.'
    )

    def simple_method(self, command: Command, method: SimpleMethod) -> Iterator[LintResult]:
        if method.name == 'rule' and not method.args:
            yield self.result(command, 'Implicit rule application, name the rule')


class ComplexMethod(AstLint):
    name = 'complex_method'
    severity = Severity.WARN
    short_description = 'Method expression is hard to follow'
    long_description = (
        'A method with two or more combinators, or a modifier applied to a '
        'combined method, hides what happens to the goals. Split it up.'
    )

    def visit_method(self, command: Command, method: Method) -> Iterator[LintResult]:
        combinators = count_combinators(method)
        modified = any(
            isinstance(m, CombinedMethod) and m.modifiers for m in iter_methods(method)
        )
        if combinators >= 2 or modified:
            yield self.result(
                command, f'Complex method with {combinators} combinators'
            )


class AutoStructuralComposition(AstLint):
    name = 'auto_structural_composition'
    severity = Severity.INFO
    short_description = 'auto followed by structural composition'
    long_description = (
        '`auto; m` applies `m` to whatever goals `auto` leaves behind, which '
        'changes whenever the simplifier set changes.'
    )

    def combined_method(
        self, command: Command, method: CombinedMethod
    ) -> Iterator[LintResult]:
        left = method.left
        if (
            method.combinator is Combinator.STRUCT
            and isinstance(left, SimpleMethod)
            and left.name == 'auto'
        ):
            yield self.result(command, 'auto is followed by ;')


class ComplexIsarInitialMethod(AstLint):
    name = 'complex_isar_initial_method'
    severity = Severity.WARN
    short_description = 'Structured proof starts with a complex method'
    long_description = (
        'The initial method of `proof` should set up the proof structure, '
        'e.g. with `cases`, `induct` or `rule`. Simplifier calls or combined '
        'methods leave the reader guessing what the goals are.'
    )

    def visit_method(self, command: Command, method: Method) -> Iterator[LintResult]:
        if command.keyword != 'proof':
            return
        if (
            isinstance(method, CombinedMethod)
            or method.modifiers
            or (
                isinstance(method, SimpleMethod)
                and method.name in self.rule_sets.simplifier_methods
            )
        ):
            yield self.result(command, 'Complex initial method of a structured proof')


class LemmaTransformingAttribute(AstLint):
    name = 'lemma_transforming_attribute'
    severity = Severity.WARN
    short_description = 'Lemma declared with a transforming attribute'
    long_description = (
        'Attributes like `simplified` or `OF` change the statement that gets '
        'stored, so it differs from the one written down.'
    )

    def visit_statement(self, command: Command, head: StatementHead) -> Iterator[LintResult]:
        if head.keyword not in GOAL_KEYWORDS and head.keyword != 'lemmas':
            return
        attributes = list(head.attributes)
        for fact in head.facts:
            attributes.extend(fact.attributes)
        found = sorted(
            {a.name for a in attributes if a.name in self.rule_sets.transforming_attributes}
        )
        if found:
            yield self.result(command, f'Transforming attribute {", ".join(found)}')


class AxiomatizationWithWhere(AstLint):
    name = 'axiomatization_with_where'
    severity = Severity.ERROR
    short_description = 'Axiomatization introduces axioms'
    long_description = (
        'Axioms given in the `where` clause of an axiomatization are not '
        'checked and may make the theory inconsistent.'
    )

    def visit_statement(self, command: Command, head: StatementHead) -> Iterator[LintResult]:
        if head.keyword == 'axiomatization' and head.has_where_clause:
            yield self.result(command, 'Axiomatization with axioms')


# Proper-commands lints


def _methods_or_none(command: Command) -> Optional[List[Method]]:
    try:
        return command.methods()
    except MalformedMethod:
        return None


class ApplyIsarSwitch(ProperCommandsLint):
    name = 'apply_isar_switch'
    severity = Severity.WARN
    short_description = 'Structured proof after apply steps'
    long_description = (
        'Opening `proof` right after `apply` steps relies on the exact goal '
        'state the apply script leaves, which breaks easily.'
    )

    def lint(self, commands: Sequence[Command]) -> Iterator[LintResult]:
        for previous, command in zip(commands, commands[1:]):
            if command.keyword == 'proof' and previous.keyword == 'apply':
                yield self.result(command, 'Switch from apply script to structured proof')


class LowLevelApplyChain(ProperCommandsLint):
    name = 'low_level_apply_chain'
    severity = Severity.INFO
    short_description = 'Long chain of low-level apply steps'
    long_description = (
        'A long chain of single rule applications is hard to read; a '
        'structured proof or a more powerful method says more.'
    )

    def _is_low_level(self, command: Command) -> bool:
        if command.keyword != 'apply':
            return False
        methods = _methods_or_none(command)
        return (
            methods is not None
            and isinstance(methods[0], SimpleMethod)
            and methods[0].name in self.rule_sets.low_level_methods
        )

    def lint(self, commands: Sequence[Command]) -> Iterator[LintResult]:
        run: List[Command] = []
        for command in list(commands) + [None]:
            if command is not None and self._is_low_level(command):
                run.append(command)
                continue
            if len(run) >= self.rule_sets.apply_chain_threshold:
                yield self.result(
                    run[0],
                    f'{len(run)} consecutive low-level apply steps',
                    range=run[0].range.span(run[-1].range),
                )
            run = []


class GlobalAttributeChanges(ProperCommandsLint):
    name = 'global_attribute_changes'
    severity = Severity.INFO
    short_description = 'Attribute declared and removed again'
    long_description = (
        'A theory that adds a fact to a global set with `declare` and removes '
        'it again later (or the other way round) makes the set depend on the '
        'position in the theory. Use local `supply` or `using` instead.'
    )

    def lint(self, commands: Sequence[Command]) -> Iterator[LintResult]:
        added: Dict[Tuple[str, str], bool] = {}
        for command in commands:
            if command.keyword != 'declare':
                continue
            try:
                facts = command.head().facts
            except ValueError:
                continue
            changed: Set[Tuple[str, str]] = set()
            for fact in facts:
                if fact.name is None:
                    continue
                for attribute in fact.attributes:
                    if attribute.arg_text not in ((), ('del',)):
                        continue
                    key = (fact.name, attribute.name)
                    polarity = not attribute.arg_text
                    if key in added and added[key] != polarity and key not in changed:
                        changed.add(key)
                        yield self.result(
                            command,
                            f'{attribute.name} of {fact.name} is '
                            f'{"added back" if polarity else "removed"} again',
                        )
                    added[key] = polarity


_CONTINUING_CATEGORIES = (CommandCategory.PROOF_STEP, CommandCategory.PROOF_OPEN)


def _continues_proof(command: Command) -> bool:
    return command.keyword == 'by' or command.category in _CONTINUING_CATEGORIES


class UnrestrictedAuto(ProperCommandsLint):
    name = 'unrestricted_auto'
    severity = Severity.ERROR
    short_description = 'auto in the middle of a proof'
    long_description = (
        'The goals `auto` leaves behind depend on the simplifier and '
        'classical sets. A later step that works on them breaks easily. Use '
        '`auto` only to finish a proof, or restrict it to one goal.'
    )

    def _is_unrestricted(self, command: Command) -> bool:
        if command.keyword != 'apply':
            return False
        methods = _methods_or_none(command)
        if methods is None or not isinstance(methods[0], SimpleMethod):
            return False
        method = methods[0]
        return method.name == 'auto' and not any(
            isinstance(m, Restrict) for m in method.modifiers
        )

    def lint(self, commands: Sequence[Command]) -> Iterator[LintResult]:
        for command, following in zip(commands, commands[1:]):
            if _continues_proof(following) and self._is_unrestricted(command):
                yield self.result(command, 'Unrestricted auto that is not the last step')


# proof steps that state a new goal
_CLAIMS = frozenset({'have', 'show', 'hence', 'thus', 'obtain', 'consider', 'subgoal'})


def _opens_goal(command: Command) -> bool:
    return command.category is CommandCategory.GOAL_STATEMENT or command.keyword in _CLAIMS


class UseBy(ProperCommandsLint):
    name = 'use_by'
    severity = Severity.INFO
    short_description = 'Short apply script can be a by'
    long_description = (
        'A proof of one or two `apply` steps closed by `done` reads better as '
        '`by m1 m2`.'
    )
    MAX_STEPS = 2

    def lint(self, commands: Sequence[Command]) -> Iterator[LintResult]:
        # None while the applies seen so far are not a whole proof; a
        # script at the very start has no goal command before it
        run: Optional[List[Command]] = None
        for previous, command in zip([None, *commands], commands):
            if command.keyword == 'apply':
                if run is not None:
                    run.append(command)
                elif previous is None or _opens_goal(previous):
                    run = [command]
                continue
            if command.keyword == 'done' and run and len(run) <= self.MAX_STEPS:
                if all(_methods_or_none(c) is not None for c in run):
                    replacement = 'by ' + ' '.join(method_source(c) for c in run)
                    span = run[0].range.span(command.range)
                    yield self.result(
                        run[0],
                        f'Use "{replacement}"',
                        range=span,
                        edit=Edit(span, replacement),
                    )
            run = None


BUILTIN_LINTS = (
    ApplyIsarSwitch,
    AutoStructuralComposition,
    AxiomatizationWithWhere,
    BadStyleCommand,
    ComplexIsarInitialMethod,
    ComplexMethod,
    CounterExampleFinder,
    DiagnosticCommand,
    GlobalAttributeChanges,
    GlobalAttributeOnUnnamedLemma,
    ImplicitRule,
    LemmaTransformingAttribute,
    LowLevelApplyChain,
    ProofFinder,
    SmtOracle,
    TacticProofs,
    UnrestrictedAuto,
    UseBy,
)

FOUNDATIONAL = (
    'auto_structural_composition',
    'global_attribute_changes',
    'low_level_apply_chain',
    'apply_isar_switch',
    'complex_isar_initial_method',
    'complex_method',
    'implicit_rule',
    'lemma_transforming_attribute',
    'bad_style_command',
    'global_attribute_on_unnamed_lemma',
    'tactic_proofs',
    'unrestricted_auto',
)

BUILTIN_BUNDLES: Dict[str, Tuple[Tuple[str, ...], bool]] = {
    'foundational': (FOUNDATIONAL, False),
    'default': (FOUNDATIONAL + ('axiomatization_with_where',), False),
    'afp_mandatory': (
        (
            'bad_style_command',
            'counter_example_finder',
            'global_attribute_on_unnamed_lemma',
            'smt_oracle',
        ),
        False,
    ),
    'pedantic': (('use_by',), True),
    'non_interactive': (
        ('proof_finder', 'diagnostic_command', 'counter_example_finder'),
        True,
    ),
}


def builtin_lints(rule_sets: RuleSets = DEFAULT_RULE_SETS) -> List[Lint]:
    return [lint(rule_sets) for lint in BUILTIN_LINTS]


def builtin_store(
    rule_sets: RuleSets = DEFAULT_RULE_SETS, verbose: bool = False, freeze: bool = True
) -> LintStore:
    """A store with every built-in lint and bundle

    :param rule_sets: name sets and thresholds handed to the lints
    :param verbose: let the store log registrations
    :param freeze: freeze the store before returning it
    """
    store = LintStore(verbose=verbose)
    for lint in builtin_lints(rule_sets):
        store.register(lint)
    for name, (members, add_on) in BUILTIN_BUNDLES.items():
        store.register_bundle(name, members, add_on=add_on)
    return store.freeze() if freeze else store
