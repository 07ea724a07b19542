"""Commands, proof methods and statement heads of a theory.

Everything here works on outer-syntax tokens only. Methods and statement
heads are parsed into a partial syntax tree: arguments stay raw tokens.
"""
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, reduce
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

from bidict import bidict

from .combinators import (
    NAME_KINDS,
    NoParseError,
    Parser,
    argument,
    finished,
    flatten,
    forward_decl,
    kind,
    many,
    maybe,
    name,
    oneplus,
    parse_prefix,
    skip,
    some,
    word,
)
from .commons import EMPTY_RANGE, SourceRange
from .keywords import CommandCategory
from .outer_lexer import IMPROPER_KINDS, Token, TokenKind

GOAL_KEYWORDS = frozenset(
    {'lemma', 'theorem', 'corollary', 'proposition', 'schematic_goal'}
)
STATEMENT_KEYWORDS = GOAL_KEYWORDS | {'declare', 'lemmas', 'axiomatization'}
METHOD_KEYWORDS = frozenset({'apply', 'apply_end', 'by', 'proof'})


class MalformedMethod(ValueError):
    def __init__(self, msg: str, range: SourceRange):
        super().__init__(msg)
        self.range = range


class MalformedHead(ValueError):
    def __init__(self, msg: str, range: SourceRange):
        super().__init__(msg)
        self.range = range


# Methods


class Combinator(str, Enum):
    SEQ = 'seq'
    STRUCT = 'struct'
    ALT = 'alt'

    def __str__(self) -> str:
        return self.value


COMBINATOR_SYMBOLS = bidict(
    {Combinator.SEQ: ',', Combinator.STRUCT: ';', Combinator.ALT: '|'}
)
BINDING_ORDER = (';', ',', '|')


@dataclass(frozen=True)
class TryOp:
    def __str__(self) -> str:
        return '?'


@dataclass(frozen=True)
class RepeatOp:
    def __str__(self) -> str:
        return '+'


@dataclass(frozen=True)
class Restrict:
    goals: int = 1

    def __str__(self) -> str:
        return f'[{self.goals}]'


Modifier = Union[TryOp, RepeatOp, Restrict]


@dataclass(frozen=True)
class SimpleMethod:
    name: str
    args: Tuple[Token, ...] = field(default=(), compare=False)
    modifiers: Tuple[Modifier, ...] = ()

    @property
    def arg_text(self) -> Tuple[str, ...]:
        return tuple(t.source for t in self.args)

    def structure(self):
        return ('simple', self.name, self.arg_text, self.modifiers)


@dataclass(frozen=True)
class CombinedMethod:
    left: 'Method'
    combinator: Combinator
    right: 'Method'
    modifiers: Tuple[Modifier, ...] = ()

    def structure(self):
        return (
            'combined',
            self.left.structure(),
            self.combinator,
            self.right.structure(),
            self.modifiers,
        )


@dataclass(frozen=True)
class Placeholder:
    """`-`, or no method at all after `proof`"""

    @property
    def modifiers(self) -> Tuple[Modifier, ...]:
        return ()

    def structure(self):
        return ('placeholder',)


Method = Union[SimpleMethod, CombinedMethod, Placeholder]


def iter_methods(method: Method):
    """Pre-order walk over a method tree"""
    yield method
    if isinstance(method, CombinedMethod):
        yield from iter_methods(method.left)
        yield from iter_methods(method.right)


def count_combinators(method: Method) -> int:
    return sum(isinstance(m, CombinedMethod) for m in iter_methods(method))


def _with_modifiers(method: Method, modifiers: Sequence[Modifier]) -> Method:
    if not modifiers:
        return method
    mods = tuple(method.modifiers) + tuple(modifiers)
    if isinstance(method, SimpleMethod):
        return SimpleMethod(method.name, method.args, mods)
    if isinstance(method, CombinedMethod):
        return CombinedMethod(method.left, method.combinator, method.right, mods)
    return SimpleMethod('-', (), mods)


def _fold(combinator: Combinator):
    def fold(value) -> Method:
        first, rest = value
        return reduce(lambda l, r: CombinedMethod(l, combinator, r), rest, first)

    return fold


def _is_method_name(t: Token) -> bool:
    return t.kind in (TokenKind.IDENT, TokenKind.LONG_IDENT, TokenKind.SYM_IDENT)


_ARG_STOPS = frozenset(',;|?+')


def _is_arg_stop(t: Token) -> bool:
    return t.kind is TokenKind.KEYWORD and t.source in _ARG_STOPS


def _method_grammar() -> Tuple[Parser, Parser, Parser]:
    method_name = some(_is_method_name).named('method name')
    modifier = (
        (word('?') >> (lambda _: TryOp()))
        | (word('+') >> (lambda _: RepeatOp()))
        | (
            skip(word('['))
            + maybe(kind(TokenKind.NAT))
            + skip(word(']'))
            >> (lambda t: Restrict(int(t.source) if t is not None else 1))
        )
    )
    method0 = forward_decl()
    group = skip(word('(')) + method0 + skip(word(')'))
    placeholder = word('-') >> (lambda _: Placeholder())
    bare = method_name >> (lambda t: SimpleMethod(t.source))
    modified = (group | placeholder | bare) + many(modifier) >> (
        lambda v: _with_modifiers(v[0], v[1])
    )
    with_args = method_name + oneplus(argument(_is_arg_stop)) + many(modifier) >> (
        lambda v: SimpleMethod(v[0].source, tuple(flatten(v[1])), tuple(v[2]))
    )
    meth2 = with_args | modified
    chain = meth2
    # tightest binding first
    for symbol in BINDING_ORDER:
        combinator = COMBINATOR_SYMBOLS.inverse[symbol]
        chain = chain + many(skip(word(symbol)) + chain) >> _fold(combinator)
    method0.define(chain)

    method = (modified + skip(finished)) | (method0 + skip(finished))
    by_methods = (
        modified + maybe(modified) + skip(finished)
        >> (lambda v: [v[0]] if v[1] is None else [v[0], v[1]])
    ) | (method0 + skip(finished) >> (lambda m: [m]))
    return method, by_methods, modified


_METHOD, _BY_METHODS, _MODIFIED = _method_grammar()


def _failure(tokens: Sequence[Token], e: NoParseError) -> SourceRange:
    if not tokens:
        return EMPTY_RANGE
    return tokens[min(e.state.max, len(tokens) - 1)].range


def parse_method(tokens: Sequence[Token]) -> Method:
    """Parse the argument of `apply`, `by` or `proof` into a method tree

    Precedence from weakest to strongest is `|`, `,`, `;`; chains associate
    to the left; parentheses group; `?`, `+` and `[n]` bind to the nearest
    method or parenthesised group.

    :param tokens: the argument tokens, improper tokens are ignored
    :raises MalformedMethod: at the first token that does not fit
    """
    tokens = [t for t in tokens if t.kind not in IMPROPER_KINDS]
    if not tokens:
        raise MalformedMethod('missing method', EMPTY_RANGE)
    if len(tokens) == 1:
        t = tokens[0]
        if _is_method_name(t):
            return SimpleMethod(t.source)
        if t.is_word('-'):
            return Placeholder()
    try:
        return _METHOD.parse(tokens)
    except NoParseError as e:
        raise MalformedMethod(f'malformed method: {e.msg}', _failure(tokens, e)) from None


def pretty_method(method: Method) -> str:
    """Render a method as outer syntax that parses back to the same tree"""
    mods = ''.join(f' {m}' for m in method.modifiers)
    if isinstance(method, Placeholder):
        return '-'
    if isinstance(method, SimpleMethod):
        body = ' '.join((method.name,) + method.arg_text)
        if method.args or any(isinstance(m, Restrict) for m in method.modifiers):
            body = f'({body})'
        return body + mods
    symbol = COMBINATOR_SYMBOLS[method.combinator]
    separator = ' | ' if method.combinator is Combinator.ALT else f'{symbol} '
    return (
        f'({pretty_method(method.left)}{separator}{pretty_method(method.right)})'
        + mods
    )


# Commands


@dataclass(frozen=True)
class Command:
    """A maximal token span starting at a command keyword

    The span includes the improper tokens trailing it up to the next command.
    The synthetic preamble holding leading comments has an empty keyword.
    """

    keyword: str
    category: CommandCategory
    tokens: Tuple[Token, ...]
    range: SourceRange
    index: int

    @property
    def is_preamble(self) -> bool:
        return not self.keyword

    @cached_property
    def proper_tokens(self) -> Tuple[Token, ...]:
        return tuple(t for t in self.tokens if t.kind not in IMPROPER_KINDS)

    @property
    def arguments(self) -> Tuple[Token, ...]:
        """Proper tokens following the command word"""
        return self.proper_tokens[1:] if self.keyword else self.proper_tokens

    @property
    def source(self) -> str:
        return ''.join(t.source for t in self.tokens)

    @cached_property
    def _methods(self) -> Tuple[Optional[List[Method]], Optional[MalformedMethod]]:
        try:
            return parse_methods(self), None
        except MalformedMethod as e:
            return None, e

    def methods(self) -> List[Method]:
        """Methods carried by `apply`, `apply_end`, `by` or `proof`, cached

        :raises MalformedMethod: when the argument does not parse
        """
        methods, error = self._methods
        if error is not None:
            raise error
        return methods

    @cached_property
    def _head(self) -> Tuple[Optional['StatementHead'], Optional[MalformedHead]]:
        try:
            return parse_statement_head(self), None
        except MalformedHead as e:
            return None, e

    def head(self) -> 'StatementHead':
        head, error = self._head
        if error is not None:
            raise error
        return head


def _proper_range(tokens: Sequence[Token]) -> SourceRange:
    proper = [t for t in tokens if t.kind not in IMPROPER_KINDS] or list(tokens)
    return proper[0].range.span(proper[-1].range)


def split_commands(tokens: Sequence[Token]) -> List[Command]:
    """Group a token stream into commands

    A command starts at every COMMAND token. Improper tokens before the first
    command go into a preamble command with an empty keyword.
    """
    commands: List[Command] = []
    start = 0
    for i, token in enumerate(tokens):
        if token.kind is TokenKind.COMMAND and i > start:
            commands.append(_make_command(tokens[start:i], len(commands)))
            start = i
    if start < len(tokens):
        commands.append(_make_command(tokens[start:], len(commands)))
    return commands


def _make_command(tokens: Sequence[Token], index: int) -> Command:
    head = tokens[0]
    if head.kind is TokenKind.COMMAND:
        keyword, category = head.source, head.category
    else:
        keyword, category = '', CommandCategory.OTHER
    return Command(keyword, category, tuple(tokens), _proper_range(tokens), index)


def proper_commands(commands: Sequence[Command]) -> List[Command]:
    """Drop the preamble and every command without proper tokens"""
    return [c for c in commands if c.keyword and c.proper_tokens]


def parse_methods(command: Command) -> List[Method]:
    """The methods of a method-carrying command

    `apply`/`apply_end` carry one method, `by` an initial and an optional
    terminal method, `proof` zero or one (none is a Placeholder). Other
    commands carry none.

    :raises MalformedMethod: when the argument does not parse
    """
    args = command.arguments
    if command.keyword in ('apply', 'apply_end'):
        return [parse_method(args)]
    if command.keyword == 'proof':
        return [parse_method(args) if args else Placeholder()]
    if command.keyword == 'by':
        if not args:
            raise MalformedMethod('missing method', command.range)
        if len(args) == 1:
            return [parse_method(args)]
        try:
            return _BY_METHODS.parse(list(args))
        except NoParseError as e:
            raise MalformedMethod(f'malformed method: {e.msg}', _failure(args, e)) from None
    return []


def method_source(command: Command) -> str:
    """The method text of `apply`-like commands as it can stand in `by`:
    parenthesised unless it is a single, possibly modified, atom"""
    args = command.arguments
    if not args:
        return ''
    start, end = command.tokens.index(args[0]), command.tokens.index(args[-1])
    text = ''.join(t.source for t in command.tokens[start : end + 1])
    try:
        (_MODIFIED + skip(finished)).parse(list(args))
    except NoParseError:
        return f'({text})'
    return text


# Statements


@dataclass(frozen=True)
class Attribute:
    name: str
    args: Tuple[Token, ...] = field(default=(), compare=False)

    @property
    def arg_text(self) -> Tuple[str, ...]:
        return tuple(t.source for t in self.args)

    def __str__(self) -> str:
        return ' '.join((self.name,) + self.arg_text)


class Fact(NamedTuple):
    name: Optional[str]
    attributes: Tuple[Attribute, ...]


@dataclass(frozen=True)
class StatementHead:
    keyword: str
    name: Optional[str] = None
    attributes: Tuple[Attribute, ...] = ()
    has_where_clause: bool = False
    facts: Tuple[Fact, ...] = ()


def _is_attribute_name(t: Token) -> bool:
    return t.kind in NAME_KINDS or (t.kind is TokenKind.KEYWORD and t.source.isidentifier())


def _fact_grammar() -> Tuple[Parser, Parser, Parser, Parser]:
    attribute = some(_is_attribute_name) + many(
        argument(lambda t: t.is_word(','))
    ) >> (lambda v: Attribute(v[0].source, tuple(flatten(v[1]))))
    attributes = (
        skip(word('['))
        + maybe(attribute + many(skip(word(',')) + attribute))
        + skip(word(']'))
        >> (lambda v: () if v is None else (v[0],) + tuple(v[1]))
    )
    selection = (
        word('(') + many(some(lambda t: not t.is_word(')'))) + word(')')
    )
    fact_name = name() | kind(TokenKind.CARTOUCHE)
    fact = (
        (
            fact_name + skip(maybe(selection)) + maybe(attributes)
            >> (lambda v: Fact(v[0].source, v[1] or ()))
        )
        | (skip(word('[')) + attributes + skip(word(']')) >> (lambda a: Fact(None, a)))
    )
    facts = fact + many(skip(maybe(word('and'))) + fact) >> (
        lambda v: (v[0],) + tuple(v[1])
    )
    thm_name = (
        name() + maybe(attributes) >> (lambda v: (v[0].source, v[1] or ()))
    ) | (attributes >> (lambda a: (None, a)))
    target = skip(word('(') + word('in') + name() + word(')'))
    return attributes, facts, thm_name, target


ATTRIBUTES, FACTS, _THM_NAME, TARGET = _fact_grammar()


def parse_facts(tokens: Sequence[Token]) -> Tuple[Fact, ...]:
    """Facts of a `declare`, `using` or `lemmas` right-hand side, up to the first
    token that cannot continue the list"""
    tokens = [t for t in tokens if t.kind not in IMPROPER_KINDS]
    try:
        facts, _ = parse_prefix(FACTS, tokens)
    except NoParseError:
        return ()
    return facts


def _skip_target(tokens: Sequence[Token]) -> List[Token]:
    try:
        _, rest = parse_prefix(TARGET, tokens)
        return rest
    except NoParseError:
        return list(tokens)


def _named_head(tokens: Sequence[Token], separator: str):
    try:
        (thm_name, _), rest = parse_prefix(_THM_NAME + word(separator), tokens)
        return thm_name, rest
    except NoParseError:
        return None, list(tokens)


def _has_toplevel_where(tokens: Sequence[Token]) -> bool:
    depth = 0
    for t in tokens:
        if t.kind is not TokenKind.KEYWORD:
            continue
        if t.source in ('(', '['):
            depth += 1
        elif t.source in (')', ']'):
            depth -= 1
        elif t.source == 'where' and depth == 0:
            return True
    return False


def parse_statement_head(command: Command) -> StatementHead:
    """Read the optional name and attributes a statement starts with

    Supports goal statements, `declare`, `lemmas` and `axiomatization`. For
    `declare` the head is the first declared fact and all facts are listed;
    for `lemmas` the facts are the right-hand side.

    :raises MalformedHead: for other commands, or an attribute list that does
        not form a head
    """
    keyword = command.keyword
    if keyword not in STATEMENT_KEYWORDS:
        raise MalformedHead(f'{keyword or "preamble"} has no statement head', command.range)
    tokens = _skip_target(command.arguments)
    if keyword == 'axiomatization':
        return StatementHead(keyword, has_where_clause=_has_toplevel_where(tokens))
    if keyword == 'declare':
        facts = parse_facts(tokens)
        if not facts:
            raise MalformedHead('declare without facts', command.range)
        return StatementHead(keyword, facts[0].name, facts[0].attributes, facts=facts)

    separator = '=' if keyword == 'lemmas' else ':'
    thm_name, rest = _named_head(tokens, separator)
    if thm_name is None:
        if tokens and tokens[0].is_word('['):
            raise MalformedHead('attributes without a statement', tokens[0].range)
        thm_name = (None, ())
    facts = parse_facts(rest) if keyword == 'lemmas' else ()
    return StatementHead(keyword, thm_name[0], tuple(thm_name[1]), facts=facts)
