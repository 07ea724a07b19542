"""Token-level parser primitives for outer syntax, built on funcparserlib.

Parsers run over sequences of proper `Token`s. Alternation backtracks, so a
failed alternative consumes nothing; `parse_prefix` returns the parsed value
together with the unconsumed remainder.
"""
from typing import Any, Callable, List, Sequence, Tuple, TypeVar

from funcparserlib.parser import (
    NoParseError,
    Parser,
    finished,
    forward_decl,
    many,
    maybe,
    oneplus,
    skip,
    some,
)

from .outer_lexer import Token, TokenKind

__all__ = [
    'NoParseError',
    'Parser',
    'any_token',
    'balanced',
    'finished',
    'forward_decl',
    'kind',
    'many',
    'maybe',
    'name',
    'oneplus',
    'parse_prefix',
    'skip',
    'some',
    'word',
    'flatten',
]

T = TypeVar('T')

NAME_KINDS = frozenset(
    {
        TokenKind.IDENT,
        TokenKind.LONG_IDENT,
        TokenKind.SYM_IDENT,
        TokenKind.NAT,
        TokenKind.STRING,
    }
)

_OPENERS = {'(': ')', '[': ']'}
_CLOSERS = frozenset(_OPENERS.values())


def kind(*kinds: TokenKind) -> Parser:
    """One token of any of the given kinds"""
    wanted = frozenset(kinds)
    return some(lambda t: t.kind in wanted).named('|'.join(k.value for k in kinds))


def word(text: str) -> Parser:
    """One keyword, command or name token spelled `text`"""
    return some(lambda t: t.is_word(text)).named(repr(text))


def name() -> Parser:
    """A name: identifier, long identifier, symbolic identifier, number or string"""
    return some(lambda t: t.kind in NAME_KINDS).named('name')


any_token = some(lambda t: True).named('any token')


def _is_plain(t: Token) -> bool:
    return not (t.kind is TokenKind.KEYWORD and (t.source in _OPENERS or t.source in _CLOSERS))


def flatten(value: Any) -> List[Token]:
    """Collect the tokens of a nested parse value in order"""
    if isinstance(value, Token):
        return [value]
    if value is None:
        return []
    out: List[Token] = []
    for item in value:
        out.extend(flatten(item))
    return out


def _balanced() -> Parser:
    group = forward_decl()
    inner = some(_is_plain) | group
    group.define(
        (word('(') + many(inner) + word(')')) | (word('[') + many(inner) + word(']'))
    )
    return group >> flatten


balanced = _balanced().named('balanced group')


def argument(stop: Callable[[Token], bool]) -> Parser:
    """One argument item: a token not satisfying `stop`, or a balanced group.
    Closing brackets always stop an argument."""
    return (
        some(lambda t: _is_plain(t) and not stop(t)) >> (lambda t: [t])
    ) | balanced


def parse_prefix(parser: Parser, tokens: Sequence[Token]) -> Tuple[Any, List[Token]]:
    """Run `parser` on a prefix of `tokens`

    :return: the parsed value and the remaining tokens
    :raises NoParseError: if no prefix parses
    """
    boxed = parser >> (lambda v: (v,))
    value, rest = (boxed + many(any_token)).parse(list(tokens))
    return value[0], rest
