"""Outer-syntax tokenizer for Isabelle/Isar theory text.

The token stream is lossless: concatenating the `source` of every token gives
back the input. Malformed regions never raise, they become `ERROR` tokens.
"""
import re
from enum import Enum
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .commons import SourceRange
from .keywords import BUILTIN_KEYWORDS, CommandCategory, KeywordTable


class TokenKind(str, Enum):
    COMMAND = 'command'
    KEYWORD = 'keyword'
    IDENT = 'ident'
    LONG_IDENT = 'long_ident'
    SYM_IDENT = 'sym_ident'
    VAR = 'var'
    TYPE_IDENT = 'type_ident'
    TYPE_VAR = 'type_var'
    NAT = 'nat'
    FLOAT = 'float'
    STRING = 'string'
    ALT_STRING = 'alt_string'
    CARTOUCHE = 'cartouche'
    VERBATIM = 'verbatim'
    COMMENT = 'comment'
    INFORMAL_COMMENT = 'informal_comment'
    SPACE = 'space'
    ERROR = 'error'

    def __str__(self) -> str:
        return self.value


IMPROPER_KINDS = frozenset(
    {TokenKind.SPACE, TokenKind.COMMENT, TokenKind.INFORMAL_COMMENT}
)


class Token(NamedTuple):
    kind: TokenKind
    source: str
    range: SourceRange
    category: Optional[CommandCategory] = None

    @property
    def is_proper(self) -> bool:
        return self.kind not in IMPROPER_KINDS

    @property
    def is_command(self) -> bool:
        return self.kind is TokenKind.COMMAND

    def is_word(self, *words: str) -> bool:
        """Whether this token is a keyword, command or name spelled as one of `words`"""
        return self.source in words and self.kind not in _QUOTED_KINDS

    def __repr__(self) -> str:
        return f'{self.kind.name}({self.source!r})'


_QUOTED_KINDS = frozenset(
    {
        TokenKind.STRING,
        TokenKind.ALT_STRING,
        TokenKind.CARTOUCHE,
        TokenKind.VERBATIM,
        TokenKind.COMMENT,
        TokenKind.INFORMAL_COMMENT,
        TokenKind.SPACE,
        TokenKind.ERROR,
    }
)

OPEN = '‹'
CLOSE = '›'
OPEN_ESC = '\\<open>'
CLOSE_ESC = '\\<close>'
COMMENT_MARKERS = ('\\<comment>', '—', '\\<^cancel>', '\\<^latex>', '\\<^marker>')
SYMBOLIC_CHARS = frozenset('!#$%&*+-/<=>?@^_|~')

_GREEK = (
    'alpha|beta|gamma|delta|epsilon|zeta|eta|theta|iota|kappa|mu|nu|xi|pi|rho|'
    'sigma|tau|upsilon|phi|chi|psi|omega|Gamma|Delta|Theta|Lambda|Xi|Pi|Sigma|'
    'Upsilon|Phi|Psi|Omega'
)
# letters: unicode letters except lambda, plus Isabelle's letter symbols
_LETTER = rf'(?:(?!λ)[^\W\d_]|\\<(?:[A-Za-z]{{1,2}}|{_GREEK})>)'
_LETDIG = rf'(?:\w|\'|\\<(?:[A-Za-z]{{1,2}}|{_GREEK})>)'
_SUB = r'(?:\\<\^sub>|⇩)'
_ID = rf'{_LETTER}(?:{_LETDIG}|{_SUB}(?={_LETDIG}))*'

_SPACE_RE = re.compile(r'[ \t\n\r\f\v]+')
_IDENT_RE = re.compile(rf'{_ID}(?:\.{_ID})*')
_LETTER_RE = re.compile(_LETTER)
_VAR_RE = re.compile(rf'\?\'?{_ID}(?:\.\d+)?')
_TYPE_IDENT_RE = re.compile(rf'\'{_ID}')
_NUMBER_RE = re.compile(r'-?\d+(?:\.\d+)?')
_SYMBOL_RE = re.compile(r'\\<\^?[A-Za-z][A-Za-z0-9_\']*>')
_STRING_RE = {
    '"': re.compile(r'"(?:[^"\\]|\\.)*"', re.DOTALL),
    '`': re.compile(r'`(?:[^`\\]|\\.)*`', re.DOTALL),
}
_COMMENT_DELIM_RE = re.compile(r'\(\*|\*\)')
_CARTOUCHE_DELIM_RE = re.compile(r'‹|›|\\<open>|\\<close>')
_BLANKS_RE = re.compile(r'[ \t\n\r\f\v]*')


def _scan_nested(text: str, pos: int, delims: 're.Pattern', opener) -> int:
    """End offset of a nested construct starting at `pos`, or -1 if unterminated"""
    depth = 0
    for m in delims.finditer(text, pos):
        if m.group() in opener:
            depth += 1
        else:
            depth -= 1
            if depth == 0:
                return m.end()
    return -1


def _scan_cartouche(text: str, pos: int) -> int:
    return _scan_nested(text, pos, _CARTOUCHE_DELIM_RE, (OPEN, OPEN_ESC))


def _scan_comment(text: str, pos: int) -> int:
    return _scan_nested(text, pos, _COMMENT_DELIM_RE, ('(*',))


def _starts_cartouche(text: str, pos: int) -> bool:
    return text.startswith(OPEN, pos) or text.startswith(OPEN_ESC, pos)


class _Scanner:
    """Splits theory text into (kind, end, category) steps."""

    def __init__(self, text: str, keywords: KeywordTable):
        self.text = text
        self.keywords = keywords

    def keyword_or(self, pos: int, kind: TokenKind, end: int) -> Tuple[TokenKind, int]:
        # longest match wins, keywords win ties
        word = self.keywords.longest_keyword(self.text, pos)
        if word is not None and pos + len(word) >= end:
            if self.keywords.is_command(word):
                return TokenKind.COMMAND, pos + len(word)
            return TokenKind.KEYWORD, pos + len(word)
        return kind, end

    def symbolic(self, pos: int) -> Tuple[TokenKind, int]:
        text, end = self.text, pos
        while end < len(text) and text[end] in SYMBOLIC_CHARS:
            end += 1
        if end == pos:
            return self.keyword_or(pos, TokenKind.ERROR, pos + 1)
        return self.keyword_or(pos, TokenKind.SYM_IDENT, end)

    def delimited(self, pos: int, end: int, kind: TokenKind) -> Tuple[TokenKind, int]:
        if end < 0:
            return TokenKind.ERROR, len(self.text)
        return kind, end

    def step(self, pos: int) -> Tuple[TokenKind, int]:
        text = self.text
        c = text[pos]
        if c in ' \t\n\r\f\v':
            return TokenKind.SPACE, _SPACE_RE.match(text, pos).end()
        if c == '(' and text.startswith('(*', pos):
            return self.delimited(pos, _scan_comment(text, pos), TokenKind.COMMENT)
        if c == '{' and text.startswith('{*', pos):
            end = text.find('*}', pos + 2)
            return self.delimited(pos, end + 2 if end >= 0 else -1, TokenKind.VERBATIM)
        if c in _STRING_RE:
            kind = TokenKind.STRING if c == '"' else TokenKind.ALT_STRING
            m = _STRING_RE[c].match(text, pos)
            return self.delimited(pos, m.end() if m else -1, kind)
        if c == OPEN:
            return self.delimited(pos, _scan_cartouche(text, pos), TokenKind.CARTOUCHE)
        if c == CLOSE:
            return TokenKind.ERROR, pos + 1
        if c == '\\' or c == '—':
            return self.backslash(pos)
        m = _IDENT_RE.match(text, pos)
        if m:
            word = m.group()
            if '.' in word:
                return TokenKind.LONG_IDENT, m.end()
            if word in self.keywords.commands:
                return TokenKind.COMMAND, m.end()
            if word in self.keywords.minor:
                return TokenKind.KEYWORD, m.end()
            return TokenKind.IDENT, m.end()
        if c.isdigit() or (c == '-' and text[pos + 1 : pos + 2].isdigit()):
            m = _NUMBER_RE.match(text, pos)
            if m and (c != '-' or '.' in m.group()):
                kind = TokenKind.FLOAT if '.' in m.group() else TokenKind.NAT
                return self.keyword_or(pos, kind, m.end())
        if c == '?':
            m = _VAR_RE.match(text, pos)
            if m:
                kind = TokenKind.TYPE_VAR if text[pos + 1] == "'" else TokenKind.VAR
                return kind, m.end()
        if c == "'":
            m = _TYPE_IDENT_RE.match(text, pos)
            if m:
                return TokenKind.TYPE_IDENT, m.end()
        if c in SYMBOLIC_CHARS:
            return self.symbolic(pos)
        if c.isascii():
            return self.keyword_or(pos, TokenKind.ERROR, pos + 1)
        if c.isprintable():
            # other unicode symbols are symbolic identifiers of their own
            return self.keyword_or(pos, TokenKind.SYM_IDENT, pos + 1)
        return TokenKind.ERROR, pos + 1

    def backslash(self, pos: int) -> Tuple[TokenKind, int]:
        text = self.text
        if text.startswith(OPEN_ESC, pos):
            return self.delimited(pos, _scan_cartouche(text, pos), TokenKind.CARTOUCHE)
        if text.startswith(CLOSE_ESC, pos):
            return TokenKind.ERROR, pos + len(CLOSE_ESC)
        for marker in COMMENT_MARKERS:
            if text.startswith(marker, pos):
                after = _BLANKS_RE.match(text, pos + len(marker)).end()
                if _starts_cartouche(text, after):
                    return self.delimited(
                        pos, _scan_cartouche(text, after), TokenKind.INFORMAL_COMMENT
                    )
                return self.keyword_or(pos, TokenKind.SYM_IDENT, pos + len(marker))
        m = _IDENT_RE.match(text, pos)
        if m:
            kind = TokenKind.LONG_IDENT if '.' in m.group() else TokenKind.IDENT
            return self.keyword_or(pos, kind, m.end())
        m = _SYMBOL_RE.match(text, pos)
        if m:
            return self.keyword_or(pos, TokenKind.SYM_IDENT, m.end())
        return TokenKind.ERROR, pos + 1


def tokenize(text: str, keywords: KeywordTable = BUILTIN_KEYWORDS) -> List[Token]:
    """Split theory text into outer-syntax tokens

    Comments and cartouches nest, `\\<open>`/`\\<close>` delimit cartouches
    like `‹`/`›`, verbatim `{* *}` does not nest. An unterminated delimited
    token becomes a single ERROR token reaching to the end of the input.

    :param text: theory source
    :param keywords: command and minor keyword table
    :return: tokens whose sources concatenate to `text`
    """
    scanner = _Scanner(text, keywords)
    tokens: List[Token] = []
    append = tokens.append
    commands = keywords.commands
    pos, line, col, offset = 0, 1, 1, 0
    length = len(text)
    while pos < length:
        kind, end = scanner.step(pos)
        source = text[pos:end]
        newlines = source.count('\n')
        if newlines:
            end_line = line + newlines
            end_col = len(source) - source.rfind('\n')
        else:
            end_line, end_col = line, col + len(source)
        size = len(source) if source.isascii() else len(source.encode('utf-8'))
        category = commands[source] if kind is TokenKind.COMMAND else None
        append(
            Token(
                kind,
                source,
                SourceRange(line, col, end_line, end_col, offset, offset + size),
                category,
            )
        )
        pos, line, col, offset = end, end_line, end_col, offset + size
    return tokens


def token_lines(token: Token) -> range:
    """Lines the token's text occupies, not counting a line it merely ends before"""
    r = token.range
    last = r.end_line if r.end_col > 1 else r.end_line - 1
    return range(r.start_line, max(last, r.start_line) + 1)


def sloc_of_tokens(tokens: Iterable[Token]) -> int:
    lines = set()
    for token in tokens:
        if token.kind not in IMPROPER_KINDS:
            lines.update(token_lines(token))
    return len(lines)


def source_lines_of_code(text: str, keywords: KeywordTable = BUILTIN_KEYWORDS) -> int:
    """Count lines holding at least one token that is not space or comment"""
    return sloc_of_tokens(tokenize(text, keywords))


def proper_tokens(tokens: Sequence[Token]) -> List[Token]:
    return [t for t in tokens if t.kind not in IMPROPER_KINDS]


def untokenize(tokens: Iterable[Token]) -> str:
    return ''.join(t.source for t in tokens)
