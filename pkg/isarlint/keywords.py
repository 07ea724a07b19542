from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple

from .commons import ENCODING, PathLike

MINOR = 'minor'


class CommandCategory(str, Enum):
    """Coarse classification of a command word"""

    THEORY_BEGIN = 'theory_begin'
    THEORY_BODY = 'theory_body'
    GOAL_STATEMENT = 'goal_statement'
    PROOF_OPEN = 'proof_open'
    PROOF_STEP = 'proof_step'
    PROOF_CLOSE = 'proof_close'
    DIAGNOSTIC = 'diagnostic'
    OTHER = 'other'

    def __str__(self) -> str:
        return self.value


class KeywordFileError(ValueError):
    def __init__(self, path: PathLike, line: int, msg: str):
        super().__init__(f'{path}:{line}: {msg}')
        self.path = path
        self.line = line


@dataclass(frozen=True)
class KeywordTable:
    """Command words with their category, plus the minor (non-command) keywords

    A word is either a command or a minor keyword, never both.
    """

    commands: Mapping[str, CommandCategory]
    minor: FrozenSet[str] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, 'commands', MappingProxyType(dict(self.commands)))
        object.__setattr__(
            self, 'minor', frozenset(self.minor) - frozenset(self.commands)
        )
        by_first: Dict[str, Tuple[str, ...]] = {}
        for word in set(self.commands) | self.minor:
            by_first.setdefault(word[0], ())
            by_first[word[0]] += (word,)
        # longest match first
        object.__setattr__(
            self,
            '_by_first_char',
            {
                c: tuple(sorted(words, key=len, reverse=True))
                for c, words in by_first.items()
            },
        )

    def category(self, word: str) -> Optional[CommandCategory]:
        return self.commands.get(word)

    def is_command(self, word: str) -> bool:
        return word in self.commands

    def longest_keyword(self, text: str, pos: int) -> Optional[str]:
        """The longest keyword (command or minor) that `text` starts with at `pos`"""
        for word in self._by_first_char.get(text[pos], ()):
            if text.startswith(word, pos):
                return word
        return None

    def extend(
        self,
        commands: Optional[Mapping[str, CommandCategory]] = None,
        minor: Iterable[str] = (),
    ) -> 'KeywordTable':
        """A new table with extra entries. Later entries win: a word added as a
        command stops being a minor keyword and the other way round."""
        merged = dict(self.commands)
        minor = frozenset(minor)
        for word in minor:
            merged.pop(word, None)
        merged.update(commands or {})
        return KeywordTable(merged, (self.minor - frozenset(merged)) | minor)


def _table(**groups: str) -> Dict[str, CommandCategory]:
    table = {}
    for category, words in groups.items():
        for word in words.split():
            table[word] = CommandCategory(category)
    return table


_BUILTIN_COMMANDS = _table(
    # the header words are commands of their own, so a header splits at each
    theory_begin='theory imports keywords abbrevs begin',
    theory_body="""
        end context locale class instantiation notepad bundle unbundle
        definition abbreviation fun primrec primcorec datatype codatatype
        record type_synonym typedecl inductive inductive_set coinductive
        coinductive_set consts axiomatization declare lemmas named_theorems
        notation no_notation syntax no_syntax translations no_translations
        type_notation no_type_notation hide_const hide_type hide_fact hide_class
        setup local_setup ML ML_file ML_prf method_setup attribute_setup
        simproc_setup method declaration syntax_declaration
        chapter section subsection subsubsection paragraph subparagraph text
        text_raw txt code_datatype code_printing export_code lift_definition
        setup_lifting quotient_type quotient_definition nominal_datatype
        partial_function overloading adhoc_overloading no_adhoc_overloading
        default_sort type_alias experiment unused_thms fixrec
        """,
    goal_statement="""
        lemma theorem corollary proposition schematic_goal instance
        termination interpretation global_interpretation sublocale typedef
        function specification
        """,
    proof_open='proof { subgoal',
    proof_step="""
        apply apply_end using unfolding including supply fix assume presume
        define obtain guess let case have show hence thus then from with note
        also finally moreover ultimately next defer prefer back write
        consider interpret
        """,
    proof_close='qed by done . .. sorry oops } \\<proof>',
    diagnostic="""
        thm term typ prop value print_theorems print_simpset print_state
        print_context print_statement print_cases print_facts print_rules
        print_methods print_attributes find_theorems find_consts sledgehammer
        try try0 solve_direct nitpick quickcheck nunchaku ML_val ML_command
        print_commands print_definitions print_locale print_locales
        print_classes print_bundles print_options welcome
        """,
)

_BUILTIN_MINOR = frozenset(
    """
    and assumes attach avoids binder constrains defines fixes for identifier
    if in includes infix infixl infixr is monos morphisms notes
    obtains open output overloaded pervasive premises private qualified
    rewrites shows structure unchecked when where
    ! !! % ( ) + , - -- : :: ; < <= = == => ==> ? [ ] | \\<equiv>
    \\<Rightarrow> \\<Longrightarrow> \\<rightleftharpoons> \\<leftharpoondown>
    \\<rightharpoonup> \\<subseteq> \\<comment> ≡ ⇒ ⟹ ⇌ ↽ ⇀ ⊆ ⦇ ⦈
    """.split()
)

BUILTIN_KEYWORDS = KeywordTable(_BUILTIN_COMMANDS, _BUILTIN_MINOR)


def parse_keyword_lines(
    lines: Iterable[str], source: PathLike = '<keywords>'
) -> Tuple[Dict[str, CommandCategory], FrozenSet[str]]:
    """Read `word<TAB>category` lines. Blank lines and lines starting with `#`
    are ignored; the pseudo-category `minor` declares a minor keyword."""
    commands: Dict[str, CommandCategory] = {}
    minor = set()
    for number, raw in enumerate(lines, start=1):
        line = raw.rstrip('\r\n')
        if not line.strip() or line.lstrip().startswith('#'):
            continue
        parts = line.split('\t')
        if len(parts) != 2 or not parts[0] or not parts[1].strip():
            raise KeywordFileError(
                source, number, f'expected "word<TAB>category", got {line!r}'
            )
        word, category = parts[0], parts[1].strip()
        if word in commands or word in minor:
            raise KeywordFileError(source, number, f'duplicate keyword {word!r}')
        if category == MINOR:
            minor.add(word)
            continue
        try:
            commands[word] = CommandCategory(category)
        except ValueError:
            raise KeywordFileError(
                source, number, f'unknown category {category!r} for {word!r}'
            ) from None
    return commands, frozenset(minor)


def load_keywords(
    path: PathLike, base: KeywordTable = BUILTIN_KEYWORDS
) -> KeywordTable:
    """Overlay the entries of a keyword file on `base`

    :param path: file with one `word<TAB>category` entry per line
    :param base: table to extend, the built-in Pure/HOL table by default
    """
    with open(path, 'r', encoding=ENCODING) as fh:
        commands, minor = parse_keyword_lines(fh, source=path)
    return base.extend(commands, minor)
