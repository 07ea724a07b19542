from enum import IntEnum
from pathlib import Path
from typing import Iterable, List, NamedTuple, Tuple, Union

PathLike = Union[str, Path]

THEORY_SUFFIX = '.thy'
ENCODING = 'utf-8'


class Severity(IntEnum):
    """Severity of a lint. Totally ordered: info < warn < error."""

    INFO = 0
    WARN = 1
    ERROR = 2

    def __str__(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, value: str) -> 'Severity':
        """Read a severity from its lower-case name ('info', 'warn', 'error')

        :param value: the name, case-insensitive; 'warning' is accepted for 'warn'
        """
        key = value.strip().upper()
        if key == 'WARNING':
            key = 'WARN'
        try:
            return cls[key]
        except KeyError:
            raise ValueError(
                f'Unknown severity {value!r}. Expected one of info, warn, error'
            ) from None


class SourceRange(NamedTuple):
    """Position of a span of theory text.

    Lines and columns are 1-based, columns count Unicode scalar values and
    `end_col` is exclusive. Byte offsets delimit the UTF-8 encoding of the span.
    """

    start_line: int
    start_col: int
    end_line: int
    end_col: int
    byte_offset_start: int
    byte_offset_end: int

    @property
    def start(self) -> Tuple[int, int]:
        return self.start_line, self.start_col

    @property
    def end(self) -> Tuple[int, int]:
        return self.end_line, self.end_col

    def span(self, other: 'SourceRange') -> 'SourceRange':
        """The smallest range covering this range and `other`"""
        first = self if self.start <= other.start else other
        last = self if self.end >= other.end else other
        return SourceRange(
            first.start_line,
            first.start_col,
            last.end_line,
            last.end_col,
            first.byte_offset_start,
            last.byte_offset_end,
        )


EMPTY_RANGE = SourceRange(1, 1, 1, 1, 0, 0)


def discover_theories(paths: Iterable[PathLike]) -> List[Path]:
    """Expand input paths into the theory files to lint

    Directories are searched recursively for `.thy` files. Explicitly named
    files are kept whatever their suffix. Missing paths are kept as well, so
    that reading them reports the problem with the path the user gave.

    :param paths: files and directories
    :return: sorted, de-duplicated list of paths
    """
    found = set()
    for path in map(Path, paths):
        if path.is_dir():
            found.update(p for p in path.rglob(f'*{THEORY_SUFFIX}') if p.is_file())
        else:
            found.add(path)
    return sorted(found)


def read_theory(path: PathLike) -> str:
    """Read a theory file as UTF-8 text, keeping line endings untouched"""
    with open(path, 'r', encoding=ENCODING, newline='') as fh:
        return fh.read()
