"""Finite traces, labeled samples, and the on-disk task format.

A trace is a non-empty sequence of letters; each letter is the set of
atomic propositions holding at that position, packed into an int bitmask
(bit c set iff proposition c holds). A sample partitions traces into
positives P and negatives N.

Task file grammar (UTF-8, LF or CRLF):

    file      := block "---" NL block [ "---" NL ops_line ] [ "---" NL names_line ]
    block     := (trace_line NL)+
    trace_line:= letter (";" letter)*
    letter    := bit ("," bit)*      # one bit per proposition, no spaces
    bit       := "0" | "1"
    ops_line  := name ("," name)*    # operator restriction, e.g. F,G,X!,U,&,|
    names_line:= name ("," name)*    # proposition names

The first block is the positives, the second the negatives. Blank lines
are ignored. A lone extra section is an ops_line iff every token is an
operator token, otherwise a names_line; proposition names may not collide
with operator tokens, which keeps that rule unambiguous.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

# Operator token vocabulary shared with the formula grammar.
UNARY_TOKENS = ("!", "X!", "X", "F", "G")
BINARY_TOKENS = ("&", "|", "U", "R")
OPERATOR_TOKENS = frozenset(UNARY_TOKENS + BINARY_TOKENS)

# Words that would collide with the formula grammar if used as names.
RESERVED_NAMES = frozenset({"X", "F", "G", "U", "R", "true", "false"})

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class TaskFormatError(ValueError):
    """Raised for malformed task files; carries a 1-based line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def is_valid_prop_name(name: str) -> bool:
    return bool(_NAME_RE.match(name)) and name not in RESERVED_NAMES


@dataclass(frozen=True)
class Alphabet:
    """Ordered atomic propositions; a proposition's index is its position."""

    props: tuple[str, ...]

    def __post_init__(self):
        if not self.props:
            raise ValueError("alphabet must be non-empty")
        if len(set(self.props)) != len(self.props):
            raise ValueError("proposition names must be unique")
        for name in self.props:
            if not is_valid_prop_name(name):
                raise ValueError(f"invalid proposition name: {name!r}")

    @staticmethod
    def default(n: int) -> "Alphabet":
        return Alphabet(tuple(f"p{i}" for i in range(n)))

    def __len__(self) -> int:
        return len(self.props)

    def index(self, name: str) -> int:
        return self.props.index(name)


@dataclass(frozen=True)
class Trace:
    """A finite non-empty word; letters[i] is the bitmask at position i+1."""

    letters: tuple[int, ...]

    def __post_init__(self):
        if not self.letters:
            raise ValueError("traces must be non-empty")
        if any(m < 0 for m in self.letters):
            raise ValueError("letter bitmasks must be non-negative")

    @property
    def length(self) -> int:
        return len(self.letters)

    def has(self, prop: int, position: int) -> bool:
        """Whether proposition `prop` holds at 1-based `position`."""
        return bool(self.letters[position - 1] >> prop & 1)


@dataclass(frozen=True)
class Sample:
    """Positive and negative traces over a shared alphabet.

    Duplicates within one class are kept; a trace occurring in both
    classes is rejected, since no formula could separate it from itself.
    """

    alphabet: Alphabet
    positives: tuple[Trace, ...]
    negatives: tuple[Trace, ...]

    def __post_init__(self):
        width = len(self.alphabet)
        for trace in self.positives + self.negatives:
            for letter in trace.letters:
                if letter >> width:
                    raise ValueError(
                        f"letter {letter:#x} uses bits beyond the "
                        f"{width}-proposition alphabet"
                    )
        overlap = set(t.letters for t in self.positives) & set(
            t.letters for t in self.negatives
        )
        if overlap:
            raise ValueError("a trace occurs in both the positive and negative set")

    @property
    def traces(self) -> tuple[Trace, ...]:
        """All traces, positives first; row order for characteristic tables."""
        return self.positives + self.negatives

    @property
    def n_pos(self) -> int:
        return len(self.positives)

    @property
    def n_neg(self) -> int:
        return len(self.negatives)


@dataclass(frozen=True)
class Task:
    """A parsed task file: the sample plus its optional operator restriction."""

    sample: Sample
    op_names: Optional[tuple[str, ...]] = None


def _parse_trace_line(text: str, lineno: int, width: Optional[int]) -> tuple[Trace, int]:
    letters = []
    for letter_text in text.split(";"):
        bits = letter_text.split(",")
        if width is None:
            width = len(bits)
        elif len(bits) != width:
            raise TaskFormatError(
                f"inconsistent letter width: expected {width} bits, got {len(bits)}",
                lineno,
            )
        mask = 0
        for i, b in enumerate(bits):
            if b == "1":
                mask |= 1 << i
            elif b != "0":
                raise TaskFormatError(f"expected bit 0 or 1, got {b!r}", lineno)
        letters.append(mask)
    return Trace(tuple(letters)), width


def _split_sections(text: str) -> list[list[tuple[int, str]]]:
    """Split into ---separated sections of (lineno, content) pairs."""
    sections: list[list[tuple[int, str]]] = [[]]
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r").strip()
        if not line:
            continue
        if line == "---":
            sections.append([])
        else:
            sections[-1].append((lineno, line))
    return sections


def parse_task(text: str) -> Task:
    """Parse a task file into a sample and its optional operator restriction."""
    sections = _split_sections(text)
    if len(sections) < 2:
        raise TaskFormatError("expected a '---' separating positives from negatives")
    if len(sections) > 4:
        raise TaskFormatError("too many '---' sections")

    blocks = []
    width: Optional[int] = None
    for section in sections[:2]:
        traces = []
        for lineno, line in section:
            trace, width = _parse_trace_line(line, lineno, width)
            traces.append(trace)
        blocks.append(traces)
    for which, section, traces in zip(("positives", "negatives"), sections, blocks):
        if not traces:
            start = section[0][0] if section else 1
            raise TaskFormatError(f"empty trace block ({which})", start)

    op_names: Optional[tuple[str, ...]] = None
    names: Optional[tuple[str, ...]] = None
    for section in sections[2:]:
        if len(section) != 1:
            lineno = section[0][0] if section else 1
            raise TaskFormatError("expected a single ops or names line", lineno)
        lineno, line = section[0]
        tokens = tuple(tok.strip() for tok in line.split(","))
        if all(tok in OPERATOR_TOKENS for tok in tokens):
            if op_names is not None:
                raise TaskFormatError("duplicate ops section", lineno)
            if names is not None:
                raise TaskFormatError("ops section must precede the names section", lineno)
            op_names = tokens
        else:
            if names is not None:
                raise TaskFormatError("duplicate names section", lineno)
            bad = [tok for tok in tokens if not is_valid_prop_name(tok)]
            if bad:
                raise TaskFormatError(
                    f"invalid proposition name {bad[0]!r} "
                    "(names are identifiers and may not be operator tokens)",
                    lineno,
                )
            names = tokens

    if width is None:  # unreachable: blocks are non-empty
        raise TaskFormatError("no traces found")
    alphabet = Alphabet(names) if names is not None else Alphabet.default(width)
    if len(alphabet) != width:
        raise TaskFormatError(
            f"names section has {len(alphabet)} names but letters have {width} bits"
        )
    sample = Sample(alphabet, tuple(blocks[0]), tuple(blocks[1]))
    return Task(sample, op_names)


def parse_sample(text: str) -> Sample:
    return parse_task(text).sample


def _serialize_trace(trace: Trace, width: int) -> str:
    return ";".join(
        ",".join("1" if letter >> i & 1 else "0" for i in range(width))
        for letter in trace.letters
    )


def serialize_sample(sample: Sample, op_names: Optional[Iterable[str]] = None) -> str:
    """Render a sample (and optional ops restriction) in the task file grammar.

    The names section is omitted when the alphabet is the default p0, p1, ...
    so that parse(serialize(s)) == s and re-serialization is byte-identical.
    """
    width = len(sample.alphabet)
    lines = [_serialize_trace(t, width) for t in sample.positives]
    lines.append("---")
    lines.extend(_serialize_trace(t, width) for t in sample.negatives)
    if op_names is not None:
        lines.append("---")
        lines.append(",".join(op_names))
    if sample.alphabet != Alphabet.default(width):
        lines.append("---")
        lines.append(",".join(sample.alphabet.props))
    return "\n".join(lines) + "\n"
