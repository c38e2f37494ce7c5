"""Bit-parallel evaluation of formulas as characteristic sequences.

The characteristic sequence (CS) of a formula on a trace of length l
holds one bit per position: bit p-1 is set iff the suffix starting at
position p satisfies the formula. Sequences are stored in Python ints,
which behave as little-endian arrays of machine words: position p lives
at word (p-1)//64, bit (p-1)%64, and shifting toward position 1 is `>>`
with word-boundary carries handled by the int itself. All sequences are
kept canonical: bits at indices >= l are zero, so byte-level equality of
sequences is semantic equality.

Temporal operators reduce to word-parallel logic:

    X! s     = s >> 1                  (last position becomes 0)
    X s      = !(X!(!s))               (last position becomes 1)
    F s      = or-fold of s >> 1, >> 2, >> 4, ... while the shift < l
    G s      = !(F(!s))
    s1 U s2  = doubling recurrence: out = s2, acc = s1, then per round
               out |= (out >> d) & acc; acc &= acc >> d for d = 1,2,4,...
    s1 R s2  = !((!s1) U (!s2))

The F loop runs exactly ceil(log2 l) rounds; U runs the same schedule.
The kernel functions at the top operate on raw ints (bits, plus the
length/mask where needed) so hot loops can skip wrapper objects; the
CharSequence API wraps them one-to-one.

The characteristic table of a formula is its CS on every trace of a
sample, positives first; table equality is observational equivalence.
The characteristic vector collects the first bit of every row; a
formula separates the sample iff its vector is all-ones on positive
rows and all-zeros on negative rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .formulas import (
    And,
    Atom,
    Bottom,
    Finally,
    Formula,
    Globally,
    Not,
    Or,
    Release,
    StrongNext,
    Top,
    Until,
    WeakNext,
)
from .traces import Sample, Trace

WORD_BITS = 64


# ---------------------------------------------------------------------------
# Raw kernels. `bits` is canonical (no bits at index >= length);
# `mask` is (1 << length) - 1. Every kernel returns canonical bits.
# ---------------------------------------------------------------------------

def k_not(bits: int, mask: int) -> int:
    return bits ^ mask


def k_strong_next(bits: int) -> int:
    return bits >> 1


def k_weak_next(bits: int, mask: int) -> int:
    return ((bits ^ mask) >> 1) ^ mask


def k_finally(bits: int, length: int) -> int:
    shift = 1
    while shift < length:
        bits |= bits >> shift
        shift <<= 1
    return bits


def k_globally(bits: int, mask: int, length: int) -> int:
    return k_finally(bits ^ mask, length) ^ mask


def k_until(bits1: int, bits2: int, length: int) -> int:
    out = bits2
    acc = bits1
    shift = 1
    while shift < length:
        out |= (out >> shift) & acc
        acc &= acc >> shift
        shift <<= 1
    return out


def k_release(bits1: int, bits2: int, mask: int, length: int) -> int:
    return k_until(bits1 ^ mask, bits2 ^ mask, length) ^ mask


# ---------------------------------------------------------------------------
# Typed wrappers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CharSequence:
    """Per-position satisfaction bits of one formula on one trace."""

    length: int
    bits: int

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("characteristic sequences cover non-empty traces")
        if self.bits >> self.length:
            raise ValueError("non-canonical sequence: padding bits set")

    @property
    def mask(self) -> int:
        return (1 << self.length) - 1

    @property
    def words(self) -> tuple[int, ...]:
        """The sequence as little-endian 64-bit words, padding bits zero."""
        n_words = (self.length + WORD_BITS - 1) // WORD_BITS
        full = (1 << WORD_BITS) - 1
        return tuple(self.bits >> (WORD_BITS * i) & full for i in range(n_words))

    def bit(self, position: int) -> bool:
        """The satisfaction bit at a 1-based position."""
        if not 1 <= position <= self.length:
            raise ValueError(f"position {position} out of range 1..{self.length}")
        return bool(self.bits >> (position - 1) & 1)

    @staticmethod
    def from_string(text: str) -> "CharSequence":
        """Parse "10110" style, position 1 leftmost."""
        bits = 0
        for i, c in enumerate(text):
            if c == "1":
                bits |= 1 << i
            elif c != "0":
                raise ValueError(f"expected 0 or 1, got {c!r}")
        return CharSequence(len(text), bits)

    def to_string(self) -> str:
        return "".join("1" if self.bits >> i & 1 else "0" for i in range(self.length))


def cs_atom(w: Trace, prop: int) -> CharSequence:
    bits = 0
    for i, letter in enumerate(w.letters):
        if letter >> prop & 1:
            bits |= 1 << i
    return CharSequence(w.length, bits)


def cs_top(length: int) -> CharSequence:
    return CharSequence(length, (1 << length) - 1)


def cs_bottom(length: int) -> CharSequence:
    return CharSequence(length, 0)


def cs_not(s: CharSequence) -> CharSequence:
    return CharSequence(s.length, k_not(s.bits, s.mask))


def cs_strong_next(s: CharSequence) -> CharSequence:
    return CharSequence(s.length, k_strong_next(s.bits))


def cs_weak_next(s: CharSequence) -> CharSequence:
    return CharSequence(s.length, k_weak_next(s.bits, s.mask))


def cs_finally(s: CharSequence) -> CharSequence:
    return CharSequence(s.length, k_finally(s.bits, s.length))


def finally_rounds(s: CharSequence) -> list[CharSequence]:
    """The value after each or-shift round of the F loop.

    One entry per round, ceil(log2 length) rounds in total; the last
    entry equals cs_finally(s). Exposed for inspection and tests.
    """
    out = s.bits
    rounds = []
    shift = 1
    while shift < s.length:
        out |= out >> shift
        rounds.append(CharSequence(s.length, out))
        shift <<= 1
    return rounds


def cs_globally(s: CharSequence) -> CharSequence:
    return CharSequence(s.length, k_globally(s.bits, s.mask, s.length))


def _check_lengths(s1: CharSequence, s2: CharSequence) -> None:
    if s1.length != s2.length:
        raise ValueError(f"length mismatch: {s1.length} vs {s2.length}")


def cs_and(s1: CharSequence, s2: CharSequence) -> CharSequence:
    _check_lengths(s1, s2)
    return CharSequence(s1.length, s1.bits & s2.bits)


def cs_or(s1: CharSequence, s2: CharSequence) -> CharSequence:
    _check_lengths(s1, s2)
    return CharSequence(s1.length, s1.bits | s2.bits)


def cs_until(s1: CharSequence, s2: CharSequence) -> CharSequence:
    _check_lengths(s1, s2)
    return CharSequence(s1.length, k_until(s1.bits, s2.bits, s1.length))


def cs_release(s1: CharSequence, s2: CharSequence) -> CharSequence:
    _check_lengths(s1, s2)
    return CharSequence(s1.length, k_release(s1.bits, s2.bits, s1.mask, s1.length))


_UNARY_CS = {
    "!": cs_not,
    "X!": cs_strong_next,
    "X": cs_weak_next,
    "F": cs_finally,
    "G": cs_globally,
}
_BINARY_CS = {
    "&": cs_and,
    "|": cs_or,
    "U": cs_until,
    "R": cs_release,
}


def cs_apply_unary(op: str, s: CharSequence) -> CharSequence:
    return _UNARY_CS[op](s)


def cs_apply_binary(op: str, s1: CharSequence, s2: CharSequence) -> CharSequence:
    return _BINARY_CS[op](s1, s2)


# ---------------------------------------------------------------------------
# Tables and vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CharTable:
    """One CS per trace of a sample, positives first, in sample order."""

    rows: tuple[CharSequence, ...]


@dataclass(frozen=True)
class CharVector:
    """First bit of each table row, packed; bit i = row i."""

    n: int
    bits: int

    def __post_init__(self):
        if self.bits >> self.n:
            raise ValueError("non-canonical vector: padding bits set")


def table_of(
    phi: Formula, sample: Sample, cache: Optional[dict] = None
) -> CharTable:
    """The characteristic table of phi, computed bottom-up.

    `cache` maps already-computed subformulas to their tables and is
    reused across calls when shared by the caller.
    """
    if cache is None:
        cache = {}
    return _table(phi, sample, cache)


def _table(phi: Formula, sample: Sample, cache: dict) -> CharTable:
    hit = cache.get(phi)
    if hit is not None:
        return hit
    if isinstance(phi, Atom):
        rows = tuple(cs_atom(w, phi.prop) for w in sample.traces)
    elif isinstance(phi, Top):
        rows = tuple(cs_top(w.length) for w in sample.traces)
    elif isinstance(phi, Bottom):
        rows = tuple(cs_bottom(w.length) for w in sample.traces)
    elif isinstance(phi, Not):
        rows = tuple(cs_not(r) for r in _table(phi.arg, sample, cache).rows)
    elif isinstance(phi, StrongNext):
        rows = tuple(cs_strong_next(r) for r in _table(phi.arg, sample, cache).rows)
    elif isinstance(phi, WeakNext):
        rows = tuple(cs_weak_next(r) for r in _table(phi.arg, sample, cache).rows)
    elif isinstance(phi, Finally):
        rows = tuple(cs_finally(r) for r in _table(phi.arg, sample, cache).rows)
    elif isinstance(phi, Globally):
        rows = tuple(cs_globally(r) for r in _table(phi.arg, sample, cache).rows)
    elif isinstance(phi, (And, Or, Until, Release)):
        left = _table(phi.left, sample, cache).rows
        right = _table(phi.right, sample, cache).rows
        op = {And: cs_and, Or: cs_or, Until: cs_until, Release: cs_release}[type(phi)]
        rows = tuple(op(a, b) for a, b in zip(left, right))
    else:
        raise TypeError(f"not a formula node: {phi!r}")
    table = CharTable(rows)
    cache[phi] = table
    return table


def first_bits(t: CharTable) -> CharVector:
    bits = 0
    for i, row in enumerate(t.rows):
        bits |= (row.bits & 1) << i
    return CharVector(len(t.rows), bits)


def is_solution(v: CharVector, sample: Sample) -> bool:
    """All-ones on positive rows and all-zeros on negative rows."""
    if v.n != sample.n_pos + sample.n_neg:
        raise ValueError("vector width does not match the sample")
    pos_mask = (1 << sample.n_pos) - 1
    return v.bits == pos_mask
