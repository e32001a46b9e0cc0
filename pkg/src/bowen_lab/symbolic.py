"""Two-sided 0/1 sequences, the spiral enumeration of the integers, first
differences, window words and block partitions."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

INFINITY = math.inf

Word = tuple  # tuple of 0/1 ints


def spiral_index(i: int) -> int:
    """0, 1, -1, 2, -2, ... enumerated as 0, 1, 2, 3, 4, ..."""
    return 2 * i - 1 if i > 0 else -2 * i


def spiral_position(m: int) -> int:
    """Inverse of spiral_index."""
    if m < 0:
        raise ValueError("spiral positions are natural numbers")
    return (m + 1) // 2 if m % 2 else -(m // 2)


def word(bits) -> Word:
    if isinstance(bits, str):
        bits = [int(ch) for ch in bits.strip()]
    out = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in out):
        raise ValueError("words are over {0,1}")
    return out


def word_str(w: Sequence[int]) -> str:
    return "".join(str(b) for b in w)


@dataclass(frozen=True)
class BinarySeq:
    """Finitely supported sequence Z -> {0,1}, optionally read over {2,3}."""
    support: tuple[int, ...] = ()
    offset: int = 0

    def __post_init__(self):
        s = tuple(sorted(set(self.support)))
        object.__setattr__(self, "support", s)
        if self.offset not in (0, 2):
            raise ValueError("alphabet offset must be 0 or 2")

    @classmethod
    def from_word(cls, w: Sequence[int], start: int = 0, offset: int = 0) -> "BinarySeq":
        return cls(tuple(start + i for i, b in enumerate(w) if b), offset)

    def bit(self, i: int) -> int:
        return 1 if i in self._set else 0

    def __call__(self, i: int) -> int:
        return self.bit(i) + self.offset

    @property
    def _set(self) -> frozenset:
        cached = self.__dict__.get("_support_set")
        if cached is None:
            cached = frozenset(self.support)
            object.__setattr__(self, "_support_set", cached)
        return cached

    def shift(self, t: int = 1) -> "BinarySeq":
        """sigma^t: (sigma y)(i) = y(i+1)."""
        return BinarySeq(tuple(i - t for i in self.support), self.offset)

    def window(self, start: int, length: int) -> Word:
        s = self._set
        return tuple(1 if start + i in s else 0 for i in range(length))

    def with_offset(self, offset: int) -> "BinarySeq":
        return BinarySeq(self.support, offset)

    def diff_positions(self, other: "BinarySeq") -> list[int]:
        return sorted(self._set ^ other._set)


@dataclass(frozen=True)
class PeriodicSeq:
    """Periodic sequence over {0,1} (offset 2 reads it over {2,3}): y(i) = pattern[i mod p]."""
    pattern: Word
    offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "pattern", word(self.pattern))
        if not self.pattern:
            raise ValueError("empty period")
        if self.offset not in (0, 2):
            raise ValueError("alphabet offset must be 0 or 2")

    @property
    def period(self) -> int:
        return len(self.pattern)

    def bit(self, i: int) -> int:
        return self.pattern[i % len(self.pattern)]

    def __call__(self, i: int) -> int:
        return self.bit(i) + self.offset

    def shift(self, t: int = 1) -> "PeriodicSeq":
        p = len(self.pattern)
        t %= p
        return PeriodicSeq(self.pattern[t:] + self.pattern[:t], self.offset)

    def window(self, start: int, length: int) -> Word:
        p = self.pattern
        n = len(p)
        return tuple(p[(start + i) % n] for i in range(length))

    def with_offset(self, offset: int) -> "PeriodicSeq":
        return PeriodicSeq(self.pattern, offset)

    def minimal_period(self) -> int:
        p = len(self.pattern)
        for d in range(1, p + 1):
            if p % d == 0 and self.pattern == self.pattern[d:] + self.pattern[:d]:
                return d
        return p


def delta(y, z) -> float | int:
    """Least spiral index of a position where y and z differ (INFINITY if equal)."""
    if y.offset != z.offset:
        raise ValueError("sequences over different alphabets")
    if isinstance(y, BinarySeq) and isinstance(z, BinarySeq):
        diffs = y._set ^ z._set
        if not diffs:
            return INFINITY
        return min(spiral_index(i) for i in diffs)
    # periodic (or mixed) case: scan spiral positions until both periods repeat
    span_len = _common_period(y) * _common_period(z)
    if isinstance(y, BinarySeq) or isinstance(z, BinarySeq):
        fin = y if isinstance(y, BinarySeq) else z
        extent = max((abs(i) for i in fin.support), default=0)
        span_len = max(span_len, 2 * extent + 2) + span_len
    for m in range(2 * span_len + 1):
        i = spiral_position(m)
        if y.bit(i) != z.bit(i):
            return m
    return INFINITY


def _common_period(s) -> int:
    return s.period if isinstance(s, PeriodicSeq) else 1


def delta_shifted(diff_positions: Sequence[int], t: int) -> float | int:
    """Delta(sigma^t y, sigma^t z) from the difference positions of y and z."""
    if not diff_positions:
        return INFINITY
    return min(spiral_index(i - t) for i in diff_positions)


def phi(y, tplus: int, k: int) -> Word:
    """Window (y(-k), ..., y(-k + T+ - 1)) of a level with block length T+."""
    if not 0 <= k < tplus:
        raise ValueError(f"phase {k} outside [0, {tplus})")
    return y.window(-k, tplus)


@dataclass(frozen=True)
class IntervalPartition:
    """Blocks [(j-1)T, jT) for j = 1..C tiling [0, C*T)."""
    level: int
    blocks: int
    block_len: int

    @property
    def total(self) -> int:
        return self.blocks * self.block_len

    def block(self, j: int) -> range:
        if not 1 <= j <= self.blocks:
            raise ValueError(f"block {j} outside 1..{self.blocks}")
        return range((j - 1) * self.block_len, j * self.block_len)

    def block_of(self, pos: int) -> int:
        if not 0 <= pos < self.total:
            raise ValueError(f"position {pos} outside [0, {self.total})")
        return pos // self.block_len + 1


def differing_blocks(a: Sequence[int], b: Sequence[int], part: IntervalPartition) -> set[int]:
    if len(a) != part.total or len(b) != part.total:
        raise ValueError("word length does not match the partition")
    L = part.block_len
    return {j + 1 for j in range(part.blocks) if tuple(a[j * L:(j + 1) * L]) != tuple(b[j * L:(j + 1) * L])}


def all_words(length: int) -> Iterable[Word]:
    """All 0/1 words of a length, in lexicographic order."""
    for m in range(1 << length):
        yield tuple((m >> (length - 1 - i)) & 1 for i in range(length))


def format_seq(y: BinarySeq) -> str:
    return f"supp: {','.join(str(i) for i in y.support)} offset={y.offset}"


def parse_seq(text: str) -> BinarySeq:
    body = text.strip()
    offset = 0
    if "offset=" in body:
        body, off = body.rsplit("offset=", 1)
        offset = int(off)
    body = body.strip()
    if body.startswith("supp:"):
        body = body[5:]
    items = [b for b in body.replace(" ", "").split(",") if b]
    return BinarySeq(tuple(int(b) for b in items), offset)
