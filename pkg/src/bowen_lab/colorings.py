"""Pair colorings of word families: clause-forced values, random and hashed draws,
and the largest subfamily on which a coloring uses at most two colors."""
from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Hashable, Sequence

from .exact_solvers import graph_from_edges, sep_number
from .symbolic import IntervalPartition, differing_blocks, word_str

CC1 = "cC1"
CCI = "cCi"
FREE = "unconstrained"
VARIANTS = (CC1, CCI, FREE)

# sqrt(3)/sqrt(2) growth of the guaranteed regime, and R = 1/(ln sqrt3 - ln sqrt2)
R_CONSTANT_TEXT = "1/(ln(sqrt 3) - ln(sqrt 2))"


def r_constant() -> float:
    """Numeric approximation of R; exact comparisons never use it."""
    return 1.0 / (0.5 * math.log(3) - 0.5 * math.log(2))


def r_star() -> float:
    """Numeric approximation of R* = 3 R ln 2."""
    return 3 * r_constant() * math.log(2)


def derive_seed(seed: int, *labels) -> int:
    """Child seed from a parent seed and a label path (documented counter scheme)."""
    h = hashlib.blake2b(digest_size=8)
    h.update(int(seed).to_bytes(8, "little", signed=False))
    for lab in labels:
        h.update(b"|" + str(lab).encode())
    return int.from_bytes(h.digest(), "little")


def canonical(a, b):
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class WordDomain:
    """Words of length T+(n) split into C(n) blocks, with head [0, T+(n-1))."""
    level: int
    blocks: int
    block_len: int
    head: int

    @property
    def length(self) -> int:
        return self.blocks * self.block_len

    @property
    def partition(self) -> IntervalPartition:
        return IntervalPartition(self.level, self.blocks, self.block_len)

    def tail_zero(self, w) -> bool:
        return not any(w[self.head:])

    def differ_only_on_head(self, a, b) -> bool:
        return tuple(a[self.head:]) == tuple(b[self.head:]) and tuple(a) != tuple(b)

    def admissible(self, a, b, colors: int) -> tuple[int, ...]:
        cs = differing_blocks(a, b, self.partition)
        if len(cs) >= 3:
            return tuple(sorted(cs))
        return tuple(range(1, colors + 1))


def forced_color(domain: WordDomain | None, variant: str, a, b) -> int | None:
    if domain is None or variant == FREE:
        return None
    if variant == CC1 and domain.differ_only_on_head(a, b):
        return 1
    if variant == CCI and (domain.tail_zero(a) or domain.tail_zero(b)):
        return 1
    return None


@dataclass
class Coloring:
    """Symmetric coloring of unordered pairs of distinct items with colors 1..colors.

    Backed either by an explicit table (keys are canonical pairs) or, when
    `seed` is set and the table is empty, by a keyed hash of the canonical pair.
    """
    colors: int
    variant: str = FREE
    domain: WordDomain | None = None
    table: dict = field(default_factory=dict)
    seed: int | None = None
    level: int = 0

    def __post_init__(self):
        if self.colors < 3:
            raise ValueError("at least 3 colors are required")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")

    @property
    def procedural(self) -> bool:
        return self.seed is not None and not self.table

    def __call__(self, a, b) -> int:
        if a == b:
            raise ValueError("colorings are defined on distinct pairs only")
        key = canonical(a, b)
        if self.table:
            try:
                return self.table[key]
            except KeyError:
                raise KeyError(f"pair not in coloring table: {key!r}") from None
        if self.seed is None:
            raise KeyError("coloring has neither table nor seed")
        f = forced_color(self.domain, self.variant, *key)
        if f is not None:
            return f
        choices = (self.domain.admissible(key[0], key[1], self.colors) if self.domain is not None
                   else tuple(range(1, self.colors + 1)))
        h = hashlib.blake2b(digest_size=8, key=int(self.seed).to_bytes(8, "little"))
        h.update(f"{self.level}|{_enc(key[0])}|{_enc(key[1])}".encode())
        return choices[int.from_bytes(h.digest(), "little") % len(choices)]

    def restricted(self, family: Sequence) -> "Coloring":
        """Explicit table on the pairs of a family."""
        table = {canonical(a, b): self(a, b) for a, b in combinations(family, 2)}
        return Coloring(self.colors, self.variant, self.domain, table, None, self.level)


def _enc(x) -> str:
    if isinstance(x, tuple) and all(v in (0, 1) for v in x):
        return word_str(x)
    if isinstance(x, int):
        return f"i{x}"
    raise ValueError(f"cannot serialize item {x!r}")


def random_coloring(family: Sequence, colors: int, variant: str = FREE, seed: int = 0,
                    domain: WordDomain | None = None, level: int = 0) -> Coloring:
    """Explicit table: forced pairs per the variant; others uniform on the admissible set."""
    if colors < 3:
        raise ValueError("at least 3 colors are required")
    if len(set(family)) != len(family):
        raise ValueError("family members must be distinct")
    rng = random.Random(derive_seed(seed, "coloring", level))
    table = {}
    for a, b in combinations(family, 2):
        key = canonical(a, b)
        f = forced_color(domain, variant, *key)
        if f is not None:
            table[key] = f
            continue
        choices = domain.admissible(key[0], key[1], colors) if domain is not None else tuple(range(1, colors + 1))
        table[key] = rng.choice(choices)
    return Coloring(colors, variant, domain, table, None, level)


def procedural_coloring(colors: int, variant: str, seed: int, domain: WordDomain) -> Coloring:
    return Coloring(colors, variant, domain, {}, seed, domain.level)


def table_coloring(table: dict, colors: int, variant: str = FREE, domain: WordDomain | None = None) -> Coloring:
    return Coloring(colors, variant, domain, {canonical(a, b): int(v) for (a, b), v in table.items()}, None,
                    domain.level if domain else 0)


# ------------------------------------------------------------ <=2-chromatic sets

@dataclass(frozen=True)
class Le2Result:
    size: int
    witness: tuple
    color_pair: tuple[int, int]


def max_le2_chromatic(c: Coloring, family: Sequence, exact_limit: int = 60) -> Le2Result:
    """Largest subfamily whose pairs use at most two colors (max clique per color pair)."""
    n = len(family)
    if n > exact_limit:
        raise ValueError(f"family of size {n} exceeds the exact limit {exact_limit}")
    if n <= 1:
        return Le2Result(n, tuple(family), (1, 2))
    col = {}
    for i, j in combinations(range(n), 2):
        col[(i, j)] = c(family[i], family[j])
    best = Le2Result(0, (), (1, 2))
    for pair in combinations(range(1, c.colors + 1), 2):
        # independent sets of the "other colors" graph are cliques of the {i,j} graph
        other = [(i, j) for (i, j), v in col.items() if v not in pair]
        size, wit = sep_number(graph_from_edges(n, other))
        if size > best.size:
            best = Le2Result(size, tuple(family[i] for i in wit), pair)
    return best


def oracle_le2(c: Coloring, family: Sequence) -> int:
    """Subset enumeration; families of size at most 16."""
    n = len(family)
    if n > 16:
        raise ValueError("oracle limited to 16 elements")
    col = {}
    for i, j in combinations(range(n), 2):
        col[(i, j)] = c(family[i], family[j])
    best = min(n, 1)
    for mask in range(1, 1 << n):
        members = [i for i in range(n) if mask >> i & 1]
        if len(members) <= best:
            continue
        used = {col[p] for p in combinations(members, 2)}
        if len(used) <= 2:
            best = len(members)
    return best


def guaranteed_regime(n_elems: int, m: int) -> bool:
    """n <= (sqrt3/sqrt2)^(m-1), tested exactly as 2^(m-1) n^2 <= 3^(m-1)."""
    if m < 1:
        return False
    return 2 ** (m - 1) * n_elems * n_elems <= 3 ** (m - 1)


def expected_bad_sets(n_elems: int, m: int, colors: int = 3) -> Fraction:
    """Union bound 3 * binom(n,m) * (2/3)^binom(m,2) on the expected number of <=2-chromatic m-sets (3 colors)."""
    return 3 * math.comb(n_elems, m) * Fraction(2, 3) ** math.comb(m, 2)


@dataclass(frozen=True)
class SearchResult:
    coloring: Coloring | None
    tries: int
    guaranteed: bool
    best_size: int

    @property
    def found(self) -> bool:
        return self.coloring is not None


def search_good_coloring(n_elems: int, m: int, colors: int = 3, seed: int = 0, max_tries: int = 100) -> SearchResult:
    """Draw uniform colorings of pairs of 0..n-1 until none has a <=2-chromatic set of size m."""
    family = list(range(n_elems))
    guaranteed = guaranteed_regime(n_elems, m)
    best = n_elems + 1
    for attempt in range(max_tries):
        c = random_coloring(family, colors, FREE, derive_seed(seed, "search", attempt))
        size = max_le2_chromatic(c, family, exact_limit=max(60, n_elems)).size
        best = min(best, size)
        if size < m:
            return SearchResult(c, attempt + 1, guaranteed, size)
    return SearchResult(None, max_tries, guaranteed, best)


# ------------------------------------------------------------ clause checks

@dataclass
class CCReport:
    results: dict = field(default_factory=dict)
    violations: dict = field(default_factory=dict)

    def set(self, name: str, ok, witness=None):
        self.results[name] = ok
        if witness is not None:
            self.violations[name] = witness

    @property
    def ok(self) -> bool:
        return all(v is not False for v in self.results.values())


def verify_cc_conditions(c: Coloring, family: Sequence, domain: WordDomain,
                         cc3_threshold: int | None = None) -> CCReport:
    """(cC1)/(cCi) forced values, (cC2)/(cC) membership, and (cC3) at a supplied threshold."""
    rep = CCReport()
    bad1 = badi = bad2 = None
    for a, b in combinations(family, 2):
        v = c(a, b)
        if domain.differ_only_on_head(a, b) and v != 1 and bad1 is None:
            bad1 = (a, b, v)
        tail0 = domain.tail_zero(a) or domain.tail_zero(b)
        if tail0 and v != 1 and badi is None:
            badi = (a, b, v)
        forced = forced_color(domain, c.variant, a, b)
        cs = differing_blocks(a, b, domain.partition)
        if forced is None and len(cs) >= 3 and v not in cs and bad2 is None:
            bad2 = (a, b, v)
    rep.set("cC1", (bad1 is None) if c.variant == CC1 else None, bad1 if c.variant == CC1 else None)
    rep.set("cCi", (badi is None) if c.variant == CCI else None, badi if c.variant == CCI else None)
    rep.set("cC2" if c.variant != CCI else "cC", bad2 is None, bad2)
    if cc3_threshold is not None:
        res = max_le2_chromatic(c, family)
        rep.set("cC3", res.size < cc3_threshold, None if res.size < cc3_threshold else res.witness)
    return rep


def free_subset(family: Sequence, variant: str, domain: WordDomain) -> list:
    """(cCi): drop words vanishing on the tail.  (cC1): greedy in list order,
    dropping later words that agree with a kept word on the tail."""
    if variant == CCI:
        return [w for w in family if not domain.tail_zero(w)]
    if variant == CC1:
        kept = []
        tails = set()
        for w in family:
            t = tuple(w[domain.head:])
            if t in tails:
                continue
            tails.add(t)
            kept.append(w)
        return kept
    raise ValueError("free_subset needs variant cC1 or cCi")


def is_free(family: Sequence, variant: str, domain: WordDomain) -> bool:
    if variant == CCI:
        return all(not domain.tail_zero(w) for w in family)
    tails = [tuple(w[domain.head:]) for w in family]
    return len(set(tails)) == len(tails)


# ------------------------------------------------------------ serialization

def dumps_coloring(c: Coloring) -> str:
    if c.procedural:
        d = c.domain
        return (f"seed={c.seed} variant={c.variant} level={c.level} colors={c.colors} "
                f"blocks={d.blocks} block_len={d.block_len} head={d.head}\n")
    lines = [f"colors {c.colors} variant {c.variant}"]
    for (a, b), v in sorted(c.table.items()):
        lines.append(f"pair {_enc(a)} {_enc(b)} {v}")
    return "\n".join(lines) + "\n"


def loads_coloring(text: str, domain: WordDomain | None = None) -> Coloring:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if lines and lines[0].startswith("seed="):
        kv = dict(tok.split("=", 1) for tok in lines[0].split())
        dom = WordDomain(int(kv["level"]), int(kv["blocks"]), int(kv["block_len"]), int(kv["head"]))
        return Coloring(int(kv["colors"]), kv["variant"], dom, {}, int(kv["seed"]), int(kv["level"]))
    colors = 3
    variant = FREE
    table = {}
    for ln in lines:
        parts = ln.split()
        if parts[0] == "colors":
            colors = int(parts[1])
            if len(parts) >= 4:
                variant = parts[3]
        elif parts[0] == "pair":
            a, b = _dec(parts[1]), _dec(parts[2])
            table[canonical(a, b)] = int(parts[3])
        else:
            raise ValueError(f"unknown record {parts[0]!r}")
    return Coloring(colors, variant, domain, table, None, domain.level if domain else 0)


def _dec(tok: str) -> Hashable:
    if tok.startswith("i"):
        return int(tok[1:])
    return tuple(int(ch) for ch in tok)
