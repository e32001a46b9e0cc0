"""Phase-counter shift systems with clause-defined metrics, their truncated product,
RY word families, the W^n point sets, and checks of the separation and spanning
properties that the construction is built to have."""
from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Sequence

from .colorings import CC1, CCI, WordDomain, canonical, derive_seed, procedural_coloring
from .exact_solvers import graph_from_edges, sep_number, span_number
from .param_schedule import ParamSchedule, level0_size_bound
from .symbolic import (BinarySeq, IntervalPartition, all_words, delta, differing_blocks,
                       phi, spiral_position)

log = logging.getLogger(__name__)

DN1D = "Dn1d"
DN1E = "Dn1e"
TIE_COLORING = "coloring"
TIE_CONSTANT = "constant"

ENUMERATION_LIMIT = 200_000


# ------------------------------------------------------------ points and metric spec

@dataclass(frozen=True)
class ECnPoint:
    y: BinarySeq
    n: int
    k: int


@dataclass(frozen=True)
class LevelRule:
    variant: str = DN1E
    tie: str = TIE_COLORING
    coloring: Callable | None = None

    def __post_init__(self):
        if self.variant not in (DN1D, DN1E):
            raise ValueError(f"unknown phase variant {self.variant!r}")
        if self.tie not in (TIE_COLORING, TIE_CONSTANT):
            raise ValueError(f"unknown tie rule {self.tie!r}")
        if self.tie == TIE_COLORING and self.coloring is None:
            raise ValueError("the coloring tie rule needs a coloring")


@dataclass(frozen=True)
class ECMetricSpec:
    schedule: ParamSchedule
    rules: tuple[LevelRule, ...]
    _colors: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.rules:
            raise ValueError("need at least one level")
        if len(self.rules) > len(self.schedule.levels):
            raise ValueError("more level rules than schedule levels")
        if not self.schedule.truncated(self.depth).has_eps:
            raise ValueError("eps/delta must be set on every level in use")

    @property
    def depth(self) -> int:
        return len(self.rules) - 1

    def Tplus(self, n: int) -> int:
        return self.schedule.Tplus(n)

    def T(self, n: int) -> int:
        return self.schedule.T(n)

    def eps(self, n: int) -> Fraction:
        return self.schedule.eps(n)

    def delta(self, n: int) -> Fraction:
        return self.schedule.delta(n)

    def beta(self, n: int) -> Fraction:
        return self.delta(n) if self.rules[n].variant == DN1D else self.eps(n)

    @property
    def eps_total(self) -> Fraction:
        return self.schedule.eps_total(self.depth)

    @property
    def delta_total(self) -> Fraction:
        return sum((self.delta(n) for n in range(self.depth + 1)), Fraction(0))

    def color(self, n: int, a, b) -> int:
        key = (n,) + canonical(a, b)
        v = self._colors.get(key)
        if v is None:
            v = self.rules[n].coloring(a, b)
            self._colors[key] = v
        return v

    def with_rules(self, rules: Sequence[LevelRule]) -> "ECMetricSpec":
        return ECMetricSpec(self.schedule, tuple(rules))


def level_domain(schedule: ParamSchedule, n: int) -> WordDomain:
    return WordDomain(n, schedule.C(n), schedule.T(n), schedule.Tplus(n - 1) if n > 0 else 1)


def ec_spec(schedule: ParamSchedule, depth: int | None = None, style: str = CCI, seed: int = 0,
            tie: str = TIE_COLORING) -> ECMetricSpec:
    """cCi colorings with (Dn1e), or cC1 colorings with (Dn1d); hashed colorings per level."""
    depth = schedule.depth if depth is None else depth
    if style not in (CC1, CCI):
        raise ValueError("style is cC1 or cCi")
    variant = DN1E if style == CCI else DN1D
    rules = []
    for n in range(depth + 1):
        col = None
        if tie == TIE_COLORING:
            col = procedural_coloring(schedule.C(n), style, derive_seed(seed, "ec", n), level_domain(schedule, n))
        rules.append(LevelRule(variant, tie, col))
    return ECMetricSpec(schedule, tuple(rules))


def constant_spec(schedule: ParamSchedule, depth: int | None = None) -> ECMetricSpec:
    """Phase mismatch at eps_n and eps_n 3^-Delta for every same-phase pair (no coloring)."""
    depth = schedule.depth if depth is None else depth
    return ECMetricSpec(schedule, tuple(LevelRule(DN1E, TIE_CONSTANT) for _ in range(depth + 1)))


def sabotaged_spec(spec: ECMetricSpec) -> ECMetricSpec:
    """Every pair gets the color C(n)+1, which no block index matches."""
    rules = []
    for n, r in enumerate(spec.rules):
        bad = spec.schedule.C(n) + 1
        rules.append(LevelRule(r.variant, TIE_COLORING, lambda a, b, bad=bad: bad))
    return spec.with_rules(rules)


def ecn_point(spec: ECMetricSpec, y: BinarySeq, n: int, k: int) -> ECnPoint:
    if not 0 <= n <= spec.depth:
        raise ValueError(f"level {n} outside 0..{spec.depth}")
    if not 0 <= k < spec.Tplus(n):
        raise ValueError(f"phase {k} outside [0, {spec.Tplus(n)})")
    return ECnPoint(y, n, k)


def ecn_step(spec: ECMetricSpec, p: ECnPoint, t: int = 1) -> ECnPoint:
    return ECnPoint(p.y.shift(t), p.n, (p.k + t) % spec.Tplus(p.n))


def ecn_distance(a: ECnPoint, b: ECnPoint, spec: ECMetricSpec) -> Fraction:
    if a.n != b.n:
        raise ValueError("points on different levels")
    n = a.n
    if a.k != b.k:
        return spec.beta(n)
    if a.y == b.y:
        return Fraction(0)
    d = delta(a.y, b.y)
    if d > 0:
        return spec.eps(n) / Fraction(3) ** d
    rule = spec.rules[n]
    if rule.tie == TIE_CONSTANT:
        return spec.eps(n)
    tp = spec.Tplus(n)
    j = a.k // spec.T(n) + 1
    if spec.color(n, phi(a.y, tp, a.k), phi(b.y, tp, b.k)) == j:
        return spec.eps(n)
    return spec.delta(n)


# ------------------------------------------------------------ product points

@dataclass(frozen=True)
class ECProductPoint:
    coords: tuple[ECnPoint, ...]

    def __post_init__(self):
        for i, c in enumerate(self.coords):
            if c.n != i:
                raise ValueError(f"coordinate {i} holds level {c.n}")

    @property
    def depth(self) -> int:
        return len(self.coords) - 1


def product_point(spec: ECMetricSpec, ys: Sequence[BinarySeq], ks: Sequence[int]) -> ECProductPoint:
    return ECProductPoint(tuple(ecn_point(spec, y, n, k) for n, (y, k) in enumerate(zip(ys, ks))))


def product_step(spec: ECMetricSpec, x: ECProductPoint, t: int = 1) -> ECProductPoint:
    return ECProductPoint(tuple(ecn_step(spec, c, t) for c in x.coords))


def ec_distance(a: ECProductPoint, b: ECProductPoint, spec: ECMetricSpec) -> tuple[Fraction, bool]:
    """Truncated sum over levels, and whether every level attains eps_n."""
    if a.depth != b.depth:
        raise ValueError("truncation depths differ")
    total = Fraction(0)
    attained = True
    for ca, cb in zip(a.coords, b.coords):
        d = ecn_distance(ca, cb, spec)
        total += d
        attained = attained and d == spec.eps(ca.n)
    return total, attained


def ec_bowen(a: ECProductPoint, b: ECProductPoint, spec: ECMetricSpec, horizon: int) -> Fraction:
    if horizon < 1:
        raise ValueError("horizon must be positive")
    best = Fraction(0)
    for t in range(horizon):
        d, _ = ec_distance(product_step(spec, a, t), product_step(spec, b, t), spec)
        best = max(best, d)
    return best


def attains_at(spec: ECMetricSpec, ca: ECnPoint, cb: ECnPoint, t: int) -> bool:
    """D^n(F^t a, F^t b) == eps_n, decided from the clauses without rational arithmetic."""
    n = ca.n
    tp = spec.Tplus(n)
    ka = (ca.k + t) % tp
    kb = (cb.k + t) % tp
    rule = spec.rules[n]
    if ka != kb:
        return rule.variant == DN1E
    if ca.y.bit(t) == cb.y.bit(t):
        return False
    if rule.tie == TIE_CONSTANT:
        return True
    j = ka // spec.T(n) + 1
    return spec.color(n, ca.y.window(t - ka, tp), cb.y.window(t - kb, tp)) == j


def all_levels_attain(spec: ECMetricSpec, a: ECProductPoint, b: ECProductPoint, t: int,
                      levels: int | None = None) -> bool:
    top = a.depth if levels is None else levels
    return all(attains_at(spec, a.coords[s], b.coords[s], t) for s in range(top + 1))


def bowen_witness(spec: ECMetricSpec, a: ECProductPoint, b: ECProductPoint, horizon: int,
                  levels: int | None = None) -> int | None:
    """First t < horizon at which the listed levels all attain eps_n (the full max by the sum rule)."""
    for t in range(horizon):
        if all_levels_attain(spec, a, b, t, levels):
            return t
    return None


# ------------------------------------------------------------ structural checks

def pdn_check(spec: ECMetricSpec, points: Sequence[ECnPoint]) -> tuple[bool, tuple | None]:
    """Per-level distances stay <= eps_n, and < eps_n forces <= delta_n."""
    for a, b in combinations(points, 2):
        d = ecn_distance(a, b, spec)
        e = spec.eps(a.n)
        if d > e or (d < e and d > spec.delta(a.n)):
            return False, (a, b, d)
    return True, None


def phi_invariance(spec: ECMetricSpec, n: int, ys: Sequence[BinarySeq]) -> tuple[bool, ECnPoint | None]:
    """Phi is constant along the orbit until the phase wraps; returns the check and a wrap counterexample."""
    tp = spec.Tplus(n)
    for y in ys:
        for k in range(tp - 1):
            p = ECnPoint(y, n, k)
            q = ecn_step(spec, p)
            if phi(p.y, tp, p.k) != phi(q.y, tp, q.k):
                return False, None
    k = tp - 1
    y = BinarySeq((-k,))
    p = ECnPoint(y, n, k)
    q = ecn_step(spec, p)
    counter = p if phi(p.y, tp, p.k) != phi(q.y, tp, q.k) else None
    return True, counter


def in_W(spec: ECMetricSpec, x: ECProductPoint) -> bool:
    ys = {c.y for c in x.coords}
    if len(ys) != 1:
        return False
    return all(x.coords[i].k % spec.Tplus(i) == x.coords[i + 1].k % spec.Tplus(i) for i in range(x.depth))


# ------------------------------------------------------------ RY families

@dataclass(frozen=True)
class RYFamily:
    schedule: ParamSchedule
    words: tuple[tuple[tuple, ...], ...]
    candidates: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.words) - 1

    def level(self, n: int) -> tuple[tuple, ...]:
        return self.words[n]


def _partition(s: ParamSchedule, n: int) -> IntervalPartition:
    return IntervalPartition(n, s.C(n), s.T(n))


def _greedy(cands, part: IntervalPartition) -> list:
    kept: list = []
    for w in cands:
        if all(len(differing_blocks(w, v, part)) >= 3 for v in kept):
            kept.append(w)
    return kept


def build_ry(schedule: ParamSchedule, depth: int | None = None, seed: int | None = None) -> RYFamily:
    """Greedy list removal per level; candidates in lexicographic order, or shuffled by a seed."""
    depth = schedule.depth if depth is None else depth
    t0 = schedule.T(0)
    cands = [w for w in all_words(schedule.Tplus(0)) if any(w[1:t0])]
    if not cands:
        raise ValueError("level-0 candidate list is empty (T(0) must be at least 2)")
    levels = []
    counts = []
    for n in range(depth + 1):
        if n > 0:
            prev = levels[-1]
            count = len(prev) ** (schedule.C(n) * schedule.K(n))
            if count > ENUMERATION_LIMIT:
                raise ValueError(f"level {n} has {count} candidates; beyond the enumeration limit")
            cands = [sum(parts, ()) for parts in product(prev, repeat=schedule.C(n) * schedule.K(n))]
        if seed is not None:
            random.Random(derive_seed(seed, "ry", n)).shuffle(cands)
        counts.append(len(cands))
        levels.append(tuple(_greedy(cands, _partition(schedule, n))))
    return RYFamily(schedule, tuple(levels), tuple(counts))


@dataclass
class RYReport:
    properties: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    sizes: tuple = ()

    def set(self, name: str, ok: bool, witness=None) -> None:
        self.properties[name] = ok
        if not ok:
            self.witnesses[name] = witness

    @property
    def ok(self) -> bool:
        return all(self.properties.values())


def verify_ry(ry: RYFamily) -> RYReport:
    s = ry.schedule
    rep = RYReport(sizes=tuple(len(w) for w in ry.words))
    t0, tp0 = s.T(0), s.Tplus(0)

    def first_bad(pred, items):
        return next((x for x in items if not pred(x)), None)

    y0 = ry.level(0)
    bad = first_bad(lambda p: len(differing_blocks(p[0], p[1], _partition(s, 0))) >= 3, combinations(y0, 2))
    rep.set("PY1", bad is None, bad)
    bad = first_bad(lambda w: len(w) == tp0 and any(w[1:t0]), y0)
    rep.set("PY2", bad is None, bad)
    for n in range(1, ry.depth + 1):
        prev = set(ry.level(n - 1))
        L = s.Tplus(n - 1)
        bad = first_bad(lambda w: len(w) == s.Tplus(n) and all(tuple(w[i:i + L]) in prev for i in range(0, len(w), L)),
                        ry.level(n))
        rep.set(f"PR1.{n}", bad is None, bad)
        bad = first_bad(lambda p: len(differing_blocks(p[0], p[1], _partition(s, n))) >= 3,
                        combinations(ry.level(n), 2))
        rep.set(f"PR2.{n}", bad is None, bad)
    for n in range(ry.depth + 1):
        bad = first_bad(lambda w: all(any(w[i + 1:i + t0]) for i in range(0, len(w), tp0)), ry.level(n))
        rep.set(f"PY2+.{n}", bad is None, bad)
    for n in range(ry.depth + 1):
        C, K = s.C(n), s.K(n)
        size = len(ry.level(n))
        if n == 0:
            nr = C * (2 ** s.T(0) - 1) + math.comb(C, 2) * (2 ** s.T(0) - 1) ** 2
            closed = size >= level0_size_bound(C, K)
        else:
            base = len(ry.level(n - 1)) ** K
            nr = C * (base - 1) + math.comb(C, 2) * (base - 1) ** 2
            closed = size * math.comb(C, 2) >= len(ry.level(n - 1)) ** ((C - 2) * K)
        rep.set(f"greedy-count.{n}", ry.candidates[n] <= (1 + nr) * size, (ry.candidates[n], nr, size))
        rep.set(f"size-bound.{n}", closed, size)
    return rep


# ------------------------------------------------------------ W^n points

def y_of_word(w: Sequence[int]) -> BinarySeq:
    return BinarySeq.from_word(w)


def x_phi(spec: ECMetricSpec, w: Sequence[int]) -> ECProductPoint:
    y = y_of_word(w)
    return ECProductPoint(tuple(ECnPoint(y, m, 0) for m in range(spec.depth + 1)))


def generate_Wn(ry: RYFamily, n: int, spec: ECMetricSpec) -> list[ECProductPoint]:
    if not 0 <= n <= ry.depth:
        raise ValueError(f"level {n} outside the family depth {ry.depth}")
    return [x_phi(spec, w) for w in ry.level(n)]


# ------------------------------------------------------------ separation witnesses

class WitnessPrecondition(ValueError):
    """The pair does not meet the distinctness / three-block / tail conditions."""


def _level_points(spec: ECMetricSpec, y: BinarySeq, n: int) -> ECProductPoint:
    return ECProductPoint(tuple(ECnPoint(y, m, 0) for m in range(n + 1)))


def _pair_condition(spec: ECMetricSpec, a, b, n: int) -> str | None:
    if a == b:
        return "words coincide"
    head = spec.Tplus(n - 1) if n > 0 else 1
    if n > 0 and (not any(a[head:]) or not any(b[head:])):
        return "a word vanishes on the tail"
    if len(differing_blocks(a, b, IntervalPartition(n, spec.schedule.C(n), spec.T(n)))) < 3:
        return "words differ on fewer than 3 blocks"
    return None


def _check_start(spec: ECMetricSpec, y: BinarySeq, z: BinarySeq, tau: int, n: int):
    tp = spec.Tplus(n)
    if tau % tp:
        raise WitnessPrecondition(f"shift {tau} is not a multiple of {tp}")
    a, b = y.window(tau, tp), z.window(tau, tp)
    why = _pair_condition(spec, a, b, n)
    if why:
        raise WitnessPrecondition(why)
    return a, b


def witness_direct(spec: ECMetricSpec, y: BinarySeq, z: BinarySeq, tau: int, n: int) -> int | None:
    _check_start(spec, y, z, tau, n)
    a, b = _level_points(spec, y, n), _level_points(spec, z, n)
    for t in range(spec.Tplus(n)):
        if all_levels_attain(spec, a, b, tau + t):
            return t
    log.warning("no witness: level %d shift %d support %s vs %s", n, tau, y.support, z.support)
    return None


def witness_recursive(spec: ECMetricSpec, y: BinarySeq, z: BinarySeq, tau: int, n: int) -> int | None:
    """Block descent: colored block at level n, first differing sub-block, then recurse."""
    a, b = _check_start(spec, y, z, tau, n)
    j = spec.color(n, a, b)
    T = spec.T(n)
    if not 1 <= j <= spec.schedule.C(n):
        return None
    lo = (j - 1) * T
    if n == 0:
        t = next((i for i in range(lo, lo + T) if a[i] != b[i]), None)
        return t
    L = spec.Tplus(n - 1)
    for off in range(lo, lo + T, L):
        if a[off:off + L] != b[off:off + L]:
            rest = witness_recursive(spec, y, z, tau + off, n - 1)
            return None if rest is None else off + rest
    return None


def separation_witness(spec: ECMetricSpec, y: BinarySeq, z: BinarySeq, tau: int, n: int,
                       method: str = "direct") -> int | None:
    if method == "direct":
        return witness_direct(spec, y, z, tau, n)
    if method == "recursive":
        return witness_recursive(spec, y, z, tau, n)
    raise ValueError(f"unknown witness method {method!r}")


def witness_valid(spec: ECMetricSpec, y: BinarySeq, z: BinarySeq, tau: int, n: int, t: int | None) -> bool:
    if t is None or not 0 <= t < spec.Tplus(n):
        return False
    return all_levels_attain(spec, _level_points(spec, y, n), _level_points(spec, z, n), tau + t)


@dataclass(frozen=True)
class WitnessRow:
    level: int
    pair: tuple[int, int]
    direct: int | None
    recursive: int | None
    direct_ok: bool
    recursive_ok: bool
    in_colored_block: bool

    @property
    def agree(self) -> bool:
        return self.direct_ok == self.recursive_ok


def witness_table(ry: RYFamily, n: int, spec: ECMetricSpec) -> list[WitnessRow]:
    rows = []
    words = ry.level(n)
    T = spec.T(n)
    for i, j in combinations(range(len(words)), 2):
        y, z = y_of_word(words[i]), y_of_word(words[j])
        td = witness_direct(spec, y, z, 0, n)
        tr = witness_recursive(spec, y, z, 0, n)
        col = spec.color(n, words[i], words[j])
        inside = td is not None and td // T + 1 == col
        rows.append(WitnessRow(n, (i, j), td, tr, witness_valid(spec, y, z, 0, n, td),
                               witness_valid(spec, y, z, 0, n, tr), inside))
    return rows


@dataclass(frozen=True)
class SepVerdict:
    level: int
    size: int
    pairs: int
    failures: tuple
    horizon: int

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def lower_bound(self) -> int:
        return self.size if self.ok else 0


def verify_Wn_separated(ry: RYFamily, n: int, spec: ECMetricSpec) -> SepVerdict:
    """Every pair of W^n reaches the truncated diameter within T+(n) steps."""
    if spec.depth < n:
        raise ValueError("truncation depth below the level")
    pts = generate_Wn(ry, n, spec)
    h = spec.Tplus(n)
    fails = tuple((i, j) for i, j in combinations(range(len(pts)), 2)
                  if bowen_witness(spec, pts[i], pts[j], h) is None)
    return SepVerdict(n, len(pts), len(pts) * (len(pts) - 1) // 2, fails, h)


# ------------------------------------------------------------ spanning lower bound

@dataclass(frozen=True)
class AmbientPoint:
    point: ECProductPoint
    source_level: int
    word_index: int
    shift: int

    def case(self, n: int) -> int:
        m, tau = self.source_level, self.shift
        if tau == 0:
            return 1 if m == n else (2 if m < n else 3)
        if tau > 0:
            return 4 if m <= n else 5
        return 6


def ambient_set(ry: RYFamily, spec: ECMetricSpec, tau_min: int, tau_max: int) -> list[AmbientPoint]:
    out = []
    for m in range(min(ry.depth, spec.depth) + 1):
        for i, w in enumerate(ry.level(m)):
            x = x_phi(spec, w)
            for tau in range(tau_min, tau_max + 1):
                out.append(AmbientPoint(product_step(spec, x, tau), m, i, tau))
    return out


@dataclass(frozen=True)
class SpanVerdict:
    level: int
    size: int
    ambient: int
    cases: dict
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def lower_bound(self) -> int:
        """Each spanning point is close to at most one member of W^n, so span >= |W^n|."""
        return self.size if self.ok else 0


def verify_span_lower(ry: RYFamily, n: int, spec: ECMetricSpec, tau_min: int | None = None,
                      tau_max: int | None = None) -> SpanVerdict:
    """For each ambient x at most one u in W^n stays below the truncated diameter over T+(n) steps."""
    reach = 2 * spec.Tplus(spec.depth)
    tau_min = -reach if tau_min is None else tau_min
    tau_max = reach if tau_max is None else tau_max
    wn = generate_Wn(ry, n, spec)
    h = spec.Tplus(n)
    amb = ambient_set(ry, spec, tau_min, tau_max)
    cases: dict[int, int] = {}
    bad = []
    for ap in amb:
        cases[ap.case(n)] = cases.get(ap.case(n), 0) + 1
        close = [i for i, u in enumerate(wn) if bowen_witness(spec, ap.point, u, h) is None]
        if len(close) > 1:
            bad.append((ap.source_level, ap.word_index, ap.shift, tuple(close)))
    return SpanVerdict(n, len(wn), len(amb), dict(sorted(cases.items())), tuple(bad))


# ------------------------------------------------------------ sep upper-bound reduction

@dataclass(frozen=True)
class ReductionRow:
    level: int
    phase: int
    case: int
    slice_size: int
    sep: int
    images_distinct: bool
    colors_ok: bool
    max_colors: int
    bound_exponent: Fraction

    @property
    def ok(self) -> bool:
        return self.images_distinct and self.colors_ok


def _slice_positions(spec: ECMetricSpec, n: int, k: int, budget: int) -> tuple[list[int], int | None]:
    tp, T = spec.Tplus(n), spec.T(n)
    t0 = tp - k if T - 1 + k >= tp else None
    pos = list(range(2 * T))
    win = list(range(-k, -k + tp)) if t0 is None else list(range(t0, t0 + tp))
    for p in win:
        if len(pos) >= budget:
            break
        if p not in pos:
            pos.append(p)
    return sorted(pos), t0


def sep_reduction_check(spec: ECMetricSpec, n: int, k: int, budget_bits: int = 8) -> ReductionRow:
    """Exact sep of a phase-k slice at horizon 2T(n) above delta_n, and the two-color
    structure of the window images of a maximum separated set."""
    if spec.rules[n].tie != TIE_COLORING:
        raise ValueError("the reduction concerns the coloring rule")
    tp, T = spec.Tplus(n), spec.T(n)
    if not 0 <= k < tp:
        raise ValueError("phase out of range")
    pos, t0 = _slice_positions(spec, n, k, max(budget_bits, 2 * T))
    pts = [ECnPoint(BinarySeq(tuple(p for p, b in zip(pos, bits) if b)), n, k)
           for bits in product((0, 1), repeat=len(pos))]
    h = 2 * T
    close = []
    for i, j in combinations(range(len(pts)), 2):
        if not any(attains_at(spec, pts[i], pts[j], t) for t in range(h)):
            close.append((i, j))
    size, wit = sep_number(graph_from_edges(len(pts), close))
    if t0 is None:
        J = range(T, 2 * T)
        img = lambda p: phi(p.y, tp, p.k)
        jk = k // T + 1
        allowed = {jk, jk + 1}
    else:
        J = [t for t in range(2 * T) if t < t0 or t >= t0 + T]
        img = lambda p: p.y.window(t0, tp)
        allowed = {1}
    groups: dict[tuple, list] = {}
    for i in wit:
        groups.setdefault(tuple(pts[i].y.bit(t) for t in J), []).append(pts[i])
    distinct = True
    colors_ok = True
    most = 0
    for grp in groups.values():
        ims = [img(p) for p in grp]
        if len(set(ims)) != len(ims):
            distinct = False
            continue
        used = {spec.color(n, a, b) for a, b in combinations(ims, 2)}
        most = max(most, len(used))
        if not used <= allowed:
            colors_ok = False
    return ReductionRow(n, k, 1 if t0 is None else 2, len(pts), size, distinct, colors_ok, most,
                        Fraction(7, 4) * T)


# ------------------------------------------------------------ spanning-set constructions

LARGE = "large-delta"
W_SMALL = "W-small-delta"
X_LOWER = "X-lower"


@dataclass(frozen=True)
class SpanConstruction:
    target: str
    case: str
    delta: Fraction
    horizon: int
    size: int
    size_bound: int | None
    spans: bool
    exact_span: int | None = None
    lower_bound: int | None = None

    @property
    def ok(self) -> bool:
        if not self.spans:
            return False
        if self.size_bound is not None and self.size > self.size_bound:
            return False
        if self.lower_bound is not None and self.exact_span is not None and self.exact_span < self.lower_bound:
            return False
        return True


def _spans(spec: ECMetricSpec, centers, pool, dlt: Fraction, horizon: int) -> bool:
    return all(any(ec_bowen(c, x, spec, horizon) < dlt for c in centers) for x in pool)


def large_delta_construction(spec: ECMetricSpec, pool: Sequence[ECProductPoint], dlt, horizon: int) -> SpanConstruction:
    """Cases above the Dn1d floor: singleton, {x, F x}, or a phase-successor lattice."""
    dlt = Fraction(dlt)
    eps = spec.eps_total
    if not pool:
        raise ValueError("empty point pool")
    if dlt > eps:
        centers = [pool[0]]
        case = "a"
    elif dlt == eps:
        if any(r.variant != DN1D for r in spec.rules):
            raise ValueError("the delta = eps case needs (Dn1d) on every level")
        centers = [pool[0], product_step(spec, pool[0])]
        case = "b"
    elif spec.delta_total < dlt < eps:
        if any(r.variant != DN1D for r in spec.rules):
            raise ValueError("the lattice case needs (Dn1d) on every level")
        slack = dlt - spec.delta_total
        K = next(K for K in range(spec.depth + 1)
                 if sum((spec.eps(m) for m in range(K + 1, spec.depth + 1)), Fraction(0)) < slack)
        centers = []
        for ks in product((0, 1), repeat=K + 1):
            pick = next((x for x in pool if all(x.coords[i].k == ks[i] for i in range(K + 1))), pool[0])
            centers.append(pick)
        reps = []
        for x in pool:
            want = tuple(1 if x.coords[i].k == 0 else 0 for i in range(K + 1))
            reps.append(centers[int("".join(map(str, want)), 2)])
        ok = all(ec_bowen(c, x, spec, horizon) < dlt for c, x in zip(reps, pool))
        uniq = list(dict.fromkeys(centers))
        return SpanConstruction(LARGE, "c", dlt, horizon, len(uniq), 2 ** (K + 1), ok)
    else:
        raise ValueError("delta must exceed the sum of the delta_n")
    return SpanConstruction(LARGE, case, dlt, horizon, len(centers), len(centers),
                            _spans(spec, centers, pool, dlt, horizon))


def _lemma7_parameters(spec: ECMetricSpec, dlt: Fraction) -> tuple[int, int]:
    half = dlt / 2
    i = next(i for i in range(spec.depth + 1)
             if sum((spec.eps(m) for m in range(i + 1, spec.depth + 1)), Fraction(0)) < half)
    head = sum((spec.eps(j) for j in range(i + 1)), Fraction(0))
    m = 3
    while head / Fraction(3) ** m >= half:
        m += 2
    return i, m


def window_lattice_construction(spec: ECMetricSpec, pool: Sequence[ECProductPoint], dlt, horizon: int) -> SpanConstruction:
    """Representatives by (phase at level i, y on a centered window of length m+T-1), for points of W."""
    dlt = Fraction(dlt)
    if not dlt < spec.delta_total:
        raise ValueError("this construction is for delta below the sum of the delta_n")
    if not all(in_W(spec, x) for x in pool):
        raise ValueError("pool points must lie in W")
    i, m = _lemma7_parameters(spec, dlt)
    q = spiral_position(m - 1)
    reps: dict[tuple, ECProductPoint] = {}
    chosen = []
    for x in pool:
        key = (x.coords[i].k, x.coords[0].y.window(q, m + horizon - 1))
        if key not in reps:
            reps[key] = x
        chosen.append(reps[key])
    ok = all(ec_bowen(c, x, spec, horizon) < dlt for c, x in zip(chosen, pool))
    bound = spec.Tplus(i) * 2 ** (horizon + m - 1)
    return SpanConstruction(W_SMALL, f"i={i},m={m}", dlt, horizon, len(reps), bound, ok)


def product_slice(spec: ECMetricSpec, window: int, phases: Sequence[int] | None = None) -> list[ECProductPoint]:
    """Points of the truncated full product: independent y per level supported in [0, window)."""
    phases = (0,) if phases is None else tuple(phases)
    ys = [BinarySeq.from_word(w) for w in all_words(window)]
    out = []
    for combo in product(ys, repeat=spec.depth + 1):
        for k in phases:
            out.append(ECProductPoint(tuple(ECnPoint(combo[n], n, k % spec.Tplus(n))
                                            for n in range(spec.depth + 1))))
    return out


def _mchoice(spec: ECMetricSpec, i: int) -> int:
    head = sum((spec.eps(j) for j in range(i + 1)), Fraction(0))
    target = Fraction(3, 2) * spec.delta(i) - spec.eps(i) / 2
    m = 1
    while head / Fraction(3) ** m >= target:
        m += 2
    return m


def x_lower_construction(spec: ECMetricSpec, window: int, horizon: int,
                         phases: Sequence[int] | None = None) -> SpanConstruction:
    """Exact span at delta_i of an enumerated product slice against 2^{(i+1)T}."""
    if window < horizon:
        raise ValueError("window must cover the horizon")
    i = spec.depth
    pts = product_slice(spec, window, phases)
    if len(pts) > 400:
        raise ValueError("slice too large for the exact solver")
    dlt = spec.delta(i)
    close = [(a, b) for a, b in combinations(range(len(pts)), 2)
             if ec_bowen(pts[a], pts[b], spec, horizon) < dlt]
    size, centers = span_number(graph_from_edges(len(pts), close))
    m = _mchoice(spec, i)
    upper = math.prod(spec.Tplus(j) for j in range(i + 1)) * 2 ** ((i + 1) * (horizon + m - 1))
    return SpanConstruction(X_LOWER, f"i={i}", dlt, horizon, size, upper, True, size, 2 ** ((i + 1) * horizon))


# ------------------------------------------------------------ transitive prefix

@dataclass(frozen=True)
class Quadruple:
    m: int
    kappa: tuple
    k: int
    level: int


@dataclass(frozen=True)
class TransitivePrefix:
    y: BinarySeq
    times: tuple[int, ...]
    intervals: tuple[tuple[int, int], ...]
    hits: tuple[bool, ...]

    @property
    def ok(self) -> bool:
        return all(self.hits)


def transitive_prefix(spec: ECMetricSpec, quads: Sequence[Quadruple]) -> TransitivePrefix:
    """Place each window kappa (indexed -m..m) around a time t with t = k mod T+(N), left to right."""
    support = set()
    times, intervals = [], []
    nxt = 1
    for q in quads:
        tp = spec.Tplus(q.level)
        if len(q.kappa) != 2 * q.m + 1:
            raise ValueError("kappa must cover [-m, m]")
        if q.m <= tp:
            raise ValueError("need m > T+(N)")
        if not 0 <= q.k < tp:
            raise ValueError("phase out of range")
        t = nxt + q.m
        t += (q.k - t) % tp
        lo, hi = t - q.m, t + q.m
        if intervals and lo <= intervals[-1][1]:
            raise AssertionError("overlapping placement intervals")
        for i, b in enumerate(q.kappa):
            if b:
                support.add(lo + i)
        times.append(t)
        intervals.append((lo, hi))
        nxt = hi + 1
    y = BinarySeq(tuple(support))
    hits = []
    for q, t in zip(quads, times):
        shifted = y.shift(t)
        hits.append(shifted.window(-q.m, 2 * q.m + 1) == tuple(q.kappa) and t % spec.Tplus(q.level) == q.k)
    return TransitivePrefix(y, tuple(times), tuple(intervals), tuple(hits))
