"""The finite warm-up system: period-T binary sequences with a phase counter of
length 3T and a three-valued metric driven by a pair coloring."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .colorings import FREE, Coloring, max_le2_chromatic, random_coloring, r_constant, r_star
from .exact_bounds import PROVED, compare, ln2_bounds, ln_bounds
from .exact_solvers import sep_number, span_number, threshold_graph
from .metric_core import FiniteDynSystem, bowen_table, system_from_function, verify_metric_axioms
from .symbolic import PeriodicSeq, all_words, phi


@dataclass(frozen=True)
class WarmupConfig:
    T: int
    delta0: Fraction = Fraction(2, 3)
    eps0: Fraction = Fraction(1)
    seed: int = 0

    def __post_init__(self):
        if self.T < 1:
            raise ValueError("T must be positive")
        if not (0 < self.delta0 < self.eps0 < 2 * self.delta0):
            raise ValueError("need 0 < delta0 < eps0 < 2 delta0")

    @property
    def Tplus(self) -> int:
        return 3 * self.T

    def block_of(self, k: int) -> int:
        return k // self.T + 1


def realized_phis(T: int) -> list[tuple]:
    """Window words of length 3T realized by period-T sequences: each period pattern repeated."""
    return [w * 3 for w in all_words(T)]


def default_coloring(cfg: WarmupConfig) -> Coloring:
    return random_coloring(realized_phis(cfg.T), 3, FREE, cfg.seed)


@dataclass
class WarmupSystem:
    cfg: WarmupConfig
    coloring: Coloring
    points: list = field(default_factory=list)
    system: FiniteDynSystem | None = None

    def phi_of(self, point) -> tuple:
        y, k = point
        return phi(y, self.cfg.Tplus, k)


def warmup_distance(cfg: WarmupConfig, c: Coloring, a, b) -> Fraction:
    (y, k), (z, kk) = a, b
    if k != kk:
        return cfg.eps0
    if y == z:
        return Fraction(0)
    if y.bit(0) == z.bit(0):
        return cfg.delta0
    j = cfg.block_of(k)
    if c(phi(y, cfg.Tplus, k), phi(z, cfg.Tplus, kk)) == j:
        return cfg.eps0
    return cfg.delta0


def build_warmup(cfg: WarmupConfig, coloring: Coloring | None = None) -> WarmupSystem:
    c = coloring if coloring is not None else default_coloring(cfg)
    if c.colors != 3:
        raise ValueError("the warm-up metric uses exactly 3 colors")
    Tp = cfg.Tplus
    points = [(PeriodicSeq(w), k) for w in all_words(cfg.T) for k in range(Tp)]

    def step(p):
        y, k = p
        return (y.shift(1), (k + 1) % Tp)

    phis = {phi(y, Tp, k) for y, k in points}
    for a, b in combinations(sorted(phis), 2):
        c(a, b)  # raises when a realized pair is missing
    sys = system_from_function(points, step, lambda a, b: warmup_distance(cfg, c, a, b), bijective=True)
    ws = WarmupSystem(cfg, c, points, sys)
    for p in points:
        if ws.phi_of(p) != ws.phi_of(step(p)):
            raise AssertionError(f"window word not invariant at {p}")
    return ws


@dataclass(frozen=True)
class StructureReport:
    size_ok: bool
    axioms_ok: bool
    periods_ok: bool
    values_ok: bool
    phi_invariant: bool

    @property
    def ok(self) -> bool:
        return self.size_ok and self.axioms_ok and self.periods_ok and self.values_ok and self.phi_invariant


def structure_report(ws: WarmupSystem) -> StructureReport:
    cfg = ws.cfg
    sys = ws.system
    n = sys.size
    size_ok = n == 3 * cfg.T * 2 ** cfg.T
    axioms_ok = verify_metric_axioms(sys).ok
    periods_ok = all(minimal_period(sys.fmap, i) == cfg.Tplus for i in range(n))
    allowed = {Fraction(0), cfg.delta0, cfg.eps0}
    values_ok = all(v in allowed for row in sys.dist for v in row)
    inv = all(ws.phi_of(ws.points[i]) == ws.phi_of(ws.points[sys.fmap[i]]) for i in range(n))
    return StructureReport(size_ok, axioms_ok, periods_ok, values_ok, inv)


def minimal_period(fmap: Sequence[int], i: int) -> int:
    j = fmap[i]
    t = 1
    while j != i:
        j = fmap[j]
        t += 1
        if t > len(fmap):
            raise ValueError("point is not periodic")
    return t


@dataclass(frozen=True)
class HorizonRow:
    horizon: int
    sep: int
    span: int
    ln_sep_over_horizon: float
    superadditive: bool
    reduction_ok: bool


@dataclass
class WarmupResult:
    cfg: WarmupConfig
    eps: Fraction
    rows: list[HorizonRow]
    full_horizon_ok: bool | None
    le2_max: int
    sep_bound_certified: int
    r_star_bound: float

    @property
    def ok(self) -> bool:
        return (self.full_horizon_ok is not False and all(r.reduction_ok for r in self.rows)
                and all(r.sep <= self.sep_bound_certified for r in self.rows if r.horizon <= self.cfg.T))


def slice_reduction_ok(ws: WarmupSystem, witness: Sequence[int]) -> bool:
    """Within each phase class of a separated set, window words are distinct and use at most two colors."""
    by_k: dict[int, list] = {}
    for i in witness:
        y, k = ws.points[i]
        by_k.setdefault(k, []).append(ws.phi_of((y, k)))
    for words in by_k.values():
        if len(set(words)) != len(words):
            return False
        used = {ws.coloring(a, b) for a, b in combinations(words, 2)}
        if len(used) > 2:
            return False
    return True


def warmup_experiment(cfg: WarmupConfig, eps, horizons: Sequence[int],
                      coloring: Coloring | None = None) -> WarmupResult:
    eps = Fraction(eps)
    if not (cfg.delta0 < eps <= cfg.eps0):
        raise ValueError("eps must lie in (delta0, eps0]")
    hs = sorted(set(horizons))
    if not hs or hs[0] < 1:
        raise ValueError("need a nonempty list of positive horizons")
    ws = build_warmup(cfg, coloring)
    tables = bowen_table(ws.system, hs)
    seps: dict[int, int] = {}
    rows = []
    for h in hs:
        g = threshold_graph(tables[h], eps)
        s, wit = sep_number(g)
        sp, _ = span_number(g)
        seps[h] = s
        # the reduction argument is stated for horizons up to T
        red = slice_reduction_ok(ws, wit) if h <= cfg.T else True
        rows.append((h, s, sp, red))
    out = []
    for h, s, sp, red in rows:
        sup = any(seps[a] * seps[h - a] < s for a in range(1, h) if a in seps and h - a in seps)
        out.append(HorizonRow(h, s, sp, math.log(s) / h, sup, red))
    full = None
    if cfg.Tplus in seps:
        r = next(r for r in out if r.horizon == cfg.Tplus)
        full = r.sep == r.span == ws.system.size
    le2 = max_le2_chromatic(ws.coloring, realized_phis(cfg.T)).size
    return WarmupResult(cfg, eps, out, full, le2, cfg.Tplus * le2, r_star() * cfg.T ** 2)


def implication_check(T: int, prec: int = 256) -> str:
    """3 (ln R* + 2 ln T) < T ln 2 with R* = 3 R ln 2 and R = 2 / ln(3/2), in exact interval arithmetic."""
    l2lo, l2hi = ln2_bounds()
    l15lo, l15hi = ln_bounds(Fraction(3, 2), prec)
    # R* = 6 ln2 / ln(3/2)
    rs_lo = 6 * l2lo / l15hi
    rs_hi = 6 * l2hi / l15lo
    lnrs_hi = ln_bounds(rs_hi, prec)[1]
    lnT_hi = ln_bounds(Fraction(T), prec)[1]
    lhs_hi = 3 * (lnrs_hi + 2 * lnT_hi)
    lnrs_lo = ln_bounds(rs_lo, prec)[0]
    lnT_lo = ln_bounds(Fraction(T), prec)[0]
    lhs_lo = 3 * (lnrs_lo + 2 * lnT_lo)
    return compare((T * l2lo, T * l2hi), (lhs_lo, lhs_hi))


def smallest_implication_T(limit: int = 200) -> int | None:
    for T in range(1, limit + 1):
        if implication_check(T) == PROVED:
            return T
    return None


def r_values() -> tuple[float, float]:
    """(R, R*) as floating approximations, for reporting only."""
    return r_constant(), r_star()
