"""Metric-space transformations: scaling, amplifying by a shift factor, combining
blocks around a fixed point, the duplication metric, the {2,3} conjugate of an EC
truncation, and exact checks of the counting identities each one preserves."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod
from typing import Sequence

from .ec_construction import ECMetricSpec, ECnPoint, constant_spec, ec_spec, ecn_distance, ecn_step
from .exact_solvers import cov_number, sep_number, span_number, threshold_graph
from .metric_core import FiniteDynSystem, bowen, bowen_table, make_system, system_from_function, verify_metric_axioms
from .param_schedule import ParamSchedule, surrogate_schedule
from .symbolic import INFINITY, PeriodicSeq, spiral_position
from .symbolic import delta as first_difference

PRODUCT_LIMIT = 4000


def diameter(sys: FiniteDynSystem) -> Fraction:
    return max((v for row in sys.dist for v in row), default=Fraction(0))


def _sep(dist, eps) -> int:
    return sep_number(threshold_graph(dist, eps))[0]


def _span(dist, eps) -> int:
    return span_number(threshold_graph(dist, eps))[0]


# ------------------------------------------------------------------ scaling

def scale(sys: FiniteDynSystem, gamma) -> FiniteDynSystem:
    gamma = Fraction(gamma)
    if gamma <= 0:
        raise ValueError("scale factor must be positive")
    rows = tuple(tuple(gamma * v for v in row) for row in sys.dist)
    return FiniteDynSystem(rows, sys.fmap, sys.labels, sys.bijective)


@dataclass(frozen=True)
class ScalingRow:
    horizon: int
    delta: Fraction
    sep_scaled: int
    sep_base: int
    span_scaled: int
    span_base: int

    @property
    def ok(self) -> bool:
        return self.sep_scaled == self.sep_base and self.span_scaled == self.span_base


def scaling_check(sys: FiniteDynSystem, gamma, deltas: Sequence, horizons: Sequence[int]) -> list[ScalingRow]:
    """sep/span of the scaled copy at delta against the original at delta / gamma."""
    gamma = Fraction(gamma)
    scaled = scale(sys, gamma)
    base_tables = bowen_table(sys, horizons)
    scaled_tables = bowen_table(scaled, horizons)
    rows = []
    for h in sorted(set(horizons)):
        for dl in deltas:
            dl = Fraction(dl)
            rows.append(ScalingRow(h, dl, _sep(scaled_tables[h], dl), _sep(base_tables[h], dl / gamma),
                                   _span(scaled_tables[h], dl), _span(base_tables[h], dl / gamma)))
    return rows


# --------------------------------------------------------------- amplifying

def window_length(gamma, delta) -> int:
    """Number of natural Delta with gamma 2^-Delta >= delta (the L with Delta <= L-1 iff that holds)."""
    gamma, delta = Fraction(gamma), Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if delta > gamma:
        raise ValueError("window length is only defined for delta <= gamma")
    n = 0
    while gamma / 2 ** n >= delta:
        n += 1
    return n


def level_index(gammas: Sequence, delta) -> int:
    """Largest n with gammas[n] >= delta (requires gammas[0] >= delta)."""
    delta = Fraction(delta)
    idx = [n for n, g in enumerate(gammas) if Fraction(g) >= delta]
    if not idx:
        raise ValueError("delta exceeds gamma_0")
    return max(idx)


def check_gammas(gammas: Sequence) -> None:
    gs = [Fraction(g) for g in gammas]
    if not gs or gs[0] > 1 or any(g <= 0 for g in gs):
        raise ValueError("need 0 < gamma_n and gamma_0 <= 1")
    for n in range(len(gs) - 1):
        if not 2 * gs[n + 1] < gs[n]:
            raise ValueError(f"2 gamma_{n + 1} < gamma_{n} fails")


def seq_delta(a: tuple, b: tuple) -> float | int:
    """First spiral index where two periodic sequences (given by their period patterns) differ."""
    if a == b:
        return INFINITY
    p = len(a)
    for m in range(2 * p + 1):
        i = spiral_position(m) % p
        if a[i] != b[i]:
            return m
    return INFINITY


def shift_product(base: FiniteDynSystem, alphabet: int, gamma, period: int) -> FiniteDynSystem:
    """base x (period-p sequences over an alphabet) with the metric max(base, gamma 2^-Delta)."""
    gamma = Fraction(gamma)
    if alphabet < 1 or period < 1:
        raise ValueError("alphabet and period must be positive")
    words = list(product(range(alphabet), repeat=period))
    n = base.size
    if n * len(words) > PRODUCT_LIMIT:
        raise ValueError(f"product of {n * len(words)} points exceeds the enumeration limit {PRODUCT_LIMIT}")
    widx = {w: i for i, w in enumerate(words)}
    wshift = [widx[w[1:] + w[:1]] for w in words]
    seqd = [[Fraction(0) if a == b else gamma / 2 ** seq_delta(a, b) for b in words] for a in words]
    m = len(words)
    fmap = [base.fmap[x] * m + wshift[w] for x in range(n) for w in range(m)]
    rows = []
    for x in range(n):
        for w in range(m):
            bx = base.dist[x]
            sw = seqd[w]
            rows.append(tuple(max(bx[x2], sw[w2]) for x2 in range(n) for w2 in range(m)))
    labels = tuple((base.label(x), words[w]) for x in range(n) for w in range(m))
    return FiniteDynSystem(tuple(rows), tuple(fmap), labels, base.bijective)


@dataclass(frozen=True)
class AmplifyResult:
    alphabet: int
    gamma: Fraction
    delta: Fraction
    horizon: int
    window: int
    exponent: int
    base_sep: int
    base_span: int
    product_sep: int
    product_span: int
    product_size: int

    @property
    def factor(self) -> int:
        return self.alphabet ** self.exponent

    @property
    def ok(self) -> bool:
        return self.product_sep == self.factor * self.base_sep and self.product_span == self.factor * self.base_span


def amplify(base: FiniteDynSystem, alphabet: int, gamma, delta, horizon: int) -> AmplifyResult:
    """Exact sep/span of base x shift at (delta, horizon) against |A|^(horizon + window - 1) times the base.

    Two sequences stay delta-close for `horizon` steps exactly when they agree on a
    window of horizon + window - 1 consecutive places, so sequences of that period
    are one representative per window word."""
    gamma, delta = Fraction(gamma), Fraction(delta)
    L = window_length(gamma, delta)
    exponent = horizon + L - 1
    prod_sys = shift_product(base, alphabet, gamma, exponent)
    bb = bowen(base, horizon)
    pb = bowen(prod_sys, horizon)
    return AmplifyResult(alphabet, gamma, delta, horizon, L, exponent, _sep(bb, delta), _span(bb, delta),
                         _sep(pb, delta), _span(pb, delta), prod_sys.size)


# ---------------------------------------------------------------- combining

STAR = ("*",)


@dataclass(frozen=True)
class CombinedSpace:
    system: FiniteDynSystem
    block_of: tuple[int, ...]  # -1 for the fixed point
    gammas: tuple[Fraction, ...]

    def members(self, blocks: Sequence[int], with_star: bool) -> list[int]:
        want = set(blocks)
        return [i for i, b in enumerate(self.block_of) if b in want or (with_star and b == -1)]


def combine(blocks: Sequence[FiniteDynSystem], gammas: Sequence) -> CombinedSpace:
    """Disjoint union of blocks plus a fixed point x*, at distance 2 gamma_n from block n,
    with cross-block distance 2 gamma_min(n,m)."""
    if len(blocks) != len(gammas):
        raise ValueError("one gamma per block")
    check_gammas(gammas)
    gs = tuple(Fraction(g) for g in gammas)
    for n, b in enumerate(blocks):
        if diameter(b) > gs[n]:
            raise ValueError(f"block {n} has diameter above gamma_{n}")
    block_of = [-1]
    local = [0]
    for n, b in enumerate(blocks):
        block_of += [n] * b.size
        local += list(range(b.size))
    offsets = [1]
    for b in blocks:
        offsets.append(offsets[-1] + b.size)
    N = len(block_of)
    rows = [[Fraction(0)] * N for _ in range(N)]
    for i in range(N):
        for j in range(i + 1, N):
            bi, bj = block_of[i], block_of[j]
            if bi == -1:
                v = 2 * gs[bj]
            elif bi == bj:
                v = blocks[bi].dist[local[i]][local[j]]
            else:
                v = 2 * gs[min(bi, bj)]
            rows[i][j] = rows[j][i] = v
    fmap = [0] + [offsets[n] + blocks[n].fmap[local[i]] for i, n in enumerate(block_of) if n >= 0]
    labels = [STAR] + [(n, blocks[n].label(local[i])) for i, n in enumerate(block_of) if n >= 0]
    bij = all(b.bijective for b in blocks)
    sys = FiniteDynSystem(tuple(map(tuple, rows)), tuple(fmap), tuple(labels), bij)
    return CombinedSpace(sys, tuple(block_of), gs)


def _restricted(bm, idx: Sequence[int]):
    return [[bm.dist[i][j] for j in idx] for i in idx]


@dataclass(frozen=True)
class CombineRow:
    horizon: int
    delta: Fraction
    level: int | None  # n(delta), None when delta > gamma_0
    sep: int
    span: int
    xi_sep: int | None
    xi_span: int | None
    block_sep: tuple[int, ...]
    block_span: tuple[int, ...]

    @property
    def ok(self) -> bool:
        if self.level is None:
            return self.sep in (1, 2) and self.span in (1, 2)
        return (self.xi_sep in (1, 2) and self.xi_span in (1, 2)
                and self.sep == self.xi_sep + sum(self.block_sep)
                and self.span == self.xi_span + sum(self.block_span))


def combine_check(space: CombinedSpace, deltas: Sequence, horizons: Sequence[int]) -> list[CombineRow]:
    tables = bowen_table(space.system, horizons)
    nblocks = len(space.gammas)
    rows = []
    for h in sorted(set(horizons)):
        bm = tables[h]
        for dl in deltas:
            dl = Fraction(dl)
            s, sp = _sep(bm, dl), _span(bm, dl)
            if dl > space.gammas[0]:
                rows.append(CombineRow(h, dl, None, s, sp, None, None, (), ()))
                continue
            lvl = level_index(space.gammas, dl)
            tail = _restricted(bm, space.members(range(lvl + 1, nblocks), True))
            bsep, bspan = [], []
            for m in range(lvl + 1):
                part = _restricted(bm, space.members([m], False))
                bsep.append(_sep(part, dl))
                bspan.append(_span(part, dl))
            rows.append(CombineRow(h, dl, lvl, s, sp, _sep(tail, dl), _span(tail, dl), tuple(bsep), tuple(bspan)))
    return rows


def alphabet_growth(sizes: Sequence[int], exp_entropy) -> list[bool]:
    """|A_{n+1}| > 2 |A_n| e^h for a supplied stand-in value of e^h (conditional on that value)."""
    e = Fraction(exp_entropy)
    return [sizes[n + 1] > 2 * sizes[n] * e for n in range(len(sizes) - 1)]


# -------------------------------------------------------------- duplication

class DominationError(ValueError):
    def __init__(self, pair, lhs, rhs):
        super().__init__(f"D{pair} = {lhs} exceeds d(f x, f x') = {rhs}")
        self.pair = pair


@dataclass(frozen=True)
class DuplicationSpace:
    system: FiniteDynSystem
    x_size: int
    f: tuple[int, ...]
    alpha: Fraction
    x_sys: FiniteDynSystem
    y_sys: FiniteDynSystem


def duplicate(x_sys: FiniteDynSystem, y_sys: FiniteDynSystem, f: Sequence[int], alpha) -> DuplicationSpace:
    """Disjoint union X u Y with D on X, d on Y and max(alpha, D(x, f^-1 y)) across."""
    alpha = Fraction(alpha)
    nx, ny = x_sys.size, y_sys.size
    f = tuple(f)
    if len(f) != nx or sorted(f) != list(range(ny)):
        raise ValueError("f must be a bijection from X onto Y")
    for i in range(nx):
        if f[x_sys.fmap[i]] != y_sys.fmap[f[i]]:
            raise ValueError(f"f does not conjugate the maps at point {i}")
    for i in range(nx):
        for j in range(i + 1, nx):
            if x_sys.dist[i][j] > y_sys.dist[f[i]][f[j]]:
                raise DominationError((i, j), x_sys.dist[i][j], y_sys.dist[f[i]][f[j]])
    diam = diameter(y_sys)
    if not diam / 2 < alpha < diam:
        raise ValueError("alpha must lie strictly between diam(Y)/2 and diam(Y)")
    finv = [0] * ny
    for i, j in enumerate(f):
        finv[j] = i
    N = nx + ny
    rows = [[Fraction(0)] * N for _ in range(N)]
    for i in range(N):
        for j in range(i + 1, N):
            if j < nx:
                v = x_sys.dist[i][j]
            elif i >= nx:
                v = y_sys.dist[i - nx][j - nx]
            else:
                v = max(alpha, x_sys.dist[i][finv[j - nx]])
            rows[i][j] = rows[j][i] = v
    fmap = list(x_sys.fmap) + [nx + j for j in y_sys.fmap]
    labels = [("X", x_sys.label(i)) for i in range(nx)] + [("Y", y_sys.label(j)) for j in range(ny)]
    sys = FiniteDynSystem(tuple(map(tuple, rows)), tuple(fmap), tuple(labels),
                          x_sys.bijective and y_sys.bijective)
    return DuplicationSpace(sys, nx, f, alpha, x_sys, y_sys)


@dataclass(frozen=True)
class DuplicationRow:
    horizon: int
    delta: Fraction
    sep_union: int
    sep_y: int
    span_union: int
    span_x: int

    @property
    def sep_ok(self) -> bool:
        return self.sep_y <= self.sep_union <= 2 * self.sep_y

    def span_ok(self, alpha: Fraction) -> bool:
        return self.delta <= alpha or self.span_union == self.span_x

    def ok(self, alpha: Fraction) -> bool:
        return self.sep_ok and self.span_ok(alpha)


def sample_deltas(bm_list, extra=()) -> list[Fraction]:
    """Every distinct positive distance value, plus one value above the largest."""
    vals = set(Fraction(v) for v in extra)
    for bm in bm_list:
        for row in bm.dist:
            vals.update(v for v in row if v > 0)
    top = max(vals, default=Fraction(1))
    return sorted(vals | {top + 1})


def duplication_check(space: DuplicationSpace, horizons: Sequence[int], deltas=None) -> list[DuplicationRow]:
    ut = bowen_table(space.system, horizons)
    xt = bowen_table(space.x_sys, horizons)
    yt = bowen_table(space.y_sys, horizons)
    rows = []
    for h in sorted(set(horizons)):
        ds = deltas if deltas is not None else sample_deltas([ut[h]], [space.alpha + Fraction(1, 10 ** 6)])
        for dl in ds:
            dl = Fraction(dl)
            rows.append(DuplicationRow(h, dl, _sep(ut[h], dl), _sep(yt[h], dl), _span(ut[h], dl), _span(xt[h], dl)))
    return rows


@dataclass(frozen=True)
class DuplicationReport:
    axioms_ok: bool
    diameter_ok: bool
    rows: list[DuplicationRow]
    alpha: Fraction

    @property
    def ok(self) -> bool:
        return self.axioms_ok and self.diameter_ok and all(r.ok(self.alpha) for r in self.rows)


def duplication_report(space: DuplicationSpace, horizons: Sequence[int], deltas=None) -> DuplicationReport:
    ax = verify_metric_axioms(space.system).ok
    diam_ok = diameter(space.system) == diameter(space.y_sys)
    return DuplicationReport(ax, diam_ok, duplication_check(space, horizons, deltas), space.alpha)


def truncated_copy(y_sys: FiniteDynSystem, cap) -> FiniteDynSystem:
    """min(d, cap): a metric dominated by d on the same dynamics."""
    cap = Fraction(cap)
    rows = tuple(tuple(min(v, cap) for v in row) for row in y_sys.dist)
    return FiniteDynSystem(rows, y_sys.fmap, y_sys.labels, y_sys.bijective)


def pulled_back(y_sys: FiniteDynSystem, f: Sequence[int], metric_rows) -> FiniteDynSystem:
    """The system on X = f^-1(Y) with map f^-1 G f and metric metric_rows[f x][f x']."""
    n = len(f)
    finv = [0] * n
    for i, j in enumerate(f):
        finv[j] = i
    fmap = [finv[y_sys.fmap[f[i]]] for i in range(n)]
    rows = [[Fraction(metric_rows[f[i]][f[j]]) for j in range(n)] for i in range(n)]
    return make_system(rows, fmap, bijective=y_sys.bijective)


# ------------------------------------------------------- {2,3} conjugate side

@dataclass(frozen=True)
class ConjugateInstance:
    x_sys: FiniteDynSystem
    y_sys: FiniteDynSystem
    f: tuple[int, ...]
    equivariant: bool
    dominated: bool
    x_spec: ECMetricSpec
    y_spec: ECMetricSpec

    @property
    def ok(self) -> bool:
        return self.equivariant and self.dominated


def conjugate_to_23(x_spec: ECMetricSpec, y_spec: ECMetricSpec, x_points: Sequence[ECnPoint]) -> ConjugateInstance:
    """Map each single-level EC point (v, n, k) to (v + 2, n, k) and check f F = G f and D <= d."""
    pts = list(x_points)
    if len(set(pts)) != len(pts):
        raise ValueError("duplicate points")
    ypts = [ECnPoint(p.y.with_offset(2), p.n, p.k) for p in pts]

    def xstep(p):
        return ecn_step(x_spec, p)

    def ystep(p):
        return ecn_step(y_spec, p)

    x_sys = system_from_function(pts, xstep, lambda a, b: ecn_distance(a, b, x_spec), bijective=True)
    y_sys = system_from_function(ypts, ystep, lambda a, b: ecn_distance(a, b, y_spec), bijective=True)
    f = tuple(range(len(pts)))
    equi = all(ystep(ypts[i]) == ECnPoint(xstep(p).y.with_offset(2), p.n, xstep(p).k) for i, p in enumerate(pts))
    dom = all(x_sys.dist[i][j] <= y_sys.dist[i][j] for i in range(len(pts)) for j in range(len(pts)))
    return ConjugateInstance(x_sys, y_sys, f, equi, dom, x_spec, y_spec)


def orbit_points(seqs: Sequence[PeriodicSeq], tplus: int, level: int = 0) -> list[ECnPoint]:
    """Orbits of (v, level, 0) under (v, k) -> (shift v, k + 1 mod T+), closed and duplicate-free."""
    out: list[ECnPoint] = []
    seen = set()
    for v in seqs:
        p = ECnPoint(v, level, 0)
        while p not in seen:
            seen.add(p)
            out.append(p)
            p = ECnPoint(p.y.shift(1), level, (p.k + 1) % tplus)
    return out


def ec23_instance(seed: int = 0) -> tuple[ConjugateInstance, Fraction]:
    """Depth-0 EC truncation with three colors and T+ = 3 on the orbits of 0^inf, 1^inf, (001)^inf."""
    sched = surrogate_schedule((3,), (1,))
    x_spec = ec_spec(sched, 0, seed=seed)
    y_spec = constant_spec(sched, 0)
    pts = orbit_points([PeriodicSeq((0,)), PeriodicSeq((1,)), PeriodicSeq((0, 0, 1))], sched.Tplus(0))
    inst = conjugate_to_23(x_spec, y_spec, pts)
    alpha = Fraction(3, 4) * diameter(inst.y_sys)
    return inst, alpha


# ----------------------------------------------------------------- subshifts

@dataclass(frozen=True)
class Subshift:
    """One-sided subshift of finite type: alphabet 0..k-1 and a list of forbidden words."""
    alphabet: int
    forbidden: tuple[tuple[int, ...], ...] = ()

    def allowed(self, w: Sequence[int]) -> bool:
        w = tuple(w)
        for bad in self.forbidden:
            m = len(bad)
            for i in range(len(w) - m + 1):
                if w[i:i + m] == bad:
                    return False
        return True

    @property
    def memory(self) -> int:
        return max((len(b) for b in self.forbidden), default=1)

    def words(self, length: int) -> list[tuple[int, ...]]:
        """Allowed words of the given length that extend to an infinite allowed sequence."""
        out = [()]
        for _ in range(length):
            out = [w + (a,) for w in out for a in range(self.alphabet) if self.allowed(w + (a,))]
        return [w for w in out if self._extends(w)]

    def _extends(self, w: tuple) -> bool:
        # a word extends forever iff its last (memory-1) symbols reach a cycle of allowed states
        m = max(self.memory - 1, 1)
        if len(w) < m:
            return any(self._extends(w + (a,)) for a in range(self.alphabet) if self.allowed(w + (a,)))
        return w[len(w) - m:] in self._live_states()

    def _live_states(self) -> frozenset:
        m = max(self.memory - 1, 1)
        live = {s for s in product(range(self.alphabet), repeat=m) if self.allowed(s)}
        changed = True
        while changed:
            changed = False
            for s in list(live):
                if not any(self.allowed(s + (a,)) and s[1:] + (a,) in live for a in range(self.alphabet)):
                    live.discard(s)
                    changed = True
        return frozenset(live)


FULL_SHIFT = Subshift(2)
GOLDEN_MEAN = Subshift(2, ((1, 1),))


def cylinder_depth(k: int, horizon: int, eps) -> int:
    """Prefix length L with D_T(x, y) < eps iff x and y agree on their first L symbols."""
    eps = Fraction(eps)
    r = 0
    while Fraction(1, k ** r) >= eps:
        r += 1
    return horizon - 1 + r


def subshift_distance(x: Sequence[int], y: Sequence[int], k: int, horizon: int) -> Fraction:
    """max over t < T of k^-Delta(shift^t x, shift^t y) on finite prefixes; agreement to the end counts as 0."""
    best = Fraction(0)
    n = min(len(x), len(y))
    for t in range(horizon):
        for i in range(t, n):
            if x[i] != y[i]:
                best = max(best, Fraction(1, k ** (i - t)))
                break
    return best


@dataclass(frozen=True)
class SubshiftResult:
    depth: int
    cylinders: int
    cov: int
    sep: int
    span: int

    @property
    def ok(self) -> bool:
        return self.cov == self.sep == self.span == self.cylinders


def subshift_equality(shift: Subshift, k: int, horizon: int, eps, sample=None) -> SubshiftResult:
    """cov = sep = span at (eps, D_T) on prefix representatives of the subshift's cylinders."""
    if k < 2:
        raise ValueError("the standard metric needs k >= 2")
    L = cylinder_depth(k, horizon, eps)
    cyl = shift.words(L)
    if sample is None:
        pts = shift.words(L + 1) if L + 1 > 0 else [()]
        pts = pts or cyl
    else:
        pts = [tuple(w) for w in sample]
        if any(len(w) < L for w in pts):
            raise ValueError(f"sample words shorter than the required depth {L}")
        missing = set(cyl) - {w[:L] for w in pts}
        if missing:
            raise ValueError(f"sample misses {len(missing)} cylinders of length {L}, e.g. {sorted(missing)[0]}")
    n = len(pts)
    rows = [[subshift_distance(pts[i], pts[j], k, horizon) if i != j else Fraction(0) for j in range(n)]
            for i in range(n)]
    g = threshold_graph(rows, eps)
    return SubshiftResult(L, len(cyl), cov_number(g)[0], sep_number(g)[0], span_number(g)[0])


# -------------------------------------------------------- sep sandwich on Y

def choose_MN(eps_levels: Sequence[Fraction], delta) -> tuple[int, int]:
    """Least M, then least N, with eps/3^(M+1) + eps_N/2 < delta <= eps/3^M."""
    delta = Fraction(delta)
    eps = sum(eps_levels, Fraction(0))
    if not 0 < delta <= eps:
        raise ValueError("delta must lie in (0, eps]")
    M = 0
    while eps / 3 ** (M + 1) >= delta:
        M += 1
    for N, eN in enumerate(eps_levels):
        if eps / 3 ** (M + 1) + eN / 2 < delta:
            return M, N
    raise ValueError(f"no level N satisfies the choice inequality for delta = {delta}")


@dataclass(frozen=True)
class SandwichResult:
    M: int
    N: int
    lower: int
    middle: int
    factor: int

    @property
    def ok(self) -> bool:
        return self.lower <= self.middle <= self.factor * self.lower


def y_truncation(schedule: ParamSchedule, seqs: Sequence[PeriodicSeq], depth: int, phases: str = "W"):
    """Product points (u, (k_0..k_depth)) with the constant-rule metric summed over levels.

    phases="W" keeps k_n = k_depth mod T+(n); "all" keeps every phase vector."""
    spec = constant_spec(schedule, depth)
    tps = [spec.Tplus(n) for n in range(depth + 1)]
    us = []
    for v in seqs:
        u = v.with_offset(2)
        for t in range(u.period):
            s = u.shift(t)
            if s not in us:
                us.append(s)
    if phases == "W":
        kvecs = [tuple(k % tps[n] for n in range(depth + 1)) for k in range(tps[-1])]
    elif phases == "all":
        kvecs = list(product(*[range(t) for t in tps]))
    else:
        raise ValueError("phases is 'W' or 'all'")
    pts = [(u, ks) for u in us for ks in kvecs]

    def step(p):
        u, ks = p
        return (u.shift(1), tuple((k + 1) % tps[n] for n, k in enumerate(ks)))

    def dist(a, b):
        return sum((ecn_distance(ECnPoint(a[0], n, a[1][n]), ECnPoint(b[0], n, b[1][n]), spec)
                    for n in range(depth + 1)), Fraction(0))

    return spec, us, system_from_function(pts, step, dist, bijective=True)


def sandwich_sepY(schedule: ParamSchedule, seqs: Sequence[PeriodicSeq], depth: int, delta, horizon: int,
                  phases: str = "W") -> SandwichResult:
    """sep(Y*, eps_N/3^M, d^N*_T) <= sep(Y, delta, d_T) <= prod T+(n) times the former."""
    spec, us, ysys = y_truncation(schedule, seqs, depth, phases)
    eps_levels = [spec.eps(n) for n in range(depth + 1)]
    M, N = choose_MN(eps_levels, delta)
    eN = spec.eps(N)
    star = system_from_function(us, lambda u: u.shift(1),
                                lambda a, b: Fraction(0) if a == b else eN / Fraction(3) ** first_difference(a, b),
                                bijective=True)
    lower = _sep(bowen(star, horizon), eN / 3 ** M)
    middle = _sep(bowen(ysys, horizon), Fraction(delta))
    factor = prod(spec.Tplus(n) for n in range(N + 1))
    return SandwichResult(M, N, lower, middle, factor)

