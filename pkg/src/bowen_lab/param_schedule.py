"""Level parameters C(n), K(n), T(n), T+(n), eps_n, delta_n and exact constraint checking."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import comb, prod

from .exact_bounds import (PROVED, REFUTED, UNDECIDED, exact_verdict, ln2_bounds,
                           log2_bounds, pow2_frac_ge, pow2_frac_gt, refine)

FAITHFUL = "faithful"
SURROGATE = "surrogate"

PC_RATIO = Fraction(95, 100)
PK2_RATE = Fraction(5, 100)
PK3_RATE = Fraction(7, 10)
PK5_RATE = Fraction(1, 100)
SIZE_RATE = Fraction(9, 10)
ED_RATIO = Fraction(2, 5)
UPPER_RATE = Fraction(7, 4)
FINAL_UPPER = Fraction(88, 100)

# exact big-integer paths are used while the numbers stay below this many bits
EXACT_BITS = 200_000


@dataclass(frozen=True)
class Level:
    C: int
    K: int
    T: int
    Tplus: int
    eps: Fraction | None = None
    delta: Fraction | None = None


@dataclass(frozen=True)
class ParamSchedule:
    levels: tuple[Level, ...]
    lam: int = 1
    profile: str = SURROGATE

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def C(self, n: int) -> int:
        return self.levels[n].C

    def K(self, n: int) -> int:
        return self.levels[n].K

    def T(self, n: int) -> int:
        return self.levels[n].T

    def Tplus(self, n: int) -> int:
        return 1 if n < 0 else self.levels[n].Tplus

    def eps(self, n: int) -> Fraction:
        e = self.levels[n].eps
        if e is None:
            raise ValueError(f"eps_{n} is not set")
        return e

    def delta(self, n: int) -> Fraction:
        d = self.levels[n].delta
        if d is None:
            raise ValueError(f"delta_{n} is not set")
        return d

    @property
    def has_eps(self) -> bool:
        return all(lv.eps is not None and lv.delta is not None for lv in self.levels)

    def eps_total(self, depth: int | None = None) -> Fraction:
        depth = self.depth if depth is None else depth
        return sum((self.eps(n) for n in range(depth + 1)), Fraction(0))

    def truncated(self, depth: int) -> "ParamSchedule":
        return replace(self, levels=self.levels[:depth + 1])


def make_schedule(Cs, Ks, eps=None, delta=None, lam: int = 1, profile: str = SURROGATE) -> ParamSchedule:
    if len(Cs) != len(Ks) or not Cs:
        raise ValueError("need matching nonempty C and K lists")
    levels = []
    prev = 1
    for n, (c, k) in enumerate(zip(Cs, Ks)):
        t = k * prev
        tp = c * t
        e = Fraction(eps[n]) if eps is not None else None
        d = Fraction(delta[n]) if delta is not None else None
        levels.append(Level(int(c), int(k), t, tp, e, d))
        prev = tp
    return ParamSchedule(tuple(levels), lam, profile)


@dataclass(frozen=True)
class Check:
    name: str
    verdict: str
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.verdict == PROVED


@dataclass
class ConstraintReport:
    checks: list[Check] = field(default_factory=list)
    waived: bool = False

    def add(self, name: str, verdict: str, detail: str = "") -> None:
        self.checks.append(Check(name, verdict, detail))

    def verdict(self, name: str) -> str:
        for c in self.checks:
            if c.name == name:
                return c.verdict
        raise KeyError(name)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.verdict != PROVED]

    @property
    def all_proved(self) -> bool:
        return not self.failures()

    def first_failure(self) -> str | None:
        f = self.failures()
        return f[0].name if f else None

    @property
    def structural_ok(self) -> bool:
        return all(c.ok for c in self.checks if c.name.startswith("structure"))

    @property
    def accepted(self) -> bool:
        """Faithful schedules need every check PROVED; surrogates only need structure and eps/delta."""
        if not self.waived:
            return self.all_proved
        return all(c.ok for c in self.checks if not c.name.startswith(("PC", "PK")))


# ------------------------------------------------------------ (PKn2) exponents

def pk2_exponents_printed(s: ParamSchedule, n: int) -> list[int]:
    """Exponents e_m of C(m)^2/2 on the right of (PKn2) as printed: e_n = 1, e_m = prod_{i=m+1..n} (C(i)-2)K(i)."""
    return [prod((s.C(i) - 2) * s.K(i) for i in range(m + 1, n + 1)) for m in range(n + 1)]


def pk2_exponents_recursive(s: ParamSchedule, n: int) -> list[int]:
    """Same exponents from RHS_n = (C(n)^2/2) * RHS_{n-1}^{(C(n)-2)K(n)}."""
    e = [1]
    for m in range(1, n + 1):
        f = (s.C(m) - 2) * s.K(m)
        e = [x * f for x in e] + [1]
    return e


def _log2_sum(coeffs: list[int], values: list[Fraction], prec: int) -> tuple[Fraction, Fraction]:
    lo = Fraction(0)
    hi = Fraction(0)
    for c, v in zip(coeffs, values):
        a, b = log2_bounds(v, prec)
        lo += c * a
        hi += c * b
    return lo, hi


def _pow2_floor_ceil(exponent: Fraction) -> tuple[int, int]:
    """floor and ceil of 2^exponent for a nonnegative rational exponent of moderate size."""
    u, v = exponent.numerator, exponent.denominator
    target = 1 << u
    # integer v-th root of 2^u
    lo = 1 << (u // v)
    hi = 1 << (u // v + 1)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid ** v <= target:
            lo = mid
        else:
            hi = mid
    if lo ** v == target:
        return lo, lo
    return lo, lo + 1


def _factorial_exceeds(x: int, bound: Fraction) -> bool:
    acc = 1
    for i in range(2, x + 1):
        acc *= i
        if acc > bound:
            return True
    return acc > bound


def check_pk3(C: int, T: int) -> tuple[str, str]:
    """(2^{0.7T})! > C^2/2, with the factorial read as Gamma(x+1) when 2^{0.7T} is not an integer."""
    a = PK3_RATE * T
    rhs = Fraction(C * C, 2)
    if rhs < 1:
        return PROVED, "right side below 1"
    if a <= 64:
        xf, xc = _pow2_floor_ceil(a)
        if xf >= 1:
            # Gamma is increasing on [2, oo), so floor and ceiling sandwich the value
            if _factorial_exceeds(xf, rhs):
                return PROVED, f"floor(2^{a})! > {rhs}"
            if not _factorial_exceeds(xc, rhs):
                return REFUTED, f"ceil(2^{a})! <= {rhs}"
        return UNDECIDED, "factorial sandwich inconclusive"

    # ln x! >= x ln x - x = x (a ln2 - 1); compare logs base 2 of both sides
    def build(prec):
        l2lo, l2hi = ln2_bounds()
        inner_lo = a * l2lo - 1
        if inner_lo <= 0:
            return (Fraction(-10 ** 9), Fraction(-10 ** 9)), (Fraction(0), Fraction(0))
        lhs_lo = a + log2_bounds(inner_lo, prec)[0]
        rlo, rhi = log2_bounds(rhs, prec)
        ln_rhs_hi = rhi * l2hi
        return (lhs_lo, lhs_lo), (log2_bounds(ln_rhs_hi, prec)[1],) * 2

    verdict = refine(build)
    if verdict == REFUTED:
        # the Stirling lower bound alone cannot refute
        verdict = UNDECIDED
    return verdict, "Stirling lower bound ln x! >= x ln x - x"


def check_pk4(C: int, T: int) -> tuple[str, str]:
    """log2(sqrt(3/2)) * (2^{0.7T} - 1) > C*T."""
    a = PK3_RATE * T
    rhs = Fraction(C * T)
    if a <= 4096:
        xf, xc = _pow2_floor_ceil(a)

        def build(prec):
            lo, hi = log2_bounds(Fraction(3, 2), prec)
            return (lo / 2 * (xf - 1), hi / 2 * (xc - 1)), (rhs, rhs)

        return refine(build), "exact powers of two"

    def build(prec):
        lo, _ = log2_bounds(Fraction(3, 2), prec)
        # 2^a - 1 >= 2^(a-1) for a >= 1
        lhs_lo = log2_bounds(lo / 2, prec)[0] + a - 1
        return (lhs_lo, lhs_lo), log2_bounds(rhs, prec)

    verdict = refine(build)
    if verdict == REFUTED:
        verdict = UNDECIDED
    return verdict, "log-space lower bound"


def check_pk5(C: int, T: int) -> tuple[str, str]:
    """2^{0.01T} >= C."""
    a = PK5_RATE * T
    if a.numerator <= EXACT_BITS:
        return exact_verdict(pow2_frac_ge(a, Fraction(C))), "exact"
    return refine(lambda prec: ((a, a), log2_bounds(Fraction(C), prec)), strict=False), "log-space"


def check_pk2(s: ParamSchedule, n: int) -> tuple[str, str]:
    e = pk2_exponents_printed(s, n)
    vals = [Fraction(s.C(m) ** 2, 2) for m in range(n + 1)]
    lhs = PK2_RATE * s.Tplus(n)
    approx_bits = sum(x * 2 * s.C(m).bit_length() for m, x in enumerate(e))
    if lhs.numerator <= EXACT_BITS and approx_bits <= EXACT_BITS:
        rhs = prod((v ** x for v, x in zip(vals, e)), start=Fraction(1))
        return exact_verdict(pow2_frac_gt(lhs, rhs)), "exact"
    return refine(lambda prec: ((lhs, lhs), _log2_sum(e, vals, prec))), "log-space"


def check_constraints(s: ParamSchedule) -> ConstraintReport:
    rep = ConstraintReport(waived=(s.profile == SURROGATE))
    prev = 1
    for n, lv in enumerate(s.levels):
        ok = lv.T == lv.K * prev and lv.Tplus == lv.C * lv.T and lv.C >= 1 and lv.K >= 1
        rep.add(f"structure{n}", exact_verdict(ok),
                f"T={lv.T} K*T+(n-1)={lv.K * prev} T+={lv.Tplus} C*T={lv.C * lv.T}")
        prev = lv.Tplus
    ok21 = all(s.Tplus(n) == prod(s.C(i) * s.K(i) for i in range(n + 1)) for n in range(len(s.levels)))
    rep.add("structure-product", exact_verdict(ok21), "T+(n) = prod C(i)K(i)")
    if not rep.structural_ok:
        return rep

    for n, lv in enumerate(s.levels):
        cs = [s.C(i) for i in range(n + 1)]
        if min(cs) <= 2:
            rep.add(f"PC{n}", REFUTED, "some C(i) <= 2")
        else:
            lhs = prod(c - 2 for c in cs)
            rep.add(f"PC{n}", exact_verdict(lhs > PC_RATIO * prod(cs)),
                    f"prod(C-2)={lhs} vs 0.95*prod C")
        rep.add(f"PK{n}1", exact_verdict(lv.K % 100 == 0), f"K={lv.K}")
        v, why = check_pk2(s, n)
        if pk2_exponents_printed(s, n) != pk2_exponents_recursive(s, n):
            v, why = REFUTED, "printed and recursive exponent readings disagree"
        rep.add(f"PK{n}2", v, why)
        rep.add(f"PK{n}3", *check_pk3(lv.C, lv.T))
        rep.add(f"PK{n}4", *check_pk4(lv.C, lv.T))
        rep.add(f"PK{n}5", *check_pk5(lv.C, lv.T))

    if s.has_eps:
        _check_eps(s, rep)
    return rep


def _check_eps(s: ParamSchedule, rep: ConstraintReport) -> None:
    N = s.depth
    eps = [s.eps(n) for n in range(N + 1)]
    dl = [s.delta(n) for n in range(N + 1)]
    dec = all(eps[i] > eps[i + 1] for i in range(N)) and eps[-1] > 0
    rep.add("Peps", exact_verdict(dec), f"eps total {sum(eps)}")
    for n in range(N + 1):
        rep.add(f"Pdelta1.{n}", exact_verdict(0 < dl[n] < eps[n] < 2 * dl[n]))
        tail = sum(eps[n + 1:], Fraction(0))
        rep.add(f"Pdelta2.{n}", exact_verdict(tail < Fraction(1, 2) * (eps[n] - dl[n])))
        bound = eps[n] / Fraction(3) ** (2 * s.lam * s.Tplus(n))
        rep.add(f"Pdelta3.{n}", exact_verdict(eps[n] - dl[n] < bound))
    for m in range(N + 1):
        for n in range(m + 1, N + 1):
            part = sum(eps[m + 1:n + 1], Fraction(0))
            rep.add(f"ED{m}.{n}", exact_verdict(part < ED_RATIO * (eps[m] - dl[m])))


# ------------------------------------------------------------ generation

def _pc_holds(cs: list[int]) -> bool:
    return min(cs) > 2 and prod(c - 2 for c in cs) > PC_RATIO * prod(cs)


def generate_faithful(n_levels: int, max_doublings: int = 64, with_eps: bool = True) -> ParamSchedule:
    """Doubling search for C(n) against (pcn), then K(n) against (PKn1)-(PKn5)."""
    if n_levels < 1:
        raise ValueError("need at least one level")
    Cs: list[int] = []
    Ks: list[int] = []
    for n in range(n_levels):
        c = 3
        for _ in range(max_doublings):
            if _pc_holds(Cs + [c]):
                break
            c *= 2
        else:
            raise RuntimeError(f"no C({n}) found within {max_doublings} doublings")
        k = 100
        for _ in range(max_doublings):
            trial = make_schedule(Cs + [c], Ks + [k], profile="faithful")
            v = [check_pk2(trial, n)[0], check_pk3(c, trial.T(n))[0],
                 check_pk4(c, trial.T(n))[0], check_pk5(c, trial.T(n))[0]]
            if all(x == PROVED for x in v):
                break
            k *= 2
        else:
            raise RuntimeError(f"no K({n}) found within {max_doublings} doublings")
        Cs.append(c)
        Ks.append(k)
    s = make_schedule(Cs, Ks, profile=FAITHFUL)
    if with_eps and eps_materializable(s):
        s = generate_eps_delta(s)
    return s


EPS_BIT_BUDGET = 2_000_000


def eps_materializable(s: ParamSchedule) -> bool:
    """eps_n carries a factor 3^{-2 lam T+(m)} per earlier level; only small enough schedules are stored exactly."""
    return 2 * s.lam * sum(lv.Tplus for lv in s.levels) * 2 <= EPS_BIT_BUDGET


def generate_eps_delta(s: ParamSchedule, eps0=Fraction(1)) -> ParamSchedule:
    """eps_0 given; gap_n = eps_n 3^{-2 lam T+(n)} / 2, delta_n = eps_n - gap_n, eps_{n+1} = gap_n / 4."""
    if not eps_materializable(s):
        raise ValueError("schedule too large for exact eps/delta values")
    eps = Fraction(eps0)
    levels = []
    for lv in s.levels:
        gap = eps / Fraction(3) ** (2 * s.lam * lv.Tplus) / 2
        levels.append(replace(lv, eps=eps, delta=eps - gap))
        eps = gap / 4
    return replace(s, levels=tuple(levels))


def surrogate_schedule(Cs=(3,), Ks=(2,), eps=None, delta=None, lam: int = 1) -> ParamSchedule:
    """Desk-scale schedule; (PC)/(PK) checks are reported but waived."""
    s = make_schedule(list(Cs), list(Ks), eps, delta, lam, SURROGATE)
    if eps is None:
        s = generate_eps_delta(s)
    return s


def simple_eps_schedule(Cs, Ks, eps0=Fraction(1), ratio=Fraction(1, 8), gap=Fraction(1, 4)) -> ParamSchedule:
    """Surrogate with readable rationals: eps_{n+1} = ratio*eps_n, delta_n = (1-gap)*eps_n.

    (Pdelta3) fails for such schedules; they are meant for metric experiments whose
    decisions only involve the clause structure.
    """
    eps = []
    e = Fraction(eps0)
    for _ in Cs:
        eps.append(e)
        e *= ratio
    delta = [x * (1 - gap) for x in eps]
    return make_schedule(list(Cs), list(Ks), eps, delta, 1, SURROGATE)


# ------------------------------------------------------------ certificates

@dataclass(frozen=True)
class SizeCertificate:
    level: int
    pc: str
    pk2: str
    conclusion: str
    margin_lo: Fraction

    @property
    def consistent(self) -> bool:
        return not (self.pc == PROVED and self.pk2 == PROVED and self.conclusion != PROVED)


def size_certificate(s: ParamSchedule, n: int) -> SizeCertificate:
    """Log-space check of 2^{prod(C-2) prod K} / [binom(C(n),2) prod binom(C(m),2)^{e_m}] >= 2^{0.9 T+(n)}."""
    cs = [s.C(i) for i in range(n + 1)]
    ks = [s.K(i) for i in range(n + 1)]
    top = prod(c - 2 for c in cs) * prod(ks)
    lhs = top - SIZE_RATE * s.Tplus(n)
    e = pk2_exponents_printed(s, n)
    binoms = [Fraction(comb(c, 2)) for c in cs]

    def build(prec):
        lo, hi = _log2_sum(e, binoms, prec)
        return (lhs, lhs), (lo, hi)

    verdict = refine(build, strict=False)
    rep = check_constraints(s.truncated(n))
    return SizeCertificate(n, rep.verdict(f"PC{n}"), rep.verdict(f"PK{n}2"), verdict,
                           lhs - build(2048)[1][1])


def level0_size_bound(C: int, K: int) -> Fraction:
    """Greedy lower bound 2^{(C-2)K} / binom(C,2) for the level-0 family."""
    return Fraction(2 ** ((C - 2) * K), comb(C, 2))


@dataclass(frozen=True)
class RateRow:
    level: int
    lower_rate_log2: Fraction
    upper_rate_log2_hi: Fraction
    upper_via_pk5_hi: Fraction
    pk5: str
    step_ok: bool

    @property
    def gap_at_level(self) -> bool:
        return self.upper_rate_log2_hi < self.lower_rate_log2


def rate_rows(s: ParamSchedule, prec: int = 512) -> list[RateRow]:
    """Per level, in units of ln 2: the lower rate 0.9 and the upper rate
    log2(T+(n) 2^{1.75 T(n)}) / (2 T(n)) together with its (PKn5) relaxation
    0.88 + log2(T(n)) / (2 T(n))."""
    rows = []
    for n, lv in enumerate(s.levels):
        T = lv.T
        _, ct_hi = log2_bounds(Fraction(lv.C * T), prec)
        upper_hi = (ct_hi + UPPER_RATE * T) / (2 * T)
        _, t_hi = log2_bounds(Fraction(T), prec)
        relaxed_hi = FINAL_UPPER + t_hi / (2 * T)
        pk5 = check_pk5(lv.C, T)[0]
        # the relaxation step: log2(C T) <= 0.01 T + log2 T whenever (PKn5) holds
        step = pk5 == PROVED and (ct_hi + UPPER_RATE * T) / (2 * T) <= relaxed_hi + Fraction(2, prec)
        rows.append(RateRow(n, SIZE_RATE, upper_hi, relaxed_hi, pk5, step))
    return rows


def final_gap() -> tuple[Fraction, Fraction, bool]:
    """0.88 ln 2 < 0.9 ln 2, compared as exact rationals in units of ln 2."""
    return FINAL_UPPER, SIZE_RATE, FINAL_UPPER < SIZE_RATE


# ------------------------------------------------------------ file format

def dumps_schedule(s: ParamSchedule) -> str:
    lines = [f"profile={s.profile}", f"lambda={s.lam}", f"levels={len(s.levels)}"]
    for n, lv in enumerate(s.levels):
        lines += [f"level.{n}.C={lv.C}", f"level.{n}.K={lv.K}",
                  f"level.{n}.T={lv.T}", f"level.{n}.Tplus={lv.Tplus}"]
    for n, lv in enumerate(s.levels):
        if lv.eps is not None:
            lines.append(f"eps.{n}={lv.eps.numerator}/{lv.eps.denominator}")
        if lv.delta is not None:
            lines.append(f"delta.{n}={lv.delta.numerator}/{lv.delta.denominator}")
    return "\n".join(lines) + "\n"


def loads_schedule(text: str) -> ParamSchedule:
    kv: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value")
        k, v = line.split("=", 1)
        kv[k.strip()] = v.strip()
    idx = sorted({int(k.split(".")[1]) for k in kv if k.startswith("level.")})
    if not idx or idx != list(range(len(idx))):
        raise ValueError("levels must be numbered 0..N without gaps")
    levels = []
    prev = 1
    for n in idx:
        try:
            C = int(kv[f"level.{n}.C"])
            K = int(kv[f"level.{n}.K"])
        except KeyError as exc:
            raise ValueError(f"missing {exc.args[0]}") from None
        T = int(kv.get(f"level.{n}.T", K * prev))
        Tp = int(kv.get(f"level.{n}.Tplus", C * T))
        e = Fraction(kv[f"eps.{n}"]) if f"eps.{n}" in kv else None
        d = Fraction(kv[f"delta.{n}"]) if f"delta.{n}" in kv else None
        levels.append(Level(C, K, T, Tp, e, d))
        prev = Tp
    profile = kv.get("profile", SURROGATE)
    if profile not in (SURROGATE, FAITHFUL):
        raise ValueError(f"unknown profile {profile!r}")
    return ParamSchedule(tuple(levels), int(kv.get("lambda", 1)), profile)


def load_schedule(path) -> ParamSchedule:
    with open(path) as fh:
        return loads_schedule(fh.read())


def save_schedule(s: ParamSchedule, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_schedule(s))
