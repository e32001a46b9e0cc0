"""Rational enclosures of logarithms, and three-valued comparison verdicts."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

PROVED = "PROVED"
REFUTED = "REFUTED"
UNDECIDED = "UNDECIDED-BY-BOUNDS"

PRECISIONS = (32, 128, 512, 2048)


@lru_cache(maxsize=None)
def ln2_bounds(terms: int = 80) -> tuple[Fraction, Fraction]:
    """ln 2 = sum_{k>=1} 1/(k 2^k); the tail after `terms` terms is below 1/((terms+1) 2^terms)."""
    s = sum(Fraction(1, k * 2 ** k) for k in range(1, terms + 1))
    return s, s + Fraction(1, (terms + 1) * 2 ** terms)


def _reduce(r: Fraction, prec: int) -> tuple[int, Fraction, Fraction]:
    """r = 2^e * m with 1 <= m < 2; returns e and rational bounds lo <= m <= hi with small terms."""
    p, q = r.numerator, r.denominator
    e = p.bit_length() - q.bit_length()
    m = r / Fraction(2) ** e if e >= 0 else r * Fraction(2) ** (-e)
    if m < 1:
        e -= 1
        m *= 2
    scale = 2 ** (prec + 8)
    lo = Fraction((m.numerator * scale) // m.denominator, scale)
    hi = Fraction(-((-m.numerator * scale) // m.denominator), scale)
    return e, max(lo, Fraction(1)), min(hi, Fraction(2))


def log2_bounds(r, prec: int = 64) -> tuple[Fraction, Fraction]:
    """Enclosure of log2(r) for a positive rational r, of width about 2/prec."""
    r = Fraction(r)
    if r <= 0:
        raise ValueError("log of a non-positive number")
    p, q = r.numerator, r.denominator
    if q == 1 and p & (p - 1) == 0:
        e = p.bit_length() - 1
        return Fraction(e), Fraction(e)
    if p == 1 and q & (q - 1) == 0:
        e = q.bit_length() - 1
        return Fraction(-e), Fraction(-e)
    e, mlo, mhi = _reduce(r, prec)

    def lower(x: Fraction) -> Fraction:
        a = x.numerator ** prec
        b = x.denominator ** prec
        return Fraction(a.bit_length() - 1 - b.bit_length(), prec)

    def upper(x: Fraction) -> Fraction:
        a = x.numerator ** prec
        b = x.denominator ** prec
        return Fraction(a.bit_length() - (b.bit_length() - 1), prec)

    lo = max(Fraction(0), lower(mlo))
    hi = min(Fraction(1), upper(mhi))
    return e + lo, e + hi


def ln_bounds(r, prec: int = 64) -> tuple[Fraction, Fraction]:
    lo, hi = log2_bounds(r, prec)
    l2lo, l2hi = ln2_bounds()
    a = lo * (l2lo if lo >= 0 else l2hi)
    b = hi * (l2hi if hi >= 0 else l2lo)
    return a, b


def log2_interval(lo: Fraction, hi: Fraction, prec: int = 64) -> tuple[Fraction, Fraction]:
    """Enclosure of log2 over a positive interval [lo, hi]."""
    return log2_bounds(lo, prec)[0], log2_bounds(hi, prec)[1]


def compare(lhs: tuple[Fraction, Fraction], rhs: tuple[Fraction, Fraction], strict: bool = True) -> str:
    """Verdict for lhs > rhs (strict) or lhs >= rhs from interval enclosures."""
    llo, lhi = lhs
    rlo, rhi = rhs
    if (llo > rhi) if strict else (llo >= rhi):
        return PROVED
    if (lhi <= rlo) if strict else (lhi < rlo):
        return REFUTED
    return UNDECIDED


def refine(build, strict: bool = True) -> str:
    """build(prec) -> (lhs interval, rhs interval); tighten until the verdict is decided."""
    verdict = UNDECIDED
    for prec in PRECISIONS:
        lhs, rhs = build(prec)
        verdict = compare(lhs, rhs, strict)
        if verdict != UNDECIDED:
            return verdict
    return verdict


def exact_verdict(holds: bool) -> str:
    return PROVED if holds else REFUTED


def pow2_frac_ge(exponent: Fraction, value: Fraction) -> bool:
    """Exact test of 2^exponent >= value for rational exponent u/v and positive rational value."""
    exponent = Fraction(exponent)
    value = Fraction(value)
    u, v = exponent.numerator, exponent.denominator
    # 2^(u/v) >= a/b  <=>  2^u * b^v >= a^v   (u may be negative)
    a, b = value.numerator, value.denominator
    left = b ** v
    right = a ** v
    if u >= 0:
        left <<= u
    else:
        right <<= -u
    return left >= right


def pow2_frac_gt(exponent: Fraction, value: Fraction) -> bool:
    """Exact test of 2^exponent > value."""
    exponent = Fraction(exponent)
    value = Fraction(value)
    u, v = exponent.numerator, exponent.denominator
    a, b = value.numerator, value.denominator
    left = b ** v
    right = a ** v
    if u >= 0:
        left <<= u
    else:
        right <<= -u
    return left > right
