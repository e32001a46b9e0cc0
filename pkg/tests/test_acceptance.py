"""Acceptance criteria 1-10.  Each test prints one PASS/FAIL line; the conftest hook
repeats the lines in the terminal summary.  Run directly with python for the lines alone."""
import random
import sys
import time
from dataclasses import replace
from fractions import Fraction

from bowen_lab import ec_construction as ec
from bowen_lab.colorings import CC1, FREE, guaranteed_regime, max_le2_chromatic, oracle_le2, random_coloring
from bowen_lab.colorings import search_good_coloring, table_coloring
from bowen_lab.exact_bounds import PROVED, REFUTED
from bowen_lab.exact_solvers import chain_check, cov_number, oracle_brute, sep_number, span_number, system_graph
from bowen_lab.metric_core import random_system, verify_metric_axioms
from bowen_lab.param_schedule import (check_constraints, final_gap, generate_faithful, make_schedule, rate_rows,
                                      surrogate_schedule)
from bowen_lab.transforms import (FULL_SHIFT, GOLDEN_MEAN, amplify, combine, combine_check, diameter, duplicate,
                                  duplication_report, ec23_instance, pulled_back, sample_deltas, scale,
                                  shift_product, subshift_equality, truncated_copy)
from bowen_lab.metric_core import bowen
from bowen_lab.warmup_system import WarmupConfig, implication_check, warmup_experiment

TITLES = {
    1: "solver correctness against the exhaustive oracle",
    2: "warm-up full-horizon counts",
    3: "coloring suite",
    4: "amplification equalities",
    5: "combining identities",
    6: "duplication sandwich",
    7: "EC separation and spanning lower bound",
    8: "subshift cov = sep = span",
    9: "rate gap and spanning constructions",
    10: "parameter constraints",
}


def report(n: int, ok: bool, detail: str = "") -> None:
    print(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}: {TITLES[n]}{' - ' + detail if detail else ''}")
    assert ok, detail


def test_criterion_01_solvers():
    t0 = time.time()
    rng = random.Random(2024)
    bad = []
    for inst in range(120):
        n = rng.randint(2, 14)
        s = random_system(n, inst, levels=16, bijective=rng.random() < 0.5)
        T = rng.randint(1, 3)
        eps = Fraction(rng.randint(9, 17), 16)
        g = system_graph(s, T, eps)
        got = (cov_number(g)[0], sep_number(g)[0], span_number(g)[0])
        want = tuple(oracle_brute(s, T, eps, w) for w in ("cov", "sep", "span"))
        if got != want or not chain_check(s, T, eps).ok:
            bad.append(inst)
    report(1, not bad, f"120 instances, N <= 14, mismatches {bad}, {time.time() - t0:.1f}s")


def test_criterion_02_warmup():
    details = []
    ok = True
    for T in (2, 3):
        target = 3 * T * 2 ** T
        for seed in range(3):
            cfg = WarmupConfig(T, seed=seed)
            res = warmup_experiment(cfg, (cfg.delta0 + cfg.eps0) / 2, range(1, 3 * T + 1))
            full = [r for r in res.rows if r.horizon == 3 * T][0]
            ok &= full.sep == full.span == target and res.ok and len(res.rows) == 3 * T
        details.append(f"T={T}: sep=span={full.sep}")
    imp = implication_check(60)
    ok &= imp == PROVED
    report(2, ok, "; ".join(details) + f"; implication at T=60 {imp}")


def test_criterion_03_colorings():
    ok = True
    for seed in range(30):
        fam = list(range(3 + seed % 10))
        c = random_coloring(fam, 3, FREE, seed)
        ok &= max_le2_chromatic(c, fam).size == oracle_le2(c, fam)
    rainbow = table_coloring({(0, 1): 1, (0, 2): 2, (1, 2): 3}, 3)
    ok &= max_le2_chromatic(rainbow, [0, 1, 2]).size == 2
    found = 0
    for m in range(15, 26):
        n = max(k for k in range(1, 400) if guaranteed_regime(k, m))
        r = search_good_coloring(n, m, seed=0, max_tries=100)
        found += r.found and r.guaranteed
    ok &= found >= 10
    report(3, ok, f"oracle agreement on 30 families <= 12, rainbow -> 2, {found}/11 guaranteed searches succeed")


def test_criterion_04_amplify():
    rows = []
    for b in range(5):
        base = random_system(3, 100 + b)
        for A in (2, 3):
            for T in (1, 2):
                for delta in (Fraction(1, 2), Fraction(1, 4)):
                    rows.append(amplify(base, A, 1, delta, T))
    axioms = verify_metric_axioms(shift_product(random_system(3, 100), 2, 1, 2)).ok
    ok = all(r.ok for r in rows) and axioms and {r.window - 1 for r in rows} == {1, 2}
    report(4, ok, f"{len(rows)} instances, exponents {sorted({r.exponent for r in rows})}")


def test_criterion_05_combine():
    instances = [
        ([3, 2], [1, Fraction(1, 3)]),
        ([2, 3], [Fraction(1, 2), Fraction(1, 5)]),
        ([3, 3, 2], [1, Fraction(1, 3), Fraction(1, 9)]),
        ([2, 2, 2], [1, Fraction(2, 5), Fraction(1, 6)]),
        ([4, 2, 3], [Fraction(3, 4), Fraction(1, 4), Fraction(1, 10)]),
    ]
    ok = True
    rows_total = 0
    for i, (sizes, gammas) in enumerate(instances):
        blocks = []
        for m, (n, g) in enumerate(zip(sizes, gammas)):
            # amplified blocks: a scaled base times period-1 or period-2 binary sequences
            base = scale(random_system(n, 10 * i + m), g)
            blocks.append(shift_product(base, 2, g, 1 + m % 2) if n <= 3 else base)
        space = combine(blocks, gammas)
        ok &= verify_metric_axioms(space.system).ok
        deltas = sample_deltas([bowen(space.system, 1)])
        rows = combine_check(space, deltas, [1, 2])
        rows_total += len(rows)
        ok &= all(r.ok for r in rows)
        ok &= any(r.level is None for r in rows) and any(r.level is not None for r in rows)
    report(5, ok, f"5 instances, {rows_total} (delta, T) rows")


def test_criterion_06_duplicate():
    ok = True
    names = []
    for i in range(4):
        y = random_system(4 + i, 500 + i)
        f = list(range(1, y.size)) + [0]
        rows = truncated_copy(y, Fraction(5, 8)).dist if i % 2 == 0 else [[v * Fraction(3, 4) for v in r] for r in y.dist]
        x = pulled_back(y, f, rows)
        rep = duplication_report(duplicate(x, y, f, diameter(y) * Fraction(3, 4)), [1, 2, 3])
        ok &= rep.ok
        names.append(f"random{y.size}+{y.size}")
    inst, alpha = ec23_instance()
    ok &= inst.equivariant and inst.dominated
    rep = duplication_report(duplicate(inst.x_sys, inst.y_sys, inst.f, alpha), [1, 2, 3, 4])
    ok &= rep.ok
    names.append(f"ec23 {inst.x_sys.size}+{inst.y_sys.size}")
    report(6, ok, ", ".join(names))


def test_criterion_07_ec():
    t0 = time.time()
    s = surrogate_schedule((3, 3, 3), (2, 2, 1))
    spec = ec.ec_spec(s)
    ry = ec.build_ry(s)
    ok = ec.verify_ry(ry).ok
    sizes = []
    for n in range(s.depth + 1):
        ok &= ec.verify_Wn_separated(ry, n, spec).ok
        ok &= all(r.agree for r in ec.witness_table(ry, n, spec))
        v = ec.verify_span_lower(ry, n, spec)
        ok &= v.ok
        sizes.append(v.size)
    report(7, ok, f"|W^n| = {sizes}, {time.time() - t0:.1f}s")


def test_criterion_08_subshift():
    rows = [subshift_equality(sh, 2, T, e) for sh in (FULL_SHIFT, GOLDEN_MEAN)
            for T in (1, 2, 3, 4) for e in (1, Fraction(1, 2), Fraction(1, 4))]
    report(8, all(r.ok for r in rows), f"{len(rows)} cases")


def test_criterion_09_rates():
    upper, lower, strict = final_gap()
    rows = rate_rows(generate_faithful(1, with_eps=False))
    ok = strict and all(r.step_ok for r in rows)
    s = surrogate_schedule((3, 3), (2, 1))
    spec = ec.ec_spec(s, style=CC1)
    pool = [ap.point for ap in ec.ambient_set(ec.build_ry(s), spec, -6, 6)]
    cons = [ec.large_delta_construction(spec, pool, d, 6)
            for d in (spec.eps_total + Fraction(1, 100), spec.eps_total, (spec.eps_total + spec.delta_total) / 2)]
    cons.append(ec.window_lattice_construction(spec, pool, spec.delta_total / 2, 4))
    cons.append(ec.x_lower_construction(ec.ec_spec(surrogate_schedule((3,), (2,)), style=CC1), 2, 1))
    ok &= all(c.ok for c in cons)
    report(9, ok, f"{float(upper)} ln 2 < {float(lower)} ln 2 strict={strict}; {len(cons)} constructions span")


def test_criterion_10_params():
    good = generate_faithful(1)
    rep = check_constraints(good)
    ok = rep.all_proved and all(rep.verdict(f"PK0{i}") == PROVED for i in range(1, 6))
    C, K = good.C(0), good.K(0)
    lv = good.levels[0]
    broken = {
        "PK01": make_schedule([C], [K + 1], profile="faithful"),
        "PC0": make_schedule([2], [K], profile="faithful"),
        "structure0": replace(good, levels=(replace(lv, Tplus=lv.Tplus + 1),)),
        "Pdelta1.0": replace(good, levels=(replace(lv, delta=lv.eps),)),
        "Pdelta3.0": replace(good, levels=(replace(lv, delta=lv.eps * Fraction(3, 4)),)),
        "PK05": make_schedule([C], [100], profile="faithful"),
    }
    named = []
    for name, s in broken.items():
        r = check_constraints(s)
        hit = not r.accepted and r.verdict(name) == REFUTED
        ok &= hit
        named.append(f"{name}:{'rejected' if hit else 'MISSED'}")
    report(10, ok, f"faithful C={C} K={K} all PROVED; " + ", ".join(named))


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
