"""Walk through the finite warm-up system: structure, then sep/span tables by horizon."""
from fractions import Fraction

from bowen_lab.warmup_system import WarmupConfig, build_warmup, structure_report, warmup_experiment

for T in (1, 2, 3):
    cfg = WarmupConfig(T, seed=1)
    ws = build_warmup(cfg)
    print(f"T={T}: {ws.system.size} points, structure ok = {structure_report(ws).ok}")
    res = warmup_experiment(cfg, Fraction(5, 6), range(1, 3 * T + 1))
    for r in res.rows:
        print(f"  horizon {r.horizon:2d}  sep {r.sep:3d}  span {r.span:3d}  ln(sep)/horizon {r.ln_sep_over_horizon:.3f}")
    print(f"  largest <=2-chromatic window family: {res.le2_max}")
