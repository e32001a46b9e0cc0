"""Scale a small system, amplify it by a shift factor, then combine two amplified
blocks around a fixed point, checking the counting identities at each stage."""
from fractions import Fraction

from bowen_lab.metric_core import random_system
from bowen_lab.transforms import amplify, combine, combine_check, scale, scaling_check, shift_product

base = random_system(3, seed=11)
gammas = [Fraction(1), Fraction(1, 3)]

rows = scaling_check(base, gammas[1], [Fraction(1, 4), Fraction(1, 6)], [1, 2])
print("scaling identities:", all(r.ok for r in rows))

for delta in (Fraction(1, 2), Fraction(1, 4)):
    r = amplify(base, 2, 1, delta, 2)
    print(f"delta {delta}: window {r.window}, product sep {r.product_sep} = 2^{r.exponent} x {r.base_sep}:", r.ok)

blocks = [shift_product(scale(base, g), 2, g, 2) for g in gammas]
space = combine(blocks, gammas)
for r in combine_check(space, [Fraction(2), Fraction(1, 2), Fraction(1, 3), Fraction(1, 8)], [1, 2]):
    print(f"T={r.horizon} delta={r.delta}: sep {r.sep} = xi {r.xi_sep} + {list(r.block_sep)}", r.ok)
