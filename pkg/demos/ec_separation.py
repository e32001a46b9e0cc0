"""Build a small RY family, confirm its W^n points are separated, and show one
separation witness found by the direct search and by the recursive descent."""
from bowen_lab.ec_construction import (build_ry, ec_spec, verify_ry, verify_span_lower, verify_Wn_separated,
                                       witness_table)
from bowen_lab.param_schedule import surrogate_schedule

sched = surrogate_schedule((3, 3, 3), (2, 2, 1))
spec = ec_spec(sched)
ry = build_ry(sched)
print("family sizes", verify_ry(ry).sizes)
for n in range(sched.depth + 1):
    sep = verify_Wn_separated(ry, n, spec)
    span = verify_span_lower(ry, n, spec)
    print(f"level {n}: {sep.pairs} pairs separated within {sep.horizon} steps: {sep.ok}; "
          f"span lower bound {span.lower_bound} over {span.ambient} ambient points")
row = witness_table(ry, 1, spec)[0]
print(f"level-1 pair {row.pair}: direct witness t={row.direct}, recursive witness t={row.recursive}")
