"""The update operator in both formulations, on the classic 19-site example.

A carrier walks left to right, picking up every ball and dropping one into
each empty box while loaded.  Equivalently, lift the configuration to a
walk (up at balls, down at empty boxes) and reflect it about its running
minimum.  Records are the strict new minima of the walk; the sites between
consecutive records form excursions.
"""

import numpy as np

from boxball import (
    apply_T,
    apply_T_carrier,
    apply_T_reflect,
    ball_count,
    excursions,
    format_config,
    lift,
    parse_config,
    records,
)

eta = parse_config("0010110000110100000")
print("eta   :", format_config(eta))

out = apply_T_carrier(eta)
print("T eta :", format_config(out), "(carrier pass)")

walk = lift(eta)
reflected = apply_T_reflect(walk)
print("T eta :", format_config(reflected.project()), "(walk reflection)")
assert np.array_equal(out, reflected.project())

print("\nwalk values:", walk.values.tolist())
idx = records(eta)
print("records at sites:", idx.positions.tolist())
for exc in excursions(eta):
    span = f"({exc.left_record}, {exc.right_record})"
    print(f"excursion {span:10s} height {exc.height}  bits {format_config(exc.bits)!r}")

print("\nballs before/after:", ball_count(eta), "/", ball_count(out))

# iterating: a lone small soliton moves k sites per step
cfg = parse_config("1110000000000000")
for t in range(4):
    print(f"t={t}: {format_config(cfg)}")
    cfg = apply_T(cfg)
