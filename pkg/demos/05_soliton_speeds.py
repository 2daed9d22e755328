"""Predicting soliton speeds and confirming them against the dynamics.

The triangular recursions turn per-excursion densities into speeds; the
interaction system reaches the same numbers through collision frequencies,
and the vertical system measures motion in records.  Tracking tagged
solitons in a large mixed ensemble shows the measured slopes landing on the
predictions.
"""

import numpy as np

from boxball import (
    empirical_speeds,
    lift,
    sample_append_mix,
    solve_explicit,
    solve_interaction,
    track_trajectories,
)

rho = [0.006, 0.005, 0.1, 0.003]
table = solve_explicit(rho=rho)
print("speed table for rho =", rho)
print(table.to_tsv())

v_int = solve_interaction(table.rho / table.w0, K=4)
print("interaction-system speeds:", np.round(v_int, 6).tolist())
print("max disagreement:", float(np.max(np.abs(v_int - table.v))))

print("\nsampling a 40k-site ensemble and tracking 100 steps...")
cfg = sample_append_mix(rho, 40_000, mix_steps=40, seed=5)
traj = track_trajectories(cfg, 100)
emp = empirical_speeds(traj)
print(f"{'k':>3} {'tagged':>7} {'measured':>9} {'predicted':>10}")
for k, est in emp.v.items():
    print(f"{k:>3} {est.count:>7} {est.mean:>9.4f} {table.v[k - 1]:>10.4f}")

walk = lift(cfg)
cm = np.minimum.accumulate(np.minimum(walk.values, walk.base))
n = len(cfg)
levels = sorted(set(int(-cm[p]) for p in np.linspace(n // 4, 3 * n // 4, 30).astype(int)))
traj_r = track_trajectories(cfg, 100, soliton_tags=[], record_levels=levels, enforce_margin=False)
emp_r = empirical_speeds(traj_r)
print(f"\ntagged records drift left at {emp_r.v0.mean:.4f} vs predicted v0 {table.v0:.4f}")
print(f"records per step crossed by a 3-soliton: {emp.h[3].mean:.4f} vs h3 {table.h[3 - 1]:.4f}")
