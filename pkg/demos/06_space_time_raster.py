"""Space-time pictures of the dynamics with predicted-slope overlays.

Row t of the raster is the configuration after t updates, clipped to the
starting window.  The PGM variant draws gray guide lines at the solver's
speeds, anchored where solitons of each size start, so the straight tracks
of the dynamics can be checked against the predictions by eye.
"""

from pathlib import Path

from boxball import (
    OverlaySegment,
    build_raster,
    close_config,
    identify_stream,
    render,
    sample_append_mix,
    sample_bernoulli,
    solve_explicit,
)

out_dir = Path(__file__).resolve().parent / "output"
out_dir.mkdir(exist_ok=True)

# independent placements at density 0.25, as on the first figure
eta = sample_bernoulli(0.25, 2000, seed=0)
raster = build_raster(eta, 140)
(out_dir / "iid_density_025.pbm").write_bytes(render(raster, "pbm", stretch=5))
print("wrote", out_dir / "iid_density_025.pbm")

# mixed ensemble with prescribed densities, overlay lines at solver slopes
rho = [0.006, 0.005, 0.1, 0.003]
cfg = sample_append_mix(rho, 2300, mix_steps=50, seed=4)[:2000]
table = solve_explicit(rho=rho)
overlays = []
seen = set()
for sol in identify_stream(close_config(cfg)).all():
    if sol.size not in seen and 100 < sol.leftmost < 800:
        seen.add(sol.size)
        overlays.append(OverlaySegment(x0=sol.leftmost, speed=float(table.v[sol.size - 1])))
raster = build_raster(cfg, 140, overlays=overlays)
(out_dir / "mixed_with_overlays.pgm").write_bytes(render(raster, "pgm", stretch=5))
print("wrote", out_dir / "mixed_with_overlays.pgm")
print("overlay slopes:", {int(seg.x0): round(seg.speed, 3) for seg in overlays})
