"""Dynamic modes of the jet: multipliers, growth rates, stability."""

import os

from khjet import (
    SimConfig,
    build_initial_conditions,
    dmd,
    init_state,
    preset,
    run_collect,
    snapio,
    with_resolution,
)

out_dir = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(out_dir, exist_ok=True)

cfg = with_resolution(preset(1), 64)
result = run_collect(SimConfig(), init_state(*build_initial_conditions(cfg)))

decomp = dmd.decompose(result.snapshots)
print(f"companion matrix is {decomp.companion.shape[0]}x{decomp.companion.shape[1]}")
print("eigenvalues sorted by mode amplitude:")
for j in decomp.ranked_by_amplitude()[:8]:
    mu = decomp.multipliers[j]
    lam = decomp.spectrum[j]
    print(f"  |mu| = {abs(mu):.6f}  growth {lam.real:+.4f}  "
          f"freq {lam.imag:+.4f}  -> {decomp.stability[j]}")

counts = {label: decomp.stability.count(label)
          for label in ("stable", "neutral", "unstable")}
print("unit-disk census:", counts)

# complex modes come out as re/im image pairs
lead = decomp.ranked_by_amplitude()[0]
paths = snapio.export_mode_image(
    decomp.modes[:, lead], cfg.grid, os.path.join(out_dir, "dmd_lead_mode.pgm")
)
print("dominant mode images:", *paths)

csv_paths = snapio.export_spectrum_csv(
    decomp, os.path.join(out_dir, "dmd_spectrum.csv")
)
print("spectrum table and unit-circle overlay:", *csv_paths)
