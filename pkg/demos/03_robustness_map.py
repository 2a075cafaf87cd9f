#
# How forgiving is the passage?  Final |f> population over drive amplitude
# and frequency offset, with the 0.5 and 0.9 iso-lines.
#
# The default grid here is coarse so the script finishes in well under a
# minute; pass --threads N to spread cells over processes.
#
import argparse

import numpy as np

from lzsm2ph.model import TWO_PI, mhz
from lzsm2ph.sweep import SweepGrid, amplitude_sensitivity, extract_contours, run_sweep

parser = argparse.ArgumentParser()
parser.add_argument("--threads", type=int, default=1)
parser.add_argument("--plot", action="store_true")
args = parser.parse_args()

grid = SweepGrid(mhz(np.arange(10.0, 71.0, 4.0)), mhz(np.arange(-3.0, 3.01, 0.75)))
result = run_sweep(grid, parallelism=args.threads)
print(f"{grid.shape[0]} x {grid.shape[1]} cells, failures: {len(result.failures)}")

amps = np.asarray(grid.amplitudes) / TWO_PI
for lo in (34, 42, 46, 50):
    window = result.min_p_f((mhz(lo), mhz(62.0)), (mhz(-1.0), mhz(1.0)))
    print(f"min p_f for amplitude in [{lo}, 62] MHz, |offset| <= 1 MHz: {window:.4f}")

row = grid.offsets.index(0.0)
slope = np.abs(amplitude_sensitivity(result)[row]) * TWO_PI
print(f"|dp_f/dOmega| at zero offset: steepest {slope.max():.3g} /MHz, "
      f"on the plateau (>= 50 MHz) at most {slope[amps >= 50].max():.2g} /MHz")

contours = extract_contours(result, [0.5, 0.9])
for level, lines in contours.items():
    print(f"level {level}: {len(lines)} polyline(s)")

if args.plot:
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 4))
    mesh = ax.pcolormesh(amps, np.asarray(grid.offsets) / TWO_PI, result.p_f, shading="nearest")
    for level, lines in contours.items():
        for line in lines:
            ax.plot(line[:, 0] / TWO_PI, line[:, 1] / TWO_PI, "w-" if level == 0.9 else "w--")
    fig.colorbar(mesh, label="p_f")
    ax.set_xlabel("amplitude (MHz)")
    ax.set_ylabel("offset (MHz)")
    fig.tight_layout()
    fig.savefig("robustness_map.png", dpi=150)
    print("wrote robustness_map.png")
