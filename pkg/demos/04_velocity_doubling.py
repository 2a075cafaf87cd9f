#
# The signature of the two-photon passage: ln p_g falls linearly in Omega^4,
# and the slope is set by 4|v| rather than the 2|v| of a single-photon sweep.
#
import sys

import numpy as np

from lzsm2ph import DriveSpec, SystemSpec
from lzsm2ph.lzsm import Convention, simulate_scaling, theory_slope
from lzsm2ph.model import TWO_PI

system = SystemSpec()
drive = DriveSpec()

fits = {}
for depth_mhz in (-12.5, -20.0, -25.0):
    fit = simulate_scaling(system, drive, TWO_PI * depth_mhz)
    fits[depth_mhz] = fit
    v = DriveSpec(mod_depth=TWO_PI * depth_mhz).chirp_rate
    other = theory_slope(v, system.anharmonicity, Convention.EQ9_TEXT)
    print(f"D = {depth_mhz:6.1f} MHz: R^2 = {fit.r_squared:.4f}, "
          f"slope / theory = {fit.slope_ratio:.3f} (vs {fit.slope / other:.2f} without the dipole ratio)")

# slope * |v| should not depend on the depth
products = [abs(f.slope) * abs(DriveSpec(mod_depth=TWO_PI * d).chirp_rate) for d, f in fits.items()]
print(f"slope * |v| spread across depths: {max(products) / min(products) - 1:.3f}")

if "--plot" in sys.argv:
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    for depth_mhz, fit in fits.items():
        x = fit.points[:, 0] / TWO_PI ** 4
        ax.plot(x, fit.points[:, 1], "o", label=f"D = {depth_mhz} MHz")
        ax.plot(x, fit.theory_slope * fit.points[:, 0], "k-", lw=0.8)
    ax.set_xlabel("Omega^4 / (2 pi)^4  (MHz^4)")
    ax.set_ylabel("ln p_g")
    ax.legend()
    fig.tight_layout()
    fig.savefig("velocity_doubling.png", dpi=150)
    print("wrote velocity_doubling.png")
