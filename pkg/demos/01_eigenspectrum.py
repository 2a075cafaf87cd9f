#
# Instantaneous eigenstates of the chirped qutrit
#
# The drive sits at half the g-f frequency and sweeps through it.  Two of the
# three dressed levels sit near -Delta and swap their g and f character as
# the sweep passes the two-photon resonance; the third stays mostly |e>.
#
import sys

import numpy as np

from lzsm2ph import DriveSpec, SystemSpec
from lzsm2ph.model import TWO_PI
from lzsm2ph.spectra import branch_endpoint_characters, find_branch, instantaneous_spectrum, minimum_gap

system = SystemSpec(n_levels=3)
drive = DriveSpec()

branches = instantaneous_spectrum(system, drive, 2001)

for ch in branch_endpoint_characters(branches):
    print(f"branch {ch['label']}: starts |{ch['start']}>, ends |{ch['end']}>")

lower, upper = find_branch(branches, "g", "f"), find_branch(branches, "f", "g")
gap, t_gap = minimum_gap(lower, upper)
coupling = np.sqrt(2) * drive.omega_max ** 2 / (2 * system.anharmonicity)
print(f"minimum gap {gap / TWO_PI:.2f} MHz at t = {t_gap * 1e3:.0f} ns "
      f"(second-order coupling predicts {coupling / TWO_PI:.2f} MHz)")

# the middle branch carries the transient |e> weight
mid = find_branch(branches, "e")
print(f"|e>-like branch: min |e> weight {mid.compositions[:, 1].min():.3f}, "
      f"largest Stark excursion {np.abs(mid.energies).max() / TWO_PI:.1f} MHz")

if "--plot" in sys.argv:
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 4))
    for br in branches:
        ax.scatter(br.times * 1e3, br.energies / TWO_PI, c=br.colours, s=2)
    ax.set_xlabel("t (ns)")
    ax.set_ylabel("E / h (MHz)")
    fig.tight_layout()
    fig.savefig("eigenspectrum.png", dpi=150)
    print("wrote eigenspectrum.png")
