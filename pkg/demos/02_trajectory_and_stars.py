#
# One passage, three ways: full ladder, ladder with relaxation, and the
# two-level {g, f} model.  Then the same coherent run as Majorana stars.
#
import sys

import numpy as np

from lzsm2ph import DriveSpec, SystemSpec
from lzsm2ph.majorana import qutrit_projection, stars_trajectory
from lzsm2ph.propagate import evolve_effective, evolve_lindblad, evolve_schrodinger

system = SystemSpec()
drive = DriveSpec()

coherent = evolve_schrodinger(system, drive)
lossy = evolve_lindblad(system, drive)
reduced = evolve_effective(system, drive)

print("final populations (g, e, f, h)")
for name, tr in (("schrodinger", coherent), ("lindblad", lossy), ("effective", reduced)):
    print(f"  {name:12s}", np.array2string(tr.final, precision=4, suppress_small=True))
print(f"peak |e> population during the sweep: {coherent.p('e').max():.4f}")

# a positive modulation depth also transfers, but leaks more through |e>
flipped = evolve_schrodinger(system, DriveSpec(mod_depth=-drive.mod_depth))
print(f"with the chirp reversed: p_f = {flipped.final[2]:.4f}, peak p_e = {flipped.p('e').max():.4f}")

stars = stars_trajectory(coherent, project=True)
lost = max(qutrit_projection(s)[1] for s in coherent.states)
print(f"stars start at theta = {stars[0].star1[0]:.3f}, {stars[0].star2[0]:.3f} "
      f"and end at {stars[-1].star1[0]:.3f}, {stars[-1].star2[0]:.3f} "
      f"(|h> weight dropped by the qutrit projection <= {lost:.1e})")

if "--plot" in sys.argv:
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    t = coherent.times * 1e3
    for k, colour in zip(range(3), ("tab:blue", "tab:red", "goldenrod")):
        ax.plot(t, coherent.populations[:, k], color=colour)
        ax.plot(t, lossy.populations[:, k], color=colour, ls="--")
    ax.plot(t, reduced.p("f"), "k:", label="two-level model")
    ax.set_xlabel("t (ns)")
    ax.set_ylabel("population")
    ax.legend()
    fig.tight_layout()
    fig.savefig("trajectory.png", dpi=150)
    print("wrote trajectory.png")
