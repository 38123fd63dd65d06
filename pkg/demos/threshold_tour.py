#!/usr/bin/env python3
"""Critical detector efficiencies for three x-basis readout strategies.

All three scenarios share the same z-basis device, a click/no-click counter
with efficiency eta. They differ in how the x basis is implemented:

  homodyne     quadrature sign binning, a fixed symmetric error rate
  displacement a small coherent displacement before the counter, with the
               displacement amplitude optimized at every efficiency
  damping      both bases behind one common loss channel

For homodyne the threshold has a closed form, 3/2 - 2/pi, because the error
rate of ideal sign binning is exactly (1 + sqrt(2/pi))/2. For the common
loss model the margin is polynomial in eta and its root can be written out;
the bisected threshold lands on it to the solver tolerance.
"""

import math

from wbell.cli import PRESETS
from wbell.search import critical_efficiency

HOMODYNE_CLOSED_FORM = 1.5 - 2.0 / math.pi


def damping_root(n):
    """Root of the three-or-more-party margin under common loss."""
    num = 8 - 2 ** (n + 2) + 2 ** n * n * (n - 1)
    den = (n - 1) * (2 ** n * n - 8)
    return num / den


def main():
    print("x basis via ideal homodyne, N=3")
    spec = PRESETS["cabello-homodyne"].build(3)
    thr = critical_efficiency(spec, "eta_spd", (0.0, 1.0))
    print(f"  bisected threshold {thr:.5f}")
    print(f"  closed form        {HOMODYNE_CLOSED_FORM:.5f}")

    print()
    print("x basis via displaced counting, N=3 (alpha optimized per step)")
    spec = PRESETS["cabello-displacement"].build(3)
    thr = critical_efficiency(spec, "eta_spd", (0.0, 1.0), n_starts=8)
    print(f"  bisected threshold {thr:.5f}")

    print()
    print("both bases behind one loss channel")
    for n in (3, 4, 5):
        spec = PRESETS["cabello-ad"].build(n)
        thr = critical_efficiency(spec, "eta", (0.5, 0.99))
        print(f"  N={n}: bisected {thr:.5f}, algebraic root {damping_root(n):.5f}")


if __name__ == "__main__":
    main()
