#!/usr/bin/env python3
"""Where the exact locality region sits in the detector-quality plane.

The linear program decides membership in the local polytope outright, so
unlike any single inequality it draws the true boundary. This script rasters
the three-mode plane of (z efficiency, x efficiency) and marks each cell:

  .  local (zero nonlocal content)
  +  nonlocal, content below 0.05
  #  nonlocal, content 0.05 or more

It then checks the loss-flagging three-outcome model, whose boundary is the
straight line eta_x = 2 (1 - eta_z).
"""

import numpy as np

from wbell.cli import PRESETS
from wbell.polytope import nonlocal_content
from wbell.search import critical_efficiency, fix_parameter, scenario_distribution


def main():
    spec = PRESETS["fig5"].build(3)
    etas_x = np.linspace(0.5, 1.0, 11)
    etas_z = np.linspace(1.0, 0.0, 11)
    print("nonlocal content map, N=3 (rows: eta_z 1.0 down to 0.0;"
          " cols: eta_x 0.5 to 1.0)")
    for eta_z in etas_z:
        row = []
        for eta_x in etas_x:
            p = scenario_distribution(
                spec, {"eta_z": float(eta_z), "eta_x": float(eta_x)})
            q = nonlocal_content(p).nonlocal_content
            row.append("." if q <= 1e-8 else ("+" if q < 0.05 else "#"))
        print(f"  eta_z={eta_z:4.1f}  {''.join(row)}")

    print()
    print("three-outcome detectors that flag their losses, N=3")
    print("boundary should follow eta_x = 2 (1 - eta_z)")
    for eta_z in (0.6, 0.75, 0.9):
        g = fix_parameter(PRESETS["garbarino3"].build(3), "eta_z", eta_z)
        root = critical_efficiency(g, "eta_x", (0.01, 1.0))
        print(f"  eta_z={eta_z:.2f}: critical eta_x {root:.4f}"
              f"  (line: {2.0 * (1.0 - eta_z):.4f})")


if __name__ == "__main__":
    main()
