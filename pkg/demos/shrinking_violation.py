#!/usr/bin/env python3
"""How the single-excitation Bell violation shrinks as modes are added.

The inequality certifies nonlocality whenever its value is positive. For the
ideal state shared over N modes the value is 1 - N/2^(N-1), so it grows
toward 1 as N increases, while the violation at realistic detectors gets
harder to reach (see threshold_tour.py for that side of the story). The
vacuum, by contrast, sits deep inside the classical region.
"""

from wbell.bell import cabello_value
from wbell.dist import MeasurementAssignment, joint_distribution
from wbell.measure import X_AXIS, Z_AXIS, efficiency_povm
from wbell.states import damped_w_state, w_state


def ideal_assignment(n):
    z = efficiency_povm(Z_AXIS, 1.0, 1.0)
    x = efficiency_povm(X_AXIS, 1.0, 1.0)
    return MeasurementAssignment.uniform(z, x, n)


def main():
    print("single-photon state, perfect detectors")
    print(f"{'N':>3}  {'value':>10}  {'closed form':>11}  violated")
    for n in range(3, 11):
        p = joint_distribution(w_state(n), ideal_assignment(n))
        r = cabello_value(p)
        closed = 1.0 - n / 2.0 ** (n - 1)
        print(f"{n:>3}  {r.value:>10.6f}  {closed:>11.6f}  {r.violated}")

    print()
    print("vacuum (the photon was lost before it reached the modes)")
    for n in (3, 4, 5):
        p = joint_distribution(damped_w_state(n, 0.0), ideal_assignment(n))
        r = cabello_value(p)
        print(f"  N={n}: value {r.value:+.6f}, violated {r.violated}")


if __name__ == "__main__":
    main()
