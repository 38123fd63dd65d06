"""Bell inequality functionals on joint distributions and correlator tables.

Settings convention: setting 0 is the z-type measurement and setting 1 the
x-type one. Outcome 0 carries correlator value +1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dist import CorrelatorTable, JointDistribution

VIOLATION_GUARD = 1e-9


@dataclass(frozen=True)
class BellResult:
    """Value of a Bell functional with its local and algebraic ceilings."""

    value: float
    local_bound: float
    algebraic_max: float
    violated: bool

    @classmethod
    def make(cls, value: float, local_bound: float, algebraic_max: float) -> "BellResult":
        return cls(float(value), float(local_bound), float(algebraic_max),
                   bool(value > local_bound + VIOLATION_GUARD))


def cabello_value(p: JointDistribution) -> BellResult:
    """Single-excitation inequality with local bound 0 and algebraic max 1.

    value = P(all 0 | all z) + sum_i P(only i fires | all z)
          - sum_{i != j} P(outcome 1 at i, 0 elsewhere | x at i and j, z elsewhere)
          - P(all 0 | all x) - P(all 1 | all x).

    The positive terms are probabilities of mutually exclusive events under
    the all-z setting, so 1 bounds the value over every distribution.
    """
    n = p.n_parties
    if p.n_outcomes != 2:
        raise ValueError("the inequality is defined for two-outcome scenarios")
    if n < 3:
        raise ValueError("the inequality needs at least three parties")
    t = p.table
    all_z = (0,) * n
    all_x = (1,) * n
    zeros = (0,) * n
    value = float(t[all_z + zeros])
    for i in range(n):
        e_i = tuple(1 if k == i else 0 for k in range(n))
        value += t[all_z + e_i]
    for i in range(n):
        e_i = tuple(1 if k == i else 0 for k in range(n))
        for j in range(n):
            if j == i:
                continue
            s = tuple(1 if k in (i, j) else 0 for k in range(n))
            value -= t[s + e_i]
    value -= t[all_x + zeros]
    value -= t[all_x + (1,) * n]
    return BellResult.make(value, 0.0, 1.0)


def _harmonic_transform(xi: np.ndarray) -> np.ndarray:
    """xi_hat(r) = 2^-N sum_s (-1)^(r.s) xi(s)."""
    t = np.array(xi, dtype=float)
    n = t.ndim
    for ax in range(n):
        t = np.moveaxis(t, ax, 0)
        t = np.stack([t[0] + t[1], t[0] - t[1]])
        t = np.moveaxis(t, 0, ax)
    return t / 2.0 ** n


def wwwzb_value(c: CorrelatorTable) -> BellResult:
    """Aggregate full-correlator criterion: sum_r |xi_hat(r)| with local bound 1.

    Every local deterministic strategy evaluates to exactly 1, and any
    violation of a full-correlator Bell inequality for two settings per party
    pushes the sum above 1. The algebraic_max 2^((N-1)/2) recorded here is the
    quantum ceiling, reported for information only; it is not a bound over all
    non-signalling distributions, so it must not feed the nonlocal-content
    lower bound.
    """
    n = c.n_parties
    value = float(np.abs(_harmonic_transform(c.xi)).sum())
    return BellResult.make(value, 1.0, 2.0 ** ((n - 1) / 2.0))


def mermin3_value(c: CorrelatorTable) -> BellResult:
    """Three-party Mermin combination xi(001) + xi(010) + xi(100) - xi(111).

    Local bound 2, algebraic max 4. The sign convention is fixed so that the
    value reaches 4 on (|000> + |111>)/sqrt(2) with setting 0 measuring
    sigma_y and setting 1 the equatorial axis at azimuth pi.
    """
    if c.n_parties != 3:
        raise ValueError("this functional is specific to three parties")
    xi = c.xi
    value = float(xi[0, 0, 1] + xi[0, 1, 0] + xi[1, 0, 0] - xi[1, 1, 1])
    return BellResult.make(value, 2.0, 4.0)


def chsh_value(c: CorrelatorTable) -> BellResult:
    """Best CHSH combination over the eight sign/setting relabelings."""
    if c.n_parties != 2:
        raise ValueError("CHSH is a two-party functional")
    xi = c.xi.reshape(-1)
    total = xi.sum()
    value = float(max(abs(total - 2.0 * xi[k]) for k in range(4)))
    return BellResult.make(value, 2.0, 4.0)


def nonlocal_content_lower_bound(r: BellResult) -> float:
    """EPR2 lower bound (value - local) / (algebraic - local), clipped to [0, 1].

    Only meaningful when ``algebraic_max`` bounds the functional over all
    non-signalling distributions (true for the linear functionals here:
    cabello, mermin3, chsh).
    """
    span = r.algebraic_max - r.local_bound
    if span <= 1e-12:
        raise ValueError("degenerate functional: algebraic max equals the local bound")
    return float(min(1.0, max(0.0, (r.value - r.local_bound) / span)))
