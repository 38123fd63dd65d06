"""Joint outcome distributions for N parties with two settings each.

A scenario assigns each party a pair of POVMs (setting 0, setting 1; for the
photonic presets setting 0 is the z-type and setting 1 the x-type device).
``joint_distribution`` produces the full table P(o|s) = Tr[rho (x)_k M_{o_k|s_k}]
as a dense array indexed by the settings bits then the outcome digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .measure import ThreeOutcomePOVM, TwoOutcomePOVM
from .states import StateDensity

ENTRY_TOL = 1e-12
NORMALIZATION_TOL = 1e-10
NONSIGNALLING_TOL = 1e-10


@dataclass(frozen=True)
class MeasurementAssignment:
    """Per-party (setting 0, setting 1) POVM pairs, uniform outcome cardinality."""

    parties: tuple

    def __post_init__(self):
        if len(self.parties) == 0:
            raise ValueError("assignment needs at least one party")
        cards = set()
        for pair in self.parties:
            if len(pair) != 2:
                raise ValueError("each party needs exactly two settings")
            cards.update(p.n_outcomes for p in pair)
        if len(cards) != 1:
            raise ValueError("mixed outcome cardinalities in one assignment")

    @property
    def n_parties(self) -> int:
        return len(self.parties)

    @property
    def n_outcomes(self) -> int:
        return self.parties[0][0].n_outcomes

    @classmethod
    def uniform(cls, setting0, setting1, n_parties: int) -> "MeasurementAssignment":
        """Every party measures the same two devices."""
        return cls(tuple((setting0, setting1) for _ in range(n_parties)))

    @classmethod
    def with_atom(cls, atom_pair, setting0, setting1, n_parties: int) -> "MeasurementAssignment":
        """Party 0 uses ``atom_pair``; all remaining parties share a device pair."""
        return cls((tuple(atom_pair),) + tuple((setting0, setting1) for _ in range(n_parties - 1)))


@dataclass(frozen=True)
class JointDistribution:
    """Dense conditional table, shape (2,)*N + (n_outcomes,)*N."""

    n_parties: int
    n_outcomes: int
    table: np.ndarray

    def prob(self, settings, outcomes) -> float:
        s = _digits(settings, self.n_parties)
        o = _digits(outcomes, self.n_parties)
        return float(self.table[s + o])

    def settings_block(self, settings) -> np.ndarray:
        """The outcome table for one settings string."""
        return self.table[_digits(settings, self.n_parties)]

    def flat(self) -> np.ndarray:
        """Entries flattened with settings index major, outcome index minor."""
        return self.table.reshape(2 ** self.n_parties, self.n_outcomes ** self.n_parties).reshape(-1)

    def validate(self) -> None:
        n, k = self.n_parties, self.n_outcomes
        if self.table.shape != (2,) * n + (k,) * n:
            raise ValueError("table shape does not match scenario")
        if self.table.min() < -ENTRY_TOL or self.table.max() > 1.0 + ENTRY_TOL:
            raise ValueError("probabilities outside [0, 1]")
        sums = self.table.reshape((2,) * n + (k ** n,)).sum(axis=-1)
        if np.abs(sums - 1.0).max() > NORMALIZATION_TOL:
            raise ValueError("a settings block is not normalized")
        block = self.table.reshape((2,) * n + (k,) * n)
        for party in range(n):
            marg = block.sum(axis=n + party)
            if np.abs(np.diff(marg, axis=party)).max() > NONSIGNALLING_TOL:
                raise ValueError(f"marginal of the others depends on party {party}'s setting")

    def to_text(self) -> str:
        """One line per (settings, outcomes) pair, probability at 17 significant digits."""
        n, k = self.n_parties, self.n_outcomes
        lines = []
        for s in product(range(2), repeat=n):
            for o in product(range(k), repeat=n):
                ss = "".join(map(str, s))
                oo = "".join(map(str, o))
                lines.append(f"{ss} {oo} {self.table[s + o]:.17g}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "JointDistribution":
        entries = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"malformed distribution line: {raw!r}")
            entries[(parts[0], parts[1])] = float(parts[2])
        if not entries:
            raise ValueError("empty distribution text")
        some_s, some_o = next(iter(entries))
        n = len(some_s)
        digits = {d for _, o in entries for d in o}
        k = max(int(d) for d in digits) + 1
        if len(entries) != 2 ** n * k ** n:
            raise ValueError("distribution text does not list every (settings, outcomes) pair")
        table = np.empty((2,) * n + (k,) * n, dtype=float)
        for (ss, oo), p in entries.items():
            if len(ss) != n or len(oo) != n:
                raise ValueError("inconsistent string lengths in distribution text")
            table[_digits(ss, n) + _digits(oo, n)] = p
        dist = cls(n, k, table)
        dist.validate()
        return dist


@dataclass(frozen=True)
class CorrelatorTable:
    """Full N-party correlators xi(s) for every settings string, shape (2,)*N."""

    n_parties: int
    xi: np.ndarray

    def __post_init__(self):
        if self.xi.shape != (2,) * self.n_parties:
            raise ValueError("incomplete correlator table")
        if np.abs(self.xi).max() > 1.0 + 1e-10:
            raise ValueError("correlator magnitude exceeds 1")

    def xi_of(self, settings) -> float:
        return float(self.xi[_digits(settings, self.n_parties)])


def _digits(spec, n: int) -> tuple:
    t = tuple(int(c) for c in spec)
    if len(t) != n:
        raise ValueError(f"expected {n} digits, got {spec!r}")
    return t


def _site_tensor(rho: np.ndarray, n: int) -> np.ndarray:
    """Reshape rho[i_vec, j_vec] into a (4,)*n tensor with axis order (i_k, j_k)."""
    t = rho.reshape((2,) * (2 * n))
    order = [ax for k in range(n) for ax in (k, n + k)]
    return t.transpose(order).reshape((4,) * n)


def joint_distribution(state: StateDensity, assignment: MeasurementAssignment) -> JointDistribution:
    """Full table of outcome probabilities for every settings string."""
    n = state.n_parties
    if assignment.n_parties != n:
        raise ValueError(f"assignment has {assignment.n_parties} parties, state has {n}")
    k = assignment.n_outcomes
    t = _site_tensor(state.rho, n)
    for party in range(n):
        g = np.empty((2, k, 4), dtype=complex)
        for s in (0, 1):
            for o, el in enumerate(assignment.parties[party][s].elements()):
                g[s, o] = el.T.reshape(4)
        t = np.tensordot(t, g, axes=([0], [2]))
    order = [2 * k_ for k_ in range(n)] + [2 * k_ + 1 for k_ in range(n)]
    table = np.ascontiguousarray(t.transpose(order).real)
    dist = JointDistribution(n, k, table)
    dist.validate()
    return dist


def full_correlators(p: JointDistribution) -> CorrelatorTable:
    """xi(s) = sum_o (-1)^(sum_k o_k) P(o|s), outcome 0 valued +1."""
    if p.n_outcomes != 2:
        raise ValueError("full correlators are defined for two-outcome scenarios")
    n = p.n_parties
    flat = p.table.reshape(2 ** n, 2 ** n)
    parity = np.array([(-1.0) ** bin(i).count("1") for i in range(2 ** n)])
    xi = (flat @ parity).reshape((2,) * n)
    return CorrelatorTable(n, xi)
