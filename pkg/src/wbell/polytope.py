"""Local deterministic strategies and the EPR2 decomposition LP.

The nonlocal content of a distribution P is 1 minus the largest weight w such
that P - w P_L is a valid (sub-normalized, non-signalling) remainder for some
local distribution P_L. Maximizing sum(q) subject to sum_l q_l D_l(o|s) <=
P(o|s), q >= 0 over the deterministic vertices D_l solves it exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from .dist import JointDistribution

VERTEX_CAP = 10 ** 6
FEASIBILITY_TOL = 1e-9
OPTIMALITY_TOL = 1e-8
LOCAL_WEIGHT_TOL = 1e-8


class LPError(RuntimeError):
    """The linear program failed to solve to the required certificates."""


class LPInfeasibleError(LPError):
    """No feasible point exists (signals a broken input distribution)."""


class LPUnboundedError(LPError):
    """The objective is unbounded above on the feasible set."""


@dataclass(frozen=True)
class LocalVertex:
    """Deterministic local strategy: one outcome per (party, setting)."""

    outcomes: tuple

    @property
    def n_parties(self) -> int:
        return len(self.outcomes)

    def table(self, n_outcomes: int) -> np.ndarray:
        """Dense deterministic distribution, shape (2,)*N + (n_outcomes,)*N."""
        n = self.n_parties
        t = np.zeros((2,) * n + (n_outcomes,) * n)
        for s in product(range(2), repeat=n):
            o = tuple(self.outcomes[k][s[k]] for k in range(n))
            t[s + o] = 1.0
        return t

    def distribution(self, n_outcomes: int) -> JointDistribution:
        return JointDistribution(self.n_parties, n_outcomes, self.table(n_outcomes))


@dataclass(frozen=True)
class ContentResult:
    """EPR2 split of a distribution into local weight and nonlocal content."""

    local_weight: float
    nonlocal_content: float
    certificate: np.ndarray


def enumerate_vertices(n_parties: int, n_outcomes: int) -> list:
    """All (n_outcomes^2)^N deterministic strategies, lexicographic order."""
    if n_parties < 1:
        raise ValueError("need at least one party")
    if n_outcomes < 2:
        raise ValueError("need at least two outcomes")
    count = (n_outcomes ** 2) ** n_parties
    if count > VERTEX_CAP:
        raise ValueError(f"vertex count {count} exceeds the cap {VERTEX_CAP}")
    per_party = list(product(range(n_outcomes), repeat=2))
    return [LocalVertex(choice) for choice in product(per_party, repeat=n_parties)]


@lru_cache(maxsize=8)
def _vertex_assignments(n_parties: int, n_outcomes: int) -> np.ndarray:
    verts = enumerate_vertices(n_parties, n_outcomes)
    return np.array([v.outcomes for v in verts], dtype=np.int64)


@lru_cache(maxsize=8)
def _constraint_matrix(n_parties: int, n_outcomes: int) -> sp.csc_matrix:
    """Sparse A with A[(s,o), l] = D_l(o|s); rows settings-major like flat()."""
    assign = _vertex_assignments(n_parties, n_outcomes)
    n_vertices = assign.shape[0]
    n, k = n_parties, n_outcomes
    weights = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
    rows, cols = [], []
    for s_flat, s in enumerate(product(range(2), repeat=n)):
        o_per_party = assign[np.arange(n_vertices)[:, None], np.arange(n), list(s)]
        o_flat = o_per_party @ weights
        rows.append(s_flat * k ** n + o_flat)
        cols.append(np.arange(n_vertices))
    data = np.ones(2 ** n * n_vertices)
    return sp.csc_matrix(
        (data, (np.concatenate(rows), np.concatenate(cols))),
        shape=(2 ** n * k ** n, n_vertices),
    )


def solve_lp(objective: np.ndarray, a_ub, b_ub: np.ndarray,
             feasibility_tol: float = FEASIBILITY_TOL,
             optimality_tol: float = OPTIMALITY_TOL):
    """Maximize objective . x subject to a_ub x <= b_ub and x >= 0.

    Returns (value, x). The solution is certified: primal feasibility within
    ``feasibility_tol`` and, when the solver reports duals, a weak-duality gap
    within ``optimality_tol`` (relative to the value's scale).
    """
    c = -np.asarray(objective, dtype=float)
    # The certificate below is stricter than the HiGHS defaults (1e-7), so
    # the solver is asked for more accuracy than it would normally deliver.
    res = linprog(c, A_ub=a_ub, b_ub=np.asarray(b_ub, dtype=float),
                  bounds=(0.0, None), method="highs",
                  options={"primal_feasibility_tolerance": 1e-10,
                           "dual_feasibility_tolerance": 1e-10})
    if res.status == 2:
        raise LPInfeasibleError(res.message)
    if res.status == 3:
        raise LPUnboundedError(res.message)
    if not res.success:
        raise LPError(res.message)
    x = np.asarray(res.x, dtype=float)
    residual = a_ub @ x - b_ub
    worst = float(np.max(residual)) if residual.size else 0.0
    lowest = float(x.min(initial=0.0))
    if worst > feasibility_tol or lowest < -feasibility_tol:
        raise LPError(f"solution violates feasibility (residual {worst:g}, "
                      f"lowest variable {lowest:g})")
    value = float(-res.fun)
    marginals = getattr(getattr(res, "ineqlin", None), "marginals", None)
    if marginals is not None:
        dual_value = float(np.asarray(b_ub) @ -np.asarray(marginals))
        if abs(dual_value - value) > optimality_tol * (1.0 + abs(value)):
            raise LPError(f"duality gap {dual_value - value:g} exceeds tolerance")
    return value, x


def nonlocal_content(p: JointDistribution,
                     feasibility_tol: float = FEASIBILITY_TOL,
                     optimality_tol: float = OPTIMALITY_TOL) -> ContentResult:
    """Exact EPR2 nonlocal content of a two-setting distribution.

    Scope caps (LP size): N <= 5 for two outcomes, N <= 4 for three.
    """
    p.validate()
    n, k = p.n_parties, p.n_outcomes
    if k == 2 and n > 5:
        raise ValueError("two-outcome content capped at 5 parties")
    if k == 3 and n > 4:
        raise ValueError("three-outcome content capped at 4 parties")
    if k > 3:
        raise ValueError("content is implemented for 2 or 3 outcomes")
    a = _constraint_matrix(n, k)
    b = np.clip(p.flat(), 0.0, None)
    value, q = solve_lp(np.ones(a.shape[1]), a, b,
                        feasibility_tol=feasibility_tol, optimality_tol=optimality_tol)
    local_weight = float(min(1.0, max(0.0, value)))
    return ContentResult(local_weight, 1.0 - local_weight, q)


def is_local(p: JointDistribution, tol: float = LOCAL_WEIGHT_TOL) -> bool:
    """True when the local weight reaches 1 - tol."""
    return nonlocal_content(p).local_weight >= 1.0 - tol
