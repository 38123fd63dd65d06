"""Scenario descriptions, free-parameter optimization, and threshold scans.

A :class:`ScenarioSpec` names a complete experiment: party count, the Bell
criterion to evaluate, the measurement family behind each photonic setting,
an optional atom party, and a table of named parameters (detector
efficiencies, displacement amplitudes, preparation angles). Parameters with a
pinned value are fixed; the rest are free and get optimized away whenever a
margin is requested, so thresholds always refer to the best measurement the
scheme allows.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Union

import numpy as np
from scipy.optimize import Bounds, minimize
from scipy.stats import qmc

from .bell import BellResult, cabello_value, chsh_value, mermin3_value, wwwzb_value
from .dist import JointDistribution, MeasurementAssignment, full_correlators, joint_distribution
from .measure import (
    BlochAxis,
    TwoOutcomePOVM,
    X_AXIS,
    Z_AXIS,
    displaced_spd_povm,
    efficiency_povm,
    equatorial_axis,
    homodyne_povm,
    lossy_threeoutcome_povm,
)
from .polytope import ContentResult, nonlocal_content
from .states import StateDensity, atom_photon_state, w_state

DEFAULT_STARTS = 32
SIMPLEX_XATOL = 1e-6
SIMPLEX_FATOL = 1e-10
BISECTION_ATOL = 1e-4

CRITERIA = ("cabello", "wwwzb", "mermin3", "chsh", "lp2", "lp3")

_FAMILY_OUTCOMES = {
    "spd": 2,
    "sym": 2,
    "homodyne": 2,
    "displaced": 2,
    "displaced_response": 2,
    "ad_x": 2,
    "lossy3_z": 3,
    "lossy3_x": 3,
}

_ATOM_PARAMS = ("theta", "eta_c", "eta_atom", "a_polar_0", "a_polar_1")


class BracketError(RuntimeError):
    """A threshold scan found the same verdict at both bracket ends.

    ``kind`` is "always" when the criterion is violated across the whole
    bracket and "never" when it is violated nowhere on it.
    """

    def __init__(self, message: str, kind: str):
        super().__init__(message)
        self.kind = kind


@dataclass(frozen=True)
class ParamSpec:
    """Named scalar parameter: free on [lo, hi], or fixed when value is set."""

    lo: float
    hi: float
    value: Optional[float] = None

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("parameter bounds must be finite")
        if self.lo > self.hi:
            raise ValueError("parameter bounds are reversed")
        if self.value is None:
            if self.lo == self.hi:
                raise ValueError("a free parameter needs lo < hi")
        elif not self.lo <= self.value <= self.hi:
            raise ValueError("fixed value lies outside its bounds")

    @property
    def is_free(self) -> bool:
        return self.value is None

    @classmethod
    def fixed(cls, value: float) -> "ParamSpec":
        return cls(value, value, value)

    @classmethod
    def free(cls, lo: float, hi: float) -> "ParamSpec":
        return cls(lo, hi, None)


@dataclass(frozen=True)
class MeasSpec:
    """One measurement device: a family plus its efficiency and auxiliary knob.

    ``eff`` and ``aux`` are either literals or names referring to scenario
    parameters. The meaning of ``aux`` depends on the family: azimuth for
    "sym", "homodyne", "ad_x" and "lossy3_x"; displacement amplitude for
    "displaced"; unused for "spd" and "lossy3_z". ``flip`` swaps the two
    outcome labels of a binary device.
    """

    family: str
    eff: Union[str, float]
    aux: Union[str, float, None] = None
    flip: bool = False

    def __post_init__(self):
        if self.family not in _FAMILY_OUTCOMES:
            raise ValueError(f"unknown measurement family {self.family!r}")
        if self.flip and _FAMILY_OUTCOMES[self.family] != 2:
            raise ValueError("flip applies to two-outcome devices only")

    @property
    def n_outcomes(self) -> int:
        return _FAMILY_OUTCOMES[self.family]

    def references(self) -> set:
        return {r for r in (self.eff, self.aux) if isinstance(r, str)}


@dataclass(frozen=True)
class ScenarioSpec:
    """Complete description of one Bell experiment to evaluate or scan."""

    name: str
    n_parties: int
    criterion: str
    photon_z: MeasSpec
    photon_x: MeasSpec
    atom: bool = False
    params: dict = field(default_factory=dict)
    lp_tol: float = 1e-8

    def __post_init__(self):
        if self.criterion not in CRITERIA:
            raise ValueError(f"unknown criterion {self.criterion!r}")
        if self.n_parties < 1:
            raise ValueError("need at least one party")
        k = self.photon_z.n_outcomes
        if self.photon_x.n_outcomes != k:
            raise ValueError("both settings must share one outcome count")
        if self.criterion == "lp3":
            if k != 3:
                raise ValueError("lp3 needs three-outcome measurement families")
            if self.n_parties > 4:
                raise ValueError("three-outcome content is capped at 4 parties")
        else:
            if k != 2:
                raise ValueError(f"{self.criterion} needs two-outcome families")
        if self.criterion == "lp2" and self.n_parties > 5:
            raise ValueError("two-outcome content is capped at 5 parties")
        if self.criterion == "cabello" and self.n_parties < 3:
            raise ValueError("cabello needs at least three parties")
        if self.criterion == "mermin3" and self.n_parties != 3:
            raise ValueError("mermin3 is a three-party criterion")
        if self.criterion == "chsh" and self.n_parties != 2:
            raise ValueError("chsh is a two-party criterion")
        if self.atom and self.n_parties < 2:
            raise ValueError("an atom scenario needs at least one photon party")
        if self.atom and k != 2:
            raise ValueError("atom scenarios use two-outcome photon devices")
        referenced = self.photon_z.references() | self.photon_x.references()
        if self.atom:
            referenced |= set(_ATOM_PARAMS)
        missing = referenced - set(self.params)
        if missing:
            raise ValueError(f"parameters without a spec: {sorted(missing)}")
        dangling = set(self.params) - referenced
        if dangling:
            raise ValueError(f"parameters never referenced: {sorted(dangling)}")
        for pname, pspec in self.params.items():
            if not isinstance(pspec, ParamSpec):
                raise TypeError(f"parameter {pname!r} is not a ParamSpec")


@dataclass(frozen=True)
class SearchResult:
    """Best margin found and the full parameter assignment that achieves it."""

    margin: float
    params: dict


@dataclass(frozen=True)
class ThresholdCurve:
    """Critical-value curve y*(x) from a grid scan, with per-point status."""

    x_name: str
    y_name: str
    points: tuple

    def to_csv(self) -> str:
        lines = [f"{self.x_name},{self.y_name},status"]
        for x, y, status in self.points:
            lines.append(f"{x:.10g},{y:.10g},{status}")
        return "\n".join(lines) + "\n"


def free_parameters(spec: ScenarioSpec) -> tuple:
    """Free parameter names in sorted order (the optimizer's axes).

    Sorting makes the axis order, and with it every downstream number, a
    function of the parameter names alone rather than of dict insertion
    history, so equal specs search identically.
    """
    return tuple(sorted(n for n, p in spec.params.items() if p.is_free))


def fix_parameter(spec: ScenarioSpec, name: str, value: float) -> ScenarioSpec:
    if name not in spec.params:
        raise KeyError(f"scenario has no parameter {name!r}")
    params = dict(spec.params)
    params[name] = ParamSpec.fixed(float(value))
    return replace(spec, params=params)


def resolve_values(spec: ScenarioSpec, free_values: Optional[dict] = None) -> dict:
    """Merge fixed parameter values with the supplied free ones."""
    free_values = dict(free_values or {})
    out = {}
    for name, pspec in spec.params.items():
        if pspec.is_free:
            if name not in free_values:
                raise KeyError(f"missing value for free parameter {name!r}")
            out[name] = float(free_values.pop(name))
        else:
            out[name] = float(pspec.value)
    if free_values:
        raise KeyError(f"unknown parameters supplied: {sorted(free_values)}")
    return out


def _lookup(ref, values: dict) -> float:
    if ref is None:
        return 0.0
    if isinstance(ref, str):
        return values[ref]
    return float(ref)


def _displaced_response_povm(alpha: float, eta_spd: float) -> TwoOutcomePOVM:
    """Diagonal response model of displacement followed by on/off detection.

    Keeps only the per-eigenstate click statistics of the displaced counter:
    the x eigenstates respond with probabilities read off the exact no-click
    element, and the POVM is rebuilt as a two-efficiency error model on the x
    axis. Unlike displaced_spd_povm this drops the coherence between the two
    eigenstates, which is how threshold studies usually tabulate the device.
    """
    damp = math.exp(-eta_spd * alpha * alpha)
    up = 0.5 * damp * ((1.0 - eta_spd * alpha) ** 2 + 1.0 - eta_spd)
    down = 1.0 - 0.5 * damp * ((1.0 + eta_spd * alpha) ** 2 + 1.0 - eta_spd)
    up = min(max(up, 0.0), 1.0)
    down = min(max(down, 0.0), 1.0)
    return efficiency_povm(X_AXIS, up, down, label="displaced-response")


def build_photon_povm(ms: MeasSpec, values: dict):
    eff = _lookup(ms.eff, values)
    aux = _lookup(ms.aux, values)
    if ms.family == "spd":
        povm = efficiency_povm(Z_AXIS, eff, 1.0, label="spd")
    elif ms.family == "sym":
        povm = efficiency_povm(equatorial_axis(aux), eff, eff, label="sym")
    elif ms.family == "homodyne":
        povm = homodyne_povm(aux, eff)
    elif ms.family == "displaced":
        povm = displaced_spd_povm(aux, eff)
    elif ms.family == "displaced_response":
        povm = _displaced_response_povm(aux, eff)
    elif ms.family == "ad_x":
        sym_eff = 0.5 * (1.0 + math.sqrt(eff))
        povm = efficiency_povm(equatorial_axis(aux), sym_eff, sym_eff, label="ad-x")
    elif ms.family == "lossy3_z":
        return lossy_threeoutcome_povm(Z_AXIS, eff)
    elif ms.family == "lossy3_x":
        return lossy_threeoutcome_povm(equatorial_axis(aux), eff)
    else:  # pragma: no cover - rejected in MeasSpec already
        raise ValueError(f"unknown measurement family {ms.family!r}")
    return povm.flipped() if ms.flip else povm


def _atom_pair(values: dict) -> tuple:
    eta = values["eta_atom"]
    return tuple(
        efficiency_povm(BlochAxis(values[f"a_polar_{s}"], 0.0), eta, 1.0, label="atom")
        for s in range(2)
    )


def scenario_state(spec: ScenarioSpec, values: dict) -> StateDensity:
    if spec.atom:
        return atom_photon_state(values["theta"], values["eta_c"], spec.n_parties - 1)
    return w_state(spec.n_parties)


def scenario_assignment(spec: ScenarioSpec, values: dict) -> MeasurementAssignment:
    setting0 = build_photon_povm(spec.photon_z, values)
    setting1 = build_photon_povm(spec.photon_x, values)
    if spec.atom:
        return MeasurementAssignment.with_atom(
            _atom_pair(values), setting0, setting1, spec.n_parties)
    return MeasurementAssignment.uniform(setting0, setting1, spec.n_parties)


def scenario_distribution(spec: ScenarioSpec, values: dict) -> JointDistribution:
    return joint_distribution(scenario_state(spec, values),
                              scenario_assignment(spec, values))


def criterion_result(criterion: str, p: JointDistribution):
    """Apply one named criterion to a distribution."""
    if criterion == "cabello":
        return cabello_value(p)
    if criterion == "wwwzb":
        return wwwzb_value(full_correlators(p))
    if criterion == "mermin3":
        return mermin3_value(full_correlators(p))
    if criterion == "chsh":
        return chsh_value(full_correlators(p))
    if criterion in ("lp2", "lp3"):
        return nonlocal_content(p)
    raise ValueError(f"unknown criterion {criterion!r}")


def scenario_result(spec: ScenarioSpec, values: dict):
    """Evaluate the scenario's criterion: a BellResult or a ContentResult."""
    return criterion_result(spec.criterion, scenario_distribution(spec, values))


def violation_margin(spec: ScenarioSpec, values: dict) -> float:
    """Positive exactly when the criterion certifies nonlocality."""
    r = scenario_result(spec, values)
    if isinstance(r, ContentResult):
        return r.nonlocal_content - spec.lp_tol
    return r.value - r.local_bound


def _start_points(spec: ScenarioSpec, n_starts: int) -> tuple:
    """Deterministic low-discrepancy starts inside the free-parameter box."""
    names = free_parameters(spec)
    if not names:
        return names, np.zeros((1, 0))
    lo = np.array([spec.params[n].lo for n in names])
    hi = np.array([spec.params[n].hi for n in names])
    unit = qmc.Sobol(d=len(names), scramble=False).random(n_starts)
    return names, lo + unit * (hi - lo)


def _minimize_from(spec: ScenarioSpec, names: tuple, x0: np.ndarray,
                   xatol: float) -> tuple:
    lo = [spec.params[n].lo for n in names]
    hi = [spec.params[n].hi for n in names]

    def negative_margin(x):
        return -violation_margin(spec, resolve_values(spec, dict(zip(names, x))))

    res = minimize(negative_margin, x0, method="Nelder-Mead",
                   bounds=Bounds(lo, hi),
                   options={"xatol": xatol, "fatol": SIMPLEX_FATOL})
    x = np.clip(res.x, lo, hi)
    return -float(negative_margin(x)), x


def optimize_free_parameters(spec: ScenarioSpec, n_starts: int = DEFAULT_STARTS,
                             xatol: float = SIMPLEX_XATOL) -> SearchResult:
    """Maximize the violation margin over all free parameters.

    Multi-start Nelder-Mead from an unscrambled Sobol sequence, so repeated
    calls give bit-identical results. With no free parameters this is a
    single evaluation.
    """
    names, starts = _start_points(spec, n_starts)
    if not names:
        values = resolve_values(spec)
        return SearchResult(violation_margin(spec, values), values)
    best_margin = -np.inf
    best_x = starts[0]
    for x0 in starts:
        margin, x = _minimize_from(spec, names, x0, xatol)
        if margin > best_margin:
            best_margin, best_x = margin, x
    return SearchResult(best_margin,
                        resolve_values(spec, dict(zip(names, best_x))))


def has_violation(spec: ScenarioSpec, n_starts: int = DEFAULT_STARTS,
                  xatol: float = SIMPLEX_XATOL) -> bool:
    """Sign of the optimized margin, short-circuiting on the first success.

    Raw margins at the start points are scanned before any simplex runs, and
    the polished runs begin from the most promising starts, so the common
    deep-violation case returns quickly. The verdict matches
    ``optimize_free_parameters(...).margin > 0``.
    """
    names, starts = _start_points(spec, n_starts)
    if not names:
        return violation_margin(spec, resolve_values(spec)) > 0.0
    raw = []
    for x0 in starts:
        m = violation_margin(spec, resolve_values(spec, dict(zip(names, x0))))
        if m > 0.0:
            return True
        raw.append(m)
    order = np.argsort(np.array(raw), kind="stable")[::-1]
    for idx in order:
        margin, _ = _minimize_from(spec, names, starts[idx], xatol)
        if margin > 0.0:
            return True
    return False


def critical_efficiency(spec: ScenarioSpec, param: str, bracket: tuple,
                        atol: float = BISECTION_ATOL,
                        n_starts: int = DEFAULT_STARTS) -> float:
    """Bisect ``param`` for the point where the optimized margin changes sign.

    Raises :class:`BracketError` when both bracket ends agree (kind "always"
    or "never"). The returned midpoint is within ``atol`` of the boundary.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise ValueError("bracket must satisfy lo < hi")
    lo_viol = has_violation(fix_parameter(spec, param, lo), n_starts)
    hi_viol = has_violation(fix_parameter(spec, param, hi), n_starts)
    if lo_viol == hi_viol:
        kind = "always" if lo_viol else "never"
        raise BracketError(
            f"criterion is {'violated' if lo_viol else 'satisfied'} on the "
            f"whole bracket [{lo:g}, {hi:g}] of {param!r}", kind)
    while hi - lo > atol:
        mid = 0.5 * (lo + hi)
        if has_violation(fix_parameter(spec, param, mid), n_starts) == lo_viol:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _boundary_point(task):
    spec, x_name, x, y_name, bracket, atol, n_starts = task
    fixed = fix_parameter(spec, x_name, float(x))
    try:
        y = critical_efficiency(fixed, y_name, bracket, atol=atol, n_starts=n_starts)
        return float(x), float(y), "ok"
    except BracketError as err:
        return float(x), float("nan"), err.kind


def region_boundary(spec: ScenarioSpec, x_name: str, y_name: str,
                    x_values, y_bracket: tuple,
                    atol: float = BISECTION_ATOL,
                    n_starts: int = DEFAULT_STARTS,
                    jobs: int = 1) -> ThresholdCurve:
    """Critical ``y_name`` value over a grid of ``x_name`` values.

    Grid points are independent, so they parallelize across processes when
    ``jobs`` exceeds 1; the row order of the result never depends on it.
    """
    for name in (x_name, y_name):
        if name not in spec.params:
            raise KeyError(f"scenario has no parameter {name!r}")
    tasks = [(spec, x_name, float(x), y_name, tuple(y_bracket), atol, n_starts)
             for x in x_values]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            points = tuple(pool.map(_boundary_point, tasks))
    else:
        points = tuple(_boundary_point(t) for t in tasks)
    return ThresholdCurve(x_name, y_name, points)
