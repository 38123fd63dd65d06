"""Bell-test analysis for single-photon path-entangled states.

The package models an N-mode single-photon state (optionally entangled with
an atom), applies realistic two- and three-outcome detector models, and
quantifies nonlocality three ways: closed-form Bell functionals, critical
detection efficiencies found by bisection over optimized measurements, and
the exact EPR2 nonlocal content from a linear program over the local
polytope.
"""

from .bell import (
    BellResult,
    cabello_value,
    chsh_value,
    mermin3_value,
    nonlocal_content_lower_bound,
    wwwzb_value,
)
from .dist import (
    CorrelatorTable,
    JointDistribution,
    MeasurementAssignment,
    full_correlators,
    joint_distribution,
)
from .measure import (
    BlochAxis,
    HOMODYNE_IDEAL_CORRECT,
    ThreeOutcomePOVM,
    TwoOutcomePOVM,
    X_AXIS,
    Z_AXIS,
    displaced_spd_povm,
    efficiency_povm,
    equatorial_axis,
    homodyne_povm,
    lossy_threeoutcome_povm,
)
from .polytope import (
    ContentResult,
    LocalVertex,
    LPError,
    LPInfeasibleError,
    LPUnboundedError,
    enumerate_vertices,
    is_local,
    nonlocal_content,
    solve_lp,
)
from .qmat import negativity, partial_transpose, tensor_product
from .search import (
    BracketError,
    MeasSpec,
    ParamSpec,
    ScenarioSpec,
    SearchResult,
    ThresholdCurve,
    critical_efficiency,
    optimize_free_parameters,
    region_boundary,
    scenario_distribution,
    scenario_result,
    violation_margin,
)
from .states import StateDensity, atom_photon_state, damped_w_state, w_state, w_vector

__version__ = "0.1.0"

__all__ = [
    "BellResult",
    "BlochAxis",
    "BracketError",
    "ContentResult",
    "CorrelatorTable",
    "HOMODYNE_IDEAL_CORRECT",
    "JointDistribution",
    "LPError",
    "LPInfeasibleError",
    "LPUnboundedError",
    "LocalVertex",
    "MeasSpec",
    "MeasurementAssignment",
    "ParamSpec",
    "ScenarioSpec",
    "SearchResult",
    "StateDensity",
    "ThreeOutcomePOVM",
    "ThresholdCurve",
    "TwoOutcomePOVM",
    "X_AXIS",
    "Z_AXIS",
    "atom_photon_state",
    "cabello_value",
    "chsh_value",
    "critical_efficiency",
    "damped_w_state",
    "displaced_spd_povm",
    "efficiency_povm",
    "enumerate_vertices",
    "equatorial_axis",
    "full_correlators",
    "homodyne_povm",
    "is_local",
    "joint_distribution",
    "lossy_threeoutcome_povm",
    "mermin3_value",
    "negativity",
    "nonlocal_content",
    "nonlocal_content_lower_bound",
    "optimize_free_parameters",
    "partial_transpose",
    "region_boundary",
    "scenario_distribution",
    "scenario_result",
    "solve_lp",
    "tensor_product",
    "violation_margin",
    "w_state",
    "w_vector",
    "wwwzb_value",
]
