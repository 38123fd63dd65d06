"""Command-line front end: presets, config files, JSON and CSV output.

Subcommands: ``bell`` (evaluate one criterion, optimizing free parameters),
``threshold`` (bisect a critical efficiency), ``region`` (threshold curve over
a parameter grid, CSV), ``content`` (EPR2 nonlocal content), ``negativity``
(entanglement across the atom/photons cut). Identical invocations produce
identical bytes.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .dist import JointDistribution, joint_distribution
from .polytope import ContentResult, LPError, nonlocal_content
from .qmat import negativity
from .search import (
    BracketError,
    DEFAULT_STARTS,
    MeasSpec,
    ParamSpec,
    ScenarioSpec,
    criterion_result,
    critical_efficiency,
    fix_parameter,
    optimize_free_parameters,
    region_boundary,
    resolve_values,
    scenario_assignment,
    scenario_distribution,
    scenario_result,
)
from .states import atom_photon_state, damped_w_state, w_state

DEFAULT_GRID = 21
DEFAULT_ATOL = 1e-4

TWO_PI = 2.0 * math.pi
THETA_LO = -math.pi / 2.0
THETA_HI = -1e-3


class UsageError(Exception):
    """Bad flags, config keys, or parameter values (exit code 1)."""


# ---------------------------------------------------------------------------
# Presets


@dataclass(frozen=True)
class Preset:
    summary: str
    default_n: int
    build: Callable[[int], ScenarioSpec]
    threshold_param: str
    threshold_bracket: tuple
    region_x: Optional[str] = None
    region_x_range: Optional[tuple] = None
    region_y: Optional[str] = None
    region_y_bracket: Optional[tuple] = None


def _photonic_zx(name: str, n: int, criterion: str) -> ScenarioSpec:
    return ScenarioSpec(
        name, n, criterion,
        MeasSpec("spd", "eta_z"), MeasSpec("sym", "eta_x"),
        params={"eta_z": ParamSpec.free(0.0, 1.0),
                "eta_x": ParamSpec.free(0.5, 1.0)})


def _fig1(n: int) -> ScenarioSpec:
    return _photonic_zx("fig1", n, "cabello")


def _fig2(n: int) -> ScenarioSpec:
    return _photonic_zx("fig2", n, "wwwzb")


def _fig5(n: int) -> ScenarioSpec:
    return _photonic_zx("fig5", n, "lp2")


def _garbarino3(n: int) -> ScenarioSpec:
    return ScenarioSpec(
        "garbarino3", n, "lp3",
        MeasSpec("lossy3_z", "eta_z"), MeasSpec("lossy3_x", "eta_x", 0.0),
        params={"eta_z": ParamSpec.free(0.0, 1.0),
                "eta_x": ParamSpec.free(0.0, 1.0)})


def _cabello_homodyne(n: int) -> ScenarioSpec:
    return ScenarioSpec(
        "cabello-homodyne", n, "cabello",
        MeasSpec("spd", "eta_spd"), MeasSpec("homodyne", 1.0, 0.0),
        params={"eta_spd": ParamSpec.free(0.0, 1.0)})


def _cabello_displacement(n: int) -> ScenarioSpec:
    return ScenarioSpec(
        "cabello-displacement", n, "cabello",
        MeasSpec("spd", "eta_spd"), MeasSpec("displaced_response", "eta_spd", "alpha"),
        params={"eta_spd": ParamSpec.free(0.0, 1.0),
                "alpha": ParamSpec.free(0.01, 2.0)})


def _cabello_ad(n: int) -> ScenarioSpec:
    return ScenarioSpec(
        "cabello-ad", n, "cabello",
        MeasSpec("spd", "eta"), MeasSpec("ad_x", "eta", 0.0),
        params={"eta": ParamSpec.free(0.0, 1.0)})


def _wwwzb_homodyne(n: int) -> ScenarioSpec:
    return ScenarioSpec(
        "wwwzb-homodyne", n, "wwwzb",
        MeasSpec("spd", "eta_spd"), MeasSpec("homodyne", 1.0, 0.0),
        params={"eta_spd": ParamSpec.free(0.0, 1.0)})


def _atom_params(eta_atom: float, eta_c: float) -> dict:
    return {
        "eta_spd": ParamSpec.free(0.0, 1.0),
        "theta": ParamSpec.free(THETA_LO, THETA_HI),
        "eta_c": ParamSpec.fixed(eta_c),
        "eta_atom": ParamSpec.fixed(eta_atom),
        "a_polar_0": ParamSpec.free(0.0, TWO_PI),
        "a_polar_1": ParamSpec.free(0.0, TWO_PI),
    }


def _atom_homodyne(name: str, n: int, criterion: str, eta_atom: float,
                   eta_hom: float) -> ScenarioSpec:
    params = _atom_params(eta_atom, 1.0)
    params["eta_hom"] = ParamSpec.fixed(eta_hom)
    params["phi_x"] = ParamSpec.free(0.0, TWO_PI)
    return ScenarioSpec(
        name, n, criterion,
        MeasSpec("spd", "eta_spd"), MeasSpec("homodyne", "eta_hom", "phi_x"),
        atom=True, params=params)


def _atom_displacement(name: str, n: int, criterion: str,
                       eta_atom: float) -> ScenarioSpec:
    params = _atom_params(eta_atom, 1.0)
    params["alpha"] = ParamSpec.free(0.01, 2.0)
    return ScenarioSpec(
        name, n, criterion,
        MeasSpec("spd", "eta_spd"), MeasSpec("displaced_response", "eta_spd", "alpha"),
        atom=True, params=params)


def _fig3(n: int) -> ScenarioSpec:
    return _atom_homodyne("fig3", n, "wwwzb", eta_atom=1.0, eta_hom=1.0)


def _fig4_homodyne(n: int) -> ScenarioSpec:
    return _atom_homodyne("fig4-homodyne", n, "chsh", eta_atom=0.95, eta_hom=0.98)


def _fig4_displacement(n: int) -> ScenarioSpec:
    return _atom_displacement("fig4-displacement", n, "chsh", eta_atom=0.95)


def _chsh_homodyne(n: int) -> ScenarioSpec:
    spec = _atom_homodyne("chsh-homodyne", n, "chsh", eta_atom=1.0, eta_hom=1.0)
    return fix_parameter(spec, "eta_spd", 1.0)


def _chsh_displacement(n: int) -> ScenarioSpec:
    spec = _atom_displacement("chsh-displacement", n, "chsh", eta_atom=1.0)
    return fix_parameter(spec, "eta_spd", 1.0)


# Threshold brackets for the full-correlator and CHSH presets start strictly
# above zero: at eta = 0 the counter never clicks, the outcomes are
# deterministic, and those criteria sit exactly on their classical bound,
# where rounding noise would decide the bracket endpoint's verdict.
PRESETS = {
    "fig1": Preset(
        "single-excitation inequality region over z/x detector quality",
        3, _fig1, "eta_z", (0.0, 1.0),
        "eta_z", (0.5, 1.0), "eta_x", (0.5, 1.0)),
    "fig2": Preset(
        "full-correlator inequality region over z/x detector quality",
        3, _fig2, "eta_z", (0.1, 1.0),
        "eta_z", (0.5, 1.0), "eta_x", (0.5, 1.0)),
    "fig3": Preset(
        "atom-photon full-correlator thresholds, photon-counting + homodyne",
        2, _fig3, "eta_spd", (0.05, 1.0),
        "eta_c", (0.0, 1.0), "eta_spd", (0.05, 1.0)),
    "fig4-homodyne": Preset(
        "two-party CHSH with homodyne x-readout, lossy atom and coupling",
        2, _fig4_homodyne, "eta_spd", (0.05, 1.0),
        "eta_c", (0.0, 1.0), "eta_spd", (0.05, 1.0)),
    "fig4-displacement": Preset(
        "two-party CHSH with displaced-counter x-readout, lossy atom",
        2, _fig4_displacement, "eta_spd", (0.05, 1.0),
        "eta_c", (0.0, 1.0), "eta_spd", (0.05, 1.0)),
    "fig5": Preset(
        "exact locality region from the EPR2 linear program",
        3, _fig5, "eta_z", (0.0, 1.0),
        "eta_x", (0.5, 1.0), "eta_z", (0.0, 1.0)),
    "garbarino3": Preset(
        "locality region for loss-flagging three-outcome detectors",
        3, _garbarino3, "eta_x", (0.0, 1.0),
        "eta_z", (0.5, 1.0), "eta_x", (0.0, 1.0)),
    "cabello-homodyne": Preset(
        "critical counter efficiency, x basis via ideal homodyne",
        3, _cabello_homodyne, "eta_spd", (0.0, 1.0)),
    "cabello-displacement": Preset(
        "critical counter efficiency, x basis via displaced counting",
        3, _cabello_displacement, "eta_spd", (0.0, 1.0)),
    "cabello-ad": Preset(
        "critical shared efficiency for the amplitude-damping error model",
        3, _cabello_ad, "eta", (0.0, 1.0)),
    "wwwzb-homodyne": Preset(
        "critical counter efficiency for full-correlator inequalities",
        4, _wwwzb_homodyne, "eta_spd", (0.1, 1.0)),
    "chsh-homodyne": Preset(
        "ideal-device CHSH value for the homodyne scheme",
        2, _chsh_homodyne, "eta_spd", (0.05, 1.0),
        "eta_c", (0.0, 1.0), "eta_spd", (0.05, 1.0)),
    "chsh-displacement": Preset(
        "ideal-device CHSH value for the displacement scheme",
        2, _chsh_displacement, "eta_spd", (0.05, 1.0),
        "eta_c", (0.0, 1.0), "eta_spd", (0.05, 1.0)),
}


# ---------------------------------------------------------------------------
# Config files: flat "key = value" lines, '#' comments, unknown keys rejected.

_RUN_KEYS = {
    "command": str,
    "preset": str,
    "n": int,
    "grid": int,
    "jobs": int,
    "starts": int,
    "out": str,
    "param": str,
    "atol": float,
    "bracket_lo": float,
    "bracket_hi": float,
}

_SCENARIO_KEYS = {
    "scenario.name", "scenario.n_parties", "scenario.criterion",
    "scenario.atom", "scenario.lp_tol",
    "photon_z.family", "photon_z.eff", "photon_z.aux", "photon_z.flip",
    "photon_x.family", "photon_x.eff", "photon_x.aux", "photon_x.flip",
}


@dataclass
class RunConfig:
    """Validated contents of one config file."""

    options: dict = field(default_factory=dict)
    scenario_keys: dict = field(default_factory=dict)
    sets: dict = field(default_factory=dict)

    def scenario(self) -> Optional[ScenarioSpec]:
        if not self.scenario_keys:
            return None
        return _scenario_from_keys(self.scenario_keys)


def _parse_bool(raw: str, key: str) -> bool:
    if raw == "true":
        return True
    if raw == "false":
        return False
    raise UsageError(f"{key} expects true or false, got {raw!r}")


def _parse_float(raw: str, key: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"{key} expects a number, got {raw!r}") from None


def parse_config(text: str) -> RunConfig:
    cfg = RunConfig()
    seen = set()
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected key = value")
        key, _, raw = line.partition("=")
        key, raw = key.strip(), raw.strip()
        if key in seen:
            raise UsageError(f"config line {lineno}: duplicate key {key!r}")
        seen.add(key)
        if key in _RUN_KEYS:
            kind = _RUN_KEYS[key]
            if kind is float:
                cfg.options[key] = _parse_float(raw, key)
            elif kind is int:
                try:
                    cfg.options[key] = int(raw)
                except ValueError:
                    raise UsageError(f"{key} expects an integer") from None
            else:
                cfg.options[key] = raw
        elif key in _SCENARIO_KEYS or key.startswith("param."):
            cfg.scenario_keys[key] = raw
        elif key.startswith("set."):
            cfg.sets[key[len("set."):]] = _parse_float(raw, key)
        else:
            raise UsageError(f"config line {lineno}: unknown key {key!r}")
    return cfg


def _parse_meas_ref(raw: str):
    if raw.startswith("@"):
        return raw[1:]
    return _parse_float(raw, "measurement field")


def _check_efficiency_bounds(name: str, pspec: ParamSpec) -> None:
    if name.startswith("eta") and not (0.0 <= pspec.lo and pspec.hi <= 1.0):
        raise UsageError(f"efficiency {name!r} must stay within [0, 1]")


def _scenario_from_keys(keys: dict) -> ScenarioSpec:
    required = {"scenario.name", "scenario.n_parties", "scenario.criterion",
                "photon_z.family", "photon_z.eff",
                "photon_x.family", "photon_x.eff"}
    missing = required - set(keys)
    if missing:
        raise UsageError(f"config scenario is missing keys: {sorted(missing)}")

    def meas(prefix: str) -> MeasSpec:
        aux_raw = keys.get(f"{prefix}.aux")
        return MeasSpec(
            keys[f"{prefix}.family"],
            _parse_meas_ref(keys[f"{prefix}.eff"]),
            None if aux_raw is None else _parse_meas_ref(aux_raw),
            _parse_bool(keys.get(f"{prefix}.flip", "false"), f"{prefix}.flip"))

    params = {}
    for key, raw in keys.items():
        if not key.startswith("param."):
            continue
        name = key[len("param."):]
        tokens = raw.split()
        if len(tokens) != 3:
            raise UsageError(f"{key} expects 'lo hi value' or 'lo hi free'")
        lo = _parse_float(tokens[0], key)
        hi = _parse_float(tokens[1], key)
        value = None if tokens[2] == "free" else _parse_float(tokens[2], key)
        try:
            params[name] = ParamSpec(lo, hi, value)
        except ValueError as err:
            raise UsageError(f"{key}: {err}") from None
        _check_efficiency_bounds(name, params[name])

    try:
        n = int(keys["scenario.n_parties"])
    except ValueError:
        raise UsageError("scenario.n_parties expects an integer") from None
    try:
        return ScenarioSpec(
            keys["scenario.name"], n, keys["scenario.criterion"],
            meas("photon_z"), meas("photon_x"),
            atom=_parse_bool(keys.get("scenario.atom", "false"), "scenario.atom"),
            params=params,
            lp_tol=_parse_float(keys.get("scenario.lp_tol", "1e-8"),
                                "scenario.lp_tol"))
    except (ValueError, TypeError) as err:
        raise UsageError(str(err)) from None


def _dump_meas_ref(ref) -> str:
    if isinstance(ref, str):
        return "@" + ref
    return repr(float(ref))


def dump_scenario(spec: ScenarioSpec) -> str:
    """Config-file text that parses back to an equal ScenarioSpec."""
    lines = [
        f"scenario.name = {spec.name}",
        f"scenario.n_parties = {spec.n_parties}",
        f"scenario.criterion = {spec.criterion}",
        f"scenario.atom = {'true' if spec.atom else 'false'}",
        f"scenario.lp_tol = {spec.lp_tol!r}",
    ]
    for prefix, ms in (("photon_z", spec.photon_z), ("photon_x", spec.photon_x)):
        lines.append(f"{prefix}.family = {ms.family}")
        lines.append(f"{prefix}.eff = {_dump_meas_ref(ms.eff)}")
        if ms.aux is not None:
            lines.append(f"{prefix}.aux = {_dump_meas_ref(ms.aux)}")
        lines.append(f"{prefix}.flip = {'true' if ms.flip else 'false'}")
    for name in sorted(spec.params):
        p = spec.params[name]
        tail = "free" if p.value is None else repr(float(p.value))
        lines.append(f"param.{name} = {p.lo!r} {p.hi!r} {tail}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Argument parsing


def _add_scenario_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--preset", choices=sorted(PRESETS),
                     help="named scenario (see the module docstring)")
    sub.add_argument("--n", type=int, default=None,
                     help="party count, atom included when present")
    sub.add_argument("--config", default=None, metavar="FILE",
                     help="flat key=value config file")
    sub.add_argument("--set", action="append", default=[], metavar="NAME=VALUE",
                     help="pin one scenario parameter to a value")
    sub.add_argument("--dump-spec", action="store_true",
                     help="print the resolved scenario as config text and exit")
    sub.add_argument("--starts", type=int, default=None,
                     help="multi-start count for inner optimizations")
    sub.add_argument("--lp-tol", type=float, default=None,
                     help="nonlocal-content tolerance override")
    sub.add_argument("--out", default=None, metavar="FILE",
                     help="write output to FILE instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wbell",
        description="Bell violations and detection thresholds for "
                    "single-photon path-entangled states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_bell = sub.add_parser("bell", help="evaluate one Bell criterion")
    _add_scenario_flags(p_bell)
    p_bell.add_argument("--inequality",
                        choices=["cabello", "wwwzb", "mermin3", "chsh"],
                        help="build an explicit scenario instead of a preset")
    p_bell.add_argument("--state", choices=["w", "vacuum"], default="w",
                        help="source state for --inequality scenarios")
    p_bell.add_argument("--ideal", action="store_true",
                        help="force perfect detectors in --inequality scenarios")
    p_bell.add_argument("--eta-z", type=float, default=1.0,
                        help="z-detector efficiency for --inequality scenarios")
    p_bell.add_argument("--eta-x", type=float, default=1.0,
                        help="x-detector efficiency for --inequality scenarios")

    p_thr = sub.add_parser("threshold", help="bisect a critical efficiency")
    _add_scenario_flags(p_thr)
    p_thr.add_argument("--param", default=None,
                       help="parameter to bisect (preset default otherwise)")
    p_thr.add_argument("--bracket", type=float, nargs=2, default=None,
                       metavar=("LO", "HI"))
    p_thr.add_argument("--atol", type=float, default=None,
                       help="bisection width tolerance")

    p_reg = sub.add_parser("region", help="threshold curve over a grid (CSV)")
    _add_scenario_flags(p_reg)
    p_reg.add_argument("--x", dest="x_name", default=None,
                       help="grid parameter (preset default otherwise)")
    p_reg.add_argument("--y", dest="y_name", default=None,
                       help="bisected parameter (preset default otherwise)")
    p_reg.add_argument("--x-range", type=float, nargs=2, default=None,
                       metavar=("LO", "HI"))
    p_reg.add_argument("--bracket", type=float, nargs=2, default=None,
                       metavar=("LO", "HI"))
    p_reg.add_argument("--grid", type=int, default=None,
                       help="number of grid points")
    p_reg.add_argument("--atol", type=float, default=None)
    p_reg.add_argument("--jobs", type=int, default=None,
                       help="worker processes (or WBELL_JOBS)")

    p_con = sub.add_parser("content", help="EPR2 nonlocal content")
    _add_scenario_flags(p_con)
    p_con.add_argument("--dist-file", default=None, metavar="FILE",
                       help="read a serialized distribution instead")
    p_con.add_argument("--dump-dist", action="store_true",
                       help="print the distribution table instead of JSON")

    p_neg = sub.add_parser("negativity",
                           help="entanglement across the atom/photons cut")
    p_neg.add_argument("--theta", type=float, required=True,
                       help="superposition angle of the source state")
    p_neg.add_argument("--eta-c", type=float, default=1.0,
                       help="photon coupling efficiency")
    p_neg.add_argument("--n", type=int, default=2,
                       help="party count, atom included")
    p_neg.add_argument("--cut", type=int, default=0,
                       help="last party index on the left side of the cut")
    p_neg.add_argument("--out", default=None, metavar="FILE")

    return parser


# ---------------------------------------------------------------------------
# Scenario resolution


def _load_config(args) -> RunConfig:
    path = getattr(args, "config", None)
    if path is None:
        return RunConfig()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as err:
        raise UsageError(f"cannot read config file: {err}") from None
    cfg = parse_config(text)
    declared = cfg.options.get("command")
    if declared is not None and declared != args.command:
        raise UsageError(
            f"config is for command {declared!r}, invoked as {args.command!r}")
    return cfg


def _pick(flag_value, cfg: RunConfig, key: str, default):
    if flag_value is not None:
        return flag_value
    return cfg.options.get(key, default)


def _apply_sets(spec: ScenarioSpec, sets: dict) -> ScenarioSpec:
    for name, value in sets.items():
        if name not in spec.params:
            raise UsageError(f"scenario has no parameter {name!r}")
        pinned = ParamSpec.fixed(float(value))
        _check_efficiency_bounds(name, pinned)
        spec = fix_parameter(spec, name, float(value))
    return spec


def _parse_set_flags(pairs) -> dict:
    sets = {}
    for pair in pairs:
        name, sep, raw = pair.partition("=")
        if not sep or not name:
            raise UsageError(f"--set expects NAME=VALUE, got {pair!r}")
        sets[name.strip()] = _parse_float(raw.strip(), f"--set {name}")
    return sets


def _explicit_bell_scenario(args) -> ScenarioSpec:
    n = args.n if args.n is not None else (2 if args.inequality == "chsh" else 3)
    eta_z = 1.0 if args.ideal else args.eta_z
    eta_x = 1.0 if args.ideal else args.eta_x
    for label, value in (("--eta-z", eta_z), ("--eta-x", eta_x)):
        if not 0.0 <= value <= 1.0:
            raise UsageError(f"{label} must lie in [0, 1]")
    try:
        return ScenarioSpec(
            "custom", n, args.inequality,
            MeasSpec("spd", eta_z), MeasSpec("sym", eta_x), params={})
    except ValueError as err:
        raise UsageError(str(err)) from None


def _resolve_scenario(args, cfg: RunConfig) -> ScenarioSpec:
    preset_name = args.preset or cfg.options.get("preset")
    config_spec = cfg.scenario()
    if preset_name is not None and config_spec is not None:
        raise UsageError("give either a preset or explicit scenario keys")
    if preset_name is not None:
        preset = PRESETS.get(preset_name)
        if preset is None:
            raise UsageError(f"unknown preset {preset_name!r}")
        n = _pick(args.n, cfg, "n", preset.default_n)
        try:
            spec = preset.build(n)
        except ValueError as err:
            raise UsageError(str(err)) from None
    elif config_spec is not None:
        spec = config_spec
        n = _pick(args.n, cfg, "n", None)
        if n is not None and n != spec.n_parties:
            try:
                spec = replace(spec, n_parties=n)
            except ValueError as err:
                raise UsageError(str(err)) from None
    elif getattr(args, "inequality", None) is not None:
        spec = _explicit_bell_scenario(args)
    else:
        raise UsageError("no scenario given: pass --preset, --config, or "
                         "(for bell) --inequality")
    lp_tol = getattr(args, "lp_tol", None)
    if lp_tol is not None:
        spec = replace(spec, lp_tol=float(lp_tol))
    sets = dict(cfg.sets)
    sets.update(_parse_set_flags(getattr(args, "set", [])))
    return _apply_sets(spec, sets)


def _starts(args, cfg: RunConfig) -> int:
    value = _pick(getattr(args, "starts", None), cfg, "starts", DEFAULT_STARTS)
    if value < 1:
        raise UsageError("--starts must be at least 1")
    return value


def _jobs(args, cfg: RunConfig) -> int:
    value = _pick(getattr(args, "jobs", None), cfg, "jobs", None)
    if value is None:
        raw = os.environ.get("WBELL_JOBS", "1")
        try:
            value = int(raw)
        except ValueError:
            raise UsageError(f"WBELL_JOBS must be an integer, got {raw!r}") from None
    if value < 1:
        raise UsageError("worker count must be at least 1")
    return value


def _json_text(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Commands


def _cmd_bell(args, cfg: RunConfig) -> str:
    if args.state == "vacuum" and args.inequality is None:
        raise UsageError("--state vacuum needs an explicit --inequality scenario")
    spec = _resolve_scenario(args, cfg)
    if args.dump_spec:
        return dump_scenario(spec)
    if spec.criterion in ("lp2", "lp3"):
        raise UsageError("LP criteria are served by the content command")
    if args.inequality is not None:
        values = resolve_values(spec)
        state = (damped_w_state(spec.n_parties, 0.0) if args.state == "vacuum"
                 else w_state(spec.n_parties))
        p = joint_distribution(state, scenario_assignment(spec, values))
        result = criterion_result(spec.criterion, p)
        margin = result.value - result.local_bound
        params = values
        state_kind = args.state
    else:
        search = optimize_free_parameters(spec, n_starts=_starts(args, cfg))
        result = scenario_result(spec, search.params)
        margin = search.margin
        params = search.params
        state_kind = "atom-photon" if spec.atom else "w"
    return _json_text({
        "command": "bell",
        "scenario": spec.name,
        "criterion": spec.criterion,
        "n_parties": spec.n_parties,
        "state": state_kind,
        "value": result.value,
        "local_bound": result.local_bound,
        "algebraic_max": result.algebraic_max,
        "violated": result.violated,
        "margin": margin,
        "params": params,
    })


def _cmd_threshold(args, cfg: RunConfig) -> str:
    spec = _resolve_scenario(args, cfg)
    if args.dump_spec:
        return dump_scenario(spec)
    preset = PRESETS.get(args.preset or cfg.options.get("preset") or "")
    param = _pick(args.param, cfg, "param",
                  preset.threshold_param if preset else None)
    if param is None:
        raise UsageError("no parameter to bisect: pass --param")
    if args.bracket is not None:
        bracket = tuple(args.bracket)
    elif "bracket_lo" in cfg.options or "bracket_hi" in cfg.options:
        try:
            bracket = (cfg.options["bracket_lo"], cfg.options["bracket_hi"])
        except KeyError:
            raise UsageError("config needs both bracket_lo and bracket_hi") from None
    else:
        bracket = preset.threshold_bracket if preset else (0.0, 1.0)
    atol = _pick(args.atol, cfg, "atol", DEFAULT_ATOL)
    n_starts = _starts(args, cfg)
    threshold = critical_efficiency(spec, param, bracket, atol=atol,
                                    n_starts=n_starts)
    at_threshold = optimize_free_parameters(fix_parameter(spec, param, threshold),
                                            n_starts=n_starts)
    return _json_text({
        "command": "threshold",
        "scenario": spec.name,
        "criterion": spec.criterion,
        "n_parties": spec.n_parties,
        "param": param,
        "bracket": [bracket[0], bracket[1]],
        "atol": atol,
        "threshold": threshold,
        "margin_at_threshold": at_threshold.margin,
        "params_at_threshold": at_threshold.params,
    })


def _cmd_region(args, cfg: RunConfig) -> str:
    spec = _resolve_scenario(args, cfg)
    if args.dump_spec:
        return dump_scenario(spec)
    preset = PRESETS.get(args.preset or cfg.options.get("preset") or "")
    x_name = args.x_name or (preset.region_x if preset else None)
    y_name = args.y_name or (preset.region_y if preset else None)
    if x_name is None or y_name is None:
        raise UsageError("region needs --x and --y (preset has no defaults)")
    if args.x_range is not None:
        x_range = tuple(args.x_range)
    else:
        x_range = preset.region_x_range if preset and preset.region_x == x_name \
            else None
    if x_range is None:
        raise UsageError("region needs --x-range for this parameter")
    if args.bracket is not None:
        bracket = tuple(args.bracket)
    else:
        bracket = preset.region_y_bracket if preset and preset.region_y == y_name \
            else (0.0, 1.0)
    grid = _pick(args.grid, cfg, "grid", DEFAULT_GRID)
    if grid < 2:
        raise UsageError("--grid must be at least 2")
    atol = _pick(args.atol, cfg, "atol", DEFAULT_ATOL)
    curve = region_boundary(
        spec, x_name, y_name,
        np.linspace(x_range[0], x_range[1], grid), bracket,
        atol=atol, n_starts=_starts(args, cfg), jobs=_jobs(args, cfg))
    return curve.to_csv()


def _cmd_content(args, cfg: RunConfig) -> str:
    if args.dist_file is not None:
        if args.preset or args.config or args.set:
            raise UsageError("--dist-file replaces the scenario flags")
        try:
            with open(args.dist_file, "r", encoding="utf-8") as handle:
                p = JointDistribution.from_text(handle.read())
        except OSError as err:
            raise UsageError(f"cannot read distribution file: {err}") from None
        if args.dump_dist:
            return p.to_text()
        r = nonlocal_content(p)
        return _json_text({
            "command": "content",
            "source": args.dist_file,
            "n_parties": p.n_parties,
            "n_outcomes": p.n_outcomes,
            "local_weight": r.local_weight,
            "nonlocal_content": r.nonlocal_content,
        })
    spec = _resolve_scenario(args, cfg)
    if args.dump_spec:
        return dump_scenario(spec)
    if spec.criterion not in ("lp2", "lp3"):
        raise UsageError("content needs an lp2 or lp3 scenario")
    search = optimize_free_parameters(spec, n_starts=_starts(args, cfg))
    if args.dump_dist:
        return scenario_distribution(spec, search.params).to_text()
    r = scenario_result(spec, search.params)
    assert isinstance(r, ContentResult)
    return _json_text({
        "command": "content",
        "scenario": spec.name,
        "criterion": spec.criterion,
        "n_parties": spec.n_parties,
        "local_weight": r.local_weight,
        "nonlocal_content": r.nonlocal_content,
        "params": search.params,
    })


def _cmd_negativity(args) -> str:
    if args.n < 2:
        raise UsageError("negativity needs at least two parties")
    if not 0.0 <= args.eta_c <= 1.0:
        raise UsageError("--eta-c must lie in [0, 1]")
    state = atom_photon_state(args.theta, args.eta_c, args.n - 1)
    try:
        value = negativity(state.rho, args.cut)
    except ValueError as err:
        raise UsageError(str(err)) from None
    return _json_text({
        "command": "negativity",
        "n_parties": args.n,
        "theta": args.theta,
        "eta_c": args.eta_c,
        "cut": args.cut,
        "negativity": value,
    })


def _emit(text: str, out_path: Optional[str]) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)


def dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        if args.command == "bell":
            text = _cmd_bell(args, _load_config(args))
        elif args.command == "threshold":
            text = _cmd_threshold(args, _load_config(args))
        elif args.command == "region":
            text = _cmd_region(args, _load_config(args))
        elif args.command == "content":
            text = _cmd_content(args, _load_config(args))
        else:
            text = _cmd_negativity(args)
        _emit(text, getattr(args, "out", None))
    except UsageError as err:
        print(f"wbell: error: {err}", file=sys.stderr)
        return 1
    except (BracketError, LPError) as err:
        print(f"wbell: numerical failure: {err}", file=sys.stderr)
        return 2
    except (KeyError, ValueError, TypeError, OSError) as err:
        print(f"wbell: error: {err}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
