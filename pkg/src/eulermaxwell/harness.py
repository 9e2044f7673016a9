"""Experiment definitions, run orchestration, error norms and output files."""
from __future__ import annotations

import csv
import json
import math
import os
import time
from dataclasses import dataclass, field, fields, replace
from typing import Optional, Sequence

import numpy as np

from . import onefluid, twofluid
from .boundary import (NEUMANN, PERIODIC, SILVER_MULLER, ZERO_FIELD, BoundaryConditionSpec, IncidentWave)
from .kernels import backend_name
from .model import (CARBON_ION_MASS, DENSITY_FLOOR, ELECTRON_MASS, EMField, FluidState, Grid1D, PressureLaw,
                    SchemeConfig, compute_scaling, face_average, gauss_residual)

CASES = ("shock", "rarefaction", "shock-magnetized", "smooth", "pos-low", "pos-high")
POS_DENSITY = {"pos-low": 1e16, "pos-high": 1e18}


class ConfigError(ValueError):
    pass


class NumericalFailure(RuntimeError):
    pass


class StepBudgetError(ConfigError):
    def __init__(self, estimated_steps: int, max_steps: int):
        super().__init__(f"run needs about {estimated_steps} steps, above the budget of {max_steps}; "
                         "use the AP scheme, a coarser time target, or raise max_steps")
        self.estimated_steps = estimated_steps


@dataclass
class ExperimentConfig:
    case: str = "shock"
    fluids: int = 1
    scheme: str = "ap"
    lam: Optional[float] = None
    n_cells: int = 200
    cfl: float = 0.5
    t_end: Optional[float] = None
    x_min: Optional[float] = None
    x_max: Optional[float] = None
    bz0: Optional[float] = None
    fluid_bc: Optional[str] = None
    em_bc: Optional[str] = None
    eps2: Optional[float] = None
    pressure: str = "isothermal"
    temperature: float = 1.0
    poly_c: float = 1.0
    poly_gamma: float = 5.0 / 3.0
    amplitude: float = 0.1  # smooth case velocity perturbation
    # plasma opening switch inputs (SI, eV)
    x0: float = 0.1
    T0_ev: float = 5.0
    incident_field: float = -1.8e8
    rise_time_s: float = 1e-8
    t_end_s: float = 2.5e-9
    ramp_fraction: float = 0.05
    # time-step policy
    dt: Optional[float] = None
    dt_maxwell_multiple: Optional[float] = None
    max_steps: int = 2_000_000
    snapshot_times: tuple = ()
    ey_variant: str = "direct"
    electron_viscosity: str = "scaled"
    output_dir: Optional[str] = None
    name: Optional[str] = None

    def __post_init__(self):
        if self.case not in CASES:
            raise ConfigError(f"unknown case {self.case!r}; choose from {CASES}")
        if self.fluids not in (1, 2):
            raise ConfigError("fluids must be 1 or 2")
        if self.scheme not in ("ap", "classical"):
            raise ConfigError("scheme must be 'ap' or 'classical'")
        if self.n_cells < 2:
            raise ConfigError("n_cells must be at least 2")
        if self.lam is not None and self.lam < 0:
            raise ConfigError("lambda must be nonnegative")
        if self.scheme == "classical" and self.lam == 0:
            raise ConfigError("the classical scheme needs lambda > 0")
        self.snapshot_times = tuple(float(t) for t in self.snapshot_times)

    @property
    def is_pos(self) -> bool:
        return self.case.startswith("pos")

    def with_(self, **kw) -> "ExperimentConfig":
        return replace(self, **kw)


@dataclass
class Setup:
    grid: Grid1D
    scheme: SchemeConfig
    bc: BoundaryConditionSpec
    snapshot: object
    t_end: float
    background: object = 1.0
    scaling: object = None


@dataclass
class RunResult:
    config: ExperimentConfig
    final: object
    snapshots: dict
    gauss_drift: np.ndarray
    wall_time: float
    steps: int
    setup: Setup = None
    flags: list = field(default_factory=list)

    @property
    def gauss_drift_max(self) -> float:
        return float(np.max(self.gauss_drift)) if self.gauss_drift.size else 0.0


# --------------------------------------------------------------------------
# initial data

def raised_cosine_profile(x, left, right, ramp, floor=DENSITY_FLOOR):
    """1 inside ``[left + ramp, right - ramp]``, ``floor`` outside ``[left, right]``, cosine ramps between."""
    x = np.asarray(x, dtype=float)
    prof = np.full(x.shape, floor)
    inside = (x >= left) & (x <= right)
    s = np.ones(x.shape)
    if ramp > 0:
        s = np.minimum(s, np.clip((x - left) / ramp, 0.0, 1.0))
        s = np.minimum(s, np.clip((right - x) / ramp, 0.0, 1.0))
    rc = 0.5 * (1.0 - np.cos(np.pi * s))
    prof[inside] = floor + (1.0 - floor) * rc[inside]
    return prof


def _pressure_law(cfg: ExperimentConfig) -> PressureLaw:
    if cfg.pressure == "isothermal":
        return PressureLaw.isothermal(cfg.temperature)
    if cfg.pressure == "polytropic":
        return PressureLaw.polytropic(cfg.poly_c, cfg.poly_gamma)
    raise ConfigError("pressure must be 'isothermal' or 'polytropic'")


def build_setup(cfg: ExperimentConfig) -> Setup:
    law = _pressure_law(cfg)
    case = cfg.case
    defaults = {
        "shock": dict(x=(-0.1, 0.1), bz=0.0, fbc=NEUMANN, ebc=ZERO_FIELD, t=5e-4),
        "rarefaction": dict(x=(-0.1, 0.1), bz=0.0, fbc=NEUMANN, ebc=ZERO_FIELD, t=2e-4),
        "shock-magnetized": dict(x=(-0.2, 0.2), bz=0.2, fbc=NEUMANN, ebc=SILVER_MULLER, t=5e-4),
        "smooth": dict(x=(-0.1, 0.1), bz=0.0, fbc=PERIODIC, ebc=PERIODIC, t=2e-2),
        "pos-low": dict(x=(-1.0, 1.0), bz=0.0, fbc=NEUMANN, ebc=SILVER_MULLER, t=None),
        "pos-high": dict(x=(-1.0, 1.0), bz=0.0, fbc=NEUMANN, ebc=SILVER_MULLER, t=None),
    }[case]
    x_min = cfg.x_min if cfg.x_min is not None else defaults["x"][0]
    x_max = cfg.x_max if cfg.x_max is not None else defaults["x"][1]
    grid = Grid1D(x_min, x_max, cfg.n_cells)
    bz0 = cfg.bz0 if cfg.bz0 is not None else defaults["bz"]
    fbc = cfg.fluid_bc or defaults["fbc"]
    ebc = cfg.em_bc or defaults["ebc"]
    x = grid.centers
    N = cfg.n_cells
    scaling = None
    incident = None
    background = 1.0
    eps2 = cfg.eps2 if cfg.eps2 is not None else 1e-4

    if cfg.is_pos:
        mass = CARBON_ION_MASS if cfg.fluids == 2 else ELECTRON_MASS
        scaling = compute_scaling(cfg.x0, POS_DENSITY[case], cfg.T0_ev, mass)
        lam = cfg.lam if cfg.lam is not None else scaling.lam
        if cfg.fluids == 2 and cfg.eps2 is None:
            eps2 = ELECTRON_MASS / CARBON_ION_MASS
        t_end = cfg.t_end if cfg.t_end is not None else cfg.t_end_s / scaling.t0
        incident = IncidentWave(cfg.incident_field / scaling.E0, cfg.rise_time_s / scaling.t0)
        half = 0.25 * (x_max - x_min)
        centre = 0.5 * (x_min + x_max)
        n0 = raised_cosine_profile(x, centre - half, centre + half, cfg.ramp_fraction * 2 * half)
        ux0 = np.zeros(N)
        background = n0.copy() if cfg.fluids == 1 else 1.0
    else:
        lam = cfg.lam if cfg.lam is not None else 1.0
        t_end = cfg.t_end if cfg.t_end is not None else defaults["t"]
        n0 = np.ones(N)
        if case == "smooth":
            ux0 = cfg.amplitude * np.sin(2.0 * np.pi * (x - x_min) / (x_max - x_min))
        elif case == "rarefaction":
            ux0 = np.where(x < 0, -100.0, 100.0)
        else:
            ux0 = np.where(x < 0, 1.0, -1.0)

    try:
        scheme = (SchemeConfig.ap if cfg.scheme == "ap" else SchemeConfig.classical)(
            lam, eps2=eps2, pressure=law, cfl=cfg.cfl)
        bc = BoundaryConditionSpec(fbc, ebc, incident, bz0 if ebc == SILVER_MULLER else 0.0)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    Bz = np.full(N + 1, float(bz0))
    if cfg.fluids == 1:
        fluid = FluidState(n0, n0 * ux0, np.zeros(N))
        ex = onefluid.init_ex_from_gauss(fluid, lam, grid.h, background=background)
        snap = onefluid.OneFluidSnapshot(fluid, EMField(ex, Bz, np.zeros(N)), grid)
    else:
        electron = FluidState(n0, n0 * ux0, np.zeros(N))
        ion = FluidState(n0.copy(), np.zeros(N), np.zeros(N))
        ex = twofluid.init_ex_from_gauss_2f(ion, electron, lam, grid.h)
        snap = twofluid.TwoFluidSnapshot(ion, electron, EMField(ex, Bz, np.zeros(N)), grid)
    return Setup(grid, scheme, bc, snap, float(t_end), background, scaling)


# --------------------------------------------------------------------------
# stepping

def _residual(snap, lam, h, background):
    if isinstance(snap, onefluid.OneFluidSnapshot):
        return gauss_residual(snap.fluid, snap.em, lam, h, background)
    return gauss_residual((snap.ion, snap.electron), snap.em, lam, h)


def _fields(snap):
    if isinstance(snap, onefluid.OneFluidSnapshot):
        arrays = (snap.fluid.n, snap.fluid.qx, snap.fluid.qy)
    else:
        arrays = (snap.ion.n, snap.ion.qx, snap.ion.qy, snap.electron.n, snap.electron.qx, snap.electron.qy)
    return arrays + (snap.em.Ex, snap.em.Ey, snap.em.Bz)


def _all_finite(snap) -> bool:
    return all(np.all(np.isfinite(a)) for a in _fields(snap))


def choose_timestep(snap, setup: Setup, cfg: ExperimentConfig) -> float:
    if cfg.dt is not None:
        return float(cfg.dt)
    if isinstance(snap, onefluid.OneFluidSnapshot):
        hydro_ap = onefluid.stable_timestep(snap, setup.scheme.with_(a=1, b=1, c=1), setup.bc)
        own = onefluid.stable_timestep(snap, setup.scheme, setup.bc)
    else:
        hydro_ap = twofluid.stable_timestep(snap, setup.scheme.with_(a=1, b=1, c=1), setup.bc)
        own = twofluid.stable_timestep(snap, setup.scheme, setup.bc)
    if cfg.dt_maxwell_multiple is not None:
        lam = setup.scheme.lam
        if lam <= 0:
            raise ConfigError("a Maxwell-step multiple needs lambda > 0")
        maxwell = setup.scheme.cfl * setup.grid.h * lam
        return min(cfg.dt_maxwell_multiple * maxwell, hydro_ap)
    return own


def run_experiment(cfg: ExperimentConfig, setup: Optional[Setup] = None, record_drift: bool = True) -> RunResult:
    setup = setup or build_setup(cfg)
    snap = setup.snapshot
    lam, h = setup.scheme.lam, setup.grid.h
    stepper = onefluid.step if isinstance(snap, onefluid.OneFluidSnapshot) else twofluid.step_2f
    kw = {"ey_variant": cfg.ey_variant}
    if not isinstance(snap, onefluid.OneFluidSnapshot):
        kw["electron_viscosity"] = cfg.electron_viscosity

    d0 = choose_timestep(snap, setup, cfg)
    estimate = int(math.ceil(setup.t_end / d0))
    if estimate > cfg.max_steps:
        raise StepBudgetError(estimate, cfg.max_steps)

    targets = sorted({t for t in cfg.snapshot_times if 0 < t < setup.t_end} | {setup.t_end})
    snapshots = {}
    r0 = _residual(snap, lam, h, setup.background)
    drift = []
    steps = 0
    start = time.perf_counter()
    for target in targets:
        while snap.t < target and not math.isclose(snap.t, target, rel_tol=1e-13, abs_tol=1e-300):
            d = choose_timestep(snap, setup, cfg)
            if not (d > 0 and math.isfinite(d)):
                raise NumericalFailure(f"invalid time step {d} at t={snap.t}")
            d = min(d, target - snap.t)
            snap = stepper(snap, d, setup.scheme, setup.bc, **kw)
            steps += 1
            if steps > cfg.max_steps:
                raise StepBudgetError(steps, cfg.max_steps)
            if record_drift:
                drift.append(float(np.max(np.abs(_residual(snap, lam, h, setup.background) - r0))))
            if steps % 64 == 0 and not _all_finite(snap):
                raise NumericalFailure(f"non-finite values at step {steps}, t={snap.t}")
        snapshots[target] = snap
    wall = time.perf_counter() - start
    if not _all_finite(snap):
        raise NumericalFailure(f"non-finite values at the final time t={snap.t}")
    flags = []
    if snap.floor_events:
        flags.append(f"density floor applied {snap.floor_events} times")
    if setup.bc.em == SILVER_MULLER and lam == 0:
        flags.append("lambda0-robin-closure")
    return RunResult(cfg, snap, snapshots, np.asarray(drift), wall, steps, setup, flags)


# --------------------------------------------------------------------------
# errors and convergence

def l1_relative_error(numerical, reference) -> float:
    """``sum |num - ref| / sum |ref|`` (the uniform cell width cancels)."""
    num = np.asarray(numerical, dtype=float)
    ref = np.asarray(reference, dtype=float)
    if num.shape != ref.shape:
        raise ValueError("fields must have equal lengths")
    denom = np.sum(np.abs(ref))
    if denom == 0:
        raise ValueError("reference field has zero norm")
    return float(np.sum(np.abs(num - ref)) / denom)


def max_l1_relative_error(pairs) -> float:
    """Largest relative L1 error over a sequence of ``(numerical, reference)`` snapshots."""
    return max(l1_relative_error(a, b) for a, b in pairs)


def restrict_fine_to_coarse(fine, ratio: int) -> np.ndarray:
    fine = np.asarray(fine, dtype=float)
    if ratio < 1 or fine.size % ratio:
        raise ValueError("fine length must be divisible by the ratio")
    return fine.reshape(-1, ratio).mean(axis=1)


def fit_slope(h, errors) -> float:
    h = np.asarray(h, dtype=float)
    e = np.asarray(errors, dtype=float)
    if h.size < 2:
        raise ValueError("need at least two resolutions")
    return float(np.polyfit(np.log(h), np.log(e), 1)[0])


def field_array(snap, name: str) -> np.ndarray:
    """Cell-centred field by output column name."""
    return dict(zip(column_names(snap), cell_table(snap)))[name]


@dataclass
class ConvergenceResult:
    resolutions: list
    h: list
    errors: dict
    slopes: dict
    reference_cells: int


def convergence_study(template: ExperimentConfig, resolutions: Sequence[int], reference: int,
                      fields_: Sequence[str] = ("n", "qx"), reference_scheme: str = "classical") -> ConvergenceResult:
    resolutions = sorted(int(r) for r in resolutions)
    if len(resolutions) < 2:
        raise ValueError("need at least two resolutions")
    for r in resolutions:
        if reference % r:
            raise ValueError(f"reference resolution {reference} is not a multiple of {r}")
    ref = run_experiment(template.with_(n_cells=reference, scheme=reference_scheme), record_drift=False)
    ref_snaps = ref.snapshots
    errors = {f: [] for f in fields_}
    hs = []
    for r in resolutions:
        run = run_experiment(template.with_(n_cells=r), record_drift=False)
        hs.append(run.setup.grid.h)
        for f in fields_:
            pairs = [(field_array(run.snapshots[t], f), restrict_fine_to_coarse(field_array(ref_snaps[t], f), reference // r))
                     for t in run.snapshots]
            errors[f].append(max_l1_relative_error(pairs))
    slopes = {f: fit_slope(hs, errors[f]) for f in fields_}
    return ConvergenceResult(resolutions, hs, errors, slopes, reference)


# --------------------------------------------------------------------------
# output

ONE_FLUID_COLUMNS = ("x", "n", "qx", "qy", "Ex", "Ey", "Bz")
TWO_FLUID_COLUMNS = ("x", "ni", "qix", "qiy", "ne", "qex", "qey", "Ex", "Ey", "Bz")


def column_names(snap):
    return ONE_FLUID_COLUMNS if isinstance(snap, onefluid.OneFluidSnapshot) else TWO_FLUID_COLUMNS


def cell_table(snap) -> list:
    em = snap.em
    tail = [face_average(em.Ex), em.Ey, face_average(em.Bz)]
    if isinstance(snap, onefluid.OneFluidSnapshot):
        body = [snap.fluid.n, snap.fluid.qx, snap.fluid.qy]
    else:
        body = [snap.ion.n, snap.ion.qx, snap.ion.qy, snap.electron.n, snap.electron.qx, snap.electron.qy]
    return [snap.grid.centers] + body + tail


def write_snapshot_csv(snap, path) -> None:
    cols = cell_table(snap)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(column_names(snap))
        for row in zip(*cols):
            w.writerow(["%.17g" % v for v in row])


def read_snapshot_csv(path) -> dict:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    data = np.array([[float(v) for v in r] for r in body]) if body else np.empty((0, len(header)))
    return {name: data[:, i] for i, name in enumerate(header)}


def _jsonable(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, tuple):
        return list(value)
    return value


def summary_dict(result: RunResult, extra: Optional[dict] = None) -> dict:
    cfg = {f.name: _jsonable(getattr(result.config, f.name)) for f in fields(result.config)}
    out = {
        "config": cfg,
        "lambda": result.setup.scheme.lam if result.setup else None,
        "t_final": result.final.t,
        "steps": result.steps,
        "gauss_drift": result.gauss_drift_max,
        "wall_clock_seconds": result.wall_time,
        "backend": backend_name(),
        "flags": result.flags,
    }
    if extra:
        out.update(extra)
    return out


def emit_outputs(result: RunResult, out_dir, extra: Optional[dict] = None) -> list:
    """Write one CSV per recorded snapshot and a ``summary.json``; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    stem = result.config.name or f"{result.config.case}-{result.config.scheme}-{result.config.fluids}f"
    paths = []
    for i, (t, snap) in enumerate(sorted(result.snapshots.items())):
        p = os.path.join(out_dir, f"{stem}-{i:03d}.csv")
        write_snapshot_csv(snap, p)
        paths.append(p)
    p = os.path.join(out_dir, "summary.json")
    summary = summary_dict(result, extra)
    summary["snapshots"] = {os.path.basename(q): t for q, t in zip(paths, sorted(result.snapshots))}
    with open(p, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
    paths.append(p)
    return paths


# --------------------------------------------------------------------------
# config files

def _coerce(name: str, raw: str):
    kinds = {f.name: f.type for f in fields(ExperimentConfig)}
    if name not in kinds:
        raise ConfigError(f"unknown config key {name!r}")
    raw = raw.strip()
    if name == "snapshot_times":
        return tuple(float(v) for v in raw.replace(",", " ").split()) if raw else ()
    if raw.lower() in ("none", ""):
        return None
    t = str(kinds[name])
    try:
        if "int" in t and "float" not in t:
            return int(raw)
        if "float" in t:
            return float(raw)
    except ValueError:
        raise ConfigError(f"bad value for {name}: {raw!r}") from None
    return raw


def parse_config_text(text: str) -> ExperimentConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        values[key] = _coerce(key, val)
    return ExperimentConfig(**values)


def load_config(path) -> ExperimentConfig:
    with open(path) as fh:
        return parse_config_text(fh.read())
