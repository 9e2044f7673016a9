"""One-fluid (electrons over a neutralizing ion background) time updates."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from ._stepping import apply_floor, divergence, faraday, relation_for, species_data
from .boundary import BoundaryConditionSpec
from .flux import cfl_timestep
from .model import EMField, FluidState, Grid1D, SchemeConfig, face_average
from .tridiag import assemble_ey_system, solve_ey_elliptic

EY_DEFAULT = "direct"
EY_HISTORY = "history"


@dataclass
class OneFluidSnapshot:
    fluid: FluidState
    em: EMField
    grid: Grid1D
    t: float = 0.0
    m: int = 0
    ey_prev: Optional[np.ndarray] = None
    floor_events: int = 0

    def __post_init__(self):
        if self.fluid.n_cells != self.grid.n_cells or self.em.Ey.size != self.grid.n_cells:
            raise ValueError("snapshot arrays do not match the grid")

    def copy(self) -> "OneFluidSnapshot":
        return replace(self, fluid=self.fluid.copy(), em=self.em.copy(),
                       ey_prev=None if self.ey_prev is None else self.ey_prev.copy())


def init_ex_from_gauss(fluid: FluidState, lam: float, h: float, anchor: float = 0.0,
                       background=1.0) -> np.ndarray:
    """Integrate the discrete Gauss law from the left boundary value ``anchor``."""
    n = fluid.n if isinstance(fluid, FluidState) else np.asarray(fluid, dtype=float)
    charge = background - n
    return _integrate_gauss(charge, lam, h, anchor)


def _integrate_gauss(charge: np.ndarray, lam: float, h: float, anchor: float) -> np.ndarray:
    ex = np.empty(charge.size + 1)
    ex[0] = anchor
    if lam == 0:
        if np.max(np.abs(charge)) > 1e-14:
            raise ValueError("lambda = 0 requires neutral initial data")
        ex[1:] = anchor
        return ex
    ex[1:] = anchor + h / lam**2 * np.cumsum(charge)
    return ex


def stable_timestep(snap: OneFluidSnapshot, config: SchemeConfig, bc: BoundaryConditionSpec) -> float:
    sd = species_data(snap.fluid, config.pressure, bc)
    return cfl_timestep(sd.mu, snap.grid.h, config.cfl, config.lam, "ap" if config.is_ap else "classical")


def step_classical(snap: OneFluidSnapshot, delta: float, config: SchemeConfig,
                   bc: BoundaryConditionSpec) -> OneFluidSnapshot:
    lam = config.lam
    if lam <= 0:
        raise ValueError("the classical scheme needs lambda > 0")
    h = snap.grid.h
    sd = species_data(snap.fluid, config.pressure, bc)
    fn, fux, fuy = sd.face(sd.fn), sd.face(sd.fux), sd.face(sd.fuy)
    n, qx, qy = sd.nc, sd.qxc, sd.qyc
    em = snap.em
    t_new = snap.t + delta

    n_new = n - delta * divergence(fn, h)
    rel = relation_for(bc, lam, t_new, delta, h, em.Bz)
    bz_new = faraday(em.Bz, em.Ey, rel, delta, h)
    ex_new = em.Ex + delta / lam**2 * fn
    ey_new = em.Ey + delta / lam**2 * (qy - divergence(bz_new, h))

    ex_c = face_average(ex_new)
    bz_c = face_average(em.Bz)
    qx_new = qx - delta * divergence(fux, h) - delta * (n_new * ex_c + qy * bz_c)
    qy_new = qy - delta * divergence(fuy, h) - delta * (n_new * ey_new - qx * bz_c)

    clipped = apply_floor(n_new, qx_new, qy_new)
    return OneFluidSnapshot(FluidState(n_new, qx_new, qy_new), EMField(ex_new, bz_new, ey_new), snap.grid,
                            t_new, snap.m + 1, em.Ey.copy(), snap.floor_events + clipped)


def _ey_rhs(snap, sd, delta, h, lam, variant):
    em = snap.em
    qx, qy = sd.qxc, sd.qyc
    bz_c = face_average(em.Bz)
    common = -delta**2 * divergence(sd.face(sd.fuy), h) + delta**2 * qx * bz_c
    if variant == EY_HISTORY and snap.ey_prev is not None:
        return lam**2 * (2.0 * em.Ey - snap.ey_prev) + common
    if variant not in (EY_DEFAULT, EY_HISTORY):
        raise ValueError(f"unknown Ey variant {variant!r}")
    return lam**2 * em.Ey + delta * qy - delta * divergence(em.Bz, h) + common


def ap_ex_update(ex, fn, fux_right, fux_left, n_left, n_right, qy_left, qy_right, bz, lam, delta, h):
    """Closed-form implicit ``Ex`` at every interface."""
    num = (lam**2 * ex + delta * fn
           - 0.5 * delta**2 / h * (fux_right - fux_left)
           - 0.5 * delta**2 * (qy_left + qy_right) * bz)
    return num / (lam**2 + 0.5 * delta**2 * (n_left + n_right))


def step_ap(snap: OneFluidSnapshot, delta: float, config: SchemeConfig, bc: BoundaryConditionSpec,
            ey_variant: str = EY_DEFAULT) -> OneFluidSnapshot:
    lam = config.lam
    h = snap.grid.h
    sd = species_data(snap.fluid, config.pressure, bc)
    n, qx, qy = sd.nc, sd.qxc, sd.qyc
    em = snap.em
    t_new = snap.t + delta

    # transverse field
    rel = relation_for(bc, lam, t_new, delta, h, em.Bz)
    system = assemble_ey_system(lam**2 + delta**2 * n, _ey_rhs(snap, sd, delta, h, lam, ey_variant),
                                delta, h, rel)
    ey_new = solve_ey_elliptic(system)

    # longitudinal field
    fux_r, fux_l = sd.fux_shifted()
    nL, nR = sd.left_right(sd.n)
    qyL, qyR = sd.left_right(sd.qy)
    ex_new = ap_ex_update(em.Ex, sd.face(sd.fn), fux_r, fux_l, nL, nR, qyL, qyR, em.Bz, lam, delta, h)

    bz_new = faraday(em.Bz, ey_new, rel, delta, h)

    ex_c = face_average(ex_new)
    bz_c = face_average(em.Bz)
    qx_new = qx - delta * divergence(sd.face(sd.fux), h) - delta * (n * ex_c + qy * bz_c)
    qy_new = qy - delta * divergence(sd.face(sd.fuy), h) - delta * (n * ey_new - qx * bz_c)

    # implicit mass flux recovered from the Ampere update keeps Gauss exact
    f_impl = lam**2 * (ex_new - em.Ex) / delta
    n_new = n - delta * divergence(f_impl, h)

    clipped = apply_floor(n_new, qx_new, qy_new)
    return OneFluidSnapshot(FluidState(n_new, qx_new, qy_new), EMField(ex_new, bz_new, ey_new), snap.grid,
                            t_new, snap.m + 1, em.Ey.copy(), snap.floor_events + clipped)


def step(snap: OneFluidSnapshot, delta: float, config: SchemeConfig, bc: BoundaryConditionSpec, **kw):
    if config.is_ap:
        return step_ap(snap, delta, config, bc, **kw)
    return step_classical(snap, delta, config, bc)
