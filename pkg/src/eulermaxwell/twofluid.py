"""Ion + electron time updates.

Electron momenta are stored as ``n_e u_e``; the mass ratio ``eps2`` enters only
as a coefficient of the update formulas.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from ._stepping import apply_floor, divergence, faraday, relation_for, species_data
from .boundary import BoundaryConditionSpec
from .flux import ION, cfl_timestep, implicit_mass_flux_twofluid
from .model import EMField, FluidState, Grid1D, SchemeConfig, face_average
from .onefluid import EY_DEFAULT, EY_HISTORY, _integrate_gauss
from .tridiag import assemble_ey_system, solve_ey_elliptic

SCALED = "scaled"
LITERAL = "literal"


@dataclass
class TwoFluidSnapshot:
    ion: FluidState
    electron: FluidState
    em: EMField
    grid: Grid1D
    t: float = 0.0
    m: int = 0
    ey_prev: Optional[np.ndarray] = None
    floor_events: int = 0

    def __post_init__(self):
        N = self.grid.n_cells
        if self.ion.n_cells != N or self.electron.n_cells != N or self.em.Ey.size != N:
            raise ValueError("snapshot arrays do not match the grid")

    def copy(self) -> "TwoFluidSnapshot":
        return replace(self, ion=self.ion.copy(), electron=self.electron.copy(), em=self.em.copy(),
                       ey_prev=None if self.ey_prev is None else self.ey_prev.copy())


def init_ex_from_gauss_2f(ion: FluidState, electron: FluidState, lam: float, h: float,
                          anchor: float = 0.0) -> np.ndarray:
    return _integrate_gauss(ion.n - electron.n, lam, h, anchor)


def _species(snap, config, bc, electron_viscosity):
    eps2 = config.eps2
    if electron_viscosity not in (SCALED, LITERAL):
        raise ValueError("electron_viscosity must be 'scaled' or 'literal'")
    si = species_data(snap.ion, config.pressure, bc)
    se = species_data(snap.electron, config.pressure, bc, inertia=eps2,
                      mom_visc_scale=eps2 if electron_viscosity == SCALED else 1.0)
    return si, se


def stable_timestep(snap: TwoFluidSnapshot, config: SchemeConfig, bc: BoundaryConditionSpec) -> float:
    si, se = _species(snap, config, bc, SCALED)
    mu = max(np.max(si.mu), np.max(se.mu))
    return cfl_timestep(mu, snap.grid.h, config.cfl, config.lam, "ap" if config.is_ap else "classical")


def _momenta(si, se, ni_force, ne_force, ex_new, ey_new, bz_old, delta, h, eps2):
    ex_c = face_average(ex_new)
    bz_c = face_average(bz_old)
    qix, qiy, qex, qey = si.qxc, si.qyc, se.qxc, se.qyc
    qix_new = qix - delta * divergence(si.face(si.fux), h) + delta * (ni_force * ex_c + qiy * bz_c)
    qiy_new = qiy - delta * divergence(si.face(si.fuy), h) + delta * (ni_force * ey_new - qix * bz_c)
    s = delta / eps2
    qex_new = qex - s * divergence(se.face(se.fux), h) - s * (ne_force * ex_c + qey * bz_c)
    qey_new = qey - s * divergence(se.face(se.fuy), h) - s * (ne_force * ey_new - qex * bz_c)
    return qix_new, qiy_new, qex_new, qey_new


def _finish(snap, ni, ne, q, ex, bz, ey, t_new):
    qix, qiy, qex, qey = q
    clipped = apply_floor(ni, qix, qiy) + apply_floor(ne, qex, qey)
    return TwoFluidSnapshot(FluidState(ni, qix, qiy), FluidState(ne, qex, qey), EMField(ex, bz, ey),
                            snap.grid, t_new, snap.m + 1, snap.em.Ey.copy(), snap.floor_events + clipped)


def step_classical_2f(snap: TwoFluidSnapshot, delta: float, config: SchemeConfig, bc: BoundaryConditionSpec,
                      electron_viscosity: str = SCALED) -> TwoFluidSnapshot:
    lam, eps2 = config.lam, config.eps2
    if lam <= 0:
        raise ValueError("the classical scheme needs lambda > 0")
    h = snap.grid.h
    si, se = _species(snap, config, bc, electron_viscosity)
    em = snap.em
    t_new = snap.t + delta
    fni, fne = si.face(si.fn), se.face(se.fn)

    ni_new = si.nc - delta * divergence(fni, h)
    ne_new = se.nc - delta * divergence(fne, h)
    rel = relation_for(bc, lam, t_new, delta, h, em.Bz)
    bz_new = faraday(em.Bz, em.Ey, rel, delta, h)
    ex_new = em.Ex - delta / lam**2 * (fni - fne)
    ey_new = em.Ey + delta / lam**2 * (-(si.qyc - se.qyc) - divergence(bz_new, h))

    q = _momenta(si, se, ni_new, ne_new, ex_new, ey_new, em.Bz, delta, h, eps2)
    return _finish(snap, ni_new, ne_new, q, ex_new, bz_new, ey_new, t_new)


def step_ap_2f(snap: TwoFluidSnapshot, delta: float, config: SchemeConfig, bc: BoundaryConditionSpec,
               ey_variant: str = EY_DEFAULT, electron_viscosity: str = SCALED) -> TwoFluidSnapshot:
    lam, eps2 = config.lam, config.eps2
    h = snap.grid.h
    si, se = _species(snap, config, bc, electron_viscosity)
    em = snap.em
    t_new = snap.t + delta
    inv = 1.0 / eps2
    bz_c = face_average(em.Bz)

    # transverse field
    common = (delta**2 * divergence(si.face(si.fuy) - inv * se.face(se.fuy), h)
              + delta**2 * (si.qxc + inv * se.qxc) * bz_c)
    if ey_variant == EY_HISTORY and snap.ey_prev is not None:
        rhs = lam**2 * (2.0 * em.Ey - snap.ey_prev) + common
    elif ey_variant in (EY_DEFAULT, EY_HISTORY):
        rhs = lam**2 * em.Ey - delta * (si.qyc - se.qyc) - delta * divergence(em.Bz, h) + common
    else:
        raise ValueError(f"unknown Ey variant {ey_variant!r}")
    rel = relation_for(bc, lam, t_new, delta, h, em.Bz)
    ey_new = solve_ey_elliptic(assemble_ey_system(lam**2 + delta**2 * (si.nc + inv * se.nc), rhs, delta, h, rel))

    # longitudinal field
    fuxi_r, fuxi_l = si.fux_shifted()
    fuxe_r, fuxe_l = se.fux_shifted()
    niL, niR = si.left_right(si.n)
    neL, neR = se.left_right(se.n)
    qiyL, qiyR = si.left_right(si.qy)
    qeyL, qeyR = se.left_right(se.qy)
    fni, fne = si.face(si.fn), se.face(se.fn)
    num = (lam**2 * em.Ex - delta * (fni - fne)
           + 0.5 * delta**2 / h * ((fuxi_r - inv * fuxe_r) - (fuxi_l - inv * fuxe_l))
           - 0.5 * delta**2 * ((qiyL + inv * qeyL) + (qiyR + inv * qeyR)) * em.Bz)
    ex_new = num / (lam**2 + 0.5 * delta**2 * ((niL + inv * neL) + (niR + inv * neR)))

    bz_new = faraday(em.Bz, ey_new, rel, delta, h)
    q = _momenta(si, se, si.nc, se.nc, ex_new, ey_new, em.Bz, delta, h, eps2)

    # ion flux explicit in form; electron flux closes the Ampere update exactly
    f_i = implicit_mass_flux_twofluid(ION, fni, ex_new, niL, niR, fuxi_l, fuxi_r, qiyL, qiyR, em.Bz, delta, h)
    f_e = f_i + lam**2 * (ex_new - em.Ex) / delta
    ni_new = si.nc - delta * divergence(f_i, h)
    ne_new = se.nc - delta * divergence(f_e, h)
    return _finish(snap, ni_new, ne_new, q, ex_new, bz_new, ey_new, t_new)


def step_2f(snap: TwoFluidSnapshot, delta: float, config: SchemeConfig, bc: BoundaryConditionSpec, **kw):
    if config.is_ap:
        return step_ap_2f(snap, delta, config, bc, **kw)
    kw.pop("ey_variant", None)
    return step_classical_2f(snap, delta, config, bc, **kw)
