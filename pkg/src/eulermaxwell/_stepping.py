"""Pieces shared by the one- and two-fluid updates."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary import NG, BoundaryConditionSpec, GhostRelation, apply_fluid_bc, ey_ghost_relation
from .flux import padded_fluxes
from .model import DENSITY_FLOOR, FluidState, PressureLaw

# below this density a cell is treated as vacuum and carries no momentum
VACUUM_DENSITY = 1e-6


@dataclass
class SpeciesData:
    """Old-time quantities of one species on the padded grid plus its fluxes."""

    n: np.ndarray  # padded, length N + 4
    qx: np.ndarray
    qy: np.ndarray
    fn: np.ndarray  # padded interfaces, length N + 3
    fux: np.ndarray
    fuy: np.ndarray
    mu: np.ndarray

    @property
    def N(self) -> int:
        return self.n.size - 2 * NG

    # physical views
    @property
    def nc(self):
        return self.n[NG:-NG]

    @property
    def qxc(self):
        return self.qx[NG:-NG]

    @property
    def qyc(self):
        return self.qy[NG:-NG]

    def face(self, arr):
        """Values at physical interfaces 0..N of a padded interface array."""
        return arr[1:self.N + 2]

    def fux_shifted(self):
        """``fux`` one interface to the right and one to the left of every physical interface."""
        N = self.N
        return self.fux[2:N + 3], self.fux[0:N + 1]

    def left_right(self, arr):
        """Cell values left and right of every physical interface."""
        N = self.N
        return arr[1:N + 2], arr[2:N + 3]


def species_data(state: FluidState, law: PressureLaw, bc: BoundaryConditionSpec,
                 inertia: float = 1.0, mom_visc_scale: float = 1.0) -> SpeciesData:
    n, qx, qy = apply_fluid_bc(state, bc)
    fn, fux, fuy, mu = padded_fluxes(n, qx, qy, law, inertia, mom_visc_scale)
    return SpeciesData(n, qx, qy, fn, fux, fuy, mu)


def divergence(face_values: np.ndarray, h: float) -> np.ndarray:
    return (face_values[1:] - face_values[:-1]) / h


def faraday(bz: np.ndarray, ey: np.ndarray, rel: GhostRelation, delta: float, h: float) -> np.ndarray:
    gl, gr = rel.ghosts(ey)
    ext = np.empty(ey.size + 2)
    ext[0] = gl
    ext[1:-1] = ey
    ext[-1] = gr
    return bz - delta / h * (ext[1:] - ext[:-1])


def relation_for(bc: BoundaryConditionSpec, lam: float, t_new: float, delta: float, h: float,
                 bz: np.ndarray) -> GhostRelation:
    return ey_ghost_relation(bc, lam, t_new, delta, h, float(bz[0]), float(bz[-1]))


def apply_floor(n: np.ndarray, qx: np.ndarray, qy: np.ndarray) -> int:
    """Clip density to the floor and drop momentum in vacuum cells. Returns clipped-cell count."""
    low = n < DENSITY_FLOOR
    count = int(np.count_nonzero(low))
    if count:
        n[low] = DENSITY_FLOOR
    vac = n < VACUUM_DENSITY
    if np.any(vac):
        qx[vac] = 0.0
        qy[vac] = 0.0
    return count
