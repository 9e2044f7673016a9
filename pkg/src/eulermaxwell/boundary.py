"""Fluid ghost cells, electromagnetic closures and the incident-wave source.

Fluid arrays are padded with ``NG = 2`` ghost cells per side so that momentum
fluxes one interface beyond each boundary exist (the AP scheme needs them).
Transverse electromagnetic closures are expressed as affine ghost relations
``Ey[-1] = aL Ey[0] + bL`` and ``Ey[N] = aR Ey[N-1] + bR`` which the explicit
update applies directly and the implicit ``Ey`` solve folds into its end rows.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .model import EMField, FluidState

NG = 2

NEUMANN = "neumann"
PERIODIC = "periodic"
SILVER_MULLER = "silver-muller"
ZERO_FIELD = "zero"

_FLUID_KINDS = (NEUMANN, PERIODIC)
_EM_KINDS = (SILVER_MULLER, PERIODIC, ZERO_FIELD)


def linear_ramp(s: float) -> float:
    return min(max(s, 0.0), 1.0)


@dataclass(frozen=True)
class IncidentWave:
    amplitude: float
    rise_time: float
    shape: Callable[[float], float] = linear_ramp

    def __post_init__(self):
        if not self.rise_time > 0:
            raise ValueError("rise time must be positive")


def incident_wave(t: float, wave: Optional[IncidentWave]) -> float:
    """Incident ``Ey`` at time ``t``: ``amplitude * shape(t / rise_time)``."""
    if wave is None:
        return 0.0
    if t < 0:
        raise ValueError("time must be nonnegative")
    return wave.amplitude * wave.shape(t / wave.rise_time)


@dataclass(frozen=True)
class BoundaryConditionSpec:
    fluid: str = NEUMANN
    em: str = ZERO_FIELD
    incident: Optional[IncidentWave] = None
    bz_background: float = 0.0

    def __post_init__(self):
        if self.fluid not in _FLUID_KINDS:
            raise ValueError(f"fluid boundary must be one of {_FLUID_KINDS}")
        if self.em not in _EM_KINDS:
            raise ValueError(f"EM boundary must be one of {_EM_KINDS}")
        if (self.fluid == PERIODIC) != (self.em == PERIODIC):
            raise ValueError("periodic closure must be chosen for both fluid and field, or neither")
        if self.incident is not None and self.em != SILVER_MULLER:
            raise ValueError("an incident wave needs the Silver-Muller closure")

    @property
    def periodic(self) -> bool:
        return self.fluid == PERIODIC


def fill_ghosts(arr: np.ndarray, kind: str) -> np.ndarray:
    """Overwrite the ghost entries of a padded array in place (idempotent)."""
    if kind == PERIODIC:
        arr[:NG] = arr[-2 * NG:-NG]
        arr[-NG:] = arr[NG:2 * NG]
    else:
        arr[:NG] = arr[NG]
        arr[-NG:] = arr[-NG - 1]
    return arr


def pad(values: np.ndarray, kind: str) -> np.ndarray:
    out = np.empty(values.size + 2 * NG)
    out[NG:-NG] = values
    return fill_ghosts(out, kind)


def apply_fluid_bc(state: FluidState, spec: BoundaryConditionSpec):
    """Ghost-padded ``(n, qx, qy)`` arrays of length ``n_cells + 4``."""
    return tuple(pad(v, spec.fluid) for v in (state.n, state.qx, state.qy))


@dataclass(frozen=True)
class GhostRelation:
    """``Ey[-1] = aL Ey[0] + bL`` and ``Ey[N] = aR Ey[N-1] + bR``; ``cyclic`` for periodic closure."""

    aL: float = 0.0
    bL: float = 0.0
    aR: float = 0.0
    bR: float = 0.0
    cyclic: bool = False
    degenerate: bool = False  # lambda = 0 Silver-Muller fallback

    def ghosts(self, ey: np.ndarray) -> tuple[float, float]:
        if self.cyclic:
            return float(ey[-1]), float(ey[0])
        return self.aL * ey[0] + self.bL, self.aR * ey[-1] + self.bR


def ey_ghost_relation(spec: BoundaryConditionSpec, lam: float, t_new: float, delta: float, h: float,
                      bz_left: float, bz_right: float) -> GhostRelation:
    """Ghost relation for ``Ey`` used to advance ``Bz`` at the two boundary interfaces.

    Silver-Muller pins the incoming characteristic at the new time level,
    ``lam Ey_b + (Bz_b - B_bg) = 2 lam inc(t)`` on the left and
    ``lam Ey_b - (Bz_b - B_bg) = 0`` on the right, with ``Ey_b`` the mean of the
    ghost and edge values and ``Bz_b`` advanced by Faraday with those same ``Ey``.
    """
    if spec.em == PERIODIC:
        return GhostRelation(cyclic=True)
    if spec.em == ZERO_FIELD:
        return GhostRelation()
    r = delta / h
    den = 0.5 * lam + r
    a = (r - 0.5 * lam) / den
    inc = incident_wave(t_new, spec.incident)
    bL = (2.0 * lam * inc - (bz_left - spec.bz_background)) / den
    bR = (bz_right - spec.bz_background) / den
    return GhostRelation(a, bL, a, bR, degenerate=(lam == 0))


@dataclass(frozen=True)
class EMBoundary:
    ey_left: float
    ey_right: float
    ex_left: float
    ex_right: float
    relation: GhostRelation
    flags: tuple = field(default_factory=tuple)


def apply_em_bc(em: EMField, lam: float, t: float, spec: BoundaryConditionSpec,
                delta: float, h: float) -> EMBoundary:
    """Ghost values for an explicit field update ending at time ``t``.

    ``Ex`` ghosts copy the boundary interface values (zero gradient).
    """
    rel = ey_ghost_relation(spec, lam, t, delta, h, em.Bz[0], em.Bz[-1])
    gl, gr = rel.ghosts(em.Ey)
    if spec.em == PERIODIC:
        exl, exr = em.Ex[-2], em.Ex[1]
    else:
        exl, exr = em.Ex[0], em.Ex[-1]
    flags = ("lambda0-robin-closure",) if rel.degenerate else ()
    return EMBoundary(float(gl), float(gr), float(exl), float(exr), rel, flags)
