"""Local Lax-Friedrichs fluxes, wave-speed estimates and time-step selection.

Cell states are passed as conserved triples ``(n, qx, qy)``; each entry may be a
scalar or an array, in which case everything is evaluated elementwise.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import PressureLaw

ION = "ion"
ELECTRON = "electron"


@dataclass(frozen=True)
class InterfaceFlux:
    f_n: np.ndarray
    f_ux: np.ndarray
    f_uy: np.ndarray

    def as_tuple(self):
        return self.f_n, self.f_ux, self.f_uy


@dataclass(frozen=True)
class WaveSpeedEstimate:
    mu: np.ndarray
    nu_plus: np.ndarray
    nu_minus: np.ndarray


def _unpack(state):
    n, qx, qy = (np.asarray(v, dtype=float) for v in state)
    if not (np.all(np.isfinite(n)) and np.all(np.isfinite(qx)) and np.all(np.isfinite(qy))):
        raise ValueError("non-finite cell state")
    if not np.all(n > 0):
        raise ValueError("cell density must be positive")
    return n, qx, qy


def _speeds(n, qx, law, inertia):
    u = qx / n
    c = np.sqrt(law.dp(n) / inertia)
    return u - c, u + c


def wave_speed_mu(left, right, law: PressureLaw, inertia: float = 1.0) -> WaveSpeedEstimate:
    """Interface viscosity from the left, right and averaged states.

    ``nu+ = max(u+c at the averaged state, u+c at the right state)``,
    ``nu- = min(u-c at the averaged state, u-c at the left state)`` and
    ``mu = max(|nu+|, |nu-|)``. ``inertia`` scales the sound speed as
    ``c / sqrt(inertia)`` (electron subsystem).
    """
    nL, qL, _ = _unpack(left)
    nR, qR, _ = _unpack(right)
    nI = 0.5 * (nL + nR)
    qI = 0.5 * (qL + qR)
    loI, hiI = _speeds(nI, qI, law, inertia)
    loL, _ = _speeds(nL, qL, law, inertia)
    _, hiR = _speeds(nR, qR, law, inertia)
    nu_plus = np.maximum(hiI, hiR)
    nu_minus = np.minimum(loI, loL)
    mu = np.maximum(np.abs(nu_plus), np.abs(nu_minus))
    return WaveSpeedEstimate(mu[()], nu_plus[()], nu_minus[()])


def analytic_flux(state, law: PressureLaw, inertia: float = 1.0):
    n, qx, qy = _unpack(state)
    ux = qx / n
    return qx, inertia * qx * ux + law.p(n), inertia * qx * qy / n


def _llf(left, right, mu, law, inertia, momentum_viscosity):
    nL, qxL, qyL = _unpack(left)
    nR, qxR, qyR = _unpack(right)
    mu = np.asarray(mu, dtype=float)
    mv = mu if momentum_viscosity is None else np.asarray(momentum_viscosity, dtype=float)
    FL = analytic_flux((nL, qxL, qyL), law, inertia)
    FR = analytic_flux((nR, qxR, qyR), law, inertia)
    f_n = 0.5 * (FL[0] + FR[0] + mu * (nL - nR))
    f_ux = 0.5 * (FL[1] + FR[1] + mv * (qxL - qxR))
    f_uy = 0.5 * (FL[2] + FR[2] + mv * (qyL - qyR))
    return InterfaceFlux(f_n[()], f_ux[()], f_uy[()])


def llf_flux_onefluid(left, right, mu, law: PressureLaw) -> InterfaceFlux:
    return _llf(left, right, mu, law, 1.0, None)


def llf_flux_twofluid(species: str, left, right, mu, law: PressureLaw, eps2: float,
                      momentum_viscosity=None) -> InterfaceFlux:
    """Species flux. Electrons carry ``eps2`` on the convective momentum terms.

    ``momentum_viscosity`` overrides the viscosity of the two momentum fluxes
    (the mass flux always uses ``mu``).
    """
    if species == ION:
        return _llf(left, right, mu, law, 1.0, momentum_viscosity)
    if species == ELECTRON:
        return _llf(left, right, mu, law, float(eps2), momentum_viscosity)
    raise ValueError(f"species must be {ION!r} or {ELECTRON!r}")


def padded_fluxes(n, qx, qy, law: PressureLaw, inertia: float = 1.0, mom_visc_scale: float = 1.0):
    """Fluxes between all consecutive cells of a ghost-padded array."""
    kind, p1, p2 = law.kernel_params()
    return kernels.llf_fluxes(n, qx, qy, kind, p1, p2, float(inertia), float(mom_visc_scale))


def implicit_mass_flux_onefluid(f_n, ex_new, n_left, n_right, fux_far_left, fux_far_right,
                                qy_left, qy_right, bz, delta: float, h: float):
    """Implicit mass flux at an interface from the explicit one.

    ``fux_far_left`` / ``fux_far_right`` are the momentum fluxes one interface
    further to the left and to the right; ``bz`` is the old magnetic field at
    the interface itself.
    """
    return (f_n
            - 0.5 * delta * (n_left + n_right) * ex_new
            - 0.5 * delta / h * (fux_far_right - fux_far_left)
            - 0.5 * delta * (qy_left + qy_right) * bz)


def implicit_mass_flux_twofluid(species: str, f_n, ex_new, n_left, n_right, fux_far_left, fux_far_right,
                                qy_left, qy_right, bz, delta: float, h: float, eps2: float = 1.0):
    if species == ION:
        return (f_n
                + 0.5 * delta * (n_left + n_right) * ex_new
                - 0.5 * delta / h * (fux_far_right - fux_far_left)
                + 0.5 * delta * (qy_left + qy_right) * bz)
    if species == ELECTRON:
        s = 0.5 * delta / eps2
        return (f_n
                - s * (n_left + n_right) * ex_new
                - s / h * (fux_far_right - fux_far_left)
                - s * (qy_left + qy_right) * bz)
    raise ValueError(f"species must be {ION!r} or {ELECTRON!r}")


def cfl_timestep(mu, h: float, cfl: float, lam: float, scheme_kind: str) -> float:
    """``cfl h / max mu`` for the AP scheme; the classical scheme also honours light speed ``1/lam``."""
    mu_max = float(np.max(np.asarray(mu, dtype=float)))
    if not np.isfinite(mu_max):
        raise ValueError("non-finite wave speed")
    if scheme_kind == "ap":
        speed = mu_max
    elif scheme_kind == "classical":
        if lam <= 0:
            raise ValueError("classical scheme needs lambda > 0 (infinite light speed otherwise)")
        speed = max(mu_max, 1.0 / lam)
    else:
        raise ValueError("scheme_kind must be 'ap' or 'classical'")
    if speed <= 0:
        raise ValueError("all wave speeds vanish; time step undefined")
    return cfl * h / speed
