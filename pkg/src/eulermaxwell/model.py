"""Domain types shared by every scheme: grid, pressure law, state records, scaling.

Conventions
-----------
Cell ``k`` spans ``[x_min + k h, x_min + (k+1) h]``. Interface ``p`` sits at
``x_min + p h`` so cell ``k`` is bounded by interfaces ``k`` (left) and ``k+1``
(right). Fluid variables and ``Ey`` live on the ``n_cells`` centers, ``Ex`` and
``Bz`` on the ``n_cells + 1`` interfaces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import constants as sc

DENSITY_FLOOR = 1e-8


class DomainError(ValueError):
    """Raised when an operation is evaluated outside its domain of definition."""


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    n_cells: int

    def __post_init__(self):
        if self.n_cells < 1:
            raise ValueError("n_cells must be a positive integer")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    @property
    def centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.h

    @property
    def interfaces(self) -> np.ndarray:
        return self.x_min + np.arange(self.n_cells + 1) * self.h


@dataclass(frozen=True)
class PressureLaw:
    """Barotropic pressure ``p(n)``.

    ``kind="isothermal"`` gives ``p = T n``; ``kind="polytropic"`` gives
    ``p = C n**gamma``.
    """

    kind: str = "isothermal"
    T: float = 1.0
    C: float = 1.0
    gamma: float = 5.0 / 3.0

    def __post_init__(self):
        if self.kind not in ("isothermal", "polytropic"):
            raise ValueError(f"unknown pressure law {self.kind!r}")
        if self.kind == "isothermal" and not self.T > 0:
            raise ValueError("isothermal temperature must be positive")
        if self.kind == "polytropic" and not (self.C > 0 and self.gamma >= 1):
            raise ValueError("polytropic law needs C > 0 and gamma >= 1")

    @classmethod
    def isothermal(cls, T: float = 1.0) -> "PressureLaw":
        return cls("isothermal", T=T)

    @classmethod
    def polytropic(cls, C: float, gamma: float) -> "PressureLaw":
        return cls("polytropic", C=C, gamma=gamma)

    def p(self, n):
        if self.kind == "isothermal":
            return self.T * n
        return self.C * np.power(n, self.gamma)

    def dp(self, n):
        if self.kind == "isothermal":
            return self.T * np.ones_like(np.asarray(n, dtype=float))[()]
        return self.C * self.gamma * np.power(n, self.gamma - 1.0)

    @property
    def linear_T(self) -> float:
        """``p'(1)``, the temperature of the linearized model."""
        return float(self.dp(1.0))

    # kernel encoding: (kind flag, first parameter, second parameter)
    def kernel_params(self) -> tuple[int, float, float]:
        if self.kind == "isothermal":
            return 0, float(self.T), 1.0
        return 1, float(self.C), float(self.gamma)


def pressure_eval(law: PressureLaw, n):
    """Return ``(p(n), p'(n))``; raises :class:`DomainError` for ``n <= 0``."""
    arr = np.asarray(n, dtype=float)
    if not np.all(arr > 0):
        raise DomainError("pressure is only defined for positive density")
    return law.p(arr)[()], law.dp(arr)[()]


def sound_speed(law: PressureLaw, n):
    _, dp = pressure_eval(law, n)
    return np.sqrt(dp)


@dataclass
class FluidState:
    """Conserved variables of one species: density and the two momenta."""

    n: np.ndarray
    qx: np.ndarray
    qy: np.ndarray

    def __post_init__(self):
        self.n = np.asarray(self.n, dtype=float)
        self.qx = np.asarray(self.qx, dtype=float)
        self.qy = np.asarray(self.qy, dtype=float)
        if not (self.n.shape == self.qx.shape == self.qy.shape) or self.n.ndim != 1:
            raise ValueError("n, qx, qy must be 1-D arrays of equal length")

    @property
    def n_cells(self) -> int:
        return self.n.size

    def velocities(self, floor: float = DENSITY_FLOOR):
        nn = np.maximum(self.n, floor)
        return self.qx / nn, self.qy / nn

    def copy(self) -> "FluidState":
        return FluidState(self.n.copy(), self.qx.copy(), self.qy.copy())

    @classmethod
    def uniform(cls, n_cells: int, n: float = 1.0, ux: float = 0.0, uy: float = 0.0):
        nn = np.full(n_cells, float(n))
        return cls(nn, nn * ux, nn * uy)


@dataclass
class EMField:
    Ex: np.ndarray
    Bz: np.ndarray
    Ey: np.ndarray

    def __post_init__(self):
        self.Ex = np.asarray(self.Ex, dtype=float)
        self.Bz = np.asarray(self.Bz, dtype=float)
        self.Ey = np.asarray(self.Ey, dtype=float)
        if self.Ex.shape != self.Bz.shape or self.Ex.size != self.Ey.size + 1:
            raise ValueError("Ex and Bz need n_cells+1 entries, Ey needs n_cells")

    def copy(self) -> "EMField":
        return EMField(self.Ex.copy(), self.Bz.copy(), self.Ey.copy())

    @classmethod
    def zeros(cls, n_cells: int, bz: float = 0.0) -> "EMField":
        return cls(np.zeros(n_cells + 1), np.full(n_cells + 1, float(bz)), np.zeros(n_cells))


CLASSICAL = (0, 0, 1)
AP = (1, 1, 1)


@dataclass(frozen=True)
class SchemeConfig:
    a: int = 1
    b: int = 1
    c: int = 1
    lam: float = 1.0
    eps2: float = 1e-4
    pressure: PressureLaw = field(default_factory=PressureLaw)
    cfl: float = 0.5
    allow_any_triple: bool = False

    def __post_init__(self):
        if any(v not in (0, 1) for v in (self.a, self.b, self.c)):
            raise ValueError("implicitness flags must be 0 or 1")
        if not self.allow_any_triple and self.triple not in (CLASSICAL, AP):
            raise ValueError(f"PDE schemes exist only for {CLASSICAL} and {AP}, got {self.triple}")
        if self.lam < 0:
            raise ValueError("lambda must be nonnegative")
        if self.lam == 0 and self.a != 1:
            raise ValueError("lambda = 0 requires the AP scheme (a = 1)")
        if not 0 < self.cfl <= 1:
            raise ValueError("cfl must lie in (0, 1]")
        if not self.eps2 > 0:
            raise ValueError("eps2 must be positive")

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    @property
    def is_ap(self) -> bool:
        return self.triple == AP

    @classmethod
    def classical(cls, lam: float, **kw) -> "SchemeConfig":
        return cls(0, 0, 1, lam=lam, **kw)

    @classmethod
    def ap(cls, lam: float, **kw) -> "SchemeConfig":
        return cls(1, 1, 1, lam=lam, **kw)

    def with_(self, **kw) -> "SchemeConfig":
        return replace(self, **kw)


# --------------------------------------------------------------------------
# Scaling to dimensionless units

_QUANTITY_UNITS = {
    "x": "x0",
    "t": "t0",
    "u": "u0",
    "n": "n0",
    "q": "q0",
    "E": "E0",
    "B": "B0",
}


@dataclass(frozen=True)
class ScalingUnits:
    x0: float
    n0: float
    T0: float  # kelvin
    mass: float
    u0: float
    t0: float
    E0: float
    B0: float
    alpha: float
    beta: float
    lam: float

    @property
    def q0(self) -> float:
        return self.n0 * self.u0

    def unit(self, quantity: str) -> float:
        try:
            return getattr(self, _QUANTITY_UNITS[quantity])
        except KeyError:
            raise KeyError(f"unknown quantity {quantity!r}; known: {sorted(_QUANTITY_UNITS)}") from None

    def to_physical(self, quantity: str, value):
        return np.asarray(value, dtype=float) * self.unit(quantity)

    def to_dimensionless(self, quantity: str, value):
        return np.asarray(value, dtype=float) / self.unit(quantity)


def _kelvin(T0: float, unit: str) -> float:
    if unit == "K":
        return float(T0)
    if unit == "eV":
        return float(T0) * sc.e / sc.k
    raise ValueError("temperature unit must be 'K' or 'eV'")


def compute_scaling(x0: float, n0: float, T0: float, particle_mass: float, temperature_unit: str = "eV") -> ScalingUnits:
    """Reference units and the dimensionless numbers alpha, beta, lambda.

    ``u0 = sqrt(kB T0 / m)``, ``t0 = x0 / u0``, ``E0 = kB T0 / (e x0)``,
    ``B0 = E0 / u0`` (hence ``beta = 1``), ``alpha = u0 / c`` and
    ``lambda = sqrt(eps0 kB T0 / (e^2 n0 x0^2))``.
    """
    if min(x0, n0, T0, particle_mass) <= 0:
        raise ValueError("scaling inputs must be positive")
    TK = _kelvin(T0, temperature_unit)
    kT = sc.k * TK
    u0 = math.sqrt(kT / particle_mass)
    t0 = x0 / u0
    E0 = kT / (sc.e * x0)
    B0 = E0 / u0
    alpha = u0 / sc.c
    beta = math.sqrt(u0 * B0 / E0)
    lam = math.sqrt(sc.epsilon_0 * kT / (sc.e**2 * n0 * x0**2))
    return ScalingUnits(x0, n0, TK, particle_mass, u0, t0, E0, B0, alpha, beta, lam)


def skin_depth(n0: float, particle_mass: float = sc.m_e) -> float:
    """``c / omega_p``; choosing it as ``x0`` makes ``alpha == lambda``."""
    omega_p = math.sqrt(n0 * sc.e**2 / (sc.epsilon_0 * particle_mass))
    return sc.c / omega_p


ELECTRON_MASS = sc.m_e
CARBON_ION_MASS = 12.0 * sc.atomic_mass


# --------------------------------------------------------------------------
# Staggered-grid helpers and Gauss diagnostics

def face_average(interface_values) -> np.ndarray:
    """Centered average of an interface array: ``0.5 (v[k+1] + v[k])``."""
    v = np.asarray(interface_values, dtype=float)
    if v.ndim != 1 or v.size < 2:
        raise ValueError("need at least two interface values")
    return 0.5 * (v[1:] + v[:-1])


def center_to_face(center_values) -> np.ndarray:
    """Midpoint values between neighbouring centers (``n_cells - 1`` entries)."""
    v = np.asarray(center_values, dtype=float)
    if v.ndim != 1 or v.size < 2:
        raise ValueError("need at least two center values")
    return 0.5 * (v[1:] + v[:-1])


def gauss_residual(state, field: EMField, lam: float, h: float, background=1.0) -> np.ndarray:
    """Per-cell discrete Gauss residual.

    One fluid (``state`` a :class:`FluidState`):
    ``lam^2 (Ex[k+1] - Ex[k]) / h - (background_k - n_k)``, the background being
    the immobile ion density (1 unless a profile is given).
    Two fluids (``state`` an ``(ion, electron)`` pair):
    ``lam^2 (Ex[k+1] - Ex[k]) / h - (n_i - n_e)_k``.
    """
    Ex = np.asarray(field.Ex if isinstance(field, EMField) else field, dtype=float)
    div = lam * lam * (Ex[1:] - Ex[:-1]) / h
    if isinstance(state, FluidState):
        if state.n.size != div.size:
            raise ValueError("Ex must have one more entry than the density")
        return div - (background - state.n)
    ion, electron = state
    if ion.n.size != div.size or electron.n.size != div.size:
        raise ValueError("Ex must have one more entry than the densities")
    return div - (ion.n - electron.n)
