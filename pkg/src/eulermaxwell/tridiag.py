"""Tridiagonal systems for the implicit transverse field."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .boundary import GhostRelation


class SingularSystemError(ArithmeticError):
    pass


@dataclass
class TridiagonalSystem:
    """Row ``i`` reads ``sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]``.

    With ``cyclic=True``, ``sub[0]`` couples to ``x[-1]`` and ``sup[-1]`` to ``x[0]``;
    otherwise those two entries are ignored.
    """

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    rhs: np.ndarray
    cyclic: bool = False

    def __post_init__(self):
        self.sub = np.asarray(self.sub, dtype=float)
        self.diag = np.asarray(self.diag, dtype=float)
        self.sup = np.asarray(self.sup, dtype=float)
        self.rhs = np.asarray(self.rhs, dtype=float)
        m = self.diag.size
        if not (self.sub.size == self.sup.size == self.rhs.size == m) or m == 0:
            raise ValueError("diagonals and right-hand side must share one length")

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.diag * x
        y[1:] += self.sub[1:] * x[:-1]
        y[:-1] += self.sup[:-1] * x[1:]
        if self.cyclic:
            y[0] += self.sub[0] * x[-1]
            y[-1] += self.sup[-1] * x[0]
        return y

    def residual(self, x: np.ndarray) -> float:
        """Relative residual ``|Ax - b|_inf / max(|b|_inf, |A|_inf |x|_inf)``."""
        r = np.max(np.abs(self.matvec(x) - self.rhs))
        anorm = np.max(np.abs(self.diag) + np.abs(self.sub) + np.abs(self.sup))
        scale = max(np.max(np.abs(self.rhs)), anorm * np.max(np.abs(x)), np.finfo(float).tiny)
        return float(r / scale)


def _thomas(sub, diag, sup, rhs):
    try:
        return kernels.thomas(sub, diag, sup, rhs)
    except ZeroDivisionError as exc:
        raise SingularSystemError(str(exc)) from None


def solve_ey_elliptic(system: TridiagonalSystem) -> np.ndarray:
    """Direct solve; cyclic systems go through a Sherman-Morrison correction."""
    m = system.diag.size
    if not system.cyclic or m == 1:
        diag = system.diag
        if system.cyclic:
            diag = diag + system.sub + system.sup
        return _thomas(system.sub, diag, system.sup, system.rhs)
    if m == 2:
        a = np.array([[system.diag[0], system.sup[0] + system.sub[0]],
                      [system.sub[1] + system.sup[1], system.diag[1]]])
        return np.linalg.solve(a, system.rhs)
    # A = T + u v^T with u = (g, 0.., c_last), v = (1, 0.., a_first / g)
    a0 = system.sub[0]
    cl = system.sup[-1]
    g = -system.diag[0]
    diag = system.diag.copy()
    diag[0] -= g
    diag[-1] -= cl * a0 / g
    y = _thomas(system.sub, diag, system.sup, system.rhs)
    u = np.zeros(m)
    u[0] = g
    u[-1] = cl
    z = _thomas(system.sub, diag, system.sup, u)
    vy = y[0] + a0 / g * y[-1]
    vz = z[0] + a0 / g * z[-1]
    denom = 1.0 + vz
    if denom == 0.0:
        raise SingularSystemError("singular cyclic system")
    return y - (vy / denom) * z


def assemble_ey_system(mass_diag: np.ndarray, rhs: np.ndarray, delta: float, h: float,
                       relation: GhostRelation) -> TridiagonalSystem:
    """``mass_diag_k E_k - (delta/h)^2 (E_{k+1} - 2E_k + E_{k-1}) = rhs_k`` with closure folded in."""
    m = mass_diag.size
    k2 = (delta / h) ** 2
    diag = mass_diag + 2.0 * k2
    off = np.full(m, -k2)
    rhs = np.array(rhs, dtype=float)
    if relation.cyclic:
        return TridiagonalSystem(off, diag, off.copy(), rhs, cyclic=True)
    diag = diag.copy()
    diag[0] -= k2 * relation.aL
    rhs[0] += k2 * relation.bL
    diag[-1] -= k2 * relation.aR
    rhs[-1] += k2 * relation.bR
    return TridiagonalSystem(off, diag, off.copy(), rhs)
