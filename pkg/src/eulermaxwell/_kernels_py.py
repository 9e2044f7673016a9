"""Pure numpy implementations of the hot kernels.

Signatures mirror the compiled module exactly so either can back :mod:`kernels`.
"""
import numpy as np


def _pressure(n, kind, p1, p2):
    if kind == 0:
        return p1 * n, np.full_like(n, p1)
    return p1 * n**p2, p1 * p2 * n ** (p2 - 1.0)


def llf_fluxes(n, qx, qy, kind, p1, p2, inertia, mom_visc_scale):
    """LLF fluxes on every interface between consecutive cells.

    ``inertia`` multiplies the convective part of the momentum fluxes and
    divides the squared sound speed (``eps2`` for electrons, 1 otherwise).
    The momentum viscosity is ``mom_visc_scale * mu``.
    Returns ``(fn, fux, fuy, mu)`` with ``len(n) - 1`` entries each.
    """
    n = np.asarray(n, dtype=np.float64)
    qx = np.asarray(qx, dtype=np.float64)
    qy = np.asarray(qy, dtype=np.float64)
    ux = qx / n
    uy = qy / n
    p, dp = _pressure(n, kind, p1, p2)
    c = np.sqrt(dp / inertia)

    nI = 0.5 * (n[:-1] + n[1:])
    uI = 0.5 * (qx[:-1] + qx[1:]) / nI
    _, dpI = _pressure(nI, kind, p1, p2)
    cI = np.sqrt(dpI / inertia)
    nu_plus = np.maximum(uI + cI, ux[1:] + c[1:])
    nu_minus = np.minimum(uI - cI, ux[:-1] - c[:-1])
    mu = np.maximum(np.abs(nu_plus), np.abs(nu_minus))

    fx = inertia * qx * ux + p
    fy = inertia * qx * uy
    fn = 0.5 * (qx[:-1] + qx[1:] + mu * (n[:-1] - n[1:]))
    mv = mom_visc_scale * mu
    fux = 0.5 * (fx[:-1] + fx[1:] + mv * (qx[:-1] - qx[1:]))
    fuy = 0.5 * (fy[:-1] + fy[1:] + mv * (qy[:-1] - qy[1:]))
    return fn, fux, fuy, mu


def thomas(sub, diag, sup, rhs):
    """Tridiagonal solve; ``sub[0]`` and ``sup[-1]`` are ignored."""
    m = diag.size
    cp = np.empty(m)
    dp = np.empty(m)
    if diag[0] == 0.0:
        raise ZeroDivisionError("zero pivot in tridiagonal solve")
    cp[0] = sup[0] / diag[0]
    dp[0] = rhs[0] / diag[0]
    for i in range(1, m):
        piv = diag[i] - sub[i] * cp[i - 1]
        if piv == 0.0:
            raise ZeroDivisionError("zero pivot in tridiagonal solve")
        cp[i] = sup[i] / piv
        dp[i] = (rhs[i] - sub[i] * dp[i - 1]) / piv
    x = np.empty(m)
    x[-1] = dp[-1]
    for i in range(m - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x
