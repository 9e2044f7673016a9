# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels; same contract as ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, pow, fabs

cnp.import_array()


cdef inline void _press(double n, int kind, double p1, double p2, double* p, double* dp) noexcept nogil:
    if kind == 0:
        p[0] = p1 * n
        dp[0] = p1
    else:
        p[0] = p1 * pow(n, p2)
        dp[0] = p1 * p2 * pow(n, p2 - 1.0)


def llf_fluxes(n_in, qx_in, qy_in, int kind, double p1, double p2, double inertia, double mom_visc_scale):
    cdef const double[::1] n = np.ascontiguousarray(n_in, dtype=np.float64)
    cdef const double[::1] qx = np.ascontiguousarray(qx_in, dtype=np.float64)
    cdef const double[::1] qy = np.ascontiguousarray(qy_in, dtype=np.float64)
    cdef Py_ssize_t m = n.shape[0] - 1
    fn_a = np.empty(m)
    fux_a = np.empty(m)
    fuy_a = np.empty(m)
    mu_a = np.empty(m)
    cdef double[::1] fn = fn_a
    cdef double[::1] fux = fux_a
    cdef double[::1] fuy = fuy_a
    cdef double[::1] mu = mu_a
    cdef Py_ssize_t j
    cdef double pL, dpL, pR, dpR, pI, dpI, uL, uR, uyL, uyR, cL, cR, nI, uI, cI
    cdef double nup, num, muj, mv
    with nogil:
        for j in range(m):
            uL = qx[j] / n[j]
            uR = qx[j + 1] / n[j + 1]
            uyL = qy[j] / n[j]
            uyR = qy[j + 1] / n[j + 1]
            _press(n[j], kind, p1, p2, &pL, &dpL)
            _press(n[j + 1], kind, p1, p2, &pR, &dpR)
            cL = sqrt(dpL / inertia)
            cR = sqrt(dpR / inertia)
            nI = 0.5 * (n[j] + n[j + 1])
            uI = 0.5 * (qx[j] + qx[j + 1]) / nI
            _press(nI, kind, p1, p2, &pI, &dpI)
            cI = sqrt(dpI / inertia)
            nup = uI + cI
            if uR + cR > nup:
                nup = uR + cR
            num = uI - cI
            if uL - cL < num:
                num = uL - cL
            muj = fabs(nup)
            if fabs(num) > muj:
                muj = fabs(num)
            mu[j] = muj
            mv = mom_visc_scale * muj
            fn[j] = 0.5 * (qx[j] + qx[j + 1] + muj * (n[j] - n[j + 1]))
            fux[j] = 0.5 * ((inertia * qx[j] * uL + pL) + (inertia * qx[j + 1] * uR + pR)
                            + mv * (qx[j] - qx[j + 1]))
            fuy[j] = 0.5 * (inertia * qx[j] * uyL + inertia * qx[j + 1] * uyR
                            + mv * (qy[j] - qy[j + 1]))
    return fn_a, fux_a, fuy_a, mu_a


def thomas(sub_in, diag_in, sup_in, rhs_in):
    cdef const double[::1] a = np.ascontiguousarray(sub_in, dtype=np.float64)
    cdef const double[::1] b = np.ascontiguousarray(diag_in, dtype=np.float64)
    cdef const double[::1] c = np.ascontiguousarray(sup_in, dtype=np.float64)
    cdef const double[::1] d = np.ascontiguousarray(rhs_in, dtype=np.float64)
    cdef Py_ssize_t m = b.shape[0]
    cdef Py_ssize_t i
    cp_a = np.empty(m)
    dp_a = np.empty(m)
    x_a = np.empty(m)
    cdef double[::1] cp = cp_a
    cdef double[::1] dp = dp_a
    cdef double[::1] x = x_a
    cdef double piv
    cdef bint bad = False
    with nogil:
        if b[0] == 0.0:
            bad = True
        else:
            cp[0] = c[0] / b[0]
            dp[0] = d[0] / b[0]
            for i in range(1, m):
                piv = b[i] - a[i] * cp[i - 1]
                if piv == 0.0:
                    bad = True
                    break
                cp[i] = c[i] / piv
                dp[i] = (d[i] - a[i] * dp[i - 1]) / piv
            if not bad:
                x[m - 1] = dp[m - 1]
                for i in range(m - 2, -1, -1):
                    x[i] = dp[i] - cp[i] * x[i + 1]
    if bad:
        raise ZeroDivisionError("zero pivot in tridiagonal solve")
    return x_a
