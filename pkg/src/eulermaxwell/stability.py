"""Von Neumann analysis of the linearized viscous model for every implicitness triple.

The amplification factors ``q`` of a Fourier mode ``xi`` are the roots of a cubic
(electromagnetic modes) and a quadratic (electrostatic modes). The numerical
viscosity is ``beta = gamma h``.
"""
from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

STABLE_TOL = 1e-9
TRIPLES = tuple(itertools.product((0, 1), repeat=3))


@dataclass(frozen=True)
class StabilityConfig:
    a: int
    b: int
    c: int
    lam: float
    delta: float
    h: float
    gamma: float = 0.5
    T: float = 1.0
    xi: float = 0.0

    def __post_init__(self):
        if any(v not in (0, 1) for v in (self.a, self.b, self.c)):
            raise ValueError("implicitness flags must be 0 or 1")
        if not (self.delta > 0 and self.h > 0 and self.gamma >= 0 and self.lam >= 0):
            raise ValueError("need delta > 0, h > 0, gamma >= 0, lambda >= 0")

    @property
    def d(self) -> int:
        return self.b + self.c

    @property
    def beta(self) -> float:
        return self.gamma * self.h

    @property
    def xi_max(self) -> float:
        return math.pi / self.h


def default_gamma(T: float) -> float:
    return math.sqrt(T) / 2.0


# --------------------------------------------------------------------------
# polynomials; coefficient arrays are lowest degree first, shape (..., 4)

def _em_coeffs(a, d, lam, delta, beta, xi):
    xi2 = np.asarray(xi, dtype=float) ** 2
    s = beta * xi2 * delta  # shift in (q - 1 + s)
    out = np.zeros(xi2.shape + (4,))
    lam2, d2 = lam * lam, delta * delta
    # lam^2 (q-1)^2 (q-1+s) = lam^2 [q^3 + (s-3) q^2 + (3-2s) q + (s-1)]
    out[..., 3] += lam2
    out[..., 2] += lam2 * (s - 3.0)
    out[..., 1] += lam2 * (3.0 - 2.0 * s)
    out[..., 0] += lam2 * (s - 1.0)
    # q^d delta^2 xi^2 (q - 1 + s)
    w = d2 * xi2
    out[..., d + 1] += w
    out[..., d] += w * (s - 1.0)
    # q^(a+1) delta^2 (q - 1)
    out[..., a + 2] += d2
    out[..., a + 1] -= d2
    return out


def _es_coeffs(a, lam, delta, beta, xi, T):
    xi2 = np.asarray(xi, dtype=float) ** 2
    s = beta * xi2 * delta
    out = np.zeros(xi2.shape + (4,))
    lam2, d2 = lam * lam, delta * delta
    # lam^2 (q-1)(q-1+s)
    out[..., 2] += lam2
    out[..., 1] += lam2 * (s - 2.0)
    out[..., 0] += lam2 * (1.0 - s)
    out[..., a + 1] += d2
    out[..., a] += T * d2 * lam2 * xi2
    # beta delta lam^2 xi^2 (q - 1 + s)
    v = beta * delta * lam2 * xi2
    out[..., 1] += v
    out[..., 0] += v * (s - 1.0)
    return out


def em_polynomial(cfg: StabilityConfig) -> np.ndarray:
    """Coefficients of the electromagnetic polynomial, highest degree first."""
    return _em_coeffs(cfg.a, cfg.d, cfg.lam, cfg.delta, cfg.beta, cfg.xi)[::-1].copy()


def es_polynomial(cfg: StabilityConfig) -> np.ndarray:
    """Coefficients of the electrostatic polynomial, highest degree first (cubic slot is zero)."""
    return _es_coeffs(cfg.a, cfg.lam, cfg.delta, cfg.beta, cfg.xi, cfg.T)[::-1].copy()


def em_polynomial_eval(cfg: StabilityConfig, q):
    """Unexpanded product form, for cross-checking the expansion."""
    x2 = cfg.xi**2
    s = cfg.beta * x2 * cfg.delta
    return (cfg.lam**2 * (q - 1) ** 2 * (q - 1 + s) + q**cfg.d * cfg.delta**2 * x2 * (q - 1 + s)
            + q ** (cfg.a + 1) * cfg.delta**2 * (q - 1))


def es_polynomial_eval(cfg: StabilityConfig, q):
    x2 = cfg.xi**2
    s = cfg.beta * x2 * cfg.delta
    lam2 = cfg.lam**2
    return (lam2 * (q - 1) * (q - 1 + s) + q ** (cfg.a + 1) * cfg.delta**2
            + cfg.T * cfg.delta**2 * lam2 * x2 * q**cfg.a + cfg.beta * cfg.delta * lam2 * (q - 1 + s) * x2)


# --------------------------------------------------------------------------
# roots

@dataclass(frozen=True)
class RootSet:
    roots: np.ndarray

    @property
    def max_modulus(self) -> float:
        return float(np.max(np.abs(self.roots))) if self.roots.size else 0.0

    @property
    def degree(self) -> int:
        return self.roots.size


def _polish(coeffs_high, roots, iters=3):
    dp = np.polyder(coeffs_high)
    r = roots.astype(complex)
    for _ in range(iters):
        f = np.polyval(coeffs_high, r)
        g = np.polyval(dp, r)
        ok = g != 0
        step = np.where(ok, f / np.where(ok, g, 1.0), 0.0)
        cand = r - step
        better = np.abs(np.polyval(coeffs_high, cand)) <= np.abs(f)
        r = np.where(better, cand, r)
    return r


def polynomial_roots(coefficients: Sequence[float]) -> RootSet:
    """All complex roots of a real polynomial given highest degree first."""
    c = np.trim_zeros(np.asarray(coefficients, dtype=float), "f")
    if c.size == 0:
        raise ValueError("the zero polynomial has no well-defined roots")
    if c.size == 1:
        return RootSet(np.empty(0, dtype=complex))
    r = np.roots(c)
    return RootSet(_polish(c, r))


_BINOM = [np.array([1.0]), np.array([1.0, 1.0]), np.array([1.0, 2.0, 1.0])]


def _em_coeffs_z(a, d, lam, delta, beta, xi):
    """Electromagnetic polynomial in ``z = q - 1`` (lowest degree first)."""
    xi2 = np.asarray(xi, dtype=float) ** 2
    s = beta * xi2 * delta
    out = np.zeros(xi2.shape + (4,))
    lam2, d2 = lam * lam, delta * delta
    out[..., 3] += lam2
    out[..., 2] += lam2 * s
    w = d2 * xi2
    for k, bk in enumerate(_BINOM[d]):  # (1+z)^d (z + s)
        out[..., k + 1] += w * bk
        out[..., k] += w * bk * s
    for k, bk in enumerate(_BINOM[a + 1]):  # (1+z)^(a+1) z
        out[..., k + 1] += d2 * bk
    return out


def _es_coeffs_z(a, lam, delta, beta, xi, T):
    xi2 = np.asarray(xi, dtype=float) ** 2
    s = beta * xi2 * delta
    out = np.zeros(xi2.shape + (4,))
    lam2, d2 = lam * lam, delta * delta
    out[..., 2] += lam2
    out[..., 1] += lam2 * s
    for k, bk in enumerate(_BINOM[a + 1]):
        out[..., k] += d2 * bk
    for k, bk in enumerate(_BINOM[a]):
        out[..., k] += T * d2 * lam2 * xi2 * bk
    v = beta * delta * lam2 * xi2
    out[..., 1] += v
    out[..., 0] += v * s
    return out


def _batched_roots_max_modulus(coeffs_low: np.ndarray, shift: float) -> np.ndarray:
    """Max ``|shift + root|`` over the roots of each polynomial in a stack (lowest degree first)."""
    out = np.zeros(coeffs_low.shape[0])
    scale = np.max(np.abs(coeffs_low), axis=1)
    deg = coeffs_low.shape[1] - 1
    eff = np.full(coeffs_low.shape[0], -1)
    for k in range(deg, -1, -1):
        mask = (eff < 0) & (np.abs(coeffs_low[:, k]) > 1e-300) & (np.abs(coeffs_low[:, k]) > 1e-15 * scale)
        eff[mask] = k
    for k in range(1, deg + 1):
        rows = np.nonzero(eff == k)[0]
        if rows.size == 0:
            continue
        c = coeffs_low[rows, : k + 1]
        mon = c / c[:, k:k + 1]
        comp = np.zeros((rows.size, k, k))
        comp[:, 0, :] = -mon[:, k - 1::-1]
        if k > 1:
            idx = np.arange(k - 1)
            comp[:, idx + 1, idx] = 1.0
        ev = np.linalg.eigvals(comp)
        for _ in range(2):  # Newton polish on the monic polynomial
            pv = np.zeros_like(ev)
            dv = np.zeros_like(ev)
            for j in range(k, -1, -1):
                dv = dv * ev + pv
                pv = pv * ev + mon[:, j][:, None]
            safe = np.abs(dv) > 0
            cand = ev - np.where(safe, pv / np.where(safe, dv, 1.0), 0.0)
            pc = np.zeros_like(cand)
            for j in range(k, -1, -1):
                pc = pc * cand + mon[:, j][:, None]
            # keep a step only if it lowers the residual (multiple roots stall Newton)
            ev = np.where(np.isfinite(cand) & (np.abs(pc) < np.abs(pv)), cand, ev)
        out[rows] = np.max(np.abs(shift + ev), axis=1)
    return out


def growth_profile(triple, lam, delta, h, gamma, T, n_xi: int = 2049):
    """``(xi, max|q|)`` over a uniform grid of ``[0, pi/h]``.

    Roots are computed for ``z = q - 1``: near ``q = 1`` the roots cluster and
    the shifted polynomial keeps them well conditioned.
    """
    if n_xi < 2:
        raise ValueError("need at least two xi samples")
    a, b, c = triple
    xi = np.linspace(0.0, math.pi / h, n_xi)
    beta = gamma * h
    em = _batched_roots_max_modulus(_em_coeffs_z(a, b + c, lam, delta, beta, xi), 1.0)
    es = _batched_roots_max_modulus(_es_coeffs_z(a, lam, delta, beta, xi, T), 1.0)
    return xi, np.maximum(em, es)


def max_growth_factor(triple, lam, delta, h, gamma=None, T=1.0, n_xi: int = 2049) -> float:
    if gamma is None:
        gamma = default_gamma(T)
    return float(np.max(growth_profile(triple, lam, delta, h, gamma, T, n_xi)[1]))


def is_stable(growth: float, tol: float = STABLE_TOL) -> bool:
    return growth <= 1.0 + tol


def find_stability_ratio(triple, lam, h, gamma=None, T=1.0, n_xi: int = 2049, tol: float = 1e-3,
                         lo: float = 1e-4, hi: float = 4.0) -> float:
    """Largest ``delta/h`` (to ``tol``) for which the scan is stable, by bisection."""
    if gamma is None:
        gamma = default_gamma(T)

    def ok(r):
        return is_stable(max_growth_factor(triple, lam, r * h, h, gamma, T, n_xi))

    if not ok(lo):
        return 0.0
    if ok(hi):
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def stability_region_scan(triple, lam_list: Iterable[float], ratio_list: Iterable[float], h: float,
                          gamma=None, T: float = 1.0, n_xi: int = 2049) -> list[dict]:
    if gamma is None:
        gamma = default_gamma(T)
    a, b, c = triple
    rows = []
    for lam in lam_list:
        for r in ratio_list:
            g = max_growth_factor(triple, lam, r * h, h, gamma, T, n_xi)
            rows.append(dict(a=a, b=b, c=c, **{"lambda": lam}, dt_over_h=r, max_growth=g, stable=is_stable(g)))
    return rows


STABILITY_COLUMNS = ("a", "b", "c", "lambda", "dt_over_h", "max_growth", "stable")


def write_stability_csv(rows, path_or_file):
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        w = csv.DictWriter(fh, fieldnames=STABILITY_COLUMNS)
        w.writeheader()
        for row in rows:
            w.writerow({k: (repr(float(v)) if isinstance(v, float) else v) for k, v in row.items()})
    finally:
        if own:
            fh.close()


def limit_root_110(xi: float, beta: float, delta: float) -> tuple[float, float]:
    """Nonzero limit roots of the electromagnetic polynomial for ``a=1, d=1`` as ``lam -> 0``."""
    x2 = xi * xi
    half = 0.5 * (1.0 - x2)
    rad = math.sqrt(half * half + (1.0 - beta * x2 * delta) * x2)
    return half + rad, half - rad


# --------------------------------------------------------------------------
# continuous dispersion relation

@dataclass(frozen=True)
class DispersionModes:
    em_plus: complex
    em_minus: complex
    es_plus: complex
    es_minus: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.em_plus, self.em_minus, self.es_plus, self.es_minus])


def dispersion_modes(lam: float, T: float, xi) -> DispersionModes:
    """Laplace exponents ``s`` (solutions ``exp(-s t)``) of the linearized model."""
    k2 = float(np.sum(np.asarray(xi, dtype=float) ** 2))
    if lam == 0:
        inf = complex(0.0, math.inf)
        return DispersionModes(inf, -inf, inf, -inf)
    em = 1j / lam * math.sqrt(1.0 + k2)
    es = 1j / lam * math.sqrt(1.0 + T * lam * lam * k2)
    return DispersionModes(em, -em, es, -es)


def fourier_ode_matrix(lam: float, T: float, xi) -> np.ndarray:
    """Generator ``M`` of ``dU/dt = M U`` for ``U = (n, u, E, B)`` (10 unknowns, 3-D vectors)."""
    k = np.zeros(3)
    v = np.atleast_1d(np.asarray(xi, dtype=float))
    k[: v.size] = v
    cross = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])  # k x (.)
    M = np.zeros((10, 10), dtype=complex)
    n, u, E, B = 0, slice(1, 4), slice(4, 7), slice(7, 10)
    M[n, u] = -1j * k
    M[u, n] = -1j * T * k
    M[u, E] = -np.eye(3)
    M[B, E] = -1j * cross
    M[E, B] = 1j * cross / lam**2
    M[E, u] = np.eye(3) / lam**2
    return M


def dispersion_oracle(lam: float, T: float, xi) -> np.ndarray:
    """Exponents ``s = -eig(M)``, sorted by imaginary part."""
    s = -np.linalg.eigvals(fourier_ode_matrix(lam, T, xi))
    return s[np.argsort(s.imag)]
