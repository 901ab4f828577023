"""Hot numeric kernels: occupation numbers and steady-state fluxes.

Every array kernel exists twice, as a numba-compiled loop and as a
vectorized numpy expression. ``RELMASER_NUMBA=0`` in the environment forces
the numpy path (and leaves the scalar helpers un-jitted); otherwise numba is
used when it can be imported.

The scalar helpers below are plain ``math`` code so the same source serves
the scalar public API and the compiled loops.
"""
from __future__ import annotations

import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("RELMASER_NUMBA", "1").strip().lower() not in (
    "0",
    "false",
    "no",
    "off",
)

# |u| below this: Planck value is returned outright.
U_PLANCK = 1e-6
# |u| (and |u|*x) below this: second-order expansion in u.
U_SERIES = 1e-3

_LN2 = 0.6931471805599453
# Beyond this, 1/expm1(x) is replaced by exp(-x); relative error exp(-700).
_X_BIG = 700.0


def _jit(fn):
    if USE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


@_jit
def log1mexp(y):
    """ln(1 - exp(-y)) for y > 0, accurate at both ends."""
    if y < _LN2:
        return math.log(-math.expm1(-y))
    return math.log1p(-math.exp(-y))


@_jit
def planck(x):
    """1/(e^x - 1) for x = beta*omega > 0."""
    if x > _X_BIG:
        return math.exp(-x)
    return 1.0 / math.expm1(x)


@_jit
def rel_occupation(x, u):
    """Motion-modified occupation at x = beta*omega and rapidity u."""
    a = abs(u)
    if a < U_PLANCK:
        return planck(x)
    if a < U_SERIES and a * x < U_SERIES:
        n = planck(x)
        return n + a * a * x * n * (n + 1.0) * (x * (2.0 * n + 1.0) - 3.0) / 6.0
    num = log1mexp(x * math.exp(a)) - log1mexp(x * math.exp(-a))
    return num / (2.0 * x * math.sinh(a))


@_jit
def coherence_imag(n_hot, n_cold, gamma_h, gamma_c, xi):
    """Imaginary part of the steady-state drive coherence (real part is zero)."""
    den = 4.0 * xi * xi * ((1.0 + 3.0 * n_hot) * gamma_h + (1.0 + 3.0 * n_cold) * gamma_c) + (
        gamma_c
        * gamma_h
        * (1.0 + 2.0 * n_hot + n_cold * (2.0 + 3.0 * n_hot))
        * ((1.0 + n_cold) * gamma_c + (1.0 + n_hot) * gamma_h)
    )
    return 2.0 * xi * (n_hot - n_cold) * gamma_c * gamma_h / den


def _fluxes_loop_py(omega_h, omega_c, beta_h, beta_c, u_h, u_c, gamma_h, gamma_c, xi, out):
    for i in range(omega_h.shape[0]):
        nh = rel_occupation(beta_h[i] * omega_h[i], u_h[i])
        nc = rel_occupation(beta_c[i] * omega_c[i], u_c[i])
        y = coherence_imag(nh, nc, gamma_h[i], gamma_c[i], xi[i])
        out[0, i] = 2.0 * xi[i] * (omega_h[i] - omega_c[i]) * y
        out[1, i] = 2.0 * xi[i] * omega_h[i] * y
        out[2, i] = 2.0 * xi[i] * omega_c[i] * y
        out[3, i] = y
        out[4, i] = nh
        out[5, i] = nc


def _occupation_loop_py(x, u, out):
    for i in range(x.shape[0]):
        out[i] = rel_occupation(x[i], u[i])


_fluxes_loop = _jit(_fluxes_loop_py)
_occupation_loop = _jit(_occupation_loop_py)


# ---------------------------------------------------------------- numpy path


def log1mexp_np(y):
    y = np.asarray(y, dtype=np.float64)
    small = y < _LN2
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(small, np.log(-np.expm1(-y)), np.log1p(-np.exp(-y)))


def planck_np(x):
    x = np.asarray(x, dtype=np.float64)
    with np.errstate(over="ignore", divide="ignore"):
        return np.where(x > _X_BIG, np.exp(-x), 1.0 / np.expm1(np.minimum(x, _X_BIG)))


def rel_occupation_np(x, u):
    x, u = np.broadcast_arrays(np.asarray(x, dtype=np.float64), np.asarray(u, dtype=np.float64))
    a = np.abs(u)
    n = planck_np(x)
    series = (a < U_SERIES) & (a * x < U_SERIES)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        corr = a * a * x * n * (n + 1.0) * (x * (2.0 * n + 1.0) - 3.0) / 6.0
        exact = (log1mexp_np(x * np.exp(a)) - log1mexp_np(x * np.exp(-a))) / (2.0 * x * np.sinh(a))
    out = np.where(series, n + corr, exact)
    return np.where(a < U_PLANCK, n, out)


def _fluxes_numpy(omega_h, omega_c, beta_h, beta_c, u_h, u_c, gamma_h, gamma_c, xi):
    nh = rel_occupation_np(beta_h * omega_h, u_h)
    nc = rel_occupation_np(beta_c * omega_c, u_c)
    den = 4.0 * xi * xi * ((1.0 + 3.0 * nh) * gamma_h + (1.0 + 3.0 * nc) * gamma_c) + (
        gamma_c * gamma_h * (1.0 + 2.0 * nh + nc * (2.0 + 3.0 * nh)) * ((1.0 + nc) * gamma_c + (1.0 + nh) * gamma_h)
    )
    y = 2.0 * xi * (nh - nc) * gamma_c * gamma_h / den
    return np.stack(
        [
            2.0 * xi * (omega_h - omega_c) * y,
            2.0 * xi * omega_h * y,
            2.0 * xi * omega_c * y,
            y,
            nh,
            nc,
        ]
    )


# ------------------------------------------------------------- dispatchers


def _resolve(backend):
    if backend is None:
        return "numba" if USE_NUMBA else "numpy"
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


def occupation_array(x, u, backend=None):
    """Vectorized ``rel_occupation`` over broadcast (x, u)."""
    x, u = np.broadcast_arrays(np.asarray(x, dtype=np.float64), np.asarray(u, dtype=np.float64))
    if _resolve(backend) == "numpy":
        return rel_occupation_np(x, u)
    shape = x.shape
    # copies: numba rejects read-only broadcast views with a warning
    xf = np.array(x).ravel()
    uf = np.array(u).ravel()
    out = np.empty_like(xf)
    _occupation_loop(xf, uf, out)
    return out.reshape(shape)


def steady_fluxes(omega_h, omega_c, beta_h, beta_c, u_h, u_c, gamma_h, gamma_c, xi, backend=None):
    """Steady-state fluxes for broadcast parameter arrays.

    Returns an array of shape ``(6, *shape)`` holding power, hot heat flux,
    cold heat flux, Im(coherence), hot occupation and cold occupation.
    """
    args = np.broadcast_arrays(
        *(np.asarray(a, dtype=np.float64) for a in (omega_h, omega_c, beta_h, beta_c, u_h, u_c, gamma_h, gamma_c, xi))
    )
    shape = args[0].shape
    if _resolve(backend) == "numpy":
        return _fluxes_numpy(*args)
    flat = [np.array(a).ravel() for a in args]
    out = np.empty((6, flat[0].shape[0]))
    _fluxes_loop(*flat, out)
    return out.reshape((6,) + shape)
