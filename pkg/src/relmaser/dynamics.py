"""Steady state of the driven three-level maser in the rotating frame.

Levels are ordered ``(G, e, r)``: ground, intermediate (cold transition,
frequency ``omega_c``) and excited (hot transition, frequency ``omega_h``).
The classical drive couples ``e <-> r`` resonantly, so in the rotating frame
the only Hamiltonian term is ``V = xi (|r><e| + |e><r|)``.

Each bath enters through Lindblad dissipators ``gamma (N+1) D[|G><x|]`` and
``gamma N D[|x><G|]`` with ``D[A]rho = A rho A^+ - {A^+A, rho}/2``. Rates are
quoted in this convention; populations relax at ``gamma (N+1)`` and the drive
coherence at half the summed emission rates.

Three routes to the same steady state are provided:

* :func:`closed_form_steady_state` -- algebraic solution (coherence formula
  plus back-substituted populations);
* :func:`steady_state_linear` -- dense solve of the element-wise rate
  equations with the trace constraint;
* :func:`liouvillian_steady_state` -- null vector of the full 9x9 generator
  acting on the row-major vectorized density matrix. Shares no code with the
  other two and serves as their oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, NumericalError
from .occupation import BathParams, relativistic_occupation

__all__ = [
    "EngineConfig",
    "SteadyState",
    "closed_form_coherence",
    "closed_form_steady_state",
    "steady_state_linear",
    "liouvillian",
    "liouvillian_density_matrix",
    "liouvillian_steady_state",
    "G",
    "E",
    "R",
]

G, E, R = 0, 1, 2


@dataclass(frozen=True)
class EngineConfig:
    omega_h: float
    omega_c: float
    xi: float
    hot: BathParams
    cold: BathParams

    def __post_init__(self):
        for name in ("omega_h", "omega_c"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be positive and finite, got {value}")
        # xi = 0 is admitted: it is the undriven reference case.
        if not (math.isfinite(self.xi) and self.xi >= 0):
            raise DomainError(f"xi must be non-negative and finite, got {self.xi}")

    @classmethod
    def from_values(
        cls,
        *,
        omega_h: float = 10.0,
        omega_c: float = 5.0,
        xi: float = 1.0,
        gamma_h: float = 1.0,
        gamma_c: float = 1.0,
        beta_h: float,
        beta_c: float,
        u_h: float = 0.0,
        u_c: float = 0.0,
    ) -> "EngineConfig":
        return cls(omega_h, omega_c, xi, BathParams(beta_h, u_h, gamma_h), BathParams(beta_c, u_c, gamma_c))

    @property
    def drive_frequency(self) -> float:
        return self.omega_h - self.omega_c

    @property
    def n_hot(self) -> float:
        return relativistic_occupation(self.omega_h, self.hot)

    @property
    def n_cold(self) -> float:
        return relativistic_occupation(self.omega_c, self.cold)

    def as_dict(self) -> dict:
        return {
            "omega_h": self.omega_h,
            "omega_c": self.omega_c,
            "xi": self.xi,
            "gamma_h": self.hot.gamma,
            "gamma_c": self.cold.gamma,
            "beta_h": self.hot.beta,
            "beta_c": self.cold.beta,
            "u_h": self.hot.u,
            "u_c": self.cold.u,
        }


@dataclass(frozen=True)
class SteadyState:
    """Rotating-frame steady state; ``coh`` is rho_re (rho_er is its conjugate)."""

    p_g: float
    p_e: float
    p_r: float
    coh: complex

    def matrix(self) -> np.ndarray:
        rho = np.diag([self.p_g, self.p_e, self.p_r]).astype(complex)
        rho[R, E] = self.coh
        rho[E, R] = np.conj(self.coh)
        return rho

    @property
    def populations(self) -> np.ndarray:
        return np.array([self.p_g, self.p_e, self.p_r])

    def as_dict(self) -> dict:
        return {
            "p_g": self.p_g,
            "p_e": self.p_e,
            "p_r": self.p_r,
            "coh_re": float(np.real(self.coh)),
            "coh_im": float(np.imag(self.coh)),
        }


# ---------------------------------------------------------- closed form


def closed_form_coherence(cfg: EngineConfig) -> complex:
    y = _kernels.coherence_imag(cfg.n_hot, cfg.n_cold, cfg.hot.gamma, cfg.cold.gamma, cfg.xi)
    return complex(0.0, y)


def closed_form_steady_state(cfg: EngineConfig) -> SteadyState:
    nh, nc = cfg.n_hot, cfg.n_cold
    gh, gc, xi = cfg.hot.gamma, cfg.cold.gamma, cfg.xi
    y = _kernels.coherence_imag(nh, nc, gh, gc, xi)
    # Stationary population balance; drive current is 2*xi*y out of e into r.
    # p_r = (gh nh p_g - 2 xi y) / (gh (nh+1)),  p_e = (gc nc p_g + 2 xi y) / (gc (nc+1))
    a_r, b_r = nh / (nh + 1.0), -2.0 * xi * y / (gh * (nh + 1.0))
    a_e, b_e = nc / (nc + 1.0), 2.0 * xi * y / (gc * (nc + 1.0))
    p_g = (1.0 - b_r - b_e) / (1.0 + a_r + a_e)
    return SteadyState(p_g, a_e * p_g + b_e, a_r * p_g + b_r, complex(0.0, y))


# ----------------------------------------------------- element equations


def steady_state_linear(cfg: EngineConfig) -> SteadyState:
    """Solve the stationary element-wise equations as a dense 5x5 real system.

    Unknowns are ``(p_g, p_e, p_r, Re rho_re, Im rho_re)``; rho_er is the
    conjugate of rho_re and is not an independent unknown.
    """
    nh, nc = cfg.n_hot, cfg.n_cold
    gh, gc, xi = cfg.hot.gamma, cfg.cold.gamma, cfg.xi
    kappa = 0.5 * (gh * (nh + 1.0) + gc * (nc + 1.0))
    # i xi (rho_re - rho_er) = -2 xi Im(rho_re)
    a = np.array(
        [
            [gh * nh, 0.0, -gh * (nh + 1.0), 0.0, -2.0 * xi],  # d p_r / dt
            [gc * nc, -gc * (nc + 1.0), 0.0, 0.0, 2.0 * xi],  # d p_e / dt
            [0.0, 0.0, 0.0, -kappa, 0.0],  # Re d rho_re / dt
            [0.0, -xi, xi, 0.0, -kappa],  # Im d rho_re / dt
            [1.0, 1.0, 1.0, 0.0, 0.0],  # trace
        ]
    )
    b = np.array([0.0, 0.0, 0.0, 0.0, 1.0])
    try:
        sol = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"singular steady-state system: {exc}") from exc
    p_g, p_e, p_r, re, im = sol
    return SteadyState(float(p_g), float(p_e), float(p_r), complex(re, im))


# ------------------------------------------------------------ Liouvillian


def _proj(i, j):
    m = np.zeros((3, 3), dtype=complex)
    m[i, j] = 1.0
    return m


def _spre(a):
    return np.kron(a, np.eye(3))


def _spost(a):
    return np.kron(np.eye(3), a.T)


def _dissipator(a):
    ada = a.conj().T @ a
    return _spre(a) @ _spost(a.conj().T) - 0.5 * (_spre(ada) + _spost(ada))


def drive_hamiltonian(xi: float) -> np.ndarray:
    return xi * (_proj(R, E) + _proj(E, R))


def bare_hamiltonian(cfg: EngineConfig) -> np.ndarray:
    return np.diag([0.0, cfg.omega_c, cfg.omega_h]).astype(complex)


def bath_generators(cfg: EngineConfig) -> tuple[np.ndarray, np.ndarray]:
    """Hot and cold dissipative superoperators (9x9, row-major vec)."""
    nh, nc = cfg.n_hot, cfg.n_cold
    gh, gc = cfg.hot.gamma, cfg.cold.gamma
    hot = gh * (nh + 1.0) * _dissipator(_proj(G, R)) + gh * nh * _dissipator(_proj(R, G))
    cold = gc * (nc + 1.0) * _dissipator(_proj(G, E)) + gc * nc * _dissipator(_proj(E, G))
    return hot, cold


def liouvillian(cfg: EngineConfig) -> np.ndarray:
    v = drive_hamiltonian(cfg.xi)
    hot, cold = bath_generators(cfg)
    return -1j * (_spre(v) - _spost(v)) + hot + cold


def liouvillian_density_matrix(cfg: EngineConfig, residual_tol: float = 1e-10) -> np.ndarray:
    """Trace-one null vector of the generator, reshaped to a 3x3 density matrix.

    Raises :class:`NumericalError` when the null space is not one-dimensional
    or when ``max|L rho| > residual_tol * max(1, ||L||_inf)``.
    """
    lv = liouvillian(cfg)
    _, s, vh = np.linalg.svd(lv)
    scale = s[0]
    if s[-2] <= 1e-13 * scale:
        raise NumericalError(f"degenerate generator: null space dimension > 1 (singular values {s[-3:]})")
    rho = vh[-1].conj().reshape(3, 3)
    tr = np.trace(rho)
    if abs(tr) == 0.0:
        raise NumericalError("null vector has zero trace")
    rho = rho / tr
    rho = 0.5 * (rho + rho.conj().T)
    norm = max(1.0, float(np.abs(lv).sum(axis=1).max()))
    resid = float(np.abs(lv @ rho.reshape(-1)).max())
    if resid > residual_tol * norm:
        raise NumericalError(f"steady-state residual {resid:.3g} exceeds tolerance")
    return rho


def liouvillian_steady_state(cfg: EngineConfig) -> SteadyState:
    rho = liouvillian_density_matrix(cfg)
    return SteadyState(float(rho[G, G].real), float(rho[E, E].real), float(rho[R, R].real), complex(rho[R, E]))
