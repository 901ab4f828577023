"""Heat fluxes, power, efficiency and operation mode at the steady state.

Sign convention: ``power`` > 0 is work delivered to the drive, ``q_hot`` > 0
is heat absorbed from the hot bath, ``q_cold`` > 0 is heat released into the
cold bath. With ``rho_re = i y`` the steady-state fluxes are

    q_hot = 2 xi omega_h y,   q_cold = 2 xi omega_c y,   power = 2 xi (omega_h - omega_c) y

so ``power / q_hot = 1 - omega_c / omega_h`` whenever ``y != 0``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import dynamics
from .dynamics import EngineConfig, SteadyState

__all__ = ["Mode", "Performance", "performance", "classify_mode", "classify_modes", "compact_power", "MODE_TOL"]

MODE_TOL = 1e-14


class Mode(str, enum.Enum):
    ENGINE = "Engine"
    REFRIGERATOR = "Refrigerator"
    DISSIPATOR = "Dissipator"

    @property
    def code(self) -> int:
        return _MODE_CODES[self]

    @classmethod
    def from_code(cls, code: int) -> "Mode":
        return _MODES_BY_CODE[int(code)]


_MODE_CODES = {Mode.DISSIPATOR: 0, Mode.ENGINE: 1, Mode.REFRIGERATOR: 2}
_MODES_BY_CODE = {v: k for k, v in _MODE_CODES.items()}


@dataclass(frozen=True)
class Performance:
    power: float
    q_hot: float
    q_cold: float
    efficiency: float | None
    mode: Mode
    steady_state: SteadyState | None = field(default=None, compare=False)

    def as_dict(self) -> dict:
        out = {
            "power": self.power,
            "q_hot": self.q_hot,
            "q_cold": self.q_cold,
            "efficiency": self.efficiency,
            "mode": self.mode.value,
        }
        if self.steady_state is not None:
            out["steady_state"] = self.steady_state.as_dict()
        return out


def classify_mode(power: float, q_hot: float, q_cold: float, scale: float | None = None) -> Mode:
    """Engine, refrigerator, or neither, from the three steady-state fluxes.

    ``scale`` sets the zero threshold ``MODE_TOL * scale``; it defaults to the
    largest flux magnitude. Boundary points (any flux at zero) are dissipators.
    """
    if scale is None:
        scale = max(abs(power), abs(q_hot), abs(q_cold))
    tol = MODE_TOL * scale
    if power > tol and q_hot > tol:
        return Mode.ENGINE
    if power < -tol and q_cold < -tol:
        return Mode.REFRIGERATOR
    return Mode.DISSIPATOR


def classify_modes(power, q_hot, q_cold, scale) -> np.ndarray:
    """Vectorized :func:`classify_mode`; returns integer mode codes."""
    tol = MODE_TOL * np.asarray(scale, dtype=float)
    engine = (power > tol) & (q_hot > tol)
    fridge = (power < -tol) & (q_cold < -tol)
    return np.where(engine, Mode.ENGINE.code, np.where(fridge, Mode.REFRIGERATOR.code, Mode.DISSIPATOR.code)).astype(
        np.int8
    )


def flux_scale(cfg: EngineConfig) -> float:
    # |rho_re| <= 1/2 bounds every flux by xi * max(omega).
    return cfg.xi * max(cfg.omega_h, cfg.omega_c)


def _from_coherence(cfg: EngineConfig, coh: complex, ss: SteadyState | None) -> Performance:
    xi = cfg.xi
    j = 1j * xi * (np.conj(coh) - coh)  # i xi (rho_er - rho_re)
    power = float((cfg.omega_h - cfg.omega_c) * j.real)
    q_hot = float(cfg.omega_h * j.real)
    q_cold = float(cfg.omega_c * j.real)
    return _assemble(cfg, power, q_hot, q_cold, ss)


def _assemble(cfg, power, q_hot, q_cold, ss):
    eff = power / q_hot if q_hot != 0.0 else None
    mode = classify_mode(power, q_hot, q_cold, flux_scale(cfg))
    return Performance(power, q_hot, q_cold, eff, mode, ss)


def _from_liouvillian(cfg: EngineConfig) -> Performance:
    rho = dynamics.liouvillian_density_matrix(cfg)
    h0 = dynamics.bare_hamiltonian(cfg)
    v = dynamics.drive_hamiltonian(cfg.xi)
    hot, cold = dynamics.bath_generators(cfg)
    vec = rho.reshape(-1)
    power = float(np.real(1j * np.trace((h0 @ v - v @ h0) @ rho)))
    q_hot = float(np.real(np.trace((hot @ vec).reshape(3, 3) @ h0)))
    q_cold = -float(np.real(np.trace((cold @ vec).reshape(3, 3) @ h0)))
    ss = SteadyState(float(rho[0, 0].real), float(rho[1, 1].real), float(rho[2, 2].real), complex(rho[2, 1]))
    return _assemble(cfg, power, q_hot, q_cold, ss)


def performance(cfg: EngineConfig, method: str = "closed_form") -> Performance:
    """Steady-state thermodynamic performance of ``cfg``.

    ``method`` picks the steady-state route: ``"closed_form"`` (default),
    ``"linear"``, or ``"liouvillian"``. The last evaluates power as
    ``i Tr([H0, V] rho)`` and heat as ``Tr(L_bath[rho] H0)`` directly on the
    null vector of the full generator, independently of the other two.
    """
    if method == "closed_form":
        ss = dynamics.closed_form_steady_state(cfg)
        return _from_coherence(cfg, ss.coh, ss)
    if method == "linear":
        ss = dynamics.steady_state_linear(cfg)
        return _from_coherence(cfg, ss.coh, ss)
    if method == "liouvillian":
        return _from_liouvillian(cfg)
    raise ValueError(f"unknown method {method!r}")


def compact_power(cfg: EngineConfig) -> float:
    """Power from the compact rational formula in the occupations."""
    nh, nc = cfg.n_hot, cfg.n_cold
    gh, gc, xi = cfg.hot.gamma, cfg.cold.gamma, cfg.xi
    b = gh * (3.0 * nh + 1.0) + gc * (3.0 * nc + 1.0)
    c = 3.0 * nh * nc + 2.0 * nh + 2.0 * nc + 1.0
    d = gh * (nh + 1.0) + gc * (nc + 1.0)
    num = 4.0 * (nh - nc) * gh * gc * xi * xi * (cfg.omega_h - cfg.omega_c)
    den = 4.0 * xi * xi * b + c * d * gc * gh
    if den == 0.0 or not math.isfinite(den):
        return 0.0
    return num / den
