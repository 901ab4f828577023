"""Efficiency bounds for a maser engine whose cold bath moves at rapidity u.

``tau`` is the temperature ratio ``T_c/T_h = beta_h/beta_c``; the Carnot
efficiency is ``1 - tau``. Moving the cold bath lowers its effective
temperature to ``T_c u/sinh(u)``, which lifts the reachable efficiency to
``1 - tau u/sinh(u)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._search import bisect, grid_then_golden
from .errors import DomainError, NoRootError
from .occupation import u_over_sinh

__all__ = [
    "BoundInputs",
    "carnot_efficiency",
    "generalized_carnot_bound",
    "zero_power_efficiency",
    "zero_power_omega_c",
    "asymptotic_power",
    "emp_analytic",
    "emp_carnot_limit",
    "emp_numeric",
    "emp_full_model",
    "curzon_ahlborn",
]


@dataclass(frozen=True)
class BoundInputs:
    tau: float
    u: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise DomainError(f"tau must be positive, got {self.tau}")
        if not math.isfinite(self.u):
            raise DomainError(f"rapidity must be finite, got {self.u}")

    @classmethod
    def from_betas(cls, beta_h: float, beta_c: float, u: float = 0.0) -> "BoundInputs":
        return cls(beta_h / beta_c, u)

    @property
    def eta_carnot(self) -> float:
        return 1.0 - self.tau


def _tau(tau):
    if not (math.isfinite(tau) and tau > 0):
        raise DomainError(f"tau must be positive, got {tau}")
    return tau


def carnot_efficiency(tau: float) -> float:
    return 1.0 - _tau(tau)


def generalized_carnot_bound(tau: float, u: float = 0.0) -> float:
    """``1 - tau u / sinh(u)``; equals the Carnot value ``1 - tau`` at u = 0."""
    return 1.0 - _tau(tau) * u_over_sinh(u)


def zero_power_omega_c(beta_h: float, beta_c: float, u_c: float, omega_h: float = 1.0, xtol: float = 1e-12) -> float:
    """Cold frequency in ``(0, omega_h]`` where the two occupations coincide.

    The hot bath is taken at rest. At this point the drive coherence, and
    with it every flux, vanishes.
    """
    for name, val in (("beta_h", beta_h), ("beta_c", beta_c), ("omega_h", omega_h)):
        if not (math.isfinite(val) and val > 0):
            raise DomainError(f"{name} must be positive, got {val}")
    n_hot = _kernels.planck(beta_h * omega_h)

    def gap(omega_c):
        return n_hot - _kernels.rel_occupation(beta_c * omega_c, u_c)

    if gap(omega_h) < 0.0:
        raise NoRootError("no engine window: cold occupation exceeds hot occupation for every omega_c < omega_h")
    lo = omega_h * 1e-12
    if gap(lo) >= 0.0:
        raise NoRootError("no engine window: hot occupation dominates down to omega_c -> 0")
    return bisect(gap, lo, omega_h, xtol=xtol)


def zero_power_efficiency(beta_h: float, beta_c: float, u_c: float, omega_h: float = 1.0) -> float:
    """Efficiency ``1 - omega_c*/omega_h`` at the vanishing-power end of the engine window."""
    return 1.0 - zero_power_omega_c(beta_h, beta_c, u_c, omega_h) / omega_h


def asymptotic_power(gamma: float, tau: float, u: float, omega_h: float, omega_c: float) -> float:
    """Power for strong driving and hot baths at high temperature (equal rates ``gamma``)."""
    a = _tau(tau) * u_over_sinh(u) * omega_h  # tau u omega_h / sinh u
    return gamma * (omega_c - omega_h) * (a - omega_c) / (3.0 * (omega_c + a))


def _asymptotic_power_ext(gamma, a, omega_h, omega_c):
    # Extended precision: the argmax of a smooth maximum is only resolved to
    # ~sqrt(eps) of the arithmetic used to compare values.
    g, a, wh, wc = (np.longdouble(v) for v in (gamma, a, omega_h, omega_c))
    return g * (wc - wh) * (a - wc) / (3 * (wc + a))


def emp_analytic(tau: float, u: float = 0.0) -> float:
    """Efficiency at maximum of :func:`asymptotic_power` over ``omega_c``.

    With ``t = tau u / sinh(u)`` the optimum sits at
    ``omega_c/omega_h = sqrt(2 t^2 + 2 t) - t``.
    """
    t = _tau(tau) * u_over_sinh(u)
    return 1.0 - (math.sqrt(2.0 * t * t + 2.0 * t) - t)


def emp_carnot_limit(eta_c: float) -> float:
    """Resting-bath limit of :func:`emp_analytic` written in the Carnot efficiency."""
    return 2.0 - eta_c - math.sqrt(2.0 * (2.0 - 3.0 * eta_c + eta_c * eta_c))


def emp_numeric(gamma: float, tau: float, u: float, omega_h: float = 1.0) -> tuple[float, float]:
    """Numerically maximize :func:`asymptotic_power` over ``omega_c`` in ``(0, omega_h)``.

    Returns ``(omega_c_opt, efficiency)``.
    """
    if not (gamma > 0 and omega_h > 0):
        raise DomainError("gamma and omega_h must be positive")
    a = _tau(tau) * u_over_sinh(u) * omega_h
    omega_c = grid_then_golden(lambda wc: _asymptotic_power_ext(gamma, a, omega_h, wc), 0.0, omega_h)
    return omega_c, 1.0 - omega_c / omega_h


def emp_full_model(cfg_values: dict, method: str = "closed_form") -> tuple[float, float]:
    """Maximize the full steady-state power over ``omega_c`` in ``(0, omega_h)``.

    ``cfg_values`` holds :meth:`EngineConfig.from_values` keywords (its
    ``omega_c`` is ignored). For comparison with :func:`emp_analytic`; the
    two agree only for strong driving and hot baths.
    """
    from .dynamics import EngineConfig
    from .thermo import performance

    base = dict(cfg_values)
    base.pop("omega_c", None)
    omega_h = base.get("omega_h", 10.0)

    def power(wc):
        if wc <= 0.0:
            return -math.inf
        return performance(EngineConfig.from_values(omega_c=wc, **base), method).power

    omega_c = grid_then_golden(power, 0.0, omega_h)
    return omega_c, 1.0 - omega_c / omega_h


def curzon_ahlborn(eta_c: float) -> float:
    if not 0.0 <= eta_c < 1.0:
        raise DomainError(f"Carnot efficiency must lie in [0, 1), got {eta_c}")
    return 1.0 - math.sqrt(1.0 - eta_c)
