"""Thermal occupation numbers and effective temperatures of moving baths.

Natural units throughout (hbar = k_B = c = 1); ``beta`` is the canonical
thermal parameter and temperatures are just ``1/beta``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate

from . import _kernels
from .errors import DomainError, NumericalError

__all__ = [
    "BathParams",
    "planck_occupation",
    "relativistic_occupation",
    "effective_temperature",
    "directional_temperature",
    "solid_angle_average_factor",
    "u_over_sinh",
]


@dataclass(frozen=True)
class BathParams:
    """One thermal reservoir seen from the working medium's rest frame.

    beta  : inverse temperature (> 0)
    u     : rapidity of the bath's worldline; velocity is ``tanh(u)``
    gamma : Weisskopf-Wigner decay rate of the coupled transition (> 0)
    """

    beta: float
    u: float = 0.0
    gamma: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise DomainError(f"beta must be positive and finite, got {self.beta}")
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise DomainError(f"gamma must be positive and finite, got {self.gamma}")
        if not math.isfinite(self.u):
            raise DomainError(f"rapidity must be finite, got {self.u}")

    @classmethod
    def from_temperature(cls, temperature: float, u: float = 0.0, gamma: float = 1.0) -> "BathParams":
        if not temperature > 0:
            raise DomainError(f"temperature must be positive, got {temperature}")
        return cls(1.0 / temperature, u, gamma)

    @property
    def temperature(self) -> float:
        return 1.0 / self.beta

    @property
    def velocity(self) -> float:
        return math.tanh(self.u)


def _check_positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be positive and finite, got {value}")


def planck_occupation(omega: float, beta: float) -> float:
    """Bose-Einstein mean photon number ``1/(exp(beta*omega) - 1)``."""
    _check_positive("omega", omega)
    _check_positive("beta", beta)
    return _kernels.planck(omega * beta)


def relativistic_occupation(omega: float, bath: BathParams) -> float:
    """Mean occupation of a thermal field seen by a detector moving at rapidity ``bath.u``.

    For ``x = beta*omega`` and ``a = |u|``::

        N = ln[(1 - exp(-x e^a)) / (1 - exp(-x e^-a))] / (2 x sinh a)

    The closed form is 0/0 at ``a = 0``. Below ``a = 1e-6`` the Planck value
    is returned (relative error at most ``(x a)^2 / 6``). For ``a < 1e-3``
    with ``x a < 1e-3`` the second-order expansion

        N ~ n + a^2 x n (n + 1) (x (2n + 1) - 3) / 6,    n = planck(x)

    is used, whose truncation error is O(a^4) and which meets the closed form
    to ~1e-12 relative at the switchover.
    """
    _check_positive("omega", omega)
    return _kernels.rel_occupation(omega * bath.beta, bath.u)


def u_over_sinh(u: float) -> float:
    """u/sinh(u), with the removable singularity at 0 filled in."""
    if abs(u) < 1e-4:
        u2 = u * u
        return 1.0 - u2 / 6.0 + 7.0 * u2 * u2 / 360.0
    return u / math.sinh(u)


def effective_temperature(temperature: float, u: float) -> float:
    """Solid-angle averaged temperature ``T u / sinh(u)`` of a moving bath."""
    _check_positive("temperature", temperature)
    return temperature * u_over_sinh(u)


def directional_temperature(temperature: float, theta: float, u: float) -> float:
    """Temperature seen along a line of sight at angle ``theta`` to the motion axis."""
    _check_positive("temperature", temperature)
    if not 0.0 <= theta <= math.pi:
        raise DomainError(f"theta must lie in [0, pi], got {theta}")
    if not math.isfinite(u):
        raise DomainError(f"rapidity must be finite, got {u}")
    return temperature / (math.cosh(u) * (1.0 - math.tanh(u) * math.cos(theta)))


def solid_angle_average_factor(u: float, tol: float = 1e-13) -> float:
    """Average of ``1/(1 - v cos(theta))`` over the sphere, by adaptive quadrature.

    Analytically this is ``u/tanh(u)``; the quadrature is kept as an
    independent check of that value.
    """
    if not math.isfinite(u):
        raise DomainError(f"rapidity must be finite, got {u}")
    if u == 0.0:
        return 1.0
    v = math.tanh(u)
    value, err = integrate.quad(
        lambda th: math.sin(th) / (1.0 - v * math.cos(th)),
        0.0,
        math.pi,
        epsabs=0.0,
        epsrel=tol,
        limit=200,
    )
    value *= 0.5
    if not err * 0.5 <= 1e-10 * max(1.0, abs(value)):
        raise NumericalError(f"solid-angle quadrature did not converge (u={u}, error estimate {err:.3g})")
    return value
