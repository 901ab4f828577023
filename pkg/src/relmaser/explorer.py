"""Monte Carlo clouds, efficiency-power frontiers and parameter scans.

All bulk evaluation goes through :func:`relmaser._kernels.steady_fluxes` in
fixed-size blocks. Block ``b`` draws its random numbers from
``SeedSequence(seed, spawn_key=(b,))``, so a sample depends only on
``(seed, index)`` and never on how many worker threads processed the blocks.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import _kernels
from .bounds import asymptotic_power
from .errors import DomainError, InsufficientPointsError
from .thermo import Mode, classify_modes

__all__ = [
    "BLOCK_SIZE",
    "SampleSpec",
    "CloudPoint",
    "Cloud",
    "sample_cloud",
    "Frontier",
    "upper_frontier",
    "Curve",
    "eta_power_curve",
    "ScanCell",
    "Grid",
    "power_grid",
    "mode_map",
]

BLOCK_SIZE = 8192


def _check_range(name, rng):
    lo, hi = rng
    if not (math.isfinite(lo) and math.isfinite(hi) and 0 < lo <= hi):
        raise DomainError(f"{name} must satisfy 0 < lo <= hi, got {rng}")


@dataclass(frozen=True)
class SampleSpec:
    """Monte Carlo setup: uniform frequencies, everything else fixed.

    ``boundary_fraction`` of the samples are instead placed just on the
    engine side of the zero-power line ``N_h = N_c`` (``omega_c`` within a
    relative ``boundary_width`` above its zero-power value), which is where
    the efficiency approaches its upper limit.
    """

    n_samples: int = 100_000
    omega_c_range: tuple[float, float] = (0.01, 5.0)
    omega_h_range: tuple[float, float] = (0.01, 10.0)
    beta_h: float = 0.4
    beta_c: float = 0.8
    u_h: float = 0.0
    u_c: float = 1.0
    seed: int = 0
    gamma_h: float = 1.0
    gamma_c: float = 1.0
    xi: float = 1.0
    boundary_fraction: float = 0.0
    boundary_width: float = 1e-3

    def __post_init__(self):
        if int(self.n_samples) != self.n_samples or self.n_samples < 1:
            raise DomainError(f"n_samples must be a positive integer, got {self.n_samples}")
        _check_range("omega_c_range", self.omega_c_range)
        _check_range("omega_h_range", self.omega_h_range)
        for name in ("beta_h", "beta_c", "gamma_h", "gamma_c"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if not self.xi >= 0:
            raise DomainError("xi must be non-negative")
        if not 0.0 <= self.boundary_fraction <= 1.0:
            raise DomainError("boundary_fraction must lie in [0, 1]")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")

    @property
    def tau(self) -> float:
        return self.beta_h / self.beta_c

    def as_dict(self) -> dict:
        d = asdict(self)
        d["omega_c_range"] = list(self.omega_c_range)
        d["omega_h_range"] = list(self.omega_h_range)
        return d


@dataclass(frozen=True)
class CloudPoint:
    index: int
    efficiency: float
    power: float
    omega_c: float
    omega_h: float
    mode: Mode


@dataclass(frozen=True)
class Cloud:
    """Columnar Monte Carlo result; ``cloud[i]`` gives a :class:`CloudPoint`."""

    index: np.ndarray
    omega_c: np.ndarray
    omega_h: np.ndarray
    power: np.ndarray
    q_hot: np.ndarray
    q_cold: np.ndarray
    efficiency: np.ndarray
    mode: np.ndarray

    def __len__(self):
        return self.index.shape[0]

    def __getitem__(self, i) -> CloudPoint:
        return CloudPoint(
            int(self.index[i]),
            float(self.efficiency[i]),
            float(self.power[i]),
            float(self.omega_c[i]),
            float(self.omega_h[i]),
            Mode.from_code(self.mode[i]),
        )

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @property
    def engine(self) -> np.ndarray:
        return self.mode == Mode.ENGINE.code


def _zero_power_omega_c_array(omega_h, beta_h, beta_c, u_h, u_c, backend=None, iters=64):
    """Vectorized bisection for N_h(omega_h) = N_c(omega_c); NaN where no root in (0, omega_h]."""
    n_hot = _kernels.occupation_array(beta_h * omega_h, u_h, backend)
    lo = omega_h * 1e-12
    hi = omega_h.copy()
    ok = (n_hot - _kernels.occupation_array(beta_c * hi, u_c, backend) >= 0) & (
        n_hot - _kernels.occupation_array(beta_c * lo, u_c, backend) < 0
    )
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        up = n_hot - _kernels.occupation_array(beta_c * mid, u_c, backend) < 0
        lo = np.where(up, mid, lo)
        hi = np.where(up, hi, mid)
    return np.where(ok, hi, np.nan)


def _evaluate_block(spec: SampleSpec, block: int, backend):
    start = block * BLOCK_SIZE
    stop = min(spec.n_samples, start + BLOCK_SIZE)
    m = stop - start
    rng = np.random.default_rng(np.random.SeedSequence(spec.seed, spawn_key=(block,)))
    u1 = rng.random(m)
    u2 = rng.random(m)
    clo, chi = spec.omega_c_range
    hlo, hhi = spec.omega_h_range
    omega_c = clo + (chi - clo) * u1
    omega_h = hlo + (hhi - hlo) * u2
    if spec.boundary_fraction > 0.0:
        pick = rng.random(m) < spec.boundary_fraction
        if pick.any():
            star = _zero_power_omega_c_array(
                omega_h[pick], spec.beta_h, spec.beta_c, spec.u_h, spec.u_c, backend
            ) * (1.0 + spec.boundary_width * u1[pick])
            keep = np.isfinite(star) & (star >= clo) & (star <= chi)
            sub = omega_c[pick]
            sub[keep] = star[keep]
            omega_c[pick] = sub
    out = _kernels.steady_fluxes(
        omega_h,
        omega_c,
        spec.beta_h,
        spec.beta_c,
        spec.u_h,
        spec.u_c,
        spec.gamma_h,
        spec.gamma_c,
        spec.xi,
        backend=backend,
    )
    return np.arange(start, stop, dtype=np.int64), omega_c, omega_h, out


def _run_blocks(fn, n_blocks, threads):
    if threads <= 1 or n_blocks <= 1:
        return [fn(b) for b in range(n_blocks)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(n_blocks)))


def sample_cloud(spec: SampleSpec, threads: int = 1, backend: str | None = None) -> Cloud:
    """Draw ``spec.n_samples`` random machines and evaluate their steady state."""
    n_blocks = -(-spec.n_samples // BLOCK_SIZE)
    parts = _run_blocks(lambda b: _evaluate_block(spec, b, backend), n_blocks, threads)
    index = np.concatenate([p[0] for p in parts])
    omega_c = np.concatenate([p[1] for p in parts])
    omega_h = np.concatenate([p[2] for p in parts])
    fl = np.concatenate([p[3] for p in parts], axis=1)
    power, q_hot, q_cold = fl[0], fl[1], fl[2]
    scale = spec.xi * np.maximum(omega_h, omega_c)
    mode = classify_modes(power, q_hot, q_cold, scale)
    with np.errstate(divide="ignore", invalid="ignore"):
        eff = np.where(q_hot != 0.0, power / q_hot, np.nan)
    return Cloud(index, omega_c, omega_h, power, q_hot, q_cold, eff, mode)


# ------------------------------------------------------------------ frontier


@dataclass(frozen=True)
class Frontier:
    """Upper convex hull of engine points in the (power, efficiency) plane.

    ``chain`` is the full upper hull, left to right. ``frontier`` is its
    trade-off part, from the highest-efficiency vertex towards higher power,
    along which efficiency never increases. ``intercept`` is the efficiency of
    the first frontier vertex (its smallest power); ``extrapolated`` continues
    the first frontier edge linearly to zero power.
    """

    chain: np.ndarray
    frontier: np.ndarray
    intercept: float
    extrapolated: float


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _turns_left_or_straight(o, a, b):
    # collinearity up to rounding in the cross product
    scale = math.hypot(a[0] - o[0], a[1] - o[1]) * math.hypot(b[0] - o[0], b[1] - o[1])
    return _cross(o, a, b) >= -1e-12 * scale


def _upper_hull(points):
    hull = []
    for p in points:
        while len(hull) >= 2 and _turns_left_or_straight(hull[-2], hull[-1], p):
            hull.pop()
        hull.append(p)
    return hull


def upper_frontier(power, efficiency=None, mode=None) -> Frontier:
    """Monotone-chain upper hull of the engine-mode ``(power, efficiency)`` points.

    Accepts a :class:`Cloud`, or parallel arrays; when ``mode`` is omitted
    any point with positive power and finite efficiency counts as an engine
    point.
    """
    if isinstance(power, Cloud):
        cloud = power
        power, efficiency, mode = cloud.power, cloud.efficiency, cloud.mode
    power = np.asarray(power, dtype=float)
    efficiency = np.asarray(efficiency, dtype=float)
    if mode is None:
        keep = (power > 0) & np.isfinite(efficiency)
    else:
        keep = (np.asarray(mode) == Mode.ENGINE.code) & (power > 0)
    pts = np.unique(np.column_stack([power[keep], efficiency[keep]]), axis=0)
    if pts.shape[0] < 3:
        raise InsufficientPointsError(f"need at least 3 engine-mode points, got {pts.shape[0]}")
    chain = np.array(_upper_hull([tuple(p) for p in pts]))
    top = int(np.argmax(chain[:, 1]))
    front = chain[top:]
    intercept = float(front[0, 1])
    if front.shape[0] >= 2:
        (p0, e0), (p1, e1) = front[0], front[1]
        extrapolated = float(e0 - (e1 - e0) / (p1 - p0) * p0)
    else:
        extrapolated = intercept
    return Frontier(chain, front, intercept, extrapolated)


# --------------------------------------------------------------------- curves


@dataclass(frozen=True)
class Curve:
    tau: float
    u: float
    omega_c: np.ndarray
    efficiency: np.ndarray
    power: np.ndarray

    @property
    def endpoint_efficiency(self) -> float:
        """Efficiency at the vanishing-power end of the positive-power branch."""
        pos = self.power > 0
        if not pos.any():
            return math.nan
        return float(self.efficiency[pos].max())


def eta_power_curve(
    tau: float,
    u: float,
    omega_h: float = 1.0,
    model: str = "asymptotic",
    n_points: int = 400,
    gamma: float = 1.0,
    xi: float = 100.0,
    beta_h: float | None = None,
    backend: str | None = None,
) -> Curve:
    """Efficiency and power along ``omega_c = omega_h k / n``, ``k = 1..n``.

    The hot bath is at rest and the cold bath moves at rapidity ``u``.
    ``model="full"`` evaluates the exact steady state at drive ``xi`` and hot
    inverse temperature ``beta_h`` (default ``1e-3 / omega_h``), with
    ``beta_c = beta_h / tau``.
    """
    if n_points < 2:
        raise DomainError("n_points must be at least 2")
    omega_c = omega_h * np.arange(1, n_points + 1) / n_points
    eff = 1.0 - omega_c / omega_h
    if model == "asymptotic":
        power = np.array([asymptotic_power(gamma, tau, u, omega_h, wc) for wc in omega_c])
    elif model == "full":
        bh = 1e-3 / omega_h if beta_h is None else beta_h
        power = _kernels.steady_fluxes(omega_h, omega_c, bh, bh / tau, 0.0, u, gamma, gamma, xi, backend=backend)[0]
    else:
        raise ValueError(f"unknown model {model!r}")
    return Curve(tau, u, omega_c, eff, power)


# ---------------------------------------------------------------------- grids


@dataclass(frozen=True)
class ScanCell:
    x: float
    y: float
    power: float
    mode: Mode


@dataclass(frozen=True)
class Grid:
    """Rectangular scan; ``power[j, i]`` belongs to ``(x[i], y[j])`` (row-major in y)."""

    x_name: str
    y_name: str
    x: np.ndarray
    y: np.ndarray
    power: np.ndarray
    mode: np.ndarray

    def cells(self):
        for j, yv in enumerate(self.y):
            for i, xv in enumerate(self.x):
                yield ScanCell(float(xv), float(yv), float(self.power[j, i]), Mode.from_code(self.mode[j, i]))

    def mode_mask(self, mode: Mode) -> np.ndarray:
        return self.mode == mode.code


def _scan(params: dict, threads: int, backend):
    keys = ("omega_h", "omega_c", "beta_h", "beta_c", "u_h", "u_c", "gamma_h", "gamma_c", "xi")
    arrays = np.broadcast_arrays(*(np.asarray(params[k], dtype=float) for k in keys))
    shape = arrays[0].shape
    flat = [np.array(a, dtype=np.float64).ravel() for a in arrays]
    n = flat[0].shape[0]
    n_blocks = -(-n // BLOCK_SIZE)

    def run(b):
        sl = slice(b * BLOCK_SIZE, min(n, (b + 1) * BLOCK_SIZE))
        return _kernels.steady_fluxes(*(a[sl] for a in flat), backend=backend)

    fl = np.concatenate(_run_blocks(run, n_blocks, threads), axis=1)
    scale = flat[8] * np.maximum(flat[0], flat[1])
    mode = classify_modes(fl[0], fl[1], fl[2], scale)
    return fl[0].reshape(shape), mode.reshape(shape)


def power_grid(
    u_h_values=None,
    u_c_values=None,
    *,
    omega_h: float = 10.0,
    omega_c: float = 5.0,
    beta_h: float = 0.01,
    beta_c: float = 0.08,
    gamma_h: float = 1.0,
    gamma_c: float = 1.0,
    xi: float = 1.0,
    threads: int = 1,
    backend: str | None = None,
) -> Grid:
    """Power and mode over the (u_h, u_c) plane at fixed frequencies."""
    uh = np.linspace(0.0, 3.0, 201) if u_h_values is None else np.asarray(u_h_values, dtype=float)
    uc = np.linspace(0.0, 3.0, 201) if u_c_values is None else np.asarray(u_c_values, dtype=float)
    UH, UC = np.meshgrid(uh, uc)
    params = dict(
        omega_h=omega_h, omega_c=omega_c, beta_h=beta_h, beta_c=beta_c,
        u_h=UH, u_c=UC, gamma_h=gamma_h, gamma_c=gamma_c, xi=xi,
    )
    power, mode = _scan(params, threads, backend)
    return Grid("u_h", "u_c", uh, uc, power, mode)


def mode_map(
    omega_c_values=None,
    omega_h_values=None,
    *,
    beta_h: float = 0.04,
    beta_c: float = 0.08,
    u_h: float = 0.0,
    u_c: float = 0.0,
    gamma_h: float = 1.0,
    gamma_c: float = 1.0,
    xi: float = 1.0,
    threads: int = 1,
    backend: str | None = None,
) -> Grid:
    """Operation mode (and power) over the (omega_c, omega_h) plane at fixed baths."""
    wc = np.linspace(0.1, 10.0, 201) if omega_c_values is None else np.asarray(omega_c_values, dtype=float)
    wh = np.linspace(0.1, 10.0, 201) if omega_h_values is None else np.asarray(omega_h_values, dtype=float)
    if (wc <= 0).any() or (wh <= 0).any():
        raise DomainError("frequencies must be positive")
    WC, WH = np.meshgrid(wc, wh)
    params = dict(
        omega_h=WH, omega_c=WC, beta_h=beta_h, beta_c=beta_c,
        u_h=u_h, u_c=u_c, gamma_h=gamma_h, gamma_c=gamma_c, xi=xi,
    )
    power, mode = _scan(params, threads, backend)
    return Grid("omega_c", "omega_h", wc, wh, power, mode)
