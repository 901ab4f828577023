"""Bracketing scalar solvers: bisection for roots, golden section for maxima."""
from __future__ import annotations

import math

from .errors import NoRootError, OptimizationError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def bisect(f, lo, hi, xtol=1e-12, maxiter=200):
    """Root of ``f`` in ``[lo, hi]``; ``f(lo)`` and ``f(hi)`` must differ in sign."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise NoRootError(f"no sign change on [{lo}, {hi}] (f={flo:.3g}, {fhi:.3g})")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= xtol or mid in (lo, hi):
            return mid
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def golden_section_max(f, a, b, xtol=1e-12, maxiter=200):
    """Maximizer of a unimodal ``f`` on ``[a, b]``."""
    a, b = min(a, b), max(a, b)
    h = b - a
    c, d = a + INV_PHI2 * h, a + INV_PHI * h
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if h <= xtol:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + INV_PHI * h
            fd = f(d)
    return c if fc > fd else d


def grid_then_golden(f, lo, hi, n_grid=101, xtol=1e-12, maxiter=200):
    """Coarse grid scan for the best interior node, then golden section on its neighbours.

    Raises :class:`OptimizationError` unless the result beats both interval ends.
    """
    step = (hi - lo) / (n_grid - 1)
    nodes = [lo + k * step for k in range(n_grid)]
    values = [f(x) for x in nodes]
    k = max(range(1, n_grid - 1), key=values.__getitem__)
    if not math.isfinite(values[k]):
        raise OptimizationError("objective is not finite on the scan grid")
    x = golden_section_max(f, nodes[k - 1], nodes[k + 1], xtol=xtol, maxiter=maxiter)
    fx = f(x)
    if not (fx > values[0] and fx > values[-1]):
        raise OptimizationError(f"no interior maximum on [{lo}, {hi}]")
    return x
