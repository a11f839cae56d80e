"""Deterministic derivative-free minimization over the unit sphere."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


def spiral_nodes(count: int) -> np.ndarray:
    """Quasi-uniform golden-angle spiral of ``count`` unit vectors, shape ``(count, 3)``."""
    if count < 1:
        raise ValueError("need at least one node")
    i = np.arange(count)
    z = 1.0 - (2.0 * i + 1.0) / count
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = GOLDEN_ANGLE * i
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def node_spacing(count: int) -> float:
    """Typical angular distance between neighbouring spiral nodes."""
    return math.sqrt(4.0 * math.pi / count)


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-10):
    """Minimize a 1-D function on ``[lo, hi]``; returns ``(x, f(x))``.

    Ties keep the left candidate, which makes flat objectives terminate
    deterministically instead of raising as a bracketing search would.
    """
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def _frame(e: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Orthonormal frame with ``e`` on the equator at azimuth zero."""
    helper = np.eye(3)[int(np.argmin(np.abs(e)))]
    pole = np.cross(e, helper)
    pole /= np.linalg.norm(pole)
    side = np.cross(pole, e)
    return e, side, pole


def refine_on_sphere(
    f: Callable[[np.ndarray], float],
    e0: np.ndarray,
    step: float,
    tol: float = 1e-10,
    max_sweeps: int = 200,
    ftol: float = 1e-16,
) -> tuple[np.ndarray, float]:
    """Polish a starting direction by alternating golden-section searches.

    Each sweep places the current point on the equator of a fresh spherical
    frame (so the angles are never evaluated at a coordinate pole), searches the
    polar angle within ``+-step``, then the azimuth.  A coordinate move is only
    accepted when it lowers the objective.  Stops once a sweep moves the point
    by less than ``tol`` or lowers the objective by at most ``ftol`` (the
    rounding floor of a smooth minimum).
    """
    e = np.asarray(e0, dtype=float)
    e = e / np.linalg.norm(e)
    best = f(e)
    h = step
    for _ in range(max_sweeps):
        start = best
        x_ax, y_ax, z_ax = _frame(e)

        def point(theta, phi):
            return (
                math.sin(theta) * math.cos(phi) * x_ax
                + math.sin(theta) * math.sin(phi) * y_ax
                + math.cos(theta) * z_ax
            )

        theta, phi = math.pi / 2, 0.0
        t_new, f_t = golden_section(lambda t: f(point(t, 0.0)), theta - h, theta + h, tol)
        if f_t < best:
            theta, best = t_new, f_t
        p_new, f_p = golden_section(lambda a: f(point(theta, a)), -h, h, tol)
        if f_p < best:
            phi, best = p_new, f_p
        move = max(abs(theta - math.pi / 2), abs(phi))
        e = point(theta, phi)
        e /= np.linalg.norm(e)
        if move < tol or start - best <= ftol * max(1.0, abs(best)):
            break
        h = min(step, max(4.0 * move, 10.0 * tol))
    return e, best
