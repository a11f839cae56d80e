"""Eigen-decomposition of real symmetric 3x3 matrices.

Eigenvalues come from the trigonometric closed form for the roots of the
characteristic cubic; a cyclic Jacobi sweep supplies eigenvectors and replaces
the closed-form values when the two disagree (nearly degenerate spectra).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionError

POLISH_TOL = 1e-13


def _as_sym3(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape != (3, 3):
        raise DimensionError(f"expected a 3x3 matrix, got shape {a.shape}")
    return a


def trig_eigvals(a: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues from the trigonometric root formula.

    Accurate to rounding for well separated roots; near a repeated root the
    arccos loses about half the digits, which :func:`eigh3` detects and repairs.
    """
    a = _as_sym3(a)
    if a[0, 1] == 0.0 and a[0, 2] == 0.0 and a[1, 2] == 0.0:
        return np.sort(np.diag(a).copy())
    # scale to unit max entry so the squares below neither overflow nor underflow
    scale = float(np.max(np.abs(a)))
    return scale * _trig_roots(a / scale)


def _trig_roots(a: np.ndarray) -> np.ndarray:
    off = a[0, 1] ** 2 + a[0, 2] ** 2 + a[1, 2] ** 2
    q = np.trace(a) / 3.0
    p2 = ((a[0, 0] - q) ** 2 + (a[1, 1] - q) ** 2 + (a[2, 2] - q) ** 2 + 2.0 * off) / 6.0
    p = math.sqrt(p2)
    if p == 0.0:
        return np.full(3, q)
    b = (a - q * np.eye(3)) / p
    r = np.linalg.det(b) / 2.0
    # Rounding can push r marginally outside [-1, 1].
    phi = math.acos(min(1.0, max(-1.0, r))) / 3.0
    hi = q + 2.0 * p * math.cos(phi)
    lo = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    mid = 3.0 * q - hi - lo
    # rounding can misorder nearly equal roots
    return np.sort([lo, mid, hi])


def _jacobi(a: np.ndarray, sweeps: int = 50) -> tuple[np.ndarray, np.ndarray]:
    a = np.array(a, dtype=float)
    v = np.eye(3)
    for _ in range(sweeps):
        off = a[0, 1] ** 2 + a[0, 2] ** 2 + a[1, 2] ** 2
        if off <= 1e-300 or off <= (1e-17 * np.max(np.abs(a))) ** 2:
            break
        for p, q in ((0, 1), (0, 2), (1, 2)):
            gap = a[q, q] - a[p, p]
            if abs(a[p, q]) <= 1e-150 * abs(gap) or a[p, q] == 0.0:
                # rotation angle below rounding: the entry is negligible
                a[p, q] = a[q, p] = 0.0
                continue
            theta = gap / (2.0 * a[p, q])
            t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
            c = 1.0 / math.sqrt(t * t + 1.0)
            s = t * c
            rot = np.eye(3)
            rot[p, p] = rot[q, q] = c
            rot[p, q] = s
            rot[q, p] = -s
            a = rot.T @ a @ rot
            v = v @ rot
    return np.diag(a).copy(), v


def eigh3(a: np.ndarray, tol: float = POLISH_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and column eigenvectors of a symmetric 3x3 matrix."""
    a = _as_sym3(a)
    closed = trig_eigvals(a)
    diag, vecs = _jacobi(a)
    order = np.argsort(diag, kind="stable")
    diag, vecs = diag[order], vecs[:, order]
    scale = max(1.0, float(np.max(np.abs(closed))))
    values = closed if np.max(np.abs(closed - diag)) <= tol * scale else diag
    return values, vecs


def eigvalsh3(a: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a symmetric 3x3 matrix."""
    return eigh3(a)[0]


def top_direction(a: np.ndarray, tie_tol: float = 1e-12) -> np.ndarray:
    """Unit eigenvector of the largest eigenvalue, chosen reproducibly.

    Among eigenvalues tied with the maximum (within ``tie_tol`` relative), the
    eigenvector whose dominant component has the largest axis index wins, so a
    diagonal matrix with ties prefers z over y over x.  The sign makes the
    dominant component positive.
    """
    values, vecs = eigh3(a)
    scale = max(float(np.max(np.abs(values))), 1e-300)
    tied = [i for i in range(3) if values[-1] - values[i] <= tie_tol * scale]
    best = max(tied, key=lambda i: (int(np.argmax(np.abs(vecs[:, i]))), i))
    e = vecs[:, best]
    dom = int(np.argmax(np.abs(e)))
    return e * math.copysign(1.0, e[dom]) / np.linalg.norm(e)
