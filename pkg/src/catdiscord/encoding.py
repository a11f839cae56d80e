"""Two-logical-qubit encoding of the ``(k-1)``-qubit party.

The party ``2..k`` only ever appears in the states ``|+-eta>^{(x)(k-1)}``, which
are written as ``b_+ |0_L> +- b_- |1_L>`` with ``b_+- = sqrt((1 +- p^(k-1)) / 2)``.
The reduced state then becomes a 4x4 X state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError
from .states import CatSpec


@dataclass(frozen=True)
class EncodedState:
    matrix: np.ndarray = field(repr=False)
    spec: CatSpec
    k: int
    b_plus: float
    b_minus: float


@dataclass(frozen=True)
class RTensor:
    """Nonvanishing Fano-Bloch coefficients of the encoded state."""

    r00: float
    r11: float
    r22: float
    r33: float
    r03: float
    r30: float

    def as_matrix(self) -> np.ndarray:
        R = np.zeros((4, 4))
        R[0, 0], R[1, 1], R[2, 2], R[3, 3] = self.r00, self.r11, self.r22, self.r33
        R[0, 3], R[3, 0] = self.r03, self.r30
        return R


def _check_k(spec: CatSpec, k: int) -> None:
    if not 2 <= k <= spec.n:
        raise DimensionError(f"k={k} outside 2..{spec.n}")


def logical_amplitudes(spec: CatSpec, k: int) -> tuple[float, float]:
    overlap = spec.p ** (k - 1)
    return math.sqrt((1.0 + overlap) / 2.0), math.sqrt((1.0 - overlap) / 2.0)


def encode(spec: CatSpec, k: int) -> EncodedState:
    """Encoded 4x4 state in the basis ``|r> (x) |s_L>``, ``r, s in {0, 1}``."""
    _check_k(spec, k)
    ap, am = spec.a_plus, spec.a_minus
    bp, bm = logical_amplitudes(spec, k)
    q_plus, q_minus = spec.q_pm(k)
    cross = ap * am * bp * bm
    rho = np.array(
        [
            [ap**2 * bp**2 * q_plus, 0.0, 0.0, cross * q_plus],
            [0.0, ap**2 * bm**2 * q_minus, cross * q_minus, 0.0],
            [0.0, cross * q_minus, am**2 * bp**2 * q_minus, 0.0],
            [cross * q_plus, 0.0, 0.0, am**2 * bm**2 * q_plus],
        ]
    )
    return EncodedState(2.0 * spec.norm_sq * rho.astype(complex), spec, k, bp, bm)


def r_tensor(spec: CatSpec, k: int) -> RTensor:
    _check_k(spec, k)
    p, n, c = spec.p, spec.n, spec.cos_m_pi
    two_n2 = 2.0 * spec.norm_sq
    r11 = two_n2 * math.sqrt((1 - p**2) * (1 - p ** (2 * (k - 1))))
    return RTensor(
        r00=1.0,
        r11=r11,
        r22=-r11 * p ** (n - k) * c,
        r33=two_n2 * (p**k + p ** (n - k) * c),
        r03=two_n2 * (p ** (k - 1) + p ** (n - k + 1) * c),
        r30=two_n2 * (p + p ** (n - 1) * c),
    )


def l_values(spec: CatSpec, k: int) -> tuple[float, float, float]:
    """``(R11^2, R22^2, R30^2 + R33^2)``, the spectrum of the encoded K matrix."""
    R = r_tensor(spec, k)
    return R.r11**2, R.r22**2, R.r30**2 + R.r33**2


def discord_encoded(spec: CatSpec, k: int) -> float:
    l1, l2, l3 = l_values(spec, k)
    return max(0.25 * min(l1 + l2, l1 + l3, l2 + l3), 0.0)


@dataclass(frozen=True)
class SchemeEquivalence:
    """Outcome of comparing the ``1|2..k`` and encoded discords with brute force.

    ``relations`` lists which candidate ratios ``d_rec / d_enc`` fit within
    ``tol``: ``"1"`` and/or ``"2^(k-2)"``.  When both discords vanish every
    ratio fits and ``ratio`` is NaN.
    """

    spec: CatSpec
    k: int
    d_rec: float
    d_enc: float
    d_brute: float
    ratio: float
    relations: tuple[str, ...]
    brute_matches: tuple[str, ...]


def scheme_equivalence_report(spec: CatSpec, k: int, tol: float = 1e-8, n_nodes: int | None = None) -> SchemeEquivalence:
    from .discord import DEFAULT_NODES, brute_force_discord, geometric_discord
    from .states import reduced_density

    _check_k(spec, k)
    d_rec = geometric_discord(spec, k, method="k_matrix")
    d_enc = discord_encoded(spec, k)
    d_brute, _ = brute_force_discord(reduced_density(spec, k), n_nodes=n_nodes or DEFAULT_NODES)
    ratio = d_rec / d_enc if d_enc > tol else float("nan")
    relations = []
    if abs(d_rec - d_enc) <= tol:
        relations.append("1")
    if abs(d_rec - 2 ** (k - 2) * d_enc) <= tol:
        relations.append("2^(k-2)")
    matches = tuple(
        name for name, value in (("recursive", d_rec), ("encoded", d_enc)) if abs(value - d_brute) <= tol
    )
    return SchemeEquivalence(spec, k, d_rec, d_enc, d_brute, ratio, tuple(relations), matches)
