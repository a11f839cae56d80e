"""Hilbert-Schmidt geometric discord of the split ``1 | 2..k``.

For a ``k``-qubit state with correlation tensor ``T`` the distance to the family
of classical-quantum states measured on qubit 1 along axis ``e`` is

    2**-k (|x|^2 + |T|^2 - e^T K e),   K = x x^T + T T^T,

so the discord is ``2**-k (k1 + k2 + k3 - k_max)``.  :func:`brute_force_discord`
re-derives it without ``K`` by assembling the candidate classical states as
matrices and minimizing their distance over the sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from . import encoding
from .eig3 import eigh3, top_direction
from .errors import DimensionError, SizeLimit, UnsupportedK
from .fano_bloch import PAULI, CorrelationTensor, full_tensor, recursive_tensor, synthesize
from .sphere import node_spacing, refine_on_sphere, spiral_nodes
from .states import CatSpec, reduced_density

BRUTE_MAX_K = 6
DEFAULT_NODES = 2000
CHI_PSD_FLAG = -1e-8


def build_K(T: CorrelationTensor) -> np.ndarray:
    """``K = x x^T + T T^T`` from the rows ``T[i, ...]``, ``i = 1, 2, 3``.

    ``x`` holds the local Bloch vector ``T[i, 0, .., 0]`` of qubit 1 and ``T`` the
    remaining correlations, so together they are simply the full rows.
    """
    if T.k < 2:
        raise DimensionError("K needs at least two qubits")
    rows = T.values.reshape(4, -1)[1:]
    K = rows @ rows.T
    return 0.5 * (K + K.T)


def closed_form_eigs(spec: CatSpec, k: int) -> tuple[float, float, float]:
    """Explicit ``(k1, k2, k3)`` (x, y, z entries of the diagonal K) for k = 2, 3, 4."""
    if not 2 <= k <= spec.n:
        raise DimensionError(f"k={k} outside 2..{spec.n}")
    p, n, c = spec.p, spec.n, spec.cos_m_pi
    den = spec.denominator**2
    if k == 2:
        k1 = (1 - p**2) ** 2 / den
        k2 = (1 - p**2) ** 2 * p ** (2 * (n - 2)) / den
        k3 = ((p**2 + p ** (2 * (n - 2))) * (1 + p**2) + 4 * p**n * c) / den
    elif k == 3:
        k1 = 2 * (1 - p**2) ** 2 * (1 + p**2) / den
        k2 = 2 * (1 - p**2) ** 2 * (1 + p**2) * p ** (2 * (n - 3)) / den
        k3 = 2 * ((p**2 + p ** (2 * (n - 3))) * (1 + p**4) + 4 * p**n * c) / den
    elif k == 4:
        n4 = spec.norm_sq**2
        k1 = 16 * n4 * (1 - p**2) * (1 - p**6)
        k2 = 16 * n4 * (1 - p**2) * (1 - p**6) * p ** (2 * (n - 4))
        k3 = 16 * n4 * ((1 + p**6) * (p**2 + p ** (2 * (n - 4))) + 4 * p**n * c)
    else:
        raise UnsupportedK(f"no explicit eigenvalue formulas for k={k}; use the K-matrix route")
    return float(k1), float(k2), float(k3)


def discord_from_eigs(eigs, k: int) -> float:
    eigs = np.asarray(eigs, dtype=float)
    return float((eigs.sum() - eigs.max()) / 2**k)


def k_matrix_eigs(spec: CatSpec, k: int) -> np.ndarray:
    """Ascending eigenvalues of ``K`` built from the recursive tensor."""
    values, _ = eigh3(build_K(recursive_tensor(spec, k)))
    return values


def geometric_discord(
    spec: CatSpec, k: int, method: Literal["closed_form", "k_matrix"] = "closed_form"
) -> float:
    """Discord between qubit 1 and qubits ``2..k`` of the cat state.

    ``closed_form`` uses the explicit spectra for k <= 4 and the scaled
    two-logical-qubit spectrum ``2**(k-2) (l1, l2, l3)`` beyond that.
    """
    if not 2 <= k <= spec.n:
        raise DimensionError(f"k={k} outside 2..{spec.n}")
    if method == "k_matrix":
        eigs = k_matrix_eigs(spec, k)
    elif method == "closed_form":
        try:
            eigs = closed_form_eigs(spec, k)
        except UnsupportedK:
            eigs = [2 ** (k - 2) * v for v in encoding.l_values(spec, k)]
    else:
        raise ValueError(f"unknown method {method!r}")
    return max(discord_from_eigs(eigs, k), 0.0)


@dataclass(frozen=True)
class ClassicalStateSpec:
    """Parameters of a zero-discord state measured on qubit 1 along ``e``.

    ``s_plus`` and ``s_minus`` are indexed by the flat ``(k-1)``-qubit Pauli
    multi-index with the identity entry ``0..0`` omitted.
    """

    e: np.ndarray
    t: float
    s_plus: np.ndarray
    s_minus: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.e, dtype=float)
        if abs(np.linalg.norm(e) - 1.0) > 1e-12:
            raise ValueError(f"axis {e} is not a unit vector")
        if abs(self.t) > 1.0 + 1e-12:
            raise ValueError(f"|t| = {abs(self.t)} exceeds 1")
        sp = np.asarray(self.s_plus, dtype=float)
        sm = np.asarray(self.s_minus, dtype=float)
        if sp.shape != sm.shape:
            raise DimensionError("s_plus and s_minus must have equal length")
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "s_plus", sp)
        object.__setattr__(self, "s_minus", sm)

    @property
    def k(self) -> int:
        return int(round(math.log(self.s_plus.size + 1, 4))) + 1


def optimal_classical_params(T: CorrelationTensor, e) -> ClassicalStateSpec:
    """Stationary ``(t, s+, s-)`` of the distance for a fixed axis ``e``.

    ``t = sum_i e_i T[i, 0..0]`` (only the z term survives for cat states),
    ``s+ = T[0, a]`` and ``s- = sum_i e_i T[i, a]`` for ``a != 0..0``.
    """
    if T.k < 2:
        raise DimensionError("need at least two qubits")
    e = np.asarray(e, dtype=float)
    e = e / np.linalg.norm(e)
    rows = T.values.reshape(4, -1)
    projected = e @ rows[1:]
    return ClassicalStateSpec(e=e, t=float(projected[0]), s_plus=rows[0, 1:], s_minus=projected[1:])


def _classical_matrices(e, t, s_plus, s_minus, k: int) -> np.ndarray:
    """Batched assembly; ``e`` is ``(..., 3)``, ``t`` ``(...)``, ``s_minus`` ``(..., 4**(k-1) - 1)``."""
    e = np.asarray(e, dtype=float)
    lead = e.shape[:-1]
    plus = np.concatenate([np.ones(1), s_plus])
    minus = np.concatenate([np.asarray(t, dtype=float)[..., None], s_minus], axis=-1)
    rest_plus = synthesize(plus, k - 1)
    rest_minus = synthesize(minus, k - 1)
    axis_op = np.einsum("...i,iab->...ab", e, PAULI[1:])
    # 2**-k [I (x) (1, s+) + (e.sigma) (x) (t, s-)] = (I (x) A + (e.sigma) (x) B) / 2
    chi = np.kron(PAULI[0], rest_plus)
    chi = np.broadcast_to(chi, lead + chi.shape)
    d = 2 ** (k - 1)
    cross = np.einsum("...ab,...cd->...acbd", axis_op, rest_minus).reshape(lead + (2 * d, 2 * d))
    return 0.5 * (chi + cross)


def classical_state_matrix(params: ClassicalStateSpec, k: int | None = None) -> np.ndarray:
    """Dense matrix of the classical state described by ``params``."""
    kk = params.k
    if k is not None and k != kk:
        raise DimensionError(f"params describe k={kk}, not k={k}")
    return _classical_matrices(params.e, params.t, params.s_plus, params.s_minus, kk)


def hs_distance_sq(a: np.ndarray, b: np.ndarray) -> float:
    """Squared Hilbert-Schmidt distance ``Tr[(a - b)^dag (a - b)]``."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    diff = a - b
    return float(np.real(np.vdot(diff, diff)))


def min_eigenvalue(mat: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))[0])


def _batched_distances(rho, T, nodes, chunk=256):
    k = T.k
    rows = T.values.reshape(4, -1)
    out = np.empty(len(nodes))
    for start in range(0, len(nodes), chunk):
        e = nodes[start : start + chunk]
        projected = e @ rows[1:]
        chi = _classical_matrices(e, projected[:, 0], rows[0, 1:], projected[:, 1:], k)
        diff = chi - rho
        out[start : start + chunk] = np.einsum("bij,bij->b", diff.conj(), diff).real
    return out


def brute_force_discord(
    rho: np.ndarray,
    n_nodes: int = DEFAULT_NODES,
    tol: float = 1e-10,
) -> tuple[float, ClassicalStateSpec]:
    """Minimize the distance to classical states by direct search over axes.

    Every candidate is built as a dense matrix from the stationary parameters
    for its axis; the best of ``n_nodes`` spiral directions is then refined.
    """
    rho = np.asarray(rho, dtype=complex)
    T = full_tensor(rho)
    if T.k < 2:
        raise DimensionError("discord needs at least two qubits")
    if T.k > BRUTE_MAX_K:
        raise SizeLimit(f"brute force limited to k <= {BRUTE_MAX_K}, got {T.k}")
    nodes = spiral_nodes(n_nodes)
    dist = _batched_distances(rho, T, nodes)
    start = nodes[int(np.argmin(dist))]

    def objective(e):
        params = optimal_classical_params(T, e)
        return hs_distance_sq(rho, classical_state_matrix(params))

    e, best = refine_on_sphere(objective, start, 2.0 * node_spacing(n_nodes), tol=tol)
    return max(best, 0.0), optimal_classical_params(T, e)


def grid_distances(rho: np.ndarray, n_nodes: int = DEFAULT_NODES) -> tuple[np.ndarray, np.ndarray]:
    """Distances from ``rho`` to the stationary classical state of every spiral node."""
    rho = np.asarray(rho, dtype=complex)
    nodes = spiral_nodes(n_nodes)
    return nodes, _batched_distances(rho, full_tensor(rho), nodes)


@dataclass(frozen=True)
class ClosestClassical:
    params: ClassicalStateSpec
    matrix: np.ndarray = field(repr=False)
    distance_sq: float
    min_eig: float

    @property
    def flagged(self) -> bool:
        return self.min_eig < CHI_PSD_FLAG


def closest_classical_state(spec: CatSpec, k: int) -> ClosestClassical:
    """Closest classical state along the top eigendirection of ``K``."""
    rho = reduced_density(spec, k)
    T = recursive_tensor(spec, k)
    e = top_direction(build_K(T))
    params = optimal_classical_params(T, e)
    chi = classical_state_matrix(params)
    return ClosestClassical(params, chi, hs_distance_sq(rho, chi), min_eigenvalue(chi))


@dataclass
class DiscordReport:
    spec: CatSpec
    k: int
    eigenvalues: tuple[float, float, float]
    d_g_recursive: float
    d_g_encoded: float
    d_g_brute: float | None
    chi_distance_check: float
    chi_min_eig: float
    axis: np.ndarray
    max_method_diff: float = field(init=False)

    def __post_init__(self):
        values = [self.d_g_recursive, self.d_g_encoded]
        if self.d_g_brute is not None:
            values.append(self.d_g_brute)
        self.max_method_diff = float(max(values) - min(values))


def discord_report(spec: CatSpec, k: int, brute: bool = True, n_nodes: int = DEFAULT_NODES) -> DiscordReport:
    """All discord routes for one ``(spec, k)`` plus the closest-state checks."""
    T = recursive_tensor(spec, k)
    K = build_K(T)
    diag = tuple(float(v) for v in np.diag(K))
    d_rec = max(discord_from_eigs(eigh3(K)[0], k), 0.0)
    d_enc = encoding.discord_encoded(spec, k)
    d_brute = None
    if brute:
        d_brute, _ = brute_force_discord(reduced_density(spec, k), n_nodes=n_nodes)
    closest = closest_classical_state(spec, k)
    return DiscordReport(
        spec=spec,
        k=k,
        eigenvalues=diag,
        d_g_recursive=d_rec,
        d_g_encoded=d_enc,
        d_g_brute=d_brute,
        chi_distance_check=closest.distance_sq - d_rec,
        chi_min_eig=closest.min_eig,
        axis=closest.params.e,
    )
