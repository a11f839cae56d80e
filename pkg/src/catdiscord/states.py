"""Multiqubit Schrodinger cat states and their reduced density matrices.

A cat state is the balanced superposition

    N (|eta>^{(x)n} + e^{i m pi} |-eta>^{(x)n})

of two spin coherent states.  Every closed form in this package depends on the
state only through the qubit count ``n``, the overlap ``p = <eta|-eta>`` and the
parity ``m mod 2``.  Single-qubit components are embedded as

    |+-eta> = a_+ |0> +- a_- |1>,   a_+- = sqrt((1 +- p) / 2)

so all matrix elements are real.  Qubit 0 is the leftmost tensor factor and
computational-basis indices are big-endian over qubits.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, InvariantError, SingularNormalization, SizeLimit

EPS_SING = 1e-9
N_MAX = 14


class Parity(enum.IntEnum):
    """Parity ``m mod 2`` of a cat state (0 = even, 1 = odd)."""

    EVEN = 0
    ODD = 1

    @property
    def cos_m_pi(self) -> float:
        return 1.0 if self is Parity.EVEN else -1.0

    @classmethod
    def from_m(cls, m: int) -> "Parity":
        return cls(int(m) % 2)

    @classmethod
    def parse(cls, value: "str | int | Parity") -> "Parity":
        if isinstance(value, Parity):
            return value
        if isinstance(value, str):
            key = value.strip().lower()
            if key in ("even", "0"):
                return cls.EVEN
            if key in ("odd", "1"):
                return cls.ODD
            raise ValueError(f"unknown parity {value!r}; expected 'even' or 'odd'")
        return cls.from_m(value)


def overlap_from_eta(eta: complex) -> float:
    """Overlap ``<eta|-eta> = (1 - |eta|^2) / (1 + |eta|^2)``."""
    r2 = abs(complex(eta)) ** 2
    if math.isinf(r2):
        return -1.0
    return (1.0 - r2) / (1.0 + r2)


@dataclass(frozen=True)
class CatSpec:
    """Parameters ``(n, p, parity)`` of a cat state.

    ``eta`` is an optional convenience input; when given, ``p`` is derived from it
    and any explicitly passed ``p`` must agree.
    """

    n: int
    p: float | None = None
    parity: Parity = Parity.EVEN
    eta: complex | None = None
    eps_sing: float = EPS_SING

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DimensionError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "parity", Parity.parse(self.parity))
        if self.eta is not None:
            derived = overlap_from_eta(self.eta)
            if self.p is not None and abs(self.p - derived) > 1e-14:
                raise ValueError(f"p={self.p} disagrees with eta={self.eta} (p={derived})")
            object.__setattr__(self, "p", derived)
        if self.p is None:
            raise ValueError("either p or eta must be supplied")
        p = float(self.p)
        if not math.isfinite(p) or abs(p) > 1.0:
            raise ValueError(f"overlap must satisfy |p| <= 1, got {p}")
        object.__setattr__(self, "p", p)
        if abs(self.denominator) <= self.eps_sing:
            raise SingularNormalization(
                f"1 + p^n cos(m pi) = {self.denominator:.3e} for n={self.n}, p={p}, "
                f"parity={self.parity.name.lower()}"
            )

    @property
    def cos_m_pi(self) -> float:
        return self.parity.cos_m_pi

    @property
    def denominator(self) -> float:
        """``1 + p**n cos(m pi)``; the state is singular when this vanishes."""
        return 1.0 + self.p**self.n * self.cos_m_pi

    @property
    def norm_sq(self) -> float:
        """``N**2 = 1 / (2 + 2 p**n cos(m pi))``."""
        return 1.0 / (2.0 * self.denominator)

    @property
    def a_plus(self) -> float:
        return math.sqrt((1.0 + self.p) / 2.0)

    @property
    def a_minus(self) -> float:
        return math.sqrt((1.0 - self.p) / 2.0)

    def q(self, k: int) -> float:
        """Overlap of the traced-out part, ``p**(n - k)``."""
        return self.p ** (self.n - k)

    def q_pm(self, k: int) -> tuple[float, float]:
        """``(1 + q_k cos(m pi), 1 - q_k cos(m pi))``."""
        qc = self.q(k) * self.cos_m_pi
        return 1.0 + qc, 1.0 - qc


def coherent_dicke_coefficients(n: int, eta: complex) -> np.ndarray:
    """Dicke-basis amplitudes of the spin coherent state ``|n, eta>``.

    Returns ``(1 + |eta|^2)^(-n/2) sqrt(C(n, j)) eta^j`` for ``j = 0..n``.
    """
    if n < 1:
        raise DimensionError("n must be >= 1")
    eta = complex(eta)
    scale = (1.0 + abs(eta) ** 2) ** (-n / 2)
    return np.array(
        [scale * math.sqrt(math.comb(n, j)) * eta**j for j in range(n + 1)],
        dtype=complex,
    )


def dicke_state(n: int, j: int) -> np.ndarray:
    """Normalized symmetric ``n``-qubit state with exactly ``j`` excitations."""
    if not 0 <= j <= n:
        raise DimensionError(f"excitation number {j} outside 0..{n}")
    weights = _popcount(np.arange(2**n))
    vec = (weights == j).astype(complex)
    return vec / math.sqrt(math.comb(n, j))


def _popcount(indices: np.ndarray) -> np.ndarray:
    counts = np.zeros_like(indices)
    work = indices.copy()
    while np.any(work):
        counts += work & 1
        work >>= 1
    return counts


def _product_vector(amplitudes: Sequence[float], count: int) -> np.ndarray:
    vec = np.ones(1)
    for _ in range(count):
        vec = np.kron(vec, amplitudes)
    return vec


def cat_state_vector(spec: CatSpec, n_max: int = N_MAX) -> np.ndarray:
    """Full ``2**n`` amplitude vector of the cat state described by ``spec``."""
    if spec.n > n_max:
        raise SizeLimit(f"n={spec.n} exceeds the dense-vector bound n_max={n_max}")
    ap, am = spec.a_plus, spec.a_minus
    plus = _product_vector([ap, am], spec.n)
    minus = _product_vector([ap, -am], spec.n)
    vec = math.sqrt(spec.norm_sq) * (plus + spec.cos_m_pi * minus)
    return vec.astype(complex)


def reduced_density(spec: CatSpec, k: int) -> np.ndarray:
    """Closed-form density matrix of any ``k`` qubits of the cat state.

    Entry ``(i, j)`` vanishes unless the Hamming weights ``w_i`` and ``w_j`` have
    equal parity; otherwise it is

        2 N^2 q_{k+-} a_+^{2k - w_i - w_j} a_-^{w_i + w_j}

    with ``q_{k+}`` for even weights and ``q_{k-}`` for odd ones.
    """
    if not 1 <= k <= spec.n:
        raise DimensionError(f"subsystem size k={k} must satisfy 1 <= k <= n={spec.n}")
    weights = _popcount(np.arange(2**k))
    amps = spec.a_plus ** (k - weights) * spec.a_minus**weights
    odd = (weights & 1).astype(bool)
    q_plus, q_minus = spec.q_pm(k)
    coupling = np.where(
        odd[:, None] == odd[None, :],
        np.where(odd[:, None], q_minus, q_plus),
        0.0,
    )
    rho = 2.0 * spec.norm_sq * coupling * np.outer(amps, amps)
    return rho.astype(complex)


def partial_trace(state: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix of the qubits listed in ``keep``.

    ``state`` is either a pure-state vector of length ``2**n`` or a ``2**n``
    square density matrix.  The kept qubits appear in the order given.
    """
    state = np.asarray(state)
    dim = state.shape[0]
    n = dim.bit_length() - 1
    if dim != 2**n or (state.ndim == 2 and state.shape != (dim, dim)) or state.ndim > 2:
        raise DimensionError(f"state shape {state.shape} is not a qubit register")
    keep = [int(q) for q in keep]
    if len(set(keep)) != len(keep) or any(not 0 <= q < n for q in keep):
        raise DimensionError(f"invalid qubit subset {keep} for n={n}")
    traced = [q for q in range(n) if q not in keep]
    k = len(keep)

    if state.ndim == 1:
        psi = state.reshape([2] * n).transpose(keep + traced).reshape(2**k, -1)
        return psi @ psi.conj().T

    rho = state.reshape([2] * (2 * n))
    order = keep + traced + [n + q for q in keep] + [n + q for q in traced]
    rho = rho.transpose(order).reshape(2**k, 2 ** (n - k), 2**k, 2 ** (n - k))
    return np.trace(rho, axis1=1, axis2=3)


def check_density_matrix(
    rho: np.ndarray,
    *,
    herm_tol: float = 1e-12,
    trace_tol: float = 1e-12,
    psd_tol: float = 1e-10,
    max_rank: int | None = None,
    rank_tol: float = 1e-10,
) -> np.ndarray:
    """Raise :class:`InvariantError` unless ``rho`` is a valid density matrix.

    Returns the eigenvalues (ascending) for callers that need them.
    """
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"not a square matrix: {rho.shape}")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > herm_tol:
        raise InvariantError(f"matrix is not Hermitian (residue {herm:.3e})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise InvariantError(f"trace {tr} differs from 1")
    evals = np.linalg.eigvalsh(rho)
    if evals[0] < -psd_tol:
        raise InvariantError(f"negative eigenvalue {evals[0]:.3e}")
    if max_rank is not None and len(evals) > max_rank and evals[-max_rank - 1] > rank_tol:
        raise InvariantError(
            f"rank exceeds {max_rank}: eigenvalue {evals[-max_rank - 1]:.3e} above {rank_tol}"
        )
    return evals


def rank_two_weights(spec: CatSpec, k: int) -> tuple[float, float]:
    """The two nonzero eigenvalues of ``reduced_density(spec, k)``.

    These are ``(1 +- p**(n-k)) N^2 / (2 N_{k+-}^2)`` with
    ``N_{k+-}^-2 = 2(1 +- p^k cos m pi)``, the weights of the normalized
    vectors ``|eta^k> +- e^{i m pi} |-eta^k>``.
    """
    c = spec.cos_m_pi
    q = spec.q(k)
    same = 0.5 * (1.0 + q) * spec.norm_sq * 2.0 * (1.0 + spec.p**k * c)
    flipped = 0.5 * (1.0 - q) * spec.norm_sq * 2.0 * (1.0 - spec.p**k * c)
    return same, flipped
