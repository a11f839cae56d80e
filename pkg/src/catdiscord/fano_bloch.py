"""Fano-Bloch correlation tensors of multiqubit states.

Convention: ``T[a1..ak] = Tr(rho sigma_a1 (x) ... (x) sigma_ak)`` and
``rho = 2**-k sum_a T[a] sigma_a1 (x) ... (x) sigma_ak``, so ``T[0..0] = 1``.
Tensors are stored flat with base-4 multi-indices, first qubit most significant.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .errors import DimensionError, InvariantError, SizeLimit
from .states import CatSpec

PAULI = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

IMAG_TOL = 1e-12
FULL_TENSOR_MAX_K = 8
RECURSIVE_MAX_K = 10

# Row (2*i + j) -> Pauli index a, value sigma_a[j, i]: maps vec(rho) to Tr(rho sigma_a).
_TRACE_MAP = np.einsum("aji->aij", PAULI).reshape(4, 4)
# Pauli index a -> entry (2*i + j): value sigma_a[i, j] / 2.
_SYNTH_MAP = 0.5 * PAULI.reshape(4, 4).T


def encode_index(idx: Sequence[int]) -> int:
    """Flat position of a Pauli multi-index (first entry most significant)."""
    flat = 0
    for a in idx:
        if a not in (0, 1, 2, 3):
            raise DimensionError(f"Pauli index {a!r} outside 0..3")
        flat = 4 * flat + int(a)
    return flat


def decode_index(flat: int, k: int) -> tuple[int, ...]:
    if not 0 <= flat < 4**k:
        raise DimensionError(f"flat index {flat} outside 0..{4**k - 1}")
    digits = []
    for _ in range(k):
        flat, a = divmod(flat, 4)
        digits.append(a)
    return tuple(reversed(digits))


def pauli_string(idx: Sequence[int]) -> np.ndarray:
    """Dense matrix of ``sigma_a1 (x) ... (x) sigma_ak``."""
    encode_index(idx)
    return reduce(np.kron, (PAULI[a] for a in idx), np.eye(1, dtype=complex))


@dataclass(frozen=True)
class CorrelationTensor:
    """Real Fano-Bloch coefficients of a ``k``-qubit operator."""

    k: int
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.size != 4**self.k:
            raise DimensionError(f"expected {4**self.k} entries for k={self.k}, got {values.size}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __getitem__(self, idx: Sequence[int]) -> float:
        if len(idx) != self.k:
            raise DimensionError(f"multi-index {tuple(idx)} has length != k={self.k}")
        return float(self.values[encode_index(idx)])

    @property
    def cube(self) -> np.ndarray:
        """View shaped ``(4,) * k``."""
        return self.values.reshape((4,) * self.k)

    def nonzero(self, tol: float = 1e-12) -> Iterator[tuple[tuple[int, ...], float]]:
        for flat in np.flatnonzero(np.abs(self.values) > tol):
            yield decode_index(int(flat), self.k), float(self.values[flat])

    def check(self, tol: float = 1e-12) -> None:
        """Raise :class:`InvariantError` if a tensor invariant fails."""
        if abs(self.values[0] - 1.0) > tol:
            raise InvariantError(f"T[0..0] = {self.values[0]!r} != 1")
        if np.max(np.abs(self.values)) > 1.0 + tol:
            raise InvariantError("tensor entry exceeds 1 in magnitude")


def _real_or_raise(values: np.ndarray, what: str) -> np.ndarray:
    residue = float(np.max(np.abs(np.imag(values)), initial=0.0))
    if residue > IMAG_TOL:
        raise InvariantError(f"{what} has imaginary residue {residue:.3e}")
    return np.real(values).copy()


def _num_qubits(rho: np.ndarray) -> int:
    rho = np.asarray(rho)
    dim = rho.shape[0]
    k = dim.bit_length() - 1
    if rho.ndim != 2 or rho.shape != (dim, dim) or dim != 2**k or k < 1:
        raise DimensionError(f"shape {rho.shape} is not a qubit operator")
    return k


def tensor_element(rho: np.ndarray, idx: Sequence[int]) -> float:
    """``Tr(rho sigma_idx)`` with its imaginary residue checked and dropped."""
    k = _num_qubits(rho)
    if len(idx) != k:
        raise DimensionError(f"multi-index length {len(idx)} != {k} qubits")
    value = np.trace(np.asarray(rho) @ pauli_string(idx))
    return float(_real_or_raise(np.array([value]), f"T{tuple(idx)}")[0])


def _pairs_view(mats: np.ndarray, k: int) -> np.ndarray:
    """``(..., 2**k, 2**k)`` -> ``(..., 4, ..., 4)`` with axis m indexing (i_m, j_m)."""
    lead = mats.shape[:-2]
    x = mats.reshape(lead + (2,) * (2 * k))
    nl = len(lead)
    order = list(range(nl))
    for m in range(k):
        order += [nl + m, nl + k + m]
    return x.transpose(order).reshape(lead + (4,) * k)


def _from_pairs(pairs: np.ndarray, k: int) -> np.ndarray:
    lead = pairs.shape[:-k]
    nl = len(lead)
    x = pairs.reshape(lead + (2,) * (2 * k))
    order = list(range(nl)) + [nl + 2 * m for m in range(k)] + [nl + 2 * m + 1 for m in range(k)]
    return x.transpose(order).reshape(lead + (2**k, 2**k))


def _apply_per_qubit(op: np.ndarray, x: np.ndarray, k: int) -> np.ndarray:
    """Apply a 4x4 map along each of the last ``k`` axes of ``x``."""
    nl = x.ndim - k
    for m in range(k):
        x = np.moveaxis(np.tensordot(op, x, axes=([1], [nl + m])), 0, nl + m)
    return x


def full_tensor(rho: np.ndarray) -> CorrelationTensor:
    """All ``4**k`` coefficients of ``rho`` by direct trace."""
    k = _num_qubits(rho)
    if k > FULL_TENSOR_MAX_K:
        raise SizeLimit(f"full_tensor limited to k <= {FULL_TENSOR_MAX_K}, got {k}")
    raw = _apply_per_qubit(_TRACE_MAP, _pairs_view(np.asarray(rho, dtype=complex), k), k)
    return CorrelationTensor(k, _real_or_raise(raw.reshape(-1), "correlation tensor"))


def synthesize(values: np.ndarray, k: int) -> np.ndarray:
    """``2**-k sum_a values[..., a] sigma_a`` for a batch of flat coefficient arrays."""
    values = np.asarray(values)
    lead = values.shape[:-1]
    x = values.astype(complex).reshape(lead + (4,) * k)
    return _from_pairs(_apply_per_qubit(_SYNTH_MAP, x, k), k)


def reconstruct_density(T: CorrelationTensor) -> np.ndarray:
    """Inverse of :func:`full_tensor`."""
    return synthesize(T.values, T.k)


@dataclass(frozen=True)
class BlockFamily:
    """Blocks of ``rho = sum_rs rho^{rs} (x) |r><s|`` over the last qubit."""

    r00: np.ndarray
    r01: np.ndarray
    r10: np.ndarray
    r11: np.ndarray

    def block(self, r: int, s: int) -> np.ndarray:
        return (self.r00, self.r01, self.r10, self.r11)[2 * r + s]

    def reassemble(self) -> np.ndarray:
        return sum(
            np.kron(self.block(r, s), np.outer(np.eye(2)[r], np.eye(2)[s]))
            for r, s in product((0, 1), repeat=2)
        )


def block_decompose(rho: np.ndarray) -> BlockFamily:
    """Split a ``k``-qubit operator into four ``(k-1)``-qubit blocks on qubit ``k``."""
    k = _num_qubits(rho)
    if k < 2:
        raise DimensionError("block decomposition needs at least two qubits")
    d = 2 ** (k - 1)
    x = np.asarray(rho).reshape(d, 2, d, 2)
    return BlockFamily(*(x[:, r, :, s].copy() for r, s in product((0, 1), repeat=2)))


def _combine(t00, t01, t10, t11):
    """Bloch/recursion rule: block tensors -> tensor with a trailing Pauli axis."""
    return np.stack([t00 + t11, t01 + t10, 1j * t01 - 1j * t10, t00 - t11], axis=-1)


def block_tensor(op: np.ndarray) -> np.ndarray:
    """Complex Fano-Bloch coefficients of any (not necessarily Hermitian) operator.

    Recurses through :func:`block_decompose` down to 2x2 blocks; used as the
    generic counterpart of :func:`recursive_tensor`.
    """
    op = np.asarray(op, dtype=complex)
    if _num_qubits(op) == 1:
        return _combine(op[0, 0], op[0, 1], op[1, 0], op[1, 1])
    fam = block_decompose(op)
    parts = [block_tensor(fam.block(r, s)).reshape(-1) for r, s in product((0, 1), repeat=2)]
    return _combine(*parts).reshape(-1)


def _dyad_tensor(coeffs: np.ndarray, levels: int, weights: np.ndarray) -> np.ndarray:
    """Tensor of ``sum_xy C[x, y] |x eta^levels><y eta^levels|`` for a batch of C.

    ``x, y`` label the two coherent components (+eta, -eta); ``weights[x, r]`` is
    the amplitude of basis state ``r`` in the single-qubit component ``x``.  The
    block ``(r, s)`` on the last qubit is again a dyad combination with
    coefficients ``C[x, y] w[x, r] w[y, s]`` on one qubit fewer.
    """
    # blocks[..., 2r + s, x, y]
    blocks = np.stack(
        [
            coeffs * weights[:, r][:, None] * weights[:, s][None, :]
            for r, s in product((0, 1), repeat=2)
        ],
        axis=-3,
    )
    if levels == 1:
        # Single-qubit blocks are scalars: the sum of their coefficients.
        sub = blocks.sum(axis=(-2, -1))[..., None]
    else:
        sub = _dyad_tensor(blocks, levels - 1, weights)
    lead = coeffs.shape[:-2]
    return _combine(*(sub[..., rs, :] for rs in range(4))).reshape(lead + (-1,))


def recursive_tensor(spec: CatSpec, k: int) -> CorrelationTensor:
    """Correlation tensor of ``reduced_density(spec, k)`` via the block recursion.

    The reduced state is ``N^2 [D++ + D-- + e^{i m pi} q_k (D+- + D-+)]`` in terms of
    the dyads ``D_xy = |x eta^k><y eta^k|``.  Splitting off the last qubit maps each
    dyad combination to four combinations on ``k - 1`` qubits, and the block
    tensors combine as ``T..0 = T00 + T11``, ``T..1 = T01 + T10``,
    ``T..2 = i T01 - i T10``, ``T..3 = T00 - T11``.
    """
    if not 1 <= k <= spec.n:
        raise DimensionError(f"k={k} outside 1..{spec.n}")
    if k > RECURSIVE_MAX_K:
        raise SizeLimit(f"recursive_tensor limited to k <= {RECURSIVE_MAX_K}, got {k}")
    ap, am = spec.a_plus, spec.a_minus
    weights = np.array([[ap, am], [ap, -am]])
    cq = spec.cos_m_pi * spec.q(k)
    coeffs = spec.norm_sq * np.array([[1.0, cq], [cq, 1.0]], dtype=complex)
    raw = _dyad_tensor(coeffs, k, weights).reshape(-1)
    return CorrelationTensor(k, _real_or_raise(raw, "recursive tensor"))


def permute_tensor(T: CorrelationTensor, perm: Sequence[int]) -> CorrelationTensor:
    """Tensor of the state with its qubits reordered by ``perm``."""
    return CorrelationTensor(T.k, np.transpose(T.cube, perm).reshape(-1))


def selection_rule_mask(k: int) -> np.ndarray:
    """Boolean mask of multi-indices with an odd number of x/y entries."""
    digits = np.indices((4,) * k).reshape(k, -1)
    return (((digits == 1) | (digits == 2)).sum(axis=0) % 2) == 1
