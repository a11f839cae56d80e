"""Self-validation: every library invariant checked over a parameter grid."""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import discord, encoding, fano_bloch, states
from .discord import build_K, closed_form_eigs, geometric_discord
from .eig3 import eigh3
from .errors import InvariantError
from .fano_bloch import CorrelationTensor, full_tensor, permute_tensor, reconstruct_density, selection_rule_mask
from .states import CatSpec, Parity, cat_state_vector, partial_trace, reduced_density

GRID_P = (0.0, 0.25, 0.5, 0.75, 0.99)
RECURSION_MAX_K = 6
BRUTE_CHECK_MAX_K = 5
FAULT_SIZE = 1e-6


@dataclass
class Check:
    name: str
    where: str
    error: float
    tol: float

    @property
    def ok(self) -> bool:
        return bool(self.error <= self.tol)


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        by_name: dict[str, list[Check]] = {}
        for c in self.checks:
            by_name.setdefault(c.name, []).append(c)
        lines = []
        for name, group in by_name.items():
            bad = sum(not c.ok for c in group)
            worst = max(c.error for c in group)
            status = "ok  " if not bad else "FAIL"
            lines.append(f"{status} {name:<28} {len(group):6d} checks  worst {worst:.3e}  failed {bad}")
        lines.append(f"total {len(self.checks)} checks, {len(self.failures)} failed, {self.seconds:.1f}s")
        for c in self.failures[:10]:
            lines.append(f"  violation: {c.name} at {c.where}: error {c.error:.3e} > tol {c.tol:.1e}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(
            {
                "passed": self.passed,
                "total": len(self.checks),
                "failed": len(self.failures),
                "seconds": self.seconds,
                "violations": [asdict(c) for c in self.failures[:10]],
            },
            indent=1,
        )


def _max_abs(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def _where(spec: CatSpec, k: int) -> str:
    return f"n={spec.n},k={k},p={spec.p!r},m={int(spec.parity)}"


class Validator:
    """Runs the invariant suite.  ``inject_fault`` perturbs the recursive tensor."""

    def __init__(self, max_n: int = 8, tol: float = 1e-12, seed: int = 0, inject_fault: bool = False,
                 n_random: int = 3, n_nodes: int = discord.DEFAULT_NODES):
        if not 2 <= max_n <= 10:
            raise ValueError("max_n must lie in 2..10")
        self.max_n = max_n
        self.tol = tol
        self.rng = np.random.default_rng(seed)
        self.inject_fault = inject_fault
        self.n_nodes = n_nodes
        self.p_values = sorted(set(GRID_P) | {round(float(x), 6) for x in self.rng.uniform(0.0, 0.99, n_random)})
        self.report = ValidationReport()

    def _record(self, name, where, error, tol):
        self.report.checks.append(Check(name, where, float(error), float(tol)))

    def _recursive(self, spec, k) -> CorrelationTensor:
        T = fano_bloch.recursive_tensor(spec, k)
        if self.inject_fault:
            values = T.values.copy()
            values[-1] += FAULT_SIZE
            T = CorrelationTensor(k, values)
        return T

    def specs(self):
        for n in range(2, self.max_n + 1):
            for parity in (Parity.EVEN, Parity.ODD):
                for p in self.p_values:
                    yield CatSpec(n, p, parity)

    def run(self) -> ValidationReport:
        t0 = time.perf_counter()
        for spec in self.specs():
            psi = cat_state_vector(spec)
            for k in range(1, spec.n + 1):
                rho = reduced_density(spec, k)
                self._cat_checks(spec, k, psi, rho)
                if k <= RECURSION_MAX_K:
                    T = self._tensor_checks(spec, k, rho)
                    if k >= 2:
                        self._discord_checks(spec, k, rho, T)
                if k >= 2:
                    self._encoding_checks(spec, k)
        self.report.seconds = time.perf_counter() - t0
        return self.report

    def _cat_checks(self, spec, k, psi, rho):
        w = _where(spec, k)
        self._record("partial_trace_oracle", w, _max_abs(partial_trace(psi, range(k)), rho), self.tol)
        subset = sorted(self.rng.choice(spec.n, size=k, replace=False).tolist())
        self._record("exchange_symmetry", w, _max_abs(partial_trace(psi, subset), rho), self.tol)
        try:
            states.check_density_matrix(rho, herm_tol=self.tol, trace_tol=self.tol, max_rank=2)
            self._record("density_invariants", w, 0.0, 0.0)
        except InvariantError:
            self._record("density_invariants", w, 1.0, 0.0)
        # Z^(x)k, the collective parity
        parity_op = np.diag(np.prod(np.array(list(itertools.product([1.0, -1.0], repeat=k))), axis=1))
        self._record("parity_commutator", w, np.max(np.abs(parity_op @ rho - rho @ parity_op)), self.tol)
        if k < spec.n:
            evals = np.linalg.eigvalsh(rho)
            expected = sorted(states.rank_two_weights(spec, k))
            big = evals[evals >= 1e-8]
            exp_big = [x for x in expected if x >= 1e-8]
            err = _max_abs(np.sort(big), exp_big) if len(big) == len(exp_big) else 1.0
            self._record("rank_two_spectrum", w, err, 1e-10)

    def _tensor_checks(self, spec, k, rho) -> CorrelationTensor:
        w = _where(spec, k)
        direct = full_tensor(rho)
        T = self._recursive(spec, k)
        self._record("recursion_vs_direct", w, _max_abs(T.values, direct.values), self.tol)
        perm = self.rng.permutation(k).tolist()
        self._record("permutation_symmetry", w, _max_abs(permute_tensor(direct, perm).values, direct.values), self.tol)
        self._record("parity_selection", w, np.max(np.abs(direct.values[selection_rule_mask(k)]), initial=0.0), self.tol)
        self._record("pauli_round_trip", w, _max_abs(reconstruct_density(direct), rho), self.tol)
        purity = float(np.real(np.trace(rho @ rho)))
        self._record("frobenius_identity", w, abs(purity - np.sum(direct.values**2) / 2**k), 1e-10)
        return T

    def _discord_checks(self, spec, k, rho, T):
        w = _where(spec, k)
        K = build_K(T)
        eigs, _ = eigh3(K)
        scale = max(float(np.max(np.abs(eigs))), 1e-300)
        self._record("k_offdiagonal", w, np.max(np.abs(K - np.diag(np.diag(K)))), 1e-12)
        if k <= 4:
            cf = np.sort(closed_form_eigs(spec, k))
            self._record("closed_form_spectrum", w, np.max(np.abs(eigs - cf)) / scale, 1e-11)
        norm_sq = float(np.sum(T.values.reshape(4, -1)[1:] ** 2))
        self._record("trace_identity", w, abs(eigs.sum() - norm_sq), 1e-10)
        if spec.p >= 0:
            d = np.diag(K)
            self._record("k2_le_k1", w, max(d[1] - d[0], 0.0), 1e-12)
        l_scaled = np.array(encoding.l_values(spec, k)) * 2 ** (k - 2)
        self._record("encoding_scaling", w, np.max(np.abs(np.diag(K) - l_scaled)) / scale, 1e-10)

        d_g = max(discord.discord_from_eigs(eigs, k), 0.0)
        self._record("discord_routes", w, abs(d_g - geometric_discord(spec, k)), 1e-10)
        nodes, dists = discord.grid_distances(rho, n_nodes=200)
        self._record("variational_bound", w, max(d_g - float(dists.min()) - 1e-10, 0.0), 0.0)
        quad = np.einsum("bi,ij,bj->b", nodes, K, nodes).max()
        spacing = discord.node_spacing(200)
        self._record("max_form", w, max(eigs[-1] - quad - (eigs[-1] - eigs[0]) * spacing**2, 0.0), 1e-12)
        if k <= BRUTE_CHECK_MAX_K:
            brute, params = discord.brute_force_discord(rho, n_nodes=self.n_nodes)
            self._record("oracle_agreement", w, abs(brute - d_g), 1e-8)
            if spec.p in GRID_P and k <= 4:
                chi = discord.classical_state_matrix(params)
                fixed, _ = discord.brute_force_discord(chi, n_nodes=self.n_nodes)
                self._record("zero_discord_fixed_point", w, fixed, 1e-10)
                closest = discord.closest_classical_state(spec, k)
                self._record("closest_state_distance", w, abs(closest.distance_sq - d_g), 1e-9)

    def _encoding_checks(self, spec, k):
        w = _where(spec, k)
        enc = encoding.encode(spec, k)
        if k == 2:
            self._record("encode_k2_identity", w, _max_abs(enc.matrix, reduced_density(spec, 2)), self.tol)
        R = full_tensor(enc.matrix)
        support = np.zeros((4, 4), dtype=bool)
        for a, b in ((0, 0), (1, 1), (2, 2), (3, 3), (0, 3), (3, 0)):
            support[a, b] = True
        grid = R.values.reshape(4, 4)
        self._record("encoded_support", w, np.max(np.abs(grid[~support])), self.tol)
        self._record("r_tensor_closed_form", w, _max_abs(grid, encoding.r_tensor(spec, k).as_matrix()), self.tol)
        if k <= BRUTE_CHECK_MAX_K and spec.p in GRID_P:
            brute, _ = discord.brute_force_discord(enc.matrix, n_nodes=self.n_nodes)
            self._record("encoded_oracle", w, abs(brute - encoding.discord_encoded(spec, k)), 1e-8)


def run_validation(max_n: int = 8, tol: float = 1e-12, seed: int = 0, inject_fault: bool = False) -> ValidationReport:
    return Validator(max_n=max_n, tol=tol, seed=seed, inject_fault=inject_fault).run()


__all__ = ["Check", "ValidationReport", "Validator", "run_validation"]
