"""Single-point evaluation and deterministic parameter sweeps."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import discord, encoding
from .eig3 import eigh3, top_direction
from .errors import CatDiscordError, SingularNormalization
from .fano_bloch import recursive_tensor
from .states import CatSpec, Parity

log = logging.getLogger(__name__)

HEADER = (
    "n", "k", "p", "m", "k1", "k2", "k3",
    "dg_recursive", "dg_encoded", "dg_brute", "max_method_diff",
    "e1", "e2", "e3", "chi_min_eig", "flags",
)  # fmt: skip
METHODS = ("recursive", "encoded", "brute")
ODD_P_LIMIT = 1.0 - 1e-6
DEFAULT_TOL = 1e-8


@dataclass
class ResultRow:
    n: int
    k: int
    p: float
    m: int
    k1: float | None = None
    k2: float | None = None
    k3: float | None = None
    dg_recursive: float | None = None
    dg_encoded: float | None = None
    dg_brute: float | None = None
    max_method_diff: float | None = None
    e1: float | None = None
    e2: float | None = None
    e3: float | None = None
    chi_min_eig: float | None = None
    flags: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        out = {name: getattr(self, name) for name in HEADER}
        out["flags"] = ";".join(self.flags)
        return out


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if isinstance(value, str):
        return value
    value = float(value)
    if value == 0.0:
        value = 0.0  # drop the sign of negative zero
    return f"{value:.17g}"


def _json_value(value):
    if value is None or isinstance(value, (str, int)):
        return value
    value = float(value)
    return 0.0 if value == 0.0 else value


def resolve_methods(method: str) -> tuple[str, ...]:
    return METHODS if method == "all" else (method,)


def is_singular_point(p: float, parity: Parity) -> bool:
    return parity is Parity.ODD and p >= ODD_P_LIMIT


def compute_row(
    n: int,
    k: int,
    p: float,
    parity: Parity,
    methods: Sequence[str] = METHODS,
    tol: float = DEFAULT_TOL,
    n_nodes: int = discord.DEFAULT_NODES,
) -> ResultRow:
    """Evaluate one grid point.  Raises :class:`SingularNormalization` for singular specs."""
    spec = CatSpec(n, p, parity)
    row = ResultRow(n=n, k=k, p=spec.p, m=int(parity))
    T = recursive_tensor(spec, k)
    K = discord.build_K(T)
    row.k1, row.k2, row.k3 = (float(v) for v in np.diag(K))
    if "recursive" in methods:
        row.dg_recursive = max(discord.discord_from_eigs(eigh3(K)[0], k), 0.0)
    if "encoded" in methods:
        row.dg_encoded = encoding.discord_encoded(spec, k)
    if "brute" in methods:
        if k <= discord.BRUTE_MAX_K:
            from .states import reduced_density

            row.dg_brute, _ = discord.brute_force_discord(reduced_density(spec, k), n_nodes=n_nodes)
        else:
            row.flags.append("brute_skipped")
    values = [v for v in (row.dg_recursive, row.dg_encoded, row.dg_brute) if v is not None]
    row.max_method_diff = float(max(values) - min(values)) if values else 0.0
    if row.max_method_diff > tol:
        row.flags.append("method_mismatch")

    e = top_direction(K)
    row.e1, row.e2, row.e3 = (float(v) for v in e)
    chi = discord.classical_state_matrix(discord.optimal_classical_params(T, e))
    row.chi_min_eig = discord.min_eigenvalue(chi)
    if row.chi_min_eig < discord.CHI_PSD_FLAG:
        row.flags.append("chi_not_psd")
    return row


def _safe_point(args) -> ResultRow:
    n, k, p, parity, methods, tol, n_nodes = args
    try:
        return compute_row(n, k, p, parity, methods, tol, n_nodes)
    except CatDiscordError as exc:
        return ResultRow(n=n, k=k, p=p, m=int(parity), flags=[f"error:{type(exc).__name__}"])


@dataclass
class SweepConfig:
    n_values: Sequence[int]
    k_values: Sequence[int]
    p_start: float = 0.0
    p_end: float = 1.0
    p_steps: int = 101
    parities: Sequence[Parity] = (Parity.EVEN, Parity.ODD)
    methods: Sequence[str] = ("recursive", "encoded")
    tol: float = DEFAULT_TOL
    n_nodes: int = discord.DEFAULT_NODES

    def __post_init__(self):
        if not self.n_values or not self.k_values or self.p_steps < 1 or not self.parities:
            raise ValueError("sweep grids must be non-empty")
        for p in (self.p_start, self.p_end):
            if not -1.0 < p <= 1.0:
                raise ValueError(f"p={p} outside (-1, 1]")

    def p_grid(self) -> np.ndarray:
        if self.p_steps == 1:
            return np.array([self.p_start])
        return np.linspace(self.p_start, self.p_end, self.p_steps)

    def points(self) -> list[tuple]:
        """Grid points in output order (n, k, m, ascending p), singular ones dropped."""
        out = []
        grid = np.sort(self.p_grid())
        for n in sorted(set(self.n_values)):
            for k in sorted(set(self.k_values)):
                if not 2 <= k <= n:
                    continue
                for parity in sorted(set(self.parities)):
                    for p in grid:
                        p = float(p)
                        if is_singular_point(p, parity):
                            log.info("skipping n=%d k=%d p=%r m=%d: singular", n, k, p, parity)
                            continue
                        try:
                            CatSpec(n, p, parity)
                        except SingularNormalization:
                            log.info("skipping n=%d k=%d p=%r m=%d: singular", n, k, p, parity)
                            continue
                        out.append((n, k, p, parity, tuple(self.methods), self.tol, self.n_nodes))
        return out


def run_sweep(config: SweepConfig, jobs: int = 1) -> list[ResultRow]:
    points = config.points()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_safe_point, points, chunksize=8))
    return [_safe_point(pt) for pt in points]


def rows_to_csv(rows: Iterable[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for row in rows:
        d = row.as_dict()
        writer.writerow([_fmt(d[name]) for name in HEADER])
    return buf.getvalue()


def rows_to_json(rows: Iterable[ResultRow]) -> str:
    data = [{name: _json_value(v) for name, v in row.as_dict().items()} for row in rows]
    return json.dumps(data, indent=1) + "\n"


def parse_int_set(text: str) -> list[int]:
    """Parse ``"2,3,5-7"`` into ``[2, 3, 5, 6, 7]``."""
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            values.extend(range(int(lo), int(hi) + 1))
        else:
            values.append(int(part))
    if not values:
        raise ValueError(f"empty integer set {text!r}")
    return values


def finite_row(row: ResultRow) -> bool:
    return all(
        v is None or math.isfinite(v)
        for v in (row.k1, row.k2, row.k3, row.dg_recursive, row.dg_encoded, row.dg_brute)
    )
