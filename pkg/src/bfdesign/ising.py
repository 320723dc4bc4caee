"""Ising encodings of Walsh-spectrum criteria.

Spin layout convention shared across the package: for an n-variable target,
spins [0, 2^n) carry the sign vector b_x of the function; when the
nonlinearity criterion is active, spins [2^n, 2^{n+1}) are ancillas, one
per Walsh index a. Energies are minimized: H = sum h_i s_i + sum J_ij s_i s_j
(+ offset).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .boolfun import TruthTable, WalshSpectrum, hadamard_matrix, popcount


@dataclass(frozen=True)
class IsingModel:
    num_spins: int
    linear: dict = field(default_factory=dict)       # spin -> h
    couplers: dict = field(default_factory=dict)     # (i, j) with i < j -> J
    offset: float = 0.0

    def __post_init__(self):
        norm = {}
        for (i, j), v in self.couplers.items():
            if i == j:
                raise ValueError(f"self-coupler on spin {i}")
            if not (0 <= i < self.num_spins and 0 <= j < self.num_spins):
                raise ValueError(f"coupler ({i},{j}) out of range")
            key = (min(i, j), max(i, j))
            if key in norm:
                raise ValueError(f"duplicate coupler {key}")
            norm[key] = float(v)
        object.__setattr__(self, "couplers", norm)
        for i in self.linear:
            if not 0 <= i < self.num_spins:
                raise ValueError(f"bias on spin {i} out of range")
        object.__setattr__(self, "linear", {int(i): float(h) for i, h in self.linear.items()})

    def to_dict(self) -> dict:
        return {
            "num_spins": self.num_spins,
            "offset": self.offset,
            "linear": [[i, h] for i, h in sorted(self.linear.items())],
            "couplers": [[i, j, v] for (i, j), v in sorted(self.couplers.items())],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IsingModel":
        return cls(
            num_spins=d["num_spins"],
            linear={i: h for i, h in d.get("linear", [])},
            couplers={(i, j): v for i, j, v in d.get("couplers", [])},
            offset=d.get("offset", 0.0),
        )

    def model_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def dense_arrays(self):
        """(h, J_upper) as float64 arrays; J_upper holds J_ij at [i, j] for i < j."""
        h = np.zeros(self.num_spins)
        for i, v in self.linear.items():
            h[i] = v
        j = np.zeros((self.num_spins, self.num_spins))
        for (a, b), v in self.couplers.items():
            j[a, b] = v
        return h, j

    def neighbor_lists(self):
        """CSR-style symmetric adjacency (offsets, indices, weights) for samplers."""
        adj = [[] for _ in range(self.num_spins)]
        for (i, j), v in self.couplers.items():
            adj[i].append((j, v))
            adj[j].append((i, v))
        offsets = np.zeros(self.num_spins + 1, dtype=np.int64)
        idx, w = [], []
        for i, lst in enumerate(adj):
            lst.sort()
            for j, v in lst:
                idx.append(j)
                w.append(v)
            offsets[i + 1] = len(idx)
        return offsets, np.array(idx, dtype=np.int64), np.array(w, dtype=np.float64)


@dataclass(frozen=True)
class SpinAssignment:
    values: tuple

    def __post_init__(self):
        if any(v not in (-1, 1) for v in self.values):
            raise ValueError("spins must be +/-1")
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))


@dataclass(frozen=True)
class CriteriaSpec:
    """Which criteria are active and at what coupler strengths.

    Defaults for (s_N, s_R) follow the best-performing weight pair of the
    resiliency experiments.
    """

    n: int
    s_N: float = 0.05
    resiliency_order: Optional[int] = None
    s_R: float = 0.125
    include_balancedness: bool = False

    def __post_init__(self):
        if self.s_N <= 0 and self.resiliency_order is None and not self.include_balancedness:
            raise ValueError("at least one criterion must be enabled")

    def build(self) -> IsingModel:
        parts = []
        if self.s_N > 0:
            parts.append(encode_nonlinearity(self.n, self.s_N))
        if self.resiliency_order is not None or self.include_balancedness:
            parts.append(
                encode_resiliency(
                    self.n,
                    self.resiliency_order or 0,
                    self.s_R,
                    self.include_balancedness or self.resiliency_order is not None,
                )
            )
        return combine(parts)


def encode_nonlinearity(n: int, s_N: float) -> IsingModel:
    """Bipartite coupling of function spins to one ancilla per Walsh index.

    J(x, 2^n + a) = s_N * (-1)^popcount(a & x). With ancillas minimized out,
    the energy is -s_N * sum_a |W_f(a)|, so global minima are exactly the
    bent functions at energy -s_N * 2^(3n/2).
    """
    if n % 2:
        raise ValueError("nonlinearity encoding requires even n")
    if not 2 <= n <= 8:
        raise ValueError("n must be in [2, 8]")
    if s_N <= 0:
        raise ValueError("s_N must be positive")
    size = 1 << n
    had = hadamard_matrix(n)
    couplers = {}
    for x in range(size):
        for a in range(size):
            couplers[(x, size + a)] = s_N * float(had[a, x])
    return IsingModel(num_spins=2 * size, couplers=couplers)


def resiliency_target_set(n: int, m: int, include_balancedness: bool):
    """Walsh indices A whose coefficients the resiliency encoding drives to zero."""
    targets = [a for a in range(1, 1 << n) if 1 <= popcount(a) <= m]
    if include_balancedness:
        targets.insert(0, 0)
    return targets


def encode_resiliency(n: int, m: int, s_R: float, include_balancedness: bool) -> IsingModel:
    """Quadratic penalty s_R * sum_{a in A} W_f(a)^2 on the function spins.

    Expanding the squares gives coupler J(x, y) = 2 * s_R * c_xy with
    c_xy = sum_{a in A} (-1)^popcount(a & (x XOR y)) and a constant
    offset s_R * |A| * 2^n, so the energy is exactly the penalty: >= 0,
    and 0 iff every targeted coefficient vanishes.
    """
    if not 0 <= m <= n:
        raise ValueError("resiliency order must satisfy 0 <= m <= n")
    if s_R <= 0:
        raise ValueError("s_R must be positive")
    targets = resiliency_target_set(n, m, include_balancedness)
    if not targets:
        raise ValueError("empty criterion set: m = 0 with balancedness disabled")
    size = 1 << n
    couplers = {}
    for x in range(size):
        for y in range(x + 1, size):
            d = x ^ y
            c = sum(1 - 2 * (popcount(a & d) & 1) for a in targets)
            if c:
                couplers[(x, y)] = 2.0 * s_R * c
    return IsingModel(num_spins=size, couplers=couplers, offset=s_R * len(targets) * size)


def combine(parts) -> IsingModel:
    """Sum models that share the function-spin prefix; same-pair couplers add."""
    parts = list(parts)
    if not parts:
        raise ValueError("nothing to combine")
    num_spins = max(p.num_spins for p in parts)
    linear = {}
    couplers = {}
    offset = 0.0
    for p in parts:
        offset += p.offset
        for i, h in p.linear.items():
            linear[i] = linear.get(i, 0.0) + h
        for key, v in p.couplers.items():
            couplers[key] = couplers.get(key, 0.0) + v
    couplers = {k: v for k, v in couplers.items() if v != 0.0}
    linear = {k: v for k, v in linear.items() if v != 0.0}
    return IsingModel(num_spins=num_spins, linear=linear, couplers=couplers, offset=offset)


def energy(model: IsingModel, assignment: SpinAssignment) -> float:
    if len(assignment.values) != model.num_spins:
        raise ValueError(
            f"assignment has {len(assignment.values)} spins, model needs {model.num_spins}"
        )
    s = assignment.values
    e = model.offset
    for i, h in model.linear.items():
        e += h * s[i]
    for (i, j), v in model.couplers.items():
        e += v * s[i] * s[j]
    return e


def batch_energy(model: IsingModel, states: np.ndarray) -> np.ndarray:
    """Energies for a (num_states, num_spins) matrix of +/-1 values."""
    h, j = model.dense_arrays()
    s = states.astype(np.float64)
    return model.offset + s @ h + np.einsum("ki,ki->k", s @ j, s)


def optimal_ancilla(ws: WalshSpectrum) -> tuple:
    """Ancilla a = -sign(W_f(a)); zero coefficients break ties to +1."""
    return tuple(-1 if c > 0 else 1 for c in ws.coefficients)


def decode_function(assignment: SpinAssignment, n: int) -> TruthTable:
    """Read the function back from the function-spin prefix; ancillas are ignored."""
    size = 1 << n
    if len(assignment.values) < size:
        raise ValueError(f"need at least {size} spins, got {len(assignment.values)}")
    return TruthTable(n, tuple((1 - v) // 2 for v in assignment.values[:size]))
