"""Physical-to-logical decoding (majority vote, broken-chain expansion) and
hill-climbing refinement of near-optimal functions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .boolfun import TruthTable, hadamard_matrix, is_bent, nonlinearity, sign_vector, walsh_transform
from .chimera import Embedding
from .ising import SpinAssignment, decode_function


@dataclass(frozen=True)
class DecodedSample:
    assignment: SpinAssignment
    broken_chain_count: int
    origin: tuple                 # the physical readout this came from
    repair_method: str


def _tie_sign(seed: int, chain_index: int) -> int:
    # deterministic per-chain coin for even chains split 50/50
    h = (seed * 0x9E3779B97F4A7C15 + chain_index * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    h ^= h >> 31
    return 1 if h & 1 else -1


def majority_vote_decode(physical_spins, embedding: Embedding, seed: int = 0) -> DecodedSample:
    """Logical spin = sign of each chain's spin sum; ties broken by a seeded coin."""
    spins = tuple(int(v) for v in physical_spins)
    ties = False
    logical = []
    broken = 0
    for ci, chain in enumerate(embedding.chains):
        for q in chain:
            if q >= len(spins):
                raise ValueError(f"physical sample does not cover qubit {q}")
        total = sum(spins[q] for q in chain)
        if abs(total) != len(chain):
            broken += 1
        if total > 0:
            logical.append(1)
        elif total < 0:
            logical.append(-1)
        else:
            ties = True
            logical.append(_tie_sign(seed, ci))
    method = "majority+tiebreak" if ties else "majority"
    return DecodedSample(
        assignment=SpinAssignment(tuple(logical)),
        broken_chain_count=broken,
        origin=spins,
        repair_method=method,
    )


def expand_broken_chains(physical_spins, embedding: Embedding, cap: int = 64):
    """Enumerate logical assignments: unanimous chains fixed, each broken chain
    tried both ways, in Gray-code order over broken chains sorted by index."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    spins = tuple(int(v) for v in physical_spins)
    base = []
    broken = []
    for ci, chain in enumerate(embedding.chains):
        vals = [spins[q] for q in chain]
        if all(v == vals[0] for v in vals):
            base.append(vals[0])
        else:
            total = sum(vals)
            base.append(1 if total >= 0 else -1)
            broken.append(ci)
    k = len(broken)
    count = min(1 << k if k < 63 else cap, cap)
    out = []
    for step in range(count):
        gray = step ^ (step >> 1)
        vals = list(base)
        for bit, ci in enumerate(broken):
            if (gray >> bit) & 1:
                vals[ci] = -vals[ci]
        out.append(SpinAssignment(tuple(vals)))
    return out


def hill_climb(tt: TruthTable) -> TruthTable:
    """Steepest-ascent on nonlinearity over single-bit flips; ties to the lowest
    flipped index; stops when no neighbor strictly improves.

    Each step updates the Walsh spectrum incrementally: flipping bit u shifts
    every coefficient by -2 * b_u * (-1)^popcount(a & u).
    """
    size = 1 << tt.n
    had = hadamard_matrix(tt.n)          # had[a, u]
    b = np.array(sign_vector(tt).entries, dtype=np.int64)
    w = np.array(walsh_transform(tt).coefficients, dtype=np.int64)
    half = size // 2
    current_nl = half - np.max(np.abs(w)) // 2
    while True:
        # neighbor_w[u, a] = W_a after flipping truth-table bit u
        neighbor_w = w[None, :] - 2 * b[:, None] * had.T
        neighbor_nl = half - np.max(np.abs(neighbor_w), axis=1) // 2
        u = int(np.argmax(neighbor_nl))  # argmax takes the lowest index on ties
        if neighbor_nl[u] <= current_nl:
            return TruthTable(tt.n, tuple(int((1 - v) // 2) for v in b))
        w = neighbor_w[u]
        b[u] = -b[u]
        current_nl = int(neighbor_nl[u])


def harvest(entries, n: int, nl_range, top_k: int,
            criterion=None) -> set:
    """Polish the lowest-energy decoded functions with hill climbing.

    entries: iterable of (TruthTable, energy) pairs, lowest energy first after
    sorting. Functions whose nonlinearity falls inside nl_range are climbed;
    the deduplicated results satisfying the criterion (default: bent) are
    returned as a set of TruthTables.
    """
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    if criterion is None:
        criterion = lambda f: is_bent(walsh_transform(f))
    lo, hi = nl_range
    ranked = sorted(entries, key=lambda p: p[1])[:top_k]
    found = set()
    for tt, _ in ranked:
        nl = nonlinearity(walsh_transform(tt))
        if not lo <= nl <= hi:
            continue
        improved = hill_climb(tt)
        if criterion(improved):
            found.add(improved)
    return found


def decode_sampleset(sampleset, n: int, embedding: Optional[Embedding] = None, seed: int = 0):
    """Turn a SampleSet into (TruthTable, energy) pairs, one per readout.

    With an embedding, each physical readout is majority-vote repaired first;
    without one, the function-spin prefix is read directly.
    """
    out = []
    for s in sampleset:
        if embedding is not None:
            dec = majority_vote_decode(s.spins, embedding, seed=seed)
            tt = decode_function(dec.assignment, n)
        else:
            tt = decode_function(SpinAssignment(s.spins), n)
        out.extend([(tt, s.energy)] * s.multiplicity)
    return out
