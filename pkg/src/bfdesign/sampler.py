"""Low-energy sampling: exact enumeration, simulated annealing, and
path-integral simulated quantum annealing.

All stochastic samplers are deterministic given (model, schedule, seed):
every readout carries its own counter-derived random stream, so results do
not depend on execution order.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass, asdict

import numpy as np
from numba import njit

from .ising import IsingModel, SpinAssignment, energy


@dataclass(frozen=True)
class Schedule:
    reads: int = 1000
    sweeps: int = 1000
    beta_range: tuple = (0.1, 10.0)
    trotter_slices: int = 32
    transverse_field_range: tuple = (3.0, 0.01)
    temperature: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.reads < 1 or self.sweeps < 1:
            raise ValueError("reads and sweeps must be >= 1")
        if min(self.beta_range) <= 0 or min(self.transverse_field_range) <= 0:
            raise ValueError("temperatures and fields must be positive")
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")

    def betas(self) -> np.ndarray:
        b0, b1 = self.beta_range
        return np.geomspace(b0, b1, self.sweeps)

    def gammas(self) -> np.ndarray:
        g0, g1 = self.transverse_field_range
        return np.geomspace(g0, g1, self.sweeps)


@dataclass(frozen=True)
class Sample:
    spins: tuple
    energy: float
    multiplicity: int = 1


@dataclass(frozen=True)
class SampleSet:
    model_hash: str
    samples: tuple
    schedule: Schedule
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))

    @property
    def min_energy(self) -> float:
        return self.samples[0].energy

    def __iter__(self):
        return iter(self.samples)

    def __len__(self):
        return len(self.samples)

    def to_lines(self):
        sched = asdict(self.schedule)
        header = (
            f"# model_hash={self.model_hash} seed={self.seed} "
            + " ".join(f"{k}={v!r}".replace(" ", "") for k, v in sorted(sched.items()))
        )
        lines = [header]
        for s in self.samples:
            spins = "".join("+" if v > 0 else "-" for v in s.spins)
            lines.append(f"{spins} {s.energy!r} {s.multiplicity}")
        return lines

    def write(self, path):
        with open(path, "w") as fh:
            fh.write("\n".join(self.to_lines()) + "\n")


def read_sampleset(path) -> SampleSet:
    """Parse the line-oriented sample file written by SampleSet.write."""
    with open(path) as fh:
        header = fh.readline().rstrip("\n")
        if not header.startswith("# "):
            raise ValueError(f"{path}: missing sample-file header")
        fields = dict(tok.split("=", 1) for tok in header[2:].split())
        model_hash = fields.pop("model_hash")
        seed = int(fields.pop("seed"))
        sched_kw = {k: ast.literal_eval(v) for k, v in fields.items()}
        sched_kw["seed"] = seed  # the header's schedule echo shares the seed token
        schedule = Schedule(**sched_kw)
        samples = []
        for line in fh:
            spins_s, energy_s, mult_s = line.split()
            spins = tuple(1 if c == "+" else -1 for c in spins_s)
            samples.append(Sample(spins=spins, energy=float(energy_s), multiplicity=int(mult_s)))
    return SampleSet(model_hash=model_hash, samples=tuple(samples), schedule=schedule, seed=seed)


def _collect(model: IsingModel, states: np.ndarray, schedule: Schedule) -> SampleSet:
    """Merge duplicate readouts and sort by (energy, spins)."""
    counts = {}
    for row in states:
        key = tuple(int(v) for v in row)
        counts[key] = counts.get(key, 0) + 1
    samples = [
        Sample(spins=k, energy=energy(model, SpinAssignment(k)), multiplicity=c)
        for k, c in counts.items()
    ]
    samples.sort(key=lambda s: (s.energy, s.spins))
    return SampleSet(
        model_hash=model.model_hash(), samples=tuple(samples),
        schedule=schedule, seed=schedule.seed,
    )


def solve_exact(model: IsingModel) -> SampleSet:
    """Exhaustive scan; returns every assignment attaining the global minimum."""
    n = model.num_spins
    if n > 24:
        raise ValueError(f"exact enumeration capped at 24 spins, model has {n}")
    h, j = model.dense_arrays()
    best_e = math.inf
    best_states = []
    chunk = 1 << 16
    shifts = np.arange(n, dtype=np.uint32)
    for start in range(0, 1 << n, chunk):
        idx = np.arange(start, min(start + chunk, 1 << n), dtype=np.uint32)
        spins = (((idx[:, None] >> shifts) & 1).astype(np.int8) * 2 - 1).astype(np.float64)
        e = model.offset + spins @ h + np.einsum("ki,ki->k", spins @ j, spins)
        lo = e.min()
        if lo < best_e - 1e-9:
            best_e = lo
            best_states = [spins[np.abs(e - lo) <= 1e-9].astype(np.int8)]
        elif lo <= best_e + 1e-9:
            best_states.append(spins[np.abs(e - best_e) <= 1e-9].astype(np.int8))
    schedule = Schedule(reads=1, sweeps=1, seed=0)
    return _collect(model, np.concatenate(best_states), schedule)


_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_PHI = np.uint64(0x9E3779B97F4A7C15)


@njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(cache=True, inline="always")
def _next_uniform(state):
    # splitmix64 step; returns (new_state, uniform in [0, 1))
    state = state + np.uint64(0x9E3779B97F4A7C15)
    z = _mix64(state)
    return state, (z >> np.uint64(11)) * (1.0 / 9007199254740992.0)


_LN2 = 0.6931471805599453
_LOG2E = 1.4426950408889634


@njit(cache=True, inline="always")
def _exp_neg(x):
    # e^-x for 0 <= x < 40: range reduction + order-5 Taylor, ~1e-6 relative
    k = int(x * _LOG2E + 0.5)
    f = x - k * _LN2
    p = 1.0 - f * (1.0 - f * (0.5 - f * (1.0 / 6.0 - f * (1.0 / 24.0 - f / 120.0))))
    return math.ldexp(p, -k)


@njit(cache=True, fastmath=True)
def _sa_kernel(h, off, idx, w, betas, reads, seed):
    n = h.size
    sweeps = betas.size
    out = np.empty((reads, n), dtype=np.int8)
    s = np.empty(n, dtype=np.float64)
    field = np.empty(n, dtype=np.float64)
    for r in range(reads):
        state = _mix64(np.uint64(seed) ^ (np.uint64(r + 1) * np.uint64(0x9E3779B97F4A7C15)))
        for i in range(n):
            state, u = _next_uniform(state)
            s[i] = 1.0 if u < 0.5 else -1.0
        # cached local fields, updated incrementally on every accepted flip
        for i in range(n):
            f = h[i]
            for p in range(off[i], off[i + 1]):
                f += w[p] * s[idx[p]]
            field[i] = f
        for t in range(sweeps):
            beta = betas[t]
            for i in range(n):
                x = -2.0 * beta * s[i] * field[i]
                acc = False
                if x <= 0.0:
                    acc = True
                elif x < 14.0:  # acceptance below ~1e-6 is skipped outright
                    state, u = _next_uniform(state)
                    acc = u < _exp_neg(x)
                if acc:
                    delta = -2.0 * s[i]
                    s[i] = -s[i]
                    for p in range(off[i], off[i + 1]):
                        field[idx[p]] += w[p] * delta
        for i in range(n):
            out[r, i] = np.int8(1) if s[i] > 0 else np.int8(-1)
    return out


def sample_sa(model: IsingModel, schedule: Schedule) -> SampleSet:
    """Simulated annealing: independent restarts, single-spin Metropolis flips
    over a geometric inverse-temperature ramp."""
    h, _ = model.dense_arrays()
    off, idx, w = model.neighbor_lists()
    states = _sa_kernel(h, off, idx, w, schedule.betas(),
                        schedule.reads, np.uint64(schedule.seed & 0xFFFFFFFFFFFFFFFF))
    return _collect(model, states, schedule)


@njit(cache=True, fastmath=True)
def _sqa_kernel(h, off, idx, w, gammas, slices, temperature, reads, sweeps, seed):
    n = h.size
    p_slices = slices
    out = np.empty((reads, n), dtype=np.int8)
    beta = 1.0 / temperature
    for r in range(reads):
        state = _mix64(np.uint64(seed) ^ (np.uint64(r + 1) * np.uint64(0x9E3779B97F4A7C15)))
        s = np.empty((p_slices, n), dtype=np.int8)
        for k in range(p_slices):
            for i in range(n):
                state, u = _next_uniform(state)
                s[k, i] = 1 if u < 0.5 else -1
        for t in range(sweeps):
            gamma = gammas[t]
            # ferromagnetic replica coupling; strength grows as the field ramps down
            j_perp = -0.5 * p_slices * temperature * math.log(
                math.tanh(gamma / (p_slices * temperature))
            )
            for k in range(p_slices):
                up = (k + 1) % p_slices
                dn = (k - 1) % p_slices
                for i in range(n):
                    local = h[i]
                    for p in range(off[i], off[i + 1]):
                        local += w[p] * s[k, idx[p]]
                    local /= p_slices
                    local -= j_perp * (s[up, i] + s[dn, i])
                    d_e = -2.0 * s[k, i] * local
                    if d_e <= 0.0:
                        s[k, i] = -s[k, i]
                    else:
                        state, u = _next_uniform(state)
                        if u < math.exp(-beta * d_e):
                            s[k, i] = -s[k, i]
        # report the replica with the lowest problem energy
        best_k = 0
        best_e = math.inf
        for k in range(p_slices):
            e = 0.0
            for i in range(n):
                e += h[i] * s[k, i]
                for p in range(off[i], off[i + 1]):
                    if idx[p] > i:
                        e += w[p] * s[k, i] * s[k, idx[p]]
            if e < best_e:
                best_e = e
                best_k = k
        out[r] = s[best_k]
    return out


def sample_sqa(model: IsingModel, schedule: Schedule) -> SampleSet:
    """Path-integral Monte Carlo over Trotter replicas with a geometric
    transverse-field ramp; each read reports its lowest-energy replica."""
    if schedule.trotter_slices < 2:
        raise ValueError("SQA needs at least 2 Trotter slices")
    h, _ = model.dense_arrays()
    off, idx, w = model.neighbor_lists()
    states = _sqa_kernel(h, off, idx, w, schedule.gammas(), schedule.trotter_slices,
                         schedule.temperature, schedule.reads, schedule.sweeps,
                         np.uint64(schedule.seed & 0xFFFFFFFFFFFFFFFF))
    return _collect(model, states, schedule)


SOLVERS = {"exact": lambda m, s: solve_exact(m), "sa": sample_sa, "sqa": sample_sqa}
