"""Experiment runner: named pipelines over encode -> embed -> sample ->
decode/repair -> harvest -> analyze, with deterministic report emission.

Reports never include wall-clock or host detail, so re-running a config with
the same seed reproduces the emitted files byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, asdict
from typing import Optional

from . import boolfun as bf
from . import chimera, ising, postprocess, sampler


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = "custom"
    n: int = 4
    s_N: float = 0.25
    s_R: float = 0.0
    resiliency_order: Optional[int] = None
    include_balancedness: bool = False
    chain_strength: float = -1.0
    coupler_sweep: tuple = ()          # values substituted for s_N, one table row each
    embedded: bool = False
    solver: str = "sa"
    reads: int = 1000
    sweeps: int = 1000
    beta_range: tuple = (0.1, 10.0)
    seed: int = 0
    repetitions: int = 10
    nl_range: Optional[tuple] = None   # enables harvest when set
    top_k: int = 50
    repair: str = "majority"           # majority | expand
    expand_cap: int = 32
    output_dir: Optional[str] = None

    def validate(self):
        if self.coupler_sweep is not None and self.experiment.endswith("sweep") and not self.coupler_sweep:
            raise ValueError("sweep experiment with an empty coupler list")
        if self.solver not in sampler.SOLVERS:
            raise ValueError(f"unknown solver {self.solver!r}")
        if self.repair not in ("majority", "expand"):
            raise ValueError(f"unknown repair method {self.repair!r}")
        if self.repetitions < 1 or self.reads < 1:
            raise ValueError("repetitions and reads must be >= 1")


@dataclass(frozen=True)
class Report:
    config: dict
    columns: tuple
    rows: tuple                        # aggregate table, one tuple per row
    per_repetition: tuple              # raw per-repetition records
    seed: int

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "columns": list(self.columns),
            "rows": [list(r) for r in self.rows],
            "per_repetition": [dict(r) for r in self.per_repetition],
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        return cls(
            config=d["config"],
            columns=tuple(d["columns"]),
            rows=tuple(tuple(r) for r in d["rows"]),
            per_repetition=tuple(tuple(sorted(r.items())) for r in d["per_repetition"]),
            seed=d["seed"],
        )


PRESETS = {
    "exp-bent-n2": dict(
        experiment="exp-bent-n2", n=2, s_N=1.0, embedded=False,
        reads=1000, sweeps=1000, repetitions=1,
    ),
    "exp-bent-n4-sweep": dict(
        experiment="exp-bent-n4-sweep", n=4, embedded=True,
        coupler_sweep=(2.0, 1.0, 0.5, 0.25, 0.1), chain_strength=-1.0,
        reads=1000, sweeps=1000, repetitions=10,
    ),
    "exp-bent-n6-localsearch": dict(
        experiment="exp-bent-n6-localsearch", n=6, s_N=0.4, embedded=True,
        chain_strength=-1.0, reads=1000, sweeps=3000, beta_range=(0.5, 8.0),
        repetitions=10, nl_range=(25, 27), top_k=50,
    ),
    "exp-localsearch-n4": dict(
        experiment="exp-localsearch-n4", n=4, embedded=True,
        coupler_sweep=(1.0, 0.5, 0.25), chain_strength=-1.0,
        reads=1000, sweeps=1000, repetitions=10, nl_range=(4, 6), top_k=1000,
    ),
    "exp-balanced-n4": dict(
        experiment="exp-balanced-n4", n=4, s_N=0.0, s_R=0.125,
        include_balancedness=True, embedded=True, chain_strength=-1.0,
        reads=1000, sweeps=1000, repetitions=10,
    ),
    "exp-resilient-n4": dict(
        experiment="exp-resilient-n4", n=4, resiliency_order=1,
        include_balancedness=True, embedded=True, chain_strength=-1.0,
        coupler_sweep=(0.25, 0.5, 0.125, 0.05), s_R=0.125,
        reads=1000, sweeps=1000, repetitions=10,
    ),
}


def preset_config(name: str, **overrides) -> ExperimentConfig:
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; have {sorted(PRESETS)}")
    kw = dict(PRESETS[name])
    kw.update(overrides)
    return ExperimentConfig(**kw)


def _build_model(config: ExperimentConfig, s_N: float) -> ising.IsingModel:
    parts = []
    if s_N > 0:
        parts.append(ising.encode_nonlinearity(config.n, s_N))
    if config.resiliency_order is not None or config.include_balancedness:
        parts.append(
            ising.encode_resiliency(
                config.n,
                config.resiliency_order or 0,
                config.s_R,
                config.include_balancedness,
            )
        )
    return ising.combine(parts)


def _build_embedding(config: ExperimentConfig, s_N: float) -> Optional[chimera.Embedding]:
    if not config.embedded:
        return None
    has_res = config.resiliency_order is not None or config.include_balancedness
    if s_N > 0 and has_res:
        return chimera.embed_combined(config.n)
    if s_N > 0:
        return chimera.embed_bipartite(config.n)
    return chimera.embed_clique(1 << config.n)


def _satisfies(config: ExperimentConfig, tt: bf.TruthTable) -> bool:
    ws = bf.walsh_transform(tt)
    if config.resiliency_order is not None:
        balanced, ci, resil = bf.resiliency_profile(tt)
        return resil is not None and resil >= config.resiliency_order
    if config.include_balancedness:
        return ws.coefficients[0] == 0
    return bf.is_bent(ws)


def _run_once(config: ExperimentConfig, s_N: float, seed: int, stage_out: dict):
    """One repetition: returns a per-repetition record."""
    try:
        model = _build_model(config, s_N)
    except Exception as exc:
        raise RuntimeError(f"[encode] {exc}") from exc
    embedding = None
    target = model
    try:
        embedding = _build_embedding(config, s_N)
        if embedding is not None:
            physical = chimera.apply_embedding(model, embedding, config.chain_strength)
            target = physical.model
    except Exception as exc:
        raise RuntimeError(f"[embed] {exc}") from exc
    schedule = sampler.Schedule(
        reads=config.reads, sweeps=config.sweeps, beta_range=config.beta_range, seed=seed
    )
    try:
        sset = sampler.SOLVERS[config.solver](target, schedule)
    except Exception as exc:
        raise RuntimeError(f"[sample] {exc}") from exc

    try:
        if embedding is not None and config.repair == "expand":
            entries = []
            for s in sset:
                for cand in postprocess.expand_broken_chains(s.spins, embedding, config.expand_cap):
                    entries.append((ising.decode_function(cand, config.n), s.energy))
        else:
            entries = postprocess.decode_sampleset(sset, config.n, embedding=embedding, seed=seed)
    except Exception as exc:
        raise RuntimeError(f"[decode] {exc}") from exc

    total = len(entries)
    satisfying = [tt for tt, _ in entries if _satisfies(config, tt)]
    distinct_initial = {tt.to_hex() for tt in satisfying}
    record = {
        "seed": seed,
        "coupler_strength": s_N if s_N > 0 else config.s_R,
        "reads": total,
        "satisfying_reads": len(satisfying),
        "frequency_pct": round(100.0 * len(satisfying) / total, 4) if total else 0.0,
        "distinct_initial": len(distinct_initial),
        "min_energy": sset.min_energy,
    }
    if config.nl_range is not None:
        try:
            harvested = postprocess.harvest(
                entries, config.n, config.nl_range, config.top_k,
                criterion=lambda tt: _satisfies(config, tt),
            )
        except Exception as exc:
            raise RuntimeError(f"[search] {exc}") from exc
        combined = distinct_initial | {tt.to_hex() for tt in harvested}
        record["distinct_optimized"] = len(combined)
        record["harvested"] = len(harvested)
    stage_out["sampleset"] = sset
    return record


def run_experiment(config: ExperimentConfig) -> Report:
    config.validate()
    sweep = config.coupler_sweep or (config.s_N,)
    columns = ["coupler_strength", "repetitions", "mean_frequency_pct", "mean_distinct_initial"]
    if config.nl_range is not None:
        columns.append("mean_distinct_optimized")
    per_rep = []
    rows = []
    samplesets = []
    for s_N in sweep:
        recs = []
        for rep in range(config.repetitions):
            # per-repetition seeds derived deterministically from the base seed
            seed = (config.seed * 1_000_003 + hash((round(s_N * 1e6), rep))) & 0x7FFFFFFF
            stage_out = {}
            rec = _run_once(config, s_N, seed, stage_out)
            rec["repetition"] = rep
            recs.append(rec)
            samplesets.append((s_N, rep, stage_out.get("sampleset")))
        per_rep.extend(recs)
        row = [
            s_N,
            config.repetitions,
            round(sum(r["frequency_pct"] for r in recs) / len(recs), 4),
            round(sum(r["distinct_initial"] for r in recs) / len(recs), 4),
        ]
        if config.nl_range is not None:
            row.append(round(sum(r["distinct_optimized"] for r in recs) / len(recs), 4))
        rows.append(tuple(row))
    cfg_dict = asdict(config)
    cfg_dict.pop("output_dir", None)   # run-local path; kept out of emitted bytes
    report = Report(
        config=cfg_dict,
        columns=tuple(columns),
        rows=tuple(rows),
        per_repetition=tuple(per_rep),
        seed=config.seed,
    )
    if config.output_dir:
        os.makedirs(config.output_dir, exist_ok=True)
        for s_N, rep, sset in samplesets:
            if sset is not None:
                sset.write(os.path.join(config.output_dir, f"samples_c{s_N}_r{rep}.txt"))
        emit(report, config.output_dir)
    return report


def report_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow(row)
    return buf.getvalue()


def report_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def emit(report: Report, output_dir: str, stem: str = "report"):
    """Write the CSV aggregate table and the full-fidelity JSON record."""
    os.makedirs(output_dir, exist_ok=True)
    csv_path = os.path.join(output_dir, f"{stem}.csv")
    json_path = os.path.join(output_dir, f"{stem}.json")
    with open(csv_path, "w") as fh:
        fh.write(report_csv(report))
    with open(json_path, "w") as fh:
        fh.write(report_json(report))
    return csv_path, json_path
