"""Command-line front end: analyze / oracle / encode / embed / sample /
decode / search / experiment / emit."""

from __future__ import annotations

import argparse
import json
import sys

from . import boolfun as bf
from . import chimera, harness, ising, oracle, postprocess, sampler


def _write_json(obj, path):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_analyze(args):
    tt = bf.TruthTable.from_hex(args.hex)
    if args.json:
        _write_json(bf.analysis_record(tt), args.output)
    else:
        print(bf.analysis_report_text(tt))
    return 0


def cmd_oracle(args):
    kw = {}
    if args.predicate in ("ci", "resilient", "resilient_nl"):
        kw["m"] = args.m
    if args.predicate == "resilient_nl":
        kw["min_nl"] = args.min_nl
    rec = oracle.count_report(args.n, args.predicate, paper_claim=args.claim, **kw)
    if args.functions:
        _, funcs = oracle.enumerate_functions(
            oracle.CriterionQuery(args.n, args.predicate, want_functions=True, **kw)
        )
        rec["functions"] = [f.to_hex() for f in funcs]
    _write_json(rec, args.output)
    return 0


def _build_logical(args) -> ising.IsingModel:
    spec = ising.CriteriaSpec(
        n=args.n,
        s_N=args.coupler_strength,
        s_R=args.resiliency_weight,
        resiliency_order=args.m,
        include_balancedness=args.balanced,
    )
    return spec.build()


def cmd_encode(args):
    model = _build_logical(args)
    _write_json(model.to_dict(), args.output)
    return 0


def _build_embedding(args) -> chimera.Embedding:
    if args.layout == "bipartite":
        return chimera.embed_bipartite(args.n)
    if args.layout == "clique":
        return chimera.embed_clique(1 << args.n)
    return chimera.embed_combined(args.n)


def cmd_embed(args):
    emb = _build_embedding(args)
    report = chimera.validate_embedding(emb)
    if not report:
        for v in report.violations:
            print(f"error: [embed] {v}", file=sys.stderr)
        return 1
    out = {"embedding": emb.to_dict(), "num_physical_qubits": emb.num_physical_qubits}
    if args.model:
        with open(args.model) as fh:
            logical = ising.IsingModel.from_dict(json.load(fh))
        physical = chimera.apply_embedding(logical, emb, args.chain_strength)
        out["physical_model"] = physical.model.to_dict()
        out["chain_strength"] = args.chain_strength
    _write_json(out, args.output)
    return 0


def cmd_sample(args):
    with open(args.model) as fh:
        doc = json.load(fh)
    model = ising.IsingModel.from_dict(doc.get("physical_model", doc))
    schedule = sampler.Schedule(
        reads=args.reads, sweeps=args.sweeps, seed=args.seed,
        beta_range=(args.beta_min, args.beta_max),
    )
    if args.solver == "exact":
        sset = sampler.solve_exact(model)
    else:
        sset = sampler.SOLVERS[args.solver](model, schedule)
    if args.output and args.output != "-":
        sset.write(args.output)
    else:
        sys.stdout.write("\n".join(sset.to_lines()) + "\n")
    return 0


def _load_embedding(path):
    if path is None:
        return None
    with open(path) as fh:
        doc = json.load(fh)
    return chimera.Embedding.from_dict(doc.get("embedding", doc))


def cmd_decode(args):
    sset = sampler.read_sampleset(args.samples)
    emb = _load_embedding(args.embedding)
    records = []
    if emb is not None and args.repair == "expand":
        for s in sset:
            for cand in postprocess.expand_broken_chains(s.spins, emb, args.cap):
                tt = ising.decode_function(cand, args.n)
                records.append({"tt_hex": tt.to_hex(), "energy": s.energy,
                                "repair_method": "expand"})
    else:
        for s in sset:
            if emb is not None:
                dec = postprocess.majority_vote_decode(s.spins, emb, seed=args.seed)
                tt = ising.decode_function(dec.assignment, args.n)
                rec = {"tt_hex": tt.to_hex(), "energy": s.energy,
                       "multiplicity": s.multiplicity,
                       "broken_chains": dec.broken_chain_count,
                       "repair_method": dec.repair_method}
            else:
                tt = ising.decode_function(ising.SpinAssignment(s.spins), args.n)
                rec = {"tt_hex": tt.to_hex(), "energy": s.energy,
                       "multiplicity": s.multiplicity}
            records.append(rec)
    _write_json(records, args.output)
    return 0


def cmd_search(args):
    sset = sampler.read_sampleset(args.samples)
    emb = _load_embedding(args.embedding)
    entries = postprocess.decode_sampleset(sset, args.n, embedding=emb, seed=args.seed)
    lo, hi = args.range
    found = postprocess.harvest(entries, args.n, (lo, hi), args.top)
    in_range = sum(
        1 for tt, _ in entries
        if lo <= bf.nonlinearity(bf.walsh_transform(tt)) <= hi
    )
    _write_json(
        {
            "total_reads": len(entries),
            "in_range": in_range,
            "distinct_found": len(found),
            "functions": sorted(tt.to_hex() for tt in found),
        },
        args.output,
    )
    return 0


def _parse_config_file(path) -> dict:
    """Flat key=value lines; values parsed as JSON scalars/lists when possible."""
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            try:
                out[key] = json.loads(val)
            except json.JSONDecodeError:
                out[key] = val
    for key in ("coupler_sweep", "beta_range", "nl_range"):
        if key in out and isinstance(out[key], list):
            out[key] = tuple(out[key])
    return out


def cmd_experiment(args):
    overrides = _parse_config_file(args.config) if args.config else {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.output_dir:
        overrides["output_dir"] = args.output_dir
    if args.preset:
        config = harness.preset_config(args.preset, **overrides)
    else:
        config = harness.ExperimentConfig(**overrides)
    report = harness.run_experiment(config)
    if not config.output_dir:
        sys.stdout.write(harness.report_csv(report))
    return 0


def cmd_emit(args):
    with open(args.report) as fh:
        report = harness.Report.from_dict(json.load(fh))
    csv_path, json_path = harness.emit(report, args.output_dir)
    print(csv_path)
    print(json_path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bfdesign",
        description="Design cryptographic Boolean functions with annealed Ising encodings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="report spectrum-derived properties of a truth table")
    p.add_argument("hex", help="truth-table hex string (bit 0 first)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("oracle", help="exhaustive counts over all functions (n <= 4)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--predicate", choices=oracle.PREDICATES, default="bent")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--min-nl", type=int, default=0, dest="min_nl")
    p.add_argument("--claim", type=float, default=None,
                   help="external count to diff against")
    p.add_argument("--functions", action="store_true", help="list matching truth tables")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("encode", help="build a logical Ising model for the criteria")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--coupler-strength", type=float, default=0.25, dest="coupler_strength")
    p.add_argument("--resiliency-weight", type=float, default=0.125, dest="resiliency_weight")
    p.add_argument("--m", type=int, default=None, help="resiliency order to enforce")
    p.add_argument("--balanced", action="store_true")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("embed", help="construct and validate a chain embedding")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--layout", choices=("bipartite", "clique", "combined"), default="bipartite")
    p.add_argument("--chain-strength", type=float, default=-1.0, dest="chain_strength")
    p.add_argument("--model", default=None, help="logical model JSON to lower")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("sample", help="sample low-energy states of a model file")
    p.add_argument("--model", required=True)
    p.add_argument("--solver", choices=sorted(sampler.SOLVERS), default="sa")
    p.add_argument("--reads", type=int, default=1000)
    p.add_argument("--sweeps", type=int, default=1000)
    p.add_argument("--beta-min", type=float, default=0.1, dest="beta_min")
    p.add_argument("--beta-max", type=float, default=10.0, dest="beta_max")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("decode", help="turn physical samples into truth tables")
    p.add_argument("--samples", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--embedding", default=None)
    p.add_argument("--repair", choices=("majority", "expand"), default="majority")
    p.add_argument("--cap", type=int, default=32, help="expansion cap per sample")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("search", help="hill-climb the lowest-energy decoded functions")
    p.add_argument("--samples", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--embedding", default=None)
    p.add_argument("--range", type=int, nargs=2, required=True,
                   metavar=("LO", "HI"), help="nonlinearity window to polish")
    p.add_argument("--top", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("experiment", help="run a named experiment pipeline")
    p.add_argument("--preset", choices=sorted(harness.PRESETS), default=None)
    p.add_argument("--config", default=None, help="flat key=value config file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output-dir", default=None, dest="output_dir")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("emit", help="re-emit CSV/JSON files from a saved report")
    p.add_argument("--report", required=True)
    p.add_argument("--output-dir", required=True, dest="output_dir")
    p.set_defaults(func=cmd_emit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        stage = args.command
        msg = str(exc)
        # pipeline stages tag their own failures; pass those through unchanged
        stages = ("[encode]", "[embed]", "[sample]", "[decode]", "[search]")
        if not msg.startswith(stages):
            msg = f"[{stage}] {msg}"
        print(f"error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
