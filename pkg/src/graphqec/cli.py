"""Command-line front end for the experiment runner.

Exit codes: 0 success, 1 configuration or usage error, 2 runtime error.
Flags override fields loaded from a ``--config`` JSON file.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys

from . import kernel
from .code import PROBE_NAMES, inject_pauli_error, measure_syndromes, parse_error_spec
from .graphs import (Graph, RESOURCE, build_resource, graph_state,
                     resource_state_expansion, stabilizer_generators)
from .runner import (ConfigError, ExperimentConfig, ReportBundle, run_experiment,
                     _sanitize)
from .sampling import (counts_from_csv_rows, monte_carlo_uncertainty,
                       witness_value_from_counts)
from .witnesses import builtin_witnesses, fidelity_lower_bound


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on bad usage instead of argparse's 2
        raise _UsageError(message)


_KIND_BY_COMMAND = {
    "witness": "resource-witness",
    "encode": "encode-tomography",
    "channel": "encode-channel",
    "loss": "loss-recovery",
    "syndrome": "syndrome-table",
    "sweep": "noise-sweep",
}


def _add_common(p: _Parser):
    p.add_argument("--config", help="JSON config file; flags override its fields")
    p.add_argument("--seed", type=int, help="sampling seed")
    p.add_argument("--out", help="directory for the report bundle")
    p.add_argument("--format", dest="formats", action="append",
                   choices=["json", "csv", "svg"], help="output formats (repeatable)")
    p.add_argument("--counts", type=float, help="expected counts per setting")
    p.add_argument("--trials", type=int, help="Monte Carlo trials")
    p.add_argument("--visibility", type=float, help="white-noise visibility v")
    p.add_argument("--ideal", action="store_true", help="no noise (v = 1, no Kraus maps)")
    p.add_argument("--byproduct", choices=["condition0", "correct", "raw"])


def _build_parser() -> _Parser:
    parser = _Parser(prog="graphqec",
                     description="Four-qubit graph-code simulator and analysis runner")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("build-resource", help="resource-state self check")
    p.add_argument("--graph", help="JSON graph literal {vertices, edges}: report its "
                                   "graph state's stabilizer expectations instead")

    for cmd, help_text in [
        ("witness", "resource witness with Monte Carlo error bars"),
        ("encode", "logical tomography of the encoded probe states"),
        ("channel", "process tomography of the encoding channel"),
        ("loss", "loss of one qubit and recovery as a channel"),
        ("syndrome", "stabilizer sign table under injected errors"),
        ("sweep", "white-noise sweep and visibility calibration"),
    ]:
        p = sub.add_parser(cmd, help=help_text)
        _add_common(p)
        if cmd in ("encode", "syndrome"):
            p.add_argument("--probe", choices=list(PROBE_NAMES),
                           help="restrict to a single probe state")
        if cmd == "loss":
            p.add_argument("--lost", type=int, choices=[1, 2, 4, 5])
        if cmd == "syndrome":
            p.add_argument("--error", help="single error spec like Z@1, or none")

    p = sub.add_parser("analyze-counts", help="evaluate a witness on recorded counts")
    p.add_argument("--in", dest="infile", required=True, help="counts CSV (setting,outcome,count)")
    p.add_argument("--witness", required=True,
                   choices=["resource5", "box4", "ghz4", "pair2"])
    p.add_argument("--as-printed", action="store_true",
                   help="use the literally printed resource witness coefficients")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=12345)
    return parser


def _config_from_args(args) -> ExperimentConfig:
    data = {}
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
    data["kind"] = _KIND_BY_COMMAND[args.command]
    if args.seed is not None:
        data["seed"] = args.seed
    if args.counts is not None:
        data["counts_per_setting"] = args.counts
    if args.trials is not None:
        data["trials"] = args.trials
    if args.formats:
        data["formats"] = args.formats
    if args.byproduct:
        data["byproduct"] = args.byproduct
    if args.ideal:
        data["noise"] = {"visibility": 1.0}
    elif args.visibility is not None:
        noise = data.get("noise", {})
        noise["visibility"] = args.visibility
        data["noise"] = noise
    if getattr(args, "probe", None):
        data["probes"] = [args.probe]
    if getattr(args, "lost", None):
        data["lost"] = args.lost
    if getattr(args, "error", None):
        data["error"] = args.error
    return ExperimentConfig.from_dict(data)


def _emit(bundle: ReportBundle, args) -> None:
    out = args.out or bundle.provenance["config"].get("out_dir")
    if out:
        for path in bundle.write(out):
            print(f"wrote {path}")
    else:
        print(bundle.summary_json(), end="")


def _cmd_build_resource(args) -> int:
    if args.graph:
        with open(args.graph) as fh:
            try:
                g = Graph.from_dict(json.load(fh))
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError({"graph": f"bad graph literal: {exc}"}) from exc
        state = graph_state(g)
        report = {
            "graph": g.to_dict(),
            "stabilizer_expectations": {
                str(k): kernel.expectation(state, k.to_observable(state.labels))
                for k in stabilizer_generators(g)},
        }
    else:
        built = build_resource()
        report = {
            "overlap_graph_state": kernel.overlap(built, graph_state(RESOURCE)),
            "overlap_explicit_expansion": kernel.overlap(built, resource_state_expansion()),
            "stabilizer_expectations": {
                str(k): kernel.expectation(built, k.to_observable(built.labels))
                for k in stabilizer_generators(RESOURCE)},
        }
    print(json.dumps(_sanitize(report), sort_keys=True, indent=2))
    return 0


def _cmd_syndrome_single(args) -> int:
    cfg = _config_from_args(args)  # validates the error spec
    from .runner import encoded_state

    probe = args.probe or "+"
    state = encoded_state(probe, cfg.noise, cfg.byproduct)
    record = measure_syndromes(inject_pauli_error(state, parse_error_spec(cfg.error)))
    s1, s2, s3 = record.signs
    print(f"({s1:+d}, {s2:+d}, {s3:+d})")
    return 0


def _cmd_analyze_counts(args) -> int:
    with open(args.infile, newline="") as fh:
        rows = list(csv.reader(fh))
    records = counts_from_csv_rows(rows)
    spec = builtin_witnesses(resource_as_printed=args.as_printed)[args.witness]
    value = witness_value_from_counts(records, spec)
    _, std = monte_carlo_uncertainty(lambda rs: witness_value_from_counts(rs, spec),
                                     records, args.trials, args.seed)
    bound = fidelity_lower_bound(value)
    print(f"witness {spec.name}: value = {value:.4f} +/- {std:.4f} "
          f"(fidelity lower bound {bound:.4f})")
    return 0


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(parser.format_usage(), file=sys.stderr, end="")
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.command is None:
        print(parser.format_usage(), file=sys.stderr, end="")
        return 1
    try:
        if args.command == "build-resource":
            return _cmd_build_resource(args)
        if args.command == "analyze-counts":
            return _cmd_analyze_counts(args)
        if args.command == "syndrome" and getattr(args, "error", None) \
                and args.error.lower() != "none":
            return _cmd_syndrome_single(args)
        config = _config_from_args(args)
        bundle = run_experiment(config)
        if args.command == "encode":
            for probe in config.probes:
                fid = bundle.summary["probes"][probe]["fidelity_logical"]
                print(f"probe {probe}: logical fidelity = {fid:.6f}")
        _emit(bundle, args)
        return 0
    except (ConfigError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
