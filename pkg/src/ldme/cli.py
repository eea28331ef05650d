"""Command-line interface.

Subcommands: estimate (real data), synth (instance generation),
experiment (config-driven end-to-end run), reduce (standalone list
reduction). Exit codes: 0 ok, 2 config error, 3 algorithmic infeasibility,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import ConfigError, RunConfig
from .dataio import (
    DataFormatError,
    load_hypotheses_json,
    load_points,
    save_hypotheses_json,
    save_points_binary,
    save_points_csv,
)
from .driver import HypothesisList, list_decode_mean
from .experiment import load_config, run_experiment, run_sweep
from .instances import InstanceSpec, gen_instance
from .listreduce import ReduceConfig, reduce_list
from .multifilter import InfeasibleSplit

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=float, help="assumed inlier fraction")
    parser.add_argument("--sigma", type=float, help="inlier covariance scale")
    parser.add_argument("--scale-c", type=float, dest="scale_c")
    parser.add_argument("--big-c", type=float, dest="big_c")
    parser.add_argument("--seed", type=int)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ldme",
        description="List-decodable mean estimation with a majority of outliers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="estimate candidate means from a points file")
    est.add_argument("--input", required=True, help="points file (CSV or LDME binary)")
    _add_run_flags(est)
    est.add_argument("--out", help="write hypotheses JSON here (default stdout)")
    est.add_argument("--sep-const", type=float, dest="sep_const", default=8.0)
    est.add_argument("--no-reduce", action="store_true", help="skip list reduction")

    syn = sub.add_parser("synth", help="generate a synthetic instance")
    syn.add_argument("--config", help="instance spec JSON (flags override)")
    syn.add_argument("--out", required=True, help="points file to write")
    syn.add_argument("--meta", help="metadata JSON (true mean, inlier mask)")
    syn.add_argument("--format", choices=("csv", "bin"), default="csv")
    syn.add_argument("--n", type=int)
    syn.add_argument("--d", type=int)
    syn.add_argument("--alpha", type=float)
    syn.add_argument("--sigma", type=float)
    syn.add_argument("--inlier-model", dest="inlier_model")
    syn.add_argument("--adversary")
    syn.add_argument("--decoys", type=int)
    syn.add_argument("--separation", type=float)
    syn.add_argument("--noise-radius", type=float, dest="noise_radius")
    syn.add_argument("--outlier-file", dest="outlier_file")
    syn.add_argument("--mean-radius", type=float, dest="mean_radius")
    syn.add_argument("--seed", type=int)

    exp = sub.add_parser("experiment", help="run a config-driven experiment")
    exp.add_argument("--config", required=True)
    _add_run_flags(exp)
    exp.add_argument("--out", help="override the report path")
    exp.add_argument("--trace", help="override the trace CSV path")

    red = sub.add_parser("reduce", help="reduce a hypothesis list")
    red.add_argument("--input", required=True, help="hypotheses JSON")
    red.add_argument("--alpha", type=float, required=True)
    red.add_argument("--sep-const", type=float, dest="sep_const", default=8.0)
    red.add_argument("--sigma-scale", type=float, dest="sigma_scale", default=1.0)
    red.add_argument("--out", help="write reduced JSON here (default stdout)")
    return parser


def _run_config_from_args(args, base: dict | None = None) -> RunConfig:
    raw = dict(base or {})
    for key in ("alpha", "sigma", "scale_c", "big_c", "seed"):
        val = getattr(args, key, None)
        if val is not None:
            raw[key] = val
    if "alpha" not in raw:
        raise ConfigError("alpha: required (flag or config)")
    return RunConfig(**raw)


def _cmd_estimate(args) -> int:
    points = load_points(args.input)
    cfg = _run_config_from_args(args)
    hyps, _ = list_decode_mean(points, cfg)
    payload: dict = {"alpha": cfg.alpha, "vectors": hyps.vectors.tolist()}
    if not args.no_reduce:
        rc = ReduceConfig(
            alpha=cfg.alpha, sep_const=args.sep_const, sigma_scale=cfg.rescale_factor
        )
        payload["reduced"] = reduce_list(hyps, rc).vectors.tolist()
        payload["reduction_radius"] = rc.radius
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        json.dump(payload, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    return EXIT_OK


def _cmd_synth(args) -> int:
    raw: dict = {}
    if args.config:
        with open(args.config) as fh:
            raw = json.load(fh)
        if "instance" in raw:
            raw = raw["instance"]
    for key in (
        "n",
        "d",
        "alpha",
        "sigma",
        "inlier_model",
        "adversary",
        "decoys",
        "separation",
        "noise_radius",
        "outlier_file",
        "mean_radius",
        "seed",
    ):
        val = getattr(args, key, None)
        if val is not None:
            raw[key] = val
    spec = InstanceSpec.from_dict(raw)
    points, mask, mean = gen_instance(spec)
    if args.format == "bin":
        save_points_binary(args.out, points)
    else:
        save_points_csv(args.out, points)
    if args.meta:
        with open(args.meta, "w") as fh:
            json.dump(
                {
                    "true_mean": mean.tolist(),
                    "inlier_mask": mask.astype(int).tolist(),
                    "n": spec.n,
                    "d": spec.d,
                    "alpha": spec.alpha,
                    "seed": spec.seed,
                },
                fh,
                indent=2,
                sort_keys=True,
            )
            fh.write("\n")
    return EXIT_OK


def _cmd_experiment(args) -> int:
    cfg = load_config(args.config)
    for key in ("alpha", "sigma", "scale_c", "big_c", "seed"):
        val = getattr(args, key, None)
        if val is not None:
            cfg.setdefault("run", {})[key] = val
            if key in ("alpha", "sigma", "seed"):
                cfg.setdefault("instance", {})[key] = val
    if args.out:
        cfg.setdefault("output", {})["report"] = args.out
    if args.trace:
        cfg.setdefault("output", {})["trace"] = args.trace
    if cfg.get("seeds"):
        reports = run_sweep(cfg)
        summary = [r.to_dict() for r in reports]
        json.dump(summary, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        report = run_experiment(cfg)
        sys.stdout.write(report.to_json())
        sys.stdout.write("\n")
    return EXIT_OK


def _cmd_reduce(args) -> int:
    vectors = load_hypotheses_json(args.input)
    rc = ReduceConfig(
        alpha=args.alpha, sep_const=args.sep_const, sigma_scale=args.sigma_scale
    )
    reduced = reduce_list(HypothesisList(vectors), rc)
    if args.out:
        save_hypotheses_json(args.out, reduced.vectors, extra={"radius": rc.radius})
    else:
        json.dump(
            {"vectors": reduced.vectors.tolist(), "radius": rc.radius},
            sys.stdout,
            indent=2,
            sort_keys=True,
        )
        sys.stdout.write("\n")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "estimate": _cmd_estimate,
        "synth": _cmd_synth,
        "experiment": _cmd_experiment,
        "reduce": _cmd_reduce,
    }
    try:
        return handlers[args.command](args)
    except InfeasibleSplit as err:
        print(f"ldme: infeasible split: {err} {err.details}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except DataFormatError as err:
        print(f"ldme: data error: {err}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as err:
        print(f"ldme: config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, ValueError) as err:
        print(f"ldme: config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as err:
        print(f"ldme: i/o error: {err}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
