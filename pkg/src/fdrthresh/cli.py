"""Command line interface: denoise, simulate, boundary, detect.

Exit status is 0 on success, 2 for usage errors and 3 for bad data.
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
from dataclasses import asdict
from importlib import metadata

import jsonschema
import numpy as np
import scipy

from . import balls, detection, harness, risk
from .boundary import FdrBoundary
from .errors import DataError, DomainError
from .estimators import METHODS, empirical_fdr, estimate
from .io import read_vector, write_vector

EXIT_USAGE = 2
EXIT_DATA = 3

SPEC_SCHEMA = {
    "type": "object",
    "required": ["n"],
    "additionalProperties": False,
    "properties": {
        "task": {"enum": list(harness.TASKS)},
        "n": {"type": "integer", "minimum": 2},
        "p": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 2},
        "q_list": {
            "type": "array", "minItems": 1,
            "items": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        },
        "estimators": {"type": "array", "items": {"enum": list(harness.ESTIMATORS)}},
        "replicates": {"type": "integer", "minimum": 2},
        "seed": {"type": "integer", "minimum": 0},
        "loss_exponent": {"type": "number", "exclusiveMinimum": 0, "maximum": 2},
        "config_kind": {"enum": list(harness.CONFIG_KINDS)},
        "config_path": {"type": "string"},
        "negative_exponent": {"type": "boolean"},
    },
}


def mad_scale(x) -> float:
    """Median absolute deviation from the median, divided by 0.6745."""
    x = np.asarray(x, dtype=float)
    return float(np.median(np.abs(x - np.median(x))) / 0.6745)


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def cmd_denoise(args) -> int:
    y = read_vector(args.input)
    sigma = mad_scale(y) if args.mad else args.sigma
    if not sigma > 0:
        raise DataError(f"noise scale must be positive, got {sigma}")
    b = FdrBoundary(y.size, args.q, sigma)
    est = estimate(y, b, args.method, args.r)
    write_vector(args.output, est.mu_hat)
    summary = {
        "n": int(y.size),
        "q": args.q,
        "method": args.method,
        "sigma": sigma,
        "k_hat": est.selection.k_hat,
        "t_hat": est.selection.t_hat,
        "fdr": None,
    }
    if args.truth:
        summary["fdr"] = empirical_fdr(est, read_vector(args.truth))
    _emit(summary)
    return 0


def load_spec(path) -> harness.ExperimentSpec:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    errors = sorted(jsonschema.Draft202012Validator(SPEC_SCHEMA).iter_errors(raw), key=str)
    if errors:
        lines = [f"{'/'.join(map(str, e.absolute_path)) or '<root>'}: {e.message}" for e in errors]
        raise DataError(f"{path}: invalid spec\n  " + "\n  ".join(lines))
    try:
        return harness.ExperimentSpec(**raw)
    except DomainError as exc:
        raise DataError(f"{path}: {exc}") from None


def provenance(spec: harness.ExperimentSpec) -> dict:
    return {
        "spec": asdict(spec),
        "seed": spec.seed,
        "versions": {
            "fdrthresh": metadata.version("artifact"),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
    }


def run_spec(spec: harness.ExperimentSpec) -> dict:
    result = {"provenance": provenance(spec)}
    if spec.task == "table1":
        result["rows"] = [row.to_dict() for row in harness.run_table1(spec)]
        if "foster_george" in spec.estimators:
            fg = harness.run_foster_george(spec.n, spec.p, spec.replicates, spec.seed,
                                           spec.negative_exponent)
            result["foster_george"] = asdict(fg)
    elif spec.task == "foster_george":
        fg = harness.run_foster_george(spec.n, spec.p, spec.replicates, spec.seed,
                                       spec.negative_exponent)
        result["foster_george"] = asdict(fg)
    else:
        config = spec.configuration()
        rows = []
        for q in spec.q_list:
            b = FdrBoundary(spec.n, q)
            for name in spec.estimators:
                if name in ("step_up", "step_down", "penalized"):
                    rep = risk.mc_risk(config, b, name, spec.loss_exponent,
                                       spec.replicates, spec.seed)
                    rows.append({"q": q, **rep.to_dict()})
        if "fixed_tstar" in spec.estimators:
            rep = risk.mc_risk_fixed(config, balls.tstar(spec.p, spec.n), spec.loss_exponent,
                                     spec.replicates, spec.seed)
            rows.append({"q": None, **rep.to_dict()})
        result["rows"] = rows
    return result


def cmd_simulate(args) -> int:
    spec = load_spec(args.spec)
    with open(args.output, "w") as fh:
        json.dump(run_spec(spec), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 0


def cmd_boundary(args) -> int:
    b = FdrBoundary(args.n, args.q, args.sigma)
    bad = [k for k in args.k if not 1 <= k <= args.n]
    if bad:
        raise DataError(f"k must lie in [1, {args.n}]: {bad}")
    print(f"k\tt_k\tpenalty_sum_r{args.r:g}\tlambda_kn")
    for k in args.k:
        print(f"{k}\t{b.threshold_at(k):.6f}\t{b.penalty_sum(k, args.r):.6f}\t{b.lambda_kn(k):.6f}")
    return 0


def cmd_detect(args) -> int:
    mu = read_vector(args.config)
    if args.n is not None and args.n != mu.size:
        raise DataError(f"--n {args.n} does not match {mu.size} entries in {args.config}")
    n = mu.size
    b = FdrBoundary(n, args.q, args.sigma)
    out = {
        "n": n,
        "q": args.q,
        "exceedance_mean": {str(k): detection.exceedance_mean(b, mu, k) for k in args.k},
        "mean_discovery_number": detection.mean_discovery_number(b, mu),
    }
    if args.ball == balls.L0 and args.eta is None:
        eta = max(np.count_nonzero(mu), 1) / n
    else:
        eta = args.eta
    ball = balls.ParameterBall(args.ball, eta, n, args.p)
    bounds = detection.discovery_bounds(b, ball, mu)
    out["ball"] = {"kind": ball.kind, "eta": ball.eta, "p": ball.p}
    out["k_minus"] = bounds.k_minus
    out["k_plus"] = bounds.k_plus
    out["alpha_n"] = bounds.alpha_n
    out["k_n"] = bounds.k_n
    _emit(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fdrthresh", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("denoise", help="FDR-threshold a coefficient file")
    p.add_argument("--q", type=float, required=True)
    scale = p.add_mutually_exclusive_group()
    scale.add_argument("--sigma", type=float, default=1.0)
    scale.add_argument("--mad", action="store_true", help="estimate the noise scale by MAD")
    p.add_argument("--method", choices=METHODS, default="step_up")
    p.add_argument("--r", type=float, default=2.0, help="exponent for the penalized rule")
    p.add_argument("--truth", help="true means, to report the realized FDR")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("simulate", help="run a JSON experiment spec")
    p.add_argument("spec")
    p.add_argument("output")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("boundary", help="tabulate thresholds and penalties")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--k", type=int, nargs="+", required=True)
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("detect", help="mean exceedance and discovery bounds for a mean vector")
    p.add_argument("--config", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--k", type=float, nargs="+", default=[1.0])
    p.add_argument("--ball", choices=balls.KINDS, default=balls.L0)
    p.add_argument("--eta", type=float, help="ball radius (l0 default: fraction of nonzeros)")
    p.add_argument("--p", type=float)
    p.add_argument("--sigma", type=float, default=1.0)
    p.set_defaults(func=cmd_detect)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DataError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
