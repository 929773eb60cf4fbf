"""Command-line front end: radius computation, decompositions, suite runs.

Exit status: 0 on success (and suite pass), 1 when a verification suite
reports failures, 2 on usage or I/O errors.  OPRADIUS_SEED supplies a
default seed when --seed is absent.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .harness import EnsembleSpec, run_suite
from .linalg import abs_op, aluthge, cartesian, decode_matrix, encode_matrix, polar_decompose
from .radius import (
    OptimizerOptions,
    davis_wielandt,
    f_radius,
    numerical_radius,
    q_radius,
)
from .scalarmap import from_spec

DEFAULT_ENSEMBLE_KINDS = (
    "ginibre", "gue_hermitian", "haar_unitary", "nilpotent_jordan", "psd",
)
DEFAULT_MAP_SPECS = ("power:1", "power:2", "power:3", "power:0.5", "expm1", "log1p")
DEFAULT_VERIFY_SEED = 42


@dataclass
class CliConfig:
    """Parsed invocation; parse_args(cfg.to_argv()) == cfg."""

    command: str
    inputs: list = field(default_factory=list)
    radius: str = None
    map_spec: str = "power:2"
    q: float = 2.0
    restarts: int = None
    seed: int = None
    dims: tuple = (2, 3, 4)
    ns: tuple = (1, 2, 3)
    trials: int = 50
    bounds: tuple = None
    out: str = None
    format: str = "json"

    def to_argv(self):
        argv = [self.command]
        for path in self.inputs:
            argv += ["--in", path]
        if self.command == "compute":
            if self.radius is not None:
                argv += ["--radius", self.radius]
            argv += ["--map", self.map_spec, "--q", repr(self.q)]
            if self.restarts is not None:
                argv += ["--restarts", str(self.restarts)]
        elif self.command == "verify":
            argv += ["--dims", ",".join(str(d) for d in self.dims)]
            argv += ["--ns", ",".join(str(n) for n in self.ns)]
            argv += ["--trials", str(self.trials)]
            if self.bounds is not None:
                argv += ["--bounds", ",".join(self.bounds)]
            if self.restarts is not None:
                argv += ["--restarts", str(self.restarts)]
        if self.seed is not None:
            argv += ["--seed", str(self.seed)]
        if self.out is not None:
            argv += ["--out", self.out]
        argv += ["--format", self.format]
        return argv


def _int_list(text):
    try:
        return tuple(int(part) for part in text.split(",") if part)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="opradius",
        description="Operator radius computations and inequality verification "
                    "for complex matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--in", dest="inputs", action="append", default=[],
                       metavar="PATH", help="matrix JSON file (repeatable)")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None, metavar="PATH")
        p.add_argument("--format", choices=("json", "text"), default="json")

    p_compute = sub.add_parser("compute", help="compute a radius of an operator tuple")
    common(p_compute)
    p_compute.add_argument("--radius", choices=("numerical", "f", "q", "dw"),
                           default=None,
                           help="radius kind (default: numerical for one input, f otherwise)")
    p_compute.add_argument("--map", dest="map_spec", default="power:2",
                           help="scalar map spec: power:q, expm1, log1p, id")
    p_compute.add_argument("--q", type=float, default=2.0)
    p_compute.add_argument("--restarts", type=int, default=None)

    p_dec = sub.add_parser("decompose", help="print |T|, polar parts, Aluthge and Cartesian parts")
    common(p_dec)

    p_ver = sub.add_parser("verify", help="run the inequality verification suite")
    common(p_ver)
    p_ver.add_argument("--dims", type=_int_list, default=(2, 3, 4))
    p_ver.add_argument("--ns", type=_int_list, default=(1, 2, 3))
    p_ver.add_argument("--trials", type=int, default=50)
    p_ver.add_argument("--bounds", default=None,
                       help="comma-separated bound ids (default: all)")
    p_ver.add_argument("--restarts", type=int, default=None)
    return parser


def parse_args(argv):
    ns = _build_parser().parse_args(argv)
    cfg = CliConfig(command=ns.command)
    cfg.inputs = list(ns.inputs)
    cfg.seed = ns.seed
    cfg.out = ns.out
    cfg.format = ns.format
    if ns.command == "compute":
        cfg.radius = ns.radius
        cfg.map_spec = ns.map_spec
        cfg.q = ns.q
        cfg.restarts = ns.restarts
    elif ns.command == "verify":
        cfg.dims = tuple(ns.dims)
        cfg.ns = tuple(ns.ns)
        cfg.trials = ns.trials
        cfg.bounds = tuple(ns.bounds.split(",")) if ns.bounds else None
        cfg.restarts = ns.restarts
    return cfg


def _resolve_seed(cfg, default):
    if cfg.seed is not None:
        return cfg.seed
    env = os.environ.get("OPRADIUS_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"OPRADIUS_SEED must be an integer, got {env!r}")
    return default


def _load_inputs(cfg):
    mats = []
    for path in cfg.inputs:
        with open(path, "r", encoding="utf-8") as fh:
            mats.append(decode_matrix(json.load(fh)))
    if not mats:
        raise ValueError("at least one --in matrix is required")
    if len({m.shape[0] for m in mats}) != 1:
        raise ValueError("all input matrices must share one dimension")
    return mats


def _emit(cfg, payload_json, payload_text):
    text = (
        json.dumps(payload_json, indent=2, sort_keys=False)
        if cfg.format == "json"
        else payload_text
    )
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _estimate_payload(est):
    return {
        "value": float(est.value),
        "witness": [[float(z.real), float(z.imag)] for z in est.witness],
        "method": est.method,
        "starts_used": est.starts_used,
        "converged": est.converged,
    }


def _run_compute(cfg):
    mats = _load_inputs(cfg)
    kind = cfg.radius or ("numerical" if len(mats) == 1 else "f")
    seed = _resolve_seed(cfg, 0)
    opts = OptimizerOptions(restarts=cfg.restarts, seed=seed)
    if kind == "numerical":
        if len(mats) != 1:
            raise ValueError("--radius numerical takes exactly one --in matrix")
        est = numerical_radius(mats[0])
    elif kind == "dw":
        if len(mats) != 1:
            raise ValueError("--radius dw takes exactly one --in matrix")
        est = davis_wielandt(mats[0], from_spec(cfg.map_spec), opts)
    elif kind == "q":
        est = q_radius(mats, cfg.q, opts)
    else:
        est = f_radius(mats, from_spec(cfg.map_spec), opts)
    payload = _estimate_payload(est)
    text = "\n".join([
        f"value: {payload['value']!r}",
        f"method: {payload['method']} (starts {payload['starts_used']}, "
        f"converged {payload['converged']})",
        f"witness: {payload['witness']}",
    ])
    _emit(cfg, payload, text)
    return 0


def _run_decompose(cfg):
    mats = _load_inputs(cfg)
    if len(mats) != 1:
        raise ValueError("decompose takes exactly one --in matrix")
    t = mats[0]
    parts = polar_decompose(t)
    b, c = cartesian(t)
    pieces = {
        "modulus": abs_op(t),
        "isometry": parts.isometry,
        "aluthge": aluthge(t),
        "real_part": b,
        "imaginary_part": c,
    }
    payload = {name: encode_matrix(m) for name, m in pieces.items()}
    blocks = []
    for name, m in pieces.items():
        blocks.append(f"{name}:\n{np.array_str(m, precision=6, suppress_small=True)}")
    _emit(cfg, payload, "\n".join(blocks))
    return 0


def _run_verify(cfg):
    from .bounds import catalog

    seed = _resolve_seed(cfg, DEFAULT_VERIFY_SEED)
    bound_ids = list(cfg.bounds) if cfg.bounds else list(catalog())
    ensembles = [
        EnsembleSpec(kind, dim)
        for kind in DEFAULT_ENSEMBLE_KINDS
        for dim in cfg.dims
    ]
    maps = [from_spec(spec) for spec in DEFAULT_MAP_SPECS]
    opts = OptimizerOptions(restarts=cfg.restarts) if cfg.restarts else None
    report = run_suite(ensembles, maps, bounds=bound_ids, ns=cfg.ns,
                       trials=cfg.trials, seed=seed, opts=opts)
    _emit(cfg, report.to_json(), report.to_text())
    return 0 if report.overall_pass else 1


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    try:
        cfg = parse_args(argv)
    except SystemExit as exc:
        # argparse signals usage errors with code 2 and prints a diagnostic
        return 0 if exc.code in (0, None) else 2
    try:
        if cfg.command == "compute":
            return _run_compute(cfg)
        if cfg.command == "decompose":
            return _run_decompose(cfg)
        return _run_verify(cfg)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
