"""Command-line front end: code generation, decoding, projection debugging,
and Monte-Carlo channel sweeps.

Exit status is 0 on success, 1 on a usage error (bad flags or flag
values), and 2 on a runtime failure (missing files, malformed inputs).
Flag values beat an optional key=value config file, which beats the
built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .admm_decoder import AdmmConfig, DecodeOutput, decode
from .bp_decoder import BpConfig, decode_bp
from .channels import Awgn, Bsc, ChannelModel
from .codes import gen_regular_ldpc, emit_alist, parse_alist
from .dual_ascent import DualAscentConfig, decode_dual_ascent
from .parity_polytope import ProjectionWorkspace, project_parity_polytope
from .simulator import DecoderRef, stats_to_csv, sweep


class UsageError(Exception):
    """Bad argument content; reported with usage text, exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


# Config-file keys accepted per subcommand, with their converters.
_CONFIG_KEYS = {
    "gen-code": {"n": int, "dv": int, "dc": int, "seed": int},
    "decode": {
        "algo": str,
        "mu": float,
        "epsilon": float,
        "tmax": int,
        "rho": float,
        "step": float,
        "llr_clip": float,
    },
    "project": {},
    "simulate": {
        "decoder": str,
        "mu": float,
        "epsilon": float,
        "tmax": int,
        "rho": float,
        "step": float,
        "llr_clip": float,
        "trials": int,
        "target_errors": int,
        "max_trials": int,
        "seed": int,
        "workers": int,
        "rate": float,
    },
}


def _load_config(path: str, subcommand: str) -> dict:
    known = _CONFIG_KEYS[subcommand]
    values = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, _, val = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in known:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r} for {subcommand}")
        try:
            values[key] = known[key](val.strip())
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key!r}") from exc
    return values


def _default_workers() -> int:
    return int(os.environ.get("POLYLP_WORKERS", "1"))


def _add_decoder_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mu", type=float, default=3.0, help="ADMM penalty parameter")
    p.add_argument("--epsilon", type=float, default=1e-5, help="stopping tolerance")
    p.add_argument("--tmax", type=int, default=1000, help="maximum iterations")
    p.add_argument("--rho", type=float, default=1.9, help="over-relaxation parameter")
    p.add_argument("--step", type=float, default=0.1, help="dual-ascent step size")
    p.add_argument("--llr-clip", type=float, default=30.0, help="BP saturation (nats)")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="polylp",
        description="LP decoding of binary LDPC codes via ADMM, "
        "with BP and dual-ascent baselines.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    p = sub.add_parser("gen-code", help="generate a random regular LDPC code",
                       formatter_class=fmt)
    p.add_argument("--n", type=int, required=True, help="code length")
    p.add_argument("--dv", type=int, required=True, help="variable degree")
    p.add_argument("--dc", type=int, required=True, help="check degree")
    p.add_argument("--seed", type=int, default=0, help="ensemble seed")
    p.add_argument("--out", help="alist output path (default stdout)")
    p.add_argument("--config", help="key=value config file")
    p.set_defaults(func=_cmd_gen_code)

    p = sub.add_parser("decode", help="decode one LLR vector",
                       formatter_class=fmt)
    p.add_argument("--code", required=True, help="alist file of the code")
    p.add_argument("--llr", required=True,
                   help="LLR vector: inline whitespace-separated or a file path")
    p.add_argument("--algo", choices=["admm", "bp", "dual-ascent"], default="admm")
    _add_decoder_flags(p)
    p.add_argument("--out", help="JSON output path (default stdout)")
    p.add_argument("--config", help="key=value config file")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser(
        "project",
        help="project a vector (stdin) onto the parity polytope",
        formatter_class=fmt,
    )
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--config", help="key=value config file")
    p.set_defaults(func=_cmd_project)

    p = sub.add_parser("simulate", help="Monte-Carlo sweep over channel points",
                       formatter_class=fmt)
    p.add_argument("--code", required=True, help="alist file of the code")
    p.add_argument("--channel", choices=["bsc", "awgn"], required=True)
    p.add_argument("--points", required=True,
                   help="comma-separated channel parameters (p or Eb/N0 dB)")
    p.add_argument("--rate", type=float, default=None,
                   help="code rate for AWGN (default: design rate)")
    p.add_argument("--decoder", choices=["admm", "bp", "dual-ascent"], default="admm")
    _add_decoder_flags(p)
    p.add_argument("--trials", type=int, default=None, help="fixed trials per point")
    p.add_argument("--target-errors", type=int, default=None,
                   help="stop each point after this many word errors")
    p.add_argument("--max-trials", type=int, default=1_000_000,
                   help="trial ceiling in target-errors mode")
    p.add_argument("--seed", type=int, default=0, help="sweep seed")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel workers (default: POLYLP_WORKERS or 1)")
    p.add_argument("--timing", action=argparse.BooleanOptionalAction, default=True,
                   help="include wall-time columns in the CSV")
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.add_argument("--config", help="key=value config file")
    p.set_defaults(func=_cmd_simulate)

    return parser


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _read_code(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise RuntimeError(f"cannot read code file {path!r}: {exc}") from exc
    return parse_alist(text)


def _decoder_ref(algo: str, args: argparse.Namespace) -> DecoderRef:
    try:
        if algo == "admm":
            cfg = AdmmConfig(mu=args.mu, epsilon=args.epsilon,
                             t_max=args.tmax, rho=args.rho)
        elif algo == "bp":
            cfg = BpConfig(t_max=args.tmax, llr_clip=args.llr_clip)
        else:
            cfg = DualAscentConfig(step=args.step, t_max=args.tmax,
                                   epsilon=args.epsilon)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return DecoderRef(algo=algo, config=cfg)


def _cmd_gen_code(args: argparse.Namespace) -> int:
    try:
        code = gen_regular_ldpc(args.n, args.dv, args.dc, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _write(emit_alist(code), args.out)
    return 0


def _output_json(out: DecodeOutput) -> str:
    record = {
        "x": [float(v) for v in out.x],
        "status": out.status,
        "iterations": out.iterations,
        "integral": out.integral,
        "hard_decision": [int(b) for b in out.hard_decision],
        "ml_certificate": out.ml_certificate,
    }
    return json.dumps(record) + "\n"


def _cmd_decode(args: argparse.Namespace) -> int:
    code = _read_code(args.code)
    if os.path.exists(args.llr):
        gamma_text = Path(args.llr).read_text()
    else:
        gamma_text = args.llr
    try:
        gamma = np.array([float(t) for t in gamma_text.split()])
    except ValueError as exc:
        raise UsageError(f"cannot parse LLR vector: {exc}") from exc
    if gamma.size != code.n_vars:
        raise UsageError(
            f"LLR vector has {gamma.size} entries, code length is {code.n_vars}"
        )
    ref = _decoder_ref(args.algo, args)
    if args.algo == "admm":
        out = decode(gamma, code, ref.config)
    elif args.algo == "bp":
        out = decode_bp(gamma, code, ref.config)
    else:
        out = decode_dual_ascent(gamma, code, ref.config)
    _write(_output_json(out), args.out)
    return 0


def _cmd_project(args: argparse.Namespace) -> int:
    tokens = sys.stdin.read().split()
    if not tokens:
        raise RuntimeError("no vector on standard input")
    try:
        u = np.array([float(t) for t in tokens])
    except ValueError as exc:
        raise RuntimeError(f"cannot parse input vector: {exc}") from exc
    ws = ProjectionWorkspace()
    z = project_parity_polytope(u, ws)
    lines = [
        " ".join(f"{v:.12g}" for v in z),
        f"beta_opt {ws.beta_opt:.12g}",
        f"r {ws.r}",
    ]
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    code = _read_code(args.code)
    try:
        params = [float(t) for t in args.points.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse --points: {exc}") from exc
    rate = args.rate if args.rate is not None else code.design_rate
    try:
        points: list[ChannelModel] = [
            Bsc(p) if args.channel == "bsc" else Awgn(p, rate) for p in params
        ]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if (args.trials is None) == (args.target_errors is None):
        raise UsageError("give exactly one of --trials or --target-errors")
    workers = args.workers if args.workers is not None else _default_workers()
    ref = _decoder_ref(args.decoder, args)
    stats = sweep(
        code,
        points,
        ref,
        n_trials=args.trials,
        target_errors=args.target_errors,
        max_trials=args.max_trials,
        seed=args.seed,
        workers=workers,
    )
    _write(stats_to_csv(stats, timing=args.timing), args.out)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "config", None):
            overrides = _load_config(args.config, args.subcommand)
            # Flags given on the command line win over the config file.
            given = {a.split("=", 1)[0].lstrip("-").replace("-", "_")
                     for a in argv if a.startswith("--")}
            for key, value in overrides.items():
                if key not in given:
                    setattr(args, key, value)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"polylp {args.subcommand}: error: {exc}\n")
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        sys.stderr.write(f"polylp {args.subcommand}: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
