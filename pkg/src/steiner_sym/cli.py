"""Command line: ``steiner-sym run | oracle-check | sampler-check``.

Exit codes: 0 success, 1 a check failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .checks import oracle_check, sampler_check
from .errors import SteinerError
from .experiment import RunConfig, run
from .field import GridSpec
from .shapes import ShapeSpec


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_help(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _volume_arg(text: str):
    if text.lower() in ("kappa", "none"):
        return text.lower()
    return float(text)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="steiner-sym", description="Random Steiner symmetrization of occupancy fields.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    r = sub.add_parser("run", help="symmetrize a shape repeatedly and record a trace")
    r.add_argument("--dim", type=int, default=2, choices=(2, 3))
    r.add_argument("--resolution", type=int, default=256, help="cells per axis")
    r.add_argument("--extent", type=float, default=2.0, help="domain is [-R, R]^d")
    r.add_argument("--shape", default="l-shape",
                   help="ball | box | box-union | l-shape | annulus | two-balls | mask")
    r.add_argument("--shape-args", default="{}", help='JSON object, e.g. \'{"r_in": 0.4}\'')
    r.add_argument("--volume", type=_volume_arg, default="kappa",
                   help="target volume after dilation; 'none' keeps the raw shape (default: unit-ball volume)")
    r.add_argument("--steps", type=int, default=300)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--directions", default="uniform",
                   help="uniform | equidistributed | cyclic:<u1;u2;...> | axis-biased:<k>")
    r.add_argument("--renormalize", action="store_true", help="rescale each symmetral to the input volume")
    r.add_argument("--trace", help="CSV trace output path")
    r.add_argument("--snapshot-every", type=int)
    r.add_argument("--snapshot-dir")
    r.add_argument("--stop-epsilon", type=float, help="stop once d_N to the ball <= eps * volume")
    r.add_argument("--timing", action="store_true", help="record per-step wall time (traces stop being reproducible)")

    o = sub.add_parser("oracle-check", help="raster symmetrals vs exact box-union symmetrals")
    o.add_argument("--unions", type=int, default=10)
    o.add_argument("--pairs", type=int, default=50)
    o.add_argument("--resolution", type=int, default=256)
    o.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("sampler-check", help="validate the uniform direction sampler")
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--dim", type=int, default=3, choices=(2, 3))
    s.add_argument("--seed", type=int, default=0)
    p.set_defaults(_subparsers=sub.choices)
    return p


def _cmd_run(args) -> int:
    try:
        params = json.loads(args.shape_args)
    except json.JSONDecodeError as exc:
        raise _UsageError(f"--shape-args is not valid JSON: {exc}") from exc
    if not isinstance(params, dict):
        raise _UsageError("--shape-args must be a JSON object")
    if args.shape in ("mask", "mask-file", "mask_file") and "path" not in params:
        raise _UsageError("--shape mask needs --shape-args '{\"path\": ...}'")
    if args.volume == "kappa":
        shape = ShapeSpec(args.shape, params)
    elif args.volume == "none":
        shape = ShapeSpec(args.shape, params, normalize=False)
    else:
        shape = ShapeSpec(args.shape, params, normalize_volume_to=args.volume)
    config = RunConfig(
        grid=GridSpec(args.dim, args.resolution, args.extent),
        shape=shape,
        steps=args.steps,
        source=args.directions,
        seed=args.seed,
        renormalize=args.renormalize,
        snapshot_every=args.snapshot_every,
        snapshot_dir=args.snapshot_dir,
        trace_path=args.trace,
        stop_epsilon=args.stop_epsilon,
        record_timing=args.timing,
    )
    records, _ = run(config)
    first, last = records[0], records[-1]
    print(f"steps run: {last.step}")
    print(f"volume: {first.volume:.6g} -> {last.volume:.6g} (drift {last.volume_drift:+.3e})")
    print(f"nikodym_to_ball / volume: {first.nikodym_to_ball / first.volume:.4g} -> {last.nikodym_to_ball / first.volume:.4g}")
    print(f"moment_excess: {first.moment_excess:.4g} -> {last.moment_excess:.4g}")
    print(f"barycenter_norm: {first.barycenter_norm:.4g} -> {last.barycenter_norm:.4g}")
    print(f"perimeter_tv: {first.perimeter_tv:.4g} -> {last.perimeter_tv:.4g}")
    return 0


def _cmd_oracle(args) -> int:
    rep = oracle_check(n_unions=args.unions, n_pairs=args.pairs, resolution=args.resolution, seed=args.seed)
    print(f"max relative d_N (raster vs exact symmetral): {rep.max_rel_error:.4g}  (tol 0.05)")
    print(f"error shrink factor N/2 -> N: {rep.shrink_factor:.3f}  (min 1.7)")
    print(f"max exact Lipschitz excess: {rep.max_lipschitz_excess_exact:.3g}  (must be <= 0)")
    print(f"max raster Lipschitz excess / volume: {rep.max_lipschitz_excess_raster:.4g}  (slack 0.02)")
    print("PASS" if rep.passed else "FAIL")
    return 0 if rep.passed else 1


def _cmd_sampler(args) -> int:
    rep = sampler_check(dim=args.dim, samples=args.samples, seed=args.seed)
    print(f"dim {rep.dim}, {rep.samples} samples")
    print(f"double-cap probability: empirical {rep.empirical:.5f}, analytic {rep.analytic:.5f}, 3 sigma {3 * rep.sigma:.5f}")
    print(f"chi-square {rep.chi2:.2f}, p-value {rep.p_value:.4g}  (alpha 0.001)")
    print("PASS" if rep.passed else "FAIL")
    return 0 if rep.passed else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        if extra:
            owner = args._subparsers.get(args.command, parser)
            owner.error(f"unrecognized arguments: {' '.join(extra)}")
        if args.command is None:
            parser.print_help(sys.stderr)
            return 2
        handler = {"run": _cmd_run, "oracle-check": _cmd_oracle, "sampler-check": _cmd_sampler}[args.command]
        return handler(args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except (SteinerError, ValueError, OSError) as exc:
        print(f"steiner-sym: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO)
    sys.exit(main())
