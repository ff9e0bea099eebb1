"""Command-line entry point: ``affinega {register,battery,distort}``.

Exit codes: 0 on success, 1 on I/O or parse errors, 2 on invalid
configuration.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ..ga import ConfigError, GaConfig
from .battery import PAPER_POPULATION_SIZES, ExperimentSpec, register, run_battery
from .distortion import AFFINE, PERTURBED_AFFINE, DistortionSpec, generate_distortion
from .io import PointSetFormatError, fmt, load_pointset, save_pointset, save_transform

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2


def _int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="affinega", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("register", help="register one deformed point-set onto a static one")
    p.add_argument("--static", required=True, type=Path)
    p.add_argument("--deformed", required=True, type=Path)
    p.add_argument("--pop-size", type=int, default=120)
    p.add_argument("--generations", type=int, default=500)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--fixed-order", action="store_true", help="reuse one match order for the whole run")
    p.add_argument("--out-dir", required=True, type=Path)

    p = sub.add_parser("battery", help="repeated seeded runs over several population sizes")
    p.add_argument("--static", required=True, type=Path)
    p.add_argument("--deformed", required=True, type=Path)
    p.add_argument("--pop-sizes", type=_int_list, default=PAPER_POPULATION_SIZES)
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--generations", type=int, default=500)
    p.add_argument("--base-seed", type=int, default=1)
    p.add_argument("--fixed-order", action="store_true")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--out-dir", required=True, type=Path)

    p = sub.add_parser("distort", help="write a synthetic deformed copy of a point-set")
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--rotation", type=float, default=0.0, help="radians")
    p.add_argument("--tx", type=float, default=0.0)
    p.add_argument("--ty", type=float, default=0.0)
    p.add_argument("--noise-sigma", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--truth-out", type=Path)
    return parser


def _cmd_register(args) -> None:
    config = GaConfig(
        population_size=args.pop_size,
        generations=args.generations,
        seed=args.seed,
        fixed_order=args.fixed_order,
    ).validate()
    params, _, fitness = register(args.static, args.deformed, args.out_dir, config)
    print("theta " + " ".join(fmt(v) for v in params.theta))
    print(f"fitness {fmt(fitness)}")


def _cmd_battery(args) -> None:
    spec = ExperimentSpec(
        static_path=args.static,
        deformed_path=args.deformed,
        output_dir=args.out_dir,
        population_sizes=args.pop_sizes,
        generations=args.generations,
        runs_per_size=args.runs,
        base_seed=args.base_seed,
        base_config=GaConfig(fixed_order=args.fixed_order),
        n_jobs=args.jobs,
    ).validate()
    summary = run_battery(spec)
    print("pop_size  runs  mean_fitness  min_fitness  max_fitness")
    for row in summary.rows:
        print(
            f"{row['pop_size']:8d}  {row['runs']:4d}  {row['mean_final_fitness']:12.6g}"
            f"  {row['min_final_fitness']:11.6g}  {row['max_final_fitness']:11.6g}"
        )


def _cmd_distort(args) -> None:
    spec = DistortionSpec(
        kind=PERTURBED_AFFINE if args.noise_sigma > 0 else AFFINE,
        scale=args.scale,
        rotation=args.rotation,
        tx=args.tx,
        ty=args.ty,
        noise_sigma=args.noise_sigma,
        seed=args.seed,
    ).validate()
    points, truth = generate_distortion(load_pointset(args.input), spec)
    header = [
        f"kind={spec.kind} scale={fmt(spec.scale)} rotation={fmt(spec.rotation)} "
        f"tx={fmt(spec.tx)} ty={fmt(spec.ty)} noise_sigma={fmt(spec.noise_sigma)} seed={spec.seed}"
    ]
    save_pointset(points, args.out, header=header)
    if args.truth_out is not None:
        save_transform(truth, args.truth_out, header=header + ["maps static onto deformed"])


COMMANDS = {"register": _cmd_register, "battery": _cmd_battery, "distort": _cmd_distort}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"affinega: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, PointSetFormatError) as exc:
        print(f"affinega: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        # remaining value errors come from argument values (e.g. scale <= 0)
        print(f"affinega: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
