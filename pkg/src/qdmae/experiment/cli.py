"""Command line entry point: ``qdmae run|sweep-alpha|bench-complexity|heatmap``."""

import argparse
import logging
import sys
from pathlib import Path

from ..archive import read_archive_csv, write_heatmap_csv
from ..kernels import BACKEND
from .bench import VARIANTS, bench_complexity
from .config import KEYS, ConfigError, load_config
from .runner import run_experiment, sweep_alpha


def _add_overrides(parser):
    group = parser.add_argument_group("config overrides (win over the file)")
    seen = set()
    for key, (name, _) in KEYS.items():
        if name in seen:
            continue
        seen.add(name)
        group.add_argument(f"--{key.replace('_', '-')}", dest=f"cfg_{key}",
                           metavar="VALUE")


def _overrides(args):
    return {key[4:]: value for key, value in vars(args).items()
            if key.startswith("cfg_") and value is not None}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qdmae",
        description="CMA-MAE variants on quality-diversity benchmarks.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run seeded trials from a config file")
    run.add_argument("config", type=Path)
    _add_overrides(run)

    sweep = sub.add_parser("sweep-alpha", help="repeat a run for several alphas")
    sweep.add_argument("config", type=Path)
    sweep.add_argument("--alphas", nargs="*", type=float, required=True)
    _add_overrides(sweep)

    bench = sub.add_parser("bench-complexity",
                           help="time ask+tell per solution vs dimension")
    bench.add_argument("--dims", nargs="+", type=int, default=[512, 1024])
    bench.add_argument("--variants", nargs="+", default=list(VARIANTS))
    bench.add_argument("--samples", type=int, default=50,
                       help="generations timed per measurement")
    bench.add_argument("--batch-size", type=int, default=40)
    bench.add_argument("--out", type=Path, default=Path("complexity.csv"))

    heat = sub.add_parser("heatmap", help="dense 2-D grid from an archive CSV")
    heat.add_argument("archive", type=Path)
    heat.add_argument("--dims", nargs=2, type=int, default=[100, 100])
    heat.add_argument("--out", type=Path, default=None)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            config = load_config(args.config, _overrides(args))
            run_experiment(config)
        elif args.command == "sweep-alpha":
            if not args.alphas:
                raise ConfigError("alphas", "at least one value is required")
            config = load_config(args.config, _overrides(args))
            sweep_alpha(config, args.alphas)
        elif args.command == "bench-complexity":
            print(f"kernel backend: {BACKEND}")
            rows = bench_complexity(args.dims, args.variants, args.samples,
                                    args.batch_size, args.out)
            for variant, n, us in rows:
                print(f"{variant:>11} n={n:<6d} {us:10.2f} us/solution")
        elif args.command == "heatmap":
            cells, objectives = read_archive_csv(args.archive)
            out = args.out or args.archive.with_name("heatmap.csv")
            write_heatmap_csv(tuple(args.dims), cells, objectives, out)
            print(out)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"qdmae: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
