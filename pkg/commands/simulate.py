import logging

from commands._common import parse_list
from exception import InvalidArgumentError
from experiment import aggregate, figure_config, sweep
from records import format_float, read_config, write_records
from schemas import ExperimentConfig
from utility.settings import Settings

logger = logging.getLogger(__name__)

INLINE_FLAGS = ("model", "n_grid", "m_grid", "lambda_grid", "reps", "seed")


def register(subparsers):
    parser = subparsers.add_parser(
        "simulate", help="Monte-Carlo RMSE sweep over (n, m, lambda)"
    )
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--config", help="key=value experiment config file")
    source.add_argument("--figure", type=int, choices=[1, 2, 3, 4], help="preset design: 1, 3 vary n; 2, 4 vary m; 3, 4 use Model 2")
    parser.add_argument("--model", type=int, choices=[1, 2])
    parser.add_argument("--n-grid", dest="n_grid", type=parse_list(int))
    parser.add_argument("--m-grid", dest="m_grid", type=parse_list(int))
    parser.add_argument("--lambda-grid", dest="lambda_grid", type=parse_list(float))
    parser.add_argument("--reps", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", help="records file (overrides the config's output_path)")
    parser.add_argument("--workers", type=int, default=None)
    parser.set_defaults(handler=cmd_simulate)
    return parser


def build_config(args) -> ExperimentConfig:
    if args.config:
        config = read_config(args.config)
    elif args.figure:
        config = figure_config(
            args.figure,
            replications=args.reps if args.reps is not None else 1000,
            master_seed=args.seed if args.seed is not None else 0,
        )
    else:
        missing = [flag for flag in INLINE_FLAGS if getattr(args, flag) is None]
        if missing:
            raise InvalidArgumentError(
                "missing flags: " + ", ".join("--" + f.replace("_", "-") for f in missing)
            )
        config = ExperimentConfig(
            model=args.model,
            n_grid=args.n_grid,
            m_grid=args.m_grid,
            lambda_grid=args.lambda_grid,
            replications=args.reps,
            master_seed=args.seed,
        )
    updates = {}
    if args.out:
        updates["output_path"] = args.out
    workers = args.workers if args.workers is not None else (None if args.config else Settings.workers)
    if workers is not None:
        updates["workers"] = workers
    if updates:
        config = ExperimentConfig(**{**config.dict(), **updates})
    if config.output_path is None:
        raise InvalidArgumentError("an output path is required (--out or output_path)")
    return config


def format_summary(summaries) -> str:
    lines = [f"{'model':>5} {'n':>6} {'m':>6} {'lambda':>8} {'reps':>6} {'mean_rmse':>12} {'se':>10}"]
    for s in summaries:
        lines.append(
            f"{int(s.model):>5} {s.n:>6} {s.m:>6} {format_float(s.lam):>8} {s.count:>6} "
            f"{s.mean_rmse:>12.6f} {s.se_rmse:>10.6f}"
        )
    return "\n".join(lines)


def cmd_simulate(args):
    config = build_config(args)
    result = sweep(config)
    write_records(result.records, config.output_path)
    print(format_summary(aggregate(result.records)))
    if result.failures:
        print(f"{len(result.failures)} failed cell(s):")
        for failure in result.failures:
            print(
                f"  n={failure.n} m={failure.m} rep={failure.rep}: "
                f"{failure.error_type}: {failure.message}"
            )
        return 1
    return 0
