import logging

from commands._common import add_file_flags, load_dataset, print_values
from kernel_graph import build_graph
from solvers import solve_scores

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser(
        "solve", help="graph-based scores on the unlabeled points (hard, soft or lambda=inf)"
    )
    add_file_flags(parser)
    parser.add_argument(
        "--lambda",
        dest="lam",
        type=float,
        default=0.0,
        help="soft-criterion weight; 0 is the hard criterion, inf the label mean",
    )
    parser.set_defaults(handler=cmd_solve)
    return parser


def cmd_solve(args):
    data, kernel = load_dataset(args)
    logger.info(
        "solving n=%d m=%d lambda=%g bandwidth=%g",
        data.n_labeled, data.n_unlabeled, args.lam, kernel.bandwidth,
    )
    scores = solve_scores(build_graph(data, kernel), data.labels, args.lam)
    print_values(scores.values)
    return 0
