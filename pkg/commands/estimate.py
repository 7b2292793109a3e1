from commands._common import add_file_flags, load_dataset, print_values
from exception import EmptyNeighborhoodError
from nadaraya_watson import nw_batch


def register(subparsers):
    parser = subparsers.add_parser(
        "estimate", help="Nadaraya-Watson estimates on the unlabeled points"
    )
    add_file_flags(parser)
    parser.set_defaults(handler=cmd_estimate)
    return parser


def cmd_estimate(args):
    data, kernel = load_dataset(args)
    try:
        estimates = nw_batch(data, kernel)
    except EmptyNeighborhoodError as e:
        raise EmptyNeighborhoodError(
            f"empty kernel neighborhood at unlabeled row {e.index + 1} of {args.unlabeled}",
            index=e.index,
        ) from e
    print_values(estimates.values)
    return 0
