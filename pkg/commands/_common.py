import argparse

from datagen import bandwidth
from exception import InputFileError
from schemas import Dataset, KernelSpec
from utility.input_file import load_points


def parse_list(cast):
    def parse(text):
        try:
            values = [cast(item) for item in text.split(",") if item.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid list: {text!r}")
        if not values:
            raise argparse.ArgumentTypeError("list must not be empty")
        return values

    return parse


def add_file_flags(parser):
    parser.add_argument("--labeled", required=True, help="CSV of labeled points, label in the last column")
    parser.add_argument("--unlabeled", required=True, help="CSV of unlabeled points")
    parser.add_argument(
        "--bandwidth",
        type=float,
        default=None,
        help="kernel bandwidth; defaults to (ln n / n)^(1/5)",
    )


def load_dataset(args):
    labeled, labels = load_points(args.labeled, labeled=True)
    unlabeled, _ = load_points(args.unlabeled, labeled=False)
    if labeled.shape[1] != unlabeled.shape[1]:
        raise InputFileError(
            f"{unlabeled.shape[1]} coordinates per point, but {args.labeled} has {labeled.shape[1]}",
            args.unlabeled,
        )
    data = Dataset.from_parts(labeled, labels, unlabeled)
    h = args.bandwidth if args.bandwidth is not None else bandwidth(data.n_labeled)
    return data, KernelSpec(bandwidth=h)


def print_values(values):
    for v in values:
        print(repr(float(v)))
