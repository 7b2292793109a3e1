import argparse
import logging
import sys

from commands import estimate, simulate, solve
from exception import CustomExceptionsClass
from utility.settings import Settings

description = """
Transductive graph-based semi-supervised learning.

  solve     hard-criterion (lambda=0), soft-criterion (lambda>0) or lambda=inf scores
            on the unlabeled points of --unlabeled, using the labeled points of --labeled.
  estimate  Nadaraya-Watson estimates on the same points.
  simulate  Monte-Carlo RMSE sweep on truncated-normal data (Models 1 and 2); writes
            the records file and prints the per-cell mean RMSE.

Exit codes: 0 success, 1 numerical failure, 2 usage or input error.
"""


def build_parser():
    parser = argparse.ArgumentParser(
        prog="graphssl",
        description=description,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--log-level", default=None, help="logging level (default SSL_LOG_LEVEL)")
    subparsers = parser.add_subparsers(dest="command", required=True)
    solve.register(subparsers)
    estimate.register(subparsers)
    simulate.register(subparsers)
    return parser


def main(argv=None):
    """
    Parses the command line, runs the selected command and maps library errors to exit
    codes through CustomExceptionsClass.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=(args.log_level or Settings.log_level).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.handler(args)
    except Exception as e:
        CustomExceptionsClass(args.command, e).handle()


if __name__ == "__main__":
    sys.exit(main())
