"""Construction of the CLI definition and parsing framework for the ricciode application"""

import argparse

from ubiquerg import VersionInHelpParser

from ._version import __version__
from .const import FORM_NAMES, FORMATS, PKG_NAME

CLASSIFY_CMD = "classify"
VERIFY_CMD = "verify"
RICCI_CMD = "ricci"
INTEGRATE_CMD = "integrate"
ASYMPTOTE_CMD = "asymptote"
CATALOG_CMD = "catalog"
SUBPARSER_MESSAGES = {
    CLASSIFY_CMD: "Find the Ricci-flat and Einstein members of the family.",
    VERIFY_CMD: "Check a closed-form metric against its ODE and Ricci curvature.",
    RICCI_CMD: "Ricci curvature of a single jet.",
    INTEGRATE_CMD: "Integrate the ODE system and export the trajectory.",
    ASYMPTOTE_CMD: "Fit asymptotic models near the singular time or at infinity.",
    CATALOG_CMD: "Tabulate a closed-form metric over its domain.",
}

JET_FLAGS = {"a1": "A1", "a1p": "A1'", "a1pp": "A1''", "a2": "A2", "a2p": "A2'", "a2pp": "A2''"}

__all__ = ["build_argparser", "SUBPARSER_MESSAGES"] + list(SUBPARSER_MESSAGES.keys())


def build_argparser(desc):
    """
    Builds argument parser.

    Numeric options default to None so that a config file can supply them.

    :param str desc: additional description to print in help
    :return argparse.ArgumentParser
    """
    banner = "%(prog)s - Ricci curvature of cohomogeneity-one metrics"
    parser = VersionInHelpParser(version=__version__, description=banner, epilog=desc)

    subparsers = parser.add_subparsers(dest="command")

    def add_subparser(
        cmd: str, msg: str, subparsers: argparse._SubParsersAction
    ) -> argparse.ArgumentParser:
        return subparsers.add_parser(
            cmd,
            description=msg,
            help=msg,
            formatter_class=lambda prog: argparse.HelpFormatter(
                prog, max_help_position=40, width=90
            ),
        )

    sps = {}
    for cmd, msg in SUBPARSER_MESSAGES.items():
        p = add_subparser(cmd, msg, subparsers)
        p.add_argument(
            "--format",
            choices=FORMATS,
            default=None,
            help="Output format. Default: json",
        )
        p.add_argument(
            "-o",
            "--output",
            type=str,
            metavar="PATH",
            help="Write the result to this file instead of standard output.",
        )
        p.add_argument(
            "-c",
            "--config",
            type=str,
            metavar="C",
            help=f"YAML or 'key = value' file with {PKG_NAME} options; flags take precedence.",
        )
        sps[cmd] = p

    sps[CLASSIFY_CMD].add_argument(
        "--bound",
        type=int,
        metavar="N",
        help="Sweep the integer grid [-N, N]^6 (N >= 3). Default: 3",
    )
    sps[CLASSIFY_CMD].add_argument(
        "--workers",
        type=int,
        metavar="W",
        help="Threads sharing the grid sweep. Default: 1",
    )

    for cmd in [VERIFY_CMD, CATALOG_CMD]:
        sps[cmd].add_argument(
            "--form",
            choices=FORM_NAMES,
            help="Closed-form metric.",
        )
        sps[cmd].add_argument(
            "--param",
            type=float,
            metavar="V",
            help="Scale parameter m, a, alpha or c. Default: 1",
        )
        sps[cmd].add_argument(
            "--points",
            type=int,
            metavar="K",
            help="Number of sample coordinates. Default: 100",
        )

    for name, label in JET_FLAGS.items():
        sps[RICCI_CMD].add_argument(
            f"--{name}", type=float, metavar="V", help=f"{label} of the jet."
        )

    sps[ASYMPTOTE_CMD].add_argument(
        "--mode",
        choices=["singular", "infinity"],
        help="Regime to fit: approach to the singular time or the tail at infinity.",
    )
    for cmd in [INTEGRATE_CMD, ASYMPTOTE_CMD]:
        sps[cmd].add_argument(
            "-p",
            "--params",
            type=str,
            metavar="P",
            help="Coefficients k1,k2,k3,l1,l2,l3 as integers, p/q or exact decimals; "
            "use --params=-1,... when the first one is negative.",
        )
        sps[cmd].add_argument(
            "--init",
            type=str,
            metavar="A1,A2",
            help="Initial metric coefficients.",
        )
        sps[cmd].add_argument(
            "--t0",
            type=float,
            metavar="T",
            help="Initial time. Default: 0",
        )
        sps[cmd].add_argument(
            "--t-end",
            type=float,
            metavar="T",
            help="Final time; smaller than --t0 integrates backward.",
        )
        sps[cmd].add_argument(
            "--tol",
            type=float,
            metavar="E",
            help="Relative tolerance in [1e-14, 1e-3]. Default: 1e-10",
        )
    sps[ASYMPTOTE_CMD].add_argument(
        "--window-decades",
        type=float,
        metavar="W",
        help="Width of the singular fit window in decades. Default: 4",
    )
    sps[ASYMPTOTE_CMD].add_argument(
        "--window-upper",
        type=float,
        metavar="U",
        help="Upper end of the singular fit window in |t - t0|. Default: 1e-2",
    )
    sps[ASYMPTOTE_CMD].add_argument(
        "--leading-only",
        action="store_true",
        default=None,
        help="Fit the leading powers alone, without removing the subleading model terms.",
    )
    return parser
