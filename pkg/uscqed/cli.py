"""Command line interface.

Exit codes are ``0`` on success, ``1`` when a compare fails or a job
of a run fails, and ``2`` for invalid configuration.

"""

from __future__ import absolute_import, print_function, unicode_literals

import typing

import argparse
import logging
import os
import sys

from fs import open_fs
from fs.tree import render

from . import errors
from ._version import __version__
from .constants import LOG_LEVEL_ENV
from .enums import Output
from .recipes import registry
from .sweep import compare_goldens, default_output_root, run

if typing.TYPE_CHECKING:
    from typing import Dict, List, Optional, Text


EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2

log = logging.getLogger("uscqed.cli")


def _tolerance(text):
    # type: (Text) -> tuple
    kind, sep, value = text.partition("=")
    try:
        if not sep:
            raise ValueError(text)
        return Output(kind.strip()), float(value)
    except ValueError:
        choices = ", ".join(Output.choices())
        raise argparse.ArgumentTypeError(
            "expected KIND=VALUE with KIND one of {}".format(choices)
        )


def _workers(text):
    # type: (Text) -> int
    workers = int(text)
    if workers < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return workers


def build_parser():
    # type: () -> argparse.ArgumentParser
    parser = argparse.ArgumentParser(
        prog="uscqed",
        description="Gauge-invariant spectra of ultrastrongly coupled cavity QED.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="log more, repeat for debug output",
    )
    commands = parser.add_subparsers(dest="command")
    commands.required = True

    run_parser = commands.add_parser("run", help="execute a run file or recipe")
    run_parser.add_argument("config", help="run-file path or recipe://<name>")
    run_parser.add_argument(
        "-o", "--output", default=None, help="output root (default: user data dir)"
    )
    run_parser.add_argument(
        "-w", "--workers", type=_workers, default=None, help="worker threads"
    )
    run_parser.add_argument(
        "--normalize",
        action="store_true",
        default=None,
        help="scale every spectrum to unit maximum",
    )
    run_parser.add_argument(
        "--tree", action="store_true", help="print the run directory when done"
    )

    compare_parser = commands.add_parser("compare", help="compare a run with goldens")
    compare_parser.add_argument("run_dir")
    compare_parser.add_argument("golden_dir")
    compare_parser.add_argument(
        "-t",
        "--tolerance",
        type=_tolerance,
        action="append",
        default=[],
        metavar="KIND=VALUE",
        help="relative tolerance for one output kind",
    )

    commands.add_parser("list-recipes", help="list the bundled run files")

    show_parser = commands.add_parser("show-recipe", help="print a bundled run file")
    show_parser.add_argument("name")
    return parser


def _log_level(verbose):
    # type: (int) -> int
    if verbose:
        return logging.DEBUG if verbose > 1 else logging.INFO
    name = os.environ.get(LOG_LEVEL_ENV, "WARNING").upper()
    level = logging.getLevelName(name)
    return level if isinstance(level, int) else logging.WARNING


def _run(args):
    # type: (argparse.Namespace) -> int
    manifest = run(
        args.config,
        output_root=args.output,
        workers=args.workers,
        normalize=args.normalize,
    )
    print(manifest.path)
    for job in manifest.failed:
        print("FAILED {}: {}".format(job["job_id"], job["error"]), file=sys.stderr)
    if args.tree:
        with open_fs(args.output or default_output_root()) as root_fs:
            render(root_fs, path=manifest.path, file=sys.stdout, max_levels=3)
    return EXIT_OK if manifest.ok else EXIT_FAILED


def _compare(args):
    # type: (argparse.Namespace) -> int
    tolerances = dict(args.tolerance)  # type: Dict[Output, float]
    report = compare_goldens(args.run_dir, args.golden_dir, tolerances)
    for line in report.summary():
        print(line)
    return EXIT_OK if report.passed else EXIT_FAILED


def _list_recipes(args):
    # type: (argparse.Namespace) -> int
    for name in registry.names:
        print("{:<28} {}".format(name, registry.get(name).description))
    return EXIT_OK


def _show_recipe(args):
    # type: (argparse.Namespace) -> int
    print(registry.get_recipe(args.name), end="")
    return EXIT_OK


_COMMANDS = {
    "run": _run,
    "compare": _compare,
    "list-recipes": _list_recipes,
    "show-recipe": _show_recipe,
}


def main(argv=None):
    # type: (Optional[List[Text]]) -> int
    """Run the command line interface and get its exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=_log_level(args.verbose),
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
    )
    try:
        return _COMMANDS[args.command](args)
    except errors.ConfigError as error:
        for path, message in error.diagnostics:
            print("{}: {}".format(path, message), file=sys.stderr)
        return EXIT_CONFIG
    except errors.RecipeNotFound as error:
        print(error, file=sys.stderr)
        return EXIT_CONFIG
    except errors.USCError as error:
        log.error("%s", error)
        return EXIT_FAILED
