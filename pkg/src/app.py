import argparse
import logging
import os
import sys
from typing import List, Optional

from src.cli.commands import (cmd_construct, cmd_project, cmd_quotients, cmd_validate, cmd_verify, emit,
                              execute)
from src.cli.registry import LEMMAS
from src.models.errors import EXIT_USAGE, ConfigError
from src.utils.parser import ConfigParser

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

# Artifacts written when --format is absent
DEFAULT_FORMATS = {
    "validate": "json",
    "construct": "json,svg",
    "project": "json",
    "verify": "json",
    "quotients": "csv,svg",
}


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors raised instead of exiting with status 2"""

    def error(self, message):
        raise ConfigError(message)


def create_parser() -> ArgumentParser:
    """Create the command-line parser with one subcommand per operation"""
    common = ArgumentParser(add_help=False)
    common.add_argument("--case", choices=["A", "B", "C", "a", "b", "c"])
    common.add_argument("--lambda", dest="lambda", type=float)
    common.add_argument("--q", type=float)
    common.add_argument("--depth", type=int)
    common.add_argument("--range", dest="range")
    common.add_argument("--out", dest="output")
    common.add_argument("--format", dest="formats")
    common.add_argument("--precision", dest="precision_mode", choices=["standard", "extended"])
    common.add_argument("--variant", choices=["smooth", "polygon"])
    common.add_argument("--smooth-apex", dest="smooth_apex", action="store_const", const=True)
    common.add_argument("--horizon", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--config", help="JSON config file; flags win on conflict")
    common.add_argument("--verbose", action="store_true")

    parser = ArgumentParser(prog="smoothproj", description="Smooth projection engine")
    commands = parser.add_subparsers(dest="command")
    commands.required = True
    commands.add_parser("validate", parents=[common], help="check the convexity condition on alpha_n")
    commands.add_parser("construct", parents=[common], help="build and export the boundary")
    project = commands.add_parser("project", parents=[common], help="project one point")
    project.add_argument("--point", required=True, help="X,Y")
    verify = commands.add_parser("verify", parents=[common], help="run one registered verifier")
    verify.add_argument("--lemma", required=True, help="one of: " + ", ".join(sorted(LEMMAS)))
    quotients = commands.add_parser("quotients", parents=[common], help="sample difference quotients")
    quotients.add_argument("--grid", help="dyadic:k0:k1")
    return parser


def configure_logging(verbose: bool) -> None:
    level = "DEBUG" if verbose else os.environ.get("SMOOTHPROJ_LOG_LEVEL", "INFO").upper()
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def _dispatch(args: argparse.Namespace) -> int:
    flags = {key: value for key, value in vars(args).items() if key not in ("command", "verbose", "point",
                                                                            "lemma", "grid")}
    config = ConfigParser.resolve(flags, default_formats=DEFAULT_FORMATS[args.command])
    if args.command == "validate":
        return cmd_validate(config)
    if args.command == "construct":
        return cmd_construct(config)
    if args.command == "project":
        return cmd_project(config, ConfigParser.parse_point(args.point))
    if args.command == "verify":
        return cmd_verify(config, args.lemma)
    exponents = ConfigParser.parse_grid(args.grid) if args.grid else None
    return cmd_quotients(config, exponents)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = create_parser().parse_args(argv)
    except ConfigError as e:
        emit({"status": "ERROR", "message": str(e)})
        return EXIT_USAGE
    configure_logging(args.verbose)
    return execute(_dispatch, args)


if __name__ == "__main__":
    sys.exit(main())
