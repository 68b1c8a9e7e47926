import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from src.cli_io.commands import run_command
from src.cli_io.config import get_experiment_config, resolve_config_path
from src.cli_io.emitter import emit_table
from src.cli_io.models import Command, DistQuantity, OutputFormat, Verb
from src.diagnostics.models import CheckName
from src.utils.errors import DomainError, InvalidInputError, ParseError
from src.utils.logger_utils import enable_logging, enable_logging_to_file

EXIT_OK = 0
EXIT_IO = 1
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_DEGENERATE = 4


def _common_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--model", dest="model_spec", required=True, help="e.g. pareto:alpha=1.5,xm=1")
    parser.add_argument("--format", choices=[f.value for f in OutputFormat])
    parser.add_argument("--out", help="output path (default: standard output)")
    parser.add_argument("--config", help="experiment config JSON")
    parser.add_argument("--quiet", action="store_true", help="disable log output")
    parser.add_argument("--log-file", help="also append log lines to this file")
    return parser


def _add_mc_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--samples", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--chunk-size", type=int)
    parser.add_argument("--workers", type=int)


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="ldp-extrema",
        description="Large deviations of the rescaled maximum of heavy-tailed samples.",
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    rate = verbs.add_parser(Verb.RATE.value, parents=[common], help="(1/log n) log P(Z_n in A) along an n grid")
    rate.add_argument("--set", dest="set_spec", required=True, help="e.g. (2,3]U[5,inf)")
    rate.add_argument("--n-grid", required=True, help="e.g. 10^2..10^8 or 100,1e4")
    rate.add_argument("--mc", action="store_true", help="add Monte Carlo estimates to the summary")
    _add_mc_flags(rate)

    ruin = verbs.add_parser(Verb.RUIN.value, parents=[common], help="ruin probabilities and their decay")
    ruin.add_argument("--beta", type=float, required=True)
    ruin.add_argument("--n-grid", required=True)
    ruin.add_argument("--mc", action="store_true")
    _add_mc_flags(ruin)

    diagnose = verbs.add_parser(Verb.DIAGNOSE.value, parents=[common], help="finite-n diagnostics")
    diagnose.add_argument("--check", required=True, choices=[c.value for c in CheckName])
    diagnose.add_argument("--eps", type=float)
    diagnose.add_argument("--n", type=int)
    diagnose.add_argument("--n-grid")
    diagnose.add_argument("--t-grid", help="low:high:points")
    diagnose.add_argument("--x-grid", help="low:high:points")
    diagnose.add_argument("--y-grid", help="low:high:points")
    diagnose.add_argument("--m", type=float, help="upper end of the density grid [1, M]")
    diagnose.add_argument("--points", type=int)

    sample = verbs.add_parser(Verb.SAMPLE.value, parents=[common], help="draws of X_(n) and Z_n")
    sample.add_argument("--n", type=int, required=True)
    _add_mc_flags(sample)

    dist = verbs.add_parser(Verb.DIST.value, parents=[common], help="evaluate the claim distribution")
    dist.add_argument("--eval", required=True, choices=[q.value for q in DistQuantity])
    dist.add_argument("--at", required=True)
    return parser


_NON_COMMAND_ARGS = ("config", "quiet", "log_file")


def parse_command(argv: Optional[Sequence[str]] = None) -> tuple[Command, argparse.Namespace]:
    args = build_parser().parse_args(argv)
    fields = {key: value for key, value in vars(args).items() if key not in _NON_COMMAND_ARGS and value is not None}
    return Command(**fields), args


def _configure_logging(args: argparse.Namespace, enabled: bool, to_file: bool, path: Optional[str]) -> None:
    enable_logging(enabled and not args.quiet)
    if args.log_file is not None:
        enable_logging_to_file(True, args.log_file)
    elif to_file:
        enable_logging_to_file(True, path)


def _fail(code: int, message: str) -> int:
    print(f"ldp-extrema: error: {message}", file=sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        command, args = parse_command(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_PARSE
    except ValidationError as e:
        return _fail(EXIT_PARSE, str(e))

    try:
        config = get_experiment_config(resolve_config_path(args.config))
        _configure_logging(args, config.log_enabled, config.log_to_file, config.log_file_path)
        table = run_command(command, config)
        text = emit_table(table.rows, command.format or config.format, table.kind, table.summary)
    except ParseError as e:
        return _fail(EXIT_PARSE, str(e))
    except ArithmeticError as e:
        # DegenerateDataError and float overflow
        return _fail(EXIT_DEGENERATE, str(e))
    except (DomainError, InvalidInputError) as e:
        return _fail(EXIT_DOMAIN, str(e))
    except OSError as e:
        return _fail(EXIT_IO, f"cannot read config: {e}")
    except ValueError as e:
        # Config validation
        return _fail(EXIT_DOMAIN, str(e))

    if command.out is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        Path(command.out).write_text(text)
    except OSError as e:
        return _fail(EXIT_IO, f"cannot write {command.out}: {e}")
    return EXIT_OK
