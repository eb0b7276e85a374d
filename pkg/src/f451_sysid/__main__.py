"""Command-line interface for f451 System Identification module.

Subcommands:

- ``simulate``: draw (or load) a system and write it plus simulated trajectories to files,
- ``identify``: run thresholded Ho-Kalman on trajectory files and print the result as JSON,
- ``experiment``: run a seeded Monte-Carlo sweep from a config file,
- ``check-bounds``: run the low-rank denoising property suites.

Exit codes: 0 on success, 1 on validation errors (including bad CLI usage and
failed property suites), and 2 on numerical failures.
"""
import argparse
import logging
import os
import re
import sys
from pathlib import Path
from typing import Any
from typing import List
from typing import NoReturn

import konsole
from rich import print as rprint
from rich import print_json
from rich import traceback
from rich.rule import Rule
from rich.table import Table

import f451_sysid.constants as const
from . import __app_name__
from . import __version__
from f451_sysid.checks import run_bound_checks
from f451_sysid.exceptions import f451SysIdExceptionError
from f451_sysid.exceptions import NumericalFailureError
from f451_sysid.harness import load_config
from f451_sysid.harness import run_experiment
from f451_sysid.harness import summary_path
from f451_sysid.lti import load_system
from f451_sysid.lti import load_trajectory
from f451_sysid.lti import NoiseSpec
from f451_sysid.lti import random_system
from f451_sysid.lti import save_system
from f451_sysid.lti import save_trajectory
from f451_sysid.lti import simulate_trajectories
from f451_sysid.lti import simulate_trajectory
from f451_sysid.metrics import summarize
from f451_sysid.regimes import make_regime

# =========================================================
#          G L O B A L    V A R S   &   I N I T S
# =========================================================
traceback.install()  # Ensure 'pretty' tracebacks

_APP_NAME_: str = "f451 System Identification Module"
_APP_NORMALIZED_: str = re.sub(r"[^A-Z0-9]", "_", str(__app_name__).upper())
_APP_DIR_: Path = Path(__file__).parent

# OS ENVIRON variable names
_APP_ENV_CONFIG_: str = f"{_APP_NORMALIZED_}_CONFIG"

# Default CONFIG and LOG filenames
# NOTE: the default config filename is used to search for files in default
#       locations if no file is indicated in OS ENVIRON vars or supplied
#       in CLI args.
_APP_LOG_: str = "f451-sysid.log"
_APP_CONFIG_: str = "f451-sysid.config.json"

_EXIT_OK_: int = 0
_EXIT_INVALID_: int = 1
_EXIT_NUMERICAL_: int = 2

_CMD_SIMULATE_: str = "simulate"
_CMD_IDENTIFY_: str = "identify"
_CMD_EXPERIMENT_: str = "experiment"
_CMD_CHECK_: str = "check-bounds"


# =========================================================
#              H E L P E R   F U N C T I O N S
# =========================================================
class _CliParser(argparse.ArgumentParser):
    """ArgParse parser that exits with validation error code on bad usage."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        rprint(f"[red]ERROR:[/red] {message}", file=sys.stderr)
        sys.exit(_EXIT_INVALID_)


def init_cli_parser() -> argparse.ArgumentParser:
    """Initialize CLI (ArgParse) parser.

    Initialize the ArgParse parser with the CLI 'arguments' and
    return a new parser instance.

    Returns:
        ArgParse parser instance
    """
    parser = _CliParser(
        prog=__app_name__,
        description=f"Identify LTI systems with 'f451 System Identification' [v{__version__}] module",
        epilog="NOTE: Use '<command> --help' for options of each command",
    )

    parser.add_argument(
        "-V",
        "--version",
        action="store_true",
        help="Display module version number and exit.",
    )
    parser.add_argument("-d", "--debug", action="store_true", help="Run in debug mode")
    parser.add_argument(
        "--log",
        action="store",
        type=str,
        help="Path to log file",
    )

    cmds = parser.add_subparsers(dest="cmd", parser_class=_CliParser)

    # - simulate -
    sim = cmds.add_parser(_CMD_SIMULATE_, help="Simulate system and trajectories")
    sim.add_argument("--system", type=str, help="Load system from JSON file instead of drawing one")
    sim.add_argument("--n", type=int, default=const.DEFAULT_N, help="System order")
    sim.add_argument("--d-u", type=int, default=const.DEFAULT_D_U, help="Input dimension")
    sim.add_argument("--d-y", type=int, default=const.DEFAULT_D_Y, help="Output dimension")
    sim.add_argument("--length", type=int, default=1000, help="Trajectory length")
    sim.add_argument("--tau", type=int, default=const.DEFAULT_TAU, help="Window length (with '--trajectories')")
    sim.add_argument("--trajectories", type=int, default=0, help="Write K short trajectories of length 2*tau")
    sim.add_argument("--sigma-u", type=float, default=const.DEFAULT_SIGMA_U, help="Input std. dev.")
    sim.add_argument("--sigma-z", type=float, default=const.DEFAULT_SIGMA_Z, help="Noise std. dev.")
    sim.add_argument("--seed", type=int, default=const.DEFAULT_SEED, help="Random seed")
    sim.add_argument("--system-out", type=str, default="system.json", help="System output file")
    sim.add_argument("--trajectory-out", type=str, default="trajectory.csv", help="Trajectory output file")

    # - identify -
    ident = cmds.add_parser(_CMD_IDENTIFY_, help="Identify system from trajectory files")
    ident.add_argument("trajectories", nargs="+", help="Trajectory CSV file(s)")
    ident.add_argument("--mode", choices=const.VALID_MODES, default=const.DEFAULT_MODE)
    ident.add_argument("--tau", type=int, default=const.DEFAULT_TAU, help="Window length")
    ident.add_argument("--delta", type=float, default=const.DEFAULT_DELTA, help="Failure probability")
    ident.add_argument("--sigma-u", type=float, default=const.DEFAULT_SIGMA_U, help="Input std. dev.")
    ident.add_argument("--sigma-z", type=float, default=const.DEFAULT_SIGMA_Z, help="Noise std. dev.")
    ident.add_argument("--beta", type=float, help="H-infinity norm bound (single mode)")
    ident.add_argument("--system", type=str, help="System JSON file (single mode 'beta' oracle)")
    ident.add_argument("--xi", type=float, help="Explicit threshold (overrides formula)")

    # - experiment -
    exp = cmds.add_parser(_CMD_EXPERIMENT_, help="Run Monte-Carlo experiment")
    exp.add_argument("--config", type=str, help="Path to experiment config file")
    exp.add_argument(
        "--set", type=str, default="", help="Config overrides (e.g. 'trials_per_T:5,T_grid:500|1000')"
    )

    # - check-bounds -
    chk = cmds.add_parser(_CMD_CHECK_, help="Run low-rank bound property suites")
    chk.add_argument("--instances", type=int, default=200, help="Number of random instances")
    chk.add_argument("--seed", type=int, default=1, help="Random seed")

    return parser


def get_valid_location(inFName: str) -> str:
    """Get valid location for a given filename.

    We use this to look for a given file (mainly config
    files) in a few default locations.

    Args:
        inFName:
            filename (string) to look for

    Returns:
        filename as string
    """
    cleanFName = inFName.strip("/")
    defaultLocations = [
        f"{Path.cwd()}/{cleanFName}",
        f"{Path(__file__).parent.absolute()}/{cleanFName}",
        f"{Path.home()}/{cleanFName}",
        f"/etc/{__app_name__}/{cleanFName}",
    ]

    outFName = ""
    for item in defaultLocations:
        if Path(item).exists():
            outFName = str(item)
            break

    return outFName


def _numbered(fName: str, idx: int) -> str:
    path = Path(fName)
    return str(path.with_name(f"{path.stem}_{idx:04d}{path.suffix}"))


# =========================================================
#              C O M M A N D S
# =========================================================
def cmd_simulate(args: Any) -> int:
    """Write system JSON and trajectory CSV file(s)."""
    system = (
        load_system(args.system)
        if args.system
        else random_system(args.n, args.d_u, args.d_y, args.seed)
    )
    noise = NoiseSpec(sigma_u=args.sigma_u, sigma_z=args.sigma_z)
    save_system(system, args.system_out)

    if args.trajectories > 0:
        trajs = simulate_trajectories(
            system, noise, args.trajectories, 2 * args.tau, args.seed
        )
        for i, traj in enumerate(trajs):
            save_trajectory(traj, _numbered(args.trajectory_out, i + 1))
        rprint(f"Wrote {len(trajs)} trajectories of length {2 * args.tau}")
    else:
        save_trajectory(
            simulate_trajectory(system, noise, args.length, args.seed),
            args.trajectory_out,
        )
        rprint(f"Wrote trajectory of length {args.length} to '{args.trajectory_out}'")

    rprint(f"Wrote system (n={system.n}) to '{args.system_out}'")
    return _EXIT_OK_


def cmd_identify(args: Any) -> int:
    """Identify system from trajectory files and print result as JSON."""
    trajs = [load_trajectory(fName) for fName in args.trajectories]
    if args.mode == const.MODE_SINGLE and len(trajs) != 1:
        rprint("ERROR: 'single' mode needs exactly one trajectory file", file=sys.stderr)
        return _EXIT_INVALID_

    regime = make_regime(
        args.mode,
        args.tau,
        trajs[0].d_u,
        trajs[0].d_y,
        NoiseSpec(sigma_u=args.sigma_u, sigma_z=args.sigma_z),
        args.delta,
        beta=args.beta,
        system=load_system(args.system) if args.system else None,
    )
    data = trajs[0] if args.mode == const.MODE_SINGLE else trajs
    result = regime.identify(data, args.xi)

    print_json(result.to_json())
    return _EXIT_OK_


def _summary_table(rows: List[Any]) -> Table:
    table = Table(title="Experiment summary")
    for col in ("T", "mean order", "median CAB err", "median oracle err", "failed"):
        table.add_column(col, justify="right")

    def _fmt(val: Any) -> str:
        return "-" if val is None else f"{val:.4g}"

    for row in rows:
        table.add_row(
            str(row["T"]),
            _fmt(row["mean_order"]),
            _fmt(row["median_markov_cab_error"]),
            _fmt(row["median_oracle_cab_error"]),
            f"{row['failed']}/{row['trials']}",
        )

    return table


def cmd_experiment(args: Any) -> int:
    """Run experiment sweep from config file."""
    cfgName = args.config or (
        os.environ.get(_APP_ENV_CONFIG_) or get_valid_location(_APP_CONFIG_)
    )
    if not cfgName:
        rprint("ERROR: no experiment config file found", file=sys.stderr)
        return _EXIT_INVALID_

    cfg = load_config(cfgName, args.set)
    records = run_experiment(cfg)

    rprint(Rule())
    rprint(_summary_table(summarize(records)))
    rprint(f"Records: '{cfg.output_path}'  Summary: '{summary_path(cfg)}'")
    return _EXIT_OK_


def cmd_check_bounds(args: Any) -> int:
    """Run property suites and print pass counts."""
    report = run_bound_checks(args.instances, args.seed)
    rprint(report.summary())
    return _EXIT_OK_ if report.all_passed else _EXIT_INVALID_


_COMMANDS_ = {
    _CMD_SIMULATE_: cmd_simulate,
    _CMD_IDENTIFY_: cmd_identify,
    _CMD_EXPERIMENT_: cmd_experiment,
    _CMD_CHECK_: cmd_check_bounds,
}


# =========================================================
#      M A I N   F U N C T I O N    /   A C T I O N S
# =========================================================
def main(inArgs: Any = None) -> None:
    """Core function to run a CLI command.    # noqa: D417,D415

    Note:
        - Application will exit with error level 0 if no arguments are
          entered via CLI, or if arguments '-V' or '--version' are used.

        - Application will exit with error level 1 on invalid arguments, config
          values, or data files, and with error level 2 on numerical failures.

    Args:
        inArgs:
            CLI arguments used to start application
    """
    cli = init_cli_parser()
    argList = sys.argv[1:] if inArgs is None else list(inArgs)

    # Show 'help' and exit if no args
    if not argList or argList in (["-d"], ["--debug"]):
        cli.print_help(sys.stdout)
        sys.exit(_EXIT_OK_)

    cliArgs = cli.parse_args(argList)
    if cliArgs.version:
        rprint(f"{_APP_NAME_} ({__app_name__}) v{__version__}")
        sys.exit(_EXIT_OK_)

    if not cliArgs.cmd:
        cli.print_usage(sys.stderr)
        sys.exit(_EXIT_INVALID_)

    # Initialize loggers
    logger = logging.getLogger()
    logging.basicConfig(
        filename=cliArgs.log or f"{_APP_DIR_}/{_APP_LOG_}",
        level=logging.INFO,
    )
    logger.setLevel(logging.DEBUG if cliArgs.debug else logging.INFO)

    konsole.config(level=konsole.DEBUG if cliArgs.debug else konsole.ERROR)

    try:
        exitCode = _COMMANDS_[cliArgs.cmd](cliArgs)

    except NumericalFailureError as e:
        rprint(f"ERROR: {e.message}", file=sys.stderr)
        exitCode = _EXIT_NUMERICAL_

    except (f451SysIdExceptionError, OSError) as e:
        rprint(f"ERROR: {getattr(e, 'message', e)}", file=sys.stderr)
        exitCode = _EXIT_INVALID_

    sys.exit(exitCode)


if __name__ == "__main__":
    main()  # pragma: no cover
