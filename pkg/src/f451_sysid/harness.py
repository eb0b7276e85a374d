"""Experiment harness for f451 System Identification module.

This module runs seeded Monte-Carlo sweeps over a grid of sample budgets
``T``. One ground-truth system is drawn per experiment from the master seed.
Each trial then simulates fresh data, estimates the Hankel matrix, and runs
both the thresholded Ho-Kalman algorithm and the known-order baseline on the
SAME estimate. Results are written as a CSV file (one row per trial) and a
JSON summary (one entry per ``T``).

Note:
    - Trial seeds come from a numpy ``SeedSequence`` over ``(master_seed, T, trial_index)``, so
      every trial is a pure function of the config and can run on any thread.
    - Trials that fail (e.g. too few trajectories for a well-posed regression)
      are recorded with a 'failed:<reason>' status instead of aborting the sweep.
    - Env var 'SYSID_THREADS' caps the number of worker threads.
"""
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict
from dataclasses import dataclass
from pathlib import Path
from typing import Any
from typing import Dict
from typing import List
from typing import Optional
from typing import Tuple

import f451_sysid.constants as const
import f451_sysid.utils as utils
from f451_sysid.exceptions import f451SysIdExceptionError
from f451_sysid.exceptions import InvalidArgumentError
from f451_sysid.exceptions import MissingAttributeError
from f451_sysid.hankel import true_hankel
from f451_sysid.hokalman import known_order_ho_kalman
from f451_sysid.hokalman import thresholded_ho_kalman
from f451_sysid.lowrank import hard_threshold
from f451_sysid.lowrank import svd
from f451_sysid.lti import NoiseSpec
from f451_sysid.lti import random_system
from f451_sysid.lti import StateSpaceSystem
from f451_sysid.metrics import frobenius_error
from f451_sysid.metrics import markov_error
from f451_sysid.metrics import operator_error
from f451_sysid.metrics import prop1_bound
from f451_sysid.metrics import summarize
from f451_sysid.metrics import TrialRecord
from f451_sysid.metrics import write_records
from f451_sysid.regimes import make_regime
from f451_sysid.regimes import typeDefRegime

__all__ = [
    "ExperimentConfig",
    "load_config",
    "config_from_parser",
    "experiment_system",
    "check_order_separation",
    "run_trial",
    "run_experiment",
    "summary_path",
    "thread_count",
]

# =========================================================
#          G L O B A L S   A N D   H E L P E R S
# =========================================================
_MAX_THREADS_: int = 8
_MAX_SEED_: int = 2**64
_SUMMARY_SUFFIX_: str = ".summary.json"
_SEPARATION_: float = 1.5  # xi <= (2/3) s_n(H)

log = logging.getLogger()


# =========================================================
#              E X P E R I M E N T   C O N F I G
# =========================================================
@dataclass(frozen=True)
class ExperimentConfig:
    """Settings for one experiment.

    Attributes:
        mode:
            'single' or 'multi'
        n:
            true system order
        d_u:
            input dimension
        d_y:
            output dimension
        tau:
            Hankel window length (should be ``>= n + 1``)
        sigma_u:
            input standard deviation (> 0)
        sigma_z:
            observation noise standard deviation
        delta:
            failure probability in (0, 1)
        T_grid:
            ascending sample budgets
        trials_per_T:
            number of trials per sample budget
        master_seed:
            64-bit master seed
        beta_override:
            optional H-infinity norm bound for single mode
        output_path:
            path to CSV output file
        allow_short_tau:
            allow ``tau < n + 1`` (with a warning)
    """

    mode: str = const.DEFAULT_MODE
    n: int = const.DEFAULT_N
    d_u: int = const.DEFAULT_D_U
    d_y: int = const.DEFAULT_D_Y
    tau: int = const.DEFAULT_TAU
    sigma_u: float = const.DEFAULT_SIGMA_U
    sigma_z: float = const.DEFAULT_SIGMA_Z
    delta: float = const.DEFAULT_DELTA
    T_grid: Tuple[int, ...] = const.DEFAULT_T_GRID
    trials_per_T: int = const.DEFAULT_TRIALS
    master_seed: int = const.DEFAULT_SEED
    beta_override: Optional[float] = None
    output_path: str = const.DEFAULT_OUTPUT
    allow_short_tau: bool = False

    def __post_init__(self) -> None:  # noqa: C901
        object.__setattr__(self, "T_grid", tuple(int(T) for T in self.T_grid))

        if self.mode not in const.VALID_MODES:
            raise InvalidArgumentError(
                f"'mode' must be one of {const.VALID_MODES}, got '{self.mode}'"
            )
        if min(self.n, self.d_u, self.d_y) < 1:
            raise InvalidArgumentError("'n', 'd_u', 'd_y' must be >= 1")
        if self.tau < 2:
            raise InvalidArgumentError(f"'tau' must be >= 2, got {self.tau}")
        if not self.sigma_u > 0 or self.sigma_z < 0:
            raise InvalidArgumentError("'sigma_u' must be > 0 and 'sigma_z' >= 0")
        if not 0.0 < self.delta < 1.0:
            raise InvalidArgumentError(f"'delta' must be in (0, 1), got {self.delta}")
        if not self.T_grid or any(T < 1 for T in self.T_grid):
            raise InvalidArgumentError("'T_grid' must hold one or more positive integers")
        if any(a >= b for a, b in zip(self.T_grid, self.T_grid[1:])):
            raise InvalidArgumentError(f"'T_grid' must be ascending, got {self.T_grid}")
        if self.trials_per_T < 1:
            raise InvalidArgumentError("'trials_per_T' must be >= 1")
        if not 0 <= self.master_seed < _MAX_SEED_:
            raise InvalidArgumentError("'master_seed' must be a 64-bit unsigned integer")
        if self.beta_override is not None and self.beta_override < 0:
            raise InvalidArgumentError("'beta_override' must be >= 0")

        if self.tau < self.n + 1:
            if not self.allow_short_tau:
                raise InvalidArgumentError(
                    f"'tau' ({self.tau}) must be >= n + 1 ({self.n + 1}); "
                    f"set '{const.KWD_ALLOW_SHORT_TAU}' to override"
                )
            log.warning(f"'tau' ({self.tau}) < n + 1: order cannot be recovered")

    @property
    def noise(self) -> NoiseSpec:
        """Return input and observation noise levels."""
        return NoiseSpec(sigma_u=self.sigma_u, sigma_z=self.sigma_z)

    def to_dict(self) -> Dict[str, Any]:
        """Return config as JSON-ready 'dict' structure."""
        out = asdict(self)
        out[const.KWD_T_GRID] = list(self.T_grid)
        return out


def _get_optional_float(val: str) -> Optional[float]:
    return None if val.strip().lower() in {"", "none", "null"} else float(val)


_PARSERS_: Dict[str, Any] = {
    const.KWD_MODE: str.strip,
    const.KWD_N: int,
    const.KWD_D_U: int,
    const.KWD_D_Y: int,
    const.KWD_TAU: int,
    const.KWD_SIGMA_U: float,
    const.KWD_SIGMA_Z: float,
    const.KWD_DELTA: float,
    const.KWD_T_GRID: lambda val: utils.convert_attrib_str_to_list(val, const.DELIM_STD, int),
    const.KWD_TRIALS: int,
    const.KWD_SEED: int,
    const.KWD_BETA: _get_optional_float,
    const.KWD_OUTPUT: str.strip,
    const.KWD_ALLOW_SHORT_TAU: utils.convert_str_to_bool,
}


def config_from_parser(inConfig: Any) -> ExperimentConfig:
    """Create 'ExperimentConfig' from config data.

    Args:
        inConfig:
            ConfigParser, 'dict' with sections, or config string (see ``utils.process_config()``)

    Returns:
        'ExperimentConfig' object (missing settings get defaults)

    Raises:
        MissingAttributeError: config section is missing
        InvalidArgumentError: setting has an invalid value
    """
    parser = utils.process_config(inConfig)
    if not parser.has_section(const.CONFIG_SCTN):
        raise MissingAttributeError(f"Config section '{const.CONFIG_SCTN}' is missing.")

    sctn = parser[const.CONFIG_SCTN]
    kwargs: Dict[str, Any] = {}
    for key in sctn:
        if key not in _PARSERS_:
            log.warning(f"Ignoring unknown config setting '{key}'")
            continue
        try:
            kwargs[key] = _PARSERS_[key](sctn.get(key, raw=True))
        except ValueError as e:
            raise InvalidArgumentError(f"Invalid value for '{key}': {e}") from e

    return ExperimentConfig(**kwargs)


def load_config(fName: Any, overrides: str = "") -> ExperimentConfig:
    """Load 'ExperimentConfig' from JSON or INI file.

    JSON files hold an object with the config fields (optionally nested under
    an 'f451_sysid' key). INI files hold an '[f451_sysid]' section.

    Settings in 'overrides' replace those from the file. They use the short
    config string form ``key:val,key:val`` (e.g. ``trials_per_T:5,T_grid:500|1000``).

    Args:
        fName:
            path to config file
        overrides:
            optional config string with settings that win over the file

    Returns:
        'ExperimentConfig' object

    Raises:
        InvalidArgumentError: file is missing or cannot be parsed
    """
    path = Path(fName).expanduser()
    if not path.exists():
        log.error(f"Config file '{path}' does not exist.")
        raise InvalidArgumentError(f"Config file '{path}' does not exist.")

    text = path.read_text()
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise InvalidArgumentError(f"Config file '{path}' is not valid JSON") from e
        if not isinstance(data, dict):
            raise InvalidArgumentError(f"Config file '{path}' must hold a JSON object")
        parser = utils.process_config(
            data if const.CONFIG_SCTN in data else {const.CONFIG_SCTN: data}
        )
    else:
        parser = utils.process_config({})
        parser.read_string(text)

    if overrides:
        try:
            parser.read_dict(
                utils.convert_config_str_to_dict(f"{const.CONFIG_SCTN}|{overrides}")
            )
        except ValueError as e:
            raise InvalidArgumentError(f"Invalid config overrides '{overrides}'") from e

    return config_from_parser(parser)


def summary_path(cfg: ExperimentConfig) -> Path:
    """Return path of JSON summary that goes with the CSV output file."""
    out = Path(cfg.output_path)
    return out.with_name(out.stem + _SUMMARY_SUFFIX_)


def thread_count() -> int:
    """Return number of worker threads ('SYSID_THREADS' or a default)."""
    default = min(_MAX_THREADS_, os.cpu_count() or 1)
    raw = os.environ.get(const.ENV_THREADS)
    if raw is None:
        return default
    try:
        val = int(raw)
        if val < 1:
            raise ValueError(raw)
    except ValueError:
        log.warning(f"Ignoring invalid {const.ENV_THREADS}='{raw}'")
        return default

    return val


# =========================================================
#              T R I A L S
# =========================================================
def experiment_system(cfg: ExperimentConfig) -> StateSpaceSystem:
    """Return ground-truth system of an experiment (drawn from 'master_seed')."""
    return random_system(cfg.n, cfg.d_u, cfg.d_y, cfg.master_seed)


def _make_regime(cfg: ExperimentConfig, system: StateSpaceSystem) -> typeDefRegime:
    return make_regime(
        cfg.mode,
        cfg.tau,
        cfg.d_u,
        cfg.d_y,
        cfg.noise,
        cfg.delta,
        beta=cfg.beta_override,
        system=system,
    )


def check_order_separation(
    cfg: ExperimentConfig,
    system: Optional[StateSpaceSystem] = None,
    regime: Optional[typeDefRegime] = None,
) -> bool:
    """Check that the true order can be recovered on the sample grid.

    Order recovery needs ``xi <= (2/3) * s_n(H)`` for the threshold ``xi``
    at the largest ``T`` of the grid. A warning is logged when the drawn
    system fails this check.

    Args:
        cfg:
            experiment config
        system:
            ground-truth system (default: ``experiment_system(cfg)``)
        regime:
            data regime (default: built from 'cfg')

    Returns:
        'True' if order 'n' is recoverable at the largest 'T', else 'False'
    """
    system = system or experiment_system(cfg)
    regime = regime or _make_regime(cfg, system)
    Tmax = max(cfg.T_grid)

    s = svd(true_hankel(system, cfg.tau).data).singular_values
    s_n = float(s[cfg.n - 1]) if len(s) >= cfg.n else 0.0
    try:
        xi = regime.threshold(Tmax)
    except f451SysIdExceptionError as e:
        log.warning(f"Cannot check order separation: {e.message}")
        return False

    if s_n < _SEPARATION_ * xi:
        log.warning(
            f"s_{cfg.n}(H) = {s_n:.3g} is below {_SEPARATION_:.3g} * xi = {_SEPARATION_ * xi:.3g} "
            f"at T={Tmax}: order {cfg.n} cannot be recovered with master_seed={cfg.master_seed}"
        )
        return False

    return True


def run_trial(
    cfg: ExperimentConfig,
    T: int,
    trialIndex: int,
    system: Optional[StateSpaceSystem] = None,
    regime: Optional[typeDefRegime] = None,
) -> TrialRecord:
    """Run one seeded trial.

    Args:
        cfg:
            experiment config
        T:
            sample budget
        trialIndex:
            trial index within this budget
        system:
            ground-truth system (default: ``experiment_system(cfg)``)
        regime:
            data regime (default: built from 'cfg')

    Returns:
        'TrialRecord' object (status 'failed:<reason>' if estimation failed)
    """
    system = system or experiment_system(cfg)
    regime = regime or _make_regime(cfg, system)
    seed = utils.mix_seed(cfg.master_seed, T, trialIndex)

    try:
        H = true_hankel(system, cfg.tau)
        H_hat = regime.estimate(regime.collect(system, T, seed))
        xi = regime.threshold(T)

        result = thresholded_ho_kalman(H_hat, xi)
        oracle = known_order_ho_kalman(H_hat, cfg.n)

        return TrialRecord(
            T=T,
            trial_index=trialIndex,
            xi=xi,
            order_estimate=result.order,
            hankel_op_error=operator_error(H_hat.data, H.data),
            hankel_fro_error_thresholded=frobenius_error(
                hard_threshold(H_hat.data, xi).matrix, H.data
            ),
            markov_cab_error=markov_error(result, system, 2)[1],
            oracle_cab_error=markov_error(oracle, system, 2)[1],
            bound_rhs_prop1=prop1_bound(
                svd(H.data).singular_values, min(cfg.n, H.data.shape[0], H.data.shape[1]), xi
            ),
        )

    except f451SysIdExceptionError as e:
        log.info(f"Trial T={T}, index={trialIndex} failed: {e.message}")
        return TrialRecord.failed(T, trialIndex, type(e).__name__)


# =========================================================
#              E X P E R I M E N T S
# =========================================================
def _check_writable(fName: Any) -> None:
    """Raise 'OSError' if output file cannot be written."""
    path = Path(fName).expanduser()
    parent = path.parent if str(path.parent) else Path(".")
    if not parent.is_dir():
        raise FileNotFoundError(f"Output directory '{parent}' does not exist.")
    if not os.access(parent, os.W_OK) or (path.exists() and not os.access(path, os.W_OK)):
        raise PermissionError(f"Output file '{path}' is not writable.")


def _floors(regime: typeDefRegime, system: StateSpaceSystem) -> Any:
    try:
        return regime.floors(system)._asdict()
    except f451SysIdExceptionError as e:
        log.warning(f"Sample-size floors unavailable: {e.message}")
        return None


def run_experiment(cfg: ExperimentConfig, writeOutput: bool = True) -> List[TrialRecord]:
    """Run full sweep over 'T_grid'.

    Args:
        cfg:
            experiment config
        writeOutput:
            if 'True', write CSV and JSON summary files

    Returns:
        'list' of 'TrialRecord' objects sorted by ``(T, trial_index)``

    Raises:
        OSError: output file cannot be written (checked before any trial runs)
    """
    if writeOutput:
        _check_writable(cfg.output_path)
        _check_writable(summary_path(cfg))

    system = experiment_system(cfg)
    regime = _make_regime(cfg, system)
    check_order_separation(cfg, system, regime)
    tasks = [(T, i) for T in cfg.T_grid for i in range(cfg.trials_per_T)]
    workers = thread_count()
    log.info(f"Running {len(tasks)} trials ({cfg.mode} mode) on {workers} thread(s)")

    with ThreadPoolExecutor(max_workers=workers) as pool:
        records = list(
            pool.map(lambda task: run_trial(cfg, task[0], task[1], system, regime), tasks)
        )
    records.sort(key=lambda rec: (rec.T, rec.trial_index))

    if writeOutput:
        write_records(records, cfg.output_path)
        summary = {
            "config": cfg.to_dict(),
            "floors": _floors(regime, system),
            "summary": summarize(records),
        }
        summary_path(cfg).write_text(json.dumps(summary, indent=2) + "\n")
        log.info(f"Wrote {len(records)} records to '{cfg.output_path}'")

    return records
