"""Linear time-invariant systems for f451 System Identification module.

This module represents discrete-time LTI systems of the form::

    x_{t+1} = A x_t + B u_t
    y_t     = C x_t + z_t

with i.i.d. Gaussian inputs ``u_t ~ N(0, sigma_u^2 I)`` and observation noise
``z_t ~ N(0, sigma_z^2 I)``, starting from ``x_1 = 0``. It can generate random
stable systems, simulate trajectories, and compute system-level scalars such as
Markov parameters, the spectral radius, and a grid approximation of the H-infinity
norm.

Note:
    - Inputs and noise are drawn from two independent sub-streams of the trial
      seed, so changing ``sigma_z`` never changes the input sample path.
    - Time index ``t`` starts at 1 in files and docs. Row ``i`` of the arrays
      in a ``Trajectory`` holds time ``t = i + 1``.
"""
import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any
from typing import Dict
from typing import List
from typing import Optional

import numpy as np

import f451_sysid.constants as const
import f451_sysid.utils as utils
from f451_sysid.exceptions import InvalidArgumentError
from f451_sysid.exceptions import NumericalFailureError

__all__ = [
    "StateSpaceSystem",
    "NoiseSpec",
    "Trajectory",
    "simulate_trajectory",
    "simulate_with_inputs",
    "simulate_trajectories",
    "simulate_impulse_response",
    "markov_parameter",
    "markov_parameters",
    "spectral_radius",
    "hinf_norm",
    "random_system",
    "save_system",
    "load_system",
    "save_trajectory",
    "load_trajectory",
]

# =========================================================
#          G L O B A L S   A N D   H E L P E R S
# =========================================================
_MAX_SEED_: int = 2**64
_HINF_CHUNK_: int = 256

log = logging.getLogger()

RandomSeed = int


def _as_matrix(val: Any, name: str) -> np.ndarray:
    """Convert to read-only 2-D float array with finite entries."""
    try:
        arr = np.array(val, dtype=float)
    except (TypeError, ValueError) as e:
        raise InvalidArgumentError(f"'{name}' is not a numeric matrix") from e

    if arr.ndim != 2:
        raise InvalidArgumentError(f"'{name}' must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"'{name}' has non-finite entries")

    arr.setflags(write=False)
    return arr


def _check_seed(seed: RandomSeed) -> int:
    if not 0 <= int(seed) < _MAX_SEED_:
        raise InvalidArgumentError(f"Seed {seed} is not a 64-bit unsigned integer")
    return int(seed)


# =========================================================
#              D O M A I N   T Y P E S
# =========================================================
@dataclass(frozen=True, eq=False)
class StateSpaceSystem:
    """State-space matrices ``(A, B, C)`` of an LTI system.

    Attributes:
        A:
            state transition matrix (n x n)
        B:
            input map (n x d_u)
        C:
            output map (d_y x n)
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self) -> None:
        A = _as_matrix(self.A, "A")
        B = _as_matrix(self.B, "B")
        C = _as_matrix(self.C, "C")

        n = A.shape[0]
        if n < 1 or A.shape != (n, n):
            raise InvalidArgumentError(f"'A' must be square and non-empty, got {A.shape}")
        if B.shape[0] != n or B.shape[1] < 1:
            raise InvalidArgumentError(f"'B' must be {n} x d_u, got {B.shape}")
        if C.shape[1] != n or C.shape[0] < 1:
            raise InvalidArgumentError(f"'C' must be d_y x {n}, got {C.shape}")

        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)

    def __repr__(self) -> str:
        return f"<StateSpaceSystem, n={self.n}, d_u={self.d_u}, d_y={self.d_y}>"

    @property
    def n(self) -> int:
        """Return state order."""
        return int(self.A.shape[0])

    @property
    def d_u(self) -> int:
        """Return input dimension."""
        return int(self.B.shape[1])

    @property
    def d_y(self) -> int:
        """Return output dimension."""
        return int(self.C.shape[0])

    def to_dict(self) -> Dict[str, Any]:
        """Return system as JSON-ready 'dict' structure."""
        return {
            "n": self.n,
            "d_u": self.d_u,
            "d_y": self.d_y,
            "A": self.A.tolist(),
            "B": self.B.tolist(),
            "C": self.C.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "StateSpaceSystem":
        """Create system from 'dict' structure (see ``to_dict()``).

        Args:
            data:
                'dict' with 'A', 'B', 'C' and optional 'n', 'd_u', 'd_y' keys

        Returns:
            New 'StateSpaceSystem' object

        Raises:
            InvalidArgumentError: matrices missing, or declared dimensions do not match
        """
        try:
            system = cls(A=data["A"], B=data["B"], C=data["C"])
        except KeyError as e:
            raise InvalidArgumentError(f"System data is missing matrix {e}") from e

        for key in ("n", "d_u", "d_y"):
            if key in data and int(data[key]) != getattr(system, key):
                raise InvalidArgumentError(
                    f"Declared '{key}'={data[key]} does not match matrices ({getattr(system, key)})"
                )

        return system


@dataclass(frozen=True)
class NoiseSpec:
    """Input and observation noise levels.

    Attributes:
        sigma_u:
            input standard deviation
        sigma_z:
            observation noise standard deviation
    """

    sigma_u: float = const.DEFAULT_SIGMA_U
    sigma_z: float = const.DEFAULT_SIGMA_Z

    def __post_init__(self) -> None:
        if not (np.isfinite(self.sigma_u) and self.sigma_u >= 0):
            raise InvalidArgumentError(f"sigma_u must be >= 0, got {self.sigma_u}")
        if not (np.isfinite(self.sigma_z) and self.sigma_z >= 0):
            raise InvalidArgumentError(f"sigma_z must be >= 0, got {self.sigma_z}")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Inputs and outputs of one system run.

    Attributes:
        inputs:
            array (length x d_u), row i holds u_{i+1}
        outputs:
            array (length x d_y), row i holds y_{i+1}
    """

    inputs: np.ndarray
    outputs: np.ndarray

    def __post_init__(self) -> None:
        inputs = _as_matrix(self.inputs, "inputs")
        outputs = _as_matrix(self.outputs, "outputs")
        if inputs.shape[0] != outputs.shape[0]:
            raise InvalidArgumentError(
                f"Inputs ({inputs.shape[0]}) and outputs ({outputs.shape[0]}) differ in length"
            )
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "outputs", outputs)

    def __len__(self) -> int:
        return int(self.inputs.shape[0])

    def __repr__(self) -> str:
        return f"<Trajectory, length={len(self)}, d_u={self.d_u}, d_y={self.d_y}>"

    @property
    def d_u(self) -> int:
        """Return input dimension."""
        return int(self.inputs.shape[1])

    @property
    def d_y(self) -> int:
        """Return output dimension."""
        return int(self.outputs.shape[1])


# =========================================================
#              S I M U L A T I O N
# =========================================================
def simulate_with_inputs(
    system: StateSpaceSystem,
    inputs: Any,
    noise: Optional[Any] = None,
) -> Trajectory:
    """Simulate system from zero initial state for a given input sequence.

    Args:
        system:
            system to simulate
        inputs:
            array (length x d_u) with u_1 ... u_length
        noise:
            optional array (length x d_y) with z_1 ... z_length

    Returns:
        'Trajectory' with the given inputs and resulting outputs

    Raises:
        InvalidArgumentError: input or noise dimensions do not match system
    """
    u = np.asarray(inputs, dtype=float)
    if u.ndim == 1 and system.d_u == 1:
        u = u[:, None]
    if u.ndim != 2 or u.shape[1] != system.d_u or u.shape[0] < 1:
        raise InvalidArgumentError(
            f"Inputs must be length x {system.d_u}, got {u.shape}"
        )

    length = u.shape[0]
    z = np.zeros((length, system.d_y))
    if noise is not None:
        z = np.asarray(noise, dtype=float)
        if z.shape != (length, system.d_y):
            raise InvalidArgumentError(
                f"Noise must be {length} x {system.d_y}, got {z.shape}"
            )

    y = np.empty((length, system.d_y))
    x = np.zeros(system.n)
    for t in range(length):
        y[t] = system.C @ x + z[t]
        x = system.A @ x + system.B @ u[t]

    return Trajectory(inputs=u, outputs=y)


def simulate_trajectory(
    system: StateSpaceSystem,
    noise: NoiseSpec,
    length: int,
    seed: RandomSeed,
) -> Trajectory:
    """Simulate one trajectory with Gaussian inputs and observation noise.

    Inputs and noise are drawn from independent children of
    ``SeedSequence(seed)``, so the input path does not depend on ``sigma_z``.

    Args:
        system:
            system to simulate
        noise:
            input and observation noise levels
        length:
            number of time steps (>= 1)
        seed:
            64-bit unsigned seed

    Returns:
        'Trajectory' with ``x_1 = 0``

    Raises:
        InvalidArgumentError: length < 1 or invalid seed
    """
    if length < 1:
        raise InvalidArgumentError(f"Trajectory length must be >= 1, got {length}")

    inputSeq, noiseSeq = np.random.SeedSequence(_check_seed(seed)).spawn(2)
    u = noise.sigma_u * np.random.default_rng(inputSeq).standard_normal(
        (length, system.d_u)
    )
    z = noise.sigma_z * np.random.default_rng(noiseSeq).standard_normal(
        (length, system.d_y)
    )

    return simulate_with_inputs(system, u, z)


def simulate_trajectories(
    system: StateSpaceSystem,
    noise: NoiseSpec,
    count: int,
    length: int,
    seed: RandomSeed,
) -> List[Trajectory]:
    """Simulate independent short trajectories, each from ``x_1 = 0``.

    All runs are advanced together. Inputs and noise come from independent
    children of ``SeedSequence(seed)`` as in ``simulate_trajectory()``.

    Args:
        system:
            system to simulate
        noise:
            input and observation noise levels
        count:
            number of trajectories (>= 0)
        length:
            number of time steps per trajectory (>= 1)
        seed:
            64-bit unsigned seed

    Returns:
        'list' with 'count' 'Trajectory' objects

    Raises:
        InvalidArgumentError: count < 0, length < 1, or invalid seed
    """
    if count < 0 or length < 1:
        raise InvalidArgumentError(
            f"Need count >= 0 and length >= 1, got ({count}, {length})"
        )

    inputSeq, noiseSeq = np.random.SeedSequence(_check_seed(seed)).spawn(2)
    u = noise.sigma_u * np.random.default_rng(inputSeq).standard_normal(
        (count, length, system.d_u)
    )
    y = noise.sigma_z * np.random.default_rng(noiseSeq).standard_normal(
        (count, length, system.d_y)
    )

    x = np.zeros((count, system.n))
    for t in range(length):
        y[:, t, :] += x @ system.C.T
        x = x @ system.A.T + u[:, t, :] @ system.B.T

    return [Trajectory(inputs=u[i], outputs=y[i]) for i in range(count)]


def simulate_impulse_response(system: StateSpaceSystem, length: int) -> np.ndarray:
    """Simulate noiseless impulse responses for each input channel.

    Args:
        system:
            system to simulate
        length:
            number of time steps (>= 1)

    Returns:
        array (length x d_y x d_u) where ``[t, :, j]`` is y_{t+1} for
        ``u_1 = e_j`` and ``u_t = 0`` for ``t > 1``
    """
    out = np.empty((length, system.d_y, system.d_u))
    for j in range(system.d_u):
        u = np.zeros((length, system.d_u))
        u[0, j] = 1.0
        out[:, :, j] = simulate_with_inputs(system, u).outputs

    return out


# =========================================================
#        S Y S T E M - L E V E L   S C A L A R S
# =========================================================
def markov_parameters(system: StateSpaceSystem, count: int) -> List[np.ndarray]:
    """Return Markov parameters ``C A^k B`` for k = 0 ... count-1.

    Args:
        system:
            state-space system
        count:
            number of Markov parameters

    Returns:
        'list' of d_y x d_u arrays
    """
    out = []
    AkB = np.array(system.B)
    for _ in range(max(0, count)):
        out.append(system.C @ AkB)
        AkB = system.A @ AkB

    return out


def markov_parameter(system: StateSpaceSystem, k: int) -> np.ndarray:
    """Return Markov parameter ``C A^k B``.

    Example:
        >>> sys1 = StateSpaceSystem([[0.5]], [[1.0]], [[1.0]])
        >>> assert markov_parameter(sys1, 3).item() == 0.125

    Args:
        system:
            state-space system
        k:
            lag (>= 0)

    Returns:
        d_y x d_u array

    Raises:
        InvalidArgumentError: k < 0
    """
    if k < 0:
        raise InvalidArgumentError(f"Markov parameter lag must be >= 0, got {k}")

    return markov_parameters(system, k + 1)[k]


def spectral_radius(system: StateSpaceSystem) -> float:
    """Return largest eigenvalue modulus of ``A``.

    Args:
        system:
            state-space system

    Returns:
        spectral radius of ``A``

    Raises:
        NumericalFailureError: eigenvalue solver did not converge
    """
    try:
        eigs = np.linalg.eigvals(system.A)
    except np.linalg.LinAlgError as e:
        log.error("Eigenvalue solver failed for A")
        raise NumericalFailureError("eigenvalues of A did not converge") from e

    return float(np.max(np.abs(eigs)))


def hinf_norm(system: StateSpaceSystem, grid_size: int = const.HINF_GRID_SIZE) -> float:
    """Approximate H-infinity norm on a uniform frequency grid.

    Returns the largest singular value of ``C (e^{iw} I - A)^{-1} B`` over
    ``grid_size`` equally spaced frequencies in ``[0, pi]``. The grid maximum
    can only under-estimate the true supremum. Grids nest (and the value can
    only grow) when ``grid_size - 1`` divides the finer ``grid_size - 1``.

    Args:
        system:
            stable state-space system
        grid_size:
            number of frequencies (>= 1)

    Returns:
        grid approximation of the H-infinity norm

    Raises:
        InvalidArgumentError: system is not stable or grid size < 1
        NumericalFailureError: resolvent is singular
    """
    if grid_size < 1:
        raise InvalidArgumentError(f"Grid size must be >= 1, got {grid_size}")

    rho = spectral_radius(system)
    if rho >= 1.0:
        log.error(f"H-infinity norm requested for unstable system (rho={rho})")
        raise InvalidArgumentError(f"System is not stable (spectral radius {rho})")

    omegas = np.linspace(0.0, np.pi, grid_size)
    eye = np.eye(system.n)
    best = 0.0
    for start in range(0, grid_size, _HINF_CHUNK_):
        w = omegas[start : start + _HINF_CHUNK_]
        resolvent = np.exp(1j * w)[:, None, None] * eye - system.A
        rhs = np.broadcast_to(system.B, (w.size, system.n, system.d_u))
        try:
            X = np.linalg.solve(resolvent, rhs)
        except np.linalg.LinAlgError as e:
            log.error("Singular resolvent in H-infinity norm grid")
            raise NumericalFailureError("resolvent (e^{iw} I - A) is singular") from e

        svals = np.linalg.svd(system.C @ X, compute_uv=False)
        best = max(best, float(np.max(svals[:, 0])))

    return best


# =========================================================
#              R A N D O M   S Y S T E M S
# =========================================================
def random_system(n: int, d_u: int, d_y: int, seed: RandomSeed) -> StateSpaceSystem:
    """Draw a random stable system.

    ``A`` is diagonal with i.i.d. Uniform(0.1, 0.9) entries, and the entries
    of ``B`` and ``C`` are i.i.d. Gaussian with mean 0 and standard deviation 2.

    Args:
        n:
            state order (>= 1)
        d_u:
            input dimension (>= 1)
        d_y:
            output dimension (>= 1)
        seed:
            64-bit unsigned seed

    Returns:
        new 'StateSpaceSystem' object

    Raises:
        InvalidArgumentError: dimension < 1
    """
    if min(n, d_u, d_y) < 1:
        raise InvalidArgumentError(f"Dimensions must be >= 1, got ({n}, {d_u}, {d_y})")

    rng = np.random.default_rng(_check_seed(seed))
    A = np.diag(rng.uniform(const.SYS_EIG_LOW, const.SYS_EIG_HIGH, size=n))
    B = rng.normal(0.0, const.SYS_BC_STD, size=(n, d_u))
    C = rng.normal(0.0, const.SYS_BC_STD, size=(d_y, n))
    log.debug(f"Random system drawn: n={n}, d_u={d_u}, d_y={d_y}, seed={seed}")

    return StateSpaceSystem(A=A, B=B, C=C)


# =========================================================
#              F I L E   I / O
# =========================================================
def save_system(system: StateSpaceSystem, fName: Any) -> None:
    """Write system to JSON file."""
    Path(fName).write_text(json.dumps(system.to_dict(), indent=2))


def load_system(fName: Any) -> StateSpaceSystem:
    """Read system from JSON file.

    Args:
        fName:
            path to JSON file

    Returns:
        'StateSpaceSystem' object

    Raises:
        InvalidArgumentError: file is missing or not a valid system
    """
    path = Path(fName).expanduser()
    if not path.exists():
        raise InvalidArgumentError(f"System file '{path}' does not exist.")

    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise InvalidArgumentError(f"System file '{path}' is not valid JSON") from e

    return StateSpaceSystem.from_dict(data)


def save_trajectory(traj: Trajectory, fName: Any) -> None:
    """Write trajectory to CSV file with header ``t,u_1..,y_1..``."""
    header = (
        ["t"]
        + [f"u_{i + 1}" for i in range(traj.d_u)]
        + [f"y_{i + 1}" for i in range(traj.d_y)]
    )
    with open(fName, "w", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(header)
        for t in range(len(traj)):
            writer.writerow(
                [t + 1]
                + [utils.fmt_float(v) for v in traj.inputs[t]]
                + [utils.fmt_float(v) for v in traj.outputs[t]]
            )


def load_trajectory(fName: Any) -> Trajectory:
    """Read trajectory from CSV file (see ``save_trajectory()``).

    Args:
        fName:
            path to CSV file

    Returns:
        'Trajectory' object

    Raises:
        InvalidArgumentError: file is missing, header is malformed, or rows are
            out of order
    """
    path = Path(fName).expanduser()
    if not path.exists():
        raise InvalidArgumentError(f"Trajectory file '{path}' does not exist.")

    with open(path, newline="") as fp:
        rows = list(csv.reader(fp))

    if not rows or not rows[0] or rows[0][0] != "t":
        raise InvalidArgumentError(f"Trajectory file '{path}' has no 't' header")

    header = rows[0]
    uCols = [i for i, col in enumerate(header) if col.startswith("u_")]
    yCols = [i for i, col in enumerate(header) if col.startswith("y_")]
    if not uCols or not yCols or len(uCols) + len(yCols) + 1 != len(header):
        raise InvalidArgumentError(f"Trajectory file '{path}' has malformed header")

    try:
        data = np.array([[float(v) for v in row] for row in rows[1:]], dtype=float)
    except ValueError as e:
        raise InvalidArgumentError(f"Trajectory file '{path}' has bad values") from e

    if data.shape[0] < 1 or data.shape[1] != len(header):
        raise InvalidArgumentError(f"Trajectory file '{path}' has no complete rows")
    if not np.array_equal(data[:, 0], np.arange(1, data.shape[0] + 1)):
        raise InvalidArgumentError(f"Trajectory file '{path}' rows are not t=1..T")

    return Trajectory(inputs=data[:, uCols], outputs=data[:, yCols])
