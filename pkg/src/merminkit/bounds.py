"""Bell-Mermin operator expectations over dichotomic settings and their maxima.

Observables are parameterized by real unit 3-vectors in the Pauli basis
(X = x1 s1 + x2 s2 + x3 s3), which makes them Hermitian and unitary at once.
This module is deliberately dense-matrix based so that it forms a route
independent of the symbolic algebra in :mod:`merminkit.pauli`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.optimize import minimize

from .states import StateVector, dicke, ghz

TOL_UNIT = 1e-10
DEFAULT_SEED = 0x4D45524D

_PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

BOUND_STATE_IDS = ("u3", "u4", "v31", "v41", "v42")

# exact optimum of |mu| over all settings, per catalog state
EXACT_BOUNDS = {
    "u3": 4.0,
    "u4": 8.0,
    "v31": math.sqrt(738.0 * math.sqrt(41.0) - 3974.0) / 9.0,
    "v41": 4.5,
    "v42": 6.0,
}

# optimal |x3|, |y3| for the W state; signs form the orbit (s*a, t*b)
W_OPT_X3 = math.sqrt(3.0 * math.sqrt(41.0) - 13.0) / (3.0 * math.sqrt(2.0))
W_OPT_Y3 = math.sqrt(5.0 * math.sqrt(41.0) - 27.0) / math.sqrt(6.0)


def bound_state(state_id: str) -> StateVector:
    if state_id == "u3":
        return ghz(3)
    if state_id == "u4":
        return ghz(4)
    if state_id == "v31":
        return dicke(3, 1)
    if state_id == "v41":
        return dicke(4, 1)
    if state_id == "v42":
        return dicke(4, 2)
    raise ValueError(
        f"unknown state id {state_id!r}; expected one of {BOUND_STATE_IDS}"
    )


def _as_unit_rows(vectors, n: int, label: str) -> np.ndarray:
    arr = np.asarray(vectors, dtype=float)
    if arr.shape != (n, 3):
        raise ValueError(f"{label} must have shape ({n}, 3), got {arr.shape}")
    norms = np.linalg.norm(arr, axis=1)
    if np.any(np.abs(norms - 1.0) > TOL_UNIT):
        raise ValueError(f"{label} rows must be unit vectors, got norms {norms}")
    return arr


@dataclass(frozen=True, eq=False)
class MeasurementSetting:
    """Per-qubit unit 3-vectors defining the dichotomic observables X_a, Y_a."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        n = np.asarray(self.x).shape[0]
        object.__setattr__(self, "x", _as_unit_rows(self.x, n, "x"))
        object.__setattr__(self, "y", _as_unit_rows(self.y, n, "y"))

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @classmethod
    def uniform(cls, n: int, x, y) -> "MeasurementSetting":
        """One (x, y) pair shared by all qubits."""
        return cls(np.tile(np.asarray(x, dtype=float), (n, 1)),
                   np.tile(np.asarray(y, dtype=float), (n, 1)))

    @classmethod
    def pauli12(cls, n: int) -> "MeasurementSetting":
        """The restricted setting X_a = s1, Y_a = s2."""
        return cls.uniform(n, (1.0, 0.0, 0.0), (0.0, 1.0, 0.0))

    def to_json_dict(self) -> dict:
        return {"x": self.x.tolist(), "y": self.y.tolist()}


def observable(vector) -> np.ndarray:
    """2x2 Hermitian-unitary matrix sum(v_j s_j) for a unit 3-vector."""
    v = np.asarray(vector, dtype=float)
    return np.tensordot(v, _PAULI, axes=(0, 0))


def mermin_terms(n: int) -> list[tuple[int, tuple[int, ...]]]:
    """Signed X/Y patterns of the degree-n operator (0 -> X, 1 -> Y).

    Patterns use an even number of Y slots; the sign is +1 when that number
    is divisible by four and -1 otherwise.
    """
    if n not in (3, 4):
        raise ValueError(f"unsupported qubit count {n}; expected 3 or 4")
    terms = []
    for pattern in product((0, 1), repeat=n):
        ys = sum(pattern)
        if ys % 2 == 0:
            terms.append((1 if ys % 4 == 0 else -1, pattern))
    return terms


def mermin_operator(n: int, setting: MeasurementSetting) -> np.ndarray:
    """Dense 2^n x 2^n matrix of the signed sum of X/Y tensor words."""
    if setting.n != n:
        raise ValueError(f"setting is for {setting.n} qubits, expected {n}")
    xs = [observable(setting.x[a]) for a in range(n)]
    ys = [observable(setting.y[a]) for a in range(n)]
    total = np.zeros((1 << n, 1 << n), dtype=complex)
    for sign, pattern in mermin_terms(n):
        term = np.eye(1, dtype=complex)
        for a, which in enumerate(pattern):
            term = np.kron(term, ys[a] if which else xs[a])
        total += sign * term
    return total


def expectation(v: StateVector, setting: MeasurementSetting) -> float:
    """Normalized expectation <v, M v> / <v, v>; real for Hermitian M."""
    if v.norm_sq == 0:
        raise ValueError("state is identically zero")
    m = mermin_operator(v.n, setting)
    value = complex(np.vdot(v.amps, m @ v.amps)) / v.norm_sq
    if abs(value.imag) > 1e-9:
        raise ValueError(f"expectation {value} is not real")
    return float(value.real)


# -- fast evaluation used by the optimizer -------------------------------------

_EINSUM_SUBS = {3: "abc,a,b,c->", 4: "abcd,a,b,c,d->"}


def _pauli_expectation_tensor(v: StateVector) -> np.ndarray:
    """Tensor T[j1..jn] = <v, s_{j1..jn} v> / <v, v> over letters 1..3.

    The expectation of any X/Y tensor word is multilinear in the per-qubit
    3-vectors, and the whole signed sum contracts against z_a = x_a + i y_a:
    mu = Re T[j1..jn] z_{1,j1} ... z_{n,jn}.
    """
    n = v.n
    norm = v.norm_sq
    tensor = np.empty((3,) * n, dtype=float)
    for letters in product(range(3), repeat=n):
        word = np.eye(1, dtype=complex)
        for j in letters:
            word = np.kron(word, _PAULI[j])
        value = complex(np.vdot(v.amps, word @ v.amps)) / norm
        tensor[letters] = value.real
    return tensor


def _angles_to_vector(theta: float, phi: float) -> np.ndarray:
    s = math.sin(theta)
    return np.array([s * math.cos(phi), s * math.sin(phi), math.cos(theta)])


def _setting_from_angles(angles: np.ndarray, n: int, mode: str) -> MeasurementSetting:
    if mode == "uniform":
        x = _angles_to_vector(angles[0], angles[1])
        y = _angles_to_vector(angles[2], angles[3])
        return MeasurementSetting.uniform(n, x, y)
    xs = [_angles_to_vector(angles[4 * a], angles[4 * a + 1]) for a in range(n)]
    ys = [_angles_to_vector(angles[4 * a + 2], angles[4 * a + 3]) for a in range(n)]
    return MeasurementSetting(np.array(xs), np.array(ys))


def _mu_of_angles(tensor: np.ndarray, angles: np.ndarray, n: int, mode: str) -> float:
    zs = []
    if mode == "uniform":
        z = (_angles_to_vector(angles[0], angles[1])
             + 1j * _angles_to_vector(angles[2], angles[3]))
        zs = [z] * n
    else:
        for a in range(n):
            zs.append(_angles_to_vector(angles[4 * a], angles[4 * a + 1])
                      + 1j * _angles_to_vector(angles[4 * a + 2], angles[4 * a + 3]))
    return float(np.real(np.einsum(_EINSUM_SUBS[n], tensor, *zs)))


@dataclass
class BoundResult:
    """Outcome of a maximization run over measurement settings."""

    value: float
    setting: MeasurementSetting
    target: float | None = None

    @property
    def gap(self) -> float | None:
        return None if self.target is None else abs(self.value - self.target)


def maximize(
    v: StateVector,
    mode: str = "general",
    seed: int = DEFAULT_SEED,
    starts: int = 64,
    target: float | None = None,
) -> BoundResult:
    """Largest |mu| over settings via seeded multi-start local optimization.

    Unit vectors are parameterized by spherical angles so the search is
    unconstrained; both mu and -mu are maximized and the larger wins.  The
    run is deterministic for a fixed seed; ties keep the earliest start.
    """
    if mode not in ("uniform", "general"):
        raise ValueError(f"unknown mode {mode!r}")
    n = v.n
    if n not in (3, 4):
        raise ValueError(f"unsupported qubit count {n}; expected 3 or 4")
    tensor = _pauli_expectation_tensor(v)
    dim = 4 if mode == "uniform" else 4 * n
    rng = np.random.default_rng(seed)
    raw = rng.random((2, starts, dim))
    start_angles = np.empty_like(raw)
    start_angles[..., 0::2] = np.arccos(2.0 * raw[..., 0::2] - 1.0)
    start_angles[..., 1::2] = 2.0 * math.pi * raw[..., 1::2]

    best_value = -math.inf
    best_angles = None
    for branch, sign in enumerate((1.0, -1.0)):

        def objective(angles):
            return -sign * _mu_of_angles(tensor, angles, n, mode)

        coarse = []
        for x0 in start_angles[branch]:
            res = minimize(
                objective, x0, method="Powell",
                options={"maxiter": 4, "xtol": 1e-6, "ftol": 1e-9},
            )
            coarse.append(res)
        coarse.sort(key=lambda r: r.fun)
        for res in coarse[:4]:
            polished = minimize(
                objective, res.x, method="Powell",
                options={"maxiter": 400, "xtol": 1e-12, "ftol": 1e-15},
            )
            if -polished.fun > best_value:
                best_value = -polished.fun
                best_angles = polished.x.copy()

    setting = _setting_from_angles(best_angles, n, mode)
    # report the dense-matrix value at the winning setting
    value = abs(expectation(v, setting))
    return BoundResult(value=value, setting=setting, target=target)


# -- closed forms for the uniform-setting Dicke expectations -------------------


def _mu_poly(state_id: str, x3: float, y3: float, d: float) -> float:
    """Shared polynomial in (x3, y3, d) with d = x1 y1 + x2 y2."""
    if state_id == "v31":
        return -3.0 * x3**3 + 5.0 * x3 * y3**2 - 4.0 * d * y3
    if state_id == "v41":
        return -4.0 * (x3**4 + y3**4) + 12.0 * x3**2 * y3**2 - 12.0 * d * x3 * y3
    if state_id == "v42":
        return (6.0 * (x3**4 + y3**4) - 16.0 * x3**2 * y3**2
                - 4.0 * d**2 + 16.0 * d * x3 * y3)
    raise ValueError(f"no closed form for state {state_id!r}")


def restricted_mu(state_id: str, x, y) -> float:
    """Closed-form expectation for identical X, Y on every qubit."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    for label, vec in (("x", x), ("y", y)):
        if vec.shape != (3,):
            raise ValueError(f"{label} must be a 3-vector")
        if abs(np.linalg.norm(vec) - 1.0) > TOL_UNIT:
            raise ValueError(f"{label} must be a unit vector")
    d = float(x[0] * y[0] + x[1] * y[1])
    return _mu_poly(state_id, float(x[2]), float(y[2]), d)


def collinear_mu(state_id: str, sign: int, x3: float, y3: float) -> float:
    """Expectation with the in-plane projections of x and y collinear.

    The substitution d = sign * sqrt(1-x3^2) sqrt(1-y3^2) reduces the closed
    form to a two-variable landscape on [-1, 1]^2.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if abs(x3) > 1 or abs(y3) > 1:
        raise ValueError("x3 and y3 must lie in [-1, 1]")
    d = sign * math.sqrt(1.0 - x3 * x3) * math.sqrt(1.0 - y3 * y3)
    return _mu_poly(state_id, x3, y3, d)


@dataclass
class ContourGrid:
    """Samples of the collinear landscape on a uniform square grid."""

    state_id: str
    sign: int
    resolution: int
    values: np.ndarray  # row-major, rows indexed by x3

    @property
    def axis(self) -> np.ndarray:
        r = self.resolution
        return (2.0 * np.arange(r) - (r - 1)) / (r - 1)


def contour(state_id: str, sign: int, resolution: int) -> ContourGrid:
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    axis = (2.0 * np.arange(resolution) - (resolution - 1)) / (resolution - 1)
    values = np.empty((resolution, resolution), dtype=float)
    for i, x3 in enumerate(axis):
        for j, y3 in enumerate(axis):
            values[i, j] = collinear_mu(state_id, sign, x3, y3)
    return ContourGrid(state_id=state_id, sign=sign, resolution=resolution,
                       values=values)


def contour_csv_lines(grid: ContourGrid) -> list[str]:
    """CSV rows ``x3,y3,mu`` at 6 significant digits, plus the header."""
    lines = ["x3,y3,mu"]
    axis = grid.axis
    for i, x3 in enumerate(axis):
        for j, y3 in enumerate(axis):
            lines.append(f"{x3:.6g},{y3:.6g},{grid.values[i, j]:.6g}")
    return lines
