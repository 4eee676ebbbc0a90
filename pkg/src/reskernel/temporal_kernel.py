"""Linear reservoir dynamics and the temporal kernel they induce.

A linear reservoir with state coupling ``W`` and input coupling ``w``
driven by a scalar signal updates as ``x(t) = W x(t-1) + w u(t)``.  Over a
finite horizon ``tau`` the driven part of the state is linear in the input
history, so inner products of states define a kernel on histories:

    K(u, v) = u^T Q v,   Q[i, j] = w^T (W^T)^(i-1) W^(j-1) w.

Histories are stored most recent first: ``values[0]`` is the current
sample, ``values[i]`` the sample ``i`` steps in the past.  ``Q`` is the
Gram matrix of the columns ``W^(i-1) w`` and is therefore symmetric
positive semidefinite with rank at most the state dimension.

The module also provides two-sided bounds on the kernel error committed by
starting the recursion from an unknown bounded initial state instead of
zero; see :func:`kernel_error_bounds`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .coupling import InputCouplingSpec, ReservoirSpec, Seed
from .errors import ContractViolation


def _as_vector(a, name: str = "vector") -> np.ndarray:
    v = np.asarray(a, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ContractViolation(f"{name} must be a non-empty 1-dimensional vector")
    if not np.all(np.isfinite(v)):
        raise ContractViolation(f"{name} contains non-finite entries")
    return v


def _check_pair(reservoir, coupling) -> tuple[np.ndarray, np.ndarray]:
    w_mat = np.asarray(reservoir, dtype=float)
    if w_mat.ndim != 2 or w_mat.shape[0] != w_mat.shape[1] or w_mat.size == 0:
        raise ContractViolation("reservoir must be a square matrix")
    if not np.all(np.isfinite(w_mat)):
        raise ContractViolation("reservoir contains non-finite entries")
    w_vec = _as_vector(coupling, "input coupling")
    if w_vec.shape[0] != w_mat.shape[0]:
        raise ContractViolation(
            f"coupling length {w_vec.shape[0]} does not match state dimension {w_mat.shape[0]}"
        )
    return w_mat, w_vec


@dataclass(frozen=True)
class TimeSeries:
    """A finite scalar history, most recent sample first."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _as_vector(self.values, "time series"))

    @property
    def horizon(self) -> int:
        return int(self.values.shape[0])


@dataclass(frozen=True)
class TensorSource:
    """Provenance of a metric tensor built through the generator pipeline."""

    reservoir: ReservoirSpec
    coupling: InputCouplingSpec
    seed: Seed


@dataclass(frozen=True)
class MetricTensor:
    """The horizon-``tau`` kernel matrix of one reservoir.

    ``matrix`` is exactly symmetric by construction.  ``source`` is optional
    provenance, attached when the tensor was built from generation recipes
    rather than raw arrays.
    """

    matrix: np.ndarray
    horizon: int
    state_dim: int
    source: TensorSource | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ContractViolation("metric tensor must be a square matrix")
        if m.shape[0] != self.horizon:
            raise ContractViolation("metric tensor shape does not match horizon")
        if not np.all(np.isfinite(m)):
            raise ContractViolation("metric tensor contains non-finite entries")
        if self.state_dim < 1:
            raise ContractViolation("state dimension must be positive")
        object.__setattr__(self, "matrix", m)


def simulate_state(reservoir, coupling, series: TimeSeries, initial_state=None) -> np.ndarray:
    """Run the state recursion over a finite history.

    The oldest sample is consumed first, so after the loop ``values[0]`` is
    the most recent input absorbed into the state.

    Parameters
    ----------
    reservoir : (N, N) array_like
    coupling : (N,) array_like
    series : TimeSeries
    initial_state : (N,) array_like, optional
        State before the first (oldest) input; defaults to zero.

    Returns
    -------
    (N,) ndarray
        ``W^tau x_init + sum_i values[i-1] W^(i-1) w``.
    """
    w_mat, w_vec = _check_pair(reservoir, coupling)
    if initial_state is None:
        x = np.zeros(w_mat.shape[0])
    else:
        x = _as_vector(initial_state, "initial state").copy()
        if x.shape[0] != w_mat.shape[0]:
            raise ContractViolation("initial state length does not match state dimension")
    for u in series.values[::-1]:
        x = w_mat @ x + u * w_vec
    return x


def feature_map(reservoir, coupling, series: TimeSeries) -> np.ndarray:
    """State reached from the zero initial state; linear in the history."""
    return simulate_state(reservoir, coupling, series, initial_state=None)


def build_metric_tensor(reservoir, coupling, horizon: int,
                        source: TensorSource | None = None) -> MetricTensor:
    """Assemble the kernel matrix for a reservoir over a given horizon.

    Columns ``W^(i-1) w`` are built by the recurrence ``col_i = W col_(i-1)``
    and the Gram matrix is symmetrized by mirroring its upper triangle, so
    the result is exactly symmetric.

    A horizon below the state dimension is legal but leaves the kernel
    blind to directions the reservoir can still reach, so it warns.
    """
    w_mat, w_vec = _check_pair(reservoir, coupling)
    if not isinstance(horizon, int) or horizon < 1:
        raise ContractViolation("horizon must be a positive integer")
    n = w_mat.shape[0]
    if horizon < n:
        warnings.warn(
            f"horizon {horizon} is below the state dimension {n}; "
            "the kernel cannot resolve the full state space",
            stacklevel=2,
        )
    phi = np.empty((n, horizon))
    col = w_vec.copy()
    phi[:, 0] = col
    for i in range(1, horizon):
        col = w_mat @ col
        phi[:, i] = col
    gram = phi.T @ phi
    upper = np.triu(gram)
    matrix = upper + np.triu(gram, 1).T
    return MetricTensor(matrix=matrix, horizon=horizon, state_dim=n, source=source)


def kernel_eval(tensor: MetricTensor, u: TimeSeries, v: TimeSeries) -> float:
    """Evaluate ``u^T Q v``.

    Averaging the two evaluation orders makes the result exactly invariant
    under swapping the arguments, not just up to rounding.
    """
    if u.horizon != tensor.horizon or v.horizon != tensor.horizon:
        raise ContractViolation(
            f"history horizons ({u.horizon}, {v.horizon}) do not match tensor horizon "
            f"{tensor.horizon}"
        )
    q = tensor.matrix
    return float(0.5 * (u.values @ (q @ v.values) + v.values @ (q @ u.values)))


def kernel_poly(tensor: MetricTensor, u: TimeSeries, v: TimeSeries,
                offset: float, degree: int) -> float:
    """Polynomial kernel ``(u^T Q v + offset)^degree`` with integer degree >= 1."""
    if not isinstance(degree, int) or degree < 1:
        raise ContractViolation("degree must be an integer >= 1")
    if not np.isfinite(offset):
        raise ContractViolation("offset must be finite")
    return float((kernel_eval(tensor, u, v) + offset) ** degree)


@dataclass(frozen=True)
class ReadoutModel:
    """Kernel readout: coefficients over support histories plus a bias."""

    supports: tuple[TimeSeries, ...]
    coefficients: np.ndarray
    bias: float = 0.0

    def __post_init__(self):
        coeffs = np.atleast_1d(np.asarray(self.coefficients, dtype=float))
        if coeffs.ndim != 1 or not np.all(np.isfinite(coeffs)):
            raise ContractViolation("coefficients must be a finite 1-dimensional vector")
        if len(self.supports) != coeffs.shape[0]:
            raise ContractViolation("one coefficient per support history is required")
        if not np.isfinite(self.bias):
            raise ContractViolation("bias must be finite")
        horizons = {s.horizon for s in self.supports}
        if len(horizons) > 1:
            raise ContractViolation("support histories must share one horizon")
        object.__setattr__(self, "supports", tuple(self.supports))
        object.__setattr__(self, "coefficients", coeffs)


def readout_eval(model: ReadoutModel, tensor: MetricTensor, v: TimeSeries) -> float:
    """Evaluate ``sum_i beta_i K(u_i, v) + bias``; no supports means the bias."""
    total = model.bias
    for beta, support in zip(model.coefficients, model.supports):
        total += beta * kernel_eval(tensor, support, v)
    return float(total)


@dataclass(frozen=True)
class BoundParams:
    """Constants entering the initial-state kernel error bounds.

    Attributes
    ----------
    signal_bound : float
        Upper bound ``U`` on the absolute value of every input sample.
    coupling_bound : float
        Upper bound ``B`` on the norm of the input coupling.
    contraction_rate : float
        Auxiliary rate ``zeta`` in (0, 1); must exceed the reservoir scale.
    state_scale : float
        Constant ``c`` sizing the admissible initial-state ball.
    horizon : int
        History length ``tau``.
    """

    signal_bound: float
    coupling_bound: float
    contraction_rate: float
    state_scale: float
    horizon: int

    def __post_init__(self):
        for name in ("signal_bound", "coupling_bound", "state_scale"):
            val = getattr(self, name)
            if not np.isfinite(val) or val <= 0.0:
                raise ContractViolation(f"{name} must be positive and finite")
        if not (0.0 < self.contraction_rate < 1.0):
            raise ContractViolation("contraction_rate must lie in (0, 1)")
        if not isinstance(self.horizon, int) or self.horizon < 1:
            raise ContractViolation("horizon must be a positive integer")


def minimal_state_scale(signal_bound: float, coupling_bound: float,
                        nu: float, contraction_rate: float) -> float:
    """Smallest admissible ``state_scale`` for the error bounds.

    Exposing this as a function lets callers sit exactly on the boundary of
    the precondition without re-deriving it, which keeps the subsequent
    ``c >= minimal`` check consistent in floating point.
    """
    if not (0.0 < nu < contraction_rate < 1.0):
        raise ContractViolation("need 0 < nu < contraction_rate < 1")
    return coupling_bound * signal_bound / ((1.0 - nu) * (1.0 - nu / contraction_rate))


def initial_state_radius(params: BoundParams) -> float:
    """Radius ``c * zeta^(-tau)`` of the admissible initial-state ball,
    capped at 1e150 to keep downstream norms representable."""
    try:
        radius = params.state_scale * params.contraction_rate ** (-params.horizon)
    except OverflowError:
        return 1e150
    return float(min(radius, 1e150))


def kernel_error_bounds(params: BoundParams, nu: float) -> tuple[float, float]:
    """Two-sided bounds on the kernel error from an unknown initial state.

    For a reservoir with largest singular value ``nu`` and any initial
    state of norm at most ``initial_state_radius(params)``, the difference
    between the kernel evaluated from that state and from the zero state
    lies in the closed interval returned here.

    Raises
    ------
    ContractViolation
        If ``contraction_rate <= nu``, or ``state_scale`` is below
        :func:`minimal_state_scale`.
    """
    if not np.isfinite(nu) or nu <= 0.0:
        raise ContractViolation("nu must be positive and finite")
    zeta = params.contraction_rate
    if zeta <= nu:
        raise ContractViolation(
            f"contraction_rate {zeta} must exceed the reservoir scale nu {nu}"
        )
    c_min = minimal_state_scale(params.signal_bound, params.coupling_bound, nu, zeta)
    if params.state_scale < c_min:
        raise ContractViolation(
            f"state_scale {params.state_scale} is below the admissible minimum {c_min}"
        )
    eta = nu / zeta
    decay = eta ** params.horizon
    drive = 2.0 * params.state_scale / (1.0 - nu) * params.coupling_bound * params.signal_bound
    lower = -decay * drive
    upper = decay * (params.state_scale ** 2 * decay + drive)
    return float(lower), float(upper)
