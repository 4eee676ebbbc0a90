"""Spectral richness of motif sets and the contraction-scale sweep.

Each retained motif is mapped through the discrete Fourier transform; the
resulting complex coefficients, tagged with normalized motif weights, form
a point cloud in the complex plane.  Coverage of a fixed grid over
``[-7, 7]^2`` measures how spectrally rich the kernel is.  Sweeping the
contraction scale ``nu`` toward 1 reveals a sharp rise of coverage for the
cycle reservoir with aperiodic sign couplings, and no such rise for dense
random reservoirs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import coupling as cp
from .errors import ContractViolation
from .motifs import MotifSet, extract_motifs
from .numerics import dft
from .temporal_kernel import TensorSource, build_metric_tensor


@dataclass(frozen=True)
class GridSpec:
    """Square occupancy grid centered at the origin.

    The default covers ``[-7, 7]`` per axis with side-0.05 cells, giving
    280 x 280 = 78400 cells.  Cells are half-open: a point exactly on an
    edge belongs to the higher-index cell.
    """

    half_width: float = 7.0
    cell_side: float = 0.05

    def __post_init__(self):
        if not (self.half_width > 0.0 and self.cell_side > 0.0):
            raise ContractViolation("grid dimensions must be positive")
        if self.cells_per_axis < 1:
            raise ContractViolation("grid must contain at least one cell per axis")

    @property
    def cells_per_axis(self) -> int:
        return int(round(2.0 * self.half_width / self.cell_side))

    @property
    def total_cells(self) -> int:
        return self.cells_per_axis**2


DEFAULT_GRID = GridSpec()


@dataclass(frozen=True)
class CoefficientCloud:
    """Fourier coefficients of retained motifs with per-point weights.

    ``points[j]`` is one DFT coefficient; ``weights[j]`` is the normalized
    weight of the motif it came from (weights sum to 1 over motifs, and
    every coefficient of a motif carries that motif's full weight).
    """

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex)
        wts = np.asarray(self.weights, dtype=float)
        if pts.ndim != 1 or wts.shape != pts.shape:
            raise ContractViolation("points and weights must be matching 1-dimensional arrays")
        if np.any(wts < 0.0):
            raise ContractViolation("point weights must be non-negative")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", wts)

    def __len__(self) -> int:
        return int(self.points.shape[0])


def coefficient_cloud(motif_set: MotifSet) -> CoefficientCloud:
    """All DFT coefficients of the retained motifs.

    A motif of length ``tau`` contributes ``tau`` points, each carrying the
    motif's weight normalized so the retained weights sum to one.  An empty
    motif set gives an empty cloud.
    """
    k = len(motif_set)
    if k == 0:
        return CoefficientCloud(points=np.empty(0, dtype=complex), weights=np.empty(0))
    share = motif_set.weights / float(np.sum(motif_set.weights))
    tau = motif_set.horizon
    points = np.empty(k * tau, dtype=complex)
    weights = np.empty(k * tau)
    for i in range(k):
        points[i * tau:(i + 1) * tau] = dft(motif_set.vectors[i])
        weights[i * tau:(i + 1) * tau] = share[i]
    return CoefficientCloud(points=points, weights=weights)


@dataclass(frozen=True)
class GridSummary:
    """Occupancy statistics of one cloud on one grid."""

    cells_visited: int
    relative_area: float
    weighted_relative_area: float
    discarded_points: int


def grid_summary(cloud: CoefficientCloud, grid: GridSpec = DEFAULT_GRID) -> GridSummary:
    """Map a cloud onto the grid once and report all occupancy measures.

    Points outside the grid are discarded (and counted).  The weighted
    measure averages point weights within each visited cell and sums the
    averages over the grid.
    """
    n_axis = grid.cells_per_axis
    if len(cloud) == 0:
        return GridSummary(0, 0.0, 0.0, 0)
    ix = np.floor((cloud.points.real + grid.half_width) / grid.cell_side).astype(np.int64)
    iy = np.floor((cloud.points.imag + grid.half_width) / grid.cell_side).astype(np.int64)
    inside = (ix >= 0) & (ix < n_axis) & (iy >= 0) & (iy < n_axis)
    discarded = int(np.sum(~inside))
    if not np.any(inside):
        return GridSummary(0, 0.0, 0.0, discarded)
    keys = ix[inside] * n_axis + iy[inside]
    unique_keys, inverse = np.unique(keys, return_inverse=True)
    sums = np.bincount(inverse, weights=cloud.weights[inside])
    counts = np.bincount(inverse)
    total = float(grid.total_cells)
    return GridSummary(
        cells_visited=int(unique_keys.shape[0]),
        relative_area=unique_keys.shape[0] / total,
        weighted_relative_area=float(np.sum(sums / counts)) / total,
        discarded_points=discarded,
    )


def relative_area(cloud: CoefficientCloud, grid: GridSpec = DEFAULT_GRID) -> float:
    """Fraction of grid cells visited by at least one coefficient."""
    return grid_summary(cloud, grid).relative_area


def weighted_relative_area(cloud: CoefficientCloud, grid: GridSpec = DEFAULT_GRID) -> float:
    """Coverage with visited cells weighted by their mean point weight."""
    return grid_summary(cloud, grid).weighted_relative_area


def default_nu_grid() -> tuple[float, ...]:
    """The sweep grid: 0.90 to 1.00 in steps of 0.005, with the reference
    points 0.96, 0.99, 0.996 and 1.0 always present."""
    values = {round(0.90 + 0.005 * k, 6) for k in range(21)}
    values.update((0.96, 0.99, 0.996, 1.0))
    return tuple(sorted(values))


@dataclass(frozen=True)
class SweepConfig:
    """Configuration of one richness sweep.

    ``trials`` of ``None`` selects the repeat count per configuration
    automatically: 1 when both reservoir and coupling are deterministic,
    30 when exactly one of them is random, 60 when both are.
    ``horizon`` of ``None`` means twice the state dimension.
    """

    nu_values: tuple[float, ...] = field(default_factory=default_nu_grid)
    regimes: tuple[str, ...] = (cp.CYCLE_PERMUTATION, cp.RANDOM_IID)
    input_kinds: tuple[str, ...] = ("ones_pi_signs",)
    state_dim: int = 100
    horizon: int | None = None
    period: int | None = None
    threshold_ratio: float = 1e-2
    trials: int | None = None
    base_seed: int = 0
    distribution: str = cp.GAUSSIAN
    normalize_unit: bool = True

    def __post_init__(self):
        if len(self.nu_values) == 0:
            raise ContractViolation("nu grid must not be empty")
        for nu in self.nu_values:
            if not (0.0 < nu <= 1.0):
                raise ContractViolation(f"nu value {nu} outside (0, 1]")
        if self.trials is not None and self.trials < 1:
            raise ContractViolation("trials must be positive when given")
        if not isinstance(self.state_dim, int) or self.state_dim < 1:
            raise ContractViolation("state_dim must be a positive integer")
        if self.horizon is not None and (not isinstance(self.horizon, int)
                                         or self.horizon < 1):
            raise ContractViolation("horizon must be a positive integer when given")
        for regime in self.regimes:
            if regime not in cp.RESERVOIR_REGIMES:
                raise ContractViolation(f"unknown regime {regime!r}")
        for kind in self.input_kinds:
            if kind not in cp.INPUT_KINDS:
                raise ContractViolation(f"unknown input kind {kind!r}")


@dataclass(frozen=True)
class RichnessReport:
    """One sweep row: occupancy measures of a single trial."""

    nu: float
    regime: str
    input_kind: str
    trial: int
    n_motifs: int
    cells_visited: int
    relative_area: float
    weighted_relative_area: float
    discarded_points: int
    seed: int


_RANDOM_INPUT_KINDS = ("gaussian", "uniform", "ones_random_signs")


def trial_count(regime: str, input_kind: str, override: int | None = None) -> int:
    """Repeats for one configuration: 1, 30, or 60 by number of random
    sources, unless overridden."""
    if override is not None:
        return override
    sources = int(regime != cp.CYCLE_PERMUTATION) + int(input_kind in _RANDOM_INPUT_KINDS)
    return {0: 1, 1: 30, 2: 60}[sources]


def sweep(config: SweepConfig, grid: GridSpec = DEFAULT_GRID) -> list[RichnessReport]:
    """Run the richness sweep and return reports in canonical order.

    For every grid value of ``nu``, regime, and input kind the configured
    number of trials is run; trial ``t`` at the ``i``-th grid value uses
    the derived seed ``mix_seed(base_seed, i, t)``.  Reports are sorted by
    (nu, regime, input_kind, trial).
    """
    nu_values = tuple(sorted(set(config.nu_values)))
    horizon = config.horizon if config.horizon is not None else 2 * config.state_dim
    reports: list[RichnessReport] = []
    for nu_index, nu in enumerate(nu_values):
        for regime in config.regimes:
            for kind in config.input_kinds:
                n_trials = trial_count(regime, kind, config.trials)
                for trial in range(n_trials):
                    seed = cp.mix_seed(config.base_seed, nu_index, trial)
                    res_spec = cp.ReservoirSpec(
                        regime=regime, size=config.state_dim, nu=nu,
                        distribution=config.distribution,
                    )
                    in_spec = cp.InputCouplingSpec(
                        kind=kind, size=config.state_dim,
                        period=config.period if kind.startswith("periodic") else None,
                        normalize_unit=config.normalize_unit,
                    )
                    reservoir = cp.generate_reservoir(res_spec, seed)
                    coupling_vec = cp.generate_input(in_spec, seed)
                    tensor = build_metric_tensor(
                        reservoir, coupling_vec, horizon,
                        source=TensorSource(res_spec, in_spec, seed),
                    )
                    motif_set = extract_motifs(tensor, config.threshold_ratio)
                    summary = grid_summary(coefficient_cloud(motif_set), grid)
                    reports.append(RichnessReport(
                        nu=nu,
                        regime=regime,
                        input_kind=kind,
                        trial=trial,
                        n_motifs=len(motif_set),
                        cells_visited=summary.cells_visited,
                        relative_area=summary.relative_area,
                        weighted_relative_area=summary.weighted_relative_area,
                        discarded_points=summary.discarded_points,
                        seed=seed.base,
                    ))
    reports.sort(key=lambda r: (r.nu, r.regime, r.input_kind, r.trial))
    return reports
