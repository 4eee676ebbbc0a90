"""Temporal motifs: spectral decomposition of the kernel matrix.

The eigenvectors of a metric tensor are time-domain patterns (motifs) and
the square roots of its eigenvalues are their weights; together they give
an explicit finite feature expansion of the kernel.  This module extracts
motifs from a tensor, produces closed-form predictions for the structured
reservoir regimes, and compares empirical against predicted sets.

Predictions come in two flavors.  For the dense random and cycle regimes
the predicted vectors are eigenvector claims and can be compared index by
index.  For symmetric reservoirs the natural decomposition is a sum of
rank-one kernels, one per reservoir eigenvalue; those component patterns
are not mutually orthogonal and therefore are not eigenvectors of the
tensor.  :func:`compare_motifs` refuses such predictions rather than
produce a meaningless score.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coupling import CYCLE_PERMUTATION, RANDOM_IID, SYMMETRIC_WIGNER
from .errors import ContractViolation, PsdViolationError
from .numerics import sym_eig
from .temporal_kernel import MetricTensor, TimeSeries

# Negative eigenvalues within this relative band of the top eigenvalue are
# treated as rounding noise and clamped to zero.
CLAMP_RTOL = 1e-9

# Relative eigenvalue gap under which predicted motifs count as degenerate
# and are compared as subspaces.
DEGENERACY_RTOL = 1e-8

_UNIT_NORM_TOL = 1e-9
_GRAM_TOL = 1e-8


def _clamp_spectrum(values: np.ndarray, what: str) -> np.ndarray:
    top = float(values[0]) if values.size else 0.0
    floor = -CLAMP_RTOL * max(top, 0.0)
    worst = float(values[-1]) if values.size else 0.0
    if worst < floor:
        raise PsdViolationError(f"{what} is not positive semidefinite", worst, floor)
    return np.where(values < 0.0, 0.0, values)


@dataclass(frozen=True)
class MotifSet:
    """Retained motifs of one metric tensor.

    Attributes
    ----------
    vectors : (k, tau) ndarray
        Row ``i`` is the i-th motif, unit norm, mutually orthonormal.
    weights : (k,) ndarray
        Positive, descending; ``weights[i]**2`` is the i-th eigenvalue.
    spectrum : (tau,) ndarray
        The full clamped eigenvalue list, including discarded tail.
    threshold_ratio : float
        Retention cut that produced this set: motifs with weight below
        ``threshold_ratio * weights[0]`` were dropped.
    horizon : int
    state_dim : int or None
        State dimension of the generating reservoir when known.
    """

    vectors: np.ndarray
    weights: np.ndarray
    spectrum: np.ndarray
    threshold_ratio: float
    horizon: int
    state_dim: int | None = None

    def __post_init__(self):
        vec = np.asarray(self.vectors, dtype=float)
        wts = np.asarray(self.weights, dtype=float)
        spec = np.asarray(self.spectrum, dtype=float)
        if vec.ndim != 2:
            raise ContractViolation("motif vectors must form a 2-dimensional array")
        if wts.ndim != 1 or wts.shape[0] != vec.shape[0]:
            raise ContractViolation("one weight per motif is required")
        if not (0.0 < self.threshold_ratio <= 1.0):
            raise ContractViolation("threshold_ratio must lie in (0, 1]")
        if vec.shape[0] > 0 and vec.shape[1] != self.horizon:
            raise ContractViolation("motif length does not match horizon")
        if spec.shape != (self.horizon,):
            raise ContractViolation("spectrum must list one eigenvalue per horizon step")
        if np.any(np.diff(spec) > 0.0) or np.any(spec < 0.0):
            raise ContractViolation("spectrum must be non-negative and descending")
        if wts.size:
            if np.any(wts <= 0.0) or np.any(np.diff(wts) > 0.0):
                raise ContractViolation("weights must be positive and descending")
            norms = np.linalg.norm(vec, axis=1)
            if np.max(np.abs(norms - 1.0)) > _UNIT_NORM_TOL:
                raise ContractViolation("motifs must have unit norm")
            gram = vec @ vec.T
            if np.max(np.abs(gram - np.eye(vec.shape[0]))) > _GRAM_TOL:
                raise ContractViolation("motifs must be mutually orthonormal")
        object.__setattr__(self, "vectors", vec)
        object.__setattr__(self, "weights", wts)
        object.__setattr__(self, "spectrum", spec)

    def __len__(self) -> int:
        return int(self.weights.shape[0])


def extract_motifs(tensor: MetricTensor, threshold_ratio: float = 1e-2) -> MotifSet:
    """Decompose a metric tensor into weighted motifs.

    Eigenvalues in ``[-1e-9 * max, 0)`` are clamped to zero; anything more
    negative raises :class:`PsdViolationError`.  Motifs with weight below
    ``threshold_ratio`` times the top weight are dropped.  An all-zero
    tensor yields an empty motif set, which is a meaningful signal (the
    kernel is identically zero), not an error.
    """
    if not (0.0 < threshold_ratio <= 1.0):
        raise ContractViolation("threshold_ratio must lie in (0, 1]")
    eig = sym_eig(tensor.matrix)
    clamped = _clamp_spectrum(eig.eigenvalues, "metric tensor")
    omega = np.sqrt(clamped)
    if omega[0] == 0.0:
        return MotifSet(
            vectors=np.empty((0, tensor.horizon)),
            weights=np.empty(0),
            spectrum=clamped,
            threshold_ratio=threshold_ratio,
            horizon=tensor.horizon,
            state_dim=tensor.state_dim,
        )
    count = int(np.sum(omega >= threshold_ratio * omega[0]))
    return MotifSet(
        vectors=eig.eigenvectors[:, :count].T,
        weights=omega[:count],
        spectrum=clamped,
        threshold_ratio=threshold_ratio,
        horizon=tensor.horizon,
        state_dim=tensor.state_dim,
    )


def represent(motif_set: MotifSet, series: TimeSeries) -> np.ndarray:
    """Coordinates of a history in the retained motif basis.

    Entry ``i`` is ``weights[i] * <motif_i, series>``; inner products of
    these representation vectors reproduce the kernel up to the truncation
    committed by the retention threshold.
    """
    if len(motif_set) and series.horizon != motif_set.horizon:
        raise ContractViolation(
            f"history horizon {series.horizon} does not match motif horizon {motif_set.horizon}"
        )
    if not len(motif_set):
        return np.empty(0)
    return motif_set.weights * (motif_set.vectors @ series.values)


@dataclass(frozen=True)
class MotifPrediction:
    """Closed-form motif claim for one reservoir regime.

    ``orthonormal`` distinguishes eigenvector claims (random and cycle
    regimes) from non-orthogonal component decompositions (symmetric
    regime).  ``extras`` carries regime-specific artifacts such as the
    core block vectors or a reconstructed tensor.
    """

    regime: str
    vectors: np.ndarray
    weights: np.ndarray
    horizon: int
    orthonormal: bool
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        vec = np.asarray(self.vectors, dtype=float)
        wts = np.asarray(self.weights, dtype=float)
        if vec.ndim != 2 or vec.shape[1] != self.horizon:
            raise ContractViolation("predicted vectors must be rows of length horizon")
        if wts.shape != (vec.shape[0],):
            raise ContractViolation("one weight per predicted vector is required")
        if np.any(wts < 0.0) or np.any(np.diff(wts) > 0.0):
            raise ContractViolation("predicted weights must be non-negative and descending")
        object.__setattr__(self, "vectors", vec)
        object.__setattr__(self, "weights", wts)

    def __len__(self) -> int:
        return int(self.weights.shape[0])


def predict_random(state_dim: int, nu: float, coupling_norm: float,
                   horizon: int) -> MotifPrediction:
    """Markovian prediction for dense i.i.d. reservoirs.

    Rescaling a large i.i.d. matrix to largest singular value ``nu`` leaves
    it with spectral radius about ``nu / 2``, so repeated application
    shrinks the coupling by that factor per step and the tensor is close to
    diagonal: motif ``i`` is the ``i``-th standard basis vector (memory of
    the lone sample ``i`` steps back) with weight
    ``coupling_norm * (nu / 2)**(i - 1)``.
    """
    if not isinstance(state_dim, int) or state_dim < 1:
        raise ContractViolation("state_dim must be a positive integer")
    if not isinstance(horizon, int) or horizon < 1:
        raise ContractViolation("horizon must be a positive integer")
    if not np.isfinite(nu) or not (0.0 < nu <= 1.0):
        raise ContractViolation("nu must lie in (0, 1]")
    if not np.isfinite(coupling_norm) or coupling_norm <= 0.0:
        raise ContractViolation("coupling_norm must be positive")
    count = min(state_dim, horizon)
    vectors = np.eye(horizon)[:count]
    weights = coupling_norm * (nu / 2.0) ** np.arange(count)
    return MotifPrediction(
        regime=RANDOM_IID,
        vectors=vectors,
        weights=weights,
        horizon=horizon,
        orthonormal=True,
        extras={"decay_ratio": nu / 2.0},
    )


def predict_symmetric(reservoir, coupling, horizon: int) -> MotifPrediction:
    """Component decomposition for symmetric reservoirs.

    Each reservoir eigenpair ``(sigma_a, s_a)`` contributes the geometric
    pattern ``(1, sigma_a, sigma_a^2, ...)`` with magnitude
    ``<s_a, w>^2 * ||pattern||^2``; negative ``sigma_a`` gives an
    alternating-sign pattern.  The sum of these rank-one kernels equals the
    metric tensor exactly, but the patterns are not mutually orthogonal, so
    they must not be read as eigenvector predictions.
    """
    if not isinstance(horizon, int) or horizon < 1:
        raise ContractViolation("horizon must be a positive integer")
    eig = sym_eig(reservoir)
    w_vec = np.asarray(coupling, dtype=float)
    if w_vec.ndim != 1 or w_vec.shape[0] != eig.eigenvectors.shape[0]:
        raise ContractViolation("coupling length does not match reservoir dimension")
    projections = eig.eigenvectors.T @ w_vec
    # Row a holds sigma_a^0 .. sigma_a^(horizon-1); 0**0 evaluates to 1.
    with np.errstate(over="raise"):
        try:
            patterns = eig.eigenvalues[:, None] ** np.arange(horizon)[None, :]
        except FloatingPointError:
            raise ContractViolation(
                "reservoir spectral radius too large for this horizon") from None
    if not np.all(np.isfinite(patterns)):
        raise ContractViolation("reservoir spectral radius too large for this horizon")
    sq_norms = np.sum(patterns**2, axis=1)
    weights = projections**2 * sq_norms
    order = np.argsort(-weights, kind="stable")
    scaled = projections[:, None] * patterns
    recon = scaled.T @ scaled
    recon = np.triu(recon) + np.triu(recon, 1).T
    return MotifPrediction(
        regime=SYMMETRIC_WIGNER,
        vectors=(patterns / np.sqrt(sq_norms)[:, None])[order],
        weights=weights[order],
        horizon=horizon,
        orthonormal=False,
        extras={
            "component_rates": eig.eigenvalues[order],
            "component_projections": projections[order],
            "reconstruction": recon,
        },
    )


def _cycle_shift_products(vec: np.ndarray) -> np.ndarray:
    """Autocorrelations ``<v, P^m v>`` of a vector under the cycle shift.

    The table is mirrored (``table[m] == table[n - m]`` bit-exactly) so
    matrices indexed with it come out exactly symmetric.
    """
    n = vec.shape[0]
    table = np.empty(n)
    for m in range(n // 2 + 1):
        table[m] = float(np.dot(vec, np.roll(vec, m)))
    for m in range(n // 2 + 1, n):
        table[m] = table[n - m]
    return table


def _assemble_blocks(core: np.ndarray, nu: float, n_blocks: int) -> np.ndarray:
    """Stack geometrically damped copies of core columns and normalize.

    Returns rows of length ``core rows * n_blocks``.
    """
    p = core.shape[0]
    out = np.empty((n_blocks * p, core.shape[1]))
    for b in range(n_blocks):
        out[b * p:(b + 1) * p, :] = core * nu ** (b * p)
    out /= np.linalg.norm(out, axis=0)[None, :]
    return out.T


def predict_cycle(state_dim: int, nu: float, coupling, copies: int) -> MotifPrediction:
    """Exact motifs for the scaled cycle reservoir at horizon ``copies * N``.

    The horizon-``N`` tensor ``R[i, j] = nu^(i+j-2) <w, P^(j-i) w>`` is
    diagonalized and each of its eigenvectors is tiled ``copies`` times
    with damping ``nu^N`` per tile.  The tiled vectors are exact
    eigenvectors of the full tensor with eigenvalues scaled by
    ``(1 - nu^(2 tau)) / (1 - nu^(2 N))``.
    """
    if not isinstance(copies, int) or copies < 1:
        raise ContractViolation("copies must be an integer >= 1")
    if not np.isfinite(nu) or not (0.0 < nu <= 1.0):
        raise ContractViolation("nu must lie in (0, 1]")
    w_vec = np.asarray(coupling, dtype=float)
    if w_vec.ndim != 1 or w_vec.shape[0] != state_dim:
        raise ContractViolation("coupling length does not match state_dim")
    n = state_dim
    tau = copies * n
    damp = nu ** np.arange(n)
    table = _cycle_shift_products(w_vec)
    shift = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    core_tensor = np.outer(damp, damp) * table[shift]
    eig = sym_eig(core_tensor)
    core_values = _clamp_spectrum(eig.eigenvalues, "cycle core tensor")
    factor = float(copies) if nu == 1.0 else (1.0 - nu ** (2 * tau)) / (1.0 - nu ** (2 * n))
    return MotifPrediction(
        regime=CYCLE_PERMUTATION,
        vectors=_assemble_blocks(eig.eigenvectors, nu, copies),
        weights=np.sqrt(core_values * factor),
        horizon=tau,
        orthonormal=True,
        extras={
            "core_eigenvalues": core_values,
            "core_vectors": eig.eigenvectors.T,
            "eigenvalue_factor": factor,
        },
    )


def predict_cycle_periodic(state_dim: int, nu: float, block, copies: int) -> MotifPrediction:
    """Exact motifs for the cycle reservoir with a periodic coupling.

    A coupling made of ``k = state_dim / p`` copies of a block of length
    ``p`` collapses the spectrum to at most ``p`` distinct motifs.  The
    block tensor ``T[i, j] = nu^(i+j-2) <s, Pbar^|j-i| s>`` (``Pbar`` the
    length-``p`` cycle) is diagonalized; its eigenvectors tile with damping
    ``nu^p`` per tile, and its eigenvalues carry the factor
    ``k * (1 - nu^(2 tau)) / (1 - nu^(2 p))``.  The multiplicity ``k``
    belongs in that factor; for a unit-normalized coupling it cancels
    against the block normalization.
    """
    if not isinstance(copies, int) or copies < 1:
        raise ContractViolation("copies must be an integer >= 1")
    if not np.isfinite(nu) or not (0.0 < nu <= 1.0):
        raise ContractViolation("nu must lie in (0, 1]")
    s_vec = np.asarray(block, dtype=float)
    if s_vec.ndim != 1 or s_vec.size == 0:
        raise ContractViolation("block must be a non-empty vector")
    p = s_vec.shape[0]
    if not isinstance(state_dim, int) or state_dim < 1:
        raise ContractViolation("state_dim must be a positive integer")
    if state_dim % p != 0:
        raise ContractViolation(f"block length {p} does not divide state_dim {state_dim}")
    k = state_dim // p
    tau = copies * state_dim
    n_blocks = tau // p
    damp = nu ** np.arange(p)
    table = _cycle_shift_products(s_vec)
    gap = np.abs(np.arange(p)[None, :] - np.arange(p)[:, None])
    block_tensor = np.outer(damp, damp) * table[gap]
    eig = sym_eig(block_tensor)
    block_values = _clamp_spectrum(eig.eigenvalues, "periodic block tensor")
    factor = float(n_blocks) if nu == 1.0 else (1.0 - nu ** (2 * tau)) / (1.0 - nu ** (2 * p))
    return MotifPrediction(
        regime=CYCLE_PERMUTATION,
        vectors=_assemble_blocks(eig.eigenvectors, nu, n_blocks),
        weights=np.sqrt(k * block_values * factor),
        horizon=tau,
        orthonormal=True,
        extras={
            "block_eigenvalues": block_values,
            "block_vectors": eig.eigenvectors.T,
            "copies_per_coupling": k,
            "eigenvalue_factor": factor,
        },
    )


@dataclass(frozen=True)
class MotifComparison:
    """Index-by-index agreement between empirical and predicted motifs.

    ``alignments[i]`` is the absolute inner product between empirical and
    predicted motif ``i``; inside a degenerate cluster it is the matching
    cosine of the principal angles between the two spanned subspaces.
    ``cluster_ids`` labels the degenerate groups.
    """

    alignments: np.ndarray
    weight_rel_errors: np.ndarray
    cluster_ids: np.ndarray
    min_alignment: float
    max_weight_rel_error: float
    n_compared: int


def compare_motifs(empirical: MotifSet, predicted: MotifPrediction) -> MotifComparison:
    """Compare retained empirical motifs against an eigenvector prediction.

    Predictions flagged non-orthonormal (symmetric-regime components) are
    rejected: their vectors are not eigenvector claims, so per-index
    alignment would be meaningless.  Predicted eigenvalues within relative
    gap ``DEGENERACY_RTOL`` of each other are handled as one subspace via
    principal angles.
    """
    if not predicted.orthonormal:
        raise ContractViolation(
            "prediction holds non-orthogonal components, not eigenvectors; "
            "per-index comparison is undefined"
        )
    if len(empirical) and empirical.horizon != predicted.horizon:
        raise ContractViolation("empirical and predicted horizons differ")
    n = min(len(empirical), len(predicted))
    if n == 0:
        raise ContractViolation("nothing to compare: one of the motif sets is empty")

    pred_values = predicted.weights[:n] ** 2
    cluster_ids = np.zeros(n, dtype=np.int64)
    for i in range(1, n):
        gap = pred_values[i - 1] - pred_values[i]
        if gap > DEGENERACY_RTOL * pred_values[i - 1]:
            cluster_ids[i] = cluster_ids[i - 1] + 1
        else:
            cluster_ids[i] = cluster_ids[i - 1]

    alignments = np.empty(n)
    for cid in range(int(cluster_ids[-1]) + 1):
        idx = np.nonzero(cluster_ids == cid)[0]
        cross = empirical.vectors[idx] @ predicted.vectors[idx].T
        # Singular values of the cross-Gram are the cosines of the principal
        # angles; svd returns them descending, matching the index order.
        alignments[idx] = np.linalg.svd(cross, compute_uv=False)
    alignments = np.minimum(alignments, 1.0)

    emp_w = empirical.weights[:n]
    pred_w = predicted.weights[:n]
    with np.errstate(divide="ignore", invalid="ignore"):
        errors = np.abs(emp_w - pred_w) / pred_w
    errors = np.where(pred_w == 0.0, np.where(emp_w == 0.0, 0.0, np.inf), errors)

    return MotifComparison(
        alignments=alignments,
        weight_rel_errors=errors,
        cluster_ids=cluster_ids,
        min_alignment=float(np.min(alignments)),
        max_weight_rel_error=float(np.max(errors)),
        n_compared=n,
    )
