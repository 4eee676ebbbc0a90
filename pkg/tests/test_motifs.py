"""Motif extraction from the metric tensor and the per-regime predictions."""

import numpy as np
import pytest

import oracles
from reskernel import (
    ContractViolation,
    InputCouplingSpec,
    MetricTensor,
    MotifPrediction,
    MotifSet,
    PsdViolationError,
    ReservoirSpec,
    Seed,
    TimeSeries,
    build_metric_tensor,
    compare_motifs,
    extract_motifs,
    kernel_eval,
    mix_seed,
    predict_cycle,
    predict_cycle_periodic,
    predict_random,
    predict_symmetric,
    represent,
)
from reskernel.coupling import generate_input, generate_reservoir


def _tensor_for(regime, n, nu, horizon, seed, kind="gaussian", period=None,
                normalize_unit=True):
    res = generate_reservoir(ReservoirSpec(regime=regime, size=n, nu=nu), seed)
    coup = generate_input(InputCouplingSpec(kind=kind, size=n, period=period,
                                            normalize_unit=normalize_unit), seed)
    return res, coup, build_metric_tensor(res, coup, horizon)


# ---------------------------------------------------------------------------
# extract_motifs
# ---------------------------------------------------------------------------

def test_scalar_reservoir_yields_single_geometric_motif():
    nu, tau = 0.7, 30
    tensor = build_metric_tensor(np.array([[nu]]), np.array([1.0]), tau)
    motifs = extract_motifs(tensor)
    assert len(motifs) == 1
    pattern = nu ** np.arange(tau)
    pattern /= np.linalg.norm(pattern)
    assert np.allclose(motifs.vectors[0], pattern, atol=1e-12)
    assert motifs.weights[0] == pytest.approx(
        oracles.scalar_motif_weight(nu, tau), rel=1e-12)


def test_identity_tensor_keeps_every_motif():
    tensor = MetricTensor(np.eye(5), horizon=5, state_dim=5)
    motifs = extract_motifs(tensor)
    assert len(motifs) == 5
    assert np.array_equal(motifs.weights, np.ones(5))
    assert np.array_equal(motifs.vectors, np.eye(5))


def test_retention_threshold_is_relative_to_top_weight():
    tensor = MetricTensor(np.diag([1.0, 1e-3, 1e-6]), horizon=3, state_dim=3)
    # weights are 1, ~0.0316, 0.001; the default ratio 1e-2 keeps two.
    motifs = extract_motifs(tensor)
    assert len(motifs) == 2
    loose = extract_motifs(tensor, threshold_ratio=1e-3)
    assert len(loose) == 3
    tight = extract_motifs(tensor, threshold_ratio=1.0)
    assert len(tight) == 1


def test_full_spectrum_is_kept_alongside_retained_weights():
    _, _, tensor = _tensor_for("random_iid", 6, 0.9, 12, Seed(7))
    motifs = extract_motifs(tensor)
    assert motifs.spectrum.shape == (12,)
    assert np.sum(motifs.spectrum) == pytest.approx(
        float(np.trace(tensor.matrix)), rel=1e-10)
    assert np.all(np.diff(motifs.spectrum) <= 0.0)


def test_small_negative_eigenvalues_are_clamped_to_zero():
    tensor = MetricTensor(np.diag([1.0, -1e-12]), horizon=2, state_dim=2)
    motifs = extract_motifs(tensor)
    assert np.array_equal(motifs.spectrum, [1.0, 0.0])
    assert len(motifs) == 1


def test_clear_negative_eigenvalue_raises_psd_violation():
    tensor = MetricTensor(np.diag([1.0, -1.0]), horizon=2, state_dim=2)
    with pytest.raises(PsdViolationError) as exc:
        extract_motifs(tensor)
    assert exc.value.eigenvalue == pytest.approx(-1.0, rel=1e-12)
    assert exc.value.floor == pytest.approx(-1e-9, rel=1e-6)


def test_zero_tensor_yields_empty_motif_set():
    tensor = MetricTensor(np.zeros((4, 4)), horizon=4, state_dim=3)
    motifs = extract_motifs(tensor)
    assert len(motifs) == 0
    assert motifs.vectors.shape == (0, 4)
    assert np.array_equal(motifs.spectrum, np.zeros(4))


@pytest.mark.parametrize("ratio", [0.0, -0.5, 1.5])
def test_extract_rejects_bad_threshold(ratio):
    tensor = MetricTensor(np.eye(2), horizon=2, state_dim=2)
    with pytest.raises(ContractViolation):
        extract_motifs(tensor, threshold_ratio=ratio)


def test_motif_set_validation():
    good = dict(vectors=np.eye(2), weights=np.array([2.0, 1.0]),
                spectrum=np.array([4.0, 1.0]), threshold_ratio=1e-2, horizon=2)
    MotifSet(**good)
    bad_norm = dict(good, vectors=np.array([[2.0, 0.0], [0.0, 1.0]]))
    with pytest.raises(ContractViolation):
        MotifSet(**bad_norm)
    bad_order = dict(good, weights=np.array([1.0, 2.0]),
                     spectrum=np.array([1.0, 4.0]))
    with pytest.raises(ContractViolation):
        MotifSet(**bad_order)
    skew = np.array([[1.0, 0.0], [np.sqrt(0.5), np.sqrt(0.5)]])
    with pytest.raises(ContractViolation):
        MotifSet(**dict(good, vectors=skew))


# ---------------------------------------------------------------------------
# represent
# ---------------------------------------------------------------------------

def test_represent_in_motif_coordinates_identity_case():
    tensor = MetricTensor(np.eye(3), horizon=3, state_dim=3)
    motifs = extract_motifs(tensor)
    u = np.array([0.5, -2.0, 0.25])
    assert np.allclose(represent(motifs, TimeSeries(u)), u, atol=1e-14)


def test_represent_of_top_motif_is_top_weight_axis():
    _, _, tensor = _tensor_for("random_iid", 5, 0.9, 9, Seed(3))
    motifs = extract_motifs(tensor)
    rep = represent(motifs, TimeSeries(motifs.vectors[0]))
    expected = np.zeros(len(motifs))
    expected[0] = motifs.weights[0]
    assert np.allclose(rep, expected, atol=1e-9 * motifs.weights[0])


def test_represent_annihilates_directions_outside_the_span():
    nu, tau = 0.6, 8
    tensor = build_metric_tensor(np.array([[nu]]), np.array([1.0]), tau)
    motifs = extract_motifs(tensor)
    u = np.zeros(tau)
    u[0], u[1] = -motifs.vectors[0][1], motifs.vectors[0][0]
    rep = represent(motifs, TimeSeries(u))
    assert np.max(np.abs(rep)) < 1e-12


def test_represent_inner_products_approximate_the_kernel():
    res, coup, tensor = _tensor_for("random_iid", 8, 0.95, 20, Seed(11))
    motifs = extract_motifs(tensor, threshold_ratio=0.05)
    discarded = float(np.sum(motifs.spectrum) - np.sum(motifs.weights ** 2))
    rng = np.random.default_rng(1)
    for _ in range(5):
        u = rng.normal(size=20)
        v = rng.normal(size=20)
        approx = float(represent(motifs, TimeSeries(u))
                       @ represent(motifs, TimeSeries(v)))
        exact = kernel_eval(tensor, TimeSeries(u), TimeSeries(v))
        bound = discarded * np.linalg.norm(u) * np.linalg.norm(v) + 1e-12
        assert abs(approx - exact) <= bound


def test_represent_rejects_horizon_mismatch_and_empty_set_passthrough():
    tensor = MetricTensor(np.eye(3), horizon=3, state_dim=3)
    motifs = extract_motifs(tensor)
    with pytest.raises(ContractViolation):
        represent(motifs, TimeSeries(np.ones(4)))
    empty = extract_motifs(MetricTensor(np.zeros((3, 3)), horizon=3, state_dim=3))
    assert represent(empty, TimeSeries(np.ones(3))).shape == (0,)


# ---------------------------------------------------------------------------
# random-regime prediction
# ---------------------------------------------------------------------------

def test_random_prediction_weights_are_geometric():
    pred = predict_random(state_dim=100, nu=0.995, coupling_norm=1.0, horizon=200)
    assert len(pred) == 100
    assert pred.weights[0] == 1.0
    ratios = (pred.weights[1:] / pred.weights[:-1]) ** 2
    assert np.allclose(ratios, oracles.RANDOM_WEIGHT_RATIO_NU995, rtol=1e-12)
    assert pred.extras["decay_ratio"] == pytest.approx(0.4975, rel=1e-15)


def test_random_prediction_scales_with_coupling_norm():
    unit = predict_random(10, 0.9, 1.0, 20)
    scaled = predict_random(10, 0.9, 3.0, 20)
    assert np.allclose(scaled.weights, 3.0 * unit.weights, rtol=1e-14)


def test_random_prediction_count_truncates_both_ways():
    assert len(predict_random(5, 0.9, 1.0, 12)) == 5
    assert len(predict_random(12, 0.9, 1.0, 5)) == 5


def test_random_prediction_vectors_are_time_axes():
    pred = predict_random(3, 0.9, 1.0, 6)
    assert np.array_equal(pred.vectors, np.eye(6)[:3])
    assert pred.orthonormal


@pytest.mark.parametrize("kwargs", [
    dict(state_dim=0, nu=0.9, coupling_norm=1.0, horizon=5),
    dict(state_dim=3, nu=0.0, coupling_norm=1.0, horizon=5),
    dict(state_dim=3, nu=0.9, coupling_norm=0.0, horizon=5),
    dict(state_dim=3, nu=0.9, coupling_norm=1.0, horizon=0),
])
def test_random_prediction_rejects_bad_parameters(kwargs):
    with pytest.raises(ContractViolation):
        predict_random(**kwargs)


def test_single_random_instance_aligns_with_prediction():
    seed = mix_seed(0, 55, 0)
    res, coup, tensor = _tensor_for("random_iid", 100, 0.995, 200, seed)
    motifs = extract_motifs(tensor)
    pred = predict_random(100, 0.995, float(np.linalg.norm(coup)), 200)
    comparison = compare_motifs(motifs, pred)
    assert np.all(comparison.alignments[:4] >= 0.9)


def test_random_instance_weights_track_prediction_on_average():
    # Top-four weight errors, averaged over an ensemble, stay under 20%.
    errors = np.zeros(4)
    n_seeds = 100
    for s in range(n_seeds):
        seed = mix_seed(0, 56, s)
        res, coup, tensor = _tensor_for("random_iid", 100, 0.995, 200, seed)
        motifs = extract_motifs(tensor)
        pred = predict_random(100, 0.995, float(np.linalg.norm(coup)), 200)
        comparison = compare_motifs(motifs, pred)
        errors += comparison.weight_rel_errors[:4]
    errors /= n_seeds
    assert np.all(errors <= 0.2), errors


# ---------------------------------------------------------------------------
# symmetric-regime prediction
# ---------------------------------------------------------------------------

def test_symmetric_prediction_diagonal_reservoir_components():
    res = np.diag([0.8, 0.3])
    coup = np.array([1.0, 0.0])
    pred = predict_symmetric(res, coup, 6)
    pattern = 0.8 ** np.arange(6)
    assert np.allclose(pred.vectors[0], pattern / np.linalg.norm(pattern),
                       atol=1e-14)
    assert pred.weights[0] == pytest.approx(float(pattern @ pattern), rel=1e-13)
    assert pred.weights[1] == 0.0
    assert not pred.orthonormal


def test_symmetric_prediction_negative_rate_alternates():
    pred = predict_symmetric(np.diag([-0.9]), np.array([1.0]), 5)
    pattern = (-0.9) ** np.arange(5)
    assert np.allclose(pred.vectors[0], pattern / np.linalg.norm(pattern),
                       atol=1e-14)


def test_symmetric_reconstruction_matches_built_tensor():
    for s in range(5):
        seed = mix_seed(0, 57, s)
        res, coup, tensor = _tensor_for("symmetric_wigner", 12, 0.9, 24, seed)
        pred = predict_symmetric(res, coup, 24)
        recon = pred.extras["reconstruction"]
        assert np.array_equal(recon, recon.T)
        assert np.max(np.abs(recon - tensor.matrix)) <= 1e-9


def test_symmetric_prediction_rejects_asymmetric_reservoir():
    res = np.array([[0.0, 0.5], [0.1, 0.0]])
    with pytest.raises(ContractViolation):
        predict_symmetric(res, np.array([1.0, 0.0]), 4)


def test_symmetric_prediction_rejects_divergent_rates():
    with pytest.raises(ContractViolation):
        predict_symmetric(np.diag([1.5]), np.array([1.0]), 2000)


def test_compare_rejects_symmetric_components():
    res, coup, tensor = _tensor_for("symmetric_wigner", 6, 0.9, 12, Seed(1))
    motifs = extract_motifs(tensor)
    pred = predict_symmetric(res, coup, 12)
    with pytest.raises(ContractViolation):
        compare_motifs(motifs, pred)


# ---------------------------------------------------------------------------
# cycle-regime prediction
# ---------------------------------------------------------------------------

def test_cycle_two_copy_weight_factor_worked_example():
    pred = predict_cycle(2, 0.5, np.array([1.0, 0.0]), 2)
    assert pred.extras["eigenvalue_factor"] == oracles.CYCLE_TWO_COPIES_FACTOR
    assert pred.weights[0] == pytest.approx(
        oracles.CYCLE_TWO_COPIES_WEIGHT_FACTOR, rel=1e-15)


def test_cycle_prediction_single_copy_returns_core_vectors():
    rng = np.random.default_rng(19)
    coup = rng.normal(size=6)
    coup /= np.linalg.norm(coup)
    pred = predict_cycle(6, 0.9, coup, 1)
    assert pred.vectors.shape == (6, 6)
    gram = pred.vectors @ pred.vectors.T
    assert np.max(np.abs(gram - np.eye(6))) < 1e-12


def test_cycle_prediction_at_nu_one_uses_copy_count():
    coup = np.array([1.0, 0.0, 0.0])
    pred = predict_cycle(3, 1.0, coup, 4)
    assert pred.extras["eigenvalue_factor"] == 4.0


def test_cycle_prediction_matches_extracted_motifs():
    seed = mix_seed(0, 58, 1)
    res, coup, tensor = _tensor_for("cycle_permutation", 10, 0.9, 30, seed)
    motifs = extract_motifs(tensor, threshold_ratio=1e-4)
    pred = predict_cycle(10, 0.9, coup, 3)
    core = pred.extras["core_eigenvalues"]
    gaps = np.abs(np.diff(core)) / core[:-1]
    assert np.min(gaps) > 1e-6  # non-degenerate spectrum for this seed
    comparison = compare_motifs(motifs, pred)
    assert comparison.min_alignment >= 1.0 - 1e-8
    assert comparison.max_weight_rel_error <= 1e-8


def test_cycle_prediction_rejects_bad_shapes_and_copies():
    with pytest.raises(ContractViolation):
        predict_cycle(4, 0.9, np.ones(3), 2)
    with pytest.raises(ContractViolation):
        predict_cycle(3, 0.9, np.ones(3), 0)


# ---------------------------------------------------------------------------
# periodic-coupling prediction
# ---------------------------------------------------------------------------

def test_periodic_prediction_closed_form_for_binary_blocks():
    n, p, nu, tau = 20, 5, 0.9, 40
    seed = Seed(0)
    res, coup, tensor = _tensor_for("cycle_permutation", n, nu, tau, seed,
                                    kind="periodic_binary", period=p)
    pred = predict_cycle_periodic(n, nu, coup[:p], tau // n)
    expected = np.array([oracles.periodic_cycle_weight(nu, i, p, tau)
                         for i in range(1, p + 1)])
    assert np.allclose(pred.weights, expected, rtol=1e-12)
    motifs = extract_motifs(tensor, threshold_ratio=1e-6)
    assert len(motifs) == p
    assert np.allclose(motifs.weights, expected, rtol=1e-8)
    comparison = compare_motifs(motifs, pred)
    assert comparison.min_alignment >= 1.0 - 1e-8


def test_periodic_prediction_counts_pattern_copies():
    # The copies argument tiles the whole cycle, so the horizon is n * copies.
    n, p = 12, 3
    block = np.array([1.0, 0.0, 0.0])
    pred = predict_cycle_periodic(n, 0.8, block, 8)
    assert pred.extras["copies_per_coupling"] == n // p
    assert pred.vectors.shape == (p, n * 8)
    assert pred.horizon == n * 8


def test_bipolar_weights_are_exactly_twice_binary_at_period_four():
    n, p, nu, tau = 8, 4, 0.95, 16
    seed = Seed(0)
    binary = generate_input(InputCouplingSpec(kind="periodic_binary", size=n,
                                              period=p, normalize_unit=False),
                            seed)
    bipolar = generate_input(InputCouplingSpec(kind="periodic_bipolar", size=n,
                                               period=p, normalize_unit=False),
                             seed)
    pred_bin = predict_cycle_periodic(n, nu, binary[:p], tau // n)
    pred_bip = predict_cycle_periodic(n, nu, bipolar[:p], tau // n)
    assert np.array_equal(pred_bip.weights, 2.0 * pred_bin.weights)


def test_periodic_prediction_at_nu_one_counts_blocks():
    # Undamped cycle: the factor is the number of pattern blocks in the
    # horizon, here 6 * 5 / 2.
    block = np.array([1.0, 0.0])
    pred = predict_cycle_periodic(6, 1.0, block, 5)
    assert pred.extras["eigenvalue_factor"] == 15.0


def test_periodic_prediction_rejects_period_not_dividing_size():
    with pytest.raises(ContractViolation):
        predict_cycle_periodic(10, 0.9, np.ones(3), 4)


def test_prediction_container_validation():
    with pytest.raises(ContractViolation):
        MotifPrediction(regime="random_iid", vectors=np.eye(2),
                        weights=np.array([1.0, 2.0]), horizon=2,
                        orthonormal=True, extras={})
    with pytest.raises(ContractViolation):
        MotifPrediction(regime="random_iid", vectors=np.eye(2),
                        weights=np.array([1.0, -0.5]), horizon=2,
                        orthonormal=True, extras={})


# ---------------------------------------------------------------------------
# comparisons
# ---------------------------------------------------------------------------

def _self_comparison_pair(seed):
    res, coup, tensor = _tensor_for("random_iid", 6, 0.9, 10, seed)
    motifs = extract_motifs(tensor)
    pred = MotifPrediction(regime="random_iid", vectors=motifs.vectors.copy(),
                           weights=motifs.weights.copy(), horizon=10,
                           orthonormal=True, extras={})
    return motifs, pred


def test_comparison_of_a_set_with_itself_is_perfect():
    motifs, pred = _self_comparison_pair(Seed(5))
    comparison = compare_motifs(motifs, pred)
    assert comparison.n_compared == len(motifs)
    assert np.min(comparison.alignments) >= 1.0 - 1e-12
    assert np.array_equal(comparison.weight_rel_errors, np.zeros(len(motifs)))
    assert comparison.min_alignment >= 1.0 - 1e-12
    assert comparison.max_weight_rel_error == 0.0


def test_comparison_ignores_global_sign_of_predicted_vectors():
    motifs, pred = _self_comparison_pair(Seed(6))
    flipped = MotifPrediction(regime=pred.regime, vectors=-pred.vectors,
                              weights=pred.weights, horizon=pred.horizon,
                              orthonormal=True, extras={})
    comparison = compare_motifs(motifs, flipped)
    assert np.min(comparison.alignments) >= 1.0 - 1e-12


def test_degenerate_predicted_weights_are_compared_as_a_subspace():
    motifs = MotifSet(vectors=np.eye(2), weights=np.array([1.0, 1.0]),
                      spectrum=np.array([1.0, 1.0]), threshold_ratio=1e-2,
                      horizon=2)
    s = np.sqrt(0.5)
    rotated = np.array([[s, s], [s, -s]])
    pred = MotifPrediction(regime="cycle_permutation", vectors=rotated,
                           weights=np.array([1.0, 1.0]), horizon=2,
                           orthonormal=True, extras={})
    comparison = compare_motifs(motifs, pred)
    assert np.array_equal(comparison.cluster_ids, [0, 0])
    assert np.min(comparison.alignments) >= 1.0 - 1e-12


def test_distinct_predicted_weights_get_distinct_clusters():
    motifs, pred = _self_comparison_pair(Seed(8))
    comparison = compare_motifs(motifs, pred)
    assert np.array_equal(comparison.cluster_ids,
                          np.arange(comparison.n_compared))


def test_zero_predicted_weight_flags_infinite_error():
    motifs = MotifSet(vectors=np.eye(2), weights=np.array([1.0, 0.5]),
                      spectrum=np.array([1.0, 0.25]), threshold_ratio=1e-2,
                      horizon=2)
    pred = MotifPrediction(regime="cycle_permutation", vectors=np.eye(2),
                           weights=np.array([1.0, 0.0]), horizon=2,
                           orthonormal=True, extras={})
    comparison = compare_motifs(motifs, pred)
    assert comparison.weight_rel_errors[1] == np.inf


def test_comparison_rejects_empty_or_mismatched_inputs():
    motifs, pred = _self_comparison_pair(Seed(9))
    empty = extract_motifs(MetricTensor(np.zeros((10, 10)), horizon=10,
                                        state_dim=6))
    with pytest.raises(ContractViolation):
        compare_motifs(empty, pred)
    other = MotifPrediction(regime="random_iid", vectors=np.eye(4),
                            weights=np.ones(4), horizon=4, orthonormal=True,
                            extras={})
    with pytest.raises(ContractViolation):
        compare_motifs(motifs, other)
