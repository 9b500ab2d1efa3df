"""End-to-end exercises of the Python bindings against frozen references."""

import math

import numpy as np
import pytest

import maplabel as ml


@pytest.fixture(scope="module")
def pendulum_setup():
    domain = ml.Domain(ml.Topology.cylinder, 0.0, 1.0, -2.1, 2.1)
    mp = ml.MapSpec.pendulum()
    kernel = ml.KernelSpec("periodic_product", 0.5)
    boundary = ml.BoundarySpec.smoothed_strips(-2.0, 2.0, 0.02, 0.1)
    samples = ml.build_samples(mp, domain, 100, skip=1)
    return mp, domain, kernel, boundary, samples


@pytest.fixture(scope="module")
def pendulum_fit(pendulum_setup):
    _, _, kernel, boundary, samples = pendulum_setup
    return ml.solve_bvp(samples, kernel, boundary, 1e-8)


def test_bvp_matches_reference(pendulum_setup, pendulum_fit):
    _, _, kernel, boundary, samples = pendulum_setup
    model, report = pendulum_fit
    assert report.R == pytest.approx(1.182044e-07, rel=1e-5)
    assert report.E_inv <= 1e-6
    assert report.R == pytest.approx(report.E_inv + report.E_bd + 1e-8 * report.E_K,
                                     rel=1e-10)
    recomputed = ml.residual_components(model, samples, boundary, 1e-8)
    assert recomputed.R == pytest.approx(report.R, rel=1e-12)


def test_evp_matches_reference(pendulum_setup):
    _, _, kernel, boundary, samples = pendulum_setup
    result = ml.solve_evp(samples, kernel, boundary, 1e-8, delta=1e-8, n_eigs=2)
    assert result.eigenvalues[0] == pytest.approx(3.608548e-10, rel=1e-4)
    assert result.eigenvalues == sorted(result.eigenvalues)
    h = result.pairs[0].h
    assert np.linalg.norm(h) == pytest.approx(1.0, abs=1e-12)
    assert h[np.argmax(np.abs(h))] > 0  # sign convention
    assert result.iterations > 0


def test_model_round_trip(tmp_path, pendulum_setup, pendulum_fit):
    _, domain, _, _, _ = pendulum_setup
    model, _ = pendulum_fit
    prov = ml.ModelProvenance("pendulum", domain, 100, 1e-8, 1)
    path = str(tmp_path / "model.json")
    ml.save_model(model, prov, path)
    loaded, loaded_prov = ml.load_model(path)

    assert np.array_equal(np.asarray(loaded.coefficients),
                          np.asarray(model.coefficients))
    assert loaded_prov.map == "pendulum"
    assert loaded_prov.N == 100
    for p in ml.sobol_sample(domain, 20, skip=7):
        assert ml.eval_label(loaded, p) == ml.eval_label(model, p)


def test_validation_score(pendulum_setup, pendulum_fit):
    mp, domain, _, _, _ = pendulum_setup
    model, _ = pendulum_fit
    report = ml.validation_score(model, mp, domain, 100, T=25)
    assert len(report.pairs) == 100
    assert report.S == ml.score_from_pairs(report.pairs)
    assert report.S <= 1e-3  # the integrable pendulum labels are near-invariant


def test_weighted_birkhoff_python_callable():
    mp = ml.MapSpec.pendulum()

    def hamiltonian(s):
        return 0.5 * s.y * s.y - math.cos(2.0 * math.pi * s.x) / (2.0 * math.pi)

    x0 = ml.State(0.1, 0.3)
    wb = ml.weighted_birkhoff(mp, hamiltonian, x0, T=100)
    assert wb == pytest.approx(hamiltonian(x0), abs=1e-8)


def test_birkhoff_weights():
    w = np.asarray(ml.birkhoff_weights(101))
    assert math.fsum(w) == pytest.approx(1.0, abs=1e-15)
    assert np.array_equal(w, w[::-1])
    assert (np.diff(w[:50]) > 0).all()


def test_grid_and_normalize(pendulum_setup, pendulum_fit):
    _, domain, _, _, _ = pendulum_setup
    model, _ = pendulum_fit
    grid = ml.eval_grid(model, domain, 16, 12)
    assert (grid.nx, grid.ny) == (16, 12)
    assert len(grid.values) == 16 * 12
    assert grid.values[3 * 16 + 5] == ml.eval_label(model,
                                                    ml.State(grid.x[5], grid.y[3]))

    normalized = ml.normalize_maxabs(model, domain, 64, 64)
    peak = max(abs(v) for v in ml.eval_grid(normalized, domain, 64, 64).values)
    assert peak == 1.0


def test_iterate_conserves_y_without_kick():
    traj = ml.iterate(ml.MapSpec.standard(0.0), ml.State(0.3, 0.7), 10)
    assert len(traj) == 11
    assert all(s.y == 0.7 for s in traj)


def test_kernel_matrix_numpy():
    domain = ml.Domain(ml.Topology.plane, 0.0, 1.0, 0.0, 1.0)
    points = ml.sobol_sample(domain, 30, skip=1)
    K = ml.kernel_matrix(ml.KernelSpec("inverse_multiquadric", 0.4), points,
                         ml.Topology.plane)
    assert isinstance(K, np.ndarray) and K.shape == (30, 30)
    assert np.array_equal(K, K.T)
    assert np.array_equal(np.diag(K), np.ones(30))


def test_exceptions_map_to_python_types():
    with pytest.raises(ml.ConfigError):
        ml.KernelSpec("mystery", 1.0)
    assert issubclass(ml.ConfigError, ValueError)

    with pytest.raises(ml.IoError):
        ml.load_model("/nonexistent/model.json")
    assert issubclass(ml.IoError, OSError)

    flat = ml.LabelModel()
    flat.kernel = ml.KernelSpec("squared_exponential", 0.4)
    flat.topology = ml.Topology.plane
    flat.centers = [ml.State(0.5, 0.5)]
    flat.coefficients = np.zeros(1)
    domain = ml.Domain(ml.Topology.plane, 0.0, 1.0, 0.0, 1.0)
    with pytest.raises(ml.NumericalError):
        ml.validation_score(flat, ml.MapSpec.standard(0.0), domain, 50, T=10)
    assert issubclass(ml.NumericalError, ArithmeticError)
