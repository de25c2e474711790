import numpy as np
import pytest

import bica


def test_separates_two_uniforms():
    s = bica.gen_sources(["uniform", "uniform"], 8000, seed=1)
    A = bica.random_mixing(2, 7)
    x = bica.mix(s, A)
    result = bica.separate(x, maxit=12, boost_iters=3, grid_size=200, seed=3)
    score = 100.0 * bica.amari(result["W_full"], np.linalg.inv(A))
    assert score < 10.0
    mean_sir, per_component = bica.sir(s, result["sources"])
    assert mean_sir > 10.0
    assert len(per_component) == 2


def test_orthonormal_unmixing_and_determinism():
    s = bica.gen_sources(["uniform", "laplace"], 4000, seed=2)
    x = bica.mix(s, bica.random_mixing(2, 9))
    r1 = bica.separate(x, maxit=6, boost_iters=2, grid_size=150, seed=5)
    r2 = bica.separate(x, maxit=6, boost_iters=2, grid_size=150, seed=5)
    W = r1["W"]
    assert np.abs(W @ W.T - np.eye(2)).max() < 1e-10
    assert np.array_equal(r1["W"], r2["W"])


def test_whiten_and_decorrelate():
    rng = np.random.default_rng(0)
    data = rng.normal(size=(3, 500)) * np.array([[1.0], [5.0], [0.2]])
    whitened, mean, transform = bica.whiten(data)
    cov = whitened @ whitened.T / (whitened.shape[1] - 1)
    assert np.abs(cov - np.eye(3)).max() < 1e-8

    W = bica.sym_decorrelate(rng.normal(size=(3, 3)))
    assert np.abs(W @ W.T - np.eye(3)).max() < 1e-10


def test_boost_density_partition():
    s = bica.gen_sources(["gmm"], 5000, seed=4)
    out = bica.boost_density(s[0], grid_size=300, boost_iters=5, df=3.0)
    assert abs(out["partition"] - 1.0) < 0.1
    trace = out["loglik_trace"]
    assert all(b >= a - 1e-8 for a, b in zip(trace, trace[1:]))


def test_likelihood_scan_shape():
    s = bica.gen_sources(["uniform", "uniform"], 3000, seed=6)
    x = bica.mix(s, bica.random_mixing(2, 11))
    curve = bica.likelihood_scan(x, [0.0, 45.0, 90.0], grid_size=100,
                                 boost_iters=1)
    assert [a for a, _ in curve] == [0.0, 45.0, 90.0]
    assert all(np.isfinite(v) for _, v in curve)


def test_errors_surface_as_python_exceptions():
    x = np.vstack([np.sin(0.01 * np.arange(1000))] * 2)
    with pytest.raises(bica.BicaError):
        bica.separate(x)
