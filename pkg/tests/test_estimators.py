import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clo_bench.datagen import Dataset, SimpleDgp, gen_simple
from clo_bench.decision_sets import GridDagSet, IntervalSet, SimplexSet
from clo_bench.errors import ConfigError, InputError
from clo_bench.estimators import (
    LocalPolyConfig,
    SgdConfig,
    fit_ierm_threshold,
    fit_kernel_ridge,
    fit_least_squares_ridge,
    fit_spo_plus_sgd,
    fit_threshold_least_squares,
    local_polynomial_fit,
    spo_plus_loss,
    spo_plus_objective,
    spo_plus_subgradient,
    strict_floor,
)
from clo_bench.estimators.ierm import ierm_threshold_objective
from clo_bench.models import FeatureMap, KernelFamily, LinearFamily, ThresholdFamily, gram_matrix
from clo_bench.rng import RngStream


def _ridge_objective(data, fmap, W, b, lam):
    R = data.ys - fmap(data.xs) @ W.T - b
    return np.mean(np.sum(R * R, axis=1)) + lam * np.sum(W * W)


# ---------------------------------------------------------------- ridge


def test_ridge_recovers_noiseless_linear_model():
    rng = np.random.default_rng(0)
    fm = FeatureMap("identity", 4)
    W0, b0 = rng.normal(size=(3, 4)), rng.normal(size=3)
    X = rng.normal(size=(30, 4))
    f = fit_least_squares_ridge(Dataset(X, X @ W0.T + b0), fm, lam=0.0)
    assert np.allclose(f.W, W0, atol=1e-8) and np.allclose(f.intercept, b0, atol=1e-8)


def test_ridge_large_penalty_shrinks_to_mean():
    rng = np.random.default_rng(1)
    fm = FeatureMap("identity", 3)
    X = rng.normal(size=(40, 3))
    Y = X @ rng.normal(size=(3, 2)) + 1.5 + rng.normal(size=(40, 2))
    d = Dataset(X, Y)
    free = fit_least_squares_ridge(d, fm, 0.0)
    big = fit_least_squares_ridge(d, fm, 1e6)
    assert np.linalg.norm(big.W) <= 1e-3 * np.linalg.norm(free.W)
    assert np.allclose(big.intercept, Y.mean(axis=0), atol=1e-4)


def test_ridge_rank_deficient_min_norm():
    # duplicated column: min-norm solution splits the weight evenly
    x = np.linspace(-1, 1, 20)
    X = np.column_stack([x, x])
    f = fit_least_squares_ridge(Dataset(X, 2 * x[:, None]), FeatureMap("identity", 2), 0.0, intercept=False)
    assert np.allclose(f.W, [[1.0, 1.0]], atol=1e-10)


def test_ridge_optimality_under_perturbation():
    rng = np.random.default_rng(2)
    fm = FeatureMap("monomial", 5)
    X = rng.normal(size=(60, 5))
    Y = rng.normal(size=(60, 4))
    d = Dataset(X, Y)
    for lam in (1e-3, 0.1, 10.0):
        f = fit_least_squares_ridge(d, fm, lam)
        base = _ridge_objective(d, fm, f.W, f.intercept, lam)
        for _ in range(50):
            D = rng.normal(size=f.W.shape)
            D *= 1e-3 / np.linalg.norm(D)
            for s in (1, -1):
                assert _ridge_objective(d, fm, f.W + s * D, f.intercept, lam) >= base - 1e-9


def test_threshold_least_squares():
    d = Dataset([[0.2], [0.4], [-0.3]], [[1.0], [-0.5], [0.0]])
    assert fit_threshold_least_squares(d).theta == pytest.approx(0.1 - 0.5 / 3, abs=1e-15)
    d = Dataset([[0.9]], [[-5.0]])
    assert fit_threshold_least_squares(d).theta == 1.0


def test_ridge_errors():
    with pytest.raises(ConfigError):
        fit_least_squares_ridge(Dataset([[1.0]], [[1.0]]), FeatureMap("identity", 1), -1.0)
    with pytest.raises(ConfigError):
        fit_kernel_ridge(Dataset([[1.0]], [[1.0]]), 1.0, 0.0)


# ---------------------------------------------------------- kernel ridge


def test_kernel_ridge_interpolation_limit():
    rng = np.random.default_rng(3)
    X = rng.uniform(-1, 1, size=(15, 2))
    Y = rng.normal(size=(15, 3))
    f = fit_kernel_ridge(Dataset(X, Y), rho=1.0, lam=1e-10)
    assert np.allclose(f(X), Y, atol=1e-4)


def test_kernel_ridge_single_point_and_zero():
    f = fit_kernel_ridge(Dataset([[0.3, 0.1]], [[2.0, -4.0]]), rho=0.5, lam=0.25)
    assert np.allclose(f([0.3, 0.1]), [2.0 / 1.25, -4.0 / 1.25], atol=1e-15)
    rng = np.random.default_rng(4)
    X = rng.normal(size=(10, 2))
    g = fit_kernel_ridge(Dataset(X, np.zeros((10, 3))), 1.0, 0.1)
    assert np.array_equal(g(rng.normal(size=(5, 2))), np.zeros((5, 3)))


def test_kernel_ridge_stationarity():
    rng = np.random.default_rng(5)
    n = 50
    X = rng.normal(size=(n, 5))
    Y = rng.normal(size=(n, 4))
    for lam in (1e-3, 0.1):
        f = fit_kernel_ridge(Dataset(X, Y), 0.5, lam)
        G = gram_matrix(X, X, 0.5)
        A = f.dual_coefs
        # d/dA of (1/n)||Y - G A||^2 + lam tr(A^T G A)
        grad = (2.0 / n) * G @ ((G + n * lam * np.eye(n)) @ A - Y)
        assert np.linalg.norm(grad) <= 1e-6 * n


# ------------------------------------------------------------------ SPO+


def test_spo_plus_examples():
    I = IntervalSet()
    assert spo_plus_loss([-1.0], [1.0], I) == 6.0
    assert spo_plus_loss([0.0], [1.0], I) == 2.0
    assert spo_plus_subgradient([-1.0], [1.0], I).tolist() == [-4.0]
    rng = np.random.default_rng(6)
    for dset in (I, SimplexSet(5), GridDagSet(5, 5)):
        c = rng.normal(size=dset.dim)
        assert spo_plus_loss(c, c, dset) == pytest.approx(0.0, abs=1e-12)
        assert np.array_equal(spo_plus_subgradient(c, c, dset), np.zeros(dset.dim))
    with pytest.raises(InputError):
        spo_plus_loss([1.0, 2.0], [1.0], I)


SPO_SETS = [IntervalSet(), SimplexSet(5), GridDagSet(3, 3)]


@settings(max_examples=100, deadline=None)
@given(k=st.integers(0, 2), seed=st.integers(0, 2**32 - 1), t=st.floats(0, 1))
def test_spo_plus_convex_nonneg_supporting(k, seed, t):
    dset = SPO_SETS[k]
    rng = np.random.default_rng(seed)
    c, a, b = rng.normal(size=(3, dset.dim))
    la, lb = spo_plus_loss(a, c, dset), spo_plus_loss(b, c, dset)
    assert la >= -1e-12 and lb >= -1e-12
    assert spo_plus_loss(t * a + (1 - t) * b, c, dset) <= t * la + (1 - t) * lb + 1e-9
    g = spo_plus_subgradient(a, c, dset)
    assert lb >= la + g @ (b - a) - 1e-9


def test_sgd_zero_iterations_gives_zero_predictor():
    rng = np.random.default_rng(7)
    d = Dataset(rng.normal(size=(20, 5)), rng.uniform(1, 2, size=(20, 40)))
    g = GridDagSet(5, 5)
    lin = fit_spo_plus_sgd(d, LinearFamily(FeatureMap("monomial", 5)), g, sgd=SgdConfig(iterations=0))
    assert not lin.W.any() and not lin.intercept.any()
    ker = fit_spo_plus_sgd(d, KernelFamily(1.0), g, sgd=SgdConfig(iterations=0))
    assert not ker.dual_coefs.any()


def test_sgd_deterministic_given_seed():
    rng = np.random.default_rng(8)
    d = Dataset(rng.normal(size=(30, 5)), rng.uniform(1, 2, size=(30, 40)))
    g = GridDagSet(5, 5)
    fam = LinearFamily(FeatureMap("monomial", 5))
    cfg = SgdConfig(iterations=50, seed=123)
    a = fit_spo_plus_sgd(d, fam, g, 0.01, cfg)
    b = fit_spo_plus_sgd(d, fam, g, 0.01, cfg)
    assert np.array_equal(a.W, b.W) and np.array_equal(a.intercept, b.intercept)
    c = fit_spo_plus_sgd(d, fam, g, 0.01, SgdConfig(iterations=50, seed=124))
    assert not np.array_equal(a.W, c.W)
    k1 = fit_spo_plus_sgd(d, KernelFamily(0.5), g, 0.01, cfg)
    k2 = fit_spo_plus_sgd(d, KernelFamily(0.5), g, 0.01, cfg)
    assert np.array_equal(k1.dual_coefs, k2.dual_coefs)


@pytest.mark.parametrize("family", [LinearFamily(FeatureMap("identity", 2)), KernelFamily(1.0)])
def test_sgd_constant_costs_reach_true_decision(family):
    rng = np.random.default_rng(9)
    dset = SimplexSet(5)
    c0 = np.array([0.5, 0.2, -0.1, 0.3, 0.4])
    d = Dataset(rng.normal(size=(20, 2)), np.tile(c0, (20, 1)))
    f = fit_spo_plus_sgd(d, family, dset, sgd=SgdConfig(iterations=2000, seed=1))
    target = dset.solve(c0).argmin
    for c_hat in f(d.xs):
        assert np.array_equal(dset.solve(c_hat).argmin, target)


def test_sgd_threshold_objective_trend():
    d = gen_simple(50, SimpleDgp(0.0), RngStream(31))
    trace = []
    fit_spo_plus_sgd(
        d,
        ThresholdFamily(),
        IntervalSet(),
        sgd=SgdConfig(iterations=1000, seed=5),
        callback=lambda t, f: trace.append(spo_plus_objective(f, d, IntervalSet())),
    )
    windows = np.asarray(trace).reshape(10, 100).mean(axis=1)
    assert np.all(np.diff(windows) <= 1e-12)


# ------------------------------------------------------------------ IERM


def test_ierm_examples():
    assert fit_ierm_threshold(Dataset([[-0.4]], [[-0.4]])).theta == -0.4
    assert fit_ierm_threshold(Dataset([[0.5]], [[0.5]])).theta == -1.0
    d = Dataset([[-0.2], [0.3]], [[-0.2], [0.3]])
    assert fit_ierm_threshold(d, "left_endpoint").theta == -0.2
    assert fit_ierm_threshold(d, "midpoint").theta == pytest.approx(0.05, abs=1e-15)
    with pytest.raises(InputError):
        fit_ierm_threshold(d, "rightmost")


def test_ierm_matches_grid_search():
    rng = np.random.default_rng(10)
    grid = -1 + 1e-4 * np.arange(20001)
    for _ in range(500):
        n = int(rng.integers(1, 13))
        x = rng.uniform(-1, 1, size=n)
        sigma = rng.choice([0.0, 0.5, 1.0])
        y = x + sigma * rng.normal(size=n)
        d = Dataset(x[:, None], y[:, None])
        J = ierm_threshold_objective(grid, d)
        fit = fit_ierm_threshold(d)
        best = ierm_threshold_objective(fit.theta, d)
        # no grid point beats the fitted threshold, and the grid comes close
        # unless the argmin interval is narrower than one step
        assert best <= J.min() + 1e-12
        if sigma == 0.0:
            neg = x[x < 0]
            assert fit.theta == (neg.max() if len(neg) else -1.0)


# ------------------------------------------------------ local polynomial


def _wls_oracle(x, X, Y, h, degree):
    # unscaled design in raw offsets; the intercept is unchanged by scaling
    u = X[:, 0] - x
    w = np.exp(-0.5 * (u / h) ** 2)
    V = np.vander(u, degree + 1, increasing=True)
    sw = np.sqrt(w)
    coef = np.linalg.lstsq(sw[:, None] * V, sw[:, None] * Y, rcond=None)[0]
    return coef[0]


def test_strict_floor():
    assert [strict_floor(b) for b in (0.5, 1.0, 1.5, 2.0, 2.7)] == [0, 0, 1, 1, 2]


@pytest.mark.parametrize("beta", [1.0, 2.0, 2.5])
def test_local_poly_reproduces_polynomials(beta):
    rng = np.random.default_rng(11)
    deg = strict_floor(beta)
    coef = rng.uniform(-0.2, 0.2, size=(deg + 1, 2))
    X = rng.uniform(-1, 1, size=(50, 1))
    Y = np.vander(X[:, 0], deg + 1, increasing=True) @ coef
    d = Dataset(X, Y)
    cfg = LocalPolyConfig(beta, kernel="gaussian")
    h = cfg.resolve_bandwidth(50, 1)
    for x in np.linspace(-0.8, 0.8, 10):
        est = local_polynomial_fit([x], d, cfg)
        truth = np.vander([x], deg + 1, increasing=True) @ coef
        assert np.allclose(est, truth[0], atol=1e-6)
        assert np.allclose(est, _wls_oracle(x, X, Y, h, deg), atol=1e-8)


def test_local_poly_constant_and_singular():
    rng = np.random.default_rng(12)
    X = rng.uniform(-1, 1, size=(40, 2))
    c = np.array([0.3, -0.4, 0.5])
    d = Dataset(X, np.tile(c, (40, 1)))
    assert np.allclose(local_polynomial_fit([0.1, 0.2], d, LocalPolyConfig(2.0, 0.8, "epanechnikov")), c, atol=1e-8)
    far = local_polynomial_fit([50.0, 50.0], d, LocalPolyConfig(2.0, 0.5, "uniform"))
    assert np.array_equal(far, np.zeros(3))


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), beta=st.sampled_from([0.5, 1.0, 1.5, 2.0, 3.0]),
       kernel=st.sampled_from(["uniform", "gaussian", "epanechnikov"]))
def test_local_poly_output_in_unit_ball(seed, beta, kernel):
    rng = np.random.default_rng(seed)
    X = rng.uniform(-1, 1, size=(30, 1))
    Y = 5 * rng.normal(size=(30, 3))
    out = local_polynomial_fit(rng.uniform(-1, 1, size=1), Dataset(X, Y), LocalPolyConfig(beta, kernel=kernel))
    assert np.linalg.norm(out) <= 1 + 1e-12
