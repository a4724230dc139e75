import numpy as np
import pytest
from hypothesis import given, strategies as st

from sparseph.data import DataMatrix, normalize_columns
from sparseph.errors import NegativeLambdaError
from sparseph.filtration import betti_curve, build_filtration
from sparseph.data import edge_weights, EdgeWeights
from sparseph.sparse import (
    objective,
    oracle_minimize,
    soft_threshold,
    sparse_correlation,
    support_graph,
)


@pytest.mark.parametrize(
    "c, lam, expected",
    [(0.8, 0.3, 0.5), (0.2, 0.3, 0.0), (-0.8, 0.3, -0.5), (0.8, 0.0, 0.8), (0.3, 0.3, 0.0), (-0.3, 0.3, 0.0)],
)
def test_soft_threshold_cases(c, lam, expected):
    assert soft_threshold(c, lam) == pytest.approx(expected, abs=1e-15)


def test_negative_lambda():
    with pytest.raises(NegativeLambdaError):
        soft_threshold(0.5, -0.1)
    with pytest.raises(NegativeLambdaError):
        sparse_correlation(normalize_columns(DataMatrix(np.eye(3))), -1)


@pytest.mark.parametrize("c, lam, expected", [(0.8, 0.3, 0.5), (0.2, 0.3, 0.0), (0.0, 0.5, 0.0), (-0.9, 0.1, -0.8)])
def test_oracle_minimize_values(c, lam, expected):
    assert oracle_minimize(c, lam) == pytest.approx(expected, abs=1e-6)


def test_oracle_agrees_with_grid_search():
    # coarse-to-fine grid over [-2, 2] as a second opinion on the golden-section oracle
    for c, lam in [(0.8, 0.3), (-0.45, 0.1), (0.05, 0.4)]:
        f = lambda g: (g - c) ** 2 + 2 * lam * np.abs(g)
        lo, hi = -2.0, 2.0
        for _ in range(8):
            grid = np.linspace(lo, hi, 2001)
            g = grid[np.argmin(f(grid))]
            step = (hi - lo) / 2000
            lo, hi = g - 2 * step, g + 2 * step
        assert oracle_minimize(c, lam) == pytest.approx(g, abs=1e-8)


@given(st.floats(-1, 1), st.floats(0, 1.2))
def test_soft_threshold_matches_oracle(c, lam):
    assert abs(soft_threshold(c, lam) - oracle_minimize(c, lam)) <= 1e-6


@given(st.floats(-1, 1), st.floats(0, 1.2))
def test_shrinkage_and_sign(c, lam):
    g = soft_threshold(c, lam)
    assert abs(g) <= max(0.0, abs(c) - lam) + 1e-12
    assert g == 0 or np.sign(g) == np.sign(c)


def test_vectorized_matches_scalar(rng):
    c = rng.uniform(-1, 1, 200)
    v = soft_threshold(c, 0.37)
    assert np.array_equal(v, [soft_threshold(x, 0.37) for x in c])


def _random_z(rng, n=8, p=5):
    return normalize_columns(DataMatrix(rng.standard_normal((n, p))))


def test_lambda_zero_is_sample_correlation(rng):
    Z = _random_z(rng)
    c = Z.values.T @ Z.values
    sol = sparse_correlation(Z, 0.0)
    off = ~np.eye(Z.p, dtype=bool)
    np.testing.assert_allclose(sol.gamma[off], c[off], atol=1e-15)
    assert np.all(np.diag(sol.gamma) == 0)


def test_large_lambda_kills_everything(rng):
    Z = _random_z(rng)
    lam = np.abs(sparse_correlation(Z, 0).correlation).max()
    sol = sparse_correlation(Z, lam)
    assert not sol.gamma.any()
    assert not support_graph(sol).adjacency.any()


def test_random_instance_matches_oracle_per_edge(rng):
    Z = _random_z(rng, 9, 5)
    sol = sparse_correlation(Z, 0.25)
    for j in range(5):
        for k in range(5):
            if j != k:
                assert sol.gamma[j, k] == pytest.approx(oracle_minimize(sol.correlation[j, k], 0.25), abs=1e-6)


def test_support_at_zero_is_complete(rng):
    Z = _random_z(rng)
    a = support_graph(sparse_correlation(Z, 0)).adjacency
    assert np.array_equal(a, 1 - np.eye(Z.p, dtype=np.int8))


def test_support_equals_strict_threshold(rng):
    for _ in range(100):
        n, p = rng.integers(3, 11), rng.integers(2, 16)
        Z = _random_z(rng, n, p)
        lam = rng.uniform(0, 1)
        a = support_graph(sparse_correlation(Z, lam)).adjacency.astype(bool)
        b = np.abs(Z.values.T @ Z.values) > lam
        np.fill_diagonal(b, False)
        assert np.array_equal(a, b)


def test_support_nested_in_lambda(rng):
    Z = _random_z(rng, 10, 8)
    lams = np.sort(rng.uniform(0, 1, 20))
    edges = [support_graph(sparse_correlation(Z, l)).edges() for l in lams]
    for lo, hi in zip(edges, edges[1:]):
        assert hi <= lo


def test_support_curve_matches_weight_curve(rng):
    Z = _random_z(rng, 7, 9)
    w = edge_weights(Z)
    curve = betti_curve(build_filtration(w))
    # Betti-0 of each support graph at every level equals the curve value there
    from sparseph.filtration import dfs_component_oracle

    for lam, b in curve.breakpoints:
        a = support_graph(sparse_correlation(Z, lam)).adjacency.astype(float)
        assert dfs_component_oracle(EdgeWeights(a), 0.5) == b


def test_objective_decreases_versus_unthresholded(rng):
    Z = _random_z(rng, 10, 6)
    for lam in (0.05, 0.2, 0.6):
        sol = sparse_correlation(Z, lam)
        assert objective(Z, sol.gamma, lam) <= objective(Z, sol.correlation, lam) + 1e-12


def test_objective_minimized_by_soft_threshold(rng):
    Z = _random_z(rng, 10, 4)
    lam = 0.15
    sol = sparse_correlation(Z, lam)
    base = objective(Z, sol.gamma, lam)
    for _ in range(50):
        pert = sol.gamma + rng.normal(0, 0.05, sol.gamma.shape) * (1 - np.eye(4))
        assert objective(Z, pert, lam) >= base - 1e-12


def test_solution_json():
    import json

    sol = sparse_correlation(normalize_columns(DataMatrix([[1.0, 2.0], [2.0, 1.0], [3.0, 3.5]])), 0.1)
    assert json.loads(sol.to_json())["lambda"] == 0.1
