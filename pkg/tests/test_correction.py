import io

import numpy as np
import pytest
from scipy.special import gamma

from fractheta import (
    InvalidBeta,
    SingularSystem,
    ThetaScheme,
    UniformGrid,
    apply,
    exact_riemann_liouville_monomial,
    exponent_set,
    moment_residual,
    solve_starting_weights,
    weights_by_recurrence,
)
from fractheta.correction import ExponentSet, empty_correction

# (family, theta, beta, alpha) configurations used across the module
CONFIGS = [
    ("BT", 0.0, 1.1, 0.5),
    ("BT", 0.0, 1.1, -1.5),
    ("BN", 0.5, 0.5, 0.5),
    ("BT", 0.3, 1.1, -0.5),
    ("BN", 0.7, 1.1, -2.0),
]


class TestExponentSet:
    def test_single(self):
        e = exponent_set(1.1, 0.5)
        assert e.exponents == pytest.approx((1.1,)) and e.s == 1

    def test_three(self):
        e = exponent_set(1.1, -1.5)
        assert e.exponents == pytest.approx((1.1, 2.1, 3.1)) and e.s == 3
        assert e.cutoff == 3.5

    def test_empty(self):
        assert exponent_set(3.0, 0.5).s == 0

    def test_invalid_beta(self):
        for beta in (-1.0, -2.0, -5.0):
            with pytest.raises(InvalidBeta):
                exponent_set(beta, 0.5)

    def test_exponents_respect_cutoff(self):
        for beta in (-0.5, 0.25, 1.1, 2.0):
            for alpha in (-2.0, -1.5, -0.5, 0.5, 1.0):
                e = exponent_set(beta, alpha)
                ex = np.array(e.exponents)
                assert np.all(ex < 2 - min(1, alpha))
                assert np.all(np.diff(ex) > 0)
                np.testing.assert_allclose((ex - beta) % 1, 0, atol=1e-12)


class TestSolve:
    def test_one_by_one_closed_form(self):
        table = weights_by_recurrence(ThetaScheme("BT", 0.5, 0.0), 40)
        cset = solve_starting_weights(table, exponent_set(1.1, 0.5))
        n = np.arange(41)
        j = np.arange(41, dtype=float)
        conv = np.convolve(table.omega, j**1.1)[:41]
        closed = gamma(2.1) / gamma(2.6) * n**1.6 - conv
        np.testing.assert_allclose(cset.start_weights[1:, 0], closed[1:], rtol=1e-12, atol=1e-14)
        assert cset.start_weights[0, 0] == 0.0

    def test_empty_set_leaves_quadrature_unchanged(self):
        table = weights_by_recurrence(ThetaScheme("BT", 0.5, 0.0), 16)
        cset = solve_starting_weights(table, exponent_set(3.0, 0.5))
        assert cset.s == 0 and cset.start_weights.shape == (17, 0)
        grid = UniformGrid(1.0, 16)
        u = grid.nodes**3
        plain = apply(table, None, u, grid)
        corrected = apply(table, cset, u, grid)
        np.testing.assert_array_equal(plain.values, corrected.values)
        assert not corrected.used_correction

    def test_three_exponent_residual(self):
        table = weights_by_recurrence(ThetaScheme("BT", -1.5, 0.0), 64)
        cset = solve_starting_weights(table, exponent_set(1.1, -1.5), 64)
        assert cset.s == 3
        assert moment_residual(table, cset) <= 1e-9

    @pytest.mark.parametrize("family,theta,beta,alpha", CONFIGS)
    def test_residual_all_configs(self, family, theta, beta, alpha):
        table = weights_by_recurrence(ThetaScheme(family, alpha, theta), 256)
        cset = solve_starting_weights(table, exponent_set(beta, alpha))
        assert moment_residual(table, cset) <= 1e-9

    def test_duplicate_exponents_singular(self):
        table = weights_by_recurrence(ThetaScheme("BT", 0.5, 0.0), 8)
        with pytest.raises(SingularSystem):
            solve_starting_weights(table, ExponentSet(1.1, 0.5, (1.1, 1.1)))

    def test_too_many_weights(self):
        table = weights_by_recurrence(ThetaScheme("BT", -2.0, 0.0), 16)
        assert solve_starting_weights(table, exponent_set(-0.9, -2.0)).s == 5
        with pytest.raises(ValueError):
            solve_starting_weights(table, ExponentSet(0.1, -2.0, tuple(0.1 + q for q in range(9))))
        with pytest.raises(ValueError):
            solve_starting_weights(table, exponent_set(-0.9, -2.0), n_max=4)

    def test_read_only(self):
        cset = empty_correction(0.5, 4)
        assert cset.start_weights.shape == (5, 0)
        table = weights_by_recurrence(ThetaScheme("BT", 0.5, 0.0), 8)
        cset = solve_starting_weights(table, exponent_set(1.1, 0.5))
        with pytest.raises(ValueError):
            cset.start_weights[1, 0] = 0.0


@pytest.mark.parametrize("family,theta,beta,alpha", CONFIGS)
def test_monomial_exactness(family, theta, beta, alpha):
    n_steps = 128
    table = weights_by_recurrence(ThetaScheme(family, alpha, theta), n_steps)
    exps = exponent_set(beta, alpha)
    cset = solve_starting_weights(table, exps)
    grid = UniformGrid(1.0, n_steps)
    x = grid.nodes
    for ell in exps.exponents:
        got = apply(table, cset, x**ell, grid).values[1:]
        exact = exact_riemann_liouville_monomial(ell, alpha, x)[1:]
        assert np.max(np.abs(got - exact) / np.abs(exact)) <= 1e-8


def test_grid_independence():
    scheme = ThetaScheme("BN", -0.5, 0.5)
    exps = exponent_set(1.1, -0.5)
    small = solve_starting_weights(weights_by_recurrence(scheme, 32), exps)
    large = solve_starting_weights(weights_by_recurrence(scheme, 64), exps)
    np.testing.assert_allclose(large.start_weights[:33], small.start_weights, rtol=1e-13, atol=1e-15)
    # the same set serves every interval length
    table = weights_by_recurrence(scheme, 32)
    for L in (0.5, 1.0, 7.0):
        grid = UniformGrid(L, 32)
        got = apply(table, small, grid.nodes**1.1, grid).values[1:]
        exact = exact_riemann_liouville_monomial(1.1, -0.5, grid.nodes)[1:]
        assert np.max(np.abs(got - exact) / np.abs(exact)) <= 1e-8


@pytest.mark.parametrize("family,theta", [("BT", 0.0), ("BT", 0.3), ("BN", 0.3), ("BN", 0.9)])
@pytest.mark.parametrize("beta,alpha", [(1.1, 0.5), (0.5, 0.5), (1.1, 0.75)])
def test_single_weight_growth_is_bounded(family, theta, beta, alpha):
    exps = exponent_set(beta, alpha)
    assert exps.s == 1
    table = weights_by_recurrence(ThetaScheme(family, alpha, theta), 2048)
    w = solve_starting_weights(table, exps).start_weights[:, 0]
    n = np.arange(256, 2049)
    gam = min(1.0, alpha)
    a = np.abs(w[n]) * n ** (gam - alpha)
    assert np.all(np.isfinite(a))
    # no growth across the dyadic range: the tail never exceeds the head
    assert a[n >= 1024].max() <= 1.5 * a[n < 512].max()


def test_csv_dump():
    table = weights_by_recurrence(ThetaScheme("BT", -1.5, 0.0), 4)
    cset = solve_starting_weights(table, exponent_set(1.1, -1.5))
    buf = io.StringIO()
    cset.to_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "n,j,omega_nj"
    assert len(lines) == 1 + 5 * 3
