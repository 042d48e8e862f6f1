import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from app.core.exceptions import EnumerationLimitError, IncompatibleError, ParameterError
from app.qmc.net import antithetic, to_array
from app.qmc.sobol import sobol_net
from app.qmc.sobolev import (
    SobolevSpaceParams,
    bernoulli,
    bernoulli_numbers,
    kernel,
    kernel_factor,
    kernel_matrix,
    walsh_truncated_wce_squared,
    wce_compare,
    worst_case_error,
    worst_case_error_quadrature,
)
from app.qmc.weights import Weights


def _space(s=1, alpha=2, gamma=1.0):
    return SobolevSpaceParams(alpha=alpha, weights=Weights.uniform(s, gamma))


def test_bernoulli_numbers():
    """Test the first Bernoulli numbers with B_1 = -1/2."""
    numbers = bernoulli_numbers(6)
    assert numbers[:5] == (Fraction(1), Fraction(-1, 2), Fraction(1, 6), Fraction(0), Fraction(-1, 30))
    assert numbers[6] == Fraction(1, 42)


def test_bernoulli_low_degree_polynomials():
    """Test exact coefficients of B_1, B_2 and B_4."""
    assert bernoulli(1).coeffs == (Fraction(-1, 2), Fraction(1))
    assert bernoulli(2).coeffs == (Fraction(1, 6), Fraction(-1), Fraction(1))
    assert bernoulli(4).coeffs == (Fraction(-1, 30), 0, 1, -2, 1)


@pytest.mark.parametrize("r", range(1, 9))
def test_bernoulli_identities(r):
    """B_r' = r B_{r-1}, int B_r = 0 and B_r(1 - x) = (-1)^r B_r(x)."""
    poly = bernoulli(r)
    assert poly.derivative() == tuple(r * c for c in bernoulli(r - 1).coeffs)
    assert poly.integral() == 0
    x = Fraction(2, 7)
    assert poly(1 - x) == (-1) ** r * poly(x)


def test_bernoulli_float_evaluation():
    """Test vectorized evaluation on float arrays."""
    x = np.linspace(0, 1, 11)
    assert np.allclose(bernoulli(2)(x), x**2 - x + 1 / 6)


def test_bernoulli_negative_degree():
    """Test that negative degrees are rejected."""
    with pytest.raises(ParameterError):
        bernoulli(-1)


def test_kernel_at_origin():
    """K(0, 0) = 1 + 31/120 for alpha = 2."""
    assert kernel(_space(), [0.0], [0.0]) == pytest.approx(1 + 31 / 120, rel=1e-14)


def test_kernel_symmetric_positive_semidefinite(rng):
    """Test that Gram matrices are symmetric with no negative eigenvalues."""
    xs = rng.random((20, 3))
    gram = kernel_matrix(_space(3), xs, xs)
    assert np.allclose(gram, gram.T, atol=1e-14)
    assert np.linalg.eigvalsh(gram).min() > -1e-10


@pytest.mark.parametrize("alpha", [2, 3, 4])
def test_kernel_factor_integrates_to_zero(alpha):
    """Each one-dimensional factor has zero mean in y."""
    for x in (0.0, 0.3, 0.8):
        value, _ = integrate.quad(lambda y: float(kernel_factor(alpha, x, y)), 0, 1, points=[x])
        assert abs(value) < 1e-10


def test_kernel_zero_weights(rng):
    """Test that zero weights leave the constant kernel 1."""
    params = _space(2, gamma=0.0)
    assert np.all(kernel_matrix(params, rng.random((5, 2)), rng.random((4, 2))) == 1.0)


def test_kernel_map_weights_match_product(rng):
    """Test that product weights written as a subset map give the same kernel."""
    xs = rng.random((6, 2))
    product = SobolevSpaceParams(2, Weights.from_product((0.5, 0.2)))
    mapped = SobolevSpaceParams(2, Weights.from_map(2, {(0,): 0.5, (1,): 0.2, (0, 1): 0.1}))
    assert np.allclose(kernel_matrix(product, xs, xs), kernel_matrix(mapped, xs, xs), rtol=1e-12)


def test_kernel_argument_checks():
    """Test dimension mismatches and alpha < 2."""
    with pytest.raises(IncompatibleError):
        kernel(_space(2), [0.1], [0.2])
    with pytest.raises(ParameterError):
        SobolevSpaceParams(alpha=1, weights=Weights.uniform(1))


def test_wce_single_point():
    """The origin alone has error sqrt(31/120) for alpha = 2."""
    result = worst_case_error(_space(), [[0.0]])
    assert result.value == pytest.approx(math.sqrt(31 / 120), rel=1e-13)
    assert result.n_points == 1
    assert result.residual == 0.0


def test_wce_zero_weights(rng):
    """Test that zero weights give zero error."""
    result = worst_case_error(_space(3, gamma=0.0), rng.random((7, 3)))
    assert result.value == 0.0


def test_wce_duplication_invariance(rng):
    """Test that repeating every point leaves the error unchanged."""
    pts = rng.random((9, 2))
    once = worst_case_error(_space(2), pts).squared
    twice = worst_case_error(_space(2), np.vstack([pts, pts])).squared
    assert twice == pytest.approx(once, rel=1e-12)


@pytest.mark.parametrize("s, n", [(1, 8), (1, 64), (2, 16), (2, 64)])
def test_wce_agrees_with_quadrature(rng, s, n):
    """Test the collapsed double sum against the three-term quadrature formula."""
    pts = rng.random((n, s))
    direct = worst_case_error(_space(s), pts).squared
    assert worst_case_error_quadrature(_space(s), pts) == pytest.approx(direct, abs=1e-5)


def test_wce_of_net_agrees_with_quadrature():
    """Test the quadrature agreement on a Sobol' net."""
    pts = to_array(sobol_net(2, 4))
    direct = worst_case_error(_space(2), pts).squared
    assert worst_case_error_quadrature(_space(2), pts) == pytest.approx(direct, abs=1e-5)


def test_wce_decreases_along_sobol():
    """Test that the error falls as m grows."""
    errors = [worst_case_error(_space(2), to_array(sobol_net(2, m))).value for m in range(2, 9)]
    assert all(x > y for x, y in zip(errors, errors[1:]))


def test_wce_empty_and_oversized_sets():
    """Test that empty sets and sets beyond the point limit are refused."""
    with pytest.raises(IncompatibleError):
        worst_case_error(_space(), np.zeros((0, 1)))
    with pytest.raises(EnumerationLimitError):
        worst_case_error(_space(), np.zeros((2**13 + 1, 1)))


def test_wce_compare():
    """Antithetic comparison reports b N points and matches the direct computation."""
    net = sobol_net(2, 5)
    report = wce_compare(_space(2), net)
    assert report.n_plain == 32
    assert report.n_antithetic == 64
    expected = worst_case_error(_space(2), to_array(antithetic(net))).value
    assert report.wce_antithetic == pytest.approx(expected, rel=1e-12)
    with pytest.raises(IncompatibleError):
        wce_compare(_space(3), net)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_walsh_side_matches_grid_error(m):
    """The dual-net Walsh sum is the error against the b^-K grid rule."""
    resolution = 6
    net = sobol_net(1, m, records=[])
    params = _space()
    walsh_value = walsh_truncated_wce_squared(params, net, resolution)
    pts = to_array(net)
    grid = np.arange(2**resolution, dtype=np.float64)[:, None] / 2**resolution
    expected = (
        kernel_matrix(params, pts, pts).mean()
        - 2 * kernel_matrix(params, pts, grid).mean()
        + kernel_matrix(params, grid, grid).mean()
    )
    assert walsh_value == pytest.approx(expected, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_walsh_side_converges_in_resolution(m):
    """The truncated Walsh sum approaches the exact squared error as K grows."""
    net = sobol_net(1, m, records=[])
    params = _space()
    exact = worst_case_error(params, to_array(net)).squared
    gaps = [abs(walsh_truncated_wce_squared(params, net, K) - exact) for K in range(3, 9)]
    assert all(x > y for x, y in zip(gaps, gaps[1:]))
    assert gaps[-1] < 2e-3


def test_walsh_side_decreases_with_m():
    """At fixed resolution the Walsh sum falls with m and vanishes at m = K."""
    values = [walsh_truncated_wce_squared(_space(), sobol_net(1, m, records=[]), 6) for m in range(1, 7)]
    assert all(v >= -1e-12 for v in values)
    assert all(x > y for x, y in zip(values, values[1:]))
    assert values[-1] == 0.0


def test_walsh_side_needs_one_dimension():
    """Test that the Walsh-side sum refuses nets with s > 1."""
    with pytest.raises(IncompatibleError):
        walsh_truncated_wce_squared(_space(2), sobol_net(2, 2), 4)
