import pytest

from app.core.exceptions import ParameterError
from app.qmc.weights import Weights, parse_weights


def test_product_weights():
    """gamma_u is the product over u; the empty set has weight 1."""
    w = parse_weights("product:0.5,0.25", 2)
    assert w.is_product
    assert w.gamma(()) == 1.0
    assert w.gamma((0, 1)) == pytest.approx(0.125)


def test_uniform_and_geometric():
    """`product:g` repeats g; `geometric:c` gives gamma_j = c^j."""
    assert parse_weights("product:2", 3).product == (2.0, 2.0, 2.0)
    assert parse_weights("geometric:0.5", 3).product == pytest.approx((0.5, 0.25, 0.125))


def test_map_weights():
    """Explicit subset weights use 1-based coordinates; missing subsets weigh 0."""
    w = parse_weights("map:1=0.5;1,2=0.25", 2)
    assert not w.is_product
    assert w.gamma((0,)) == 0.5
    assert w.gamma((0, 1)) == 0.25
    assert w.gamma((1,)) == 0.0
    assert dict(w.subsets()) == {(0,): 0.5, (0, 1): 0.25}


def test_invalid_weights():
    """Negative weights, foreign coordinates and unknown forms are rejected."""
    with pytest.raises(ParameterError):
        parse_weights("product:-1", 2)
    with pytest.raises(ParameterError):
        parse_weights("map:3=1", 2)
    with pytest.raises(ParameterError):
        parse_weights("fancy:1", 2)
    with pytest.raises(ParameterError):
        Weights(s=13, subset_weights=(((0,), 1.0),))


def test_zero_weights():
    """Weights with no positive entry are detected without enumerating subsets."""
    assert Weights.uniform(40, 0.0).is_zero()
    assert not Weights.uniform(40, 0.1).is_zero()
