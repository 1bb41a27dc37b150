import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dunkl_analyzer.specfun.bessel import bessel_j
from dunkl_analyzer.specfun.kernels import (
    MultiplierKernel,
    Scheme,
    coefficient_identity_check,
    forward_coefficients,
    multiplier_zero_order,
    symmetric_coefficients,
)


def test_first_order_schemes_agree():
    """All three schemes reduce to 1 − j_λ for m = 1"""
    t = np.linspace(0.0, 20.0, 201)
    expected = 1.0 - bessel_j(0.5, t)
    for scheme in Scheme:
        np.testing.assert_allclose(MultiplierKernel(scheme, 1, 0.5)(t), expected, atol=1e-12)


def test_iterated_is_power():
    """(1 − j_λ)^m"""
    t = np.linspace(0.5, 10.0, 20)
    kernel = MultiplierKernel(Scheme.ITERATED, 3, 1.0)
    np.testing.assert_allclose(kernel(t), (1.0 - bessel_j(1.0, t)) ** 3, rtol=1e-12)


def test_series_branch_matches_direct_sum():
    """The small-t series and the direct sum meet at the switch"""
    lam = 1.0
    for scheme in (Scheme.FORWARD, Scheme.SYMMETRIC):
        kernel = MultiplierKernel(scheme, 2, lam)
        below, above = kernel(0.999), kernel(1.001)
        assert below == pytest.approx(above, rel=1e-2)


def test_coefficients():
    """Binomial coefficient tables"""
    assert forward_coefficients(3) == (1, -3, 3, -1)
    assert symmetric_coefficients(1) == {-1: -1, 0: 2, 1: -1}


def test_coefficient_identities():
    """Exact integer identities hold for every m <= 20"""
    assert all(coefficient_identity_check(m) for m in range(1, 21))
    with pytest.raises(ValueError):
        coefficient_identity_check(21)


def test_zero_orders():
    """Fitted order of the zero at 0 matches 2m, 2⌊(m+1)/2⌋, 2m"""
    for scheme in Scheme:
        for m in range(1, 5):
            kernel = MultiplierKernel(scheme, m, 0.5)
            assert multiplier_zero_order(kernel) == pytest.approx(kernel.zero_order, abs=0.05)


def test_invalid_order():
    """Order must be positive"""
    with pytest.raises(ValueError):
        MultiplierKernel(Scheme.FORWARD, 0, 0.0)


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=1, max_value=8), st.floats(min_value=-0.5, max_value=4.0),
       st.floats(min_value=0.0, max_value=200.0))
def test_symmetric_kernel_nonnegative(m, lam, t):
    """j**_{λ,m}(t) >= 0"""
    assert MultiplierKernel(Scheme.SYMMETRIC, m, lam)(t) >= -1e-13


if __name__ == "__main__":
    pytest.main([__file__])
