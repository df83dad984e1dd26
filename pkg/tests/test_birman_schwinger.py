import numpy as np
import pytest

from isoresonance.birman_schwinger import assemble_K, hilbert_schmidt_norm, trace
from isoresonance.errors import ValidationError
from isoresonance.potential import BumpSum, BumpTerm, SquareWell, scale


def test_exact_trace_of_square_well(well):
    lam = 1.0 - 0.5j
    K = assemble_K(well, lam, 80)
    # tr K = (i / 2 lambda) int V
    assert K.trace_exact == pytest.approx(1j / (2 * lam) * -20.0, rel=1e-12)
    assert trace(K) == pytest.approx(K.trace_exact, rel=1e-12)


def test_hilbert_schmidt_norm_square_well(well):
    # ||K||_HS^2 = int V^2 * 2R / (4 lambda^2) for real lambda
    K = assemble_K(well, 2.0, 60)
    assert hilbert_schmidt_norm(K) == pytest.approx(np.sqrt(200 * 2 / 16), rel=1e-12)


def test_linear_in_the_potential(smooth_bump):
    lam = 1.5 - 0.2j
    K1 = assemble_K(smooth_bump, lam, 60)
    K2 = assemble_K(scale(smooth_bump, -2.5), lam, 60)
    assert np.allclose(K2.entries, -2.5 * K1.entries, rtol=1e-13, atol=0)
    assert K2.trace_sq == pytest.approx(6.25 * K1.trace_sq, rel=1e-12)


def test_trace_sq_converges(smooth_bump):
    lam = 2.0 - 0.3j
    a = assemble_K(smooth_bump, lam, 120).trace_sq
    b = assemble_K(smooth_bump, lam, 240).trace_sq
    assert a == pytest.approx(b, rel=1e-10)


def test_d3_needs_valid_sector():
    V = BumpSum(1.0, 3, (BumpTerm(1.0, 0.0, 0.8),))
    with pytest.raises(ValidationError):
        assemble_K(V, 1.0, 40)
    with pytest.raises(ValidationError):
        assemble_K(V, 1.0, 40, ell=12)
    K = assemble_K(V, 1.0, 40, ell=1)
    assert K.entries.shape == (K.n, K.n) and K.ell == 1


@pytest.mark.parametrize("lam,expected", [(1j, -10.0), (-1j, 10.0)])
def test_trace_on_the_imaginary_axis(well, lam, expected):
    assert trace(assemble_K(well, lam, 60)) == pytest.approx(expected, abs=1e-10)


def test_zero_potential_matrix():
    from isoresonance.potential import zero_potential
    K = assemble_K(zero_potential(1), 1.0, 20)
    assert not np.any(K.entries) and trace(K) == 0 and hilbert_schmidt_norm(K) == 0


def test_hs_norm_equals_singular_value_sum(smooth_bump):
    from isoresonance.freeresolvent import singular_values
    K = assemble_K(smooth_bump, 1.0 - 0.5j, 60)
    sv = singular_values(K.symmetrized())
    assert hilbert_schmidt_norm(K) == pytest.approx(np.sqrt(np.sum(sv ** 2)), rel=1e-9)


def test_hs_norm_stable_in_d3():
    V = SquareWell(1.0, 3, -10.0, 1.0)
    # plain Nystrom sum across the kernel kink: second-order convergence
    a, b, c = (hilbert_schmidt_norm(assemble_K(V, 1.0 - 0.5j, n, ell=0)) for n in (100, 200, 400))
    assert np.isfinite(a) and abs(b - c) < abs(a - b) / 3 and abs(b - c) < 1e-5 * c
