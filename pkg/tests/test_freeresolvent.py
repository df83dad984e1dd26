import csv

import numpy as np
import pytest

from isoresonance.errors import PoleProximityError, ValidationError
from isoresonance.freeresolvent import (assemble_cutoff_resolvent, export_matrix_csv,
                                        hilbert_schmidt_norm, kernel_1d, kernel_3d,
                                        kernel_radial, operator_norm, singular_values,
                                        verify_resolvent_bound, verify_singular_decay)


def test_kernel_1d_formula_and_symmetry():
    lam = 1.3 - 0.4j
    assert kernel_1d(0.2, -0.5, lam) == pytest.approx(1j / (2 * lam) * np.exp(1j * lam * 0.7))
    assert kernel_1d(0.2, -0.5, lam) == kernel_1d(-0.5, 0.2, lam)


def test_kernel_1d_rejects_the_pole():
    with pytest.raises(PoleProximityError):
        kernel_1d(0.0, 0.1, 1e-4)


def test_kernel_3d():
    assert kernel_3d(0.5, 2.0) == pytest.approx(np.exp(1j) / (2 * np.pi))
    with pytest.raises(ValidationError):
        kernel_3d(0.0, 1.0)


def test_radial_s_wave_closed_form():
    lam = 0.9 - 0.3j
    r, rp = 0.3, 0.8
    ref = np.sin(lam * r) * np.exp(1j * lam * rp) / lam
    assert kernel_radial(0, r, rp, lam) == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("ell", [0, 1, 3])
def test_radial_kernel_zero_energy_limit(ell):
    r, rp = 0.4, 0.7
    ref = r ** (ell + 1) * rp ** (-ell) / (2 * ell + 1)
    assert kernel_radial(ell, r, rp, 0.0) == pytest.approx(ref)
    # the correction is O(lambda) (the s-wave has an i lambda r r' term)
    assert kernel_radial(ell, r, rp, 1e-8) == pytest.approx(ref, rel=1e-7)


@pytest.mark.parametrize("ell", [0, 2, 5])
def test_radial_kernel_is_a_green_function(ell):
    # derivative jump -1 across r = r', and the radial ODE away from it
    lam, rp, h = 1.1 - 0.2j, 0.6, 1e-4
    G = lambda r: kernel_radial(ell, r, rp, lam)
    right = (-3 * G(rp) + 4 * G(rp + h) - G(rp + 2 * h)) / (2 * h)
    left = (3 * G(rp) - 4 * G(rp - h) + G(rp - 2 * h)) / (2 * h)
    assert right - left == pytest.approx(-1.0, abs=1e-6)
    r, h = 0.3, 1e-4
    lhs = -(G(r + h) - 2 * G(r) + G(r - h)) / h ** 2 + (ell * (ell + 1) / r ** 2 - lam ** 2) * G(r)
    assert abs(lhs) < 1e-5 * (1 + abs(G(r)))


def test_radial_kernel_validation():
    with pytest.raises(ValidationError):
        kernel_radial(9, 0.1, 0.2, 1.0)
    with pytest.raises(ValidationError):
        kernel_radial(0, 0.0, 0.2, 1.0)


def test_nystrom_and_product_norms_converge_together():
    lam = 2.0 - 0.5j
    a = operator_norm(assemble_cutoff_resolvent(1.0, lam, 80, 1, method="product"))
    b = operator_norm(assemble_cutoff_resolvent(1.0, lam, 160, 1, method="product"))
    c = operator_norm(assemble_cutoff_resolvent(1.0, lam, 320, 1, method="nystrom"))
    assert a == pytest.approx(b, rel=1e-8)
    assert c == pytest.approx(b, rel=1e-3)


def test_hilbert_schmidt_norm_on_real_axis():
    # |k|^2 = 1 / (4 lambda^2) on [-1, 1]^2 for real lambda
    A = assemble_cutoff_resolvent(1.0, 1.5, 60, 1)
    assert hilbert_schmidt_norm(A) == pytest.approx(2 / (2 * 1.5), rel=1e-12)
    sv = singular_values(A)
    assert np.all(np.diff(sv) <= 1e-14) and sv[0] == pytest.approx(operator_norm(A), rel=1e-9)


def test_d3_assembly_needs_a_sector():
    with pytest.raises(ValidationError):
        assemble_cutoff_resolvent(1.0, 1.0, 40, 3)
    with pytest.raises(ValidationError):
        assemble_cutoff_resolvent(1.0, 1.0, 40, 1, method="galerkin")


def test_resolvent_bound_report():
    grid = [1.0 - 0.5j, 3.0 - 1.0j, -2.0 + 0.2j]
    rep = verify_resolvent_bound(1.0, 1, grid, n=60)
    assert rep.finite and rep.alpha == 2.0 and len(rep.values) == 3
    rep3 = verify_resolvent_bound(1.0, 3, grid[:1], n=40, ell_max=2)
    assert rep3.finite and len(rep3.values) == 3


def test_singular_value_decay_d1():
    rep = verify_singular_decay(1.0, 1, 1.0 - 0.5j, 200)
    assert rep.passed and rep.slope < -1.9


def test_export_matrix_csv(tmp_path):
    A = assemble_cutoff_resolvent(1.0, 1.0, 8, 1)
    path = tmp_path / "m.csv"
    export_matrix_csv(A, path)
    rows = list(csv.reader(open(path)))
    assert len(rows) == 8 and len(rows[0]) == 8
    re, im = map(float, rows[2][5].split(","))
    assert complex(re, im) == A.entries[2, 5]


def test_kernel_1d_examples():
    assert kernel_1d(0.0, 0.0, 1j) == pytest.approx(0.5)
    assert kernel_1d(1.0, 0.0, 1.0) == pytest.approx(-0.420735 + 0.270151j, abs=1e-6)
    assert kernel_1d(0.0, 0.0, -1j) == pytest.approx(-0.5)


def test_kernel_3d_zero_energy_and_pde_residual():
    assert kernel_3d(1.0, 0.0) == pytest.approx(1 / (4 * np.pi))
    assert kernel_3d(2.0, 0.0) == pytest.approx(1 / (8 * np.pi))
    lam, h = 1.2 - 0.3j, 1e-3
    x = np.array([0.8, 0.5, -0.3])       # r ~ 1; the O(h^2) error grows like r^-5
    G = lambda p: kernel_3d(np.linalg.norm(p), lam)
    lap = sum(G(x + h * e) - 2 * G(x) + G(x - h * e) for e in np.eye(3)) / h ** 2
    assert abs(-lap - lam ** 2 * G(x)) < 1e-6


def test_radial_kernel_symmetry():
    for ell in (0, 1, 4):
        assert kernel_radial(ell, 0.3, 0.8, 2.0 - 0.7j) == pytest.approx(
            kernel_radial(ell, 0.8, 0.3, 2.0 - 0.7j), rel=1e-12)


def test_imaginary_axis_symmetry_and_decay():
    A = assemble_cutoff_resolvent(1.0, 2j, 40, 1)
    assert np.allclose(A.symmetrized(), A.symmetrized().T, rtol=1e-13)
    assert np.all(np.diag(A.entries).real > 0)
    norms = [operator_norm(assemble_cutoff_resolvent(1.0, 1j * t, 60, 1)) for t in (1, 2, 4, 8)]
    assert all(a > b for a, b in zip(norms, norms[1:]))


def test_norm_routines_on_small_matrices():
    from scipy.linalg import svdvals
    assert operator_norm(np.zeros((3, 3))) == 0.0
    assert operator_norm(np.array([[2 - 1j]])) == pytest.approx(np.sqrt(5))
    rng = np.random.default_rng(8)
    A = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    assert operator_norm(A) == pytest.approx(svdvals(A)[0], rel=1e-9)
    assert np.allclose(singular_values(np.diag([3.0, 1.0, 2.0])), [3, 2, 1])
    Q, _ = np.linalg.qr(rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5)))
    assert np.allclose(singular_values(Q @ A), singular_values(A), rtol=1e-10)
    K = assemble_cutoff_resolvent(1.0, 1.0 - 0.5j, 40, 1)
    assert operator_norm(K) <= hilbert_schmidt_norm(K) * (1 + 1e-12)


def test_operator_norm_node_doubling():
    a = operator_norm(assemble_cutoff_resolvent(1.0, 1.0 - 0.5j, 100, 1, method="product"))
    b = operator_norm(assemble_cutoff_resolvent(1.0, 1.0 - 0.5j, 200, 1, method="product"))
    assert abs(a - b) < 1e-8
