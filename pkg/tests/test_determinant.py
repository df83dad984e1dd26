import csv
import warnings

import numpy as np
import pytest

from isoresonance import D_derivative, D_of_lambda, Evaluator, verify_continuity
from isoresonance.determinant import (TruncationWarning, determinant_sweep, det_reg,
                                      log_det_reg, write_sweep_csv)
from isoresonance.errors import ValidationError
from isoresonance.potential import (BumpSum, BumpTerm, SquareWell, reflect, zero_potential)
from isoresonance.resonances.oracles import matching_function, pieces_of


def exact_well_D(V, lam):
    """Transfer-matrix Jost value f(lambda) e^{i lambda b} / (2 i lambda)."""
    b = V.half_width
    return matching_function(pieces_of(V))(lam) * np.exp(1j * lam * b) / (2j * lam)


def test_zero_potential_is_one():
    assert D_of_lambda(zero_potential(1), 1.0 - 1.0j).value == 1.0
    assert D_of_lambda(zero_potential(3), 2.0).value == 1.0


@pytest.mark.parametrize("lam", [1.0 - 0.5j, 2.5 + 0.3j, -0.7 - 1.2j, 4.0 - 0.1j])
def test_square_well_against_transfer_matrix(well, lam):
    D = D_of_lambda(well, lam).value
    assert abs(D - exact_well_D(well, lam)) < 1e-9 * max(1.0, abs(D))


def test_known_value(well):
    D = D_of_lambda(well, 1 - 0.5j).value
    assert abs(D - (0.44456564407219246 + 2.3352678716855033j)) < 1e-9


def test_reflection_symmetry(smooth_bump):
    V = BumpSum(1.0, 1, (BumpTerm(2.0, 0.3, 0.5), BumpTerm(-1.0, -0.4, 0.4)))
    lam = 1.3 - 0.6j
    D = D_of_lambda(V, lam).value
    assert D_of_lambda(V, -np.conj(lam)).value == pytest.approx(np.conj(D), rel=1e-12)
    assert D_of_lambda(reflect(V), lam).value == pytest.approx(D, rel=1e-10)


def test_d3_s_wave_of_spherical_well():
    # sector-0 det_1 equals (cos k'a - i lambda sin(k'a)/k') e^{i lambda a}
    depth, a, lam = -4.0, 1.0, 1.2 - 0.4j
    V = SquareWell(1.0, 3, depth, a)
    ev = Evaluator(V, 160, sectors=(0,), p=1)
    k = np.sqrt(lam ** 2 - depth + 0j)
    ref = (np.cos(k * a) - 1j * lam * np.sin(k * a) / k) * np.exp(1j * lam * a)
    assert ev(lam) == pytest.approx(ref, rel=1e-9)


def test_log_det_reg_and_det_reg():
    rng = np.random.default_rng(3)
    A = 0.1 * (rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6)))
    d1 = np.linalg.det(np.eye(6) + A)
    assert det_reg(1, A) == pytest.approx(d1, rel=1e-12)
    assert det_reg(2, A) == pytest.approx(d1 * np.exp(-np.trace(A)), rel=1e-12)
    assert np.exp(log_det_reg(3, A)) == pytest.approx(
        d1 * np.exp(-np.trace(A) + 0.5 * np.trace(A @ A)), rel=1e-12)
    with pytest.raises(ValidationError):
        det_reg(3, A)
    assert log_det_reg(1, -np.eye(2)).real == -np.inf


def test_product_method_beats_nystrom(well):
    lam = 2.0 - 0.5j
    ref = exact_well_D(well, lam)
    err_p = abs(D_of_lambda(well, lam, n=80).value - ref)
    err_n = abs(D_of_lambda(well, lam, n=80, method="nystrom").value - ref)
    assert err_p < 1e-3 * err_n


def test_derivative_against_transfer_matrix(well):
    lam, h = 1.5 - 0.2j, 1e-6
    ref = (exact_well_D(well, lam + h) - exact_well_D(well, lam - h)) / (2 * h)
    assert D_derivative(well, lam) == pytest.approx(ref, rel=1e-6)


def test_continuity_in_the_potential(smooth_bump):
    W = BumpSum(1.0, 1, (BumpTerm(1.0, 0.2, 0.5),))
    rep = verify_continuity(smooth_bump, W, [1.0 - 0.3j, 2.0], n=80, steps=8)
    assert rep.passed and rep.slope == pytest.approx(-1.0, abs=0.1)


def test_truncation_warning_d3():
    V = SquareWell(1.0, 3, -50.0, 1.0)
    with pytest.warns(TruncationWarning):
        Evaluator(V, 60, ell_max=1).log(5.0)


def test_sweep_csv(tmp_path, well):
    vals = determinant_sweep(well, [1.0, 1.0 - 0.5j, 2.0 + 0.1j], n=60)
    path = tmp_path / "s.csv"
    write_sweep_csv(vals, path)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["re(lambda)", "im(lambda)", "re(D)", "im(D)", "log|D|"]
    assert len(rows) == 4
    assert complex(float(rows[2][2]), float(rows[2][3])) == vals[1].value


def test_det_reg_examples_and_identities():
    assert det_reg(1, np.zeros((3, 3))) == 1 and det_reg(2, np.zeros((3, 3))) == 1
    assert det_reg(2, np.array([[1.0]])) == pytest.approx(2 / np.e)
    assert det_reg(2, np.array([[0.0, 1.0], [0.0, 0.0]])) == pytest.approx(1.0)
    rng = np.random.default_rng(5)
    A = 0.3 * rng.standard_normal((4, 4))
    B = 0.3 * rng.standard_normal((3, 3))
    AB = np.block([[A, np.zeros((4, 3))], [np.zeros((3, 4)), B]])
    for p in (1, 2):
        assert det_reg(p, AB) == pytest.approx(det_reg(p, A) * det_reg(p, B), rel=1e-12)
    S = np.eye(4) + 0.2 * rng.standard_normal((4, 4))
    for p in (1, 2):
        assert det_reg(p, S @ A @ np.linalg.inv(S)) == pytest.approx(det_reg(p, A), rel=1e-9)
    assert det_reg(1, A) == pytest.approx(det_reg(2, A) * np.exp(np.trace(A)), rel=1e-10)


def test_vanishes_at_bound_states(well):
    from isoresonance.resonances.contour import newton
    from isoresonance.resonances.oracles import square_well_bound_states
    ev = Evaluator(well)
    for kappa in square_well_bound_states(-10.0, 1.0):
        z, _ = newton(ev, 1j * kappa, tol=1e-12)
        assert abs(ev(z)) < 1e-8 and abs(z - 1j * kappa) < 1e-6


def test_node_doubling_on_a_grid(well):
    a, b = Evaluator(well, 200), Evaluator(well, 400)
    for lam in [complex(x, y) for x in np.linspace(0.5, 5, 4) for y in np.linspace(-2, 0, 4)]:
        assert abs(a(lam) - b(lam)) < 1e-8


def test_derivative_against_cauchy_integral(well):
    lam, r = 1.0 - 0.5j, 0.1
    ev = Evaluator(well)
    th = 2 * np.pi * np.arange(64) / 64
    cauchy = np.mean([ev(lam + r * np.exp(1j * t)) * np.exp(-1j * t) for t in th]) / r
    assert D_derivative(well, lam) == pytest.approx(cauchy, rel=1e-6)
    assert D_derivative(zero_potential(1), lam) == 0
