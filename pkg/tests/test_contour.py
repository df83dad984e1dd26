import numpy as np
import pytest

from isoresonance.errors import BudgetExceededError, ValidationError, ZeroOnBoundaryError
from isoresonance.resonances import SearchRegion, count_zeros, locate_zeros, merge_zeros
from isoresonance.resonances.contour import MemoFunction, Zero, newton, winding

BOX = SearchRegion(-2.0, 2.0, -2.0, 2.0, exclusion_radius=0.0)


def poly(roots):
    return lambda z: np.prod([z - r for r in roots])


def test_region_validation():
    with pytest.raises(ValidationError):
        SearchRegion(1.0, 0.0, -1.0, 1.0)
    with pytest.raises(ValidationError):
        SearchRegion(-1.0, 1.0, -1.0, 1.0)          # contains the pole at 0
    R = SearchRegion(0.5, 1.0, -1.0, -0.5)
    assert SearchRegion.from_dict(R.to_dict()) == R


def test_winding_counts_roots_inside():
    f = poly([0.3 + 0.2j, -1.1 - 0.7j, 3.0 + 0j])
    assert winding(f, BOX) == pytest.approx(2, abs=1e-9)
    assert count_zeros(lambda z: np.exp(z) * (z - 0.5j) ** 3, BOX) == 3


def test_locate_simple_and_multiple_zeros():
    roots = [0.3 + 0.2j, -1.1 - 0.7j, 1.4 - 1.3j]
    zs = locate_zeros(poly(roots + [1.4 - 1.3j]), BOX, tol=1e-10)
    got = {(round(z.lam.real, 8), round(z.lam.imag, 8)): z.multiplicity for z in zs}
    assert got == {(0.3, 0.2): 1, (-1.1, -0.7): 1, (1.4, -1.3): 2}


def test_locate_entire_function_zeros():
    # sin(pi z) has zeros at the integers
    zs = locate_zeros(lambda z: np.sin(np.pi * z), SearchRegion(-2.5, 2.5, -0.5, 0.5, 0.0))
    assert [round(z.lam.real, 9) for z in zs] == [-2, -1, 0, 1, 2]
    assert all(abs(z.lam.imag) < 1e-9 for z in zs)


def test_zero_on_boundary_is_reported():
    with pytest.raises(ZeroOnBoundaryError):
        winding(lambda z: z - 2.0, BOX)


def test_budget():
    roots = [complex(a, b) for a in np.linspace(-1.5, 1.5, 6) for b in (-0.5, 0.5)]
    with pytest.raises(BudgetExceededError):
        locate_zeros(poly(roots), BOX, max_cells=3)


def test_threads_give_identical_results():
    f = poly([0.3 + 0.2j, -1.1 - 0.7j, 1.4 - 1.3j, 0.31 + 0.2j])
    a = locate_zeros(f, BOX, tol=1e-10)
    b = locate_zeros(f, BOX, tol=1e-10, threads=4)
    assert [(z.lam, z.multiplicity) for z in a] == [(z.lam, z.multiplicity) for z in b]


def test_newton_multiplicity_and_radius():
    f = lambda z: (z - 1j) ** 3
    z, step = newton(f, 1.2 + 0.9j, multiplicity=3)
    assert abs(z - 1j) < 1e-9
    _, step = newton(lambda z: z - 100.0, 0.0, radius=1.0)
    assert step == np.inf


def test_merge_and_memo():
    merged = merge_zeros([Zero(1.0 + 0j, 1), Zero(1.0 + 1e-9j, 1), Zero(2.0 + 0j, 1)], 1e-8)
    assert [(round(z.lam.real, 6), z.multiplicity) for z in merged] == [(1.0, 2), (2.0, 1)]
    f = MemoFunction(lambda z: z * z)
    f(1 + 1j), f(1 + 1j)
    assert f.calls == 1


def test_synthetic_counts():
    R = SearchRegion(0.0, 2.0, -2.0, 0.0, exclusion_radius=0.0)
    assert count_zeros(lambda z: (z - (1 - 1j)) ** 2 * np.exp(z), R) == 2
    assert count_zeros(lambda z: (z - (1 - 1j)) * (z - (3 - 1j)), R) == 1
    zs = locate_zeros(lambda z: (z - (1 - 1j)) ** 2 * np.exp(z), R)
    assert len(zs) == 1 and zs[0].multiplicity == 2 and abs(zs[0].lam - (1 - 1j)) < 1e-8
