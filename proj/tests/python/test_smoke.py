import math

import pytest

import wdexp


def test_lattice_and_kinetic_energy():
    pts = wdexp.lattice_points(1, 2.0, 3)
    assert [p[0] for p in pts] == [-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5]
    assert len(wdexp.lattice_points(3, 4.0, 2)) == 125
    assert wdexp.nu([-2.0, 2.0]) == 4.0


def test_partitions():
    assert len(wdexp.partitions(3)) == 5
    assert wdexp.bell_number(8) == 4140
    J, I = wdexp.partition_maps(10, [[1, 6], [2, 5], [3, 7, 9, 10], [4, 8]])
    assert J == [5, 6, 8, 10]
    assert I == [1, 2, 3, 4, 7, 9]
    assert wdexp.poisson_factorial_moment(2.0, 3) == pytest.approx(8.0, rel=1e-12)


def test_coefficients():
    m = wdexp.Model(K=6)
    t2 = m.coefficient(2, 1.0, 0.5)
    assert abs(t2 - m.coefficient_oracle(2, 1.0, 0.5)) <= 1e-10 * abs(t2)
    assert m.coefficient(1, 1.0, 0.5) == 0
    mean, se = m.expectation(0.0, 1.0, 0.5, 10, 1)
    assert mean == pytest.approx(m.coefficient(0, 1.0, 0.5), rel=1e-14)
    assert se == 0.0


def test_density_and_constants():
    m = wdexp.Model(K=6)
    assert m.dos_coefficient(0, 1.0, 0.3) == pytest.approx(m.dos_free(1.0, 0.3), rel=1e-12)
    assert wdexp.const_C1(1.0, 1) == pytest.approx(4 * math.sqrt(2), rel=1e-15)
    a = wdexp.main_error_bound(2, 1, 1.0, 0.3, 0.05)
    b = wdexp.main_error_bound(2, 1, 1.0, 0.3, 0.025)
    assert a / b == pytest.approx(4.0, rel=1e-12)


def test_budget_error():
    with pytest.raises(wdexp.BudgetError):
        wdexp.lattice_points(3, 1.0, 40)
