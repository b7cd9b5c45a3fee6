import math

import numpy as np
import pytest
from scipy.integrate import quad

import fracperim as fp


def test_interval_closed_form():
    s, h = 0.5, 1.0 / 256
    table = fp.build_table(fp.KernelParams(1, s), h)
    e = fp.rasterize(fp.Shape.parse("kind=interval a=0 b=1"), h)
    assert fp.fractional_perimeter(e, table) == pytest.approx(2.0 / (s * (1 - s)), rel=1e-6)


def test_grid_set_round_trip():
    occ = np.zeros((12, 16), dtype=bool)
    occ[3:9, 4:13] = True
    e = fp.GridSet(occ, 0.25, origin=(-2.0, -1.5))
    assert e.count() == 54
    assert e.measure() == pytest.approx(54 * 0.0625)
    assert np.array_equal(e.to_array(), occ)
    assert e.spec.cells == [16, 12]


def test_rearrangement_preserves_values_and_lowers_energy():
    y, x = np.mgrid[-1.5:1.5:48j, -1.5:1.5:48j]
    g = np.exp(-(x - 0.3) ** 2 / 0.1 - y**2 / 0.3)
    g[np.hypot(x, y) > 1.2] = 0.0
    f = fp.GridFunction(g, 3.0 / 48, origin=(-1.5, -1.5))
    fs = fp.symmetric_rearrangement(f)
    assert np.array_equal(np.sort(fs.to_array().ravel()), np.sort(g.ravel()))
    assert fp.dirichlet_energy(fs) <= fp.dirichlet_energy(f)


def test_deficit_of_ellipse():
    h = 1.0 / 16
    table = fp.build_table(fp.KernelParams(2, 0.5), h)
    _, shape = fp.generate_family("ellipse-ecc", [0.6])[0]
    report = fp.s_deficit(fp.rasterize(shape, h), table)
    assert report.Ds > report.error_budget
    assert 0.0 < report.A < 2.0
    assert report.csv_row().count(",") == 12


def test_asymmetry_of_disk_is_small():
    h = 1.0 / 32
    e = fp.rasterize(fp.Shape.parse("kind=ball r=1 cx=0 cy=0"), h)
    assert fp.fraenkel_asymmetry(e).A < 4 * h
    assert fp.equivalent_radius(e) == pytest.approx(1.0, abs=h)


def test_kernel_is_normalized():
    for dim, weight in ((1, lambda t: 2.0), (2, lambda t: 2.0 * math.pi * t)):
        params = fp.KernelParams(dim, 0.5)
        for z in (0.05, 0.7, 3.0):
            mass, _ = quad(lambda t: weight(t) * fp.poisson_kernel(params, t, z), 0.0, math.inf, epsabs=1e-11)
            assert mass == pytest.approx(1.0, abs=1e-7)


def test_errors_are_translated():
    empty = fp.GridSet(np.zeros(8, dtype=bool), 0.125)
    with pytest.raises(fp.FracperimError, match="empty-set"):
        fp.equivalent_radius(empty)
    with pytest.raises(fp.FracperimError):
        fp.KernelParams(2, 1.5)
