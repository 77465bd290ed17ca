"""Brute-force grid oracle: cluster counts, residual table, geometry."""

import numpy as np
import pytest

from mnov import (
    SolverConfig,
    brute_force_oracle,
    grid_residual_table,
    milnor_critical_points,
    parse_rational,
)
from mnov.milnor import systems
from mnov.milnor.oracle import cell_diameter


@pytest.fixture(scope="module")
def quadratic_unknot():
    return parse_rational("4*w+3*(w^2+z^2)")


def test_two_clusters_match_newton_points(quadratic_unknot):
    clusters = brute_force_oracle(quadratic_unknot, 1.0)
    points = milnor_critical_points(quadratic_unknot, 1.0)
    assert len(clusters) == 2
    for c in clusters:
        dists = [
            abs(c.z - p.z) ** 2 + abs(c.w - p.w) ** 2 for p in points
        ]
        assert min(dists) ** 0.5 < 1e-3
        assert c.residual < 1e-4
        assert c.cell_count >= 1


def test_empty_for_tame_product():
    F = parse_rational("z*w/(4*z-1)")
    assert brute_force_oracle(F, 1.0) == []


def test_degenerate_circles_attract_two_clusters():
    F = parse_rational("(z^2+w^2)/(z^2-w^2)")
    clusters = brute_force_oracle(F, 1.0)
    assert len(clusters) == 2
    for c in clusters:
        norm = (abs(c.z) ** 2 + abs(c.w) ** 2) ** 0.5
        assert norm == pytest.approx(1.0, abs=1e-6)


def test_clusters_sorted_deterministically(quadratic_unknot):
    a = brute_force_oracle(quadratic_unknot, 1.0)
    b = brute_force_oracle(quadratic_unknot, 1.0)
    assert a == b
    keys = [(c.z.real, c.z.imag, c.w.real, c.w.imag) for c in a]
    assert keys == sorted(keys)


def test_residual_table_shape_and_ranges(quadratic_unknot):
    cfg = SolverConfig(grid_resolution=16)
    table = grid_residual_table(quadratic_unknot, 1.0, cfg)
    assert table.shape == (16**3, 4)
    eta, xi1, xi2, rho = table.T
    assert eta.min() > 0.0 and eta.max() < np.pi / 2
    assert xi1.min() >= 0.0 and xi1.max() < 2 * np.pi
    assert xi2.min() >= 0.0 and xi2.max() < 2 * np.pi
    assert rho.min() >= 0.0 and rho.max() <= 2.0


def test_residual_table_matches_point_residual(quadratic_unknot):
    cfg = SolverConfig(grid_resolution=8)
    r = 1.0
    table = grid_residual_table(quadratic_unknot, r, cfg)
    pack = systems.build_pack(quadratic_unknot)
    for row in table[::97]:
        eta, xi1, xi2, rho = row
        z = r * np.cos(eta) * np.exp(1j * xi1)
        w = r * np.sin(eta) * np.exp(1j * xi2)
        direct = systems.point_residual(pack, z, w, 1e-10)
        assert rho == pytest.approx(direct, abs=1e-12)


def test_cell_diameter_scales_with_radius():
    cfg = SolverConfig(grid_resolution=48)
    assert cell_diameter(2.0, cfg) == pytest.approx(
        2 * cell_diameter(1.0, cfg)
    )
    assert cell_diameter(1.0, cfg) == pytest.approx(2 * np.pi / 48)
