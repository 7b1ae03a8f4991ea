import math

import numpy as np
import pytest

from reluscope.network import (DimensionError, Network, Unit,
                               uniform_division)
from reluscope.targets import TargetFunction, get_target
from reluscope.verify import (XY_HARDNESS_NOTE, convergence_sweep,
                              default_grid_size, grid_points, hardness_sweep,
                              sup_error)

TWO_PI = 2 * math.pi


def wrap_as_target(net, L):
    """Expose a network's own response as a target function."""
    if net.input_dim == 1:
        f = lambda x: net.evaluate_many(np.asarray(x, dtype=float))
    else:
        f = lambda pts: net.evaluate_many(np.asarray(pts, dtype=float))
    return TargetFunction(name="self", params={}, input_dim=net.input_dim,
                          domain_length=L, f=f)


class TestGrids:
    def test_1d_grid_shape_and_endpoints(self):
        pts = grid_points(2.0, 1, 5)
        assert pts.shape == (5, 1)
        np.testing.assert_allclose(pts[:, 0], [0, 0.5, 1.0, 1.5, 2.0])

    def test_2d_grid_is_tensor_product(self):
        pts = grid_points(1.0, 2, 3)
        assert pts.shape == (9, 2)
        assert tuple(pts[0]) == (0.0, 0.0)
        assert tuple(pts[-1]) == (1.0, 1.0)
        # every axis value appears with every other
        assert {tuple(p) for p in pts} == {(a, b)
                                           for a in (0.0, 0.5, 1.0)
                                           for b in (0.0, 0.5, 1.0)}

    def test_defaults(self):
        assert default_grid_size(1) == 4096
        assert default_grid_size(2) == 256

    def test_rejects_tiny_grid_and_high_dim(self):
        with pytest.raises(ValueError):
            grid_points(1.0, 1, 1)
        with pytest.raises(DimensionError):
            grid_points(1.0, 3, 8)


class TestSupError:
    def test_network_against_itself_is_zero(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            J = int(rng.integers(1, 30))
            net = Network.from_arrays(rng.uniform(-2, 2, (J, 1)),
                                      rng.uniform(-2, 2, J),
                                      rng.uniform(-2, 2, J),
                                      float(rng.uniform(-1, 1)))
            stats = sup_error(wrap_as_target(net, 1.0), net, 512)
            assert stats.max_error <= 1e-12
            assert stats.mse <= 1e-24

    def test_parabola_attains_bound_at_right_endpoint(self):
        target = get_target("poly", coeffs=(0.0, 0.0, 1.0), L=1.0)
        from reluscope.construct import build_network
        net = build_network(target, uniform_division(2, 1.0))
        stats = sup_error(target, net, 4097)
        assert stats.max_error == pytest.approx(0.5, abs=1e-12)
        assert stats.argmax[0] == pytest.approx(1.0, abs=1e-12)

    def test_affine_exact(self):
        target = get_target("poly", coeffs=(2.0, 3.0), L=1.0)
        from reluscope.construct import build_network
        net = build_network(target, uniform_division(4, 1.0))
        assert sup_error(target, net).max_error <= 1e-12

    def test_grid_refinement_stable(self):
        # piecewise-linear vs smooth: doubling the default grid moves the
        # measured sup error by well under 5 percent
        target = get_target("sin", M=3.0, L=TWO_PI)
        from reluscope.construct import build_network
        for J in (10, 80):
            net = build_network(target, uniform_division(J, TWO_PI))
            e1 = sup_error(target, net, 2048).max_error
            e2 = sup_error(target, net, 4096).max_error
            assert abs(e1 - e2) <= 0.05 * e2

    def test_2d_matches_brute_force(self):
        rng = np.random.default_rng(8)
        net = Network.from_arrays(rng.uniform(-1, 1, (6, 2)),
                                  rng.uniform(-1, 1, 6),
                                  rng.uniform(-1, 1, 6), 0.3)
        target = get_target("xy", L=1.0)
        stats = sup_error(target, net, 17)
        worst = 0.0
        total = 0.0
        axis = np.linspace(0, 1, 17)
        for x in axis:
            for y in axis:
                r = abs(net.evaluate((x, y)) - x * y)
                worst = max(worst, r)
                total += r * r
        assert stats.max_error == pytest.approx(worst, abs=1e-12)
        assert stats.mse == pytest.approx(total / 17 ** 2, abs=1e-12)

    def test_dimension_mismatch(self):
        net = Network(1, (Unit((1.0,), 0.0, 1.0),), 0.0)
        with pytest.raises(DimensionError):
            sup_error(get_target("xy", L=1.0), net)


class TestConvergenceSweep:
    def test_affine_rows_all_zero(self):
        target = get_target("poly", coeffs=(1.0, 2.0), L=1.0)
        rows = convergence_sweep(target, [5, 10, 20])
        for row in rows:
            assert row.max_error <= 1e-12
            assert row.bound == 0.0
            assert row.ratio == 0.0

    def test_sine_errors_and_ratios(self):
        target = get_target("sin", M=3.0, L=TWO_PI)
        rows = convergence_sweep(target, [20, 40, 80])
        assert [r.J for r in rows] == [20, 40, 80]
        assert rows[0].halving_ratio is None
        for row in rows:
            assert 0.0 < row.ratio <= 1.0
            assert row.mesh_norm == pytest.approx(TWO_PI / row.J)
            assert row.max_error == pytest.approx(row.ratio * row.bound)
        for row in rows[1:]:
            assert 0.2 <= row.halving_ratio <= 0.75

    def test_errors_strictly_decrease(self):
        target = get_target("sin", M=2.0, L=TWO_PI)
        rows = convergence_sweep(target, [10, 20, 40])
        errs = [r.max_error for r in rows]
        assert errs[0] > errs[1] > errs[2]


class TestHardnessSweep:
    def test_product_target_rows(self):
        target = get_target("xy", L=1.0)
        rows = hardness_sweep(target, [1, 8, 32], n=1000, epochs=15,
                              batch_size=64, learning_rate=1e-2, seed=0,
                              grid_size=64)
        assert [r.J for r in rows] == [1, 8, 32]
        # one ridge unit cannot represent xy, so its loss floor is positive
        assert rows[0].mse > 1e-4
        for prev, cur in zip(rows, rows[1:]):
            assert cur.mse <= prev.mse * 1.10
        for row in rows:
            assert row.seconds > 0 and row.max_error >= 0

    def test_rejects_1d_target(self):
        with pytest.raises(DimensionError):
            hardness_sweep(get_target("sin", M=1.0, L=1.0), [4])

    def test_note_states_the_impossibility(self):
        assert "no exact one-hidden-layer realization" in XY_HARDNESS_NOTE
