import numpy as np
import pytest

from reluscope.network import (DimensionError, Division, Network, Unit,
                               evaluate, relu, uniform_division)


class TestRelu:
    def test_positive_identity(self):
        assert relu(2.0) == 2.0

    def test_clamped(self):
        assert relu(-1.5) == 0.0

    def test_boundary(self):
        assert relu(0.0) == 0.0


class TestEvaluate:
    def test_single_pass_through_unit(self):
        net = Network(1, (Unit((1.0,), 0.0, 1.0),), 0.0)
        assert evaluate(net, 2.0) == 2.0

    def test_two_unit_hand_value(self):
        net = Network(1, (Unit((1.0,), 1.0, 2.0), Unit((-1.0,), -2.0, 3.0)), -1.0)
        # 2*relu(-0.5) + 3*relu(1.5) - 1
        assert evaluate(net, 0.5) == pytest.approx(3.5, abs=1e-15)

    def test_2d_clamped_unit(self):
        net = Network(2, (Unit((1.0, 1.0), 1.0, 1.0),), 0.0)
        assert evaluate(net, (0.3, 0.3)) == 0.0

    def test_dimension_mismatch_raises(self):
        net = Network(2, (Unit((1.0, 1.0), 0.0, 1.0),), 0.0)
        with pytest.raises(DimensionError):
            evaluate(net, 1.0)
        with pytest.raises(DimensionError):
            evaluate(net, (1.0, 2.0, 3.0))

    def test_unit_additivity(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            J = int(rng.integers(1, 12))
            units = tuple(Unit((float(rng.uniform(-3, 3)),),
                               float(rng.uniform(-3, 3)),
                               float(rng.uniform(-3, 3))) for _ in range(J))
            bias = float(rng.uniform(-1, 1))
            net = Network(1, units, bias)
            x = float(rng.uniform(-2, 2))
            parts = sum(Network(1, (u,), 0.0).evaluate(x) for u in units)
            assert net.evaluate(x) == pytest.approx(parts + bias, abs=1e-12)

    def test_piecewise_linear_between_breakpoints(self):
        rng = np.random.default_rng(7)
        units = tuple(Unit((float(rng.choice([-2.0, 1.0, 3.0])),),
                           float(rng.uniform(0, 1)),
                           float(rng.uniform(-2, 2))) for _ in range(8))
        net = Network(1, units, 0.3)
        kinks = sorted(u.bias / u.weights_in[0] for u in units)
        # probe strictly inside each gap: second difference of a line is 0
        for lo, hi in zip(kinks[:-1], kinks[1:]):
            if hi - lo < 1e-6:
                continue
            xs = np.linspace(lo + 1e-9, hi - 1e-9, 5)
            vals = net.evaluate_many(xs)
            second = vals[2:] - 2 * vals[1:-1] + vals[:-2]
            assert np.max(np.abs(second)) <= 1e-9

    def test_evaluate_many_matches_scalar(self):
        rng = np.random.default_rng(3)
        units = tuple(Unit(tuple(rng.uniform(-2, 2, 2)), float(rng.uniform(-1, 1)),
                           float(rng.uniform(-1, 1))) for _ in range(6))
        net = Network(2, units, 0.25)
        pts = rng.uniform(-2, 2, (40, 2))
        many = net.evaluate_many(pts)
        singles = np.array([net.evaluate(p) for p in pts])
        np.testing.assert_allclose(many, singles, rtol=0, atol=1e-12)


class TestNetworkType:
    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            Unit((float("nan"),), 0.0, 1.0)
        with pytest.raises(ValueError):
            Network(1, (), float("inf"))

    def test_rejects_wrong_width_unit(self):
        with pytest.raises(DimensionError):
            Network(2, (Unit((1.0,), 0.0, 1.0),), 0.0)

    def test_from_arrays_1d_shorthand(self):
        net = Network.from_arrays([1.0, -1.0], [0.0, 0.5], [2.0, 3.0], 0.1)
        assert net.input_dim == 1
        assert net.n_units == 2
        assert net.units[1] == Unit((-1.0,), 0.5, 3.0)

    def test_from_arrays_rejects_ragged(self):
        with pytest.raises(ValueError):
            Network.from_arrays(np.ones((3, 1)), np.zeros(2), np.ones(3), 0.0)

    def test_value_equality(self):
        a = Network(1, (Unit((1.0,), 0.0, 1.0),), 0.5)
        b = Network(1, (Unit((1.0,), 0.0, 1.0),), 0.5)
        assert a == b and hash(a) == hash(b)


class TestDivision:
    def test_uniform_halves(self):
        d = uniform_division(2, 1.0)
        np.testing.assert_allclose(d.points, [0.0, 0.5, 1.0])
        assert d.mesh_norm == 0.5

    def test_uniform_quarters_of_two_pi(self):
        L = 2 * np.pi
        d = uniform_division(4, L)
        np.testing.assert_allclose(d.points, [0, np.pi / 2, np.pi, 3 * np.pi / 2, L])
        assert d.mesh_norm == pytest.approx(np.pi / 2, rel=1e-15)

    def test_single_interval(self):
        d = uniform_division(1, 5.0)
        np.testing.assert_allclose(d.points, [0.0, 5.0])
        assert d.mesh_norm == 5.0

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            uniform_division(0, 1.0)
        with pytest.raises(ValueError):
            uniform_division(3, -1.0)
        with pytest.raises(ValueError):
            uniform_division(3, 0.0)

    def test_from_points_validation(self):
        with pytest.raises(ValueError):
            Division.from_points([0.0, 0.5, 0.5, 1.0])
        with pytest.raises(ValueError):
            Division.from_points([0.1, 0.5, 1.0])
        with pytest.raises(ValueError):
            Division.from_points([0.0])

    def test_mesh_norm_is_recomputed_max_gap(self):
        d = Division.from_points([0.0, 0.1, 0.4, 1.0])
        assert d.mesh_norm == pytest.approx(0.6, abs=1e-15)

    def test_points_are_read_only(self):
        d = uniform_division(3, 1.0)
        with pytest.raises(ValueError):
            d.points[0] = 5.0
