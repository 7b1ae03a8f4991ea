import math

import numpy as np
import pytest

from reluscope.construct import build_bidirectional, build_network, error_bound
from reluscope.network import DimensionError, uniform_division
from reluscope.targets import UnsupportedTargetError, get_target
from reluscope.verify import sup_error

TWO_PI = 2 * math.pi


def x_squared():
    return get_target("poly", coeffs=(0.0, 0.0, 1.0), L=1.0)


class TestBuildNetwork:
    def test_affine_target_is_exact(self):
        t = get_target("poly", coeffs=(2.0, 3.0), L=1.0)
        net = build_network(t, uniform_division(5, 1.0))
        assert net.output_bias == 2.0
        assert net.units[0].weight_out == 3.0
        assert all(u.weight_out == 0.0 for u in net.units[1:])
        xs = np.linspace(0, 1, 101)
        np.testing.assert_allclose(net.evaluate_many(xs), 2 + 3 * xs, atol=1e-12)

    def test_x_squared_j2_hand_values(self):
        net = build_network(x_squared(), uniform_division(2, 1.0))
        # 0*relu(x) + relu(x - 0) + relu(x - 0.5)
        assert net.n_units == 3
        assert net.evaluate(1.0) == pytest.approx(1.5, abs=1e-15)
        assert net.evaluate(0.5) == pytest.approx(0.5, abs=1e-15)

    def test_sin3_unit_weights(self):
        J = 24
        t = get_target("sin", M=3.0, L=TWO_PI)
        net = build_network(t, uniform_division(J, TWO_PI))
        width = TWO_PI / J
        for j, unit in enumerate(net.units[1:]):
            xi = TWO_PI * j / J
            assert unit.weight_out == pytest.approx(-9 * math.sin(3 * xi) * width,
                                                    abs=1e-12)

    def test_unit_count_and_interpolation_at_zero(self):
        for J in (1, 7, 40):
            t = get_target("sin", M=2.0, L=TWO_PI)
            net = build_network(t, uniform_division(J, TWO_PI))
            assert net.n_units == J + 1
            assert net.evaluate(0.0) == float(t.f(0.0))

    def test_right_derivative_at_zero_when_curvature_starts_flat(self):
        # with f''(0) = 0 the first curvature unit has zero weight, so the
        # one-sided slope at 0 is exactly f'(0)
        t = get_target("sin", M=3.0, L=TWO_PI)
        net = build_network(t, uniform_division(50, TWO_PI))
        eps = 1e-7
        slope = (net.evaluate(eps) - net.evaluate(0.0)) / eps
        assert slope == pytest.approx(float(t.f1(0.0)), abs=1e-9)

    def test_prune_drops_zero_units(self):
        t = get_target("poly", coeffs=(2.0, 3.0), L=1.0)
        net = build_network(t, uniform_division(5, 1.0), prune=True)
        assert net.n_units == 1

    def test_rejects_targets_without_derivatives(self):
        from reluscope.targets import TargetFunction
        bare = TargetFunction(name="bare", params={}, input_dim=1,
                              domain_length=1.0, f=lambda x: np.zeros_like(x))
        with pytest.raises(UnsupportedTargetError):
            build_network(bare, uniform_division(4, 1.0))

    def test_rejects_2d_targets(self):
        with pytest.raises(DimensionError):
            build_network(get_target("gauss2"), uniform_division(4, 10.0))
        with pytest.raises(DimensionError):
            build_network(get_target("xy"), uniform_division(4, 1.0))

    def test_rejects_division_span_mismatch(self):
        t = get_target("sin", M=1.0, L=TWO_PI)
        with pytest.raises(ValueError):
            build_network(t, uniform_division(4, 1.0))


class TestBuildBidirectional:
    def test_lambda_one_equals_forward_build(self):
        for name, params, J in (("sin", {"M": 3.0, "L": TWO_PI}, 17),
                                ("poly", {"coeffs": (0.0, 0.0, 1.0), "L": 1.0}, 2)):
            t = get_target(name, **params)
            d = uniform_division(J, t.domain_length)
            assert build_bidirectional(t, d, 1.0) == build_network(t, d)

    def test_lambda_zero_x_squared_hand_values(self):
        net = build_bidirectional(x_squared(), uniform_division(2, 1.0), 0.0)
        assert net.output_bias == pytest.approx(-1.0, abs=1e-15)
        assert net.units[0].weight_out == pytest.approx(2.0, abs=1e-15)
        backward = [u for u in net.units[1:]]
        assert all(u.weights_in == (-1.0,) for u in backward)
        assert net.evaluate(0.0) == pytest.approx(0.5, abs=1e-15)
        assert net.evaluate(1.0) == pytest.approx(1.0, abs=1e-15)

    def test_lambda_grid_error_within_twice_bound(self):
        t = get_target("sin", M=3.0, L=TWO_PI)
        d = uniform_division(640, TWO_PI)
        limit = 2 * error_bound(t, d).bound
        for lam in (0.0, 0.25, 0.5, 0.75, 1.0):
            net = build_bidirectional(t, d, lam)
            assert sup_error(t, net).max_error <= limit

    def test_rejects_lambda_outside_unit_interval(self):
        t = x_squared()
        d = uniform_division(2, 1.0)
        for lam in (-0.1, 1.1):
            with pytest.raises(ValueError):
                build_bidirectional(t, d, lam)


class TestErrorBound:
    def test_affine_bound_is_zero(self):
        t = get_target("poly", coeffs=(2.0, 3.0), L=1.0)
        eb = error_bound(t, uniform_division(4, 1.0))
        assert eb.c1 == 0.0 and eb.bound == 0.0

    def test_x_squared_j2(self):
        eb = error_bound(x_squared(), uniform_division(2, 1.0))
        assert eb.c1 == pytest.approx(1.0, abs=1e-15)
        assert eb.bound == pytest.approx(0.5, abs=1e-15)
        assert not eb.estimated_norms

    def test_sin3_j100(self):
        t = get_target("sin", M=3.0, L=TWO_PI)
        eb = error_bound(t, uniform_division(100, TWO_PI))
        assert eb.c1 == pytest.approx(TWO_PI ** 2 * 27 + math.pi * 9, rel=1e-14)
        assert eb.mesh_norm == pytest.approx(TWO_PI / 100, rel=1e-12)
        assert eb.bound == pytest.approx(68.75008642164524, rel=1e-12)

    def test_bound_is_product_of_fields(self):
        t = get_target("sin", M=2.0, L=TWO_PI)
        eb = error_bound(t, uniform_division(33, TWO_PI))
        assert eb.bound == eb.c1 * eb.mesh_norm


class TestBoundSoundness:
    @pytest.mark.parametrize("name,params", [
        ("sin", {"M": 1.0, "L": TWO_PI}),
        ("sin", {"M": 2.0, "L": TWO_PI}),
        ("sin", {"M": 3.0, "L": TWO_PI}),
        ("poly", {"coeffs": (0.0, 0.0, 1.0), "L": 1.0}),
        ("poly", {"coeffs": (0.5, -1.0, 2.0, 1.0), "L": 1.0}),
    ])
    def test_error_within_bound_across_meshes(self, name, params):
        t = get_target(name, **params)
        for J in (5, 10, 20, 40, 80, 160):
            d = uniform_division(J, t.domain_length)
            net = build_network(t, d)
            # 1e-12 headroom: the parabola attains its bound exactly, which
            # leaves the float comparison balanced on an ulp
            assert sup_error(t, net).max_error <= error_bound(t, d).bound + 1e-12
