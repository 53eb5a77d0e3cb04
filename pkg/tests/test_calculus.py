"""Surface integration, the duality pairing, and path primitives."""

import numpy as np
import pytest

from dualcr.calculus import (
    SurfacePath,
    div_y_residual,
    line_path,
    pairing,
    param_nodes,
    params_of_point,
    parts_residual,
    parts_residual_weighted,
    path_integral_1form,
    primitive_values,
    two_leg_path,
    weighted_integral,
)
from dualcr.errors import PathDependence
from dualcr.expressions import parse
from dualcr.surfaces import sample_grid


@pytest.fixture(scope="module")
def sphere_grid(sphere):
    return sample_grid(sphere, 16, 16)


@pytest.fixture(scope="module")
def ellipsoid_grid(ellipsoid):
    return sample_grid(ellipsoid, 16, 16)


class TestParametrization:
    def test_nodes_on_surface(self, ellipsoid, rng):
        s = rng.random(5) * np.pi / 2
        t1 = rng.random(5) * 2 * np.pi
        t2 = rng.random(5) * 2 * np.pi
        nodes = param_nodes(ellipsoid, s, t1, t2)
        q = ellipsoid.gauge(nodes["z1"], nodes["z2"])
        assert np.max(np.abs(q - 1)) < 1e-12

    def test_tangent_derivatives(self, ellipsoid):
        # finite differences in the s parameter
        s, t1, t2 = 0.7, 1.1, 2.3
        h = 1e-6
        f = param_nodes(ellipsoid, [s + h], [t1], [t2])
        b = param_nodes(ellipsoid, [s - h], [t1], [t2])
        mid = param_nodes(ellipsoid, [s], [t1], [t2])
        fd1 = (f["z1"][0] - b["z1"][0]) / (2 * h)
        assert fd1 == pytest.approx(mid["dz"][0, 0, 0], abs=1e-7)

    def test_params_round_trip(self, ellipsoid, ellipsoid_points):
        z = ellipsoid_points[0]
        p = params_of_point(z)
        nodes = param_nodes(ellipsoid, [p[0]], [p[1]], [p[2]])
        assert nodes["z1"][0] == pytest.approx(complex(z[0]), abs=1e-12)
        assert nodes["z2"][0] == pytest.approx(complex(z[1]), abs=1e-12)


class TestWeightedIntegrals:
    def test_sphere_area(self, sphere, sphere_grid):
        area = weighted_integral(parse("1"), sphere, sphere_grid, "dS")
        assert area.real == pytest.approx(2 * np.pi**2, abs=1e-6)
        assert abs(area.imag) < 1e-10

    def test_sphere_alpha_weight_trivial(self, sphere, sphere_grid):
        a = weighted_integral(parse("z1*conj(z1)"), sphere, sphere_grid, "dS")
        b = weighted_integral(parse("z1*conj(z1)"), sphere, sphere_grid,
                              "dS/alpha")
        assert a == pytest.approx(b, abs=1e-10)

    def test_unknown_weight(self, sphere, sphere_grid):
        with pytest.raises(ValueError):
            weighted_integral(parse("1"), sphere, sphere_grid, "dV")

    def test_divergence_identity(self, ellipsoid, ellipsoid_grid):
        assert div_y_residual(ellipsoid, ellipsoid_grid) < 1e-10


class TestPairing:
    def test_mode_mismatched_pairs_vanish(self, ellipsoid, ellipsoid_grid):
        cases = [
            ("z1*z2", "w1^2"),
            ("z1", "w2"),
            ("z2^2", "w1*w2"),
        ]
        for mu, eta in cases:
            v = pairing(parse(mu), parse(eta), ellipsoid, ellipsoid_grid)
            assert abs(v) < 1e-8

    def test_constant_pair_does_not_vanish(self, sphere, sphere_grid):
        v = pairing(parse("1"), parse("1"), sphere, sphere_grid)
        assert abs(v) > 1.0

    def test_bilinearity(self, ellipsoid, ellipsoid_grid):
        a = pairing(parse("z1"), parse("w1"), ellipsoid, ellipsoid_grid)
        b = pairing(parse("z2"), parse("w1"), ellipsoid, ellipsoid_grid)
        c = pairing(parse("2*z1 + z2"), parse("w1"), ellipsoid, ellipsoid_grid)
        assert c == pytest.approx(2 * a + b, abs=1e-8)

    def test_parts_dual_field(self, ellipsoid, ellipsoid_grid):
        assert abs(parts_residual(parse("z1"), parse("w2"),
                                  ellipsoid, ellipsoid_grid)) < 1e-8
        assert abs(parts_residual(parse("z1*w1"), parse("z2"),
                                  ellipsoid, ellipsoid_grid)) < 1e-8

    def test_parts_constants_exact(self, ellipsoid, ellipsoid_grid):
        assert abs(parts_residual(parse("1"), parse("1"),
                                  ellipsoid, ellipsoid_grid)) < 1e-13

    def test_parts_weighted(self, ellipsoid, ellipsoid_grid):
        assert abs(parts_residual_weighted(parse("w1"), parse("z2*w2"),
                                           ellipsoid, ellipsoid_grid)) < 1e-8


class TestPaths:
    BASE = np.array([0.9, 0.4, -0.7])
    TARGET = np.array([0.5, 2.0, 1.1])

    def test_exact_form_endpoint_difference(self, ellipsoid):
        # omega = dz1 : f2 = 1, f1 = 0
        one = lambda z1, z2: np.ones_like(z1)
        zero = lambda z1, z2: np.zeros_like(z1)
        path = line_path(self.BASE, self.TARGET, 24)
        got = path_integral_1form(zero, one, path, ellipsoid)
        za = param_nodes(ellipsoid, *[[v] for v in self.BASE])["z1"][0]
        zb = param_nodes(ellipsoid, *[[v] for v in self.TARGET])["z1"][0]
        assert got == pytest.approx(zb - za, abs=1e-9)

    def test_closed_loop_of_exact_form(self, ellipsoid):
        mid = np.array([0.6, 1.5, 0.2])
        loop = SurfacePath([(self.BASE, mid), (mid, self.TARGET),
                            (self.TARGET, self.BASE)], 24)
        # omega = d(z1 z2) = z2 dz1 + z1 dz2
        f2 = lambda z1, z2: z2
        f1 = lambda z1, z2: -z1
        assert abs(path_integral_1form(f1, f2, loop, ellipsoid)) < 1e-9

    def test_homotopic_paths_agree(self, ellipsoid):
        f2 = lambda z1, z2: z2
        f1 = lambda z1, z2: -z1
        a = path_integral_1form(f1, f2,
                                line_path(self.BASE, self.TARGET, 24),
                                ellipsoid)
        b = path_integral_1form(f1, f2,
                                two_leg_path(self.BASE, self.TARGET, 24),
                                ellipsoid)
        assert a == pytest.approx(b, abs=1e-8)

    def test_primitive_of_dz1(self, ellipsoid):
        one = lambda z1, z2: np.ones_like(z1)
        zero = lambda z1, z2: np.zeros_like(z1)
        targets = [self.TARGET, np.array([1.2, -0.3, 0.8])]
        vals = primitive_values(zero, one, ellipsoid, self.BASE, targets, 24)
        za = param_nodes(ellipsoid, *[[v] for v in self.BASE])["z1"][0]
        for target, v in zip(targets, vals):
            zt = param_nodes(ellipsoid, *[[v] for v in target])["z1"][0]
            assert v == pytest.approx(zt - za, abs=1e-9)

    def test_path_dependence_detected(self, sphere):
        # omega = w1 dz1 ~ zbar1 dz1 on the sphere: not closed
        w1 = parse("w1")
        zero = lambda z1, z2: np.zeros_like(z1)
        with pytest.raises(PathDependence):
            primitive_values(zero, w1, sphere, self.BASE,
                             [self.TARGET], 24, path_check=1e-9)

    def test_zero_form_zero_primitive(self, ellipsoid):
        zero = lambda z1, z2: np.zeros_like(z1)
        vals = primitive_values(zero, zero, ellipsoid, self.BASE,
                                [self.TARGET], 8)
        assert abs(vals[0]) == 0.0
