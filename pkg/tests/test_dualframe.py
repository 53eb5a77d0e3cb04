"""Dual map, frame fields, scalars, and duality geometry."""

import numpy as np
import pytest

from dualcr.dualframe import (
    bidual_point,
    dual_map,
    dual_values,
    frame_constants,
    frame_point,
    frame_scalars,
    get_frame,
    tangent_plane_disjointness,
)


class TestDualMap:
    def test_sphere_is_conjugation(self, sphere, sphere_points):
        for z in sphere_points[:6]:
            w1, w2 = dual_map(sphere, z, 3)
            assert w1.const == pytest.approx(np.conj(z[0]), abs=1e-13)
            assert w2.const == pytest.approx(np.conj(z[1]), abs=1e-13)

    def test_ellipsoid_axis_point(self, ellipsoid):
        z = (0.0, 1 / np.sqrt(2))
        w1, w2 = dual_map(ellipsoid, z, 3)
        assert w1.const == pytest.approx(0.0, abs=1e-13)
        assert w2.const == pytest.approx(np.sqrt(2), abs=1e-13)

    def test_duality_relation(self, perturbed):
        from dualcr.surfaces import random_surface_points
        pts = random_surface_points(perturbed, 20, 9)
        w, _ = dual_values(perturbed, pts[:, 0], pts[:, 1])
        rel = pts[:, 0] * w[0] + pts[:, 1] * w[1]
        assert np.max(np.abs(rel - 1)) < 1e-12

    def test_rotation_equivariance(self, ellipsoid, ellipsoid_points):
        z = ellipsoid_points[0]
        w, _ = dual_values(ellipsoid, *z)
        rot = np.exp(0.7j)
        wr, _ = dual_values(ellipsoid, rot * z[0], rot * z[1])
        assert np.allclose(wr, np.conj(rot) * w, atol=1e-12)


class TestFramePoint:
    def test_sphere_scalars(self, sphere, sphere_points):
        fr = get_frame(sphere, sphere_points[0], 5)
        (chi, sig, kap, xi), (al, be, ph, ps) = frame_scalars(fr)
        assert abs(chi) < 1e-12 and abs(kap) < 1e-12
        assert sig == pytest.approx(1.0, abs=1e-12)
        assert xi == pytest.approx(1.0, abs=1e-12)
        assert al == pytest.approx(1.0, abs=1e-12)
        assert be == pytest.approx(1.0, abs=1e-12)
        assert abs(ph) < 1e-12 and abs(ps) < 1e-12

    def test_sphere_v_is_conjugate_y(self, sphere, sphere_points):
        fr = get_frame(sphere, sphere_points[1], 5)
        for a in range(4):
            assert fr.fields["V"][a].const == pytest.approx(
                fr.fields["Ybar"][a].const, abs=1e-12)

    def test_residuals_small(self, skew):
        from dualcr.surfaces import random_surface_points
        for z in random_surface_points(skew, 8, 2):
            fr = frame_point(skew, z, 5)
            assert max(fr.residuals.values()) < 1e-10

    def test_finite_difference_v_oracle(self, ellipsoid, ellipsoid_points):
        # reconstruct V by numerically inverting the Jacobian of the
        # extended dual map with central differences
        z = ellipsoid_points[2]
        fr = get_frame(ellipsoid, z, 5)
        h = 1e-5
        J = np.zeros((4, 4), dtype=complex)

        def wvec(z1, z2):
            w, _ = dual_values(ellipsoid, np.atleast_1d(z1), np.atleast_1d(z2))
            w = w[:, 0]
            return np.array([w[0], w[1], np.conj(w[0]), np.conj(w[1])])

        base1, base2 = complex(z[0]), complex(z[1])
        for a, (d1, d2) in enumerate([(h, 0), (0, h), (h * 1j, 0), (0, h * 1j)]):
            plus = wvec(base1 + d1, base2 + d2)
            minus = wvec(base1 - d1, base2 - d2)
            re = (plus - minus) / (2 * np.abs(d1 + d2))
            J[:, a] = re
        # convert x/y columns to Wirtinger columns
        W = np.zeros((4, 4), dtype=complex)
        W[:, 0] = 0.5 * (J[:, 0] - 1j * J[:, 2])
        W[:, 2] = 0.5 * (J[:, 0] + 1j * J[:, 2])
        W[:, 1] = 0.5 * (J[:, 1] - 1j * J[:, 3])
        W[:, 3] = 0.5 * (J[:, 1] + 1j * J[:, 3])
        rhs = np.array([base2, -base1, 0, 0], dtype=complex)
        v_fd = np.linalg.solve(W, rhs)
        v_jet = np.array([fr.fields["V"][a].const for a in range(4)])
        assert np.max(np.abs(v_fd - v_jet)) < 1e-6

    def test_extension_independence(self, ellipsoid, ellipsoid_points):
        z = ellipsoid_points[3]
        a = get_frame(ellipsoid, z, 5, "log")
        b = get_frame(ellipsoid, z, 5, "perturbed", 0.2)
        for k in range(4):
            assert a.fields["V"][k].const == pytest.approx(
                b.fields["V"][k].const, abs=1e-10)

    def test_frame_cache(self, ellipsoid, ellipsoid_points):
        z = ellipsoid_points[4]
        assert get_frame(ellipsoid, z, 5) is get_frame(ellipsoid, z, 5)


class TestVectorizedConstants:
    def test_matches_jet_frames(self, skew):
        from dualcr.surfaces import random_surface_points
        pts = random_surface_points(skew, 6, 77)
        fc = frame_constants(skew, pts[:, 0], pts[:, 1])
        for k, z in enumerate(pts):
            fr = get_frame(skew, z, 5)
            (chi, sig, kap, xi), (al, be, ph, ps) = frame_scalars(fr)
            for name, v in (("chi", chi), ("sigma", sig), ("kappa", kap),
                            ("xi", xi), ("alpha", al), ("beta", be),
                            ("phi", ph), ("psi", ps)):
                assert fc[name][k] == pytest.approx(v, abs=1e-9)
            for a in range(4):
                assert fc["X"][a, k] == pytest.approx(
                    fr.fields["X"][a].const, abs=1e-9)
                assert fc["T"][a, k] == pytest.approx(
                    fr.fields["T"][a].const, abs=1e-9)


class TestDualityGeometry:
    def test_biduality(self, skew):
        from dualcr.surfaces import random_surface_points
        for z in random_surface_points(skew, 10, 8):
            assert np.max(np.abs(bidual_point(skew, z) - z)) < 1e-10

    def test_sphere_bidual_identity(self, sphere, sphere_points):
        z = sphere_points[5]
        assert np.max(np.abs(bidual_point(sphere, z) - z)) < 1e-12

    def test_disjointness_bound_sphere(self, sphere, sphere_points, rng):
        # probes inside q <= 0.9; |w . zeta| <= sqrt(0.9) by Cauchy-Schwarz
        raw = rng.normal(size=(40, 2)) + 1j * rng.normal(size=(40, 2))
        norm = np.sqrt(np.sum(np.abs(raw) ** 2, axis=1, keepdims=True))
        probes = raw / norm * np.sqrt(0.9) * rng.random((40, 1))
        m = tangent_plane_disjointness(sphere, sphere_points[0], probes)
        assert m >= 1 - np.sqrt(0.9) - 1e-12

    def test_disjointness_positive_ellipsoid(self, ellipsoid,
                                             ellipsoid_points, rng):
        raw = rng.normal(size=(40, 2)) + 1j * rng.normal(size=(40, 2))
        q = ellipsoid.gauge(raw[:, 0], raw[:, 1])
        probes = raw / np.sqrt(q)[:, None] * 0.9
        m = tangent_plane_disjointness(ellipsoid, ellipsoid_points[0], probes)
        assert m > 0
