"""Surface integration: the duality pairing, weighted measures, 1-form
path integrals and primitives.

The pairing integrates mu * eta against the 3-form
(z2 dz1 - z1 dz2) ^ dw1 ^ dw2 by evaluating the form on the three
parametric tangent vectors of the grid parametrization; orientation is
fixed by the parameter order (s, theta1, theta2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import expressions
from .dualframe import dual_values, frame_constants
from .errors import PathDependence
from .expressions import Expr
from .surfaces import CircularSurface, SampleGrid

_UNIT_DERIVS = {
    "z1": np.array([1.0, 0.0, 0.0, 0.0], dtype=complex),
    "z2": np.array([0.0, 1.0, 0.0, 0.0], dtype=complex),
}


def param_nodes(surface: CircularSurface, s, t1, t2):
    """Surface points and their parametric derivatives for arrays of
    parameters (s, t1, t2).

    Returns dict with z1, z2 (n,), dz (3, 2, n) tangent derivatives of the
    two complex coordinates with respect to each parameter, plus the dual
    map values w (2, n) and Wirtinger derivatives dw (2, 4, n).
    """
    s = np.asarray(s, dtype=float)
    e1 = np.exp(1j * np.asarray(t1, dtype=float))
    e2 = np.exp(1j * np.asarray(t2, dtype=float))
    cs, sn = np.cos(s), np.sin(s)
    omega = np.stack([cs * e1, sn * e2])
    domega = np.stack([
        np.stack([-sn * e1, cs * e2]),
        np.stack([1j * cs * e1, np.zeros_like(e1)]),
        np.stack([np.zeros_like(e2), 1j * sn * e2]),
    ])  # (3, 2, n)

    q, d1, _ = surface.wirtinger(omega[0], omega[1])
    q = np.real(q)
    r = q ** (-0.5)
    dq = 2.0 * np.real(d1[0] * domega[:, 0] + d1[1] * domega[:, 1])  # (3, n)
    dr = -0.5 * q ** (-1.5) * dq

    z = r * omega
    dz = dr[:, None, :] * omega[None, :, :] + r * domega

    w, dw = dual_values(surface, z[0], z[1])
    return {"z1": z[0], "z2": z[1], "dz": dz, "w": w, "dw": dw}


@dataclass
class GridGeometry:
    """Cached per-node geometric data for a quadrature grid."""

    env: dict           # z1, z2, w1, w2 arrays
    weights: np.ndarray
    det_nu: np.ndarray  # pairing 3-form on the parametric frame
    ds: np.ndarray      # Euclidean surface density (Gram)
    dz: np.ndarray      # (3, 2, n)
    dw_ambient: np.ndarray  # (2, 4, n)
    _frames: dict | None = None

    def frames(self, surface: CircularSurface) -> dict:
        if self._frames is None:
            self._frames = frame_constants(surface, self.env["z1"], self.env["z2"])
        return self._frames

    def leaf_derivatives(self) -> dict:
        """Wirtinger derivative stacks of the four expression leaves."""
        n = self.env["z1"].size
        dz1 = np.zeros((4, n), dtype=complex); dz1[0] = 1.0
        dz2 = np.zeros((4, n), dtype=complex); dz2[1] = 1.0
        return {"z1": dz1, "z2": dz2,
                "w1": self.dw_ambient[0], "w2": self.dw_ambient[1]}


def geometry(surface: CircularSurface, grid: SampleGrid) -> GridGeometry:
    geo = grid.cache.get("geometry")
    if geo is not None:
        return geo

    nodes = param_nodes(surface, grid.s, grid.t1, grid.t2)
    z1, z2, dz, w, dw = (nodes[k] for k in ("z1", "z2", "dz", "w", "dw"))

    # dw_i along each parameter via the chain rule
    zeta_dot = np.stack([dz[:, 0], dz[:, 1], np.conj(dz[:, 0]), np.conj(dz[:, 1])], axis=1)
    dwdt = np.einsum("iak,pak->pik", dw, zeta_dot)  # (3 params, 2, n)

    # pairing form rows: z2 dz1 - z1 dz2, dw1, dw2
    m = np.empty((3, 3, z1.size), dtype=complex)
    m[0] = z2 * dz[:, 0] - z1 * dz[:, 1]
    m[1] = dwdt[:, 0]
    m[2] = dwdt[:, 1]
    det = (
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )

    # Euclidean Gram density of the parametrization
    gram = np.real(np.einsum("pak,qak->pqk", dz, np.conj(dz)))
    ds = np.sqrt(
        gram[0, 0] * (gram[1, 1] * gram[2, 2] - gram[1, 2] ** 2)
        - gram[0, 1] * (gram[0, 1] * gram[2, 2] - gram[1, 2] * gram[0, 2])
        + gram[0, 2] * (gram[0, 1] * gram[1, 2] - gram[1, 1] * gram[0, 2])
    )

    geo = GridGeometry(
        env={"z1": z1, "z2": z2, "w1": w[0], "w2": w[1]},
        weights=grid.weights,
        det_nu=det,
        ds=ds,
        dz=dz,
        dw_ambient=dw,
    )
    grid.cache["geometry"] = geo
    return geo


def _values(f, geo: GridGeometry):
    if isinstance(f, np.ndarray):
        return f
    if callable(f) and not isinstance(f, Expr):
        return f(geo.env["z1"], geo.env["z2"])
    return expressions.eval_values(f, geo.env)


def pairing(mu, eta, surface: CircularSurface, grid: SampleGrid) -> complex:
    """<<mu, eta>> = integral of mu * eta against the duality 3-form."""
    geo = geometry(surface, grid)
    vals = _values(mu, geo) * _values(eta, geo)
    return complex(np.sum(geo.weights * vals * geo.det_nu))


def apply_field_values(field_name: str, expr, surface, grid) -> np.ndarray:
    """Single frame field applied to an expression at every grid node,
    using constant-term frame data and first-order chain rule."""
    geo = geometry(surface, grid)
    frames = geo.frames(surface)
    _, derivs = expressions.eval_derivatives(expr, geo.env, geo.leaf_derivatives())
    comps = frames[field_name]  # (4, n)
    if isinstance(derivs, float):
        return np.zeros_like(geo.env["z1"])
    return np.einsum("an,an->n", comps, derivs)


def parts_residual(gamma, eta, surface: CircularSurface, grid: SampleGrid) -> complex:
    """<<T gamma, eta>> + <<gamma, T eta>>; vanishes for the dual field T."""
    geo = geometry(surface, grid)
    tg = apply_field_values("T", gamma, surface, grid)
    te = apply_field_values("T", eta, surface, grid)
    vg = _values(gamma, geo)
    ve = _values(eta, geo)
    total = np.sum(geo.weights * (tg * ve + vg * te) * geo.det_nu)
    return complex(total)


def weighted_integral(f, surface: CircularSurface, grid: SampleGrid,
                      weight: str = "dS") -> complex:
    """Integral of f over S against dS, dS/alpha or dS/alpha^2."""
    geo = geometry(surface, grid)
    vals = _values(f, geo)
    density = geo.ds
    if weight == "dS":
        pass
    elif weight in ("dS/alpha", "dS/alpha2"):
        alpha = np.real(geo.frames(surface)["alpha"])
        density = density / (alpha if weight == "dS/alpha" else alpha**2)
    else:
        raise ValueError(f"unknown weight {weight!r}")
    return complex(np.sum(geo.weights * vals * density))


def parts_residual_weighted(gamma, eta, surface, grid) -> complex:
    """Integral of (X gamma) eta dS/alpha + gamma (X eta) dS/alpha."""
    geo = geometry(surface, grid)
    xg = apply_field_values("X", gamma, surface, grid)
    xe = apply_field_values("X", eta, surface, grid)
    vg = _values(gamma, geo)
    ve = _values(eta, geo)
    alpha = np.real(geo.frames(surface)["alpha"])
    return complex(np.sum(geo.weights * (xg * ve + vg * xe) * geo.ds / alpha))


def div_y_residual(surface: CircularSurface, grid: SampleGrid) -> float:
    """max |d w2/d z1 - d w1/d z2| over the grid (and the conjugate analog)."""
    geo = geometry(surface, grid)
    dw = geo.dw_ambient
    r1 = np.max(np.abs(dw[1, 0] - dw[0, 1]))
    # conjugate statement: d wb2/d zb1 - d wb1/d zb2 = conj of the same
    return float(r1)


# -- paths and primitives ----------------------------------------------

@dataclass
class SurfacePath:
    """Piecewise-linear path in (s, theta1, theta2) parameter space with
    Gauss-Legendre nodes per segment."""

    segments: list  # of (p0, p1) parameter triples
    nodes_per_segment: int = 16

    def quadrature(self, surface: CircularSurface):
        """Concatenated node data: surface points, dz/dt and weights."""
        t, glw = np.polynomial.legendre.leggauss(self.nodes_per_segment)
        t = 0.5 * (t + 1.0)
        glw = 0.5 * glw
        Z1, Z2, DZDT1, DZDT2, W = [], [], [], [], []
        for p0, p1 in self.segments:
            p0 = np.asarray(p0, float)
            p1 = np.asarray(p1, float)
            delta = p1 - p0
            params = p0[:, None] + delta[:, None] * t[None, :]
            nodes = param_nodes(surface, params[0], params[1], params[2])
            dzdt = np.einsum("p,pjn->jn", delta, nodes["dz"])
            Z1.append(nodes["z1"]); Z2.append(nodes["z2"])
            DZDT1.append(dzdt[0]); DZDT2.append(dzdt[1])
            W.append(glw)
        return (np.concatenate(Z1), np.concatenate(Z2),
                np.concatenate(DZDT1), np.concatenate(DZDT2),
                np.concatenate(W))


def wrap_angle(a: float) -> float:
    """Reduce to (-pi, pi]."""
    a = (a + np.pi) % (2.0 * np.pi) - np.pi
    return a if a != -np.pi else np.pi


def line_path(p_from, p_to, nodes_per_segment: int = 16) -> SurfacePath:
    """Straight parameter-space line with theta deltas wrapped to (-pi, pi]."""
    p_from = np.asarray(p_from, float)
    p_to = np.asarray(p_to, float)
    delta = p_to - p_from
    delta[1] = wrap_angle(delta[1])
    delta[2] = wrap_angle(delta[2])
    return SurfacePath([(p_from, p_from + delta)], nodes_per_segment)


def two_leg_path(p_from, p_to, nodes_per_segment: int = 16) -> SurfacePath:
    """Alternate route: move in s first, then in the angles."""
    p_from = np.asarray(p_from, float)
    p_to = np.asarray(p_to, float)
    delta = p_to - p_from
    delta[1] = wrap_angle(delta[1])
    delta[2] = wrap_angle(delta[2])
    mid = p_from + np.array([delta[0], 0.0, 0.0])
    return SurfacePath([(p_from, mid), (mid, mid + np.array([0.0, delta[1], delta[2]]))],
                       nodes_per_segment)


def path_integral_1form(f1, f2, path: SurfacePath, surface: CircularSurface) -> complex:
    """Integral of f2 dz1 - f1 dz2 along the path.

    f1, f2 may be expressions or callables of (z1_array, z2_array).
    """
    z1, z2, dzdt1, dzdt2, w = path.quadrature(surface)

    def values(f):
        if isinstance(f, np.ndarray):
            return f
        if callable(f) and not isinstance(f, Expr):
            return f(z1, z2)
        return expressions.eval_values(f, _leaf_env(surface, z1, z2))

    v2 = values(f2)
    v1 = values(f1)
    return complex(np.sum(w * (v2 * dzdt1 - v1 * dzdt2)))


def _leaf_env(surface, z1, z2):
    wv, _ = dual_values(surface, z1, z2)
    return {"z1": z1, "z2": z2, "w1": wv[0], "w2": wv[1]}


def primitive_values(
    f1,
    f2,
    surface: CircularSurface,
    base_params,
    targets_params,
    nodes_per_segment: int = 16,
    path_check: float | None = None,
) -> np.ndarray:
    """Values at the targets of the primitive of omega = f2 dz1 - f1 dz2,
    normalized to vanish at the basepoint, along canonical straight paths.

    With path_check set, a two-leg alternate route is compared at each
    target and PathDependence is raised beyond the tolerance.
    """
    out = np.empty(len(targets_params), dtype=complex)
    for k, target in enumerate(targets_params):
        path = line_path(base_params, target, nodes_per_segment)
        out[k] = path_integral_1form(f1, f2, path, surface)
        if path_check is not None:
            alt = two_leg_path(base_params, target, nodes_per_segment)
            other = path_integral_1form(f1, f2, alt, surface)
            if abs(other - out[k]) > path_check:
                raise PathDependence(abs(other - out[k]))
    return out


def params_of_point(z) -> np.ndarray:
    """Recover (s, theta1, theta2) of a surface point (any gauge)."""
    z1, z2 = complex(z[0]), complex(z[1])
    return np.array([
        np.arctan2(abs(z2), abs(z1)),
        np.angle(z1) if abs(z1) > 0 else 0.0,
        np.angle(z2) if abs(z2) > 0 else 0.0,
    ])
