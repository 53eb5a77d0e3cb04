"""Dual map, dual frame fields and frame scalars, pointwise as jets.

The canonical ambient extension of the dual map is the log-gauge extension
w_j = q_{z_j} / q, i.e. the z-gradient of log q; with this choice the
normalization z . (log q)_z = 1 holds identically near S and the mixed
second derivatives make div Y vanish exactly.  An alternative one-parameter
family of extensions (agreeing with w on S) is available for the
extension-independence checks of the field V.

All vector fields are stored as 4-tuples of component jets in the
(d/dz1, d/dz2, d/dzb1, d/dzb2) basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import jets
from .errors import NonRealScalar, SingularSystem
from .jets import D_Z1, D_Z2, D_ZB1, D_ZB2, Jet, derivative, div, solve_linear
from .surfaces import CircularSurface

Components = tuple  # 4 jets


def bar_components(comps: Components) -> Components:
    """Components of the conjugate vector field (block swap + conjugation)."""
    a, b, c, d = comps
    return (c.conj(), d.conj(), a.conj(), b.conj())


def scale_components(scalar: Jet, comps: Components) -> Components:
    return tuple(scalar * c for c in comps)


def add_components(x: Components, y: Components) -> Components:
    return tuple(a + b for a, b in zip(x, y))


def directional(comps: Components, u: Jet) -> Jet:
    """Apply the vector field with the given component jets to the jet u."""
    target = min(u.order - 1, comps[0].order)
    acc = Jet.constant(0.0, target)
    for d, c in enumerate(comps):
        acc = acc + c.truncate(target) * derivative(u, d).truncate(target)
    return acc


def dual_map(
    surface: CircularSurface,
    z,
    order: int,
    extension: str = "log",
    extension_eps: float = 0.1,
):
    """Jets of (w1, w2) at z on S, at the requested order.

    extension="log" is the canonical q_z / q extension; "perturbed"
    multiplies by q^(-eps (q-1)), which coincides with the canonical choice
    on S but differs off it.
    """
    surface.require_on_surface(z)
    q = surface.gauge_jet(z, order + 1)
    qt = q.truncate(order)
    w1 = div(derivative(q, D_Z1), qt)
    w2 = div(derivative(q, D_Z2), qt)
    if extension == "perturbed":
        # extra factor exp(-eps (q-1) log q); equals 1 on S
        factor = jets.exp(-extension_eps * (qt - 1.0) * jets.log(qt))
        w1 = w1 * factor
        w2 = w2 * factor
    elif extension != "log":
        raise ValueError(f"unknown extension {extension!r}")
    return w1, w2


@dataclass
class FramePoint:
    """All per-point frame data: dual coordinates, fields, scalars, residuals.

    Field component jets have order (gauge order - 2); w jets keep one
    extra order for divergence checks.
    """

    z: tuple
    w: tuple
    order: int
    w_jets: tuple
    fields: dict
    scalars: dict
    residuals: dict = field(default_factory=dict)

    def field_components(self, name: str) -> Components:
        return self.fields[name]

    def scalar(self, name: str) -> Jet:
        return self.scalars[name]

    def leaf_jets(self, order: int | None = None) -> dict:
        """Expression leaves (z1, z2, w1, w2) as jets at this point."""
        order = self.order if order is None else order
        return {
            "z1": Jet.variable(1, self.z[0], order),
            "z2": Jet.variable(2, self.z[1], order),
            "w1": self.w_jets[0].truncate(order),
            "w2": self.w_jets[1].truncate(order),
        }


def _zero(order: int) -> Jet:
    return Jet.constant(0.0, order)


def field_Y(framepoint: FramePoint) -> Components:
    return framepoint.fields["Y"]

def field_V(framepoint: FramePoint) -> Components:
    return framepoint.fields["V"]

def field_R(framepoint: FramePoint) -> Components:
    return framepoint.fields["R"]


def _pivot_ratio(num_a: Jet, den_a: Jet, num_b: Jet, den_b: Jet) -> Jet:
    """num/den choosing the better-conditioned of two equivalent columns."""
    if abs(den_a.const) >= abs(den_b.const):
        return div(num_a, den_a)
    return div(num_b, den_b)


def frame_point(
    surface: CircularSurface,
    z,
    order: int = 5,
    extension: str = "log",
    extension_eps: float = 0.1,
    cond_limit: float = 1e8,
    reality_tol: float | None = None,
) -> FramePoint:
    """Compute the full dual frame at a surface point.

    order is the gauge jet order; the frame fields come out at order - 2.
    reality_tol, when set, raises NonRealScalar if Im(xi) or Im(sigma)
    exceeds it.
    """
    z1, z2 = complex(z[0]), complex(z[1])
    w1, w2 = dual_map(surface, z, order - 1, extension, extension_eps)
    F = order - 2  # field order

    vz1 = Jet.variable(1, z1, F)
    vz2 = Jet.variable(2, z2, F)
    cz1, cz2 = vz1.conj(), vz2.conj()
    zero = _zero(F)

    Y = (w2.truncate(F), -w1.truncate(F), zero, zero)
    Ybar = bar_components(Y)
    R = (1j * vz1, 1j * vz2, -1j * cz1, -1j * cz2)

    # Wirtinger Jacobian of the extended map z -> (w, wbar)
    wb1, wb2 = w1.conj(), w2.conj()
    rows = (w1, w2, wb1, wb2)
    J = [[derivative(rows[i], d) for d in range(4)] for i in range(4)]
    rhs = [vz2, -vz1, zero, zero]
    try:
        V = tuple(solve_linear(J, rhs, cond_limit=cond_limit))
    except SingularSystem:
        raise
    Vbar = bar_components(V)

    # V = chi Y + sigma Ybar, solved blockwise: Y lives in the (1,0) block,
    # Ybar in the (0,1) block, so each scalar is a pivoted ratio.
    chi = _pivot_ratio(V[0], Y[0], V[1], Y[1])
    sigma = _pivot_ratio(V[2], Ybar[2], V[3], Ybar[3])
    resid_vy = max(
        (V[k] - chi * Y[k] - sigma * Ybar[k]).norm() for k in range(4)
    ) / max(1.0, max(c.norm() for c in V))

    # Y = kappa V + xi Vbar: pick the best-conditioned 2x2 subsystem of the
    # four component equations, then report the residual on the rest.
    cols = np.array(
        [[V[k].const for k in range(4)], [Vbar[k].const for k in range(4)]]
    ).T  # (4, 2)
    best, best_det = None, -1.0
    for r0 in range(4):
        for r1 in range(r0 + 1, 4):
            det = abs(np.linalg.det(cols[[r0, r1]]))
            if det > best_det:
                best, best_det = (r0, r1), det
    r0, r1 = best
    kappa, xi = solve_linear(
        [[V[r0], Vbar[r0]], [V[r1], Vbar[r1]]],
        [Y[r0], Y[r1]],
        cond_limit=cond_limit,
    )
    resid_yv = max(
        (Y[k] - kappa * V[k] - xi * Vbar[k]).norm() for k in range(4)
    ) / max(1.0, max(c.norm() for c in Y))

    if reality_tol is not None:
        for name, s in (("xi", xi), ("sigma", sigma)):
            if abs(s.const.imag) > reality_tol:
                raise NonRealScalar(name, s.const.imag)

    one = Jet.constant(1.0, F)
    alpha = div(one, xi.conj())
    beta = div(one, sigma.conj())
    phi = div(kappa.conj(), xi.conj())
    psi = div(chi.conj(), sigma.conj())

    X = add_components(V, scale_components(phi, Vbar))
    T = add_components(Y, scale_components(psi, Ybar))

    fields = {
        "Y": Y, "Ybar": Ybar, "V": V, "Vbar": Vbar, "R": R,
        "X": X, "T": T,
        "Xbar": bar_components(X), "Tbar": bar_components(T),
    }
    scalars = {
        "chi": chi, "sigma": sigma, "kappa": kappa, "xi": xi,
        "alpha": alpha, "beta": beta, "phi": phi, "psi": psi,
    }

    # consistency residuals
    zw = z1 * w1.const + z2 * w2.const
    X_res = max(
        (X[k] - alpha * Ybar[k]).norm() for k in range(4)
    ) / max(1.0, max(c.norm() for c in X))
    T_res = max(
        (T[k] - beta * Vbar[k]).norm() for k in range(4)
    ) / max(1.0, max(c.norm() for c in T))

    # tangency of Y, V, R against d(log q) = (w1, w2, wb1, wb2)
    dlq = (w1.truncate(F), w2.truncate(F), wb1.truncate(F), wb2.truncate(F))

    def tangency(comps):
        return abs(sum(dlq[k].const * comps[k].const for k in range(4)))

    residuals = {
        "zw_minus_one": abs(zw - 1.0),
        "V_decomposition": resid_vy,
        "Y_decomposition": resid_yv,
        "X_vs_alpha_Ybar": X_res,
        "T_vs_beta_Vbar": T_res,
        "im_xi": abs(xi.const.imag),
        "im_sigma": abs(sigma.const.imag),
        "im_alpha": abs(alpha.const.imag),
        "im_beta": abs(beta.const.imag),
        "tangency_Y": tangency(Y),
        "tangency_V": tangency(V),
        "tangency_R": tangency(R),
    }

    return FramePoint(
        z=(z1, z2),
        w=(w1.const, w2.const),
        order=F,
        w_jets=(w1, w2),
        fields=fields,
        scalars=scalars,
        residuals=residuals,
    )


def get_frame(
    surface: CircularSurface,
    z,
    order: int = 5,
    extension: str = "log",
    extension_eps: float = 0.1,
) -> FramePoint:
    """Cached frame_point; caching matters when many test functions are
    evaluated over the same sample set."""
    key = (complex(z[0]), complex(z[1]), order, extension, extension_eps)
    cache = surface._frame_cache
    fp = cache.get(key)
    if fp is None:
        fp = frame_point(surface, z, order, extension, extension_eps)
        cache[key] = fp
    return fp


def frame_scalars(framepoint: FramePoint):
    """(chi, sigma, kappa, xi) and derived (alpha, beta, phi, psi) constants."""
    s = framepoint.scalars
    return (
        tuple(s[k].const for k in ("chi", "sigma", "kappa", "xi")),
        tuple(s[k].const for k in ("alpha", "beta", "phi", "psi")),
    )


# -- pointwise geometry without jets (vectorized fast path) ------------

def dual_values(surface: CircularSurface, z1, z2):
    """w = q_z / q and its first Wirtinger derivatives, vectorized.

    Returns (w, dw) where w has shape (2,)+pts and dw has shape (2,4)+pts
    with dw[i, a] = d w_i / d zeta_a for zeta = (z1, z2, zb1, zb2).
    """
    q, d1, d2 = surface.wirtinger(z1, z2)
    w = np.stack([d1[0] / q, d1[1] / q])
    dw = np.empty((2, 4) + np.shape(z1), dtype=complex)
    for i in range(2):
        for a in range(4):
            dw[i, a] = d2[i, a] / q - d1[i] * d1[a] / q**2
    return w, dw


def frame_constants(surface: CircularSurface, z1, z2):
    """Constant-term frame data at many points at once.

    Returns a dict of arrays: w1, w2, V (4,n), chi, sigma, kappa, xi,
    alpha, beta, phi, psi, X (4,n), T (4,n).  Used by the quadrature and
    screening code where full jets would be wasteful.
    """
    z1 = np.atleast_1d(np.asarray(z1, dtype=complex))
    z2 = np.atleast_1d(np.asarray(z2, dtype=complex))
    n = z1.size
    w, dw = dual_values(surface, z1, z2)

    J = np.empty((n, 4, 4), dtype=complex)
    for i in range(2):
        for a in range(4):
            J[:, i, a] = dw[i, a]
            # wbar rows by conjugation with block swap
            J[:, 2 + i, (a + 2) % 4] = np.conj(dw[i, a])
    rhs = np.stack([z2, -z1, np.zeros(n), np.zeros(n)], axis=1)
    V = np.linalg.solve(J, rhs[..., None])[..., 0].T  # (4, n)

    Ycomp = np.stack([w[1], -w[0], np.zeros(n), np.zeros(n)])
    Ybar = np.conj(Ycomp[[2, 3, 0, 1]])
    Vbar = np.conj(V[[2, 3, 0, 1]])

    # blockwise scalars with pivoting
    pick = np.abs(Ycomp[0]) >= np.abs(Ycomp[1])
    chi = np.where(pick, V[0] / Ycomp[0], V[1] / Ycomp[1])
    pick = np.abs(Ybar[2]) >= np.abs(Ybar[3])
    sigma = np.where(pick, V[2] / Ybar[2], V[3] / Ybar[3])

    # kappa, xi from the normal equations of the 4x2 system
    A = np.stack([V, Vbar], axis=2)  # (4, n, 2)
    A = np.moveaxis(A, 0, 1)  # (n, 4, 2)
    b = np.moveaxis(Ycomp, 0, 1)[..., None]  # (n, 4, 1)
    AH = np.conj(np.swapaxes(A, 1, 2))
    sol = np.linalg.solve(AH @ A, AH @ b)[..., 0]  # (n, 2)
    kappa, xi = sol[:, 0], sol[:, 1]

    alpha = 1.0 / np.conj(xi)
    beta = 1.0 / np.conj(sigma)
    phi = np.conj(kappa) / np.conj(xi)
    psi = np.conj(chi) / np.conj(sigma)

    X = V + phi * Vbar
    T = Ycomp + psi * Ybar
    return {
        "w1": w[0], "w2": w[1], "dw": dw,
        "V": V, "Vbar": Vbar, "Y": Ycomp, "Ybar": Ybar,
        "chi": chi, "sigma": sigma, "kappa": kappa, "xi": xi,
        "alpha": alpha, "beta": beta, "phi": phi, "psi": psi,
        "X": X, "T": T,
    }


def bidual_point(surface: CircularSurface, z) -> np.ndarray:
    """Apply the duality construction at w(z) to recover a point of S**.

    The tangent direction of the dual surface at w(z) is the push-forward
    of (the real part of) Y through the Wirtinger Jacobian of the extended
    dual map; z* then solves z* . w = 1, z* . v = 0.
    """
    surface.require_on_surface(z)
    z1 = np.atleast_1d(complex(z[0]))
    z2 = np.atleast_1d(complex(z[1]))
    w, dw = dual_values(surface, z1, z2)
    w1, w2 = complex(w[0, 0]), complex(w[1, 0])

    # real part of Y in Wirtinger components
    Y = np.array([w2, -w1, 0.0, 0.0], dtype=complex)
    ReY = 0.5 * (Y + np.conj(Y[[2, 3, 0, 1]]))
    push = np.array(
        [sum(dw[i, a, 0] * ReY[a] for a in range(4)) for i in range(2)]
    )
    mat = np.array([[w1, w2], [push[0], push[1]]])
    sol = np.linalg.solve(mat, np.array([1.0, 0.0]))
    return sol


def tangent_plane_disjointness(surface: CircularSurface, z, probes) -> float:
    """min |1 - w(z) . zeta| over interior probe points q(zeta) < 1."""
    surface.require_on_surface(z)
    z1 = np.atleast_1d(complex(z[0]))
    z2 = np.atleast_1d(complex(z[1]))
    w, _ = dual_values(surface, z1, z2)
    probes = np.asarray(probes, dtype=complex)
    vals = 1.0 - (w[0, 0] * probes[:, 0] + w[1, 0] * probes[:, 1])
    return float(np.min(np.abs(vals)))
