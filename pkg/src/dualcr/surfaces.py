"""Circular strongly convex hypersurfaces S = {q = 1} in C^2.

A surface is presented by a degree-2 positively homogeneous circular gauge q,
either q = z* H z for a Hermitian positive definite H, or that form plus a
symmetric perturbation eps |z1|^2 |z2|^2 / (z* H z).  Both families are
circular and homogeneous by construction; validation probes positivity,
circularity, the Euler identity and strong convexity numerically.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field

import numpy as np

from . import jets
from .errors import (
    NotCircular,
    NotConvex,
    NotPositive,
    PointNotOnSurface,
    SurfaceError,
)
from .jets import Jet

_PROBE_SEED = 1234


def _parse_complex_matrix(text: str) -> np.ndarray:
    data = ast.literal_eval(text.replace("i", "j"))
    H = np.array(data, dtype=complex)
    if H.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {H.shape}")
    return H


class CircularSurface:
    """Immutable gauge-presented circular hypersurface."""

    def __init__(self, hermitian: np.ndarray, eps: float = 0.0, label: str = ""):
        H = np.asarray(hermitian, dtype=complex)
        if H.shape != (2, 2):
            raise ValueError("hermitian matrix must be 2x2")
        if np.max(np.abs(H - H.conj().T)) > 1e-12:
            raise ValueError("matrix must be Hermitian")
        self.hermitian = H
        self.eps = float(eps)
        self.label = label or self._default_label()
        self._frame_cache: dict = {}
        self._geometry_cache: dict = {}

    def _default_label(self) -> str:
        if self.eps:
            return f"perturbed(eps={self.eps})"
        if np.allclose(self.hermitian, np.eye(2)):
            return "sphere"
        return "hermitian"

    @property
    def is_sphere(self) -> bool:
        return self.eps == 0.0 and bool(np.allclose(self.hermitian, np.eye(2)))

    # -- vectorized gauge values and Wirtinger derivatives -------------

    def gauge(self, z1, z2):
        """q at (arrays of) points; always real."""
        z1 = np.asarray(z1, dtype=complex)
        z2 = np.asarray(z2, dtype=complex)
        H = self.hermitian
        d = (
            H[0, 0] * np.conj(z1) * z1
            + H[0, 1] * np.conj(z1) * z2
            + H[1, 0] * np.conj(z2) * z1
            + H[1, 1] * np.conj(z2) * z2
        ).real
        if self.eps:
            n = (np.conj(z1) * z1 * np.conj(z2) * z2).real
            d = d + self.eps * n / d
        return d

    def wirtinger(self, z1, z2):
        """q with all first and second Wirtinger derivatives, vectorized.

        Returns (q, d1, d2): d1 has shape (4,) + z.shape ordered
        (z1, z2, zb1, zb2); d2 has shape (4, 4) + z.shape.
        """
        z1 = np.asarray(z1, dtype=complex)
        z2 = np.asarray(z2, dtype=complex)
        shape = z1.shape
        H = self.hermitian
        zb1, zb2 = np.conj(z1), np.conj(z2)

        d = (H[0, 0] * zb1 * z1 + H[0, 1] * zb1 * z2
             + H[1, 0] * zb2 * z1 + H[1, 1] * zb2 * z2)
        d1 = np.zeros((4,) + shape, dtype=complex)
        d2 = np.zeros((4, 4) + shape, dtype=complex)
        # d = sum_jk conj(z_j) H[j,k] z_k
        d1[0] = H[0, 0] * zb1 + H[1, 0] * zb2
        d1[1] = H[0, 1] * zb1 + H[1, 1] * zb2
        d1[2] = H[0, 0] * z1 + H[0, 1] * z2
        d1[3] = H[1, 0] * z1 + H[1, 1] * z2
        for j in range(2):
            for k in range(2):
                d2[2 + j, k] = H[j, k]
                d2[k, 2 + j] = H[j, k]

        if not self.eps:
            return d.real + 0j, d1, d2

        # perturbation p = eps * n / d with n = |z1|^2 |z2|^2
        n = zb1 * z1 * zb2 * z2
        n1 = np.stack([zb1 * zb2 * z2, zb1 * z1 * zb2, z1 * zb2 * z2, zb1 * z1 * z2])
        n2 = np.zeros((4, 4) + shape, dtype=complex)
        # nonzero second derivatives of n (symmetric)
        pairs = {
            (0, 1): zb1 * zb2, (0, 2): zb2 * z2, (0, 3): zb1 * z2,
            (1, 2): zb1 * z2 * 0 + zb2 * z1, (1, 3): zb1 * z1,
            (2, 3): z1 * z2,
        }
        pairs[(1, 2)] = z1 * zb2
        for (a, b), val in pairs.items():
            n2[a, b] = val
            n2[b, a] = val

        p = n / d
        p1 = np.empty_like(n1)
        for a in range(4):
            p1[a] = (n1[a] * d - n * d1[a]) / d**2
        p2 = np.empty_like(n2)
        for a in range(4):
            for b in range(4):
                p2[a, b] = (
                    n2[a, b] / d
                    - (n1[a] * d1[b] + n1[b] * d1[a] + n * d2[a, b]) / d**2
                    + 2.0 * n * d1[a] * d1[b] / d**3
                )
        return (d + self.eps * p), d1 + self.eps * p1, d2 + self.eps * p2

    # -- jets ----------------------------------------------------------

    def gauge_jet(self, z, order: int) -> Jet:
        """Jet of q at a point z = (z1, z2) != 0."""
        z1, z2 = complex(z[0]), complex(z[1])
        if z1 == 0 and z2 == 0:
            raise ValueError("gauge jet undefined at the origin")
        v1 = Jet.variable(1, z1, order)
        v2 = Jet.variable(2, z2, order)
        c1, c2 = v1.conj(), v2.conj()
        H = self.hermitian
        d = (H[0, 0] * c1 * v1 + H[0, 1] * c1 * v2
             + H[1, 0] * c2 * v1 + H[1, 1] * c2 * v2)
        if self.eps:
            n = c1 * v1 * c2 * v2
            d = d + self.eps * (n / d)
        return d

    def log_gauge_jet(self, z, order: int) -> Jet:
        """Jet of the normalized defining function log q."""
        return jets.log(self.gauge_jet(z, order))

    # -- points --------------------------------------------------------

    def radial_point(self, omega) -> np.ndarray:
        """Radial projection of a direction onto S: z = omega / sqrt(q(omega))."""
        omega = np.asarray(omega, dtype=complex)
        q = float(np.real(self.gauge(omega[0], omega[1])))
        return omega / np.sqrt(q)

    def require_on_surface(self, z, tol: float = 1e-10):
        q = float(np.real(self.gauge(z[0], z[1])))
        if abs(q - 1.0) > tol:
            raise PointNotOnSurface(f"q(z) = {q} at {tuple(z)}")

    def __repr__(self):
        return f"CircularSurface({self.label})"


# -- real Hessian machinery -------------------------------------------

# columns express d/dx1, d/dy1, d/dx2, d/dy2 in the Wirtinger basis
_REAL_FROM_WIRTINGER = np.array(
    [
        [1, 1j, 0, 0],
        [0, 0, 1, 1j],
        [1, -1j, 0, 0],
        [0, 0, 1, -1j],
    ],
    dtype=complex,
)


def real_gradient_hessian(surface: CircularSurface, z):
    """Real gradient (4,) and Hessian (4,4) of q at z, in (x1,y1,x2,y2)."""
    q, d1, d2 = surface.wirtinger(np.array(z[0]), np.array(z[1]))
    C = _REAL_FROM_WIRTINGER
    grad = np.real(C.T @ d1)
    hess = np.real(C.T @ d2 @ C)
    return float(np.real(q)), grad, hess


def tangential_hessian_min_eig(surface: CircularSurface, z) -> float:
    """Smallest eigenvalue of the Hessian of q restricted to T_z S."""
    _, grad, hess = real_gradient_hessian(surface, z)
    gnorm = np.linalg.norm(grad)
    if gnorm == 0:
        return -np.inf
    # orthonormal basis of the 3-dim null space of grad
    _, _, vt = np.linalg.svd(grad.reshape(1, 4))
    basis = vt[1:].T  # (4, 3)
    restricted = basis.T @ hess @ basis
    return float(np.min(np.linalg.eigvalsh(restricted)))


# -- construction and validation --------------------------------------

def make_surface(spec, probe_points: int = 50) -> CircularSurface:
    """Build and validate a surface from a spec string or (H, eps) data.

    Spec grammar: ``sphere``, ``hermitian:[[h11,h12],[h21,h22]]`` (complex
    entries like ``1+2i``), ``perturbed:[[...]];eps``.
    """
    if isinstance(spec, CircularSurface):
        surface = spec
    elif isinstance(spec, str):
        surface = _surface_from_string(spec)
    else:
        H, eps = spec
        surface = CircularSurface(H, eps)
    _validate(surface, probe_points)
    return surface


def _surface_from_string(text: str) -> CircularSurface:
    text = text.strip()
    if text == "sphere":
        return CircularSurface(np.eye(2), 0.0, label="sphere")
    if text.startswith("hermitian:"):
        return CircularSurface(_parse_complex_matrix(text[len("hermitian:"):]))
    if text.startswith("perturbed:"):
        body = text[len("perturbed:"):]
        mat_text, _, eps_text = body.rpartition(";")
        if not mat_text:
            raise SurfaceError("perturbed spec needs 'perturbed:H;eps'")
        return CircularSurface(_parse_complex_matrix(mat_text), float(eps_text))
    raise SurfaceError(f"unrecognized surface spec {text!r}")


def _validate(surface: CircularSurface, probe_points: int):
    eigs = np.linalg.eigvalsh(surface.hermitian)
    if eigs[0] <= 0:
        raise NotConvex(float(eigs[0]))

    rng = np.random.default_rng(_PROBE_SEED)
    omega = rng.normal(size=(probe_points, 4))
    omega /= np.linalg.norm(omega, axis=1, keepdims=True)
    w1 = omega[:, 0] + 1j * omega[:, 1]
    w2 = omega[:, 2] + 1j * omega[:, 3]

    q, d1, _ = surface.wirtinger(w1, w2)
    q = np.real(q)
    if np.any(q <= 0):
        raise NotPositive("gauge non-positive at a probe direction")

    # circularity: Im(z . q_z) = 0; Euler: z . q_z + conj = 2q
    radial = w1 * d1[0] + w2 * d1[1]
    circ = float(np.max(np.abs(np.imag(radial))))
    if circ > 1e-10 * float(np.max(q)):
        raise NotCircular(circ)
    euler = float(np.max(np.abs(2.0 * np.real(radial) - 2.0 * q)))
    if euler > 1e-9 * float(np.max(q)):
        raise NotCircular(euler)

    min_eig = np.inf
    for k in range(probe_points):
        z = surface.radial_point(np.array([w1[k], w2[k]]))
        min_eig = min(min_eig, tangential_hessian_min_eig(surface, z))
    if min_eig <= 1e-8:
        raise NotConvex(float(min_eig))
    surface.min_tangential_eig = float(min_eig)


def random_surface_points(surface: CircularSurface, n: int, seed: int) -> np.ndarray:
    """n quadrature-free sample points on S from uniformly random directions."""
    rng = np.random.default_rng(seed)
    omega = rng.normal(size=(n, 4))
    omega /= np.linalg.norm(omega, axis=1, keepdims=True)
    out = np.empty((n, 2), dtype=complex)
    for k in range(n):
        out[k] = surface.radial_point(
            np.array([omega[k, 0] + 1j * omega[k, 1], omega[k, 2] + 1j * omega[k, 3]])
        )
    return out


# -- quadrature grid ---------------------------------------------------

@dataclass
class SampleGrid:
    """Tensor quadrature grid on S.

    Parametrization: z = omega(s, t1, t2) / sqrt(q(omega)) with
    omega = (cos s e^{i t1}, sin s e^{i t2}); Gauss-Legendre in s on
    (0, pi/2), trapezoid in the periodic angles.  Weights are the bare
    product-rule weights; the parametric Jacobian enters through the
    integrand (pulled-back form or Gram density) in the calculus module.
    """

    n_s: int
    n_theta: int
    s: np.ndarray
    t1: np.ndarray
    t2: np.ndarray
    weights: np.ndarray
    z1: np.ndarray
    z2: np.ndarray
    cache: dict = field(default_factory=dict, repr=False)

    @property
    def n_points(self) -> int:
        return self.s.size


def sample_grid(surface: CircularSurface, n_s: int, n_theta: int) -> SampleGrid:
    if n_s < 4 or n_theta < 4:
        raise ValueError("need n_s >= 4 and n_theta >= 4")
    nodes, gl_w = np.polynomial.legendre.leggauss(n_s)
    s_nodes = (nodes + 1.0) * (np.pi / 4.0)
    s_weights = gl_w * (np.pi / 4.0)
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    theta_w = 2.0 * np.pi / n_theta

    S, T1, T2 = np.meshgrid(s_nodes, theta, theta, indexing="ij")
    WS = np.broadcast_to(
        s_weights[:, None, None] * theta_w * theta_w, S.shape
    )
    S, T1, T2, W = (a.ravel() for a in (S, T1, T2, WS))

    omega1 = np.cos(S) * np.exp(1j * T1)
    omega2 = np.sin(S) * np.exp(1j * T2)
    r = 1.0 / np.sqrt(np.real(surface.gauge(omega1, omega2)))
    return SampleGrid(
        n_s=n_s,
        n_theta=n_theta,
        s=S,
        t1=T1,
        t2=T2,
        weights=W.copy(),
        z1=r * omega1,
        z2=r * omega2,
    )
