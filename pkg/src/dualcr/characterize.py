"""Decision procedures: CR / dual-CR / pluriharmonic-boundary membership,
constructive decomposition, kernel coefficients, classical sphere
operators, and rescaled-field checks, plus corpus generation with
operator-independent screening.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import calculus, expressions
from .config import Settings
from .dualframe import directional, dual_values, get_frame, scale_components
from .errors import NotDecomposable, NotInKernel, NotSphere, VanishingScale
from .expressions import Conj, Expr, Pow, Var
from .jets import Jet, derivative
from .operators import apply_word_jet
from .surfaces import CircularSurface, SampleGrid

DEFAULTS = Settings()


# -- membership reports ------------------------------------------------

@dataclass
class MembershipReport:
    words: tuple
    residuals: np.ndarray
    tolerance: float
    excluded_points: int
    verdict: bool
    function_scale: float = 1.0

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals)) if self.residuals.size else 0.0

    @property
    def mean_residual(self) -> float:
        return float(np.mean(self.residuals)) if self.residuals.size else 0.0

    @property
    def n_points(self) -> int:
        return self.residuals.size


def _point_env(surface, points):
    z1 = np.asarray([p[0] for p in points], dtype=complex)
    z2 = np.asarray([p[1] for p in points], dtype=complex)
    w, _ = dual_values(surface, z1, z2)
    return {"z1": z1, "z2": z2, "w1": w[0], "w2": w[1]}


def word_residuals(
    words,
    u: Expr,
    surface: CircularSurface,
    points,
    order: int = DEFAULTS.jet_order,
    delta_sing: float = DEFAULTS.delta_sing,
    extra_fields_factory=None,
):
    """Max-over-words |word u| at each admissible point.

    Returns (residuals over admissible points, excluded count, u values at
    admissible points).
    """
    env = _point_env(surface, points)
    mask = expressions.admissible_mask(u, env, delta_sing)
    admissible = [p for p, ok in zip(points, mask) if ok]
    res = np.zeros(len(admissible))
    for k, z in enumerate(admissible):
        frame = get_frame(surface, z, order)
        extra = extra_fields_factory(frame) if extra_fields_factory else None
        for word in words:
            val = apply_word_jet(word, u, surface, z, order, frame,
                                 extra_fields=extra).const
            res[k] = max(res[k], abs(val))
    with np.errstate(invalid="ignore", divide="ignore"):
        uvals = np.abs(expressions.eval_values(u, env))
    uvals = uvals[mask] if np.ndim(uvals) else np.full(len(admissible), abs(uvals))
    return res, int(len(points) - len(admissible)), uvals


def _membership(words, u, surface, points, tol, order, delta_sing) -> MembershipReport:
    res, excluded, uvals = word_residuals(words, u, surface, points, order, delta_sing)
    scale = float(np.max(uvals)) if uvals.size else 1.0
    return MembershipReport(
        words=tuple(words),
        residuals=res,
        tolerance=tol,
        excluded_points=excluded,
        verdict=bool(res.size == 0 or np.max(res) <= tol),
        function_scale=scale,
    )


def is_cr(u, surface, points, tol=1e-8, order=DEFAULTS.jet_order,
          delta_sing=DEFAULTS.delta_sing) -> MembershipReport:
    return _membership([("X",)], u, surface, points, tol, order, delta_sing)


def is_dual_cr(u, surface, points, tol=1e-8, order=DEFAULTS.jet_order,
               delta_sing=DEFAULTS.delta_sing) -> MembershipReport:
    return _membership([("T",)], u, surface, points, tol, order, delta_sing)


def is_conj_cr(u, surface, points, tol=1e-8, order=DEFAULTS.jet_order,
               delta_sing=DEFAULTS.delta_sing) -> MembershipReport:
    return _membership([("Xbar",)], u, surface, points, tol, order, delta_sing)


def is_sum_cr_dualcr(u, surface, points, mode="local", tol=1e-8,
                     order=DEFAULTS.jet_order,
                     delta_sing=DEFAULTS.delta_sing) -> MembershipReport:
    """Third-order test for u = (CR) + (dual-CR).

    mode "global" (compact surface) uses the single word X.X.T; mode
    "local" (simply-connected) additionally requires T.T.X.
    """
    words = [("X", "X", "T")]
    if mode == "local":
        words.append(("T", "T", "X"))
    elif mode != "global":
        raise ValueError(f"unknown mode {mode!r}")
    return _membership(words, u, surface, points, tol, order, delta_sing)


def is_plh_boundary(u, surface, points, mode="local", tol=1e-8,
                    order=DEFAULTS.jet_order,
                    delta_sing=DEFAULTS.delta_sing) -> MembershipReport:
    """Third-order test for u = (CR) + (conjugate-CR)."""
    words = [("X", "X", "Y")]
    if mode == "local":
        words.append(("Xbar", "Xbar", "Ybar"))
    elif mode != "global":
        raise ValueError(f"unknown mode {mode!r}")
    return _membership(words, u, surface, points, tol, order, delta_sing)


# -- kernel coefficients and the second operator -----------------------

def kernel_coefficients(h_word, u, surface, z, order=DEFAULTS.jet_order,
                        tol=1e-6):
    """CR coefficients (f1, f2) with f1 w1 + f2 w2 = h for h = (word)u in
    the kernel of the squared first operator.

    h_word may be empty (h = u itself).  Raises NotInKernel when the
    second-order residual at z exceeds tol.
    """
    frame = get_frame(surface, z, order)
    if h_word:
        h = apply_word_jet(h_word, u, surface, z, order, frame)
    else:
        h = expressions.eval_jet(u, frame.leaf_jets())
    X = frame.fields["X"]
    Xh = directional(X, h)
    xxh = directional(X, Xh).const
    scale = max(1.0, h.norm())
    if abs(xxh) > tol * scale:
        raise NotInKernel(abs(xxh))

    F = Xh.order
    z1 = Jet.variable(1, frame.z[0], F)
    z2 = Jet.variable(2, frame.z[1], F)
    w1 = frame.w_jets[0].truncate(F)
    w2 = frame.w_jets[1].truncate(F)
    ht = h.truncate(F)
    f1 = z1 * ht + w2 * Xh
    f2 = z2 * ht - w1 * Xh

    residuals = {
        "xx_kernel": abs(xxh),
        "reconstruction": abs((f1 * w1 + f2 * w2 - ht).const),
        "f1_cr": abs(directional(X, f1).const) if F >= 1 else 0.0,
        "f2_cr": abs(directional(X, f2).const) if F >= 1 else 0.0,
    }
    return f1, f2, residuals


def second_operator_value(u, surface, points, side="dual",
                          order=6, tol_kernel=1e-6):
    """Two-path evaluation of the second third-order operator.

    side "dual": T.T.X u directly versus the divergence of the kernel
    coefficients of T u.  side "plh": alpha^{-1} bar(X.X.Y) u versus the
    same divergence built from Y u.  Returns per-point dicts with the two
    values, their difference, and the CR residual of the result.
    """
    h_word = ("T",) if side == "dual" else ("Y",)
    direct_word = ("T", "T", "X") if side == "dual" else ("Xbar", "Xbar", "Ybar")
    out = []
    for z in points:
        frame = get_frame(surface, z, order)
        direct = apply_word_jet(direct_word, u, surface, z, order, frame).const
        if side == "plh":
            direct = direct / frame.scalars["alpha"].const
        f1, f2, _ = kernel_coefficients(h_word, u, surface, z, order, tol_kernel)
        rhs_jet = derivative(f1, 0) + derivative(f2, 1)
        rhs = rhs_jet.const
        cr_res = (
            abs(directional(frame.fields["X"], rhs_jet).const)
            if rhs_jet.order >= 1
            else float("nan")
        )
        out.append({
            "z": tuple(z),
            "direct": direct,
            "via_coefficients": rhs,
            "difference": abs(direct - rhs),
            "result_cr_residual": cr_res,
        })
    return out


# -- decomposition -----------------------------------------------------

@dataclass
class Decomposition:
    side: str
    basepoint: tuple
    targets: np.ndarray          # (n, 2) complex points
    u_values: np.ndarray
    f_values: np.ndarray         # CR part
    g_values: np.ndarray         # dual-CR (or conjugate-CR) part
    residuals: dict = field(default_factory=dict)


def _kernel_coefficient_functions(h_word, u, surface, order, tol_kernel):
    """Vectorizable callables z -> f1(z), f2(z) for the decomposition's
    closed 1-form."""

    cache: dict = {}

    def compute(z1_arr, z2_arr, which):
        out = np.empty(z1_arr.size, dtype=complex)
        for k in range(z1_arr.size):
            z = (complex(z1_arr[k]), complex(z2_arr[k]))
            pair = cache.get(z)
            if pair is None:
                f1, f2, _ = kernel_coefficients(h_word, u, surface, z, order,
                                                tol_kernel)
                pair = cache[z] = (f1.const, f2.const)
            out[k] = pair[0] if which == 1 else pair[1]
        return out

    return (lambda a, b: compute(a, b, 1)), (lambda a, b: compute(a, b, 2))


def decompose(
    u,
    surface: CircularSurface,
    targets_params,
    basepoint_params,
    side="dual",
    settings: Settings = DEFAULTS,
    membership_points=None,
    check_membership=True,
    path_check=None,
) -> Decomposition:
    """Split u into a CR part f and a dual-CR (resp. conjugate-CR) part
    g = u - f, normalizing g(basepoint) = 0.

    The CR part is the primitive of the closed 1-form f2 dz1 - f1 dz2
    built from the kernel coefficients of T u (resp. Y u), integrated
    along canonical parameter-space paths from the basepoint.
    """
    if side not in ("dual", "conjugate"):
        raise ValueError(f"unknown side {side!r}")
    order = settings.jet_order

    base_nodes = calculus.param_nodes(
        surface, *[np.atleast_1d(v) for v in basepoint_params]
    )
    basepoint = (complex(base_nodes["z1"][0]), complex(base_nodes["z2"][0]))

    targets_params = [np.asarray(p, float) for p in targets_params]
    tgt = np.stack([
        np.concatenate([calculus.param_nodes(surface, *(np.atleast_1d(v) for v in p))[c]
                        for p in targets_params])
        for c in ("z1", "z2")
    ], axis=1)

    if check_membership:
        pts = membership_points if membership_points is not None else tgt
        if side == "dual":
            rep = is_sum_cr_dualcr(u, surface, pts, mode="local",
                                   tol=settings.tol_membership, order=order,
                                   delta_sing=settings.delta_sing)
        else:
            rep = is_plh_boundary(u, surface, pts, mode="local",
                                  tol=settings.tol_membership, order=order,
                                  delta_sing=settings.delta_sing)
        if not rep.verdict:
            raise NotDecomposable(" & ".join(map(str, rep.words)), rep.max_residual)

    h_word = ("T",) if side == "dual" else ("Y",)
    f1_fn, f2_fn = _kernel_coefficient_functions(
        h_word, u, surface, order, 10.0 * settings.tol_membership
    )

    increments = calculus.primitive_values(
        f1_fn, f2_fn, surface, basepoint_params, targets_params,
        nodes_per_segment=settings.path_nodes, path_check=path_check,
    )

    env_t = {"z1": tgt[:, 0], "z2": tgt[:, 1]}
    wv, _ = dual_values(surface, env_t["z1"], env_t["z2"])
    env_t["w1"], env_t["w2"] = wv[0], wv[1]
    u_targets = np.broadcast_to(
        expressions.eval_values(u, env_t), tgt.shape[:1]
    ).astype(complex)

    env_b = _point_env(surface, [basepoint])
    u_base = complex(np.ravel(expressions.eval_values(u, env_b))[0])

    f_values = u_base + increments   # g(basepoint) = 0 convention
    g_values = u_targets - f_values

    # residual of (h-word applied to g): (word)u - (f1 w1 + f2 w2)
    f1_t = f1_fn(tgt[:, 0], tgt[:, 1])
    f2_t = f2_fn(tgt[:, 0], tgt[:, 1])
    h_res = 0.0
    x_res = 0.0
    for k in range(tgt.shape[0]):
        z = (tgt[k, 0], tgt[k, 1])
        frame = get_frame(surface, z, order)
        hval = apply_word_jet(h_word, u, surface, z, order, frame).const
        h_res = max(h_res, abs(hval - (f1_t[k] * env_t["w1"][k]
                                       + f2_t[k] * env_t["w2"][k])))
        # d f = f2 dz1 - f1 dz2 evaluated on X; vanishes since X z_j = 0
        X = frame.fields["X"]
        x_res = max(x_res, abs(f2_t[k] * X[0].const - f1_t[k] * X[1].const))

    return Decomposition(
        side=side,
        basepoint=basepoint,
        targets=tgt,
        u_values=u_targets,
        f_values=f_values,
        g_values=g_values,
        residuals={"h_on_g": h_res, "x_on_f": x_res},
    )


# -- sphere classical operators ---------------------------------------

def _classical_fields(frame):
    """The rotation-type tangential operators of the sphere, as jets."""
    F = frame.order
    z1 = Jet.variable(1, frame.z[0], F)
    z2 = Jet.variable(2, frame.z[1], F)
    zb1, zb2 = z1.conj(), z2.conj()
    zero = Jet.constant(0.0, F)
    L = (zero, zero, -z2, z1)        # z1 d/dzb2 - z2 d/dzb1
    Lbar = (-zb2, zb1, zero, zero)   # zb1 d/dz2 - zb2 d/dz1
    return {"L": L, "Lbar": Lbar}


def sphere_classical_operators(u, surface, points, tol=1e-8,
                               order=DEFAULTS.jet_order,
                               delta_sing=DEFAULTS.delta_sing):
    """Residuals of the classical third-order sphere tests and agreement
    with the dual-frame test.

    Global operator: bar L bar L L; local system adds L L bar L.  Only
    valid on the unit sphere.
    """
    if not surface.is_sphere:
        raise NotSphere(surface.label)
    words = [("Lbar", "Lbar", "L"), ("L", "L", "Lbar")]
    res, excluded, uvals = word_residuals(
        words, u, surface, points, order, delta_sing,
        extra_fields_factory=_classical_fields,
    )
    scale = float(np.max(uvals)) if uvals.size else 1.0
    classical = MembershipReport(
        words=tuple(words), residuals=res, tolerance=tol * max(1.0, scale),
        excluded_points=excluded,
        verdict=bool(res.size == 0 or np.max(res) <= tol * max(1.0, scale)),
        function_scale=scale,
    )
    frame_based = is_plh_boundary(u, surface, points, mode="local",
                                  tol=tol * max(1.0, scale), order=order,
                                  delta_sing=delta_sing)
    return classical, frame_based


# -- rescaled fields ---------------------------------------------------

def rescaled_fields_factory(f1_expr, f2_expr, f3_expr, min_scale=1e-8):
    """Factory of extra operator fields {"Xr", "Tr"} built per frame point
    from CR expressions: Xr = f3 (f1 w1 + f2 w2)^2 X, Tr = T / (f1 w1 + f2 w2).
    """

    def make(frame):
        leaves = frame.leaf_jets()
        s = (expressions.eval_jet(f1_expr, leaves) * leaves["w1"]
             + expressions.eval_jet(f2_expr, leaves) * leaves["w2"])
        f3 = expressions.eval_jet(f3_expr, leaves)
        if abs(s.const) < min_scale or abs(f3.const) < min_scale:
            raise VanishingScale(frame.z, min(abs(s.const), abs(f3.const)))
        Xr = scale_components(f3 * s * s, frame.fields["X"])
        Tr = scale_components(1.0 / s, frame.fields["T"])
        return {"Xr": Xr, "Tr": Tr}

    return make


# -- corpora and screening --------------------------------------------

def random_holomorphic_poly(rng, var_pair, max_degree=4, n_terms=5) -> Expr:
    coeffs = {}
    for _ in range(n_terms):
        a = int(rng.integers(0, max_degree + 1))
        b = int(rng.integers(0, max_degree + 1 - a))
        c = complex(rng.normal(), rng.normal())
        coeffs[(a, b)] = coeffs.get((a, b), 0) + c
    return expressions.polynomial(var_pair, coeffs)


def member_corpus(rng, n, side="dual", max_degree=4):
    """n random sums u = f + g with f CR-polynomial and g dual-CR (side
    "dual") or conjugate-CR (side "conjugate")."""
    out = []
    for _ in range(n):
        f = random_holomorphic_poly(rng, ("z1", "z2"), max_degree)
        if side == "dual":
            g = random_holomorphic_poly(rng, ("w1", "w2"), max_degree)
        else:
            g = Conj(random_holomorphic_poly(rng, ("z1", "z2"), max_degree))
        out.append({"u": expressions.add(f, g), "f": f, "g": g})
    return out


def mixed_monomial(rng, max_degree=2) -> Expr:
    """A monomial z^a conj(z)^b with both blocks nonzero; never a sum of
    CR and dual-CR (or conjugate-CR) pieces generically."""
    while True:
        a = (int(rng.integers(0, max_degree + 1)), int(rng.integers(0, max_degree + 1)))
        b = (int(rng.integers(0, max_degree + 1)), int(rng.integers(0, max_degree + 1)))
        if sum(a) >= 1 and sum(b) >= 1 and sum(a) + sum(b) >= 3:
            break
    factors = []
    for name, deg in zip(("z1", "z2"), a):
        if deg:
            factors.append(Var(name) if deg == 1 else Pow(Var(name), deg))
    for name, deg in zip(("z1", "z2"), b):
        if deg:
            v = Conj(Var(name))
            factors.append(v if deg == 1 else Pow(v, deg))
    return expressions.mul(*factors)


def mixed_test_monomials(max_degree=2):
    """Monomials z^p conj(z)^q whose exponent difference p - q changes
    sign between the two slots.

    On a circular surface invariant under independent rotations of z1 and
    z2 (true for the diagonal and perturbed gauges here), pairing against
    such a monomial annihilates every CR and every dual-CR function: the
    3-form is rotation-invariant, so only matched phases survive, and a
    mixed-sign difference can never be matched by z^a or by w^b alone.
    """
    out = []
    rng = range(max_degree + 1)
    for p1 in rng:
        for p2 in rng:
            for q1 in rng:
                for q2 in rng:
                    d1, d2 = p1 - q1, p2 - q2
                    if (d1 > 0 > d2) or (d1 < 0 < d2):
                        out.append(expressions.mul(
                            expressions.monomial(("z1", "z2"), (p1, p2)),
                            Conj(expressions.monomial(("z1", "z2"), (q1, q2)))))
    return out


def pairing_screen(u, surface, grid: SampleGrid, max_degree=2) -> float:
    """Operator-free necessary test for u = CR + dual-CR: the largest
    normalized pairing of u against the mixed test monomials, which kill
    every member.  A score well above zero certifies a non-member."""
    geo = calculus.geometry(surface, grid)
    uvals = expressions.eval_values(u, geo.env)
    worst = 0.0
    for h in mixed_test_monomials(max_degree):
        hv = expressions.eval_values(h, geo.env)
        num = abs(np.sum(geo.weights * uvals * hv * geo.det_nu))
        den = np.sum(geo.weights * np.abs(uvals * hv * geo.det_nu))
        if den > 0:
            worst = max(worst, float(num / den))
    return worst


def projection_screen(u, surface, grid: SampleGrid, side="conjugate",
                      max_degree=4) -> float:
    """Operator-free necessary membership test via least squares: relative
    L^2(dS) distance of u from the span of holomorphic monomials plus
    antiholomorphic ("conjugate" side) or dual-monomial ("dual" side)
    restrictions.  Polynomial spans are L^2-dense in each factor on these
    circular convex surfaces, so a large distance certifies a non-member.
    """
    geo = calculus.geometry(surface, grid)
    w = geo.weights * geo.ds
    basis_vals = []
    for e in _monomial_basis(("z1", "z2"), max_degree):
        v = np.broadcast_to(expressions.eval_values(e, geo.env), w.shape)
        basis_vals.append(v)
        if side == "conjugate":
            basis_vals.append(np.conj(v))
    if side == "dual":
        for e in _monomial_basis(("w1", "w2"), max_degree):
            if isinstance(e, expressions.Const):
                continue  # constant already in the holomorphic block
            basis_vals.append(
                np.broadcast_to(expressions.eval_values(e, geo.env), w.shape))
    A = np.stack(basis_vals, axis=1) * np.sqrt(w)[:, None]
    b = expressions.eval_values(u, geo.env) * np.sqrt(w)
    norm_b = float(np.linalg.norm(b))
    if norm_b == 0:
        return 0.0
    sol = np.linalg.lstsq(A, b, rcond=None)[0]
    return float(np.linalg.norm(b - A @ sol)) / norm_b


def projection_screen_plh(u, surface, grid: SampleGrid, max_degree=4) -> float:
    return projection_screen(u, surface, grid, "conjugate", max_degree)


# -- exact pluriharmonic 2-jet interpolation on the model quadric -----

def nirenberg_polynomial(coeffs):
    """Pluriharmonic polynomial in (z1, zb1, z2, zb2) whose restriction to
    the model surface y2 = |z1|^2 has the prescribed 2-jet.

    coeffs = (A, B, C, D, E, F, G, H, I, J) are the coefficients of the
    target jet A + B z1 + C zb1 + D x2 + E z1^2 + F zb1^2 + G z1 zb1
    + H z1 x2 + I zb1 x2 + J x2^2.  Exact symbolic arithmetic throughout.
    """
    import sympy as sp

    A, B, C, D, E, F, G, H, I_, J = [sp.sympify(c) for c in coeffs]
    z1, zb1, z2, zb2 = sp.symbols("z1 zb1 z2 zb2")
    half = sp.Rational(1, 2)
    P = (A + B * z1 + C * zb1
         + half * (D - sp.I * G) * z2 + half * (D + sp.I * G) * zb2
         + E * z1 ** 2 + F * zb1 ** 2
         + H * z1 * z2 + I_ * zb1 * zb2 + J * zb2 ** 2)
    return sp.expand(P)


def is_pluriharmonic_exact(P) -> bool:
    """All four mixed Wirtinger second derivatives vanish identically."""
    import sympy as sp

    z1, zb1, z2, zb2 = sp.symbols("z1 zb1 z2 zb2")
    for zi in (z1, z2):
        for zbj in (zb1, zb2):
            if sp.expand(sp.diff(P, zi, zbj)) != 0:
                return False
    return True


def model_restriction_jet(P):
    """Restrict P to the model surface (z2 = x2 + i z1 zb1) and truncate at
    total degree 2 in (z1, zb1, x2); returns the ten jet coefficients in
    the order (A, B, C, D, E, F, G, H, I, J)."""
    import sympy as sp

    z1, zb1, z2, zb2, x2 = sp.symbols("z1 zb1 z2 zb2 x2")
    R = sp.expand(P.subs({z2: x2 + sp.I * z1 * zb1, zb2: x2 - sp.I * z1 * zb1}))
    poly = sp.Poly(R, z1, zb1, x2)
    jet = {m: 0 for m in [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (2, 0, 0),
                          (0, 2, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2)]}
    for mono, c in poly.terms():
        if sum(mono) <= 2:
            jet[tuple(int(m) for m in mono)] = sp.expand(c)
    order = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (2, 0, 0),
             (0, 2, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2)]
    return tuple(jet[m] for m in order)


def verify_nirenberg_jet(coeffs) -> bool:
    """Exact identity: the constructed polynomial is pluriharmonic and its
    model-surface 2-jet equals the input, with zero tolerance."""
    import sympy as sp

    P = nirenberg_polynomial(coeffs)
    if not is_pluriharmonic_exact(P):
        return False
    got = model_restriction_jet(P)
    want = [sp.expand(sp.sympify(c)) for c in coeffs]
    return all(sp.expand(g - w) == 0 for g, w in zip(got, want))


def random_exact_jet(rng, span=5):
    """Ten random Gaussian-integer jet coefficients (exact sympy numbers)."""
    import sympy as sp

    return tuple(
        sp.Integer(int(rng.integers(-span, span + 1)))
        + sp.I * sp.Integer(int(rng.integers(-span, span + 1)))
        for _ in range(10)
    )


def _monomial_basis(var_pair, max_degree):
    out = []
    for a in range(max_degree + 1):
        for b in range(max_degree + 1 - a):
            out.append(expressions.monomial(var_pair, (a, b)))
    return out


def nonmember_corpus(rng, n, surface, grid, side="dual",
                     screen_threshold=1e-3, max_tries=500):
    """n mixed monomials certified non-members by the operator-free screen."""
    out = []
    tries = 0
    while len(out) < n and tries < max_tries:
        tries += 1
        cand = mixed_monomial(rng)
        if side == "dual":
            score = pairing_screen(cand, surface, grid)
        else:
            score = projection_screen_plh(cand, surface, grid)
        if score > screen_threshold:
            out.append({"u": cand, "screen": score})
    if len(out) < n:
        raise RuntimeError("could not assemble a screened non-member corpus")
    return out
