"""One-shot acceptance suite: thirteen verdicts over the default rig
(the unit sphere and the diag(1, 2) ellipsoid).

Every check has an oracle independent of the machinery it validates:
exact sphere formulas, finite differences, symbolic identities, quadrature
cross-resolution comparison, or operator-free integral screening.
"""

from __future__ import annotations

import numpy as np

from . import calculus, characterize, expressions
from .config import Settings
from .dualframe import (
    bidual_point,
    dual_values,
    frame_constants,
    get_frame,
)
from .errors import VanishingScale
from .expressions import parse
from .operators import apply_word_jet, bracket, field_constants, scalar_derivative
from .report import Report
from .surfaces import make_surface, random_surface_points, sample_grid

DEFAULTS = Settings()

SPHERE = "sphere"
ELLIPSOID = "hermitian:[[1,0],[0,2]]"


def run_certification(settings: Settings = DEFAULTS, n_points: int = 200,
                      grid_n: int = 24) -> Report:
    report = Report(command="certify",
                    surface=f"{SPHERE} + {ELLIPSOID}",
                    grid=f"{grid_n}^3")
    sphere = make_surface(SPHERE)
    ellipsoid = make_surface(ELLIPSOID)
    pts_s = random_surface_points(sphere, n_points, settings.seed)
    pts_e = random_surface_points(ellipsoid, n_points, settings.seed + 1)
    rng = np.random.default_rng(settings.seed)

    check_duality(report, [(sphere, pts_s), (ellipsoid, pts_e)])
    check_sphere_specialization(report, sphere, pts_s)
    check_brackets(report, [(sphere, pts_s), (ellipsoid, pts_e)], settings)
    check_reality(report, [(sphere, pts_s), (ellipsoid, pts_e)], settings)
    check_counterexample(report, ellipsoid, pts_e, settings)
    corpora = check_membership_separation(report, ellipsoid, pts_e, rng,
                                          settings, grid_n)
    check_decomposition(report, ellipsoid, corpora["dual_members"], settings)
    check_second_operator(report, ellipsoid, corpora, pts_e, settings)
    check_pairing(report, ellipsoid, rng, grid_n)
    check_geometry(report, ellipsoid, pts_e, settings, grid_n)
    check_sphere_classical(report, sphere, pts_s, rng, settings)
    check_nirenberg(report, rng)
    check_rescalings(report, ellipsoid, corpora["dual_members"], pts_e, rng,
                     settings)
    return report.finish()


# -- 1 ----------------------------------------------------------------

def check_duality(report, rigs):
    worst = 0.0
    for surface, pts in rigs:
        w, _ = dual_values(surface, pts[:, 0], pts[:, 1])
        worst = max(worst, float(np.max(np.abs(
            pts[:, 0] * w[0] + pts[:, 1] * w[1] - 1.0))))
    report.add("duality_relation", "z-dot-w-equals-one", worst, 1e-12)


# -- 2 ----------------------------------------------------------------

def check_sphere_specialization(report, sphere, pts):
    w, _ = dual_values(sphere, pts[:, 0], pts[:, 1])
    res_w = float(np.max(np.abs(w - np.conj(pts.T))))
    report.add("sphere_dual_map", "sphere-w-is-zbar", res_w, 1e-12)

    fc = frame_constants(sphere, pts[:, 0], pts[:, 1])
    targets = {"chi": 0, "sigma": 1, "kappa": 0, "xi": 1,
               "alpha": 1, "beta": 1, "phi": 0, "psi": 0}
    res = max(float(np.max(np.abs(fc[k] - v))) for k, v in targets.items())
    report.add("sphere_frame_scalars", "sphere-scalar-constants", res, 1e-10)


# -- 3 ----------------------------------------------------------------

def _bracket_identities(frame):
    """(left bracket pair, expected components) for the full suite."""
    i = 1j
    R = field_constants(frame, "R")
    sig = frame.scalars["sigma"].const
    xi = frame.scalars["xi"].const
    out = [(("X", "T"), i * R),
           (("Y", "Ybar"), -i * xi * R),
           (("V", "Vbar"), i * sig * R)]
    for name, factor in (("Y", -2j), ("Ybar", 2j), ("V", 2j), ("Vbar", -2j),
                         ("X", 2j), ("Xbar", -2j), ("T", -2j), ("Tbar", 2j)):
        out.append((("R", name), factor * field_constants(frame, name)))
    return out


def check_brackets(report, rigs, settings):
    worst = 0.0
    worst_scalar = 0.0
    for surface, pts in rigs:
        for z in pts:
            frame = get_frame(surface, z, settings.jet_order)
            for (a, b), expected in _bracket_identities(frame):
                got = bracket(a, b, surface, z, settings.jet_order, frame)
                scale = max(1.0, float(np.max(np.abs(expected))))
                worst = max(worst, float(np.max(np.abs(got - expected))) / scale)
            for s in ("alpha", "beta"):
                worst_scalar = max(worst_scalar,
                                   abs(scalar_derivative(frame, "R", s)))
    report.add("bracket_suite", "frame-bracket-identities", worst, 1e-8)
    report.add("rotation_kills_scalars", "R-alpha-R-beta-zero",
               worst_scalar, 1e-8)


# -- 4 ----------------------------------------------------------------

def check_reality(report, rigs, settings):
    worst = 0.0
    for surface, pts in rigs:
        for z in pts:
            frame = get_frame(surface, z, settings.jet_order)
            for k in ("im_xi", "im_sigma", "im_alpha", "im_beta"):
                worst = max(worst, frame.residuals[k])
    report.add("scalar_reality", "xi-sigma-alpha-beta-real", worst, 1e-10)


# -- 5 ----------------------------------------------------------------

def check_counterexample(report, ellipsoid, pts, settings):
    u = parse("z1 / w2")
    env = characterize._point_env(ellipsoid, pts)
    mask = expressions.admissible_mask(u, env, settings.delta_sing)
    res_first, res_second = 0.0, 0.0
    n_adm = 0
    for z, ok in zip(pts, mask):
        if not ok:
            continue
        n_adm += 1
        frame = get_frame(ellipsoid, z, settings.jet_order)
        first = apply_word_jet(("X", "X", "T"), u, ellipsoid, z,
                               settings.jet_order, frame).const
        second = apply_word_jet(("T", "T", "X"), u, ellipsoid, z,
                                settings.jet_order, frame).const
        res_first = max(res_first, abs(first))
        res_second = max(res_second, abs(second - 2.0))
    excluded = len(pts) - n_adm
    report.add("half_member_first_operator", "XXT-of-z1-over-w2-vanishes",
               res_first, 1e-8, excluded_points=excluded)
    report.add("half_member_second_operator", "TTX-of-z1-over-w2-is-two",
               res_second, 1e-8, excluded_points=excluded)


# -- 6 ----------------------------------------------------------------

def _corpus_residual(words, u, surface, points, settings):
    res, _, uvals = characterize.word_residuals(
        words, u, surface, points, settings.jet_order, settings.delta_sing)
    mx = float(np.max(res)) if res.size else 0.0
    scale = float(np.max(uvals)) if uvals.size else 1.0
    return mx, max(scale, 1e-12)


def _screen_dual_many(cands, surface, grid, max_degree=2):
    """Normalized pairing of each candidate against the mixed test
    monomials, with the test values evaluated on the grid once."""
    geo = calculus.geometry(surface, grid)
    H = np.stack([
        np.broadcast_to(expressions.eval_values(h, geo.env),
                        geo.weights.shape)
        for h in characterize.mixed_test_monomials(max_degree)
    ])
    scores = []
    for u in cands:
        uv = expressions.eval_values(u, geo.env) * geo.weights * geo.det_nu
        num = np.abs(H @ uv)
        den = np.abs(H) @ np.abs(uv)
        scores.append(float(np.max(num / np.maximum(den, 1e-300))))
    return scores


def check_membership_separation(report, surface, pts, rng, settings, grid_n,
                                n_corpus=50, n_eval=30):
    eval_pts = pts[:n_eval]
    grid = sample_grid(surface, grid_n, grid_n)
    out = {}

    for side, words in (
        ("dual", [("X", "X", "T"), ("T", "T", "X")]),
        ("conjugate", [("X", "X", "Y"), ("Xbar", "Xbar", "Ybar")]),
    ):
        members = characterize.member_corpus(rng, n_corpus, side)
        member_worst = 0.0
        for m in members:
            mx, _ = _corpus_residual(words, m["u"], surface, eval_pts, settings)
            member_worst = max(member_worst, mx)

        cands = [characterize.mixed_monomial(rng) for _ in range(4 * n_corpus)]
        if side == "dual":
            scores = _screen_dual_many(cands, surface, grid)
        else:
            scores = [characterize.projection_screen(c, surface, grid,
                                                     "conjugate")
                      for c in cands]
        nonmembers = [c for c, s in zip(cands, scores) if s > 1e-3][:n_corpus]
        assert len(nonmembers) == n_corpus, "screen kept too few candidates"
        nonmember_best = np.inf
        for u in nonmembers:
            mx, scale = _corpus_residual(words, u, surface, eval_pts, settings)
            nonmember_best = min(nonmember_best, mx / scale)

        tag = "sum-cr-dualcr" if side == "dual" else "plh-boundary"
        report.add(f"member_annihilation_{side}", f"{tag}-members",
                   member_worst, 1e-8)
        report.add(f"nonmember_separation_{side}", f"{tag}-nonmembers",
                   nonmember_best, 1e-3,
                   verdict=bool(nonmember_best >= 1e-3))
        out[f"{side}_members"] = members
    return out


# -- 7 ----------------------------------------------------------------

def check_decomposition(report, surface, members, settings, n_members=10,
                        n_targets=8):
    base = np.array([0.9, 0.4, -0.7])
    base2 = np.array([0.5, -1.1, 1.3])
    targets = [np.array([0.4 + 0.11 * k, -2.5 + 0.6 * k, 0.3 + 0.5 * k])
               for k in range(n_targets)]
    round_trip = 0.0
    dual_res = 0.0
    spread = 0.0
    for k, m in enumerate(members[:n_members]):
        dec = characterize.decompose(m["u"], surface, targets, base,
                                     side="dual", settings=settings)
        f_true = expressions.eval_values(
            m["f"], {"z1": dec.targets[:, 0], "z2": dec.targets[:, 1]})
        diff = dec.f_values - f_true
        round_trip = max(round_trip, float(np.max(np.abs(diff - diff[0]))))
        dual_res = max(dual_res, dec.residuals["h_on_g"])
        if k < 3:
            dec2 = characterize.decompose(m["u"], surface, targets, base2,
                                          side="dual", settings=settings,
                                          check_membership=False)
            d = dec.f_values - dec2.f_values
            spread = max(spread, float(np.max(np.abs(d - d[0]))))
    report.add("decomposition_round_trip", "cr-part-recovery", round_trip, 1e-6)
    report.add("decomposition_dual_residual", "dual-part-annihilated",
               dual_res, 1e-7)
    report.add("decomposition_basepoint_spread", "basepoint-independence",
               spread, 1e-7)


# -- 8 ----------------------------------------------------------------

def check_second_operator(report, surface, corpora, pts, settings,
                          n_members=5, n_pts=5):
    worst_diff = 0.0
    worst_cr = 0.0
    for side, key in (("dual", "dual_members"), ("plh", "conjugate_members")):
        for m in corpora[key][:n_members]:
            rows = characterize.second_operator_value(
                m["u"], surface, pts[:n_pts], side=side, order=6)
            for r in rows:
                worst_diff = max(worst_diff, r["difference"])
                worst_cr = max(worst_cr, r["result_cr_residual"])
    report.add("second_operator_two_path", "divergence-formula-agreement",
               worst_diff, 1e-8)
    report.add("second_operator_result_cr", "result-is-cr", worst_cr, 1e-8)


# -- 9 ----------------------------------------------------------------

def check_pairing(report, surface, rng, grid_n):
    grid = sample_grid(surface, grid_n, grid_n)
    # CR monomial against dual-CR monomial of a different multidegree:
    # phase mismatch under the torus of independent rotations kills these.
    pairs = [((1, 0), (0, 1)), ((0, 1), (1, 0)), ((1, 1), (2, 0)),
             ((2, 0), (1, 1)), ((0, 2), (1, 1)), ((1, 0), (2, 1)),
             ((2, 1), (1, 0)), ((1, 2), (0, 1)), ((0, 1), (0, 2)),
             ((2, 2), (1, 0))]
    worst = 0.0
    for a, b in pairs:
        mu = expressions.monomial(("z1", "z2"), a)
        eta = expressions.monomial(("w1", "w2"), b)
        worst = max(worst, abs(calculus.pairing(mu, eta, surface, grid)))
    report.add("pairing_orthogonality", "cr-pairs-dualcr-to-zero", worst, 1e-8)

    worst_parts = 0.0
    worst_parts_w = 0.0
    for _ in range(3):
        gamma = characterize.mixed_monomial(rng)
        eta = characterize.mixed_monomial(rng)
        worst_parts = max(worst_parts,
                          abs(calculus.parts_residual(gamma, eta, surface, grid)))
        worst_parts_w = max(
            worst_parts_w,
            abs(calculus.parts_residual_weighted(gamma, eta, surface, grid)))
    report.add("integration_by_parts_dual", "t-parts-identity",
               worst_parts, 1e-7)
    report.add("integration_by_parts_weighted", "x-parts-identity-ds-alpha",
               worst_parts_w, 1e-7)

    f = parse("1 / (2 + z1)")
    vals = [calculus.weighted_integral(f, surface, sample_grid(surface, n, n))
            for n in (16, 24, 32)]
    d1, d2 = abs(vals[1] - vals[0]), abs(vals[2] - vals[1])
    floor = 1e-12 * max(1.0, abs(vals[2]))
    ratio = 0.0 if d1 <= floor else d2 / d1
    report.add("quadrature_convergence", "cross-resolution-ratio", ratio, 0.3,
               verdict=bool(ratio < 0.3),
               integrals={"n16": vals[0], "n24": vals[1], "n32": vals[2]})


# -- 10 ---------------------------------------------------------------

def check_geometry(report, surface, pts, settings, grid_n, n_bidual=100,
                   n_ext=20):
    worst = 0.0
    for z in pts[:n_bidual]:
        zz = bidual_point(surface, z)
        worst = max(worst, float(np.max(np.abs(zz - np.asarray(z)))))
    report.add("biduality", "dual-of-dual-recovers-point", worst, 1e-8)

    grid = sample_grid(surface, grid_n, grid_n)
    report.add("divergence_free_y", "div-y-vanishes",
               calculus.div_y_residual(surface, grid), 1e-10)

    worst_ext = 0.0
    for z in pts[:n_ext]:
        f_log = get_frame(surface, z, settings.jet_order, "log")
        f_per = get_frame(surface, z, settings.jet_order, "perturbed",
                          settings.extension_eps)
        diff = max(abs(f_log.fields["V"][k].const - f_per.fields["V"][k].const)
                   for k in range(4))
        worst_ext = max(worst_ext, diff)
    report.add("extension_independence", "v-independent-of-extension",
               worst_ext, 1e-8)


# -- 11 ---------------------------------------------------------------

def check_sphere_classical(report, sphere, pts, rng, settings, n_each=10,
                           n_eval=30):
    corpus = [m["u"] for m in
              characterize.member_corpus(rng, n_each, "conjugate")]
    corpus += [characterize.mixed_monomial(rng) for _ in range(n_each)]
    eval_pts = pts[:n_eval]
    agree = True
    worst_gap = 0.0
    for u in corpus:
        classical, frame_based = characterize.sphere_classical_operators(
            u, sphere, eval_pts, tol=1e-8, order=settings.jet_order,
            delta_sing=settings.delta_sing)
        if classical.verdict != frame_based.verdict:
            agree = False
            worst_gap = max(worst_gap, abs(classical.max_residual
                                           - frame_based.max_residual))
    report.add("sphere_classical_agreement", "rotation-operator-verdicts",
               worst_gap, 0.0, verdict=agree)


# -- 12 ---------------------------------------------------------------

def check_nirenberg(report, rng, n_jets=100):
    failures = 0
    for _ in range(n_jets):
        coeffs = characterize.random_exact_jet(rng)
        if not characterize.verify_nirenberg_jet(coeffs):
            failures += 1
    report.add("exact_jet_interpolation", "pluriharmonic-2-jet-identity",
               float(failures), 0.0, verdict=(failures == 0))


# -- 13 ---------------------------------------------------------------

def check_rescalings(report, surface, members, pts, rng, settings,
                     n_triples=5, n_members=10, n_pts=10):
    worst = 0.0
    total_excluded = 0
    for _ in range(n_triples):
        f1 = expressions.add(
            expressions.const(2.0 + rng.random()),
            characterize.random_holomorphic_poly(rng, ("z1", "z2"), 2, 2))
        f2 = characterize.random_holomorphic_poly(rng, ("z1", "z2"), 2, 2)
        f3 = expressions.add(
            expressions.const(1.5 + rng.random()),
            characterize.random_holomorphic_poly(rng, ("z1", "z2"), 2, 2))
        factory = characterize.rescaled_fields_factory(f1, f2, f3)
        for m in members[:n_members]:
            for z in pts[:n_pts]:
                frame = get_frame(surface, z, settings.jet_order)
                try:
                    extra = factory(frame)
                except VanishingScale:
                    total_excluded += 1
                    continue
                val = apply_word_jet(("Xr", "Xr", "Tr"), m["u"], surface, z,
                                     settings.jet_order, frame,
                                     extra_fields=extra).const
                worst = max(worst, abs(val))
    report.add("rescaled_operator_annihilation", "rescaled-word-on-members",
               worst, 1e-8, excluded_points=total_excluded)
