"""Words of tangential frame fields applied to test functions, and brackets.

All coefficient functions of the frame fields are materialized as jets at
the evaluation point, so applying a word is pure jet differentiation: no
finite-difference stencils anywhere.  A word has length at most three,
which the default jet order supports with one order to spare.
"""

from __future__ import annotations

import re

import numpy as np

from . import expressions
from .dualframe import FramePoint, directional, get_frame
from .errors import ExpressionSyntaxError
from .expressions import Expr
from .jets import Jet, derivative
from .surfaces import CircularSurface

ALPHABET = ("X", "T", "Y", "V", "R", "Xbar", "Tbar", "Ybar", "Vbar")

_WORD_ATOM = re.compile(r"^(?:bar\((X|T|Y|V|R)\)|(X|T|Y|V|R))$")


def parse_word(text: str) -> tuple:
    """Dot-separated word syntax, e.g. "X.X.T" or "bar(X).bar(X).bar(Y)"."""
    names = []
    for pos, atom in enumerate(text.split(".")):
        m = _WORD_ATOM.match(atom.strip())
        if m is None:
            raise ExpressionSyntaxError(pos, "a field atom like X or bar(X)", atom)
        if m.group(1):
            names.append(m.group(1) + "bar")
        else:
            names.append(m.group(2))
    if not 1 <= len(names) <= 3:
        raise ValueError("operator words must have length 1 to 3")
    return tuple(names)


def word_to_string(word) -> str:
    return ".".join(
        f"bar({n[:-3]})" if n.endswith("bar") else n for n in word
    )


def _resolve_field(name: str, frame: FramePoint, extra_fields=None):
    if extra_fields and name in extra_fields:
        return extra_fields[name]
    return frame.fields[name]


def apply_word_jet(
    word,
    expr: Expr,
    surface: CircularSurface,
    z,
    order: int = 5,
    frame: FramePoint | None = None,
    extension: str = "log",
    extra_fields: dict | None = None,
    eps_div: float = 1e-12,
) -> Jet:
    """Jet of (word applied to expr) at z; apply the rightmost field first."""
    if isinstance(word, str):
        word = parse_word(word)
    if frame is None:
        frame = get_frame(surface, z, order, extension)
    u = expressions.eval_jet(expr, frame.leaf_jets(), eps_div)
    for name in reversed(word):
        comps = _resolve_field(name, frame, extra_fields)
        u = directional(comps, u)
    return u


def apply_word(
    word,
    expr: Expr,
    surface: CircularSurface,
    z,
    order: int = 5,
    frame: FramePoint | None = None,
    extension: str = "log",
    extra_fields: dict | None = None,
    eps_div: float = 1e-12,
) -> complex:
    return apply_word_jet(
        word, expr, surface, z, order, frame, extension, extra_fields, eps_div
    ).const


def bracket(
    a: str,
    b: str,
    surface: CircularSurface,
    z,
    order: int = 5,
    frame: FramePoint | None = None,
    cross_check_tol: float = 1e-7,
):
    """Components of [A, B] at z, as constants in the Wirtinger basis.

    Computed from the derivative-of-coefficients formula and cross-checked
    against probing with the four coordinate functions; a disagreement is
    a hard internal error.
    """
    if frame is None:
        frame = get_frame(surface, z, order)
    A = frame.fields[a]
    B = frame.fields[b]

    comps = np.array(
        [(directional(A, B[i]) - directional(B, A[i])).const for i in range(4)]
    )

    # probe with the coordinate functions
    F = frame.order
    coords = (
        Jet.variable(1, frame.z[0], F),
        Jet.variable(2, frame.z[1], F),
        Jet.variable(1, frame.z[0], F).conj(),
        Jet.variable(2, frame.z[1], F).conj(),
    )
    probe = np.array(
        [
            (directional(A, directional(B, c)) - directional(B, directional(A, c))).const
            for c in coords
        ]
    )
    scale = max(1.0, float(np.max(np.abs(comps))))
    disagreement = float(np.max(np.abs(comps - probe))) / scale
    if disagreement > cross_check_tol:
        raise AssertionError(
            f"bracket [{a},{b}] computed two ways disagrees by {disagreement:.3e}"
        )
    return comps


def field_constants(frame: FramePoint, name: str) -> np.ndarray:
    return np.array([c.const for c in frame.fields[name]])


def scalar_derivative(frame: FramePoint, field_name: str, scalar_name: str) -> complex:
    """Directional derivative of a frame scalar along a frame field."""
    return directional(frame.fields[field_name], frame.scalars[scalar_name]).const


def singular_points_mask(expr: Expr, env: dict, delta_sing: float):
    """Admissibility mask for a set of points (True = usable)."""
    return expressions.admissible_mask(expr, env, delta_sing)
