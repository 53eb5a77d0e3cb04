"""Truncated Taylor (jet) arithmetic in the four Wirtinger variables.

A jet stores the Taylor coefficients of a smooth function of
(z1, z2, conj z1, conj z2) at an implicit basepoint, up to a fixed total
order.  The four variables are treated as independent directions; complex
conjugation is an explicit involution swapping the two index blocks.

Coefficients are kept densely in a numpy array indexed by the multi-index
basis of the given order (degree-major, lexicographic within a degree), so
truncation to a lower order is a prefix slice.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import DomainError, NearZeroDenominator, OrderMismatch, SingularSystem

NVARS = 4
# direction indices for derivative()
D_Z1, D_Z2, D_ZB1, D_ZB2 = range(NVARS)
DIRECTIONS = {"z1": D_Z1, "z2": D_Z2, "zb1": D_ZB1, "zb2": D_ZB2}


@lru_cache(maxsize=None)
def basis(order: int) -> tuple:
    """Multi-indices of total degree <= order, degree-major then lexicographic.

    basis(k) is a prefix of basis(k+1), so truncation is a slice.
    """
    out = []
    for deg in range(order + 1):
        mono = []
        for a1 in range(deg + 1):
            for a2 in range(deg - a1 + 1):
                for b1 in range(deg - a1 - a2 + 1):
                    b2 = deg - a1 - a2 - b1
                    mono.append((a1, a2, b1, b2))
        mono.sort()
        out.extend(mono)
    return tuple(out)


@lru_cache(maxsize=None)
def _position(order: int) -> dict:
    return {m: i for i, m in enumerate(basis(order))}


def size(order: int) -> int:
    return len(basis(order))


@lru_cache(maxsize=None)
def _mult_table(order: int):
    pos = _position(order)
    b = basis(order)
    I, J, K = [], [], []
    for i, m in enumerate(b):
        dm = sum(m)
        for j, n in enumerate(b):
            if dm + sum(n) <= order:
                I.append(i)
                J.append(j)
                K.append(pos[(m[0] + n[0], m[1] + n[1], m[2] + n[2], m[3] + n[3])])
    return (np.array(I), np.array(J), np.array(K))


@lru_cache(maxsize=None)
def _deriv_table(order: int, direction: int):
    """For a jet of this order: source positions and factors producing the
    order-1 jet of the directional derivative."""
    pos = _position(order)
    src, fac = [], []
    for m in basis(order - 1):
        shifted = list(m)
        shifted[direction] += 1
        src.append(pos[tuple(shifted)])
        fac.append(shifted[direction])
    return np.array(src), np.array(fac, dtype=float)


@lru_cache(maxsize=None)
def _conj_perm(order: int):
    """dest[i] = position of the block-swapped multi-index of basis[i]."""
    pos = _position(order)
    return np.array([pos[(m[2], m[3], m[0], m[1])] for m in basis(order)])


class Jet:
    """Dense truncated Taylor expansion; immutable by convention."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: np.ndarray):
        self.order = order
        self.coeffs = coeffs

    # -- constructors -------------------------------------------------

    @staticmethod
    def constant(value, order: int) -> "Jet":
        c = np.zeros(size(order), dtype=complex)
        c[0] = value
        return Jet(order, c)

    @staticmethod
    def variable(index: int, value, order: int) -> "Jet":
        """Jet of the coordinate function z_index (index in {1, 2})."""
        if order < 1:
            raise ValueError("variable jets need order >= 1")
        if index not in (1, 2):
            raise ValueError("index must be 1 or 2")
        c = np.zeros(size(order), dtype=complex)
        c[0] = value
        first = [0, 0, 0, 0]
        first[index - 1] = 1
        c[_position(order)[tuple(first)]] = 1.0
        return Jet(order, c)

    # -- basic queries ------------------------------------------------

    @property
    def const(self) -> complex:
        return complex(self.coeffs[0])

    def coefficient(self, multi_index) -> complex:
        return complex(self.coeffs[_position(self.order)[tuple(multi_index)]])

    def truncate(self, order: int) -> "Jet":
        if order == self.order:
            return self
        if order > self.order:
            raise OrderMismatch(f"cannot extend order {self.order} to {order}")
        return Jet(order, self.coeffs[: size(order)].copy())

    def is_real(self, tol: float = 1e-10) -> bool:
        """True when the jet equals its own conjugate (up to tol)."""
        return float(np.max(np.abs(self.conj().coeffs - self.coeffs))) <= tol

    def norm(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    # -- ring operations ----------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.order != self.order:
                raise OrderMismatch(
                    f"orders {self.order} and {other.order} differ"
                )
            return other
        return Jet.constant(other, self.order)

    def __add__(self, other):
        other = self._coerce(other)
        return Jet(self.order, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.order, -self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        return Jet(self.order, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.order, self.coeffs * other)
        if other.order != self.order:
            raise OrderMismatch(f"orders {self.order} and {other.order} differ")
        I, J, K = _mult_table(self.order)
        prod = self.coeffs[I] * other.coeffs[J]
        out = np.bincount(K, weights=prod.real, minlength=size(self.order)).astype(
            complex
        )
        out += 1j * np.bincount(K, weights=prod.imag, minlength=size(self.order))
        return Jet(self.order, out)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.order, self.coeffs / other)
        return div(self, other)

    def __rtruediv__(self, other):
        return div(Jet.constant(other, self.order), self)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("jet powers must be integers; use power() for rationals")
        if n < 0:
            return div(Jet.constant(1.0, self.order), self.__pow__(-n))
        result = Jet.constant(1.0, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def conj(self) -> "Jet":
        out = np.empty_like(self.coeffs)
        out[_conj_perm(self.order)] = np.conj(self.coeffs)
        return Jet(self.order, out)

    def __repr__(self):
        return f"Jet(order={self.order}, const={self.const:.6g})"


def derivative(j: Jet, direction) -> Jet:
    """Wirtinger partial derivative; the order drops by one."""
    if isinstance(direction, str):
        direction = DIRECTIONS[direction]
    if j.order < 1:
        raise ValueError("cannot differentiate an order-0 jet")
    src, fac = _deriv_table(j.order, direction)
    return Jet(j.order - 1, j.coeffs[src] * fac)


def div(num: Jet, den: Jet, eps_div: float = 1e-12) -> Jet:
    """Truncated quotient via the geometric series of the normalized remainder."""
    if num.order != den.order:
        raise OrderMismatch(f"orders {num.order} and {den.order} differ")
    c = den.const
    if abs(c) <= eps_div:
        raise NearZeroDenominator(abs(c))
    rem = Jet(den.order, -den.coeffs / c)
    rem.coeffs[0] = 0.0  # rem = 1 - den/c, nilpotent part only
    inv = Jet.constant(1.0, den.order)
    acc = Jet.constant(1.0, den.order)
    for _ in range(den.order):
        acc = acc * rem
        inv = inv + acc
    return num * inv * (1.0 / c)


def _compose(j: Jet, series: np.ndarray) -> Jet:
    """sum_k series[k] * (j - const)^k via Horner."""
    h = Jet(j.order, j.coeffs.copy())
    h.coeffs[0] = 0.0
    result = Jet.constant(series[-1], j.order)
    for k in range(len(series) - 2, -1, -1):
        result = result * h + series[k]
    return result


def _require_positive_real(c: complex, what: str) -> float:
    if c.real <= 0 or abs(c.imag) > 1e-9 * max(1.0, abs(c)):
        raise DomainError(f"{what} needs a real positive constant term, got {c}")
    return c.real


def log(j: Jet) -> Jet:
    c = _require_positive_real(j.const, "log")
    series = np.empty(j.order + 1, dtype=complex)
    series[0] = np.log(c)
    for k in range(1, j.order + 1):
        series[k] = ((-1) ** (k + 1)) / (k * c**k)
    return _compose(j, series)


def exp(j: Jet) -> Jet:
    c = j.const
    series = np.empty(j.order + 1, dtype=complex)
    fact = 1.0
    for k in range(j.order + 1):
        if k:
            fact *= k
        series[k] = np.exp(c) / fact
    return _compose(j, series)


def power(j: Jet, r: float) -> Jet:
    """j**r for real (typically rational) exponent; constant term must be
    real positive."""
    c = _require_positive_real(j.const, "power")
    series = np.empty(j.order + 1, dtype=complex)
    binom = 1.0
    for k in range(j.order + 1):
        if k:
            binom *= (r - (k - 1)) / k
        series[k] = binom * c ** (r - k)
    return _compose(j, series)


def sqrt(j: Jet) -> Jet:
    return power(j, 0.5)


ELEMENTARY = {"log": log, "exp": exp, "sqrt": sqrt}


def elementary(j: Jet, fn: str, r: float | None = None) -> Jet:
    if fn == "pow":
        if r is None:
            raise ValueError("pow needs an exponent")
        return power(j, r)
    try:
        return ELEMENTARY[fn](j)
    except KeyError:
        raise ValueError(f"unknown elementary function {fn!r}") from None


def align(*jets: Jet) -> list:
    """Truncate all arguments to the smallest order among them."""
    order = min(j.order for j in jets)
    return [j.truncate(order) for j in jets]


def solve_linear(matrix, rhs, cond_limit: float = 1e8, eps_solve: float = 1e-9):
    """Solve a small (n <= 4) jet-valued linear system by Gaussian
    elimination with partial pivoting on constant-term magnitudes.

    Raises SingularSystem when the constant-term matrix is ill conditioned.
    """
    n = len(rhs)
    order = rhs[0].order
    a = [[matrix[i][j].truncate(order) for j in range(n)] for i in range(n)]
    b = [rhs[i].truncate(order) for i in range(n)]

    const = np.array([[a[i][j].const for j in range(n)] for i in range(n)])
    cond = np.linalg.cond(const)
    if not np.isfinite(cond) or cond > cond_limit:
        raise SingularSystem(cond)

    perm = list(range(n))
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col].const))
        if abs(a[piv][col].const) < 1e-300:
            raise SingularSystem(float("inf"))
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            b[col], b[piv] = b[piv], b[col]
            perm[col], perm[piv] = perm[piv], perm[col]
        inv_piv = div(Jet.constant(1.0, order), a[col][col])
        for r in range(col + 1, n):
            factor = a[r][col] * inv_piv
            for c in range(col, n):
                a[r][c] = a[r][c] - factor * a[col][c]
            b[r] = b[r] - factor * b[col]

    x = [None] * n
    for r in range(n - 1, -1, -1):
        acc = b[r]
        for c in range(r + 1, n):
            acc = acc - a[r][c] * x[c]
        x[r] = div(acc, a[r][r])

    # residual check against the original system
    residual = 0.0
    for i in range(n):
        acc = Jet.constant(0.0, order)
        for j in range(n):
            acc = acc + matrix[i][j].truncate(order) * x[j]
        residual = max(residual, (acc - rhs[i].truncate(order)).norm())
    scale = max(1.0, max(r.norm() for r in rhs))
    if residual > eps_solve * scale * max(1.0, cond):
        raise SingularSystem(cond)
    return x
