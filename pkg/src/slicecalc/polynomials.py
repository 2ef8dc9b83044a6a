"""Polynomials with Clifford coefficients and their star products.

A coefficient list ``[a_0, ..., a_K]`` stands for sum_k x^k a_k on the left
side and sum_k a_k x^k on the right side.  The star product of two such
polynomials is the Cauchy convolution of their coefficient lists on either
side; only the place where the variable sits differs.
"""

from __future__ import annotations

from math import comb
from typing import Sequence

import numpy as np

from .clifford import Multivector, Paravector
from .errors import DimensionError, InvariantError
from .operators import CliffordOperator

LEFT = "left"
RIGHT = "right"


def as_mv(n: int, a) -> Multivector:
    if isinstance(a, Multivector):
        if a.n != n:
            raise DimensionError(f"coefficient lives in R_{a.n}, expected R_{n}")
        return a
    if isinstance(a, Paravector):
        if a.n != n:
            raise DimensionError(f"coefficient lives in R_{a.n}, expected R_{n}")
        return a.mv
    return Multivector.scalar(n, float(a))


def check_side(side) -> str:
    value = getattr(side, "value", side)
    if value not in (LEFT, RIGHT):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return value


def binomial_power(a, m: int, n: int) -> list[Multivector]:
    """Coefficients of (a - x)^{*m} = sum_k C(m, k) (-x)^k a^{m-k}.

    The same list serves both sides because only powers of a single
    constant appear in each coefficient.
    """
    if m < 0:
        raise ValueError("star power must be nonnegative")
    a = as_mv(n, a)
    powers = [Multivector.scalar(n, 1.0)]
    for _ in range(m):
        powers.append(powers[-1] * a)
    return [powers[m - k] * float(comb(m, k) * (-1) ** k) for k in range(m + 1)]


def star_convolve(f: Sequence[Multivector], g: Sequence[Multivector]) -> list[Multivector]:
    """Cauchy convolution c_n = sum_k a_k b_{n-k}."""
    if not f or not g:
        return []
    n = f[0].n
    F = np.array([c.coeffs for c in f])
    G = np.array([c.coeffs for c in g])
    table = f[0].table
    out = np.zeros((len(f) + len(g) - 1, table.dim))
    for k, a in enumerate(F):
        # a * b for every b at once: (L_a @ G^T)^T
        out[k:k + len(g)] += G @ Multivector(n, a).left_matrix().T
    return [Multivector(n, row) for row in out]


def poly_add(f: Sequence[Multivector], g: Sequence[Multivector]) -> list[Multivector]:
    n = (f or g)[0].n
    size = max(len(f), len(g))
    zero = Multivector.scalar(n, 0.0)
    return [(f[k] if k < len(f) else zero) + (g[k] if k < len(g) else zero) for k in range(size)]


def real_coefficients(coeffs: Sequence[Multivector], rtol: float = 1e-12) -> np.ndarray:
    """Scalar parts of the coefficients, after checking the other blades vanish."""
    C = np.array([c.coeffs for c in coeffs])
    scale = max(1.0, float(np.abs(C).max(initial=0.0)))
    defect = float(np.abs(C[:, 1:]).max(initial=0.0))
    if defect > rtol * scale:
        raise InvariantError(f"polynomial is not real: non-scalar coefficient size {defect:.3e} (scale {scale:.3e})")
    return C[:, 0].copy()


def eval_operator(T: CliffordOperator, coeffs: Sequence, side=LEFT) -> CliffordOperator:
    """sum_k T^k a_k (left) or sum_k a_k T^k (right) by Horner's rule."""
    side = check_side(side)
    coeffs = [as_mv(T.n, c) for c in coeffs]
    if not coeffs:
        return CliffordOperator.zeros(T.n, T.d)
    out = CliffordOperator.scalar(T.n, T.d, coeffs[-1])
    for c in reversed(coeffs[:-1]):
        step = T @ out if side == LEFT else out @ T
        out = step + CliffordOperator.scalar(T.n, T.d, c)
    return out


def eval_real_operator(T: CliffordOperator, coeffs: Sequence[float]) -> CliffordOperator:
    """Real-coefficient polynomial in T (side does not matter)."""
    if len(coeffs) == 0:
        return CliffordOperator.zeros(T.n, T.d)
    I = CliffordOperator.identity(T.n, T.d)
    out = float(coeffs[-1]) * I
    for c in reversed(coeffs[:-1]):
        out = T @ out + float(c) * I
    return out


def eval_point(coeffs: Sequence, x, side=LEFT) -> Multivector:
    """sum_k x^k a_k (left) or sum_k a_k x^k (right) for x in R_n."""
    side = check_side(side)
    xm = x.mv if isinstance(x, Paravector) else x
    coeffs = [as_mv(xm.n, c) for c in coeffs]
    if not coeffs:
        return Multivector.scalar(xm.n, 0.0)
    out = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        out = (xm * out if side == LEFT else out * xm) + c
    return out
