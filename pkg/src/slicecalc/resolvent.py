"""Left and right S-resolvent operators and their slice powers.

The scalar s acts on module elements by left Clifford multiplication, so
s*I is the diagonal operator diag(s).  With that convention

    S_L^{-1}(s, T) = -Q_s(T)^{-1} (T - conj(s) I)
    S_R^{-1}(s, T) = -(T - conj(s) I) Q_s(T)^{-1}

and the slice powers are Q_s(T)^{-m} composed with the binomial star power
(conj(s) I - T)^{*m}, whose coefficients sit to the right of T^k on the
left side and to the left of T^k on the right side.
"""

from __future__ import annotations

import enum
from math import comb

import numpy as np

from .clifford import Multivector, Paravector, blade_table, paravector_inverse
from .errors import DimensionError, DomainError, InvertibilityError, SpectrumError
from .operators import COND_CAP, CliffordOperator, op_inverse
from .polynomials import (
    LEFT,
    RIGHT,
    binomial_power,
    eval_operator,
    eval_real_operator,
    real_coefficients,
    star_convolve,
)
from .spectrum import q_eval


class ResolventSide(str, enum.Enum):
    Left = LEFT
    Right = RIGHT

    @classmethod
    def parse(cls, value) -> ResolventSide:
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


def _check(T: CliffordOperator, s: Paravector) -> None:
    if s.n != T.n:
        raise DimensionError(f"paravector in R^{s.n + 1} used with an operator over R_{T.n}")


def q_inverse(T: CliffordOperator, s: Paravector, cond_cap: float = COND_CAP) -> CliffordOperator:
    """Q_s(T)^{-1}, raising SpectrumError when s is (numerically) in the S-spectrum."""
    _check(T, s)
    try:
        return op_inverse(q_eval(T, s), cond_cap)
    except InvertibilityError as exc:
        raise SpectrumError(
            f"s = {s.s0:+.6g} + |{s.imag_norm:.6g}| I lies in the S-spectrum: {exc}",
            smallest_singular_value=exc.smallest_singular_value,
        ) from exc


def s_resolvent(T: CliffordOperator, s: Paravector, side=ResolventSide.Left, cond_cap: float = COND_CAP) -> CliffordOperator:
    side = ResolventSide.parse(side)
    Qi = q_inverse(T, s, cond_cap)
    A = T - CliffordOperator.scalar(T.n, T.d, s.conj())
    return -(Qi @ A) if side is ResolventSide.Left else -(A @ Qi)


def _power(Qi: CliffordOperator, m: int) -> CliffordOperator:
    out = CliffordOperator.identity(Qi.n, Qi.d)
    for _ in range(m):
        out = out @ Qi
    return out


def s_resolvent_power(T: CliffordOperator, s: Paravector, m: int, side=ResolventSide.Left,
                      cond_cap: float = COND_CAP) -> CliffordOperator:
    """S^{-m}(s, T): Q_s(T)^{-m} and the star power (conj(s) I - T)^{*m}."""
    if m < 0:
        raise ValueError("resolvent power must be nonnegative")
    side = ResolventSide.parse(side)
    _check(T, s)
    if m == 0:
        return CliffordOperator.identity(T.n, T.d)
    Qm = _power(q_inverse(T, s, cond_cap), m)
    P = eval_operator(T, binomial_power(s.conj(), m, T.n), side.value)
    return Qm @ P if side is ResolventSide.Left else P @ Qm


def star_pair_polynomial(s: Paravector, m: int, k: int, n: int) -> list[Multivector]:
    """Coefficients of (conj(s) - x)^{*m} * (s - x)^{*k}."""
    return star_convolve(binomial_power(s.conj(), m, n), binomial_power(s, k, n))


def star_power_pair(T: CliffordOperator, s: Paravector, m: int, k: int, side=ResolventSide.Left,
                    cond_cap: float = COND_CAP, check: bool = True) -> CliffordOperator:
    """S^{-m}(s, T) * S^{-k}(conj(s), T) in closed form.

    The polynomial factor has real coefficients only when m == k (it is
    then Q_s^m); in that case the commutation with T is asserted.
    """
    if m < 0 or k < 0:
        raise ValueError("star powers must be nonnegative")
    side = ResolventSide.parse(side)
    _check(T, s)
    if m == k == 0:
        return CliffordOperator.identity(T.n, T.d)
    coeffs = star_pair_polynomial(s, m, k, T.n)
    if check and m == k:
        P = eval_real_operator(T, real_coefficients(coeffs))
    else:
        P = eval_operator(T, coeffs, side.value)
    Qm = _power(q_inverse(T, s, cond_cap), m + k)
    return Qm @ P if side is ResolventSide.Left else P @ Qm


def star_pair_sum_polynomial(s: Paravector, n_index: int, n: int) -> np.ndarray:
    """Real coefficients of sum_{k=0}^{n} (conj(s) - x)^{*(k+1)} * (s - x)^{*(n-k+1)}."""
    total = None
    for k in range(n_index + 1):
        term = star_pair_polynomial(s, k + 1, n_index - k + 1, n)
        total = term if total is None else [a + b for a, b in zip(total, term)]
    return real_coefficients(total)


def star_pair_sum(T: CliffordOperator, s: Paravector, n_index: int, cond_cap: float = COND_CAP,
                  Qi: CliffordOperator | None = None) -> CliffordOperator:
    """sum_{k=0}^{n} S_L^{-(k+1)}(s, T) * S_L^{-(n-k+1)}(conj(s), T).

    The polynomial factor is real, so the left and right forms coincide.
    """
    _check(T, s)
    Qi = Qi if Qi is not None else q_inverse(T, s, cond_cap)
    P = eval_real_operator(T, star_pair_sum_polynomial(s, n_index, T.n))
    return _power(Qi, n_index + 2) @ P


def resolvent_series(T: CliffordOperator, s: Paravector, K: int, side=ResolventSide.Left) -> CliffordOperator:
    """Truncated Cauchy-kernel series sum_{k<=K} T^k s^{-1-k} (left) or s^{-1-k} T^k (right)."""
    side = ResolventSide.parse(side)
    _check(T, s)
    sinv = paravector_inverse(s).mv
    coeffs = [sinv]
    for _ in range(K):
        coeffs.append(coeffs[-1] * sinv)
    return eval_operator(T, coeffs, side.value)


def resolvent_power_series(s: Paravector, m: int, K: int, n: int) -> list[Multivector]:
    """Coefficients of (s - x)^{-m} = sum_j C(j+m-1, j) x^j s^{-m-j} up to x^K."""
    sinv = paravector_inverse(s).mv
    base = sinv ** m
    out = []
    for j in range(K + 1):
        out.append(base * float(comb(j + m - 1, j)))
        base = base * sinv
    return out


def formal_pair_diagnostic(T: CliffordOperator, s: Paravector, m: int, k: int, K: int = 200,
                           side=ResolventSide.Left) -> float:
    """Distance between the closed-form star pair and the star product of the two resolvent series.

    Meaningful only when |s| exceeds the spectral radius of T, where both
    series converge.
    """
    side = ResolventSide.parse(side)
    f = resolvent_power_series(s, m, K, T.n)
    g = resolvent_power_series(s.conj(), k, K, T.n)
    series = eval_operator(T, star_convolve(f, g)[:K + 1], side.value)
    return (series - star_power_pair(T, s, m, k, side, check=False)).rho_norm()


def _pencil_scalar(x: Paravector, c: Paravector) -> Multivector:
    """x^2 - 2 c0 x + |c|^2 as an element of R_n."""
    xm = x.mv
    return xm * xm - 2.0 * c.s0 * xm + c.norm2()


def resolvent_equation_residual(T: CliffordOperator, s: Paravector, p: Paravector,
                                cond_cap: float = COND_CAP, sign_corrected: bool = False) -> tuple[float, float]:
    """Residuals of both forms of the S-resolvent equation for S_R^{-1}(s, T) S_L^{-1}(p, T).

    First form:  [D p - conj(s) D] (p^2 - 2 s0 p + |s|^2)^{-1}
    Second form: (s^2 - 2 p0 s + |p|^2)^{-1} [s D - D conj(p)]
    with D = S_R^{-1}(s, T) - S_L^{-1}(p, T).  The second form as written
    carries the wrong overall sign (already for real commuting data it gives
    D/(s - p) instead of D/(p - s)); ``sign_corrected=True`` negates it.
    """
    _check(T, s)
    _check(T, p)
    SR = s_resolvent(T, s, ResolventSide.Right, cond_cap)
    SL = s_resolvent(T, p, ResolventSide.Left, cond_cap)
    lhs = SR @ SL
    D = SR - SL
    scale = max(1.0, s.norm2(), p.norm2())
    a = _pencil_scalar(p, s)
    b = _pencil_scalar(s, p)
    if min(a.norm(), b.norm()) <= 1e-12 * scale:
        raise DomainError("p lies on the sphere [s]; the scalar pencil is not invertible")
    rhs1 = ((D @ p) - (s.conj() @ D)) @ a.inverse()
    rhs2 = b.inverse() @ ((s @ D) - (D @ p.conj()))
    if sign_corrected:
        rhs2 = -rhs2
    return (lhs - rhs1).rho_norm(), (lhs - rhs2).rho_norm()


def resolvent_equation_scale(T: CliffordOperator, s: Paravector, p: Paravector, cond_cap: float = COND_CAP) -> float:
    """Magnitude of the terms in the resolvent equation, for relative thresholds."""
    SR = s_resolvent(T, s, ResolventSide.Right, cond_cap)
    SL = s_resolvent(T, p, ResolventSide.Left, cond_cap)
    D = (SR - SL).rho_norm()
    inv = max(_pencil_scalar(p, s).inverse().norm(), _pencil_scalar(s, p).inverse().norm())
    return max(1.0, SR.rho_norm() * SL.rho_norm() + D * (s.norm() + p.norm()) * inv)


def resolvent_rho_stack(T: CliffordOperator, u: np.ndarray, vec: np.ndarray, side=ResolventSide.Left,
                        cond_cap: float = COND_CAP) -> tuple[np.ndarray, np.ndarray]:
    """rho(S^{-1}(s_j, T)) for many points s_j = u_j + vec_j at once.

    Returns the stack of real representations, shape (M, dD, dD), and the
    smallest singular value of rho(Q_{s_j}(T)) at every point.  Raises
    SpectrumError if any point is numerically in the S-spectrum.
    """
    side = ResolventSide.parse(side)
    table = blade_table(T.n)
    u = np.asarray(u, dtype=float).reshape(-1)
    vec = np.asarray(vec, dtype=float).reshape(u.size, T.n)
    R = np.array(T.real_rep())
    dim = R.shape[0]
    eye = np.eye(dim)
    w = u ** 2 + np.sum(vec ** 2, axis=1)
    RQ = (R @ R)[None] - 2.0 * u[:, None, None] * R[None] + w[:, None, None] * eye[None]
    sv = np.linalg.svd(RQ, compute_uv=False)
    smin, smax = sv[:, -1], sv[:, 0]
    bad = np.flatnonzero((smin == 0.0) | (smax > cond_cap * smin))
    if bad.size:
        j = int(bad[0])
        raise SpectrumError(
            f"point {j} (u={u[j]:.6g}, |v|={np.linalg.norm(vec[j]):.6g}) lies in the S-spectrum",
            smallest_singular_value=float(smin[j]),
        )
    # rho(conj(s) I) = kron(I_d, L_conj(s)); L_x for a paravector x = u + vec
    slots = table.vector_slots
    L = table.left  # (a, c, b)
    Lc = u[:, None, None] * L[0][None] - np.einsum("mk,kcb->mcb", vec, L[slots])
    RA = R[None] - np.einsum("ij,mcb->micjb", np.eye(T.d), Lc).reshape(u.size, dim, dim)
    if side is ResolventSide.Left:
        S = -np.linalg.solve(RQ, RA)
    else:
        S = -np.matmul(RA, np.linalg.inv(RQ))
    return S, smin


def entries_from_rho(rho: np.ndarray, n: int, d: int) -> np.ndarray:
    """Clifford entries (..., d, d, 2^n) from real representations (..., dD, dD)."""
    D = 1 << n
    lead = rho.shape[:-2]
    R5 = rho.reshape(*lead, d, D, d, D)[..., 0]
    return np.swapaxes(R5, -1, -2)
