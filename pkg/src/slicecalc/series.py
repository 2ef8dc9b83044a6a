"""Series identities for the S-resolvent and the perturbation series in N.

Covers the auxiliary power-sum lemmas behind the Cauchy-kernel series, the
inverse series Sigma(s, T, N) of Q_s(T + N), the resolvent Taylor series
S^{-1}(s, T + N) = sum_n N^n S^{-(n+1)}(s, T) and the constants K_T, K_N
bounding the terms.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .clifford import Multivector, Paravector, paravector_inverse
from .contour import Contour
from .errors import DomainError, HypothesisError, InvariantError
from .operators import CliffordOperator, op_inverse, op_norm
from .polynomials import binomial_power, eval_operator, eval_real_operator, poly_add, star_convolve
from .resolvent import (
    ResolventSide,
    q_inverse,
    resolvent_rho_stack,
    s_resolvent,
    star_pair_polynomial,
    star_power_pair,
)
from .spectrum import SpectralScan, q_eval, scan_spectrum, slice_distance

log = logging.getLogger(__name__)

COMMUTATOR_RTOL = 1e-10
ROUNDOFF = 64 * np.finfo(float).eps


@dataclass
class TruncationReport:
    K: int
    residual: float
    bound: float | None = None
    term_norms: list[float] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"K": self.K, "residual": self.residual, "bound": self.bound, "term_norms": list(self.term_norms)}
        if self.notes:
            out["notes"] = self.notes
        return out


# power sums of s^{-1} and conj(s)^{-1}

def _inverse_powers(s: Paravector, count: int) -> tuple[list[Multivector], list[Multivector]]:
    si = paravector_inverse(s).mv
    sbi = paravector_inverse(s.conj()).mv
    a, b = [Multivector.scalar(s.n, 1.0)], [Multivector.scalar(s.n, 1.0)]
    for _ in range(count):
        a.append(a[-1] * si)
        b.append(b[-1] * sbi)
    return a, b


def _real_power_sum(a: list[Multivector], b: list[Multivector], n: int, rtol: float = 1e-13) -> float:
    """sum_{k=0}^{n} s^{-k} conj(s)^{-n+k}, checked to be real."""
    total = Multivector.scalar(a[0].n, 0.0)
    for k in range(n + 1):
        total = total + a[k] * b[n - k]
    scale = max(float(np.abs(total.coeffs).max()), 1e-300)
    defect = float(np.abs(total.coeffs[1:]).max(initial=0.0))
    if defect > rtol * scale:
        raise InvariantError(f"power sum of order {n} is not real (defect {defect:.3e})")
    return float(total.coeffs[0])


def _require_nonzero(s: Paravector) -> None:
    if s.norm2() == 0.0:
        raise DomainError("s must be nonzero")


def lemma_rpfl_residual(T: CliffordOperator, s: Paravector, n: int) -> float:
    """|| sum_k T^k s^{-k} (T conj(s)^{-1})^{n-k} - T^n sum_k s^{-k} conj(s)^{-n+k} ||."""
    _require_nonzero(s)
    a, b = _inverse_powers(s, max(n, 1))
    sbi = b[1]
    Ts = T @ sbi
    lhs = CliffordOperator.zeros(T.n, T.d)
    Tk = CliffordOperator.identity(T.n, T.d)
    Ts_pows = [CliffordOperator.identity(T.n, T.d)]
    for _ in range(n):
        Ts_pows.append(Ts_pows[-1] @ Ts)
    for k in range(n + 1):
        lhs = lhs + (Tk @ a[k]) @ Ts_pows[n - k]
        Tk = Tk @ T
    rhs = (T ** n) * _real_power_sum(a, b, n)
    return (lhs - rhs).rho_norm()


def _cauchy_partial(T: CliffordOperator, s: Paravector, m: int) -> CliffordOperator:
    """S(m): the double sum of T^k s^{-k} (T conj(s)^{-1})^{n-k} W, with W = T^2/|s|^2 - (s^{-1} + conj(s)^{-1}) T + I."""
    a, b = _inverse_powers(s, max(m, 1))
    I = CliffordOperator.identity(T.n, T.d)
    W = (T @ T) / s.norm2() - (T @ (a[1] + b[1])) + I
    Ts = T @ b[1]
    Ts_pows = [I]
    for _ in range(m):
        Ts_pows.append(Ts_pows[-1] @ Ts)
    T_pows = [I]
    for _ in range(m):
        T_pows.append(T_pows[-1] @ T)
    total = CliffordOperator.zeros(T.n, T.d)
    for n in range(m + 1):
        inner = CliffordOperator.zeros(T.n, T.d)
        for k in range(n + 1):
            inner = inner + (T_pows[k] @ a[k]) @ Ts_pows[n - k]
        total = total + inner @ W
    return total


def s_m_closed_form(T: CliffordOperator, s: Paravector, m: int) -> CliffordOperator:
    """I - T^{m+1} sum_{k<=m+1} s^{-k} conj(s)^{-(m+1)+k} + T^{m+2} |s|^{-2} sum_{k<=m} s^{-k} conj(s)^{-m+k}."""
    a, b = _inverse_powers(s, m + 1)
    I = CliffordOperator.identity(T.n, T.d)
    c1 = _real_power_sum(a, b, m + 1)
    c2 = _real_power_sum(a, b, m) / s.norm2()
    Tm1 = T ** (m + 1)
    return I - Tm1 * c1 + (Tm1 @ T) * c2


def s_m_closed_form_residual(T: CliffordOperator, s: Paravector, m: int) -> float:
    _require_nonzero(s)
    return (_cauchy_partial(T, s, m) - s_m_closed_form(T, s, m)).rho_norm()


def main_series_bound(ratio: float, K: int) -> float:
    """Tail estimate (K+1) r^{K+1} + (K+2) r^{K+2} with the counts (K+1), (K+2) in the stated order."""
    return (K + 1) * ratio ** (K + 1) + (K + 2) * ratio ** (K + 2)


def main_series_bound_corrected(ratio: float, K: int) -> float:
    """(K+2) r^{K+1} + (K+1) r^{K+2}: the sums have K+2 and K+1 terms respectively."""
    return (K + 2) * ratio ** (K + 1) + (K + 1) * ratio ** (K + 2)


def main_series_residual(T: CliffordOperator, s: Paravector, K: int) -> TruncationReport:
    """|| (sum_{k<=K} T^k s^{-k-1}) (conj(s) I - T)^{-1} Q_s(T) - I || with the stated tail bound."""
    _require_nonzero(s)
    nT = op_norm(T)
    if not nT < s.norm():
        raise DomainError(f"main series needs ||T|| < |s| (got {nT:.6g} >= {s.norm():.6g})")
    ratio = nT / s.norm()
    I = CliffordOperator.identity(T.n, T.d)
    A = op_inverse(CliffordOperator.scalar(T.n, T.d, s.conj()) - T)
    tail = A @ q_eval(T, s)
    sinv = paravector_inverse(s).mv
    terms = []
    c = sinv
    Tk = I
    for _ in range(K + 1):
        terms.append(Tk @ c)
        Tk = Tk @ T
        c = c * sinv
    partial = CliffordOperator.zeros(T.n, T.d)
    for t in terms:
        partial = partial + t
    residual = (partial @ tail - I).rho_norm()
    cauchy = (_cauchy_partial(T, s, K) - I).rho_norm()
    return TruncationReport(
        K=K,
        residual=residual,
        bound=main_series_bound(ratio, K),
        term_norms=[t.rho_norm() for t in terms],
        notes={
            "ratio": ratio,
            "norm": "rho",
            "double_sum_residual": cauchy,
            "corrected_bound": main_series_bound_corrected(ratio, K),
            "roundoff_floor": ROUNDOFF * max(1.0, tail.rho_norm() / s.norm()) * (K + 1),
        },
    )


# perturbation series

@dataclass
class PairHypotheses:
    """The checked hypotheses on (T, N, s) for the perturbation series."""

    eps: float
    theta: float
    dist: float
    commutator: float
    radius_N: float
    scan_T: SpectralScan
    scan_N: SpectralScan

    def to_json(self) -> dict:
        return {"eps": self.eps, "theta": self.theta, "dist": self.dist,
                "commutator": self.commutator, "radius_N": self.radius_N}


def commutator_defect(T: CliffordOperator, N: CliffordOperator) -> tuple[float, float]:
    """(||TN - NT||, rtol * ||T|| ||N||)."""
    c = T.commutator(N).rho_norm()
    return c, COMMUTATOR_RTOL * T.rho_norm() * N.rho_norm()


def check_commute(T: CliffordOperator, N: CliffordOperator) -> float:
    c, tol = commutator_defect(T, N)
    if c > tol:
        raise HypothesisError(f"T and N do not commute: ||TN - NT|| = {c:.3e} > {tol:.3e}")
    return c


def check_pair_hypotheses(T: CliffordOperator, N: CliffordOperator, s: Paravector | None = None,
                          eps: float | None = None, scan_T: SpectralScan | None = None,
                          scan_N: SpectralScan | None = None) -> PairHypotheses:
    """Commutation, sigma_S(N) inside B_eps(0) and dist(s, sigma_S(T)) > eps.

    eps defaults to 1.05 times the scan radius of N.
    """
    comm = check_commute(T, N)
    scan_T = scan_T if scan_T is not None else scan_spectrum(T)
    scan_N = scan_N if scan_N is not None else scan_spectrum(N)
    if scan_N.flagged:
        raise HypothesisError("spectral scan of N found no points; cannot bound sigma_S(N)")
    if scan_T.flagged:
        raise HypothesisError("spectral scan of T found no points")
    radius_N = scan_N.radius
    eps = 1.05 * radius_N if eps is None else float(eps)
    if eps > 0 and not radius_N < eps:
        raise HypothesisError(f"sigma_S(N) radius {radius_N:.6g} is not inside B_eps with eps = {eps:.6g}")
    if eps == 0 and radius_N > 0:
        raise HypothesisError("eps = 0 needs sigma_S(N) = {0}")
    theta = radius_N / eps if eps > 0 else 0.0
    dist = slice_distance(s, scan_T) if s is not None else float("inf")
    if not dist > eps:
        raise HypothesisError(f"dist(s, sigma_S(T)) = {dist:.6g} does not exceed eps = {eps:.6g}")
    return PairHypotheses(eps, theta, dist, comm, radius_N, scan_T, scan_N)


def _star_pair_sum_real(s: Paravector, n_index: int) -> np.ndarray:
    """Real coefficients of sum_{k=0}^{n} (conj(s) - x)^{k+1} (s - x)^{n-k+1} on the slice of s."""
    P = np.polynomial.polynomial
    z = s.to_complex()
    a, b = np.array([np.conj(z), -1.0]), np.array([z, -1.0])
    total = np.zeros(n_index + 3, dtype=complex)
    pa = P.polypow(a, 1)
    for k in range(n_index + 1):
        term = P.polymul(pa, P.polypow(b, n_index - k + 1))
        total[:term.size] += term
        pa = P.polymul(pa, a)
    scale = max(1.0, float(np.abs(total).max()))
    if float(np.abs(total.imag).max()) > 1e-12 * scale:
        raise InvariantError("star-pair sum has non-real coefficients")
    return total.real


def sigma_series(T: CliffordOperator, N: CliffordOperator, s: Paravector, K: int = 200,
                 tol: float = 1e-17, hypotheses: PairHypotheses | None = None, check: bool = True,
                 return_terms: bool = False):
    """Sigma(s, T, N) = sum_n (sum_k S_L^{-(k+1)}(s,T) * S_L^{-(n-k+1)}(conj(s),T)) N^n.

    Summation stops after two consecutive terms below ``tol`` (relative to
    the first term) or at order K.
    """
    if check and hypotheses is None:
        hypotheses = check_pair_hypotheses(T, N, s)
    Qi = q_inverse(T, s)
    Qpow = Qi @ Qi
    Npow = CliffordOperator.identity(T.n, T.d)
    total = CliffordOperator.zeros(T.n, T.d)
    norms: list[float] = []
    small = 0
    for n in range(K + 1):
        term = Qpow @ eval_real_operator(T, _star_pair_sum_real(s, n)) @ Npow
        total = total + term
        norms.append(term.rho_norm())
        small = small + 1 if norms[-1] <= tol * norms[0] else 0
        if small >= 2:
            break
        Qpow = Qpow @ Qi
        Npow = Npow @ N
    return (total, norms) if return_terms else total


def sigma_series_report(T: CliffordOperator, N: CliffordOperator, s: Paravector, K: int = 200,
                        hypotheses: PairHypotheses | None = None) -> TruncationReport:
    """Residuals of Sigma Q_s(T+N) = I and Q_s(T+N) Sigma = I."""
    hyp = hypotheses if hypotheses is not None else check_pair_hypotheses(T, N, s)
    S, norms = sigma_series(T, N, s, K, hypotheses=hyp, return_terms=True)
    Q = q_eval(T + N, s)
    I = CliffordOperator.identity(T.n, T.d)
    right = (S @ Q - I).rho_norm()
    left = (Q @ S - I).rho_norm()
    return TruncationReport(
        K=len(norms) - 1,
        residual=max(left, right),
        bound=None,
        term_norms=norms,
        notes={
            "sigma_Q": right,
            "Q_sigma": left,
            "commutes_T": S.commutator(T).rho_norm(),
            "commutes_N": S.commutator(N).rho_norm(),
            "hypotheses": hyp.to_json(),
            "norm": "rho",
        },
    )


def coefficient_terms(s: Paravector, n_index: int) -> list[list[Multivector]]:
    """The three groups of terms of the coefficient A_n, as Clifford-coefficient polynomials in x."""
    n = s.n
    lin = [Multivector.scalar(n, -2.0 * s.s0), Multivector.scalar(n, 2.0)]  # 2x - 2 s0
    terms = [star_pair_polynomial(s, k + 1, n_index - k + 1, n) for k in range(n_index + 1)]
    terms += [star_convolve(star_pair_polynomial(s, k + 1, n_index - k, n), lin) for k in range(n_index)]
    terms += [star_pair_polynomial(s, k + 1, n_index - k + 1, n) for k in range(1, n_index)]
    return terms


def coefficient_polynomial(s: Paravector, n_index: int) -> list[Multivector]:
    total: list[Multivector] = [Multivector.scalar(s.n, 0.0)]
    for t in coefficient_terms(s, n_index):
        total = poly_add(total, t)
    return total


def coefficient_norms(T: CliffordOperator, s: Paravector, orders=range(1, 7)) -> list[tuple[int, float, float]]:
    """(n, ||A_n(T)||, scale), scale = sum over the terms of sum_j |a_j| ||T||^j."""
    out = []
    nT = T.rho_norm()
    for n_index in orders:
        terms = coefficient_terms(s, n_index)
        total: list[Multivector] = [Multivector.scalar(s.n, 0.0)]
        for t in terms:
            total = poly_add(total, t)
        A = eval_operator(T, total, "left")
        scale = sum(c.norm() * nT ** j for t in terms for j, c in enumerate(t))
        out.append((n_index, A.rho_norm(), max(scale, 1.0)))
    return out


def resolvent_taylor(T: CliffordOperator, N: CliffordOperator, s: Paravector, K: int,
                     side=ResolventSide.Left, hypotheses: PairHypotheses | None = None,
                     check: bool = True) -> TruncationReport:
    """|| sum_{n<=K} N^n S_L^{-(n+1)}(s,T) - S_L^{-1}(s,T+N) || (right: S_R^{-(n+1)}(s,T) N^n).

    T and N must commute; the expansion of S^{-1}(s, T+N) relies on it.
    """
    side = ResolventSide.parse(side)
    hyp = hypotheses
    if check and hyp is None:
        hyp = check_pair_hypotheses(T, N, s)
    target = s_resolvent(T + N, s, side)
    Qi = q_inverse(T, s)
    Qpow = Qi
    Npow = CliffordOperator.identity(T.n, T.d)
    total = CliffordOperator.zeros(T.n, T.d)
    norms, curve = [], []
    for n in range(K + 1):
        P = eval_operator(T, binomial_power(s.conj(), n + 1, T.n), side.value)
        if side is ResolventSide.Left:
            term = Npow @ (Qpow @ P)
        else:
            term = (P @ Qpow) @ Npow
        total = total + term
        norms.append(term.rho_norm())
        curve.append((total - target).rho_norm())
        Qpow = Qpow @ Qi
        Npow = Npow @ N
    notes = {"side": side.value, "curve": curve, "norm": "rho"}
    if hyp is not None:
        notes["hypotheses"] = hyp.to_json()
    return TruncationReport(K=K, residual=curve[-1], bound=None, term_norms=norms, notes=notes)


# K_T and K_N

@dataclass
class BoundEstimate:
    value: float
    norm: str
    checks: list[dict]
    per_direction: list[float]

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def to_json(self) -> dict:
        return {"value": self.value, "norm": self.norm, "passed": self.passed,
                "per_direction": list(self.per_direction), "checks": self.checks}


def default_directions(n: int, count: int = 8, seed: int = 0) -> np.ndarray:
    """``count`` unit vectors in R^n: the coordinate axes first, then random ones."""
    rng = np.random.default_rng(seed)
    dirs = [np.eye(n)[j] for j in range(n)]
    dirs += [-np.eye(n)[j] for j in range(n)]
    while len(dirs) < count:
        v = rng.standard_normal(n)
        dirs.append(v / np.linalg.norm(v))
    return np.array(dirs[:max(count, 1)])


def contour_resolvent_mean(T: CliffordOperator, contour: Contour, side=ResolventSide.Left,
                           clearance: float = 0.0) -> float:
    """(1/2 pi) integral of ||S^{-1}(p, T)|| |dp| over the contour by the trapezoid rule."""
    u, vec = contour.points()
    S, smin = resolvent_rho_stack(T, u, vec, side)
    if clearance > 0 and float(smin.min()) < clearance:
        raise HypothesisError(f"contour passes within sigma_min {smin.min():.3e} of the S-spectrum")
    norms = np.linalg.norm(S, 2, axis=(1, 2))
    return float(contour.radius * norms.mean())


def _sample_outside(contour: Contour, eps: float, directions: np.ndarray, per_direction: int = 6) -> list[Paravector]:
    pts = []
    for J in directions:
        for j in range(per_direction):
            ang = 2.0 * np.pi * (j + 0.5) / per_direction
            rr = contour.radius + eps * (1.05 + 0.5 * (j % 3))
            z = contour.center + rr * np.exp(1j * ang)
            pts.append(Paravector(z.real, z.imag * np.asarray(J)))
    return pts


def kt_estimate(T: CliffordOperator, contour: Contour, eps: float | None = None,
                directions: np.ndarray | None = None, max_order: int = 6,
                samples: list[Paravector] | None = None, rtol: float = 1e-10) -> BoundEstimate:
    """K_T = sup_J (1/2 pi) integral ||S_L^{-1}(p, T)|| |dp| over the contour on C_J.

    Also checks ||S^{-m}(s,T) * S^{-n}(conj(s),T)|| <= K_T / eps^{m+n} on both
    sides for sampled s at distance > eps from the closed disk, m + n <= max_order.
    ``rtol`` absorbs the trapezoid error in K_T.
    """
    directions = default_directions(T.n) if directions is None else np.atleast_2d(directions)
    eps = 0.25 * contour.radius if eps is None else float(eps)
    clearance = 1e-6 * op_norm(T) ** 2
    per_dir = [contour_resolvent_mean(T, contour.with_unit(J), ResolventSide.Left, clearance) for J in directions]
    KT = max(per_dir)
    checks = []
    pts = samples if samples is not None else _sample_outside(contour, eps, directions[:2])
    for s in pts:
        dist = float(np.hypot(s.s0 - contour.center, s.imag_norm)) - contour.radius
        if not dist > eps:
            raise HypothesisError(f"sample point at distance {dist:.6g} <= eps = {eps:.6g} from the contour disk")
        for total in range(max_order + 1):
            for m in range(total + 1):
                k = total - m
                for side in (ResolventSide.Left, ResolventSide.Right):
                    lhs = star_power_pair(T, s, m, k, side, check=False).rho_norm()
                    rhs = KT / eps ** total
                    checks.append({"s": s.to_json(), "m": m, "n": k, "side": side.value,
                                   "lhs": lhs, "rhs": rhs, "pass": bool(lhs <= rhs * (1 + rtol))})
    return BoundEstimate(KT, "rho", checks, per_dir)


def kn_estimate(N: CliffordOperator, radius: float, nodes: int = 256, directions: np.ndarray | None = None,
                max_power: int = 12, scan: SpectralScan | None = None, rtol: float = 1e-10) -> BoundEstimate:
    """K_N = (1/2 pi) integral over |s| = radius of ||S_L^{-1}(s, N)|| |ds| (radius = theta * eps).

    Checks ||N^m|| <= K_N radius^m for m <= max_power.  The supremum over the
    sampled slice directions is reported.
    """
    scan = scan if scan is not None else scan_spectrum(N)
    if scan.flagged:
        raise HypothesisError("spectral scan of N found no points")
    if not scan.radius < radius:
        raise HypothesisError(f"sigma_S(N) radius {scan.radius:.6g} is not inside the circle of radius {radius:.6g}")
    directions = default_directions(N.n) if directions is None else np.atleast_2d(directions)
    per_dir = [contour_resolvent_mean(N, Contour(tuple(J), 0.0, radius, nodes)) for J in directions]
    KN = max(per_dir)
    checks = []
    P = CliffordOperator.identity(N.n, N.d)
    for m in range(max_power + 1):
        lhs = P.rho_norm()
        rhs = KN * radius ** m
        checks.append({"m": m, "lhs": lhs, "rhs": rhs, "pass": bool(lhs <= rhs * (1 + rtol))})
        P = P @ N
    return BoundEstimate(KN, "rho", checks, per_dir)


def default_truncation(KT: float, KN: float, eps: float, theta: float, tol: float = 1e-12, cap: int = 400) -> int:
    """Smallest K with K_T K_N / eps^2 * sum_{n>K} (n+1) theta^n < tol."""
    if theta <= 0.0:
        return 0
    if theta >= 1.0:
        raise HypothesisError("theta must be below 1 for the comparison series to converge")
    c = KT * KN / eps ** 2
    for K in range(cap + 1):
        # sum_{n>K} (n+1) theta^n = theta^{K+1} ((K+2) - (K+1) theta) / (1 - theta)^2
        tail = theta ** (K + 1) * ((K + 2) - (K + 1) * theta) / (1.0 - theta) ** 2
        if c * tail < tol:
            return K
    return cap
