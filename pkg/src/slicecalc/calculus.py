"""Slice hyperholomorphic functions and the S-functional calculus.

Two kinds of scalar function are supported.  A power series carries
Clifford coefficients and a side (sum x^k a_k or sum a_k x^k).  An intrinsic
function is given on every slice by f(u + Iv) = alpha(u, v) + I beta(u, v)
with real alpha even and beta odd in v; the built-in ones come from a
complex analytic g with g(conj z) = conj g(z), so alpha = Re g, beta = Im g.

f(T) is computed by the periodic trapezoid rule on a circle s(t) = c + r e^{It}
in one slice.  There ds_I = -ds I = (s - c) dt, so

    f(T) ~ (1/M) sum_j S_L^{-1}(s_j, T) (s_j - c) f(s_j)      (left)
    f(T) ~ (1/M) sum_j f(s_j) (s_j - c) S_R^{-1}(s_j, T)      (right)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .clifford import Multivector, Paravector, blade_table, check_unit
from .contour import Contour
from .errors import DomainError, HypothesisError, SchemaError, UnsupportedError
from .operators import CliffordOperator, op_norm
from .polynomials import as_mv, check_side, eval_operator, eval_point, star_convolve
from .resolvent import ResolventSide, entries_from_rho, resolvent_rho_stack, s_resolvent, s_resolvent_power
from .series import TruncationReport, check_commute
from .spectrum import SpectralScan, scan_spectrum

CLEARANCE_RTOL = 1e-6


class SliceFunction:
    """Common interface: ``values_on_slice`` evaluates at complex points of a slice."""

    kind: str = "abstract"
    side: str = "left"

    def values_on_slice(self, z: np.ndarray, unit: np.ndarray) -> np.ndarray:
        """Coefficients (M, 2^n) of f(Re z + I Im z)."""
        raise NotImplementedError

    def check_disk(self, center: float, radius: float) -> None:
        """Raise DomainError unless f is defined on a neighbourhood of the closed disk."""

    def derivative(self, order: int = 1) -> SliceFunction:
        raise NotImplementedError


def _embed(z: np.ndarray, unit: np.ndarray, n: int) -> np.ndarray:
    """Coefficients of Re z + I Im z, shape z.shape + (2^n,)."""
    table = blade_table(n)
    out = np.zeros(z.shape + (table.dim,))
    out[..., 0] = z.real
    out[..., table.vector_slots] = z.imag[..., None] * unit
    return out


@dataclass(frozen=True)
class PowerSeries(SliceFunction):
    """sum_k x^k a_k (left) or sum_k a_k x^k (right), convergent for |x| < radius."""

    coeffs: tuple[Multivector, ...]
    side: str = "left"
    radius: float = math.inf
    kind: str = field(default="series", init=False)

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a power series needs at least one coefficient")
        n = self.coeffs[0].n
        object.__setattr__(self, "coeffs", tuple(as_mv(n, c) for c in self.coeffs))
        object.__setattr__(self, "side", check_side(self.side))

    @classmethod
    def real(cls, n: int, coeffs: Sequence[float], side: str = "left", radius: float = math.inf) -> PowerSeries:
        return cls(tuple(Multivector.scalar(n, float(c)) for c in coeffs), side, radius)

    @classmethod
    def monomial(cls, n: int, k: int, side: str = "left") -> PowerSeries:
        return cls.real(n, [0.0] * k + [1.0], side)

    @property
    def n(self) -> int:
        return self.coeffs[0].n

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_real(self, tol: float = 0.0) -> bool:
        return all(c.is_real(tol) for c in self.coeffs)

    def __call__(self, x) -> Multivector:
        return eval_slice_function(self, x)

    def values_on_slice(self, z: np.ndarray, unit: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) >= self.radius):
            raise DomainError(f"power series evaluated outside its disk of convergence (radius {self.radius})")
        G = blade_table(self.n).structure
        A = np.array([c.coeffs for c in self.coeffs])
        P = _embed(z[:, None] ** np.arange(len(self.coeffs))[None, :], unit, self.n)  # (M, K, D)
        if self.side == "left":
            return np.einsum("mka,kb,abc->mc", P, A, G)
        return np.einsum("ka,mkb,abc->mc", A, P, G)

    def check_disk(self, center: float, radius: float) -> None:
        if abs(center) + radius >= self.radius:
            raise DomainError(
                f"disk |s - {center:.6g}| <= {radius:.6g} leaves the convergence ball of radius {self.radius:.6g}"
            )

    def derivative(self, order: int = 1) -> PowerSeries:
        coeffs = list(self.coeffs)
        for _ in range(order):
            if len(coeffs) == 1:
                coeffs = [Multivector.scalar(self.n, 0.0)]
                break
            coeffs = [c * float(k) for k, c in enumerate(coeffs)][1:]
        return PowerSeries(tuple(coeffs), self.side, self.radius)

    def to_json(self) -> dict:
        out = {"kind": "series", "side": self.side, "coeffs": [c.to_json() for c in self.coeffs]}
        if math.isfinite(self.radius):
            out["radius"] = self.radius
        return out


# complex analytic families g^{(m)}(z) for the built-in intrinsic functions

def _exp_family(m: int, z):
    return np.exp(z)


def _sin_family(m: int, z):
    return [np.sin, np.cos, lambda w: -np.sin(w), lambda w: -np.cos(w)][m % 4](z)


def _cos_family(m: int, z):
    return [np.cos, lambda w: -np.sin(w), lambda w: -np.cos(w), np.sin][m % 4](z)


def _poly_family(coeffs: Sequence[float]):
    P = np.polynomial.Polynomial(np.asarray(coeffs, dtype=float))

    def g(m: int, z):
        return P.deriv(m)(z) if m <= P.degree() else np.zeros_like(np.asarray(z, dtype=complex))

    return g


def _inverse_quadratic_family(a: float, b: float):
    """g(z) = (z^2 - 2 a z + b)^{-1} and its derivatives via partial fractions."""
    disc = complex(a * a - b)
    root = np.sqrt(disc)
    z1, z2 = a + root, a - root

    def g(m: int, z):
        z = np.asarray(z, dtype=complex)
        sign = (-1) ** m
        if abs(z1 - z2) <= 1e-14 * max(1.0, abs(a)):
            return sign * math.factorial(m + 1) * (z - a) ** (-m - 2)
        return sign * math.factorial(m) / (z1 - z2) * ((z - z1) ** (-m - 1) - (z - z2) ** (-m - 1))

    return g, (z1, z2)


def _fd_weights(m: int, p: int) -> np.ndarray:
    """Central stencil weights on offsets -p..p for the m-th derivative (unit step)."""
    offsets = np.arange(-p, p + 1, dtype=float)
    V = np.vander(offsets, 2 * p + 1, increasing=True).T
    rhs = np.zeros(2 * p + 1)
    rhs[m] = math.factorial(m)
    return np.linalg.solve(V, rhs)


def fd_step(m: int, scale: float = 1.0) -> float:
    """Default step: 1e-4 for first derivatives, 1e-3 for second, 1e-2 beyond (times max(1, scale))."""
    base = {1: 1e-4, 2: 1e-3}.get(m, 1e-2)
    return base * max(1.0, scale)


def central_difference(F: Callable[[float], np.ndarray], m: int, h: float, richardson: bool = True):
    """m-th derivative at 0 by a fourth-order central stencil, optionally Richardson-extrapolated."""
    if m == 0:
        return F(0.0)
    p = 2 + (m - 1) // 2
    w = _fd_weights(m, p)
    offsets = np.arange(-p, p + 1)

    def D(step):
        return sum(wj * F(j * step) for wj, j in zip(w, offsets) if wj != 0.0) / step ** m

    if not richardson:
        return D(h)
    return (16.0 * D(h / 2.0) - D(h)) / 15.0


@dataclass(frozen=True)
class IntrinsicFunction(SliceFunction):
    """f(u + Iv) = alpha(u, v) + I beta(u, v) with real alpha, beta.

    ``family(m, z)`` gives the m-th complex derivative when available; a
    user-supplied (alpha, beta) pair without it is differentiated in u by
    finite differences.
    """

    name: str
    alpha: Callable | None = None
    beta: Callable | None = None
    family: Callable | None = None
    order: int = 0
    poles: tuple[complex, ...] = ()
    params: dict = field(default_factory=dict)
    fd_h: float | None = None
    kind: str = field(default="intrinsic", init=False)
    side: str = field(default="left", init=False)

    def _pair(self, u, v):
        if self.family is not None:
            w = self.family(self.order, np.asarray(u) + 1j * np.asarray(v))
            return np.real(w), np.imag(w)
        if self.order == 0:
            return np.asarray(self.alpha(u, v), dtype=float), np.asarray(self.beta(u, v), dtype=float)
        h = self.fd_h if self.fd_h is not None else fd_step(self.order, float(np.max(np.abs(u))))
        base = replace(self, order=0)

        def F(delta):
            a, b = base._pair(np.asarray(u) + delta, v)
            return np.stack([a, b])

        out = central_difference(F, self.order, h)
        return out[0], out[1]

    def alpha_beta(self, u, v) -> tuple[np.ndarray, np.ndarray]:
        return self._pair(u, v)

    def __call__(self, x) -> Multivector:
        return eval_slice_function(self, x)

    def values_on_slice(self, z: np.ndarray, unit: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        for pole in self.poles:
            if np.any(np.abs(z - pole) < 1e-12 * max(1.0, abs(pole))):
                raise DomainError(f"{self.name} evaluated at its pole {pole}")
        a, b = self._pair(z.real, z.imag)
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise DomainError(f"{self.name} is not finite on the requested points")
        n = len(unit)
        table = blade_table(n)
        out = np.zeros(z.shape + (table.dim,))
        out[..., 0] = a
        out[..., table.vector_slots] = np.asarray(b)[..., None] * unit
        return out

    def check_disk(self, center: float, radius: float) -> None:
        for pole in self.poles:
            if abs(pole - center) <= radius:
                raise DomainError(f"{self.name} has a pole {pole} inside the disk |s - {center:.6g}| <= {radius:.6g}")

    def derivative(self, order: int = 1) -> IntrinsicFunction:
        return replace(self, order=self.order + order)

    def finite_difference_variant(self) -> IntrinsicFunction:
        """Same function as a bare (alpha, beta) pair, so derivatives go through finite differences."""
        if self.family is None:
            return self
        g, m = self.family, self.order

        def alpha(u, v):
            return np.real(g(m, np.asarray(u) + 1j * np.asarray(v)))

        def beta(u, v):
            return np.imag(g(m, np.asarray(u) + 1j * np.asarray(v)))

        return replace(self, alpha=alpha, beta=beta, family=None, order=0)

    def to_json(self) -> dict:
        out = {"kind": "intrinsic", "name": self.name}
        out.update(self.params)
        if self.order:
            out["order"] = self.order
        return out


def intrinsic(name: str, **params) -> IntrinsicFunction:
    """Built-in intrinsic functions: exp, sin, cos, polynomial(coeffs), inverse_quadratic(a, b) = 1/(z^2 - 2az + b)."""
    if name == "exp":
        return IntrinsicFunction("exp", family=_exp_family)
    if name == "sin":
        return IntrinsicFunction("sin", family=_sin_family)
    if name == "cos":
        return IntrinsicFunction("cos", family=_cos_family)
    if name == "polynomial":
        coeffs = [float(c) for c in params["coeffs"]]
        return IntrinsicFunction("polynomial", family=_poly_family(coeffs), params={"coeffs": coeffs})
    if name == "inverse_quadratic":
        a, b = float(params["a"]), float(params["b"])
        g, poles = _inverse_quadratic_family(a, b)
        return IntrinsicFunction("inverse_quadratic", family=g, poles=poles, params={"a": a, "b": b})
    if name in _REGISTRY:
        alpha, beta = _REGISTRY[name]
        return IntrinsicFunction(name, alpha=alpha, beta=beta)
    raise UnsupportedError(f"unknown intrinsic function {name!r}")


_REGISTRY: dict[str, tuple[Callable, Callable]] = {}


def register_intrinsic(name: str, alpha: Callable, beta: Callable) -> None:
    """Make a user (alpha, beta) pair available by name; derivatives use finite differences."""
    _REGISTRY[name] = (alpha, beta)


def cauchy_riemann_defect(f: IntrinsicFunction, u: float, v: float, h: float = 1e-5) -> tuple[float, float]:
    """(d_u alpha - d_v beta, d_u beta + d_v alpha) at (u, v) by central differences."""
    a_u = (np.array(f.alpha_beta(u + h, v)) - np.array(f.alpha_beta(u - h, v))) / (2 * h)
    a_v = (np.array(f.alpha_beta(u, v + h)) - np.array(f.alpha_beta(u, v - h))) / (2 * h)
    return float(a_u[0] - a_v[1]), float(a_u[1] + a_v[0])


# evaluation

def eval_slice_function(f: SliceFunction, x) -> Multivector:
    """f(x) for a paravector x: Horner for series, alpha + I_x beta for intrinsic functions."""
    if isinstance(x, Multivector):
        x = Paravector.from_multivector(x)
    if isinstance(f, PowerSeries):
        if x.norm() >= f.radius:
            raise DomainError(f"|x| = {x.norm():.6g} outside the convergence radius {f.radius:.6g}")
        return eval_point(f.coeffs, x, f.side)
    vals = f.values_on_slice(np.array([x.to_complex()]), x.unit())
    return Multivector(x.n, vals[0])


def representation_formula(f: SliceFunction, x: Paravector, unit) -> Multivector:
    """f(x) rebuilt from f(u + Iv) and f(u - Iv) on the slice C_I:

    f(u + Jv) = 1/2 [f(u+Iv) + f(u-Iv)] + J 1/2 [I (f(u-Iv) - f(u+Iv))]  (left)
    f(u + Jv) = 1/2 [f(u+Iv) + f(u-Iv)] + 1/2 [(f(u-Iv) - f(u+Iv)) I] J  (right)
    """
    I = check_unit(unit, x.n)
    u, v = x.slice_coords()
    J = Paravector(0.0, x.unit()).mv
    Im = Paravector(0.0, I).mv
    fp = eval_slice_function(f, Paravector(u, v * I))
    fm = eval_slice_function(f, Paravector(u, -v * I))
    if f.side == "right":
        return (fp + fm) * 0.5 + ((fm - fp) * Im) * J * 0.5
    return (fp + fm) * 0.5 + J * (Im * (fm - fp)) * 0.5


def slice_derivative(f: SliceFunction, order: int = 1) -> SliceFunction:
    if order < 0:
        raise ValueError("derivative order must be nonnegative")
    return f if order == 0 else f.derivative(order)


def scalar_star_product(f: SliceFunction, g: SliceFunction) -> PowerSeries:
    """Cauchy convolution of two power series on the same side."""
    if not (isinstance(f, PowerSeries) and isinstance(g, PowerSeries)):
        raise UnsupportedError("star products are implemented for power series only")
    if f.side != g.side:
        raise UnsupportedError("star product of a left and a right series")
    return PowerSeries(tuple(star_convolve(f.coeffs, g.coeffs)), f.side, min(f.radius, g.radius))


def op_star_series(F: Sequence, G: Sequence, T: CliffordOperator, side="left") -> CliffordOperator:
    """F * G = sum_n T^n (sum_k a_k b_{n-k}) (left) or sum_n (sum_k a_k b_{n-k}) T^n (right)."""
    side = check_side(side)
    a = [as_mv(T.n, c) for c in F]
    b = [as_mv(T.n, c) for c in G]
    return eval_operator(T, star_convolve(a, b), side)


# contour quadrature

class ContourQuadrature:
    """S-resolvents of T at the contour nodes, reusable for many functions."""

    def __init__(self, T: CliffordOperator, contour: Contour, side=ResolventSide.Left,
                 clearance_rtol: float = CLEARANCE_RTOL):
        if contour.n != T.n:
            raise HypothesisError(f"contour lives in R^{contour.n + 1}, operator over R_{T.n}")
        self.T = T
        self.contour = contour
        self.side = ResolventSide.parse(side)
        u, vec = contour.points()
        rho, smin = resolvent_rho_stack(T, u, vec, self.side)
        floor = clearance_rtol * op_norm(T) ** 2
        if not float(smin.min()) > floor:
            raise HypothesisError(
                f"contour node too close to the S-spectrum: sigma_min(Q) = {smin.min():.3e} <= {floor:.3e}"
            )
        self.sigma_min = smin
        self.entries = entries_from_rho(rho, T.n, T.d)  # (M, d, d, D)
        z = contour.complex_nodes()
        self.unit = np.asarray(contour.unit)
        self.dz = _embed(z - contour.center, self.unit, T.n) / contour.nodes  # (s_j - c)/M

    def apply(self, f: SliceFunction) -> CliffordOperator:
        if isinstance(f, PowerSeries) and f.side != self.side.value:
            raise UnsupportedError(f"{f.side} power series used with the {self.side.value} calculus")
        f.check_disk(self.contour.center, self.contour.radius)
        vals = f.values_on_slice(self.contour.complex_nodes(), self.unit)
        return self.apply_values(vals)

    def apply_values(self, vals: np.ndarray) -> CliffordOperator:
        G = blade_table(self.T.n).structure
        if self.side is ResolventSide.Left:
            w = np.einsum("ma,mb,abc->mc", self.dz, vals, G)  # (s_j - c) f(s_j)
            E = np.einsum("mija,mb,abc->ijc", self.entries, w, G)
        else:
            w = np.einsum("ma,mb,abc->mc", vals, self.dz, G)  # f(s_j) (s_j - c)
            E = np.einsum("ma,mijb,abc->ijc", w, self.entries, G)
        return CliffordOperator(self.T.n, E)


def check_enclosure(contour: Contour, scan: SpectralScan, margin: float = 0.0) -> float:
    clearance = contour.clearance(scan)
    if not clearance > margin:
        raise HypothesisError(
            f"contour does not clear the S-spectrum by more than {margin:.6g} (clearance {clearance:.6g})"
        )
    return clearance


def functional_calculus(f: SliceFunction, T: CliffordOperator, contour: Contour, side=ResolventSide.Left,
                        scan: SpectralScan | None = None, check: bool = True) -> CliffordOperator:
    """f(T) by the trapezoid rule on the contour (see the module docstring)."""
    if check:
        check_enclosure(contour, scan if scan is not None else scan_spectrum(T))
    return ContourQuadrature(T, contour, side).apply(f)


def resolvent_derivative_residual(T: CliffordOperator, s: Paravector, m: int, side=ResolventSide.Left,
                                  h: float | None = None) -> float:
    """Relative gap between d^m/ds0^m S^{-1}(s, T) (finite differences) and (-1)^m m! S^{-(m+1)}(s, T)."""
    side = ResolventSide.parse(side)
    if m == 0:
        return 0.0
    h = fd_step(m, s.norm()) if h is None else h
    base = np.asarray(s.vec)

    def F(delta):
        return s_resolvent(T, Paravector(s.s0 + delta, base), side).entries

    approx = CliffordOperator(T.n, central_difference(F, m, h))
    exact = s_resolvent_power(T, s, m + 1, side) * float((-1) ** m * math.factorial(m))
    return (approx - exact).rho_norm() / exact.rho_norm()


def taylor_formula(f: SliceFunction, T: CliffordOperator, N: CliffordOperator, contour: Contour, K: int,
                   side=ResolventSide.Left, eps: float | None = None, scan_T: SpectralScan | None = None,
                   scan_N: SpectralScan | None = None, check: bool = True, return_operators: bool = False):
    """|| f(T+N) - sum_{n<=K} N^n (1/n!) (d_s^n f)(T) || (right side: (1/n!)(d_s^n f)(T) N^n).

    With ``return_operators`` the result is (report, f(T+N), truncated sum).
    """
    side = ResolventSide.parse(side)
    notes: dict = {"side": side.value, "norm": "rho"}
    if check:
        notes["commutator"] = check_commute(T, N)
        scan_T = scan_T if scan_T is not None else scan_spectrum(T)
        scan_N = scan_N if scan_N is not None else scan_spectrum(N)
        if scan_N.flagged or scan_T.flagged:
            raise HypothesisError("spectral scan found no points")
        eps = 1.05 * scan_N.radius if eps is None else float(eps)
        if eps > 0 and not scan_N.radius < eps:
            raise HypothesisError(f"sigma_S(N) radius {scan_N.radius:.6g} is not inside B_eps, eps = {eps:.6g}")
        notes["eps"] = eps
        notes["clearance"] = check_enclosure(contour, scan_T, eps)
    lhs = ContourQuadrature(T + N, contour, side).apply(f)
    quad = ContourQuadrature(T, contour, side)
    total = CliffordOperator.zeros(T.n, T.d)
    Npow = CliffordOperator.identity(T.n, T.d)
    norms, curve = [], []
    for n in range(K + 1):
        Fn = quad.apply(slice_derivative(f, n)) / math.factorial(n)
        term = Npow @ Fn if side is ResolventSide.Left else Fn @ Npow
        total = total + term
        norms.append(term.rho_norm())
        curve.append((total - lhs).rho_norm())
        Npow = Npow @ N
    notes["curve"] = curve
    notes["lhs_norm"] = lhs.rho_norm()
    report = TruncationReport(K=K, residual=curve[-1], bound=None, term_norms=norms, notes=notes)
    return (report, lhs, total) if return_operators else report


def function_from_json(data: dict, n: int) -> SliceFunction:
    from .io import multivector_from_json

    if not isinstance(data, dict):
        raise SchemaError("function spec must be a JSON object")
    try:
        kind = data["kind"]
        if kind == "series":
            coeffs = tuple(multivector_from_json(n, c) for c in data["coeffs"])
            return PowerSeries(coeffs, data.get("side", "left"), float(data.get("radius", math.inf)))
        if kind == "intrinsic":
            params = {k: v for k, v in data.items() if k not in ("kind", "name", "order")}
            f = intrinsic(data["name"], **params)
            return f.derivative(int(data["order"])) if data.get("order") else f
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"malformed function spec: {exc}") from exc
    raise SchemaError(f"unknown function kind {kind!r}")
