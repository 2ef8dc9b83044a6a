"""Analytic fixtures shipped as JSON and seeded fuzz generators."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .clifford import Paravector
from .contour import Contour
from .errors import SchemaError
from .io import operator_from_json
from .operators import CliffordOperator, op_norm
from .polynomials import eval_real_operator
from .spectrum import ScanConfig, SpectralScan, scan_spectrum

FIXTURES = ("real_diagonal", "paravector_constant", "block", "random_T")


def load_fixture(name: str) -> tuple[CliffordOperator, list[tuple[float, float]] | None]:
    """The operator and, for analytic fixtures, its known spectrum as (u, v) pairs."""
    if name not in FIXTURES:
        raise SchemaError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    data = json.loads(resources.files("slicecalc.data").joinpath(f"{name}.json").read_text())
    expected = data.get("expected_spectrum")
    return operator_from_json(data), ([tuple(p) for p in expected] if expected is not None else None)


def random_paravector_operator(rng: np.random.Generator, n: int, d: int, scale: float = 1.0) -> CliffordOperator:
    """T_0 + sum e_j T_j with Gaussian components, normalised to op_norm(T) = scale."""
    T = CliffordOperator.from_components(n, [rng.standard_normal((d, d)) for _ in range(n + 1)])
    return T * (scale / op_norm(T))


def random_operator(rng: np.random.Generator, n: int, d: int, scale: float = 1.0) -> CliffordOperator:
    """Gaussian entries in every blade, normalised to rho-norm = scale."""
    T = CliffordOperator(n, rng.standard_normal((d, d, 1 << n)))
    return T * (scale / T.rho_norm())


def random_unit(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal(n)
    return v / np.linalg.norm(v)


def random_paravector(rng: np.random.Generator, n: int, norm: float) -> Paravector:
    """Uniform direction in R^{n+1}, given Euclidean norm."""
    v = rng.standard_normal(n + 1)
    v *= norm / np.linalg.norm(v)
    return Paravector(v[0], v[1:])


def slice_point(u: float, v: float, unit) -> Paravector:
    return Paravector(u, v * np.asarray(unit, dtype=float))


@dataclass
class CommutingPair:
    """T, a real polynomial N in T, their scans and a point s with the perturbation hypotheses."""

    T: CliffordOperator
    N: CliffordOperator
    s: Paravector
    eps: float
    scan_T: SpectralScan
    scan_N: SpectralScan
    coeffs: tuple[float, ...]

    @property
    def theta(self) -> float:
        return self.scan_N.radius / self.eps if self.eps > 0 else 0.0

    def inputs(self) -> dict:
        return {"T": self.T.entries, "N": self.N.entries, "s": self.s.to_json(), "eps": self.eps}


def commuting_pair(rng: np.random.Generator, n: int = 2, d: int = 3, theta: float = 0.5,
                   cfg: ScanConfig | None = None) -> CommutingPair:
    """N = c0 I + c1 T + c2 T^2 with small real c; see :func:`complete_pair` for s and eps."""
    T = random_paravector_operator(rng, n, d, 1.0)
    coeffs = (float(rng.uniform(-0.02, 0.02)), float(rng.uniform(0.03, 0.08)), float(rng.uniform(-0.03, 0.03)))
    return complete_pair(T, eval_real_operator(T, coeffs), rng, theta, cfg, coeffs)


def complete_pair(T: CliffordOperator, N: CliffordOperator, rng: np.random.Generator, theta: float = 0.5,
                  cfg: ScanConfig | None = None, coeffs: tuple[float, ...] = ()) -> CommutingPair:
    """Scan both operators, set eps = radius(N)/theta and pick s at slice distance > 1.5 eps from sigma_S(T)."""
    scan_T = scan_spectrum(T, cfg)
    scan_N = scan_spectrum(N, cfg)
    eps = scan_N.radius / theta
    r = scan_T.radius + 1.5 * eps + float(rng.uniform(0.05, 0.5))
    angle = float(rng.uniform(0.0, np.pi))
    s = slice_point(r * np.cos(angle), r * np.sin(angle), random_unit(rng, T.n))
    return CommutingPair(T, N, s, eps, scan_T, scan_N, coeffs)


def enclosing_contour(scan: SpectralScan, unit, factor: float = 1.5, margin: float = 0.0,
                      nodes: int = 256, center: float = 0.0) -> Contour:
    """Circle about ``center`` whose slice clearance from the scan points exceeds ``margin``."""
    reach = max((float(np.hypot(p.u - center, p.v)) for p in scan.points), default=0.0)
    radius = max(factor * reach, reach + margin) + 0.25
    return Contour(tuple(np.asarray(unit, dtype=float)), center, radius, nodes)
