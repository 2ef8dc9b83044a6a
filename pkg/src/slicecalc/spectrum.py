"""Locating the S-spectrum by scanning sigma_min of Q_s(T) = T^2 - 2 Re(s) T + |s|^2 I.

Q_s(T) depends on s only through u = Re(s) and |s|^2 = u^2 + v^2, so a scan
of the closed upper half-plane {(u, v): v >= 0} of any slice C_I covers the
whole spectrum; a point with v > 0 stands for the sphere [u + Iv].
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field

import numpy as np

from .clifford import Paravector
from .errors import DimensionError, SliceCalcError
from .operators import CliffordOperator, op_norm

log = logging.getLogger(__name__)

_CHUNK = 4096


def q_eval(T: CliffordOperator, s: Paravector) -> CliffordOperator:
    """Q_s(T) = T^2 - 2 s0 T + |s|^2 I."""
    if s.n != T.n:
        raise DimensionError(f"paravector in R^{s.n + 1} used with an operator over R_{T.n}")
    I = CliffordOperator.identity(T.n, T.d)
    return T @ T - 2.0 * s.s0 * T + s.norm2() * I


class QPencil:
    """Evaluator (u, v) -> rho(Q_{u+Iv}(T)) with T and T^2 cached."""

    def __init__(self, T: CliffordOperator):
        self.T = T
        self.R = np.array(T.real_rep())
        self.R2 = self.R @ self.R
        self.eye = np.eye(self.R.shape[0])

    def matrix(self, u: float, v: float) -> np.ndarray:
        return self.R2 - 2.0 * u * self.R + (u * u + v * v) * self.eye

    def operator(self, u: float, v: float) -> CliffordOperator:
        return CliffordOperator.from_real_rep(self.T.n, self.T.d, self.matrix(u, v))

    def sigma_min(self, u, v) -> np.ndarray:
        """Smallest singular value of rho(Q) at each (u, v) pair (broadcast)."""
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        flat_u, flat_v = u.reshape(-1), v.reshape(-1)
        out = np.empty(flat_u.size)
        for start in range(0, flat_u.size, _CHUNK):
            uu = flat_u[start:start + _CHUNK, None, None]
            ww = uu ** 2 + flat_v[start:start + _CHUNK, None, None] ** 2
            stack = self.R2[None] - 2.0 * uu * self.R[None] + ww * self.eye[None]
            out[start:start + _CHUNK] = np.linalg.svd(stack, compute_uv=False)[:, -1]
        return out.reshape(u.shape)


@dataclass
class ScanConfig:
    """Grid and refinement parameters; ``None`` fields are derived from ||T||."""

    radius: float | None = None
    nu: int = 201
    nv: int = 101
    seed_tol: float | None = None
    refine_tol: float | None = None
    shrink: float = 10.0
    local_points: int = 21
    max_levels: int = 14


@dataclass
class SpectralPoint:
    u: float
    v: float
    sigma_min: float

    @property
    def is_real(self) -> bool:
        return self.v == 0.0

    def to_json(self) -> dict:
        return {"u": self.u, "v": self.v, "sigma_min": self.sigma_min}


@dataclass
class SpectralScan:
    us: np.ndarray
    vs: np.ndarray
    values: np.ndarray  # sigma_min, shape (nv, nu)
    points: list[SpectralPoint]
    norm_T: float
    radius_grid: float
    step: float
    refine_tol: float
    seed_tol: float
    unresolved: list[SpectralPoint] = field(default_factory=list)

    @property
    def radius(self) -> float:
        """max |u + Iv| over the refined points (0 for an empty scan)."""
        return max((float(np.hypot(p.u, p.v)) for p in self.points), default=0.0)

    @property
    def flagged(self) -> bool:
        """True when no spectral point was resolved, which the theory rules out."""
        return not self.points

    def to_json(self) -> dict:
        return {
            "points": [p.to_json() for p in self.points],
            "radius": self.radius,
            "norm_T": self.norm_T,
            "unresolved": [p.to_json() for p in self.unresolved],
            "empty_flag": self.flagged,
        }

    def heatmap_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["u", "v", "sigma_min"])
        for j, v in enumerate(self.vs):
            for i, u in enumerate(self.us):
                w.writerow([f"{u:.17g}", f"{v:.17g}", f"{self.values[j, i]:.17g}"])
        return buf.getvalue()


def _local_minima(values: np.ndarray) -> list[tuple[int, int]]:
    # mirror the v = 0 row so real-axis minima are detected (sigma(u, -v) = sigma(u, v))
    padded = np.vstack([values[1:2], values])
    padded = np.pad(padded, ((0, 1), (1, 1)), constant_values=np.inf)
    core = padded[1:-1, 1:-1]
    is_min = np.ones_like(core, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            nb = padded[1 + di:padded.shape[0] - 1 + di, 1 + dj:padded.shape[1] - 1 + dj]
            is_min &= core <= nb
    return [tuple(ix) for ix in np.argwhere(is_min)]


def _refine(pencil: QPencil, u0: float, v0: float, h: float, cfg: ScanConfig, tol: float) -> SpectralPoint:
    offsets = np.linspace(-1.0, 1.0, cfg.local_points)
    best_u, best_v = u0, v0
    best = float(pencil.sigma_min(u0, v0))
    span = h
    scale = max(1.0, abs(u0), v0)
    for _ in range(cfg.max_levels):
        if span < 1e-13 * scale:
            break
        uu, vv = np.meshgrid(best_u + span * offsets, np.clip(best_v + span * offsets, 0.0, None))
        sig = pencil.sigma_min(uu, vv)
        k = np.unravel_index(np.argmin(sig), sig.shape)
        if sig[k] <= best:
            best, best_u, best_v = float(sig[k]), float(uu[k]), float(vv[k])
        span /= cfg.shrink
    return SpectralPoint(best_u, best_v, best)


def scan_spectrum(T: CliffordOperator, cfg: ScanConfig | None = None) -> SpectralScan:
    """Grid scan of sigma_min(rho(Q_{u+Iv}(T))) on [-R, R] x [0, R] plus local refinement."""
    cfg = cfg or ScanConfig()
    norm_T = op_norm(T)
    R = cfg.radius if cfg.radius is not None else 1.1 * norm_T + 0.1
    if R < norm_T:
        log.warning("scan radius %.3g is below ||T|| = %.3g; spectrum may be cut off", R, norm_T)
    us = np.linspace(-R, R, cfg.nu)
    vs = np.linspace(0.0, R, cfg.nv)
    h = max(us[1] - us[0], vs[1] - vs[0])
    pencil = QPencil(T)
    values = pencil.sigma_min(us[None, :], vs[:, None])

    refine_tol = cfg.refine_tol if cfg.refine_tol is not None else 1e-8 * max(norm_T, 1e-300) ** 2
    if cfg.seed_tol is not None:
        seed_tol = cfg.seed_tol
    else:
        # sigma_min is Lipschitz in (u, v) with constant <= 2||rho(T)|| + 4R, so every
        # true zero has a grid node within that bound times the step
        lipschitz = 2.0 * T.rho_norm() + 4.0 * R
        seed_tol = max(10.0 * float(np.median(values)) * 1e-3, lipschitz * h)

    found: list[SpectralPoint] = []
    unresolved: list[SpectralPoint] = []
    for j, i in _local_minima(values):
        if values[j, i] > seed_tol:
            continue
        p = _refine(pencil, us[i], vs[j], h, cfg, refine_tol)
        (found if p.sigma_min <= refine_tol else unresolved).append(p)

    points = _dedupe(found, 2.0 * h)
    unresolved = [p for p in _dedupe(unresolved, 2.0 * h) if all(np.hypot(p.u - q.u, p.v - q.v) >= 2.0 * h for q in points)]
    for p in points:
        if p.v < h and p.v != 0.0:
            s0 = float(pencil.sigma_min(p.u, 0.0))
            if s0 <= refine_tol:
                p.v, p.sigma_min = 0.0, s0
    points.sort(key=lambda p: (p.u, p.v))
    if not points:
        log.warning("spectral scan resolved no points (%d unresolved candidates)", len(unresolved))
    return SpectralScan(us, vs, values, points, norm_T, R, h, refine_tol, seed_tol, unresolved)


def _dedupe(points: list[SpectralPoint], radius: float) -> list[SpectralPoint]:
    kept: list[SpectralPoint] = []
    for p in sorted(points, key=lambda p: p.sigma_min):
        if all(np.hypot(p.u - q.u, p.v - q.v) >= radius for q in kept):
            kept.append(p)
    return kept


def slice_distance(s: Paravector, scan: SpectralScan) -> float:
    """dist(s, sigma_S(T)), computed in the (Re, |Im|) half-plane of the slice through s."""
    if not scan.points:
        raise SliceCalcError("slice distance needs a nonempty spectral scan")
    u, v = s.slice_coords()
    return min(float(np.hypot(u - p.u, v - p.v)) for p in scan.points)


def spectral_points_as_pairs(scan: SpectralScan) -> np.ndarray:
    return np.array([[p.u, p.v] for p in scan.points]).reshape(-1, 2)


def axial_symmetry_defect(T: CliffordOperator, scan: SpectralScan, directions: np.ndarray) -> float:
    """Largest sigma_min(rho(Q_{u+Jv}(T))) over refined points and the unit vectors J."""
    worst = 0.0
    for p in scan.points:
        for J in directions:
            s = Paravector(p.u, p.v * np.asarray(J))
            worst = max(worst, q_eval(T, s).sigma_min())
    return worst
