"""Circular integration contours on a slice C_I."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford import Paravector, check_unit
from .errors import HypothesisError, SchemaError
from .spectrum import SpectralScan


@dataclass(frozen=True)
class Contour:
    """The circle s(t) = c + r e^{It}, t in [0, 2 pi), sampled at M equispaced nodes."""

    unit: tuple[float, ...]
    center: float
    radius: float
    nodes: int = 256

    def __post_init__(self):
        I = check_unit(self.unit)
        object.__setattr__(self, "unit", tuple(float(x) for x in I))
        if not self.radius > 0:
            raise SchemaError(f"contour radius must be positive, got {self.radius!r}")
        if int(self.nodes) < 4:
            raise SchemaError(f"contour needs at least 4 nodes, got {self.nodes!r}")
        object.__setattr__(self, "nodes", int(self.nodes))

    @property
    def n(self) -> int:
        return len(self.unit)

    def with_unit(self, unit) -> Contour:
        return Contour(tuple(np.asarray(unit, dtype=float)), self.center, self.radius, self.nodes)

    def with_radius(self, radius: float) -> Contour:
        return Contour(self.unit, self.center, radius, self.nodes)

    def with_nodes(self, nodes: int) -> Contour:
        return Contour(self.unit, self.center, self.radius, nodes)

    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.nodes) / self.nodes

    def complex_nodes(self) -> np.ndarray:
        """Nodes as complex numbers on the slice (i stands for I)."""
        return self.center + self.radius * np.exp(1j * self.angles())

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """(u_j, vec_j) of the nodes: u = Re, vec = Im * I."""
        z = self.complex_nodes()
        return z.real, np.outer(z.imag, self.unit)

    def paravectors(self) -> list[Paravector]:
        u, vec = self.points()
        return [Paravector(a, b) for a, b in zip(u, vec)]

    def clearance(self, scan: SpectralScan) -> float:
        """Smallest distance on the slice between the circle and the spectral points.

        Positive when every point lies strictly inside the disk.
        """
        if not scan.points:
            raise HypothesisError("contour clearance needs a nonempty spectral scan")
        return min(self.radius - float(np.hypot(p.u - self.center, p.v)) for p in scan.points)

    def encloses(self, scan: SpectralScan) -> bool:
        return self.clearance(scan) > 0.0

    def to_json(self) -> dict:
        return {"I": list(self.unit), "center": self.center, "radius": self.radius, "nodes": self.nodes}

    @classmethod
    def from_json(cls, data: dict) -> Contour:
        try:
            return cls(tuple(data["I"]), float(data["center"]), float(data["radius"]), int(data.get("nodes", 256)))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed contour: {exc}") from exc
