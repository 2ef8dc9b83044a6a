"""Arithmetic in the real Clifford algebra R_n (e_i e_j + e_j e_i = -2 delta_ij).

Multivectors are stored as 2**n real coefficients over the canonical blade
basis: the empty blade first, then subsets of {1..n} ordered by cardinality
and lexicographically within a cardinality.  Paravectors x0 + x1 e1 + ... +
xn en are the points of R^{n+1} and get their own light-weight type.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import DimensionError, InvariantError, SingularError

MAX_GENERATORS = 6


class BladeTable:
    """Product table of the canonical blades of R_n.

    ``sign[a, b]`` and ``result[a, b]`` give e_A e_B = sign * e_{A xor B} in
    terms of canonical blade indices.
    """

    def __init__(self, n: int):
        if not 1 <= n <= MAX_GENERATORS:
            raise DimensionError(f"number of generators must be in 1..{MAX_GENERATORS}, got {n}")
        self.n = n
        self.dim = 1 << n
        self.blades: list[tuple[int, ...]] = [
            combo for k in range(n + 1) for combo in combinations(range(1, n + 1), k)
        ]
        self.masks = np.array([sum(1 << (i - 1) for i in b) for b in self.blades], dtype=np.int64)
        self.index_of_mask = np.empty(self.dim, dtype=np.int64)
        self.index_of_mask[self.masks] = np.arange(self.dim)
        self.grades = np.array([len(b) for b in self.blades], dtype=np.int64)

        sign = np.empty((self.dim, self.dim), dtype=np.int8)
        result = np.empty((self.dim, self.dim), dtype=np.int64)
        for a, ma in enumerate(self.masks):
            for b, mb in enumerate(self.masks):
                sign[a, b] = _blade_sign(int(ma), int(mb))
                result[a, b] = self.index_of_mask[ma ^ mb]
        self.sign = sign
        self.result = result

        # structure constants: e_a e_b = sum_c G[a, b, c] e_c
        G = np.zeros((self.dim, self.dim, self.dim))
        ia, ib = np.meshgrid(np.arange(self.dim), np.arange(self.dim), indexing="ij")
        G[ia, ib, result] = sign
        self.structure = G
        # left-multiplication matrices: (e_a x)_c = sum_b L[a, c, b] x_b
        self.left = np.ascontiguousarray(G.transpose(0, 2, 1))
        # right-multiplication matrices: (x e_b)_c = sum_a R[b, c, a] x_a
        self.right = np.ascontiguousarray(G.transpose(1, 2, 0))

        self.vector_slots = np.array([self.index_of_mask[1 << j] for j in range(n)], dtype=np.int64)
        # Clifford conjugation sign per grade k: (-1)^{k(k+1)/2}
        k = self.grades
        self.conj_sign = np.where((k * (k + 1) // 2) % 2 == 0, 1.0, -1.0)
        self.reverse_sign = np.where((k * (k - 1) // 2) % 2 == 0, 1.0, -1.0)

    def label(self, index: int) -> str:
        b = self.blades[index]
        return "1" if not b else "e" + "".join(str(i) for i in b)


def _blade_sign(ma: int, mb: int) -> int:
    # transpositions needed to sort e_A e_B, then one -1 per repeated generator
    swaps = 0
    a = ma >> 1
    while a:
        swaps += bin(a & mb).count("1")
        a >>= 1
    swaps += bin(ma & mb).count("1")
    return -1 if swaps % 2 else 1


@lru_cache(maxsize=None)
def blade_table(n: int) -> BladeTable:
    return BladeTable(n)


class Multivector:
    """Element of R_n with coefficients in canonical blade order."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs):
        table = blade_table(n)
        c = np.array(coeffs, dtype=float).reshape(-1)
        if c.size != table.dim:
            raise DimensionError(f"R_{n} needs {table.dim} coefficients, got {c.size}")
        c.setflags(write=False)
        self.n = n
        self.coeffs = c

    # construction helpers
    @classmethod
    def scalar(cls, n: int, value: float) -> Multivector:
        c = np.zeros(1 << n)
        c[0] = value
        return cls(n, c)

    @classmethod
    def generator(cls, n: int, j: int) -> Multivector:
        """The unit e_j, 1 <= j <= n."""
        if not 1 <= j <= n:
            raise DimensionError(f"generator index {j} outside 1..{n}")
        c = np.zeros(1 << n)
        c[blade_table(n).vector_slots[j - 1]] = 1.0
        return cls(n, c)

    @classmethod
    def blade(cls, n: int, indices: Sequence[int], value: float = 1.0) -> Multivector:
        table = blade_table(n)
        key = tuple(sorted(indices))
        c = np.zeros(table.dim)
        c[table.blades.index(key)] = value
        return cls(n, c)

    @classmethod
    def from_vector(cls, n: int, s0: float, vec) -> Multivector:
        table = blade_table(n)
        c = np.zeros(table.dim)
        c[0] = s0
        c[table.vector_slots] = np.asarray(vec, dtype=float)
        return cls(n, c)

    @property
    def table(self) -> BladeTable:
        return blade_table(self.n)

    @property
    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    def grade(self, k: int) -> Multivector:
        return Multivector(self.n, np.where(self.table.grades == k, self.coeffs, 0.0))

    def max_grade(self, tol: float = 0.0) -> int:
        nz = np.abs(self.coeffs) > tol
        return int(self.table.grades[nz].max()) if nz.any() else 0

    def is_paravector(self, tol: float = 0.0) -> bool:
        return self.max_grade(tol) <= 1

    def is_real(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coeffs[1:]) <= tol))

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def conj(self) -> Multivector:
        """Clifford conjugation; on paravectors x0 + x -> x0 - x."""
        return Multivector(self.n, self.coeffs * self.table.conj_sign)

    def reverse(self) -> Multivector:
        return Multivector(self.n, self.coeffs * self.table.reverse_sign)

    def left_matrix(self) -> np.ndarray:
        """Matrix of y -> self * y on coefficient vectors."""
        return np.tensordot(self.coeffs, self.table.left, axes=(0, 0))

    def right_matrix(self) -> np.ndarray:
        """Matrix of y -> y * self on coefficient vectors."""
        return np.tensordot(self.coeffs, self.table.right, axes=(0, 0))

    def inverse(self) -> Multivector:
        if self.is_paravector():
            return paravector_inverse(Paravector.from_multivector(self)).mv
        L = self.left_matrix()
        sv = np.linalg.svd(L, compute_uv=False)
        if sv[-1] <= 1e-14 * max(sv[0], 1e-300):
            raise SingularError("multivector is a zero divisor", smallest_singular_value=float(sv[-1]))
        rhs = np.zeros(self.table.dim)
        rhs[0] = 1.0
        return Multivector(self.n, np.linalg.solve(L, rhs))

    def __pow__(self, k: int) -> Multivector:
        if k < 0:
            return self.inverse() ** (-k)
        out = Multivector.scalar(self.n, 1.0)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # arithmetic
    def _coerce(self, other) -> Multivector | None:
        if isinstance(other, Multivector):
            if other.n != self.n:
                raise DimensionError(f"mixing R_{self.n} and R_{other.n}")
            return other
        if isinstance(other, Paravector):
            return self._coerce(other.mv)
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector.scalar(self.n, float(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Multivector(self.n, self.coeffs + o.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Multivector(self.n, self.coeffs - o.coeffs)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Multivector(self.n, o.coeffs - self.coeffs)

    def __neg__(self):
        return Multivector(self.n, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector(self.n, self.coeffs * float(other))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return clifford_mul(self, o)

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector(self.n, self.coeffs * float(other))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return clifford_mul(o, self)

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector(self.n, self.coeffs / float(other))
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.n, self.coeffs.tobytes()))

    def allclose(self, other, atol: float = 1e-12) -> bool:
        o = self._coerce(other)
        return bool(np.max(np.abs(self.coeffs - o.coeffs)) <= atol)

    def __repr__(self):
        table = self.table
        terms = [f"{c:+.6g}{'' if i == 0 else table.label(i)}" for i, c in enumerate(self.coeffs) if c != 0]
        return f"Multivector(n={self.n}, {' '.join(terms) or '0'})"

    def to_json(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, n: int, data) -> Multivector:
        return cls(n, data)


def clifford_mul(a: Multivector, b: Multivector) -> Multivector:
    """Geometric product a*b."""
    if a.n != b.n:
        raise DimensionError(f"cannot multiply elements of R_{a.n} and R_{b.n}")
    return Multivector(a.n, a.left_matrix() @ b.coeffs)


@dataclass(frozen=True)
class Paravector:
    """A point s0 + sum_j vec[j] e_{j+1} of R^{n+1}."""

    s0: float
    vec: tuple[float, ...]

    def __init__(self, s0: float, vec):
        object.__setattr__(self, "s0", float(s0))
        object.__setattr__(self, "vec", tuple(float(x) for x in np.asarray(vec, dtype=float).reshape(-1)))
        if not 1 <= len(self.vec) <= MAX_GENERATORS:
            raise DimensionError(f"paravector needs 1..{MAX_GENERATORS} vector components")

    @property
    def n(self) -> int:
        return len(self.vec)

    @classmethod
    def real(cls, n: int, value: float) -> Paravector:
        return cls(value, np.zeros(n))

    @classmethod
    def from_multivector(cls, m: Multivector, tol: float = 1e-12) -> Paravector:
        if not m.is_paravector(tol * max(1.0, m.norm())):
            raise InvariantError("multivector has components of grade > 1")
        return cls(m.coeffs[0], m.coeffs[m.table.vector_slots])

    @classmethod
    def from_complex(cls, z: complex, unit) -> Paravector:
        """u + I v for z = u + iv on the slice through the unit vector I."""
        return cls(z.real, z.imag * np.asarray(unit, dtype=float))

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.vec)

    @property
    def mv(self) -> Multivector:
        return Multivector.from_vector(self.n, self.s0, self.vec)

    @property
    def imag_norm(self) -> float:
        return float(np.linalg.norm(self.vec))

    def norm(self) -> float:
        return float(np.hypot(self.s0, self.imag_norm))

    def norm2(self) -> float:
        return self.s0 ** 2 + float(np.dot(self.vec, self.vec))

    def conj(self) -> Paravector:
        return Paravector(self.s0, -self.vector)

    def unit(self) -> np.ndarray:
        """I_s = vec/|vec|; e_1 when s is real."""
        r = self.imag_norm
        if r == 0.0:
            e = np.zeros(self.n)
            e[0] = 1.0
            return e
        return self.vector / r

    def slice_coords(self) -> tuple[float, float]:
        return self.s0, self.imag_norm

    def to_complex(self) -> complex:
        return complex(self.s0, self.imag_norm)

    def is_real(self) -> bool:
        return self.imag_norm == 0.0

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Paravector(self.s0 * other, self.vector * other)
        if isinstance(other, (Paravector, Multivector)):
            return self.mv * other
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self.__mul__(other)
        if isinstance(other, Multivector):
            return other * self.mv
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, Paravector):
            return Paravector(self.s0 + other.s0, self.vector + other.vector)
        if isinstance(other, (int, float)):
            return Paravector(self.s0 + other, self.vector)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Paravector):
            return Paravector(self.s0 - other.s0, self.vector - other.vector)
        if isinstance(other, (int, float)):
            return Paravector(self.s0 - other, self.vector)
        return NotImplemented

    def __neg__(self):
        return Paravector(-self.s0, -self.vector)

    def to_json(self) -> dict:
        return {"s0": self.s0, "vec": list(self.vec)}

    @classmethod
    def from_json(cls, data: dict) -> Paravector:
        return cls(data["s0"], data["vec"])


def paravector_inverse(s: Paravector) -> Paravector:
    """s^{-1} = conj(s)/|s|^2."""
    r2 = s.norm2()
    if r2 == 0.0:
        raise SingularError("paravector 0 has no inverse", smallest_singular_value=0.0)
    return Paravector(s.s0 / r2, -s.vector / r2)


def check_unit(unit, n: int | None = None, tol: float = 1e-12) -> np.ndarray:
    I = np.asarray(unit, dtype=float).reshape(-1)
    if n is not None and I.size != n:
        raise DimensionError(f"imaginary unit has {I.size} components, expected {n}")
    if abs(np.linalg.norm(I) - 1.0) > tol:
        raise InvariantError(f"imaginary unit must have norm 1, got {np.linalg.norm(I)!r}")
    return I


def sphere_of(x: Paravector, unit) -> Paravector:
    """Representative u + I v of the sphere [x] on the plane C_I."""
    I = check_unit(unit, x.n)
    return Paravector(x.s0, I * x.imag_norm)


def slice_element(n: int, z: complex, unit) -> Multivector:
    """Embed the complex number z = a + ib as a + bI in R_n."""
    I = np.asarray(unit, dtype=float)
    return Multivector.from_vector(n, z.real, z.imag * I)
