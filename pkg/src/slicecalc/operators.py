"""Bounded operators on the module (R_n)^d as d x d matrices over R_n.

An operator acts on v = (v_1, ..., v_d), v_j in R_n, by
(Tv)_i = sum_j T_ij v_j with left Clifford multiplication, which is the
action T(v) = sum_{A,B} T_A(v_B) e_A e_B of T = sum_A T_A e_A.  Scalars
a in R_n are identified with the diagonal operator a*I, so ``T @ a`` means
entry-wise right multiplication and ``a @ T`` entry-wise left multiplication.

The real representation rho(T) is the (d 2^n) x (d 2^n) real matrix of the
action on coefficient vectors; it is a faithful ring homomorphism and is what
inversion, norms and singular values are computed from.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from .clifford import Multivector, Paravector, blade_table
from .errors import DimensionError, InvertibilityError

COND_CAP = 1e12


class CliffordOperator:
    """A d x d matrix with entries in R_n (stored as an array of shape (d, d, 2**n))."""

    __slots__ = ("n", "d", "entries", "_rho")

    def __init__(self, n: int, entries):
        table = blade_table(n)
        E = np.array(entries, dtype=float)
        if E.ndim != 3 or E.shape[0] != E.shape[1] or E.shape[2] != table.dim:
            raise DimensionError(f"entries must have shape (d, d, {table.dim}), got {E.shape}")
        E.setflags(write=False)
        self.n = n
        self.d = E.shape[0]
        self.entries = E
        self._rho = None

    # constructors
    @classmethod
    def zeros(cls, n: int, d: int) -> CliffordOperator:
        return cls(n, np.zeros((d, d, 1 << n)))

    @classmethod
    def identity(cls, n: int, d: int) -> CliffordOperator:
        return cls.scalar(n, d, 1.0)

    @classmethod
    def scalar(cls, n: int, d: int, a) -> CliffordOperator:
        """The diagonal operator a*I for a real number, paravector or multivector a."""
        m = _as_multivector(n, a)
        E = np.zeros((d, d, 1 << n))
        E[np.arange(d), np.arange(d), :] = m.coeffs
        return cls(n, E)

    @classmethod
    def from_components(cls, n: int, components: Mapping[int, np.ndarray] | list) -> CliffordOperator:
        """Paravector operator T_0 + sum_j e_j T_j from real d x d matrices.

        ``components`` maps j in 0..n to T_j (missing keys are zero), or is a
        list [T_0, T_1, ...].
        """
        if not isinstance(components, Mapping):
            components = dict(enumerate(components))
        mats = {int(j): np.asarray(M, dtype=float) for j, M in components.items()}
        if not mats:
            raise DimensionError("at least one component is required")
        d = next(iter(mats.values())).shape[0]
        table = blade_table(n)
        E = np.zeros((d, d, table.dim))
        for j, M in mats.items():
            if M.shape != (d, d):
                raise DimensionError(f"component {j} has shape {M.shape}, expected {(d, d)}")
            if not 0 <= j <= n:
                raise DimensionError(f"component index {j} outside 0..{n}")
            slot = 0 if j == 0 else table.vector_slots[j - 1]
            E[:, :, slot] = M
        return cls(n, E)

    @classmethod
    def from_real_rep(cls, n: int, d: int, R: np.ndarray) -> CliffordOperator:
        """Inverse of :meth:`real_rep` on its image (reads the scalar-blade columns)."""
        D = 1 << n
        R4 = np.asarray(R).reshape(d, D, d, D)
        return cls(n, R4[:, :, :, 0].transpose(0, 2, 1))

    # structure
    @property
    def shape(self) -> tuple[int, int]:
        return self.n, self.d

    def entry(self, i: int, j: int) -> Multivector:
        return Multivector(self.n, self.entries[i, j])

    def component(self, j: int) -> np.ndarray:
        """Real matrix T_j multiplying e_j (j = 0 is the scalar part)."""
        slot = 0 if j == 0 else blade_table(self.n).vector_slots[j - 1]
        return np.array(self.entries[:, :, slot])

    def components(self) -> list[np.ndarray]:
        return [self.component(j) for j in range(self.n + 1)]

    def is_paravector(self, tol: float = 0.0) -> bool:
        high = blade_table(self.n).grades > 1
        return bool(np.all(np.abs(self.entries[:, :, high]) <= tol))

    def real_rep(self) -> np.ndarray:
        if self._rho is None:
            table = blade_table(self.n)
            D = table.dim
            R = np.einsum("ija,acb->icjb", self.entries, table.left).reshape(self.d * D, self.d * D)
            R.setflags(write=False)
            self._rho = R
        return self._rho

    def apply(self, v) -> np.ndarray:
        """Action on a module vector given as a (d, 2**n) coefficient array."""
        V = np.asarray(v, dtype=float).reshape(self.d, 1 << self.n)
        return (self.real_rep() @ V.reshape(-1)).reshape(self.d, 1 << self.n)

    # algebra
    def _check(self, other: CliffordOperator) -> None:
        if other.n != self.n or other.d != self.d:
            raise DimensionError(f"operator shapes differ: (n={self.n}, d={self.d}) vs (n={other.n}, d={other.d})")

    def compose(self, other: CliffordOperator) -> CliffordOperator:
        return op_compose(self, other)

    def __matmul__(self, other):
        if isinstance(other, CliffordOperator):
            return op_compose(self, other)
        if isinstance(other, (Multivector, Paravector, int, float)):
            return self.right_mul(other)
        return NotImplemented

    def __rmatmul__(self, other):
        if isinstance(other, (Multivector, Paravector, int, float)):
            return self.left_mul(other)
        return NotImplemented

    def left_mul(self, a) -> CliffordOperator:
        """(a I) T: every entry multiplied by a on the left."""
        m = _as_multivector(self.n, a)
        return CliffordOperator(self.n, np.einsum("cb,ijb->ijc", m.left_matrix(), self.entries))

    def right_mul(self, a) -> CliffordOperator:
        """T (a I): every entry multiplied by a on the right."""
        m = _as_multivector(self.n, a)
        return CliffordOperator(self.n, np.einsum("cb,ijb->ijc", m.right_matrix(), self.entries))

    def __add__(self, other):
        if isinstance(other, CliffordOperator):
            self._check(other)
            return CliffordOperator(self.n, self.entries + other.entries)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, CliffordOperator):
            self._check(other)
            return CliffordOperator(self.n, self.entries - other.entries)
        return NotImplemented

    def __neg__(self):
        return CliffordOperator(self.n, -self.entries)

    def __mul__(self, c):
        if isinstance(c, (int, float, np.floating, np.integer)):
            return CliffordOperator(self.n, self.entries * float(c))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, (int, float, np.floating, np.integer)):
            return CliffordOperator(self.n, self.entries / float(c))
        return NotImplemented

    def __pow__(self, k: int) -> CliffordOperator:
        if k < 0:
            return op_inverse(self) ** (-k)
        out = CliffordOperator.identity(self.n, self.d)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, CliffordOperator):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.n, self.entries.tobytes()))

    def __repr__(self):
        kind = "paravector" if self.is_paravector() else "general"
        return f"CliffordOperator(n={self.n}, d={self.d}, {kind}, |rho|={self.rho_norm():.6g})"

    # norms and spectral data
    def norm(self) -> float:
        return op_norm(self)

    def rho_norm(self) -> float:
        return float(np.linalg.norm(self.real_rep(), 2))

    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.real_rep(), compute_uv=False)

    def sigma_min(self) -> float:
        return float(self.singular_values()[-1])

    def inverse(self, cond_cap: float = COND_CAP) -> CliffordOperator:
        return op_inverse(self, cond_cap)

    def commutator(self, other: CliffordOperator) -> CliffordOperator:
        return self @ other - other @ self

    def distance(self, other: CliffordOperator) -> float:
        """rho-norm of the difference."""
        return (self - other).rho_norm()


def _as_multivector(n: int, a) -> Multivector:
    if isinstance(a, Multivector):
        if a.n != n:
            raise DimensionError(f"scalar lives in R_{a.n}, operator in R_{n}")
        return a
    if isinstance(a, Paravector):
        if a.n != n:
            raise DimensionError(f"scalar lives in R_{a.n}, operator in R_{n}")
        return a.mv
    return Multivector.scalar(n, float(a))


def op_compose(S: CliffordOperator, T: CliffordOperator) -> CliffordOperator:
    """Composition S o T, i.e. the matrix product over R_n."""
    S._check(T)
    G = blade_table(S.n).structure
    pair = np.einsum("ika,kjb->ijab", S.entries, T.entries)
    return CliffordOperator(S.n, np.einsum("ijab,abc->ijc", pair, G))


def op_norm(T: CliffordOperator) -> float:
    """sum_j ||T_j|| for paravector operators, ||rho(T)||_2 otherwise."""
    if T.is_paravector():
        return float(sum(np.linalg.norm(M, 2) for M in T.components()))
    return T.rho_norm()


def norm_kind(T: CliffordOperator) -> str:
    return "paravector" if T.is_paravector() else "rho"


def op_inverse(T: CliffordOperator, cond_cap: float = COND_CAP) -> CliffordOperator:
    """Two-sided inverse via the real representation.

    Raises InvertibilityError (carrying the smallest singular value) when
    rho(T) is singular or its condition number exceeds ``cond_cap``.
    """
    R = T.real_rep()
    sv = np.linalg.svd(R, compute_uv=False)
    smin, smax = float(sv[-1]), float(sv[0])
    if smin == 0.0 or smax / smin > cond_cap:
        raise InvertibilityError(
            f"operator is not invertible (sigma_min={smin:.3e}, sigma_max={smax:.3e})",
            smallest_singular_value=smin,
        )
    D = 1 << T.n
    # only the scalar-blade columns of rho(T)^{-1} are needed to rebuild it
    rhs = np.zeros((T.d * D, T.d))
    rhs[np.arange(T.d) * D, np.arange(T.d)] = 1.0
    X = np.linalg.solve(R, rhs).reshape(T.d, D, T.d)
    return CliffordOperator(T.n, X.transpose(0, 2, 1))
