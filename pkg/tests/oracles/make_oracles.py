"""Regenerate tests/data/oracles.json from oracles independent of slicecalc.

n = 2: R_2 is the quaternions (e1 = i, e2 = j, e12 = k); a d x d quaternion
matrix A = A1 + A2 j is mapped to its complex adjoint [[A1, A2], [-conj A2, conj A1]],
a ring homomorphism, so products, inverses, exp and eigenvalues come from
plain complex linear algebra.  n = 3: R_3 = H + H via e_j -> (q_j, -q_j).

Needs sympy and scipy (development only).  Run: python tests/oracles/make_oracles.py
"""

import json
from pathlib import Path

import numpy as np
import scipy.linalg
import sympy
from sympy.algebras.quaternion import Quaternion

ROOT = Path(__file__).resolve().parents[2]


def quat(c):
    return Quaternion(*[sympy.Rational(x).limit_denominator(10**6) if isinstance(x, float) else x for x in c])


def qcoeffs(q):
    return [float(q.a), float(q.b), float(q.c), float(q.d)]


def n2_product(a, b):
    return qcoeffs(quat(a) * quat(b))


def n3_product(a, b):
    """Blades (1, e1, e2, e3, e12, e13, e23, e123) mapped to pairs of quaternions."""
    I, J, K, one = Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0), Quaternion(0, 0, 0, 1), Quaternion(1, 0, 0, 0)
    gens = [(I, -I), (J, -J), (K, -K)]

    def mul(x, y):
        return (x[0] * y[0], x[1] * y[1])

    blades = [(one, one), gens[0], gens[1], gens[2], mul(gens[0], gens[1]), mul(gens[0], gens[2]),
              mul(gens[1], gens[2]), mul(mul(gens[0], gens[1]), gens[2])]

    def embed(c):
        x = (Quaternion(0, 0, 0, 0), Quaternion(0, 0, 0, 0))
        for coef, bl in zip(c, blades):
            x = (x[0] + bl[0] * coef, x[1] + bl[1] * coef)
        return x

    A, B = embed(a), embed(b)
    P = mul(A, B)
    M = np.array([qcoeffs(bl[0]) + qcoeffs(bl[1]) for bl in blades]).T
    target = np.array(qcoeffs(P[0]) + qcoeffs(P[1]))
    return np.linalg.solve(M, target).tolist()


def adjoint(entries):
    """Complex adjoint of a quaternion matrix with entries (d, d, 4)."""
    E = np.asarray(entries, dtype=float)
    A1 = E[:, :, 0] + 1j * E[:, :, 1]
    A2 = E[:, :, 2] + 1j * E[:, :, 3]
    return np.block([[A1, A2], [-A2.conj(), A1.conj()]])


def from_adjoint(M):
    d = M.shape[0] // 2
    A1, A2 = M[:d, :d], M[:d, d:]
    return np.stack([A1.real, A1.imag, A2.real, A2.imag], axis=-1)


def scalar_diag(q, d):
    E = np.zeros((d, d, 4))
    for i in range(d):
        E[i, i] = q
    return adjoint(E)


def main():
    rng = np.random.default_rng(20240611)
    out = {}
    a2, b2 = rng.integers(-5, 6, 4).tolist(), rng.integers(-5, 6, 4).tolist()
    out["product_n2"] = {"a": a2, "b": b2, "ab": n2_product(a2, b2)}
    a3, b3 = rng.integers(-5, 6, 8).tolist(), rng.integers(-5, 6, 8).tolist()
    out["product_n3"] = {"a": a3, "b": b3, "ab": n3_product(a3, b3)}

    T = json.loads((ROOT / "src/slicecalc/data/random_T.json").read_text())
    E = np.asarray(T["entries"], dtype=float)
    d = E.shape[0]
    X = adjoint(E)
    lam = np.linalg.eigvals(X)
    pts = sorted({(round(float(z.real), 12), round(abs(float(z.imag)), 12)) for z in lam})
    out["random_T_spectrum"] = [list(p) for p in pts]

    s = [2.0, 1.0, -0.5, 0.0]
    sbar = [2.0, -1.0, 0.5, 0.0]
    s2 = sum(x * x for x in s)
    I = np.eye(2 * d)
    Q = X @ X - 2 * s[0] * X + s2 * I
    Qi = np.linalg.inv(Q)
    A = X - scalar_diag(sbar, d)
    out["random_T_resolvent"] = {
        "s": {"s0": s[0], "vec": s[1:3]},
        "left": from_adjoint(-Qi @ A).tolist(),
        "right": from_adjoint(-A @ Qi).tolist(),
        # (conj(s) I - T)^{*2} with coefficients right of T^k (left) / left of T^k (right)
        "left_power2": from_adjoint(Qi @ Qi @ (X @ X - 2 * X @ scalar_diag(sbar, d)
                                                 + scalar_diag(sbar, d) @ scalar_diag(sbar, d))).tolist(),
    }
    out["random_T_exp"] = from_adjoint(scipy.linalg.expm(X)).tolist()
    (ROOT / "tests/data/oracles.json").write_text(json.dumps(out, indent=1) + "\n")


if __name__ == "__main__":
    main()
