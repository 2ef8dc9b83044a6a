import numpy as np
import pytest
from hypothesis import given

from slicecalc.clifford import Paravector, paravector_inverse
from slicecalc.errors import DomainError, SpectrumError
from slicecalc.fixtures import load_fixture, random_paravector, random_paravector_operator
from slicecalc.operators import CliffordOperator, op_inverse, op_norm
from slicecalc.polynomials import eval_real_operator, real_coefficients
from slicecalc.resolvent import (
    ResolventSide,
    formal_pair_diagnostic,
    resolvent_equation_residual,
    resolvent_rho_stack,
    resolvent_series,
    entries_from_rho,
    s_resolvent,
    s_resolvent_power,
    star_pair_polynomial,
    star_pair_sum,
    star_power_pair,
)
from slicecalc.spectrum import q_eval

from conftest import operator_and_point, seeds

SIDES = (ResolventSide.Left, ResolventSide.Right)


def test_zero_operator_gives_scalar_inverse():
    s = Paravector(0.5, [1.0, -2.0])
    sinv = CliffordOperator.scalar(2, 2, paravector_inverse(s))
    for side in SIDES:
        assert (s_resolvent(CliffordOperator.zeros(2, 2), s, side) - sinv).rho_norm() <= 1e-16


def test_real_diagonal_classical_resolvent():
    T, _ = load_fixture("real_diagonal")
    S = s_resolvent(T, Paravector(3.0, [0.0, 0.0]))
    assert np.allclose(S.component(0), np.diag([1 / (3 - 1), 1 / (3 + 2)]), atol=1e-16)


def test_matches_complex_adjoint_oracle(oracles):
    T, _ = load_fixture("random_T")
    o = oracles["random_T_resolvent"]
    s = Paravector(o["s"]["s0"], o["s"]["vec"])
    assert np.max(np.abs(s_resolvent(T, s, "left").entries - np.array(o["left"]))) <= 1e-14
    assert np.max(np.abs(s_resolvent(T, s, "right").entries - np.array(o["right"]))) <= 1e-14
    assert np.max(np.abs(s_resolvent_power(T, s, 2, "left").entries - np.array(o["left_power2"]))) <= 1e-14


def test_spectral_point_raises():
    T = CliffordOperator.scalar(2, 2, Paravector(1.0, [1.0, 0.0]))
    with pytest.raises(SpectrumError) as info:
        s_resolvent(T, Paravector(1.0, [0.0, 1.0]))
    assert info.value.smallest_singular_value is not None


@given(seeds)
def test_series_oracle(seed):
    T, s = operator_and_point(seed, ratio=0.5)
    for side in SIDES:
        exact = s_resolvent(T, s, side)
        assert (resolvent_series(T, s, 80, side) - exact).rho_norm() <= 1e-9 * exact.rho_norm()


def test_series_error_decays_geometrically(rng):
    T = random_paravector_operator(rng, 2, 3, 1.0)
    s = random_paravector(rng, 2, 2.0)
    r = op_norm(T) / s.norm()
    for side in SIDES:
        exact = s_resolvent(T, s, side)
        errs = [(resolvent_series(T, s, K, side) - exact).rho_norm() for K in (5, 10, 15, 20)]
        C = max(err / r ** (K + 1) for err, K in zip(errs, (5, 10, 15, 20)))
        assert C < 10.0
        assert errs == sorted(errs, reverse=True)


def test_resolvent_power_basic(rng):
    T = random_paravector_operator(rng, 2, 3)
    s = random_paravector(rng, 2, 2.0)
    for side in SIDES:
        assert s_resolvent_power(T, s, 0, side) == CliffordOperator.identity(2, 3)
        assert (s_resolvent_power(T, s, 1, side) - s_resolvent(T, s, side)).rho_norm() <= 1e-13
    sinv = paravector_inverse(s).mv
    zero = CliffordOperator.zeros(2, 3)
    for m in (2, 3):
        assert (s_resolvent_power(zero, s, m) - CliffordOperator.scalar(2, 3, sinv ** m)).rho_norm() <= 1e-15


def test_star_pair_trivial_cases(rng):
    T = random_paravector_operator(rng, 2, 3)
    s = random_paravector(rng, 2, 2.0)
    for side in SIDES:
        assert star_power_pair(T, s, 0, 0, side) == CliffordOperator.identity(2, 3)
        assert (star_power_pair(T, s, 1, 1, side) - op_inverse(q_eval(T, s))).rho_norm() <= 1e-13


def test_star_pair_product_of_binomials_is_q():
    s = Paravector(0.7, [0.3, -1.1])
    coeffs = star_pair_polynomial(s, 1, 1, 2)
    assert np.allclose(real_coefficients(coeffs), [s.norm2(), -2 * s.s0, 1.0], atol=1e-15)


@given(seeds)
def test_star_pair_on_scalar_slice_operator(seed):
    rng = np.random.default_rng(seed)
    s = random_paravector(rng, 2, 2.0)
    I = s.unit()
    x = Paravector(rng.normal() * 0.5, rng.normal() * 0.5 * I)
    X = CliffordOperator.scalar(2, 2, x)
    for m, k in ((1, 0), (2, 1), (1, 2), (3, 2)):
        a = (s - x).mv.inverse() ** m
        b = (s.conj() - x).mv.inverse() ** k
        out = star_power_pair(X, s, m, k, check=False).entry(0, 0)
        assert (out - a * b).norm() <= 1e-12 * (a * b).norm()
    for m in (1, 2, 3):
        out = s_resolvent_power(X, s, m).entry(0, 0)
        ref = (s - x).mv.inverse() ** m
        assert (out - ref).norm() <= 1e-12 * ref.norm()


@given(seeds)
def test_star_pair_sum_commutes_with_q_and_polynomials(seed):
    rng = np.random.default_rng(seed)
    T = random_paravector_operator(rng, 2, 3)
    s = random_paravector(rng, 2, 2.5)
    N = eval_real_operator(T, [0.1, 0.05, -0.02])
    Q = q_eval(T, s)
    for n in (0, 1, 3):
        P = star_pair_sum(T, s, n)
        scale = P.rho_norm() * (Q.rho_norm() + N.rho_norm() + T.rho_norm())
        assert P.commutator(Q).rho_norm() <= 1e-12 * scale
        assert P.commutator(N).rho_norm() <= 1e-12 * scale
        total = CliffordOperator.zeros(2, 3)
        for k in range(n + 1):
            total = total + star_power_pair(T, s, k + 1, n - k + 1, check=False)
        assert (total - P).rho_norm() <= 1e-12 * P.rho_norm()


def test_formal_pair_diagnostic_small(rng):
    T = random_paravector_operator(rng, 2, 2, 0.5)
    s = random_paravector(rng, 2, 1.5)
    for m, k in ((1, 1), (2, 1), (1, 3)):
        for side in SIDES:
            ref = star_power_pair(T, s, m, k, side, check=False).rho_norm()
            assert formal_pair_diagnostic(T, s, m, k, 200, side) <= 1e-12 * ref


def test_resolvent_equation_zero_operator():
    s, p = Paravector(1.0, [0.5, 0.0]), Paravector(-0.3, [0.0, 2.0])
    r1, r2 = resolvent_equation_residual(CliffordOperator.zeros(2, 2), s, p)
    assert r1 <= 1e-13
    # the second form as stated is off by an overall sign (see the next test)
    assert r2 > 0.1


def test_resolvent_equation_second_form_sign_on_commuting_data():
    """T = diag(1, -2), s = 3, p = 4: the second form yields D/(s - p) = -D instead of D."""
    T, _ = load_fixture("real_diagonal")
    s, p = Paravector(3.0, [0.0, 0.0]), Paravector(4.0, [0.0, 0.0])
    D = s_resolvent(T, s, "right") - s_resolvent(T, p, "left")
    r1, r2 = resolvent_equation_residual(T, s, p)
    assert r1 <= 1e-15
    assert r2 == pytest.approx(2.0 * D.rho_norm(), rel=1e-12)
    _, r2c = resolvent_equation_residual(T, s, p, sign_corrected=True)
    assert r2c <= 1e-15


@given(seeds)
def test_resolvent_equation_first_form_fuzz(seed):
    rng = np.random.default_rng(seed)
    T = random_paravector_operator(rng, 2, 3)
    s = random_paravector(rng, 2, rng.uniform(1.5, 3.0))
    p = random_paravector(rng, 2, rng.uniform(1.5, 3.0))
    lhs = (s_resolvent(T, s, "right") @ s_resolvent(T, p, "left")).rho_norm()
    r1, _ = resolvent_equation_residual(T, s, p)
    _, r2c = resolvent_equation_residual(T, s, p, sign_corrected=True)
    assert r1 <= 1e-12 * max(1.0, lhs)
    assert r2c <= 1e-12 * max(1.0, lhs)


def test_resolvent_equation_rejects_same_sphere():
    T = random_paravector_operator(np.random.default_rng(0), 2, 2, 0.5)
    with pytest.raises(DomainError):
        resolvent_equation_residual(T, Paravector(1.0, [1.0, 0.0]), Paravector(1.0, [0.0, 1.0]))


def test_rho_stack_matches_pointwise(rng):
    T = random_paravector_operator(rng, 2, 3)
    pts = [random_paravector(rng, 2, 2.0) for _ in range(4)]
    u = np.array([p.s0 for p in pts])
    vec = np.array([p.vec for p in pts])
    for side in SIDES:
        rho, smin = resolvent_rho_stack(T, u, vec, side)
        E = entries_from_rho(rho, 2, 3)
        for j, p in enumerate(pts):
            assert np.max(np.abs(E[j] - s_resolvent(T, p, side).entries)) <= 1e-13
    with pytest.raises(SpectrumError):
        Tp = CliffordOperator.scalar(2, 2, Paravector(1.0, [1.0, 0.0]))
        resolvent_rho_stack(Tp, np.array([1.0]), np.array([[0.0, 1.0]]))
