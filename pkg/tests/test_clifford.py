import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from slicecalc.clifford import (
    Multivector,
    Paravector,
    blade_table,
    check_unit,
    clifford_mul,
    paravector_inverse,
    sphere_of,
)
from slicecalc.errors import DimensionError, InvariantError, SingularError

from conftest import seeds


def e(n, *idx):
    return Multivector.blade(n, idx)


def test_generator_square():
    assert e(2, 1) * e(2, 1) == Multivector.scalar(2, -1.0)


def test_anticommutation_example():
    assert e(2, 1) * e(2, 2) == e(2, 1, 2)
    assert e(2, 2) * e(2, 1) == -e(2, 1, 2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_blade_table_exhaustive(n):
    table = blade_table(n)
    dim = table.dim
    basis = [Multivector(n, np.eye(dim)[a]) for a in range(dim)]
    for i, j in itertools.product(range(1, n + 1), repeat=2):
        anti = e(n, i) * e(n, j) + e(n, j) * e(n, i)
        assert anti == Multivector.scalar(n, -2.0 if i == j else 0.0)
    for a, b, c in itertools.product(range(dim), repeat=3):
        assert (basis[a] * basis[b]) * basis[c] == basis[a] * (basis[b] * basis[c])


def test_blade_order_cardinality_then_lex():
    assert blade_table(3).blades == [(), (1,), (2,), (3,), (1, 2), (1, 3), (2, 3), (1, 2, 3)]


def test_product_matches_quaternion_oracle(oracles):
    o = oracles["product_n2"]
    assert np.array_equal((Multivector(2, o["a"]) * Multivector(2, o["b"])).coeffs, o["ab"])


def test_product_matches_quaternion_pair_oracle(oracles):
    o = oracles["product_n3"]
    assert np.array_equal((Multivector(3, o["a"]) * Multivector(3, o["b"])).coeffs, o["ab"])


def test_mismatched_n():
    with pytest.raises(DimensionError):
        clifford_mul(e(2, 1), e(3, 1))


@given(seeds)
def test_paravector_times_conjugate_is_norm(seed):
    rng = np.random.default_rng(seed)
    s = Paravector(rng.normal(), rng.normal(size=3))
    prod = s.mv * s.conj().mv
    expected = s.s0 ** 2 + sum(x * x for x in s.vec)
    assert abs(prod.coeffs[0] - expected) <= 1e-14 * max(1.0, expected)
    assert np.max(np.abs(prod.coeffs[1:])) <= 1e-14 * max(1.0, expected)


def test_paravector_inverse_examples():
    assert paravector_inverse(Paravector(2.0, [0.0, 0.0])).mv == Multivector.scalar(2, 0.5)
    assert paravector_inverse(Paravector(0.0, [1.0, 0.0])).mv == -e(2, 1)
    s = Paravector(1.0, [1.0, 1.0])
    inv = paravector_inverse(s)
    assert np.allclose(inv.mv.coeffs, np.array([1, -1, -1, 0]) / 3.0, atol=1e-16)
    assert (s.mv * inv.mv - 1.0).norm() <= 1e-14
    with pytest.raises(SingularError):
        paravector_inverse(Paravector(0.0, [0.0, 0.0]))


def test_sphere_of_examples():
    x = Paravector(1.0, [2.0, 0.0])
    assert sphere_of(x, [0.0, 1.0]) == Paravector(1.0, [0.0, 2.0])
    y = sphere_of(Paravector(1.0, [1.0, 1.0]), [1.0, 0.0])
    assert y.s0 == 1.0 and abs(y.vec[0] - np.sqrt(2.0)) <= 1e-15 and y.vec[1] == 0.0
    real = Paravector(3.0, [0.0, 0.0])
    assert sphere_of(real, [0.6, 0.8]) == real
    with pytest.raises(InvariantError):
        check_unit([1.0, 1.0])


@given(seeds)
def test_unit_squares_to_minus_one(seed):
    rng = np.random.default_rng(seed)
    s = Paravector(rng.normal(), rng.normal(size=4))
    I = Paravector(0.0, s.unit()).mv
    assert (I * I + 1.0).norm() <= 1e-14


@given(seeds, st.integers(2, 4))
def test_slice_commutative_and_multiplicative(seed, n):
    rng = np.random.default_rng(seed)
    I = rng.normal(size=n)
    I /= np.linalg.norm(I)
    s = Paravector(rng.normal(), rng.normal() * I)
    p = Paravector(rng.normal(), rng.normal() * I)
    sp, ps = s.mv * p.mv, p.mv * s.mv
    assert (sp - ps).norm() <= 1e-14 * (1 + s.norm() * p.norm())
    assert abs(sp.norm() - s.norm() * p.norm()) <= 1e-14 * (1 + s.norm() * p.norm())


@given(seeds)
def test_norm_nonnegative_zero_only_at_zero(seed):
    rng = np.random.default_rng(seed)
    a = Multivector(3, rng.normal(size=8))
    assert a.norm() > 0
    assert Multivector(3, np.zeros(8)).norm() == 0.0


@given(seeds)
def test_inverse_of_general_multivector(seed):
    rng = np.random.default_rng(seed)
    a = Multivector(2, rng.normal(size=4))
    assert (a * a.inverse() - 1.0).norm() <= 1e-12
