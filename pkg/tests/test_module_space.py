"""Module vectors over the algebra: inner product, modulus, norm, action."""

import numpy as np
import pytest

from gframes import (AlgebraElement, ModuleVector, a_valued_abs, alg_adjoint,
                     alg_norm, inner, is_positive, module_action, vec_norm)
from gframes.rng import complex_normal, stream

SAMPLES = 1000


def scalar_vec(*entries):
    flat = np.array([entries], dtype=np.complex128)
    return ModuleVector(1, flat.shape[1], flat)


def random_vec(rng, n, d):
    return ModuleVector(n, d, complex_normal(rng, (n, d * n)))


def test_inner_scalar_dot_product():
    x = scalar_vec(1, 2)
    y = scalar_vec(0, 1)
    assert inner(x, y).entries[0, 0] == pytest.approx(2.0)


def test_inner_identity_block():
    x = ModuleVector(2, 1, np.eye(2, dtype=np.complex128))
    np.testing.assert_allclose(inner(x, x).entries, np.eye(2))


def test_inner_conjugate_symmetry():
    rng = stream(9, 0)
    x = random_vec(rng, 2, 3)
    y = random_vec(rng, 2, 3)
    assert alg_norm(inner(x, y) - alg_adjoint(inner(y, x))) <= 1e-12


def test_inner_left_linearity():
    rng = stream(14, 0)
    x = random_vec(rng, 2, 3)
    y = random_vec(rng, 2, 3)
    z = random_vec(rng, 2, 3)
    a = AlgebraElement(complex_normal(rng, (2, 2)))
    lhs = inner(module_action(a, x) + y, z)
    rhs = a @ inner(x, z) + inner(y, z)
    assert alg_norm(lhs - rhs) <= 1e-12 * max(1.0, alg_norm(rhs))


def test_abs_euclidean_length():
    assert a_valued_abs(scalar_vec(3, 4)).entries[0, 0] == pytest.approx(5.0)


def test_abs_zero():
    z = ModuleVector.zero(2, 3)
    assert alg_norm(a_valued_abs(z)) == 0.0


def test_abs_squares_to_gram():
    x = random_vec(stream(31, 0), 3, 2)
    r = a_valued_abs(x)
    g = inner(x, x)
    assert alg_norm(r @ r - g) <= 1e-10 * alg_norm(g)


def test_vec_norm_scalar():
    assert vec_norm(scalar_vec(3, 4)) == pytest.approx(5.0)


def test_vec_norm_identity_block():
    x = ModuleVector(2, 1, np.eye(2, dtype=np.complex128))
    assert vec_norm(x) == pytest.approx(1.0)


def test_triangle_inequality_sampled():
    rng = stream(55, 0)
    for _ in range(SAMPLES):
        x = random_vec(rng, 2, 2)
        y = random_vec(rng, 2, 2)
        assert vec_norm(x + y) <= vec_norm(x) + vec_norm(y) + 1e-12


def test_gram_positive_sampled():
    rng = stream(56, 0)
    for _ in range(SAMPLES):
        x = random_vec(rng, 2, 3)
        assert is_positive(inner(x, x), tol=1e-12)


def test_gram_zero_iff_zero_vector():
    z = ModuleVector.zero(3, 2)
    assert np.all(inner(z, z).entries == 0)
    x = scalar_vec(1e-30)
    assert alg_norm(inner(x, x)) > 0


def test_cauchy_schwarz_norm_form():
    rng = stream(57, 0)
    for _ in range(SAMPLES):
        x = random_vec(rng, 2, 2)
        y = random_vec(rng, 2, 2)
        assert alg_norm(inner(x, y)) <= vec_norm(x) * vec_norm(y) + 1e-10


def test_cauchy_schwarz_operator_form():
    # <x,y>* <x,y>  <=  ||<x,x>|| <y,y> in the semidefinite order
    from gframes import loewner_leq
    rng = stream(58, 0)
    for _ in range(200):
        x = random_vec(rng, 2, 3)
        y = random_vec(rng, 2, 3)
        m = inner(x, y)
        lhs = alg_adjoint(m) @ m
        rhs = alg_norm(inner(x, x)) * inner(y, y)
        assert loewner_leq(lhs, rhs, tol=1e-10)


def test_module_action_identity_and_zero():
    x = random_vec(stream(4, 0), 2, 3)
    ide = AlgebraElement.identity(2)
    np.testing.assert_array_equal(module_action(ide, x).flat, x.flat)
    zero = AlgebraElement.zero(2)
    assert np.all(module_action(zero, x).flat == 0)


def test_module_action_compatibility():
    rng = stream(5, 0)
    a = AlgebraElement(complex_normal(rng, (2, 2)))
    x = random_vec(rng, 2, 3)
    y = random_vec(rng, 2, 3)
    lhs = inner(module_action(a, x), y)
    rhs = a @ inner(x, y)
    assert alg_norm(lhs - rhs) <= 1e-12 * max(1.0, alg_norm(rhs))


def test_shape_mismatch_raises():
    x = random_vec(stream(6, 0), 2, 3)
    y = random_vec(stream(6, 1), 2, 2)
    with pytest.raises(ValueError):
        inner(x, y)


def test_block_round_trip():
    x = random_vec(stream(8, 0), 3, 4)
    rebuilt = ModuleVector.from_blocks([x.block(i) for i in range(4)])
    np.testing.assert_array_equal(rebuilt.flat, x.flat)
