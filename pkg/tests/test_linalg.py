import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgstrip.errors import ShapeError, SingularityError
from qgstrip.linalg import (as_cmatrix, fix_phase, mat_mul, null_space, singular_values,
                            smallest_singular, solve)


def random_complex(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def triple_loop_matvec(a, v):
    out = [0j] * len(a)
    for i in range(len(a)):
        for j in range(len(v)):
            out[i] += a[i][j] * v[j]
    return np.array(out)


def test_identity_product():
    x = random_complex(np.random.default_rng(1), 3, 3)
    assert np.array_equal(mat_mul(np.eye(3), x), x)


def test_cyclic_cubed_is_identity():
    u = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    assert np.array_equal(mat_mul(mat_mul(u, u), u), np.eye(3))


def test_associativity_against_loops():
    rng = np.random.default_rng(2)
    a, b = random_complex(rng, 4, 4), random_complex(rng, 4, 4)
    v = random_complex(rng, 4)
    lhs = triple_loop_matvec(mat_mul(a, b), v)
    rhs = triple_loop_matvec(a, triple_loop_matvec(b, v))
    assert np.max(np.abs(lhs - rhs)) <= 1e-12


def test_shape_errors():
    with pytest.raises(ShapeError):
        mat_mul(np.ones((2, 3)), np.ones((2, 3)))
    with pytest.raises(ShapeError):
        smallest_singular(np.ones((2, 3)))
    with pytest.raises(ValueError):
        as_cmatrix([[np.nan, 0], [0, 1]])


def test_smallest_singular_identity():
    res = smallest_singular(np.eye(4))
    assert res.sigma_min == pytest.approx(1.0)
    assert np.linalg.norm(res.right_vector) == pytest.approx(1.0, abs=1e-12)


def test_smallest_singular_rank_one():
    res = smallest_singular([[1, 1], [1, 1]])
    assert res.sigma_min == pytest.approx(0.0, abs=1e-15)
    assert np.allclose(res.right_vector, np.array([1, -1]) / np.sqrt(2)) or \
        np.allclose(res.right_vector, np.array([-1, 1]) / np.sqrt(2))
    # phase convention: largest entry real positive
    i = np.argmax(np.abs(res.right_vector))
    assert res.right_vector[i].imag == 0 and res.right_vector[i].real > 0


def test_smallest_singular_unitary():
    rng = np.random.default_rng(3)
    q, _ = np.linalg.qr(random_complex(rng, 6, 6))
    assert np.max(np.abs(q @ q.conj().T - np.eye(6))) <= 1e-12
    assert smallest_singular(q).sigma_min == pytest.approx(1.0, abs=1e-10)


def test_null_space_examples():
    assert null_space(np.eye(3), 1e-8) == []
    (v,) = null_space(np.diag([1.0, 1.0, 0.0]), 1e-8)
    assert np.allclose(v, [0, 0, 1])


def test_null_space_of_outer_product():
    rng = np.random.default_rng(4)
    u = random_complex(rng, 5)
    v = random_complex(rng, 5)
    u, v = u / np.linalg.norm(u), v / np.linalg.norm(v)
    m = np.outer(u, v.conj())
    basis = null_space(m, 1e-8)
    assert len(basis) == 4
    for w in basis:
        assert np.linalg.norm(m @ w) <= 1e-10
    gram = np.array(basis) @ np.array(basis).conj().T
    assert np.allclose(gram, np.eye(4), atol=1e-12)


def test_solve_examples():
    b = np.array([1.0, 2.0, 3.0])
    assert np.allclose(solve(np.eye(3), b), b)
    assert np.allclose(solve(np.diag([2.0, 4.0]), [2.0, 8.0]), [1.0, 2.0])
    with pytest.raises(SingularityError):
        solve([[1.0, 1.0], [1.0, 1.0]], [1.0, 0.0])


def test_solve_residual_random():
    rng = np.random.default_rng(5)
    m = random_complex(rng, 6, 6) + 6 * np.eye(6)
    rhs = random_complex(rng, 6)
    x = solve(m, rhs)
    bound = 1e-10 * (np.linalg.norm(m, 2) * np.linalg.norm(x) + np.linalg.norm(rhs))
    assert np.linalg.norm(m @ x - rhs) <= bound


def test_fix_phase():
    v = fix_phase(np.array([0.1j, -2.0 + 0j, 0.3]))
    assert v[1] == pytest.approx(2.0)


matrices = st.integers(min_value=0, max_value=2**32 - 1).map(
    lambda seed: random_complex(np.random.default_rng(seed), 5, 5))


@settings(max_examples=25, deadline=None)
@given(matrices)
def test_singular_value_properties(m):
    s = singular_values(m)
    assert np.all(np.diff(s) <= 1e-12)
    res = smallest_singular(m)
    assert np.linalg.norm(m @ res.right_vector) == pytest.approx(res.sigma_min, rel=1e-10, abs=1e-14)
    rng = np.random.default_rng(0)
    vs = random_complex(rng, 1000, 5)
    vs /= np.linalg.norm(vs, axis=1, keepdims=True)
    assert res.sigma_min <= np.min(np.linalg.norm(vs @ m.T, axis=1)) + 1e-12


@settings(max_examples=25, deadline=None)
@given(matrices)
def test_solve_round_trip(m):
    m = m + 5 * np.eye(5)
    x = random_complex(np.random.default_rng(7), 5)
    assert np.allclose(solve(m, m @ x), x, rtol=1e-9, atol=1e-9)


@settings(max_examples=25, deadline=None)
@given(matrices, st.integers(1, 4))
def test_null_space_residual_bound(m, rank):
    u, s, vh = np.linalg.svd(m)
    s[rank:] = 0
    low = (u * s) @ vh
    tol = 1e-8
    smax = singular_values(low)[0]
    for w in null_space(low, tol):
        assert np.linalg.norm(low @ w) <= 2 * tol * smax
