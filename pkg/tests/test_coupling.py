import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgstrip.coupling import cyclic_matrix, scattering, transmission_probabilities
from qgstrip.errors import DomainError


def eta_closed_form(k):
    """Degree-3 scattering matrix written in eta = (1-k)/(1+k), entry by entry."""
    eta = (1 - k) / (1 + k)
    r = -eta / (1 + eta)
    return (1 + eta) / (1 + eta + eta**2) * np.array([[r, 1, eta], [eta, r, 1], [1, eta, r]])


def test_cyclic_degree_three():
    assert np.array_equal(cyclic_matrix(3).matrix, [[0, 1, 0], [0, 0, 1], [1, 0, 0]])


def test_cyclic_degree_two():
    assert np.array_equal(cyclic_matrix(2).matrix, [[0, 1], [1, 0]])


def test_cyclic_order_five():
    u = cyclic_matrix(5).matrix
    p = np.eye(5)
    for j in range(1, 6):
        p = p @ u
        assert np.array_equal(p, np.eye(5)) == (j == 5)


@pytest.mark.parametrize("d", [0, 1, 2.5])
def test_cyclic_domain(d):
    with pytest.raises(DomainError):
        cyclic_matrix(d)


@pytest.mark.parametrize("d", range(2, 8))
def test_cyclic_is_unitary(d):
    u = cyclic_matrix(d).matrix
    assert np.max(np.abs(u @ u.conj().T - np.eye(d))) <= 1e-14


@pytest.mark.parametrize("d", range(2, 8))
def test_full_transmission_at_k_one(d):
    u = cyclic_matrix(d)
    assert np.max(np.abs(scattering(u, 1.0).matrix - u.matrix)) <= 1e-14


def test_degree_three_at_k_three():
    expected = np.array([[2, 2, -1], [-1, 2, 2], [2, -1, 2]]) / 3
    assert np.allclose(np.linalg.norm(expected, axis=1), 1.0)
    s = scattering(cyclic_matrix(3), 3.0)
    assert s.eta == pytest.approx(-0.5)
    assert np.max(np.abs(s.matrix - expected)) <= 1e-14


def test_closed_form_agreement():
    rng = np.random.default_rng(11)
    u = cyclic_matrix(3)
    for k in rng.uniform(0, 100, 50):
        assert np.max(np.abs(scattering(u, k).matrix - eta_closed_form(k))) <= 1e-12


def test_unitarity_sweep():
    for d in range(2, 8):
        u = cyclic_matrix(d)
        for k in np.logspace(-2, 4, 100):
            s = scattering(u, k).matrix
            assert np.linalg.norm(s @ s.conj().T - np.eye(d)) <= 1e-11


@pytest.mark.parametrize("d", [3, 5])
def test_odd_degree_tends_to_identity(d):
    u = cyclic_matrix(d)
    ks = 10.0 ** np.arange(1, 6)
    scaled = [k * np.linalg.norm(scattering(u, k).matrix - np.eye(d)) for k in ks]
    c = max(scaled)
    ratios = [scaled[i + 1] / scaled[i] for i in range(1, len(scaled) - 1)]
    assert all(0.5 <= r <= 2 for r in ratios)
    assert np.linalg.norm(scattering(u, 1e6).matrix - np.eye(d)) <= 1e-5 * c


def test_even_degree_does_not_tend_to_identity():
    u = cyclic_matrix(4)
    for k in np.logspace(2, 6, 30):
        assert np.linalg.norm(scattering(u, k).matrix - np.eye(4)) >= 0.5


def test_degree_four_equal_probabilities():
    p = transmission_probabilities(cyclic_matrix(4), 1e6)
    assert np.max(np.abs(p - 0.25)) <= 1e-3


def test_degree_three_probabilities_limit():
    p = transmission_probabilities(cyclic_matrix(3), 1e6)
    assert np.max(np.abs(np.diag(p) - 1)) <= 1e-5
    assert np.max(p[~np.eye(3, dtype=bool)]) <= 1e-10


def test_scattering_domain():
    with pytest.raises(DomainError):
        scattering(cyclic_matrix(3), 0.0)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 9), st.floats(1e-3, 1e5))
def test_probability_rows_sum_to_one(d, k):
    p = transmission_probabilities(cyclic_matrix(d), k)
    assert np.allclose(p.sum(axis=1), 1.0, atol=1e-12)
