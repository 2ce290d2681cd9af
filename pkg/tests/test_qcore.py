"""Tests for basis indexing and the dense linear-algebra kernel."""

import math

import numpy as np
import pytest

from blockadesim import qcore


def two_level_rabi(omega, t):
    """Closed-form single-atom propagator on the {g0, r} block."""
    u = np.eye(3, dtype=complex)
    c, s = math.cos(omega * t / 2.0), math.sin(omega * t / 2.0)
    u[0, 0] = u[2, 2] = c
    u[0, 2] = u[2, 0] = -1j * s
    return u


@pytest.mark.parametrize(
    "levels,index",
    [
        (("g0", "g0", "g0"), 0),
        (("g0", "g0", "g1"), 1),
        (("r", "r", "g1"), 25),
        (("r", "r", "r"), 26),
        (("g1", "g1", "g0"), 12),
        (("g0", "g1"), 1),
        (("r", "g0"), 6),
    ],
)
def test_basis_index_examples(levels, index):
    assert qcore.basis_index(levels) == index


@pytest.mark.parametrize("n_atoms", [2, 3])
def test_basis_index_roundtrip(n_atoms):
    seen = set()
    for index in range(3**n_atoms):
        levels = qcore.levels_from_index(index, n_atoms)
        assert qcore.basis_index(levels) == index
        seen.add(levels)
    assert len(seen) == 3**n_atoms


def test_basis_index_rejects_unknown_level():
    with pytest.raises(ValueError):
        qcore.basis_index(("g0", "g2", "r"))


def test_levels_from_index_range():
    with pytest.raises(ValueError):
        qcore.levels_from_index(27, 3)
    with pytest.raises(ValueError):
        qcore.levels_from_index(-1, 3)


def test_computational_indices_order():
    assert list(qcore.computational_indices(3)) == [0, 1, 3, 4, 9, 10, 12, 13]
    assert list(qcore.computational_indices(2)) == [0, 1, 3, 4]
    assert qcore.computational_labels(2) == ["00", "01", "10", "11"]


def test_rydberg_weights():
    w = qcore.rydberg_weights(3)
    assert w[0] == 0
    assert w[qcore.basis_index(("r", "g1", "g0"))] == 1
    assert w[qcore.basis_index(("r", "r", "g0"))] == 2
    assert w[26] == 3


def test_matrix_exponential_zero_hamiltonian():
    u = qcore.matrix_exponential(np.zeros((5, 5)), 3.7)
    np.testing.assert_allclose(u, np.eye(5), atol=1e-14)


def test_matrix_exponential_pi_pulse():
    # pi pulse maps g0 -> -i r
    omega = 2.0 * math.pi * 10.0
    h = np.zeros((3, 3), dtype=complex)
    h[0, 2] = h[2, 0] = omega / 2.0
    u = qcore.matrix_exponential(h, math.pi / omega)
    out = u @ qcore.ket(("g0",))
    np.testing.assert_allclose(out, -1j * qcore.ket(("r",)), atol=1e-12)


@pytest.mark.parametrize("t", [0.0, 0.013, 0.05, 0.21])
def test_matrix_exponential_matches_rabi_closed_form(t):
    omega = 2.0 * math.pi * 4.0
    h = np.zeros((3, 3), dtype=complex)
    h[0, 2] = h[2, 0] = omega / 2.0
    np.testing.assert_allclose(
        qcore.matrix_exponential(h, t), two_level_rabi(omega, t), atol=1e-12
    )


def test_matrix_exponential_unitarity_random_hermitian():
    rng = np.random.default_rng(42)
    raw = rng.normal(size=(27, 27)) + 1j * rng.normal(size=(27, 27))
    h = (raw + raw.conj().T) / 2.0
    u = qcore.matrix_exponential(h, 1.0)
    assert qcore.unitarity_defect(u) < 1e-10


def test_matrix_exponential_group_property():
    rng = np.random.default_rng(3)
    raw = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    h = (raw + raw.conj().T) / 2.0
    t1, t2 = 0.4, 1.3
    u12 = qcore.matrix_exponential(h, t1 + t2)
    product = qcore.matrix_exponential(h, t2) @ qcore.matrix_exponential(h, t1)
    assert np.abs(u12 - product).max() < 1e-10


def test_matrix_exponential_inverse_property():
    rng = np.random.default_rng(11)
    raw = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    h = (raw + raw.conj().T) / 2.0
    forward = qcore.matrix_exponential(h, 0.9)
    backward = qcore.matrix_exponential(-h, 0.9)  # exp(+iHt)
    assert np.abs(forward @ backward - np.eye(6)).max() < 1e-10


def test_matrix_exponential_non_hermitian_contracts():
    h = np.diag([0.0, 0.0, -0.5j])  # decay on the top level
    u = qcore.matrix_exponential(h, 2.0)
    norms = np.linalg.norm(u, axis=0)
    assert np.all(norms <= 1.0 + 1e-12)
    assert norms[2] < 1.0


def test_matrix_exponential_rejects_bad_input():
    with pytest.raises(ValueError):
        qcore.matrix_exponential(np.eye(3), -0.1)
    with pytest.raises(FloatingPointError):
        qcore.matrix_exponential(np.array([[np.nan, 0], [0, 1]]), 1.0)
    with pytest.raises(ValueError):
        qcore.matrix_exponential(np.zeros((2, 3)), 1.0)


def test_hermitian_checks():
    h = np.array([[1.0, 1j], [-1j, 2.0]])
    qcore.require_hermitian(h)
    with pytest.raises(ValueError):
        qcore.require_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_tensor_product_identity():
    np.testing.assert_array_equal(
        qcore.tensor_product(np.eye(3), np.eye(3)), np.eye(9)
    )


def test_tensor_product_mixed_product_property():
    rng = np.random.default_rng(8)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    x = rng.normal(size=3) + 1j * rng.normal(size=3)
    y = rng.normal(size=3) + 1j * rng.normal(size=3)
    left = qcore.tensor_product(a, b) @ np.kron(x, y)
    right = np.kron(a @ x, b @ y)
    np.testing.assert_allclose(left, right, atol=1e-12)


def test_embedded_operators_commute_on_distinct_atoms():
    rng = np.random.default_rng(5)
    op_a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    op_b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    a = qcore.embed_operator(op_a, 0, 3)
    b = qcore.embed_operator(op_b, 2, 3)
    assert np.abs(a @ b - b @ a).max() < 1e-12


def test_embed_operator_validates():
    with pytest.raises(ValueError):
        qcore.embed_operator(np.eye(2), 0, 3)
    with pytest.raises(ValueError):
        qcore.embed_operator(np.eye(3), 3, 3)
