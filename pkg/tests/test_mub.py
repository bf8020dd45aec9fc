import cmath
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from meanking.finitefield import as_dim
from meanking.mub import (
    CB,
    ComputationalBasis,
    MubIndex,
    Shifted,
    all_bases,
    all_pairs_unbiased,
    basis_labels,
    basis_to_json,
    conjugate_label,
    inversion_operator,
    king_eigenvalue,
    king_operator,
    mub_basis,
    mub_state,
    mub_table,
    parse_basis,
    pauli_x,
    pauli_z,
    shifted,
    verify_unbiased,
)
from meanking.qudit import Ket

PRIMES = [3, 5, 7, 11]


def oracle_state(d, b, m):
    """Straight evaluation with floating exponents and an explicit inverse of 2."""
    if b is None:
        v = np.zeros(d, dtype=complex)
        v[m] = 1
        return v
    inv2 = pow(2, -1, d)
    return np.array([cmath.exp(2j * cmath.pi * (b * inv2 * n * (n - 1) - n * m) / d) for n in range(d)]) / np.sqrt(d)


@pytest.mark.parametrize("d", PRIMES)
def test_table_matches_oracle(d, backend):
    for b in [None] + list(range(d)):
        for m in range(d):
            label = CB if b is None else shifted(d, b)
            got = mub_state(d, MubIndex(label, as_dim(d)(m))).amplitudes
            assert np.allclose(got, oracle_state(d, b, m), atol=1e-12)


def test_examples():
    d = as_dim(3)
    assert np.allclose(mub_state(d, MubIndex(CB, d(1))).amplitudes, [0, 1, 0])
    assert np.allclose(mub_state(d, MubIndex(shifted(d, 0), d(0))).amplitudes, np.ones(3) / np.sqrt(3))
    assert np.allclose(pauli_z(d) @ Ket.basis_vector(3, 0), Ket.basis_vector(3, 0))
    assert (pauli_x(d) @ Ket.basis_vector(3, 2)).allclose(Ket.basis_vector(3, 0))


def test_conjugate_label_example():
    d = as_dim(7)
    out = conjugate_label(d, MubIndex(shifted(d, 3), d(2)))
    assert out == MubIndex(shifted(d, 4), d(5))
    assert conjugate_label(d, MubIndex(CB, d(2))) == MubIndex(CB, d(2))


@pytest.mark.parametrize("d", PRIMES)
def test_conjugate_label_is_componentwise_conjugate(d):
    dim = as_dim(d)
    for b in basis_labels(dim):
        for m in dim.residues():
            idx = MubIndex(b, m)
            assert np.allclose(mub_state(dim, idx).amplitudes.conj(),
                               mub_state(dim, conjugate_label(dim, idx)).amplitudes, atol=1e-12)
            assert conjugate_label(dim, conjugate_label(dim, idx)) == idx


@pytest.mark.parametrize("d", PRIMES)
def test_orthonormal_and_unbiased(d):
    table = mub_table(d)
    for B in table:
        assert np.allclose(B.conj() @ B.T, np.eye(d), atol=1e-10)
    assert all_pairs_unbiased(d)
    for a, b in combinations(all_bases(d), 2):
        assert verify_unbiased(a, b)


def test_basis_is_not_unbiased_with_itself():
    assert not verify_unbiased(mub_basis(5, CB), mub_basis(5, CB))
    assert not verify_unbiased(mub_basis(5, shifted(5, 2)), mub_basis(5, shifted(5, 2)))


@pytest.mark.parametrize("d", PRIMES)
def test_weyl_relations(d):
    X, Z = pauli_x(d).matrix, pauli_z(d).matrix
    w = cmath.exp(2j * cmath.pi / d)
    # with Z|n> = w^n |n> and X|n> = |n+1>, the clock picks up w after the shift
    assert np.allclose(Z @ X, w * X @ Z, atol=1e-10)
    assert not np.allclose(X @ Z, w * Z @ X, atol=1e-3)
    assert np.allclose(np.linalg.matrix_power(X, d), np.eye(d))
    assert np.allclose(np.linalg.matrix_power(Z, d), np.eye(d), atol=1e-10)


@pytest.mark.parametrize("d", PRIMES)
def test_bases_are_eigenbases_of_x_z_powers(d):
    X, Z = pauli_x(d).matrix, pauli_z(d).matrix
    dim = as_dim(d)
    for b in range(d):
        op = X @ np.linalg.matrix_power(Z, b)
        for m in range(d):
            v = mub_state(dim, MubIndex(shifted(dim, b), dim(m))).amplitudes
            assert np.allclose(op @ v, king_eigenvalue(dim, m) * v, atol=1e-10)
        assert np.allclose(king_operator(dim, shifted(dim, b)).matrix, op, atol=1e-10)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_king_operator(d):
    dim = as_dim(d)
    K = king_operator(dim, CB).matrix
    assert np.allclose(K, np.diag(np.diag(K)))
    for b in basis_labels(dim):
        K = king_operator(dim, b).matrix
        assert np.allclose(K @ K.conj().T, K.conj().T @ K, atol=1e-10)
        ev = np.linalg.eigvals(K)
        gaps = np.abs(ev[:, None] - ev[None, :]) + np.eye(d)
        assert gaps.min() > 1e-6


def test_inversion_operator():
    I5 = inversion_operator(5)
    assert (I5 @ Ket.basis_vector(5, 0)).allclose(Ket.basis_vector(5, 0))
    assert (I5 @ Ket.basis_vector(5, 1)).allclose(Ket.basis_vector(5, 4))
    assert np.allclose((I5 ** 2).matrix, np.eye(5))


def test_cb_is_not_shifted_zero():
    assert CB != shifted(3, 0)
    assert isinstance(parse_basis(3, "dd0"), ComputationalBasis)
    assert parse_basis(3, "0") == shifted(3, 0)
    assert parse_basis(3, 2) == Shifted(as_dim(3)(2))
    assert basis_to_json(CB) == "dd0"
    assert basis_to_json(shifted(5, 4)) == 4


@pytest.mark.parametrize("token", ["3", 3, -1, "x", "", "dd1", True, 1.0])
def test_parse_basis_rejects(token):
    with pytest.raises(ValueError):
        parse_basis(3, token)


@given(st.sampled_from([3, 5, 7]), st.data())
def test_overlap_modulus_between_distinct_bases(d, data):
    labels = basis_labels(d)
    i, j = data.draw(st.lists(st.integers(0, d), min_size=2, max_size=2, unique=True))
    m1, m2 = data.draw(st.integers(0, d - 1)), data.draw(st.integers(0, d - 1))
    dim = as_dim(d)
    u = mub_state(dim, MubIndex(labels[i], dim(m1))).amplitudes
    v = mub_state(dim, MubIndex(labels[j], dim(m2))).amplitudes
    assert abs(abs(np.vdot(u, v)) - 1 / np.sqrt(d)) < 1e-10
