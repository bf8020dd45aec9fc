import cmath

import numpy as np
import pytest

from meanking.entangle import (
    balance_state,
    column_sum,
    line_operator,
    line_state,
    line_state_matrix,
    line_vector_raw,
    overlap_point_line,
    point_index,
    point_state,
    point_state_matrix,
    residue_label,
    schmidt_coefficients,
    single_particle_residue,
)
from meanking.finitefield import as_dim
from meanking.geometry import all_lines, all_points, line, lines_through_point, on_line, point, row_on_line
from meanking.mub import CB, MubIndex, basis_labels, conjugate_label, mub_state, shifted
from meanking.qudit import Ket


def w(d, k):
    return cmath.exp(2j * cmath.pi * k / d)


def oracle_line(d, md, m0):
    v = np.zeros(d * d, dtype=complex)
    for n in range(d):
        v[((md + n) % d) * d + (md - n) % d] += w(d, -2 * m0 * n) / np.sqrt(d)
    return v


def oracle_line_operator(d, md, m0):
    return np.array([[w(d, -(n - k) * m0) if (n + k - 2 * md) % d == 0 else 0 for k in range(d)]
                     for n in range(d)])


def test_point_state_examples():
    assert point_state(3, point(3, 1, "dd0")).vector.allclose(Ket(np.eye(9)[4]))
    d = as_dim(5)
    for p in all_points(d):
        assert point_state(d, p).vector.is_normalized()


@pytest.mark.parametrize("d", [3, 5])
def test_point_partner_is_conjugate(d):
    dim = as_dim(d)
    for p in all_points(dim):
        amps = point_state(dim, p).vector.amplitudes.reshape(d, d)
        u = mub_state(dim, MubIndex(p.b, p.m)).amplitudes
        assert np.allclose(amps, np.outer(u, u.conj()), atol=1e-12)


def test_point_table_matches_point_state(backend):
    for d in (3, 5):
        P = point_state_matrix(d)
        for p in all_points(d):
            assert np.allclose(P[point_index(p)], point_state(d, p).vector.amplitudes, atol=1e-12)


def test_balance_state():
    b = balance_state(3).vector
    assert np.flatnonzero(b.amplitudes).tolist() == [0, 4, 8]
    for d in (3, 5, 7):
        assert balance_state(d).vector.norm() == pytest.approx(np.sqrt(d))
    assert column_sum(5, shifted(5, 2)).allclose(column_sum(5, CB), 1e-12)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_line_state_oracle(d, backend):
    for j in all_lines(d):
        v = line_state(d, j).vector.amplitudes
        assert np.allclose(v, oracle_line(d, j.m_ddot.value, j.m0.value), atol=1e-12)
        nz = np.flatnonzero(np.abs(v) > 1e-12)
        assert all((k // d + k % d - 2 * j.m_ddot.value) % d == 0 for k in nz)
        assert np.allclose(np.abs(v[nz]), 1 / np.sqrt(d))


def test_line_states_orthonormal_d5():
    L = line_state_matrix(5)
    assert np.allclose(L.conj() @ L.T, np.eye(25), atol=1e-10)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_line_states_maximally_entangled(d):
    for j in all_lines(d):
        assert np.allclose(schmidt_coefficients(line_state(d, j).vector, d), 1 / np.sqrt(d), atol=1e-10)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_raw_line_vector(d):
    for j in all_lines(d):
        raw = line_vector_raw(d, j)
        assert raw.norm() == pytest.approx(np.sqrt(d), abs=1e-10)
        assert np.allclose(raw.amplitudes / np.sqrt(d), line_state(d, j).vector.amplitudes, atol=1e-10)


@pytest.mark.parametrize("d", [3, 5])
def test_point_recovered_from_raw_lines(d):
    for p in all_points(d):
        acc = sum(line_vector_raw(d, j).amplitudes for j in lines_through_point(d, p)) / d
        assert np.allclose(acc, point_state(d, p).vector.amplitudes, atol=1e-10)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_line_operator_two_constructions(d):
    for j in all_lines(d):
        P = line_operator(d, j).matrix
        assert np.allclose(P, oracle_line_operator(d, j.m_ddot.value, j.m0.value), atol=1e-10)
        assert np.allclose(P @ P, np.eye(d), atol=1e-10)
        assert np.allclose(P, P.conj().T, atol=1e-10)


def test_line_operator_traces_d3():
    ops = {j: line_operator(3, j).matrix for j in all_lines(3)}
    for a in ops:
        for b in ops:
            assert np.trace(ops[a] @ ops[b]) == pytest.approx(3 if a == b else 0, abs=1e-10)


def test_overlap_example_d3():
    p, j = point(3, 1, 1), line(3, 2, 1)
    assert on_line(p, j)
    assert abs(overlap_point_line(3, p, j)) == pytest.approx(0.5773503, abs=1e-7)
    assert overlap_point_line(3, point(3, 0, "dd0"), j) == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("d", [3, 5])
def test_overlap_truth_table(d):
    for p in all_points(d):
        for j in all_lines(d):
            expected = 1 / d if on_line(p, j) else 0.0
            assert abs(overlap_point_line(d, p, j)) ** 2 == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_residue_is_uniform_and_labelled(d):
    dim = as_dim(d)
    for j in all_lines(dim):
        for b in basis_labels(dim):
            for m in dim.residues():
                res, phase = single_particle_residue(dim, m, b, j)
                assert res.norm() ** 2 == pytest.approx(1 / d, abs=1e-12)
                target = mub_state(dim, residue_label(dim, m, b, j)).amplitudes
                assert np.allclose(res.amplitudes, phase * target / np.sqrt(d), atol=1e-10)
                assert abs(phase) == pytest.approx(1.0)


def test_residue_on_line_point_is_conjugate_point():
    d = as_dim(5)
    for j in all_lines(d):
        for b in basis_labels(d):
            mbar = row_on_line(j, b)
            assert residue_label(d, mbar, b, j) == conjugate_label(d, MubIndex(b, mbar))
