"""Invariant suites run by ``meanking verify``.

Every suite takes a dimension and a tolerance and returns a list of
:class:`~meanking.geometry.CheckRecord`. Numeric checks record the worst
deviation seen as ``observed``.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np

from . import _kernels
from .collective import (
    CollectiveIndex,
    collective_operators,
    embed_collective,
    particle_to_collective_map,
)
from .entangle import (
    balance_state,
    column_sum,
    line_operator,
    line_state_matrix,
    line_vector_raw,
    point_index,
    point_state_matrix,
    residue_label,
    schmidt_coefficients,
    single_particle_residue,
)
from .finitefield import as_dim
from .geometry import (
    CheckRecord,
    all_lines,
    all_points,
    audit_dapg,
    intersect_lines,
    lines_through_point,
    on_line,
)
from .mub import (
    MubIndex,
    Shifted,
    all_bases,
    basis_labels,
    conjugate_label,
    king_eigenvalue,
    king_operator,
    mub_state,
    mub_table,
    pauli_x,
    pauli_z,
    verify_unbiased,
)
from .protocol import (
    control_operator,
    mkp_sweep,
    reset_fidelity,
    tracking_constraint,
    tracking_sweep,
)
from .qudit import Ket, tensor_op

SUITES = ("mub", "collective", "geometry", "entangle", "protocol")


def _close(name: str, err: float, tol: float) -> CheckRecord:
    err = float(err)
    return CheckRecord(name, f"<= {tol:g}", err, err <= tol)


def _exact(name: str, expected, observed) -> CheckRecord:
    return CheckRecord(name, expected, observed, expected == observed)


def _dev(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) if np.size(a) else 0.0


def suite_mub(d: int, tol: float) -> list[CheckRecord]:
    dim = as_dim(d)
    n = dim.d
    table = mub_table(n)
    eye = np.eye(n)
    out = [_close("bases_orthonormal", max(_dev(B.conj() @ B.T, eye) for B in table), tol)]
    bases = all_bases(dim)
    pairs = list(combinations(bases, 2))
    out.append(_exact("basis_pairs_unbiased", len(pairs),
                      sum(verify_unbiased(a, b, tol) for a, b in pairs)))
    worst = 0.0
    for b in basis_labels(dim):
        for m in dim.residues():
            idx = MubIndex(b, m)
            worst = max(worst, _dev(mub_state(dim, idx).amplitudes.conj(),
                                    mub_state(dim, conjugate_label(dim, idx)).amplitudes))
    out.append(_close("conjugation_closure", worst, tol))
    X, Z = pauli_x(dim).matrix, pauli_z(dim).matrix
    w = king_eigenvalue(dim, 1)
    # Z|n> = w^n|n>, X|n> = |n+1>  =>  Z X = w X Z
    out.append(_close("weyl_commutation", _dev(Z @ X, w * X @ Z), tol))
    out.append(_close("weyl_order", max(_dev(np.linalg.matrix_power(X, n), eye),
                                        _dev(np.linalg.matrix_power(Z, n), eye)), tol))
    worst = 0.0
    for b in dim.residues():
        op = X @ np.linalg.matrix_power(Z, b.value)
        for m in dim.residues():
            v = mub_state(dim, MubIndex(Shifted(b), m)).amplitudes
            worst = max(worst, _dev(op @ v, king_eigenvalue(dim, m.value) * v))
    out.append(_close("shift_clock_eigenbases", worst, tol))
    worst = 0.0
    for b in basis_labels(dim):
        K = king_operator(dim, b).matrix
        for m in dim.residues():
            v = mub_state(dim, MubIndex(b, m)).amplitudes
            worst = max(worst, _dev(K @ v, king_eigenvalue(dim, m.value) * v))
    out.append(_close("king_operator_spectrum", worst, tol))
    return out


def suite_collective(d: int, tol: float) -> list[CheckRecord]:
    dim = as_dim(d)
    n = dim.d
    z_r, z_c, x_r, x_c = (o.matrix for o in collective_operators(dim))
    w = king_eigenvalue(dim, 1)
    eye = np.eye(n * n)
    out = [
        _close("collective_weyl_commutation", max(_dev(z_r @ x_r, w * x_r @ z_r),
                                                  _dev(z_c @ x_c, w * x_c @ z_c)), tol),
        _close("collective_cross_commute", max(_dev(x_r @ z_c, z_c @ x_r),
                                               _dev(x_c @ z_r, z_r @ x_c)), tol),
        _close("collective_order", max(_dev(np.linalg.matrix_power(o, n), eye)
                                       for o in (z_r, z_c, x_r, x_c)), tol),
    ]
    Z, X = pauli_z(dim), pauli_x(dim)
    I = type(Z).identity(n)
    z1, z2 = tensor_op(Z, I).matrix, tensor_op(I, Z).matrix
    x1, x2 = tensor_op(X, I).matrix, tensor_op(I, X).matrix
    z_r_inv = z_r.conj().T
    out.append(_close("particle_from_collective_z", max(_dev(z1, z_r @ z_c), _dev(z2, z_r_inv @ z_c)), tol))
    out.append(_close("collective_from_particle_x", max(_dev(x_r, x1 @ x2.conj().T), _dev(x_c, x1 @ x2)), tol))
    M = particle_to_collective_map(dim).matrix
    zz = np.kron(Z.matrix, Z.matrix)
    zinv_z = np.kron(Z.matrix.conj(), Z.matrix)
    out.append(_close("map_conjugates_z", max(_dev(M @ z1 @ M.T, zz), _dev(M @ z2 @ M.T, zinv_z)), tol))
    out.append(_close("map_unitary", _dev(M @ M.T, eye), tol))
    ok = all(CollectiveIndex.from_particles(a, b).to_particles() == (a, b)
             for a in dim.residues() for b in dim.residues())
    out.append(_exact("label_roundtrip", True, ok))
    embedded = np.array([embed_collective(dim, Ket.basis_vector(n, c), Ket.basis_vector(n, r)).amplitudes
                         for c in range(n) for r in range(n)])
    out.append(_close("collective_cb_orthonormal", _dev(embedded.conj() @ embedded.T, eye), tol))
    return out


def suite_geometry(d: int, tol: float) -> list[CheckRecord]:
    dim = as_dim(d)
    out = list(audit_dapg(dim))
    kernel = _kernels.incidence_table(dim.d)
    ok = all(on_line(p, j) == (kernel[j.index, point_index(p) // dim.d] == p.m.value)
             for j in all_lines(dim) for p in all_points(dim))
    out.append(_exact("incidence_kernel_matches", True, ok))
    return out


def suite_entangle(d: int, tol: float) -> list[CheckRecord]:
    dim = as_dim(d)
    n = dim.d
    L = line_state_matrix(n)
    P = point_state_matrix(n)
    out = [_close("line_states_orthonormal", _dev(L.conj() @ L.T, np.eye(n * n)), tol)]
    out.append(_close("line_states_maximally_entangled",
                      max(_dev(schmidt_coefficients(Ket(v), dim), np.full(n, 1 / np.sqrt(n))) for v in L), tol))
    probs = _kernels.overlap_probabilities(P, L)
    expected = np.array([[1 / n if on_line(p, j) else 0.0 for j in all_lines(dim)] for p in all_points(dim)])
    out.append(_close("overlap_law", _dev(probs, expected), tol))
    bal = balance_state(dim).vector
    out.append(_close("balance_universality",
                      max(_dev(column_sum(dim, b).amplitudes, bal.amplitudes) for b in basis_labels(dim)), tol))
    raw_dev = max(_dev(line_vector_raw(dim, j).amplitudes / np.sqrt(n), L[j.index]) for j in all_lines(dim))
    out.append(_close("raw_line_matches_line_state", raw_dev, tol))
    worst = 0.0
    for p in all_points(dim):
        recon = sum(line_vector_raw(dim, j).amplitudes for j in lines_through_point(dim, p)) / n
        worst = max(worst, _dev(recon, P[point_index(p)]))
    out.append(_close("point_from_lines", worst, tol))
    ops = {j: line_operator(dim, j).matrix for j in all_lines(dim)}
    out.append(_close("line_operator_involution",
                      max(_dev(o @ o, np.eye(n)) for o in ops.values()), tol))
    tr = max(abs(np.trace(ops[a] @ ops[b]) - (n if a == b else 0)) for a in ops for b in ops)
    out.append(_close("line_operator_trace_orthogonality", tr, tol))
    worst_norm = worst_dir = 0.0
    for j in all_lines(dim):
        for b in basis_labels(dim):
            for m in dim.residues():
                res, phase = single_particle_residue(dim, m, b, j)
                worst_norm = max(worst_norm, abs(res.norm() ** 2 - 1 / n))
                pred = mub_state(dim, residue_label(dim, m, b, j)).amplitudes * phase / np.sqrt(n)
                worst_dir = max(worst_dir, _dev(res.amplitudes, pred))
    out.append(_close("single_particle_uniformity", worst_norm, tol))
    out.append(_close("single_particle_residue_label", worst_dir, tol))
    return out


def suite_protocol(d: int, tol: float) -> list[CheckRecord]:
    dim = as_dim(d)
    n = dim.d
    out = []
    mkp = [t for run in mkp_sweep(dim) for t in run]
    out.append(_exact("mkp_branch_count", n * (n + 1) * n, len(mkp)))
    out.append(_exact("mkp_inference_correct", len(mkp), sum(bool(t.correct) for t in mkp)))
    out.append(_close("mkp_control_probability",
                      max(abs(t.probabilities["control"] - 1 / n) for t in mkp), tol))
    runs = tracking_sweep(dim)
    flat = [t for run in runs for t in run]
    decided = [t for t in flat if t.correct is not None]
    out.append(_exact("tracking_inference_correct", len(decided), sum(bool(t.correct) for t in decided)))
    erasure = max(abs(sum(t.probabilities["branch"] for t in run if t.correct is None) - 1 / n) for run in runs)
    out.append(_close("tracking_erasure_probability", erasure, tol))
    king = max(abs(t.probabilities["king"] - 1 / n) for t in flat)
    out.append(_close("tracking_king_uniformity", king, tol))
    support = all(
        len({t.control_outcome for t in run}) == n
        and all(tracking_constraint(t.prepared, t.control_outcome, t.king_basis) for t in run)
        for run in runs)
    out.append(_exact("tracking_control_support", True, support))
    ctrl = max(abs(sum(t.probabilities["branch"] for t in run if t.control_outcome == c) - 1 / n)
               for run in runs for c in {t.control_outcome for t in run})
    out.append(_close("tracking_control_probability", ctrl, tol))
    geo = all(intersect_lines(dim, t.prepared, t.control_outcome).b == t.king_basis
              for t in decided)
    out.append(_exact("tracking_matches_line_intersection", True, geo))
    fid = max(1 - reset_fidelity(dim, t) for t in flat + mkp)
    out.append(_close("reset_fidelity", fid, tol))
    B = control_operator(dim)
    L = line_state_matrix(n)
    out.append(_close("control_operator_eigenbasis",
                      max(_dev(B @ L[k], k * L[k]) for k in range(n * n)), tol * n * n))
    return out


_RUNNERS = {
    "mub": suite_mub,
    "collective": suite_collective,
    "geometry": suite_geometry,
    "entangle": suite_entangle,
    "protocol": suite_protocol,
}


def run_suite(name: str, d: int, tol: float = 1e-10) -> list[CheckRecord]:
    if name not in _RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    return _RUNNERS[name](d, tol)


def run_suites(names, d: int, tol: float = 1e-10) -> list[tuple[str, CheckRecord]]:
    if isinstance(names, str):
        names = [names]
    names = SUITES if list(names) == ["all"] else names
    return [(name, rec) for name in names for rec in run_suite(name, d, tol)]
