"""Dual affine plane of prime order d.

Points ``(m, b)`` sit in a d x (d+1) array: row ``m``, column ``b`` in
``CB, 0, ..., d-1``. Line ``(mddot, m0)`` holds ``(mddot, CB)`` and, for each
``b``, the point in row ``m0 + (b/2)(2*mddot - 1)``.
"""
from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass
from itertools import combinations

from .finitefield import ModInt, PrimeDim, as_dim
from .mub import (
    CB,
    BasisLabel,
    ComputationalBasis,
    Shifted,
    basis_labels,
    basis_to_json,
    parse_basis,
)


@dataclass(frozen=True)
class Point:
    m: ModInt
    b: BasisLabel

    def __str__(self) -> str:
        return f"({self.m.value},{self.b})"


@dataclass(frozen=True)
class Line:
    m_ddot: ModInt
    m0: ModInt

    def __str__(self) -> str:
        return f"[{self.m_ddot.value},{self.m0.value}]"

    @property
    def index(self) -> int:
        """Row in the line table, also the control-outcome label."""
        return self.m_ddot.value * self.m_ddot.dim.d + self.m0.value


@dataclass(frozen=True)
class CheckRecord:
    name: str
    expected: object
    observed: object
    passed: bool

    def to_json(self) -> dict:
        return asdict(self)


AuditReport = list[CheckRecord]


def point(d: int | PrimeDim, m: int, b: BasisLabel | int | str) -> Point:
    dim = as_dim(d)
    return Point(dim(m), parse_basis(dim, b))


def line(d: int | PrimeDim, m_ddot: int, m0: int) -> Line:
    dim = as_dim(d)
    return Line(dim(m_ddot), dim(m0))


def line_from_index(d: int | PrimeDim, index: int) -> Line:
    dim = as_dim(d)
    return line(dim, index // dim.d, index % dim.d)


def all_points(d: int | PrimeDim) -> list[Point]:
    """Column-major: CB column first, then b = 0..d-1."""
    dim = as_dim(d)
    return [Point(m, b) for b in basis_labels(dim) for m in dim.residues()]


def all_lines(d: int | PrimeDim) -> list[Line]:
    dim = as_dim(d)
    return [Line(a, c) for a in dim.residues() for c in dim.residues()]


def row_on_line(j: Line, b: BasisLabel) -> ModInt:
    """Row of the point of line ``j`` in column ``b``."""
    if isinstance(b, ComputationalBasis):
        return j.m_ddot
    return j.m0 + b.b.half() * (2 * j.m_ddot - 1)


def line_points(d: int | PrimeDim, j: Line) -> list[Point]:
    return [Point(row_on_line(j, b), b) for b in basis_labels(d)]


def on_line(p: Point, j: Line) -> bool:
    return row_on_line(j, p.b) == p.m


def lines_through_point(d: int | PrimeDim, p: Point) -> list[Line]:
    dim = as_dim(d)
    if isinstance(p.b, ComputationalBasis):
        return [Line(p.m, m0) for m0 in dim.residues()]
    return [Line(md, p.m - p.b.b.half() * (2 * md - 1)) for md in dim.residues()]


def intersect_lines(d: int | PrimeDim, j1: Line, j2: Line) -> Point:
    """The unique shared point of two distinct lines."""
    if j1 == j2:
        raise ValueError(f"lines {j1} and {j2} are identical")
    if j1.m_ddot == j2.m_ddot:
        return Point(j1.m_ddot, CB)
    b = Shifted((j1.m0 - j2.m0) / (j2.m_ddot - j1.m_ddot))
    return Point(row_on_line(j1, b), b)


def column_points(d: int | PrimeDim, b: BasisLabel) -> list[Point]:
    dim = as_dim(d)
    return [Point(m, b) for m in dim.residues()]


def audit_dapg(d: int | PrimeDim) -> AuditReport:
    """Exhaustive check of the incidence axioms for this realization."""
    dim = as_dim(d)
    n = dim.d
    pts = all_points(dim)
    lns = all_lines(dim)
    members = {j: frozenset(line_points(dim, j)) for j in lns}
    through = {p: frozenset(j for j in lns if p in members[j]) for p in pts}
    report: AuditReport = []

    def rec(name, expected, observed):
        report.append(CheckRecord(name, expected, observed, expected == observed))

    rec("line_count", n * n, len(set(lns)))
    rec("point_count", n * (n + 1), len(set(pts)))
    rec("points_per_line", [n + 1], sorted({len(s) for s in members.values()}))
    rec("one_point_per_column", True,
        all(len({p.b for p in s}) == n + 1 for s in members.values()))
    rec("lines_per_point", [n], sorted({len(s) for s in through.values()}))
    rec("lines_through_point_formula", True,
        all(frozenset(lines_through_point(dim, p)) == through[p] for p in pts))

    shared = [len(members[a] & members[b]) for a, b in combinations(lns, 2)]
    rec("line_pairs_share_one_point", [1], sorted(set(shared)))
    rec("intersection_formula", True,
        all({intersect_lines(dim, a, b)} == members[a] & members[b] for a, b in combinations(lns, 2)))

    cross = [len(through[p] & through[q]) for p, q in combinations(pts, 2) if p.b != q.b]
    rec("cross_column_pairs_on_one_line", [1], sorted(set(cross)))
    same = [len(through[p] & through[q]) for p, q in combinations(pts, 2) if p.b == q.b]
    rec("same_column_pairs_unconnected", [0], sorted(set(same)))

    cols = [frozenset(column_points(dim, b)) for b in basis_labels(dim)]
    rec("columns_partition_points", True,
        sum(len(c) for c in cols) == len(pts) and frozenset().union(*cols) == frozenset(pts))
    rec("column_count", n + 1, len(cols))
    return report


def incidence_rows(d: int | PrimeDim) -> list[dict]:
    """One record per (line, point) incidence, sorted by line then column."""
    dim = as_dim(d)
    rows = []
    for j in all_lines(dim):
        for p in line_points(dim, j):
            rows.append({
                "line_mddot": j.m_ddot.value,
                "line_m0": j.m0.value,
                "point_b": basis_to_json(p.b),
                "point_m": p.m.value,
            })
    return rows


INCIDENCE_HEADER = ["line_mddot", "line_m0", "point_b", "point_m"]


def incidence_csv(d: int | PrimeDim) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=INCIDENCE_HEADER, lineterminator="\n")
    w.writeheader()
    w.writerows(incidence_rows(d))
    return buf.getvalue()

