"""Hodge-level invariants of hypersurface sections, read off the face lattice.

For a full-dimensional lattice polytope of dimension n+1 the compact
section has h^{p,0} = 0 for 0 < p < n and h^{n,0} equal to the number of
interior lattice points.  The open invariants e^{p,0} are signed sums of
interior point counts over (p+1)-faces; at p = 0 there is an extra
vertex-count term, pinned here by requiring the face-sum route to agree
with the closed form and with plane curves.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateInputError
from .polytope import LatticePolytope
from .toric import fine_interior


@dataclass(frozen=True)
class HodgeRow:
    """h^{p,0} for p = 0..dim-1, with the face-sum cross-check recorded."""

    values: tuple
    by_face_sum: tuple
    polytope_dim: int

    @property
    def agree(self):
        return self.values == self.by_face_sum


def _face_data(p: LatticePolytope):
    """(index set, dim, interior count, vertex count) for every face."""
    sets = p._face_index_sets()
    cells = {}
    for f, d in sets.items():
        cell = LatticePolytope._trusted(p.ambient_dim, [p.vertices[i] for i in sorted(f)])
        cells[f] = (d, cell.n_interior_points(), len(f))
    return cells


def _e_open_from_faces(face_items, sub, sub_dim, p):
    """e^{p,0} of the open hypersurface piece attached to the face `sub`."""
    sign = -1 if (sub_dim - 1) % 2 else 1
    if p == 0:
        edges = sum(
            interior
            for f, (d, interior, _nv) in face_items
            if d == 1 and f <= sub
        )
        nverts = sum(1 for f, (d, _i, _nv) in face_items if d == 0 and f <= sub)
        return sign * (edges + nverts - 1)
    total = sum(
        interior for f, (d, interior, _nv) in face_items if d == p + 1 and f <= sub
    )
    return sign * total


def e_p0_open(p: LatticePolytope, degree: int) -> int:
    """Signed interior-count sum over (degree+1)-faces; vertex-corrected at degree 0."""
    q, _ = p.normalize_full_dimensional()
    n = q.dim()
    if not 0 <= degree <= n - 1:
        raise DegenerateInputError(f"degree {degree} out of range 0..{n - 1}")
    faces = _face_data(q)
    full = next(f for f, (d, _i, _nv) in faces.items() if d == n)
    return _e_open_from_faces(list(faces.items()), full, n, degree)


def h_p0_compact(p: LatticePolytope) -> HodgeRow:
    """The row h^{p,0} of the compact section, by closed form and by face sum.

    The face sum adds the open invariant of every torus orbit piece; the
    star of each intermediate face is contractible, so everything except
    the top interior count cancels.  Both routes are computed and must
    agree, which pins the sign conventions exactly.
    """
    q, _ = p.normalize_full_dimensional()
    m = q.dim()  # = n + 1
    if m < 2:
        raise DegenerateInputError("the compact row needs dimension at least 2")
    n = m - 1
    closed = [0] * m
    closed[0] = 1
    closed[n] = q.n_interior_points()
    faces = list(_face_data(q).items())
    by_sum = []
    for deg in range(m):
        e = sum(
            _e_open_from_faces(faces, f, d, deg) for f, (d, _i, _nv) in faces
        )
        by_sum.append(e if deg % 2 == 0 else -e)
    return HodgeRow(tuple(closed), tuple(by_sum), m)


@dataclass(frozen=True)
class Dim3RationalityReport:
    rational: bool
    fine_interior_empty: bool
    genus: int | None  # face-sum h^{1,0} when dim = 3


def rational_dim3_test(p: LatticePolytope) -> Dim3RationalityReport:
    """Rationality of the section for dim <= 3: exactly when the Fine interior is empty.

    In dimension 3 the section is a surface ruled over a curve whose genus
    is h^{1,0}; the face sum must report genus zero, which is recorded as a
    consistency check.
    """
    q, _ = p.normalize_full_dimensional()
    d = q.dim()
    if d > 3:
        raise DegenerateInputError("this rationality rule only applies up to dimension 3")
    if d == 0:
        return Dim3RationalityReport(True, True, None)
    empty = fine_interior(q).is_empty
    genus = None
    if d == 3:
        row = h_p0_compact(q)
        genus = row.by_face_sum[1]
    return Dim3RationalityReport(empty, empty, genus)
