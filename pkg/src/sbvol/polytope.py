"""Exact lattice polytopes: hulls, faces, lattice points, width, classification.

A LatticePolytope stores exactly its extreme points (sorted); everything
else (facets, faces, lattice points, width) is derived on demand and
cached.  Lower-dimensional polytopes are handled by chart-normalizing onto
the saturated lattice of their affine span, so counts, widths and interior
points always refer to the intrinsic lattice structure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import dd
from .errors import (
    DegenerateInputError,
    DimensionMismatchError,
    ResourceLimitError,
)
from .intlinalg import (
    det,
    dot,
    integer_kernel,
    rank,
    solve_rational,
)

DEFAULT_POINT_BUDGET = 5_000_000
DEFAULT_FACE_BUDGET = 120_000


def _as_int_tuple(p):
    t = tuple(p)
    for x in t:
        if not isinstance(x, int):
            if isinstance(x, Fraction) and x.denominator == 1:
                continue
            raise DegenerateInputError(f"lattice point expected, got {p!r}")
    return tuple(int(x) for x in t)


@dataclass(frozen=True)
class AffineChart:
    """Exact isomorphism between the affine lattice of a span and Z^dim."""

    ambient_dim: int
    dim: int
    base: tuple
    basis: tuple  # rows, each an ambient integer vector
    _pinv: tuple = field(repr=False, default=())  # Fraction rows, dim x ambient

    @staticmethod
    def identity(n):
        eye = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        pinv = tuple(tuple(Fraction(x) for x in row) for row in eye)
        return AffineChart(n, n, tuple([0] * n), eye, pinv)

    @staticmethod
    def for_points(points):
        """Chart of the affine span of integer points, base at the first point."""
        base = points[0]
        n = len(base)
        diffs = [tuple(x - y for x, y in zip(p, base)) for p in points[1:]]
        diffs = [d for d in diffs if any(d)]
        if not diffs:
            return AffineChart(n, 0, tuple(base), (), ())
        d = rank([list(v) for v in diffs])
        if d == n:
            return AffineChart.identity(n)._rebase(tuple(base))
        equations = integer_kernel([list(v) for v in diffs])
        basis = integer_kernel([list(e) for e in equations])
        assert len(basis) == d
        b = [list(v) for v in basis]
        bbt = [[dot(r1, r2) for r2 in b] for r1 in b]
        rows = []
        for i in range(d):
            rhs = [Fraction(1) if j == i else Fraction(0) for j in range(d)]
            sol = solve_rational(bbt, rhs)
            rows.append(sol)
        pinv = tuple(
            tuple(sum(rows[i][k] * Fraction(b[k][j]) for k in range(d)) for j in range(n))
            for i in range(d)
        )
        return AffineChart(n, d, tuple(base), tuple(tuple(v) for v in basis), pinv)

    def _rebase(self, base):
        return AffineChart(self.ambient_dim, self.dim, base, self.basis, self._pinv)

    def is_identity(self):
        return self.dim == self.ambient_dim and all(x == 0 for x in self.base)

    def to_chart(self, x):
        """Chart coordinates of an ambient point; exact, raises off the span."""
        if self.is_identity():
            return tuple(x)
        diff = tuple(Fraction(a) - b for a, b in zip(x, self.base))
        lam = tuple(sum(row[j] * diff[j] for j in range(self.ambient_dim)) for row in self._pinv)
        back = self.from_chart(lam)
        if tuple(Fraction(v) for v in back) != tuple(Fraction(a) for a in x):
            raise DegenerateInputError(f"point {x!r} is not in the affine span")
        return tuple(int(v) if v.denominator == 1 else v for v in lam)

    def from_chart(self, y):
        if self.is_identity():
            return tuple(y)
        out = list(self.base)
        vals = [Fraction(v) for v in out]
        for coeff, row in zip(y, self.basis):
            for j in range(self.ambient_dim):
                vals[j] += Fraction(coeff) * row[j]
        return tuple(int(v) if v.denominator == 1 else v for v in vals)


@dataclass(frozen=True)
class PolytopeClassification:
    is_empty_polytope: bool
    is_empty_simplex: bool
    is_hollow: bool
    relatively_empty_facets: tuple

    @property
    def is_relatively_empty(self):
        return len(self.relatively_empty_facets) > 0


@dataclass(frozen=True)
class AffineUnimodularMap:
    """x -> linear @ x + translation with |det linear| = 1."""

    linear: tuple
    translation: tuple

    def __post_init__(self):
        if abs(det([list(r) for r in self.linear])) != 1:
            raise DegenerateInputError("linear part is not unimodular")

    @staticmethod
    def identity(n):
        return AffineUnimodularMap(
            tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)),
            tuple([0] * n),
        )

    @staticmethod
    def from_pre_translation(linear, shift):
        """The map x -> linear @ (x + shift)."""
        linear = tuple(tuple(r) for r in linear)
        b = tuple(sum(r[j] * shift[j] for j in range(len(shift))) for r in linear)
        return AffineUnimodularMap(linear, b)

    @property
    def dim(self):
        return len(self.translation)

    def apply(self, x):
        return tuple(dot(r, x) + t for r, t in zip(self.linear, self.translation))

    def apply_polytope(self, p: "LatticePolytope") -> "LatticePolytope":
        if p.ambient_dim != self.dim:
            raise DimensionMismatchError("map and polytope dimensions differ")
        return LatticePolytope._trusted(self.dim, sorted(self.apply(v) for v in p.vertices))

    def inverse(self):
        from .intlinalg import invert_unimodular

        inv = invert_unimodular([list(r) for r in self.linear])
        new_t = tuple(-dot(r, self.translation) for r in inv)
        return AffineUnimodularMap(tuple(tuple(r) for r in inv), new_t)

    def compose(self, other):
        """self after other: x -> self(other(x))."""
        from .intlinalg import mat_mul

        lin = mat_mul([list(r) for r in self.linear], [list(r) for r in other.linear])
        t = self.apply(other.translation)
        return AffineUnimodularMap(tuple(tuple(r) for r in lin), t)


class LatticePolytope:
    """Convex hull of finitely many lattice points, stored by vertex set."""

    __slots__ = ("ambient_dim", "vertices", "_cache")

    def __init__(self, points):
        built = hull(points)
        object.__setattr__(self, "ambient_dim", built.ambient_dim)
        object.__setattr__(self, "vertices", built.vertices)
        object.__setattr__(self, "_cache", built._cache)

    @staticmethod
    def _trusted(ambient_dim, vertices):
        p = object.__new__(LatticePolytope)
        object.__setattr__(p, "ambient_dim", ambient_dim)
        object.__setattr__(p, "vertices", tuple(tuple(v) for v in sorted(vertices)))
        object.__setattr__(p, "_cache", {})
        return p

    def __setattr__(self, name, value):
        raise AttributeError("LatticePolytope is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, LatticePolytope)
            and self.ambient_dim == other.ambient_dim
            and self.vertices == other.vertices
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.vertices))

    def __repr__(self):
        return f"LatticePolytope(dim {self.dim()} in Z^{self.ambient_dim}, {len(self.vertices)} vertices)"

    # -- basic geometry ----------------------------------------------------

    def dim(self) -> int:
        if "dim" not in self._cache:
            v0 = self.vertices[0]
            diffs = [[x - y for x, y in zip(v, v0)] for v in self.vertices[1:]]
            self._cache["dim"] = rank(diffs) if diffs else 0
        return self._cache["dim"]

    def is_full_dimensional(self) -> bool:
        return self.dim() == self.ambient_dim

    def is_simplex(self) -> bool:
        return len(self.vertices) == self.dim() + 1

    def chart(self) -> AffineChart:
        if "chart" not in self._cache:
            if self.is_full_dimensional():
                self._cache["chart"] = AffineChart.identity(self.ambient_dim)
            else:
                self._cache["chart"] = AffineChart.for_points(self.vertices)
        return self._cache["chart"]

    def normalize_full_dimensional(self):
        """(P', chart) with P' the same polytope in the lattice of its span."""
        if self.is_full_dimensional():
            return self, self.chart()
        ch = self.chart()
        verts = sorted(ch.to_chart(v) for v in self.vertices)
        q = LatticePolytope._trusted(ch.dim, verts)
        return q, ch

    def facet_system(self):
        """Tuple of (primitive inner normal, offset) with <n, x> >= offset tight on facets."""
        if "facets" not in self._cache:
            if not self.is_full_dimensional():
                raise DegenerateInputError(
                    "facet system requires a full-dimensional polytope; normalize first"
                )
            if self.dim() == 0:
                self._cache["facets"] = ()
            else:
                self._cache["facets"] = tuple(dd.facet_normals_from_points(self.vertices))
        return self._cache["facets"]

    def as_halfspaces(self) -> "RationalPolytope":
        sys = self.facet_system()
        return RationalPolytope(self.ambient_dim, tuple((n, Fraction(c)) for n, c in sys))

    def contains(self, x) -> bool:
        if self.is_full_dimensional():
            return all(
                sum(Fraction(a) * Fraction(b) for a, b in zip(n, x)) >= c
                for n, c in self.facet_system()
            )
        ch = self.chart()
        try:
            y = ch.to_chart(x)
        except DegenerateInputError:
            return False
        q, _ = self.normalize_full_dimensional()
        return q.contains(y)

    # -- lattice points ------------------------------------------------------

    def lattice_points(self, interior_only=False, budget=DEFAULT_POINT_BUDGET):
        """All lattice points, or only those in the relative interior."""
        key = "interior" if interior_only else "points"
        if key not in self._cache:
            q, ch = self.normalize_full_dimensional()
            if q.dim() == 0:
                pts = [()]
            else:
                pts = _enumerate_chart_points(q, interior_only, budget)
            if ch.is_identity():
                out = tuple(sorted(pts))
            else:
                out = tuple(sorted(_as_int_tuple(ch.from_chart(p)) for p in pts))
            self._cache[key] = out
        return self._cache[key]

    def n_lattice_points(self) -> int:
        return len(self.lattice_points())

    def n_interior_points(self) -> int:
        return len(self.lattice_points(interior_only=True))

    # -- faces ---------------------------------------------------------------

    def _face_index_sets(self, budget=DEFAULT_FACE_BUDGET):
        """All nonempty faces as frozensets of indices into self.vertices, with dims."""
        if "face_sets" not in self._cache:
            q, ch = self.normalize_full_dimensional()
            cverts = [_as_int_tuple(ch.to_chart(v)) for v in self.vertices]
            nv = len(cverts)
            full = frozenset(range(nv))
            if q.dim() == 0:
                self._cache["face_sets"] = {full: 0}
                return self._cache["face_sets"]
            tight = []
            for n, c in q.facet_system():
                tight.append(frozenset(i for i, v in enumerate(cverts) if dot(n, v) == c))
            faces = face_closure(full, tight, budget=budget)
            dims = {}
            for f in faces:
                pts = [cverts[i] for i in sorted(f)]
                v0 = pts[0]
                diffs = [[a - b for a, b in zip(p, v0)] for p in pts[1:]]
                dims[f] = rank(diffs) if diffs else 0
            self._cache["face_sets"] = dims
        return self._cache["face_sets"]

    def faces(self, k=None):
        """All k-faces as LatticePolytopes (all faces grouped by dim when k is None)."""
        dims = self._face_index_sets()
        by_dim = {}
        for f, d in sorted(dims.items(), key=lambda kv: (kv[1], sorted(kv[0]))):
            cell = LatticePolytope._trusted(
                self.ambient_dim, [self.vertices[i] for i in sorted(f)]
            )
            by_dim.setdefault(d, []).append(cell)
        if k is None:
            return by_dim
        if k < 0 or k > self.dim():
            raise DegenerateInputError(f"face dimension {k} out of range 0..{self.dim()}")
        return by_dim.get(k, [])

    def f_vector(self):
        dims = self._face_index_sets()
        out = [0] * (self.dim() + 1)
        for _, d in dims.items():
            out[d] += 1
        return tuple(out)

    # -- invariants ------------------------------------------------------------

    def volume(self) -> Fraction:
        """Euclidean volume inside the lattice of the span (exact)."""
        return Fraction(self.normalized_volume(), _factorial(self.dim()))

    def normalized_volume(self) -> int:
        """dim! times the volume; an integer, 0 only for points."""
        if "nvol" not in self._cache:
            q, _ = self.normalize_full_dimensional()
            if q.dim() == 0:
                self._cache["nvol"] = 0
            else:
                total = 0
                for s in _triangulate_full(list(q.vertices)):
                    v0 = s[0]
                    m = [[a - b for a, b in zip(p, v0)] for p in s[1:]]
                    total += abs(det(m))
                self._cache["nvol"] = total
        return self._cache["nvol"]

    def lattice_width(self):
        """(width, certificate) with the certificate a primitive chart dual vector."""
        if "width" not in self._cache:
            if self.dim() == 0:
                raise DegenerateInputError("width of a single point is undefined here")
            q, _ = self.normalize_full_dimensional()
            self._cache["width"] = _width_search(q)
        return self._cache["width"]

    def classify(self, budget=DEFAULT_POINT_BUDGET) -> PolytopeClassification:
        if "classify" not in self._cache:
            pts = set(self.lattice_points(budget=budget))
            verts = set(self.vertices)
            empty = pts == verts
            simplex = empty and len(self.vertices) == self.dim() + 1
            if self.dim() == 0:
                hollow = False
                rel = ()
            else:
                hollow = self.n_interior_points() == 0
                rel = []
                for idx, facet in enumerate(self.faces(self.dim() - 1)):
                    outside = len(pts) - facet.n_lattice_points()
                    if outside == 1:
                        rel.append(idx)
                rel = tuple(rel)
            self._cache["classify"] = PolytopeClassification(empty, simplex, hollow, rel)
        return self._cache["classify"]

    def fingerprint(self):
        """Unimodular-invariant summary used to screen equivalence candidates."""
        if "fingerprint" not in self._cache:
            d = self.dim()
            base = (
                d,
                len(self.vertices),
                self.n_lattice_points(),
                self.n_interior_points(),
                self.normalized_volume(),
            )
            extras = []
            if d >= 1:
                extras.append(self.lattice_width()[0])
            if len(self.vertices) <= 16:
                extras.append(self.f_vector())
            self._cache["fingerprint"] = base + tuple(extras)
        return self._cache["fingerprint"]


class RationalPolytope:
    """Intersection of halfspaces <a, x> >= c with integer a and rational c."""

    __slots__ = ("ambient_dim", "halfspaces", "_cache")

    def __init__(self, ambient_dim, halfspaces):
        object.__setattr__(self, "ambient_dim", ambient_dim)
        cleaned = []
        for a, c in halfspaces:
            a = tuple(int(x) for x in a)
            c = Fraction(c)
            g = 0
            for x in a:
                g = gcd(g, abs(x))
            if g == 0:
                if c > 0:
                    raise DegenerateInputError("halfspace 0 >= c with c > 0 is infeasible")
                continue
            if g > 1:
                a = tuple(x // g for x in a)
                c = c / g
            cleaned.append((a, c))
        object.__setattr__(self, "halfspaces", tuple(sorted(set(cleaned))))
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("RationalPolytope is immutable")

    def __repr__(self):
        return f"RationalPolytope({len(self.halfspaces)} halfspaces in Q^{self.ambient_dim})"

    def vertices(self):
        if "vertices" not in self._cache:
            vs = dd.vertices_from_halfspaces(
                [(a, c) for a, c in self.halfspaces], self.ambient_dim
            )
            self._cache["vertices"] = tuple(vs)
        return self._cache["vertices"]

    def is_empty(self) -> bool:
        return len(self.vertices()) == 0

    def dim(self) -> int:
        vs = self.vertices()
        if not vs:
            return -1
        diffs = [[a - b for a, b in zip(v, vs[0])] for v in vs[1:]]
        return rank(diffs) if diffs else 0

    def is_lattice(self) -> bool:
        return all(all(Fraction(x).denominator == 1 for x in v) for v in self.vertices())

    def to_lattice_polytope(self) -> LatticePolytope:
        if self.is_empty():
            raise DegenerateInputError("empty polytope has no lattice model")
        if not self.is_lattice():
            raise DegenerateInputError("polytope has non-integral vertices")
        return LatticePolytope._trusted(
            self.ambient_dim, sorted(tuple(int(x) for x in v) for v in self.vertices())
        )

    def contains(self, x) -> bool:
        return all(
            sum(Fraction(a) * Fraction(b) for a, b in zip(n, x)) >= c
            for n, c in self.halfspaces
        )

    def lattice_points(self, budget=DEFAULT_POINT_BUDGET):
        vs = self.vertices()
        if not vs:
            return ()
        lo = [min(v[i] for v in vs) for i in range(self.ambient_dim)]
        hi = [max(v[i] for v in vs) for i in range(self.ambient_dim)]
        lo = [int(_ceil_fraction(x)) for x in lo]
        hi = [int(_floor_fraction(x)) for x in hi]
        halves = [(n, c) for n, c in self.halfspaces]
        out = []
        count = 0
        for p in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
            count += 1
            if count > budget:
                raise ResourceLimitError("lattice point scan exceeded budget")
            if all(dot(n, p) >= c for n, c in halves):
                out.append(p)
        return tuple(sorted(out))

    def irredundant(self) -> "RationalPolytope":
        """Keep halfspaces tight on a face of dimension dim - 1 (once nonempty)."""
        vs = self.vertices()
        if not vs:
            return self
        d = self.dim()
        keep = []
        for n, c in self.halfspaces:
            tight = [v for v in vs if sum(Fraction(a) * x for a, x in zip(n, v)) == c]
            if not tight:
                continue
            diffs = [[a - b for a, b in zip(v, tight[0])] for v in tight[1:]]
            tdim = rank([[Fraction(x) for x in row] for row in diffs]) if diffs else 0
            if tdim >= d - 1:
                keep.append((n, c))
        return RationalPolytope(self.ambient_dim, keep)


# -- module-level operations ---------------------------------------------------


def hull(points) -> LatticePolytope:
    """Convex hull; vertices are exactly the extreme points of the input."""
    pts = [_as_int_tuple(p) for p in points]
    if not pts:
        raise DegenerateInputError("hull of an empty point set")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise DimensionMismatchError("points live in different ambient dimensions")
    pts = sorted(set(pts))
    if len(pts) == 1:
        return LatticePolytope._trusted(n, pts)
    ch = AffineChart.for_points(pts)
    cpts = [_as_int_tuple(ch.to_chart(p)) for p in pts]
    d = ch.dim
    if d == 0:
        return LatticePolytope._trusted(n, pts[:1])
    facets = dd.facet_normals_from_points(cpts)
    verts = []
    for p, orig in zip(cpts, pts):
        tight = [list(nrm) for nrm, c in facets if dot(nrm, p) == c]
        if tight and rank(tight) == d:
            verts.append(orig)
    out = LatticePolytope._trusted(n, sorted(verts))
    return out


def face_closure(full, tight_sets, budget=DEFAULT_FACE_BUDGET):
    """All nonempty faces as index sets: closure of the tight sets under intersection."""
    faces = {full}
    frontier = [full]
    while frontier:
        nxt = []
        for f in frontier:
            for t in tight_sets:
                g = f & t
                if g and g not in faces:
                    faces.add(g)
                    nxt.append(g)
                    if len(faces) > budget:
                        raise ResourceLimitError("face enumeration exceeded budget")
        frontier = nxt
    return faces


def dilate(p: LatticePolytope, k: int) -> LatticePolytope:
    if k < 0:
        raise DegenerateInputError("dilation factor must be nonnegative")
    if k == 0:
        return LatticePolytope._trusted(p.ambient_dim, [tuple([0] * p.ambient_dim)])
    return LatticePolytope._trusted(p.ambient_dim, [tuple(k * x for x in v) for v in p.vertices])


def translate(p: LatticePolytope, v) -> LatticePolytope:
    v = _as_int_tuple(v)
    if len(v) != p.ambient_dim:
        raise DimensionMismatchError("translation vector has wrong dimension")
    return LatticePolytope._trusted(
        p.ambient_dim, [tuple(a + b for a, b in zip(w, v)) for w in p.vertices]
    )


def cartesian_product(p: LatticePolytope, q: LatticePolytope) -> LatticePolytope:
    verts = [a + b for a in p.vertices for b in q.vertices]
    out = LatticePolytope._trusted(p.ambient_dim + q.ambient_dim, sorted(verts))
    if p.is_full_dimensional() and q.is_full_dimensional() and p.dim() > 0 and q.dim() > 0:
        zeros_q = tuple([0] * q.ambient_dim)
        zeros_p = tuple([0] * p.ambient_dim)
        combined = [(n + zeros_q, c) for n, c in p.facet_system()]
        combined += [(zeros_p + n, c) for n, c in q.facet_system()]
        out._cache["facets"] = tuple(sorted(combined))
    return out


def convex_union(p: LatticePolytope, q: LatticePolytope) -> LatticePolytope:
    if p.ambient_dim != q.ambient_dim:
        raise DimensionMismatchError("convex union needs a common ambient space")
    return hull(list(p.vertices) + list(q.vertices))


def polytope_algebra(op: str, *args):
    ops = {
        "dilate": dilate,
        "translate": translate,
        "product": cartesian_product,
        "convex_union": convex_union,
    }
    if op not in ops:
        raise DegenerateInputError(f"unknown polytope operation {op!r}")
    return ops[op](*args)


@dataclass(frozen=True)
class EquivalenceResult:
    status: str  # "found" | "inequivalent" | "budget"
    chart_map: AffineUnimodularMap | None
    ambient_map: AffineUnimodularMap | None

    @property
    def found(self):
        return self.status == "found"


def unimodular_equivalence(p: LatticePolytope, q: LatticePolytope, budget=200_000):
    """Search for an affine unimodular map with T(p) = q.

    Polytopes are first compared by unimodular-invariant fingerprints
    (definite inequivalence on mismatch), then a vertex-anchored frame
    search runs inside an explicit node budget.  The chart map relates the
    span-normalized polytopes; the ambient map is provided when both inputs
    are full-dimensional in the same ambient space.
    """
    if p.fingerprint() != q.fingerprint():
        return EquivalenceResult("inequivalent", None, None)
    pa, chart_p = p.normalize_full_dimensional()
    qa, chart_q = q.normalize_full_dimensional()
    d = pa.dim()
    if d == 0:
        shift = tuple(a - b for a, b in zip(q.vertices[0], p.vertices[0]))
        m = AffineUnimodularMap.identity(p.ambient_dim)
        amb = AffineUnimodularMap(m.linear, shift) if p.ambient_dim == q.ambient_dim else None
        return EquivalenceResult("found", AffineUnimodularMap.identity(0), amb)

    pv = list(pa.vertices)
    qv = list(qa.vertices)
    v0 = pv[0]
    diffs = [tuple(a - b for a, b in zip(v, v0)) for v in pv[1:]]
    frame_idx = []
    chosen = []
    for i, dvec in enumerate(diffs):
        if rank([list(x) for x in chosen + [dvec]]) == len(chosen) + 1:
            frame_idx.append(i)
            chosen.append(dvec)
        if len(chosen) == d:
            break
    frame = [list(r) for r in chosen]  # rows f_i; row r of A solves F x = (w_j[r])_j

    def tight_count(poly, vert):
        return sum(1 for n, c in poly.facet_system() if dot(n, vert) == c)

    p_counts = [tight_count(pa, pv[1:][i]) for i in frame_idx]
    q_count_of = {w: tight_count(qa, w) for w in qv}
    v0_count = tight_count(pa, v0)

    nodes = 0
    for w0 in qv:
        if q_count_of[w0] != v0_count:
            continue
        cands = [
            [tuple(a - b for a, b in zip(w, w0)) for w in qv if w != w0 and q_count_of[w] == pc]
            for pc in p_counts
        ]

        def search(depth, picked):
            nonlocal nodes
            if depth == d:
                nodes += 1
                if nodes > budget:
                    raise ResourceLimitError
                a_rows = []
                for r in range(d):
                    rhs = [Fraction(picked[j][r]) for j in range(d)]
                    sol = solve_rational(frame, rhs)
                    if sol is None or any(x.denominator != 1 for x in sol):
                        return None
                    a_rows.append([int(x) for x in sol])
                if abs(det(a_rows)) != 1:
                    return None
                lin = tuple(tuple(r) for r in a_rows)
                trans = tuple(w - dot(r, v0) for w, r in zip(w0, lin))
                m = AffineUnimodularMap(lin, trans)
                if sorted(m.apply(v) for v in pv) == qv:
                    return m
                return None
            for cand in cands[depth]:
                if rank([list(x) for x in picked + [cand]]) != depth + 1:
                    continue
                got = search(depth + 1, picked + [cand])
                if got is not None:
                    return got
            return None

        try:
            m = search(0, [])
        except ResourceLimitError:
            return EquivalenceResult("budget", None, None)
        if m is not None:
            amb = None
            if (
                chart_p.is_identity()
                and chart_q.is_identity()
                and p.ambient_dim == q.ambient_dim
            ):
                amb = m
            return EquivalenceResult("found", m, amb)
    return EquivalenceResult("inequivalent", None, None)


# -- internal helpers ----------------------------------------------------------


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _ceil_fraction(x):
    x = Fraction(x)
    return -((-x.numerator) // x.denominator)


def _floor_fraction(x):
    x = Fraction(x)
    return x.numerator // x.denominator


def _enumerate_chart_points(q, interior_only, budget):
    """Lattice points of a full-dimensional chart polytope by pruned box scan."""
    facets = q.facet_system()
    d = q.ambient_dim
    lo = [min(v[i] for v in q.vertices) for i in range(d)]
    hi = [max(v[i] for v in q.vertices) for i in range(d)]
    # suffix interval bounds per facet: min/max of sum_{j>k} n_j x_j
    suf_min = []
    suf_max = []
    for n, _ in facets:
        mins = [0] * (d + 1)
        maxs = [0] * (d + 1)
        for j in range(d - 1, -1, -1):
            a, b = n[j] * lo[j], n[j] * hi[j]
            mins[j] = mins[j + 1] + min(a, b)
            maxs[j] = maxs[j + 1] + max(a, b)
        suf_min.append(mins)
        suf_max.append(maxs)
    out = []
    count = 0
    partial = [0] * len(facets)

    def rec(j, prefix):
        nonlocal count
        count += 1
        if count > budget:
            raise ResourceLimitError("lattice point enumeration exceeded budget")
        if j == d:
            ok = True
            for idx, (n, c) in enumerate(facets):
                v = partial[idx]
                if interior_only:
                    if v <= c:
                        ok = False
                        break
                elif v < c:
                    ok = False
                    break
            if ok:
                out.append(tuple(prefix))
            return
        for x in range(lo[j], hi[j] + 1):
            feasible = True
            for idx, (n, c) in enumerate(facets):
                partial[idx] += n[j] * x
                bound = partial[idx] + suf_max[idx][j + 1]
                if interior_only:
                    if bound <= c:
                        feasible = False
                else:
                    if bound < c:
                        feasible = False
            if feasible:
                rec(j + 1, prefix + [x])
            for idx, (n, _) in enumerate(facets):
                partial[idx] -= n[j] * x

    rec(0, [])
    return out


def _triangulate_full(points):
    """Triangulate a full-dimensional vertex set into simplices (recursion on facets)."""
    d = len(points[0])
    if len(points) == d + 1:
        return [tuple(points)]
    facets = dd.facet_normals_from_points(points)
    v0 = points[0]
    out = []
    for n, c in facets:
        if dot(n, v0) == c:
            continue
        fpts = sorted(p for p in points if dot(n, p) == c)
        ch = AffineChart.for_points(fpts)
        cf = sorted(_as_int_tuple(ch.to_chart(p)) for p in fpts)
        for s in _triangulate_full(cf):
            out.append(tuple(_as_int_tuple(ch.from_chart(x)) for x in s) + (v0,))
    return out


def _width_search(q):
    """Exact lattice width of a full-dimensional chart polytope.

    Maintains an incumbent (initialized with axis widths) and enumerates
    primitive dual vectors in the box where every direction beating the
    incumbent must live; the box shrinks whenever the incumbent improves.
    """
    d = q.ambient_dim
    verts = q.vertices
    v0 = verts[0]
    diffs = [tuple(a - b for a, b in zip(v, v0)) for v in verts[1:]]
    frame = []
    for dv in diffs:
        if rank([list(x) for x in frame + [dv]]) == len(frame) + 1:
            frame.append(dv)
        if len(frame) == d:
            break
    best = None
    best_l = None
    for j in range(d):
        vals = [v[j] for v in verts]
        w = max(vals) - min(vals)
        if best is None or w < best:
            best = w
            best_l = tuple(1 if i == j else 0 for i in range(d))
    # rows of the inverse of the frame matrix (columns = frame vectors)
    # t_i = <l, f_i> gives t = F l, so l = F^{-1} t and |l_j| is bounded by the
    # L1 norm of row j of F^{-1} times the incumbent width.
    frame_t = [list(col) for col in zip(*frame)]
    inv_rows = []
    for i in range(d):
        rhs = [Fraction(1) if j == i else Fraction(0) for j in range(d)]
        sol = solve_rational(frame_t, rhs)  # (F^T) x = e_i gives row i of F^{-1}
        inv_rows.append(sol)
    norms = [sum(abs(x) for x in row) for row in inv_rows]

    def spread(l):
        vals0 = dot(l, verts[0])
        mn = mx = vals0
        for v in verts[1:]:
            t = dot(l, v)
            if t < mn:
                mn = t
            if t > mx:
                mx = t
            if mx - mn >= best:
                return None
        return mx - mn

    improved = True
    while improved:
        improved = False
        bounds = [int(_floor_fraction(nm * best)) for nm in norms]
        for l in itertools.product(*(range(-b, b + 1) for b in bounds)):
            for x in l:
                if x > 0:
                    break
                if x < 0:
                    l = None
                    break
            if l is None or all(x == 0 for x in l):
                continue
            g = 0
            for x in l:
                g = gcd(g, abs(x))
            if g != 1:
                continue
            if any(abs(dot(l, f)) >= best for f in frame):
                continue
            w = spread(l)
            if w is not None and w < best:
                best = w
                best_l = l
                improved = True
                break
    return best, tuple(best_l)
