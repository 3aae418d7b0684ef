"""The toric layer: normal fans, Hilbert bases, Fine interiors, class groups.

All computations are exact.  The central objects are the inward normal fan
of a full-dimensional lattice polytope and the divisor class group
presented as the cokernel of the ray pairing matrix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from . import dd
from .errors import (
    DegenerateInputError,
    DimensionMismatchError,
    ResourceLimitError,
    UnsupportedInputError,
)
from .intlinalg import (
    det,
    dot,
    invert_unimodular,
    mat_vec,
    primitive,
    rank,
    smith_form,
    solve_rational,
)
from .polytope import LatticePolytope, RationalPolytope, _floor_fraction


@dataclass(frozen=True)
class RationalCone:
    """cone(generators) with cached facet data; generators are primitive."""

    dim: int
    generators: tuple

    @staticmethod
    def from_generators(gens):
        gens = tuple(sorted(set(primitive(g) for g in gens if any(g))))
        if not gens:
            raise DegenerateInputError("cone needs at least one nonzero generator")
        return RationalCone(len(gens[0]), gens)

    def facet_data(self):
        """(inequalities, span equations) cutting the cone out of its ambient space."""
        return dd.cone_facets(self.generators, self.dim)

    def rank(self) -> int:
        return rank([list(g) for g in self.generators])

    def is_pointed(self) -> bool:
        normals, _ = self.facet_data()
        return rank([list(n) for n in normals]) == self.rank()

    def contains(self, x) -> bool:
        normals, equations = self.facet_data()
        return all(dot(n, x) >= 0 for n in normals) and all(
            dot(e, x) == 0 for e in equations
        )


@dataclass(frozen=True)
class NormalFan:
    """Inward normal fan of a full-dimensional lattice polytope."""

    polytope: LatticePolytope
    rays: tuple  # primitive inner facet normals, one per facet
    offsets: tuple  # ord values: min over the polytope of <., ray>
    vertex_cones: tuple  # per vertex, frozenset of ray indices tight at it

    @property
    def n_rays(self):
        return len(self.rays)

    def ample_coefficients(self):
        """Coefficients of the distinguished ample divisor: a_ray = -ord(ray)."""
        return tuple(-c for c in self.offsets)

    def vertex_cone(self, i) -> RationalCone:
        return RationalCone.from_generators([self.rays[j] for j in sorted(self.vertex_cones[i])])


def normal_fan(p: LatticePolytope) -> NormalFan:
    if not p.is_full_dimensional():
        raise DegenerateInputError("normal fan requires a full-dimensional polytope")
    if p.dim() == 0:
        raise DegenerateInputError("normal fan of a point is empty")
    system = p.facet_system()
    rays = tuple(n for n, _ in system)
    offsets = tuple(c for _, c in system)
    cones = []
    for v in p.vertices:
        cones.append(frozenset(i for i, (n, c) in enumerate(system) if dot(n, v) == c))
    return NormalFan(p, rays, offsets, tuple(cones))


def ord_value(p: LatticePolytope, n) -> int:
    """min over the polytope of the pairing with the dual vector n."""
    return min(dot(v, n) for v in p.vertices)


# -- Hilbert bases ---------------------------------------------------------------


def _triangulate_cone(rays, dim):
    """Split a pointed cone into simplicial subcones on the same ray set."""
    r = rank([list(g) for g in rays])
    if len(rays) == r:
        return [list(rays)]
    normals, _ = dd.cone_facets(rays, dim)
    r0 = rays[0]
    out = []
    for n in normals:
        if dot(n, r0) == 0:
            continue
        frays = [g for g in rays if dot(n, g) == 0]
        for t in _triangulate_cone(frays, dim):
            out.append(t + [r0])
    return out


def _fundamental_parallelepiped(gens, dim):
    """Lattice points of {sum t_i g_i : 0 <= t_i < 1} for independent generators."""
    d = len(gens)
    if d == dim:
        basis_cols = [list(col) for col in zip(*gens)]
        reps = _group_representatives(basis_cols)
        m_cols = basis_cols
    else:
        # Chart the span onto Z^d first (the span lattice is saturated).
        from .intlinalg import integer_kernel

        eqs = integer_kernel([list(g) for g in gens])
        basis = integer_kernel([list(e) for e in eqs]) if eqs else []
        coords = []
        for g in gens:
            sol = solve_rational([list(col) for col in zip(*basis)], [Fraction(x) for x in g])
            coords.append([int(x) for x in sol])
        m_cols = [list(col) for col in zip(*coords)]
        reps = _group_representatives(m_cols)
        reps = [tuple(sum(basis[k][j] * r[k] for k in range(d)) for j in range(dim)) for r in reps]
        basis_cols = None
    out = set()
    gen_cols = [list(col) for col in zip(*gens)]
    for x in reps:
        lam = solve_rational(gen_cols, [Fraction(v) for v in x])
        shift = [_floor_fraction(t) for t in lam]
        pt = tuple(
            x[j] - sum(shift[i] * gens[i][j] for i in range(d)) for j in range(dim)
        )
        out.add(pt)
    return out


def _group_representatives(m_cols):
    """Coset representatives of Z^d / (column lattice of m_cols)."""
    d = len(m_cols)
    sd = smith_form(m_cols)
    diag = [sd.s[i][i] for i in range(d)]
    u_inv = invert_unimodular([list(r) for r in sd.u])
    reps = []
    for combo in itertools.product(*(range(max(abs(x), 1)) for x in diag)):
        reps.append(mat_vec(u_inv, combo))
    return reps


def hilbert_basis(cone: RationalCone):
    """The unique minimal generating set of cone intersect the lattice.

    Triangulates into simplicial subcones, collects fundamental
    parallelepiped points, then extracts the irreducible elements by a
    greedy pass in increasing order of a strictly positive functional.
    """
    if not cone.is_pointed():
        raise UnsupportedInputError("Hilbert basis requires a pointed cone")
    normals, equations = cone.facet_data()
    candidates = set(cone.generators)
    for sub in _triangulate_cone(list(cone.generators), cone.dim):
        for p in _fundamental_parallelepiped(sub, cone.dim):
            if any(x != 0 for x in p):
                candidates.add(p)

    def member(x):
        return all(dot(n, x) >= 0 for n in normals) and all(dot(e, x) == 0 for e in equations)

    def phi(x):
        return sum(dot(n, x) for n in normals)

    basis = []
    for c in sorted(candidates, key=lambda x: (phi(x), x)):
        reducible = False
        for b in basis:
            diff = tuple(a - t for a, t in zip(c, b))
            if member(diff):
                reducible = True
                break
        if not reducible:
            basis.append(c)
    return tuple(sorted(basis))


# -- Fine interior -----------------------------------------------------------------


@dataclass(frozen=True)
class FineInteriorResult:
    polytope: RationalPolytope
    is_empty: bool
    dim: int  # -1 when empty
    is_lattice: bool
    generators: tuple  # dual vectors whose shifted halfspaces cut the interior

    def vertices(self):
        return self.polytope.vertices()


def _ceil_div(a, b):
    return -((-a) // b)


def _scan_region(constraints, lo, hi, limit, budget):
    """Nonzero lattice points with a . n >= c for every (a, c), inside the box.

    Exact branch and bound: at each level the feasible interval for the
    next coordinate is recomputed from the fixed prefix and interval bounds
    on the remaining suffix.  Collects at most `limit` points and stops at
    the node budget; returns (points, complete) where complete means the
    whole region was exhausted.
    """
    d = len(lo)
    suf_min = []
    suf_max = []
    for a, _ in constraints:
        mins = [0] * (d + 1)
        maxs = [0] * (d + 1)
        for j in range(d - 1, -1, -1):
            x, y = a[j] * lo[j], a[j] * hi[j]
            mins[j] = mins[j + 1] + min(x, y)
            maxs[j] = maxs[j + 1] + max(x, y)
        suf_min.append(mins)
        suf_max.append(maxs)
    out = []
    nodes = 0
    stopped = False

    def rec(j, partials, prefix):
        nonlocal nodes, stopped
        nodes += 1
        if nodes > budget or len(out) >= limit:
            stopped = True
            return
        if j == d:
            if any(prefix):
                out.append(tuple(prefix))
            return
        lo_j, hi_j = lo[j], hi[j]
        for idx, (a, c) in enumerate(constraints):
            aj = a[j]
            rhs = c - partials[idx] - suf_max[idx][j + 1]
            if aj > 0:
                lo_j = max(lo_j, _ceil_div(rhs, aj))
            elif aj < 0:
                hi_j = min(hi_j, rhs // aj)
            elif rhs > 0:
                return
        for x in range(lo_j, hi_j + 1):
            if stopped:
                return
            rec(
                j + 1,
                [pr + a[j] * x for pr, (a, _) in zip(partials, constraints)],
                prefix + [x],
            )

    rec(0, [0] * len(constraints), [])
    return out, not stopped


def _subcone_scan_frame(tri, d):
    """Scan data for one simplicial subcone: a coordinate change making the
    ray matrix lower-triangular with large pivots early, membership
    constraints in the new coordinates, and the slab bounding box."""
    from .intlinalg import hermite_form, invert_unimodular

    best = None
    perms = (
        itertools.permutations(range(d)) if d <= 6 else [tuple(range(d))]
    )
    for perm in perms:
        cols = [[tri[perm[j]][k] for j in range(d)] for k in range(d)]
        h, u0 = hermite_form(cols)
        piv = [abs(h[j][j]) for j in range(d)]
        score = 0
        prod = 1
        for k in range(d - 1):
            prod *= max(piv[d - 1 - k], 1)
            score += prod
        if best is None or score < best[0]:
            best = (score, u0)
    u0 = best[1]
    u = [list(r) for r in reversed(u0)]  # flip rows: structured-zero ray matrix
    uinv = invert_unimodular(u)
    new_rays = [tuple(sum(u[i][k] * r[k] for k in range(d)) for i in range(d)) for r in tri]
    # t_j >= 0 in t = M^{-1} n' needs the ROWS of M^{-1}: solve against M^T.
    cols_t = [[r[k] for k in range(d)] for r in new_rays]  # M^T: row j is ray j
    det_m = det(cols_t)
    tcons = []
    for jj in range(d):
        rhs = [Fraction(1) if kk == jj else Fraction(0) for kk in range(d)]
        sol = solve_rational(cols_t, rhs)
        row = tuple(int(x * det_m) for x in sol)
        sign = 1 if det_m > 0 else -1
        tcons.append((tuple(sign * x for x in row), 0))
    lo = [sum(min(0, r[k]) for r in new_rays) for k in range(d)]
    hi = [sum(max(0, r[k]) for r in new_rays) for k in range(d)]
    return {"u": u, "uinv": uinv, "tcons": tcons, "lo": lo, "hi": hi, "rays": new_rays}


def fine_interior(
    p: LatticePolytope, fan: NormalFan | None = None, budget=50_000_000
) -> FineInteriorResult:
    """Intersection of all supporting halfspaces shifted inward by one.

    Strategy: start from the facet normals and iterate.  If m satisfies the
    shifted facet inequalities at a vertex v, then for any dual vector
    n = sum t_j u_j in the normal cone at v with sum t_j >= 1 the shifted
    inequality for n follows by superadditivity.  So only dual vectors
    under the ray-sum-one slab of some vertex cone can cut further; those
    violating the current candidate are found by exact branch and bound
    and added until none remain.  The final generator set is therefore a
    certified cutting description of the Fine interior.
    """
    if fan is None:
        fan = normal_fan(p)
    d = p.ambient_dim
    halfspaces = {u: c + 1 for u, c in zip(fan.rays, fan.offsets)}

    frames = []  # (vertex, rays, scan frame) per simplicial vertex subcone
    for i, v in enumerate(p.vertices):
        cone_rays = [fan.rays[j] for j in sorted(fan.vertex_cones[i])]
        for tri in _triangulate_cone(cone_rays, d):
            frames.append((v, tuple(tri), _subcone_scan_frame(tri, d)))

    def scan_pass(verts, per_scan_budget):
        """(violators, complete) over every (vertex cone, candidate vertex) pair."""
        found = set()
        complete = True
        for v, rays, fr in frames:
            u, uinv, tcons = fr["u"], fr["uinv"], fr["tcons"]
            new_rays = fr["rays"]
            for q in verts:
                diff = [Fraction(a) - b for a, b in zip(q, v)]
                c_vals = [sum(x * y for x, y in zip(diff, r)) for r in rays]
                assert all(c >= 1 for c in c_vals)
                m = lcm(*(x.denominator for x in diff))
                a = [int(m * (bv - qv)) for qv, bv in zip(q, v)]  # m (v - q)
                a_t = tuple(
                    sum(a[k] * uinv[k][j] for k in range(d)) for j in range(d)
                )
                cons = tcons + [(a_t, 1 - m)]
                # The region satisfies t_j <= 1/c_j, so the slab box shrinks
                # with the pairing against the current candidate vertex.
                lo = []
                hi = []
                for k in range(d):
                    lo_k = sum(min(0, Fraction(r[k]) / c) for r, c in zip(new_rays, c_vals))
                    hi_k = sum(max(0, Fraction(r[k]) / c) for r, c in zip(new_rays, c_vals))
                    lo.append(max(fr["lo"][k], int(_ceil_div(lo_k.numerator, lo_k.denominator))))
                    hi.append(min(fr["hi"][k], hi_k.numerator // hi_k.denominator))
                pts, full = _scan_region(
                    cons, lo, hi, limit=4, budget=per_scan_budget
                )
                complete = complete and full
                for n_t in pts:
                    n = tuple(sum(uinv[k][j] * n_t[j] for j in range(d)) for k in range(d))
                    assert ord_value(p, n) == dot(v, n)  # n lies in this normal cone
                    assert sum(df * nn for df, nn in zip(diff, n)) < 1
                    found.add(primitive(n))
        return found, complete

    spent = 0
    while spent <= budget:
        poly = RationalPolytope(
            p.ambient_dim, [(u, Fraction(c)) for u, c in halfspaces.items()]
        )
        verts = poly.vertices()
        if not verts:
            return FineInteriorResult(poly, True, -1, False, tuple(sorted(halfspaces)))
        # Cheap pass first: capped scans still find violators early; the
        # exhaustive pass runs only when a cheap pass comes back clean.
        found, complete = scan_pass(verts, per_scan_budget=20_000)
        spent += 20_000
        if not found and not complete:
            found, complete = scan_pass(verts, per_scan_budget=budget)
            spent += budget // 10
        new = [n for n in found if n not in halfspaces]
        if not new:
            if not complete:
                raise ResourceLimitError("fine interior scans exceeded their budget")
            return FineInteriorResult(
                poly, False, poly.dim(), poly.is_lattice(), tuple(sorted(halfspaces))
            )
        for n in new:
            halfspaces[n] = ord_value(p, n) + 1
    raise ResourceLimitError("fine interior iteration did not stabilize")


def kodaira_dimension(p: LatticePolytope, fi: FineInteriorResult | None = None):
    """-inf when the Fine interior is empty, else its dim, less one at full dim."""
    if p.dim() < 1:
        raise DegenerateInputError("Kodaira dimension needs a positive-dimensional polytope")
    if fi is None:
        q, _ = p.normalize_full_dimensional()
        fi = fine_interior(q)
    if fi.is_empty:
        return float("-inf")
    if fi.dim == p.dim():
        return fi.dim - 1
    return fi.dim


def is_general_type(p: LatticePolytope) -> bool:
    return kodaira_dimension(p) == p.dim() - 1


# -- smoothness ---------------------------------------------------------------------


@dataclass(frozen=True)
class SmoothnessReport:
    overall: bool
    per_vertex: tuple  # (vertex, is_simple, is_smooth)


def is_smooth(p: LatticePolytope) -> SmoothnessReport:
    """Vertex-by-vertex test: primitive edge directions must form a lattice basis."""
    if not p.is_full_dimensional():
        raise DegenerateInputError("smoothness test requires a full-dimensional polytope")
    d = p.dim()
    edges = p.faces(1)
    rows = []
    for v in p.vertices:
        dirs = []
        for e in edges:
            if v in e.vertices:
                w = e.vertices[0] if e.vertices[1] == v else e.vertices[1]
                dirs.append(primitive(tuple(a - b for a, b in zip(w, v))))
        simple = len(dirs) == d
        smooth = simple and abs(det([list(x) for x in dirs])) == 1
        rows.append((v, simple, smooth))
    return SmoothnessReport(all(r[2] for r in rows), tuple(rows))


# -- divisors and the class group ------------------------------------------------------


def divisor_polytope(fan: NormalFan, coefficients) -> RationalPolytope:
    """P_D = {m : <m, u_ray> + a_ray >= 0} for D = sum a_ray D_ray."""
    if len(coefficients) != fan.n_rays:
        raise DimensionMismatchError(
            f"divisor has {len(coefficients)} coefficients, fan has {fan.n_rays} rays"
        )
    halfspaces = [(u, Fraction(-a)) for u, a in zip(fan.rays, coefficients)]
    return RationalPolytope(fan.polytope.ambient_dim, halfspaces)


def facet_shift(p: LatticePolytope, ray_index: int, fan: NormalFan | None = None) -> RationalPolytope:
    """Shift the supporting halfspace of one facet inward by one, keep the rest."""
    if fan is None:
        fan = normal_fan(p)
    if not 0 <= ray_index < fan.n_rays:
        raise DegenerateInputError(f"no ray with index {ray_index}")
    coeffs = list(fan.ample_coefficients())
    coeffs[ray_index] -= 1
    return divisor_polytope(fan, coeffs)


@dataclass(frozen=True)
class ClassElement:
    """An element of a group Z^free x prod Z/d_i, stored per presentation."""

    free: tuple
    torsion: tuple

    def is_zero(self):
        return all(x == 0 for x in self.free) and all(x == 0 for x in self.torsion)


@dataclass(frozen=True)
class DivisorClassGroup:
    """Cokernel of the ray pairing matrix m -> (<m, u_ray>)_ray.

    Presented through a Smith decomposition: classes carry a free part in
    Z^free_rank and residues modulo the invariant factors > 1.
    """

    fan: NormalFan
    u_matrix: tuple  # unimodular, rows transform divisor vectors
    torsion_moduli: tuple  # invariant factors > 1, in divisibility order
    torsion_positions: tuple
    free_positions: tuple

    @property
    def free_rank(self):
        return len(self.free_positions)

    @property
    def invariant_factors(self):
        return self.torsion_moduli

    def degree(self, coefficients) -> ClassElement:
        if len(coefficients) != self.fan.n_rays:
            raise DegenerateInputError("coefficient vector length must match the ray count")
        t = mat_vec([list(r) for r in self.u_matrix], coefficients)
        tor = tuple(t[i] % m for i, m in zip(self.torsion_positions, self.torsion_moduli))
        free = tuple(t[i] for i in self.free_positions)
        return ClassElement(free, tor)

    def ray_degree(self, i) -> ClassElement:
        e = [0] * self.fan.n_rays
        e[i] = 1
        return self.degree(e)

    def ample_class(self) -> ClassElement:
        return self.degree(self.fan.ample_coefficients())

    def describe(self):
        """(free_rank, invariant factors) in the canonical order."""
        return (self.free_rank, self.torsion_moduli)


def class_group(p: LatticePolytope, fan: NormalFan | None = None) -> DivisorClassGroup:
    if fan is None:
        fan = normal_fan(p)
    pairing = [list(u) for u in fan.rays]  # rays x dim
    sd = smith_form(pairing)
    r = len(pairing[0])
    diag = [sd.s[i][i] for i in range(min(len(pairing), r))]
    assert all(d != 0 for d in diag), "pairing matrix must have full column rank"
    torsion_positions = tuple(i for i, d in enumerate(diag) if d > 1)
    torsion_moduli = tuple(diag[i] for i in torsion_positions)
    free_positions = tuple(range(len(diag), len(pairing)))
    return DivisorClassGroup(
        fan=fan,
        u_matrix=sd.u,
        torsion_moduli=torsion_moduli,
        torsion_positions=torsion_positions,
        free_positions=free_positions,
    )


def divisor_class(group: DivisorClassGroup, coefficients) -> ClassElement:
    return group.degree(coefficients)
