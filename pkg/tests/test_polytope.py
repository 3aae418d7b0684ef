import itertools
import random
from fractions import Fraction
from math import comb

import pytest

from sbvol.errors import DegenerateInputError, DimensionMismatchError
from sbvol.polytope import (
    AffineUnimodularMap,
    cartesian_product,
    convex_union,
    dilate,
    hull,
    polytope_algebra,
    translate,
    unimodular_equivalence,
)


def simplex(n):
    return hull([tuple([0] * n)] + [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)])


def box_scan_points(p):
    """Oracle: plain bounding-box scan with halfspace membership, no pruning."""
    q, ch = p.normalize_full_dimensional()
    if q.dim() == 0:
        return sorted(p.vertices)
    lo = [min(v[i] for v in q.vertices) for i in range(q.ambient_dim)]
    hi = [max(v[i] for v in q.vertices) for i in range(q.ambient_dim)]
    out = []
    for x in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if all(sum(a * b for a, b in zip(n, x)) >= c for n, c in q.facet_system()):
            out.append(tuple(int(v) for v in ch.from_chart(x)))
    return sorted(out)


def brute_width(p, radius=None):
    """Oracle: enumerate all dual vectors in a cube and take the minimum spread."""
    q, _ = p.normalize_full_dimensional()
    d = q.ambient_dim
    if radius is None:
        radius = min(
            max(v[j] for v in q.vertices) - min(v[j] for v in q.vertices) for j in range(d)
        )
    best = None
    for l in itertools.product(range(-radius, radius + 1), repeat=d):
        if all(x == 0 for x in l):
            continue
        vals = [sum(a * b for a, b in zip(l, v)) for v in q.vertices]
        best = min(best, max(vals) - min(vals)) if best is not None else max(vals) - min(vals)
    return best


class TestHull:
    def test_square_with_center(self):
        p = hull([(0, 0), (1, 0), (0, 1), (1, 1), (0, 0)])
        assert p.vertices == ((0, 0), (0, 1), (1, 0), (1, 1))

    def test_hpt_generators(self):
        pts = [
            (0, 0, 0, 0, 0),
            (2, 0, 0, 0, 0),
            (0, 2, 0, 0, 0),
            (0, 1, 2, 0, 0),
            (1, 0, 0, 2, 0),
            (1, 1, 0, 0, 2),
        ]
        p = hull(pts)
        assert len(p.vertices) == 6
        assert p.dim() == 5

    def test_collinear(self):
        p = hull([(0, 0), (1, 0), (2, 0)])
        assert p.vertices == ((0, 0), (2, 0))
        assert p.dim() == 1

    def test_mixed_dimensions(self):
        with pytest.raises(DimensionMismatchError):
            hull([(0, 0), (1, 0, 0)])

    def test_empty(self):
        with pytest.raises(DegenerateInputError):
            hull([])

    def test_vertex_recovery(self):
        rng = random.Random(11)
        for _ in range(15):
            d = rng.choice([2, 3])
            p = hull([tuple(rng.randint(0, 3) for _ in range(d)) for _ in range(d + 3)])
            assert hull(p.lattice_points()) == p


class TestFacets:
    def test_dilated_simplex(self):
        p = dilate(simplex(3), 4)
        sys = p.facet_system()
        assert ((1, 0, 0), 0) in sys and ((0, 1, 0), 0) in sys and ((0, 0, 1), 0) in sys
        assert ((-1, -1, -1), -4) in sys
        assert len(sys) == 4
        assert sorted(c for _, c in sys) == [-4, 0, 0, 0]

    def test_segment(self):
        p = hull([(0,), (5,)])
        assert p.facet_system() == (((-1,), -5), ((1,), 0))

    def test_lower_dimensional_raises(self):
        p = hull([(0, 0), (1, 1)])
        with pytest.raises(DegenerateInputError):
            p.facet_system()


class TestLatticePoints:
    def test_interior_of_4_simplex(self):
        p = dilate(simplex(3), 4)
        assert p.lattice_points(interior_only=True) == ((1, 1, 1),)

    def test_interior_binomial(self):
        p = dilate(simplex(3), 5)
        assert len(p.lattice_points(interior_only=True)) == comb(4, 3)

    def test_empty_simplex_points(self):
        p = hull([(0, 0, 0), (1, 0, 0), (0, 0, 1), (1, 2, 1)])
        assert set(p.lattice_points()) == set(p.vertices)

    def test_against_box_scan(self):
        rng = random.Random(12)
        for _ in range(20):
            d = rng.choice([2, 3])
            p = hull([tuple(rng.randint(-2, 3) for _ in range(d)) for _ in range(d + 3)])
            assert list(p.lattice_points()) == box_scan_points(p)

    def test_lower_dimensional_points(self):
        p = hull([(0, 0), (2, 2)])
        assert p.lattice_points() == ((0, 0), (1, 1), (2, 2))


class TestFaces:
    def test_square_edges(self):
        p = hull([(0, 0), (1, 0), (0, 1), (1, 1)])
        assert len(p.faces(1)) == 4

    def test_4_simplex_facets(self):
        p = dilate(simplex(3), 4)
        assert len(p.faces(2)) == 4

    def test_simplex_counts(self):
        for n in range(2, 6):
            p = simplex(n)
            for k in range(n + 1):
                assert len(p.faces(k)) == comb(n + 1, k + 1)

    def test_euler_relation(self):
        rng = random.Random(13)
        for _ in range(10):
            d = rng.choice([2, 3])
            p = hull([tuple(rng.randint(0, 3) for _ in range(d)) for _ in range(d + 3)])
            total = sum((-1) ** k * len(p.faces(k)) for k in range(p.dim() + 1))
            assert total == 1  # ball


class TestWidth:
    def test_tpq_width_one(self):
        p = hull([(0, 0, 0), (1, 0, 0), (0, 0, 1), (3, 7, 1)])
        w, cert = p.lattice_width()
        assert w == 1
        vals = [sum(a * b for a, b in zip(cert, v)) for v in p.vertices]
        assert max(vals) - min(vals) == 1

    def test_dilated_simplex(self):
        for d, n in [(2, 2), (3, 2), (4, 3), (6, 5)]:
            w, cert = dilate(simplex(n), d).lattice_width()
            assert w == d

    def test_unit_segment(self):
        assert hull([(0,), (1,)]).lattice_width()[0] == 1

    def test_point_raises(self):
        with pytest.raises(DegenerateInputError):
            hull([(3, 4)]).lattice_width()

    def test_against_brute_force(self):
        rng = random.Random(14)
        for _ in range(15):
            d = rng.choice([2, 3])
            p = hull([tuple(rng.randint(0, 4) for _ in range(d)) for _ in range(d + 3)])
            if p.dim() == 0:
                continue
            assert p.lattice_width()[0] == brute_width(p)


class TestNormalize:
    def test_planar_triangle_in_3d(self):
        p = hull([(0, 0, 0), (1, 0, 0), (0, 1, 0)])
        q, ch = p.normalize_full_dimensional()
        assert q.ambient_dim == 2
        assert q.normalized_volume() == 1

    def test_skew_segment(self):
        p = hull([(0, 0), (2, 2)])
        q, _ = p.normalize_full_dimensional()
        assert q.vertices == ((0,), (2,))
        assert q.lattice_width()[0] == 2
        assert p.n_lattice_points() == 3

    def test_full_dimensional_identity(self):
        p = simplex(3)
        q, ch = p.normalize_full_dimensional()
        assert q == p
        assert ch.is_identity()


class TestClassify:
    def test_kollar_totaro_4_4(self):
        p = hull(
            [(2, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 3, 1, 0, 0), (0, 0, 3, 1, 0), (0, 0, 0, 3, 1), (0, 0, 0, 0, 3)]
        )
        c = p.classify()
        assert c.is_empty_simplex

    def test_wide_empty_simplex(self):
        p = hull([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (6, 14, 17, 65)])
        assert p.classify().is_empty_simplex

    def test_3_simplex_not_hollow(self):
        c = dilate(simplex(2), 3).classify()
        assert not c.is_hollow

    def test_implication_chain_on_simplices(self):
        rng = random.Random(15)
        seen = 0
        while seen < 20:
            d = rng.choice([2, 3])
            pts = [tuple(rng.randint(0, 3) for _ in range(d)) for _ in range(d + 1)]
            p = hull(pts)
            if p.dim() != d or not p.is_simplex():
                continue
            c = p.classify()
            if c.is_empty_simplex:
                assert c.is_relatively_empty
            if c.is_relatively_empty:
                assert c.is_hollow
            seen += 1


class TestEquivalence:
    def test_translate(self):
        p = hull([(0, 0), (3, 1), (1, 2), (0, 1)])
        q = translate(p, (1, 0))
        res = unimodular_equivalence(p, q)
        assert res.found
        assert res.ambient_map.linear == ((1, 0), (0, 1))
        assert res.ambient_map.translation == (1, 0)

    def test_cut_cells(self):
        red = hull([(0, 0, 0), (0, 0, 2), (0, 4, 0), (4, 0, 0)])
        blue = hull([(0, 0, 2), (0, 0, 4), (4, 0, 0), (0, 4, 0)])
        res = unimodular_equivalence(red, blue)
        assert res.found
        assert res.ambient_map.apply_polytope(red) == blue
        # the explicit witness from the construction also works
        m = AffineUnimodularMap(((1, 0, 0), (0, 1, 0), (-1, -1, -1)), (0, 0, 4))
        assert m.apply_polytope(red) == blue
        # symmetric
        assert unimodular_equivalence(blue, red).found

    def test_inequivalent_by_counts(self):
        t2 = dilate(simplex(2), 2)
        square = hull([(0, 0), (1, 0), (0, 1), (1, 1)])
        assert unimodular_equivalence(t2, square).status == "inequivalent"

    def test_found_preserves_invariants(self):
        rng = random.Random(16)
        for _ in range(10):
            p = hull([tuple(rng.randint(0, 3) for _ in range(2)) for _ in range(5)])
            if p.dim() != 2:
                continue
            m = AffineUnimodularMap(((1, 1), (0, 1)), (2, -1))
            q = m.apply_polytope(p)
            res = unimodular_equivalence(p, q)
            assert res.found
            assert p.fingerprint() == q.fingerprint()


class TestAlgebra:
    def test_dilate(self):
        assert dilate(simplex(2), 4) == hull([(0, 0), (4, 0), (0, 4)])

    def test_product_counts(self):
        p = cartesian_product(dilate(simplex(3), 2), dilate(simplex(4), 3))
        assert p.dim() == 7
        assert len(p.vertices) == 20

    def test_product_facets_match_direct_hull(self):
        p = cartesian_product(dilate(simplex(2), 2), hull([(0,), (3,)]))
        direct = hull(p.vertices)
        assert set(p.facet_system()) == set(direct.facet_system())

    def test_union_contains(self):
        p = simplex(2)
        q = translate(p, (2, 0))
        u = convex_union(p, q)
        for v in list(p.vertices) + list(q.vertices):
            assert u.contains(v)

    def test_dispatcher(self):
        assert polytope_algebra("dilate", simplex(2), 2) == dilate(simplex(2), 2)
        with pytest.raises(DegenerateInputError):
            polytope_algebra("nope", simplex(2))


class TestInvariants:
    def test_width_invariance_under_maps(self):
        rng = random.Random(17)
        p = dilate(simplex(2), 3)
        for _ in range(20):
            lin = [[1, 0], [0, 1]]
            for _ in range(4):
                i, j = rng.randrange(2), rng.randrange(2)
                if i != j:
                    c = rng.choice([-1, 1])
                    for k in range(2):
                        lin[i][k] += c * lin[j][k]
            m = AffineUnimodularMap(tuple(tuple(r) for r in lin), (rng.randint(-2, 2), rng.randint(-2, 2)))
            assert m.apply_polytope(p).lattice_width()[0] == p.lattice_width()[0]

    def test_vertex_count_below_point_count(self):
        rng = random.Random(18)
        for _ in range(10):
            p = hull([tuple(rng.randint(0, 3) for _ in range(3)) for _ in range(6)])
            assert len(p.vertices) <= p.n_lattice_points()

    def test_volume_normalized(self):
        assert dilate(simplex(2), 2).normalized_volume() == 4
        assert simplex(3).volume() == Fraction(1, 6)
