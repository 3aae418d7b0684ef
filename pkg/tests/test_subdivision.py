import random
from fractions import Fraction

import pytest

from sbvol.errors import DegenerateInputError
from sbvol.polytope import RationalPolytope, dilate, hull
from sbvol.subdivision import (
    distance_height,
    height_function,
    interior_cells,
    make_subdivision,
    min_squared_distance,
    pulling_refinement,
    regular_subdivision,
    staged_distance_height,
    validate,
)


def simplex(n):
    return hull([tuple([0] * n)] + [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)])


class TestRegularSubdivision:
    def test_trivial(self):
        p = dilate(simplex(3), 4)
        s = regular_subdivision(p, height_function(p, lambda v: 0))
        assert s.maximal_cells == (p,)
        assert validate(s).ok
        assert [c.dim() for c in interior_cells(s)] == [3]

    def test_cut_plane(self):
        p = dilate(simplex(3), 4)
        s = regular_subdivision(p, height_function(p, lambda v: abs(v[0] + v[1] + 2 * v[2] - 4)))
        assert len(s.maximal_cells) == 2
        cells = {c.vertices for c in s.maximal_cells}
        assert ((0, 0, 0), (0, 0, 2), (0, 4, 0), (4, 0, 0)) in cells
        assert ((0, 0, 2), (0, 0, 4), (0, 4, 0), (4, 0, 0)) in cells
        assert validate(s).ok
        inter = interior_cells(s)
        tri = [c for c in inter if c.dim() == 2]
        assert len(tri) == 1
        assert tri[0].vertices == ((0, 0, 2), (0, 4, 0), (4, 0, 0))
        assert tri[0].n_interior_points() == 1

    def test_square_lift(self):
        p = hull([(0, 0), (1, 0), (0, 1), (1, 1)])
        heights = {(0, 0): 0, (1, 0): 0, (0, 1): 0, (1, 1): 1}
        s = regular_subdivision(p, heights)
        assert len(s.maximal_cells) == 2
        assert all(len(c.vertices) == 3 for c in s.maximal_cells)

    def test_missing_height(self):
        p = dilate(simplex(2), 2)
        with pytest.raises(DegenerateInputError):
            regular_subdivision(p, {(0, 0): 0})

    def test_signed_interior_count(self):
        rng = random.Random(41)
        for _ in range(15):
            d = rng.choice([2, 3])
            p = hull([tuple(rng.randint(0, 3) for _ in range(d)) for _ in range(d + 3)])
            if p.dim() != d:
                continue
            heights = {x: rng.randint(0, 5) for x in p.lattice_points()}
            s = regular_subdivision(p, heights)
            assert validate(s).ok
            signed = sum((-1) ** c.dim() for c in interior_cells(s))
            assert signed == (-1) ** d


class TestPulling:
    def test_square_center(self):
        p = hull([(0, 0), (2, 0), (0, 2), (2, 2)])
        s = regular_subdivision(p, height_function(p, lambda v: 0))
        s2 = pulling_refinement(s, (1, 1))
        assert len(s2.maximal_cells) == 4
        assert validate(s2).ok

    def test_vertex_pull_is_trivial_on_simplex(self):
        p = dilate(simplex(2), 3)
        s = regular_subdivision(p, height_function(p, lambda v: 0))
        s2 = pulling_refinement(s, (0, 0))
        assert s2.maximal_cells == s.maximal_cells

    def test_interior_pull(self):
        p = dilate(simplex(2), 3)
        s = regular_subdivision(p, height_function(p, lambda v: 0))
        s2 = pulling_refinement(s, (1, 1))
        assert len(s2.maximal_cells) == 3
        for c in s2.maximal_cells:
            assert (1, 1) in c.vertices

    def test_pull_outside_raises(self):
        p = simplex(2)
        s = regular_subdivision(p, height_function(p, lambda v: 0))
        with pytest.raises(DegenerateInputError):
            pulling_refinement(s, (5, 5))

    def test_pulling_preserves_regularity(self):
        rng = random.Random(42)
        p = hull([(0, 0), (3, 0), (0, 3), (3, 3)])
        s = regular_subdivision(p, height_function(p, lambda v: 0))
        for point in [(1, 1), (2, 2), (3, 0)]:
            s = pulling_refinement(s, point)
            assert validate(s).ok


class TestDistanceHeights:
    def test_zero_on_target(self):
        p = dilate(simplex(2), 3)
        delta = hull([(1, 1)])
        h = distance_height(p, delta)
        assert h[(1, 1)] == 0
        assert all(v > 0 for k, v in h.items() if k != (1, 1))

    def test_segment_distances(self):
        h = distance_height(hull([(0,), (3,)]), hull([(0,)]))
        assert [h[(k,)] for k in range(4)] == [0, 1, 4, 9]

    def test_edge_projection(self):
        p = hull([(0, 0), (1, 0), (0, 1), (1, 1)])
        h = distance_height(p, hull([(0, 0), (1, 0)]))
        assert h[(1, 1)] == 1 and h[(0, 1)] == 1

    def test_fractional_projection(self):
        # nearest point to (1, 1) on the segment from (0, 0) to (2, 1)
        seg = hull([(0, 0), (2, 1)])
        assert min_squared_distance(seg, (1, 1)) == Fraction(1, 5)

    def test_not_contained_raises(self):
        with pytest.raises(DegenerateInputError):
            distance_height(simplex(2), hull([(5, 5)]))


class TestStagedDistance:
    def test_zero_stages_equal_plain(self):
        p = dilate(simplex(2), 3)
        delta = hull([(1, 1)])
        assert staged_distance_height(p, delta) == distance_height(p, delta)

    def test_double_cone_figure(self):
        octa = hull([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)])
        delta = hull([(-1, 0, 0), (1, 0, 0)])
        slice1 = RationalPolytope(
            3,
            [(n, Fraction(c)) for n, c in octa.facet_system()]
            + [((0, 1, 0), Fraction(0)), ((0, -1, 0), Fraction(0))],
        )
        h = staged_distance_height(octa, delta, [octa, slice1])
        s = regular_subdivision(octa, h)
        assert validate(s).ok
        assert len(s.maximal_cells) == 4
        assert any(c == delta for c in s.cells)
        for c in s.maximal_cells:
            assert all(c.contains(v) for v in delta.vertices)
            assert c.lattice_width()[0] == 1

    def test_inconsistent_chain(self):
        p = dilate(simplex(2), 3)
        with pytest.raises(DegenerateInputError):
            staged_distance_height(p, hull([(1, 1)]), [hull([(0, 0), (1, 0)])])


class TestValidation:
    def test_overlapping_cells_fail_cover(self):
        p = hull([(0, 0), (2, 0), (0, 2), (2, 2)])
        a = hull([(0, 0), (2, 0), (0, 2), (2, 2)])
        b = hull([(0, 0), (2, 0), (2, 2)])
        s = make_subdivision(p, [a, b])
        rep = validate(s)
        assert not rep.ok
        assert any(name == "cover" and not ok for name, ok, _ in rep.checks)

    def test_t_joint_fails_face_condition(self):
        p = hull([(0, 0), (2, 0), (0, 2), (2, 2)])
        a = hull([(0, 0), (2, 0), (0, 1), (2, 1)])
        b = hull([(0, 1), (1, 1), (0, 2), (1, 2)])
        c = hull([(1, 1), (2, 1), (1, 2), (2, 2)])
        s = make_subdivision(p, [a, b, c])
        rep = validate(s)
        assert not rep.ok
        assert any(name == "pairwise_faces" and not ok for name, ok, _ in rep.checks)

    def test_figure_subdivision_valid(self):
        p = dilate(simplex(3), 4)
        s = regular_subdivision(p, height_function(p, lambda v: abs(v[0] + v[1] + 2 * v[2] - 4)))
        rep = validate(s)
        assert rep.ok
        assert all(ok for _, ok, _ in rep.checks)
