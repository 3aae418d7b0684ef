import pytest

from sbvol.errors import DegenerateInputError, SubdivisionError
from sbvol.families import builtin_seed_registry, hpt, kollar_totaro
from sbvol.ledger import (
    SeedRegistry,
    classify_cell,
    dim4_pipeline,
    find_unobstructed_subdivision,
    verdict,
    volume_ledger,
)
from sbvol.polytope import dilate, hull
from sbvol.subdivision import (
    height_function,
    make_subdivision,
    pulling_refinement,
    regular_subdivision,
)


def simplex(n):
    return hull([tuple([0] * n)] + [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)])


def triangulate_fully(p):
    s = regular_subdivision(p, height_function(p, lambda v: 0))
    for point in p.lattice_points():
        cells_with = [c for c in s.maximal_cells if c.contains(point)]
        if len(cells_with) == 1 and point in cells_with[0].vertices:
            continue
        s = pulling_refinement(s, point)
    return s


class TestClassify:
    def test_width_one(self):
        cell = hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])
        tag = classify_cell(cell)
        assert tag.kind == "rational"

    def test_dim_at_most_one(self):
        assert classify_cell(hull([(0, 0)])).kind == "rational"
        assert classify_cell(hull([(0, 0), (3, 0)])).kind == "rational"

    def test_empty_fine_interior_dim3(self):
        cell = hull([(0, 0, 0), (0, 0, 2), (0, 4, 0), (4, 0, 0)])
        tag = classify_cell(cell)
        assert tag.kind == "rational"
        assert "fine interior" in tag.justification

    def test_seed_match(self):
        seeds = builtin_seed_registry()
        tag = classify_cell(hpt(), seeds)
        assert tag.kind == "seed"
        assert tag.seed_name == "hpt"
        assert tag.strongly_varying  # condition (M) is recorded for this seed

    def test_interior_points(self):
        tag = classify_cell(dilate(simplex(3), 4))
        assert tag.kind == "strongly_varying"
        assert "unique" in tag.justification

    def test_unknown(self):
        tag = classify_cell(kollar_totaro(4, 4))
        assert tag.kind == "unknown"


class TestSeedRegistry:
    def test_rejects_provably_rational(self):
        reg = SeedRegistry()
        with pytest.raises(DegenerateInputError):
            reg.register("bad", dilate(simplex(2), 2), "not really")

    def test_match_up_to_equivalence(self):
        from sbvol.polytope import translate

        reg = builtin_seed_registry()
        assert reg.match(translate(hpt(), (1, 2, 3, 4, 5))) is not None
        assert reg.match(dilate(simplex(3), 4)) is None


class TestVolumeLedger:
    def test_figure_ledger(self):
        p = dilate(simplex(3), 4)
        s = regular_subdivision(p, height_function(p, lambda v: abs(v[0] + v[1] + 2 * v[2] - 4)))
        led = volume_ledger(p, s)
        assert led.point_coefficient == 2
        assert len(led.entries) == 1
        entry = led.entries[0]
        assert entry.coefficient == -1
        assert entry.tag.kind == "strongly_varying"
        assert verdict(led).status == "obstructed"

    def test_unimodular_triangulation_unobstructed(self):
        p = dilate(simplex(2), 2)
        led = volume_ledger(p, triangulate_fully(p))
        assert led.is_point_form()
        assert verdict(led).status == "unobstructed"

    def test_trivial_width_one(self):
        p = hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])
        s = regular_subdivision(p, height_function(p, lambda v: 0))
        led = volume_ledger(p, s)
        assert led.is_point_form()

    def test_segment_multiplicities(self):
        # cutting the 2x2 square along a diagonal with an interior lattice point
        p = hull([(0, 0), (2, 0), (0, 2), (2, 2)])
        s = regular_subdivision(p, height_function(p, lambda v: abs(v[0] - v[1])))
        led = volume_ledger(p, s)
        # two hollow triangles (+1 each), diagonal with one interior point (-2)
        assert led.point_coefficient == 0
        assert not led.entries
        assert verdict(led).status == "obstructed"

    def test_refusing_invalid(self):
        p = hull([(0, 0), (2, 0), (0, 2), (2, 2)])
        bad = make_subdivision(p, [hull([(0, 0), (2, 0), (0, 2)])])
        with pytest.raises(SubdivisionError):
            volume_ledger(p, bad)

    def test_refinement_of_rational_cells_keeps_verdict(self):
        p = dilate(simplex(3), 4)
        s = regular_subdivision(p, height_function(p, lambda v: abs(v[0] + v[1] + 2 * v[2] - 4)))
        v1 = verdict(volume_ledger(p, s))
        s2 = pulling_refinement(s, (1, 0, 0))  # refine inside a rational cell
        v2 = verdict(volume_ledger(p, s2))
        assert v1.status == v2.status == "obstructed"


class TestVerdict:
    def test_inconclusive_with_unknowns(self):
        p = kollar_totaro(4, 4)
        s = regular_subdivision(p, height_function(p, lambda v: 0))
        led = volume_ledger(p, s)
        assert led.entries and led.entries[0].tag.kind == "unknown"
        assert verdict(led).status == "inconclusive"

    def test_seed_same_sign_obstructs(self):
        seeds = builtin_seed_registry()
        p = kollar_totaro(4, 4)
        seeds.register("kt44-local", p, "registered for this test")
        s = regular_subdivision(p, height_function(p, lambda v: 0))
        led = volume_ledger(p, s, seeds)
        assert verdict(led).status == "obstructed"


class TestDim4Pipeline:
    def seeds_with_kt34(self):
        reg = builtin_seed_registry()
        reg.register("double-cover-3-4", kollar_totaro(3, 4), "double cover bound")
        return reg

    def test_obstructed(self):
        reg = self.seeds_with_kt34()
        res = dim4_pipeline(dilate(simplex(4), 4), kollar_totaro(3, 4), reg)
        assert res.verdict.status == "obstructed"
        assert not res.kodaira_shortcut
        assert res.ledger is not None
        seed_entries = [e for e in res.ledger.entries if e.tag.kind == "seed"]
        assert seed_entries and seed_entries[0].coefficient >= 1

    def test_kodaira_shortcut(self):
        reg = builtin_seed_registry()
        p = dilate(simplex(3), 4)
        reg.register("quartic-demo", p, "interior point demo")
        res = dim4_pipeline(p, p, reg)
        assert res.verdict.status == "obstructed"
        assert res.kodaira_shortcut

    def test_boundary_hypothesis(self):
        reg = self.seeds_with_kt34()
        small = kollar_totaro(3, 4)
        # embed the seed inside a facet of a bigger polytope: hypothesis fails
        big = hull(
            [v + (0,) for v in dilate(simplex(4), 4).vertices]
            + [(0, 0, 0, 0, 1)]
        )
        with pytest.raises(DegenerateInputError):
            dim4_pipeline(big, hull([v + (0,) for v in small.vertices]), reg)

    def test_dimension_hypothesis(self):
        reg = builtin_seed_registry()
        with pytest.raises(DegenerateInputError):
            dim4_pipeline(dilate(simplex(5), 4), kollar_totaro(4, 4), reg)

    def test_unregistered_seed(self):
        reg = builtin_seed_registry()
        with pytest.raises(DegenerateInputError):
            dim4_pipeline(dilate(simplex(4), 4), kollar_totaro(3, 4), reg)


class TestUnobstructedSearch:
    def test_width_one_polytope(self):
        p = hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])
        assert find_unobstructed_subdivision(p) is not None

    def test_rational_two_dim(self):
        assert find_unobstructed_subdivision(dilate(simplex(2), 2)) is not None

    def test_elliptic_curve_has_none(self):
        assert find_unobstructed_subdivision(dilate(simplex(2), 3)) is None
