import itertools
import random

from sbvol.conditionm import (
    check_condition_m,
    cross_check_unrestricted,
    sections_of_class,
    strong_variation_certificate,
)
from sbvol.families import builtin_seed_registry, hpt, tpq
from sbvol.polytope import dilate, hull
from sbvol.toric import normal_fan


def simplex(n):
    return hull([tuple([0] * n)] + [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)])


def match_up_to_permutation(got, expected):
    n = len(expected[0])
    got_set = set(got)
    expected_set = set(expected)
    for perm in itertools.permutations(range(n)):
        if {tuple(w[j] for j in perm) for w in got_set} == expected_set:
            return True
    return False


class TestConditionM:
    def test_hpt_holds(self):
        rep = check_condition_m(hpt())
        assert rep.holds
        group = rep.group
        for i, w in enumerate(rep.witnesses):
            assert w[i] >= 1
            assert all(x in (0, 1) for x in w)
            assert group.degree(w) == group.ample_class()

    def test_dilated_simplex_threshold(self):
        # reduced mode needs d distinct variables among n+1
        for n in (2, 3, 4):
            for d in range(1, n + 3):
                rep = check_condition_m(dilate(simplex(n), d))
                assert rep.holds == (d <= n + 1), (n, d)

    def test_singular_empty_simplex_fails(self):
        rep = check_condition_m(tpq(1, 2))
        assert not rep.holds

    def test_unimodular_simplex_holds(self):
        rep = check_condition_m(simplex(3))
        assert rep.holds

    def test_unrestricted_dilated_simplex_always(self):
        for d in (1, 3, 6):
            rep = check_condition_m(dilate(simplex(3), d), mode="unrestricted")
            assert rep.holds

    def test_reduced_implies_unrestricted(self):
        rng = random.Random(31)
        done = 0
        while done < 10:
            dim = rng.choice([2, 3])
            p = hull([tuple(rng.randint(0, 2) for _ in range(dim)) for _ in range(dim + 2)])
            if p.dim() != dim:
                continue
            r1 = check_condition_m(p, mode="reduced")
            r2 = check_condition_m(p, mode="unrestricted")
            if r1.holds:
                assert r2.holds
            done += 1


class TestSections:
    def test_hpt_sections_are_the_twelve_monomials(self):
        expected = [
            (2, 0, 0, 0, 0, 0),
            (0, 4, 0, 0, 0, 0),
            (0, 0, 2, 0, 0, 0),
            (0, 0, 0, 4, 0, 0),
            (0, 0, 0, 0, 4, 0),
            (0, 0, 0, 0, 0, 2),
            (1, 1, 0, 1, 0, 0),
            (0, 0, 0, 1, 1, 1),
            (0, 1, 1, 0, 1, 0),
            (0, 2, 0, 0, 2, 0),
            (0, 0, 0, 2, 2, 0),
            (0, 2, 0, 2, 0, 0),
        ]
        p = hpt()
        fan = normal_fan(p)
        secs = sections_of_class(p, fan.ample_coefficients(), fan)
        assert len(secs) == 12
        assert match_up_to_permutation([w for _, w in secs], expected)

    def test_zero_divisor_single_section(self):
        p = dilate(simplex(2), 3)
        fan = normal_fan(p)
        secs = sections_of_class(p, [0] * fan.n_rays, fan)
        assert len(secs) == 1
        assert secs[0][0] == (0, 0)

    def test_non_simplicial_example(self):
        expected = [
            (0, 0, 0, 0, 1, 2),
            (0, 0, 1, 1, 0, 1),
            (1, 1, 0, 0, 1, 0),
            (0, 1, 0, 2, 0, 0),
            (1, 0, 2, 0, 0, 0),
        ]
        p = hull([(0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)])
        fan = normal_fan(p)
        assert fan.n_rays == 6
        secs = sections_of_class(p, fan.ample_coefficients(), fan)
        assert len(secs) == 5
        assert match_up_to_permutation([w for _, w in secs], expected)
        rep = check_condition_m(p)
        assert rep.holds

    def test_non_fano_example_condition_m(self):
        p = hull([(1, 0, 0), (0, 1, 0), (2, 0, 0), (0, 2, 0), (1, 2, 0), (2, 1, 0), (-6, -6, 2)])
        assert check_condition_m(p).holds


class TestCrossCheck:
    def test_dilated_simplices(self):
        for d in (1, 2, 4):
            p = dilate(simplex(3), d)
            fan = normal_fan(p)
            for i in range(fan.n_rays):
                res = cross_check_unrestricted(p, i, fan)
                assert res.agree and res.exists_by_polytope

    def test_hpt_agrees(self):
        p = hpt()
        fan = normal_fan(p)
        for i in range(fan.n_rays):
            assert cross_check_unrestricted(p, i, fan).agree

    def test_singular_simplex_agrees(self):
        p = tpq(1, 2)
        fan = normal_fan(p)
        for i in range(fan.n_rays):
            assert cross_check_unrestricted(p, i, fan).agree


class TestDefinitionChase:
    def test_sections_match_shifted_polytope_for_smooth(self):
        from sbvol.toric import facet_shift

        for d in (2, 4, 6):
            p = dilate(simplex(3), d)
            fan = normal_fan(p)
            ample = fan.ample_coefficients()
            for i in range(fan.n_rays):
                shifted = facet_shift(p, i, fan)
                assert shifted.is_lattice()
                coeffs = list(ample)
                coeffs[i] -= 1
                secs = sections_of_class(p, coeffs, fan)
                assert (len(secs) > 0) == (len(shifted.lattice_points()) > 0)


class TestStrongVariation:
    def test_hpt_condition_m_route(self):
        seeds = builtin_seed_registry()
        cert = strong_variation_certificate(hpt(), seeds)
        assert cert.tag == "condition_m"

    def test_unique_interior_point(self):
        cert = strong_variation_certificate(dilate(simplex(3), 4))
        assert cert.tag == "unique_interior_point"
        assert cert.detail == (1, 1, 1)

    def test_many_interior_points(self):
        cert = strong_variation_certificate(dilate(simplex(2), 4))
        assert cert.tag == "has_interior_points"

    def test_no_certificate_for_rational(self):
        cert = strong_variation_certificate(dilate(simplex(2), 2))
        assert cert.tag == "none"
        assert not cert.certifies
