"""Condition (M) and monomial section existence on the toric side.

A polytope satisfies condition (M) when every boundary divisor ray carries
a monomial of ample degree vanishing on it.  The default mode restricts to
reduced (square-free) monomials, which is the form the degeneration
arguments actually consume; the unrestricted mode allows arbitrary
exponents and reduces to a lattice-point test on a shifted divisor
polytope.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalConsistencyError, ResourceLimitError
from .intlinalg import dot
from .polytope import LatticePolytope
from .toric import (
    DivisorClassGroup,
    NormalFan,
    class_group,
    divisor_polytope,
    is_smooth,
    normal_fan,
)


@dataclass(frozen=True)
class ConditionMReport:
    holds: bool
    mode: str  # "reduced" | "unrestricted"
    witnesses: tuple  # per ray: exponent tuple over rays, or None
    group: DivisorClassGroup

    def witness_for(self, ray_index):
        return self.witnesses[ray_index]


def _free_prunable_dfs(free_parts, target_free, accept, chosen_cap, budget=2_000_000):
    """Enumerate exponent vectors with per-ray caps hitting an exact free degree.

    free_parts[i] is the free part (tuple) of ray i's class, chosen_cap[i]
    the maximal exponent.  Vectors whose free degree cannot reach the
    target (componentwise interval argument over the remaining rays) are
    pruned.  Each complete vector is passed to accept().
    """
    n = len(free_parts)
    fr = len(target_free)
    suf_min = [[0] * fr for _ in range(n + 1)]
    suf_max = [[0] * fr for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for j in range(fr):
            contrib = free_parts[i][j] * chosen_cap[i]
            lo = min(0, contrib)
            hi = max(0, contrib)
            suf_min[i][j] = suf_min[i + 1][j] + lo
            suf_max[i][j] = suf_max[i + 1][j] + hi
    nodes = 0
    vec = [0] * n

    def rec(i, acc):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise ResourceLimitError("witness enumeration exceeded budget")
        for j in range(fr):
            if not (
                acc[j] + suf_min[i][j] <= target_free[j] <= acc[j] + suf_max[i][j]
            ):
                return
        if i == n:
            accept(tuple(vec))
            return
        fp = free_parts[i]
        for k in range(chosen_cap[i] + 1):
            vec[i] = k
            rec(i + 1, tuple(a + k * f for a, f in zip(acc, fp)))
        vec[i] = 0

    rec(0, tuple([0] * fr))


def reduced_witnesses(group: DivisorClassGroup, budget=2_000_000):
    """All square-free exponent vectors of ample degree, sorted."""
    n = group.fan.n_rays
    degrees = [group.ray_degree(i) for i in range(n)]
    target = group.ample_class()
    moduli = group.torsion_moduli
    found = []

    def accept(vec):
        tor = [0] * len(moduli)
        for i, k in enumerate(vec):
            if k:
                for j in range(len(moduli)):
                    tor[j] = (tor[j] + k * degrees[i].torsion[j]) % moduli[j]
        if tuple(tor) == target.torsion:
            found.append(vec)

    _free_prunable_dfs(
        [d.free for d in degrees], target.free, accept, [1] * n, budget=budget
    )
    return sorted(found)


def check_condition_m(
    p: LatticePolytope,
    mode: str = "reduced",
    fan: NormalFan | None = None,
    group: DivisorClassGroup | None = None,
    budget=2_000_000,
) -> ConditionMReport:
    """Per ray, find a monomial of ample degree whose zero set contains the ray's divisor.

    Reduced mode enumerates square-free exponent vectors exactly, so absence
    is certified.  Unrestricted mode tests the shifted divisor polytope for
    a lattice point, which is equivalent to the existence of an arbitrary
    monomial witness.
    """
    if fan is None:
        fan = normal_fan(p)
    if group is None:
        group = class_group(p, fan)
    n = fan.n_rays
    if mode == "reduced":
        pool = reduced_witnesses(group, budget=budget)
        witnesses = []
        for i in range(n):
            witnesses.append(next((w for w in pool if w[i] >= 1), None))
    elif mode == "unrestricted":
        witnesses = []
        ample = fan.ample_coefficients()
        for i in range(n):
            coeffs = list(ample)
            coeffs[i] -= 1
            pd = divisor_polytope(fan, coeffs)
            pts = pd.lattice_points()
            if not pts:
                witnesses.append(None)
                continue
            m = pts[0]
            w = tuple(dot(m, u) + a for u, a in zip(fan.rays, ample))
            assert w[i] >= 1 and all(x >= 0 for x in w)
            witnesses.append(w)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    report = ConditionMReport(
        holds=all(w is not None for w in witnesses),
        mode=mode,
        witnesses=tuple(witnesses),
        group=group,
    )
    for i, w in enumerate(report.witnesses):
        if w is not None:
            assert w[i] >= 1
            assert group.degree(w) == group.ample_class()
    return report


def sections_of_class(p: LatticePolytope, coefficients, fan: NormalFan | None = None):
    """Torus-invariant sections of the divisor: lattice points of P_D with exponents.

    Returns a sorted list of (lattice point, exponent vector over rays); the
    exponent vector of m is (<m, u_ray> + a_ray)_ray.
    """
    if fan is None:
        fan = normal_fan(p)
    pd = divisor_polytope(fan, coefficients)
    out = []
    for m in pd.lattice_points():
        w = tuple(dot(m, u) + a for u, a in zip(fan.rays, coefficients))
        out.append((m, w))
    return sorted(out)


@dataclass(frozen=True)
class CrossCheckResult:
    ray_index: int
    exists_by_exponents: bool
    exists_by_polytope: bool

    @property
    def agree(self):
        return self.exists_by_exponents == self.exists_by_polytope


def cross_check_unrestricted(
    p: LatticePolytope, ray_index: int, fan: NormalFan | None = None, budget=2_000_000
) -> CrossCheckResult:
    """Two routes to 'an unrestricted witness exists for this ray' must agree.

    Route one enumerates exponent vectors directly, capped by the width of
    the polytope along each ray (any section's exponent lies in that range);
    route two tests the shifted divisor polytope for a lattice point.
    """
    if fan is None:
        fan = normal_fan(p)
    group = class_group(p, fan)
    n = fan.n_rays
    degrees = [group.ray_degree(i) for i in range(n)]
    target = group.ample_class()
    moduli = group.torsion_moduli
    caps = []
    for u, c in zip(fan.rays, fan.offsets):
        caps.append(max(dot(v, u) for v in p.vertices) - c)
    found = []

    def accept(vec):
        if found or vec[ray_index] < 1:
            return
        tor = [0] * len(moduli)
        for i, k in enumerate(vec):
            if k:
                for j in range(len(moduli)):
                    tor[j] = (tor[j] + k * degrees[i].torsion[j]) % moduli[j]
        if tuple(tor) == target.torsion:
            found.append(vec)

    _free_prunable_dfs([d.free for d in degrees], target.free, accept, caps, budget=budget)
    by_exponents = bool(found)

    coeffs = list(fan.ample_coefficients())
    coeffs[ray_index] -= 1
    by_polytope = len(divisor_polytope(fan, coeffs).lattice_points()) > 0

    result = CrossCheckResult(ray_index, by_exponents, by_polytope)
    if not result.agree:
        raise InternalConsistencyError(
            f"ray {ray_index}: exponent search says {by_exponents}, "
            f"divisor polytope says {by_polytope}"
        )
    return result


@dataclass(frozen=True)
class VariationCertificate:
    """Why a polytope's hypersurface class varies strongly, if we can certify it."""

    tag: str  # "unique_interior_point" | "has_interior_points" | "condition_m"
    # | "smooth_unobstructed_shifts" | "none"
    detail: object = None

    @property
    def certifies(self):
        return self.tag != "none"


def strong_variation_certificate(p: LatticePolytope, seeds=None) -> VariationCertificate:
    """Certify strong variation of the stable birational type, when possible.

    Interior lattice points certify unconditionally (the interior monomial
    covers the whole boundary, and nonnegative Kodaira dimension rules out
    stable rationality).  The condition-(M) and smoothness routes need the
    polytope to be a registered non-stably-rational seed, because those
    theorems consume non-stable-rationality as a hypothesis.
    """
    q, _ = p.normalize_full_dimensional()
    if q.dim() >= 2:
        interior = q.lattice_points(interior_only=True)
        if len(interior) == 1:
            return VariationCertificate("unique_interior_point", interior[0])
        if len(interior) >= 2:
            return VariationCertificate("has_interior_points", len(interior))
    known_nsr = seeds is not None and seeds.match(q) is not None
    if not known_nsr:
        return VariationCertificate("none")
    report = check_condition_m(q, mode="reduced")
    if report.holds:
        return VariationCertificate("condition_m", report)
    smooth = is_smooth(q)
    if smooth.overall:
        from .ledger import find_unobstructed_subdivision
        from .toric import facet_shift

        evidence = []
        fan = normal_fan(q)
        for i in range(fan.n_rays):
            shifted = facet_shift(q, i, fan)
            if shifted.is_empty() or not shifted.is_lattice():
                return VariationCertificate("none")
            sub = find_unobstructed_subdivision(shifted.to_lattice_polytope())
            if sub is None:
                return VariationCertificate("none")
            evidence.append(sub)
        return VariationCertificate("smooth_unobstructed_shifts", tuple(evidence))
    return VariationCertificate("none")
