"""Named polytope families, double cones, degree-budget extensions, bound tables."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DegenerateInputError, InvalidParameterError
from .intlinalg import dot
from .ledger import SeedRegistry
from .polytope import (
    AffineUnimodularMap,
    LatticePolytope,
    RationalPolytope,
    cartesian_product,
    dilate,
    hull,
)


def _unit(i, n):
    return tuple(1 if j == i else 0 for j in range(n))


def standard_simplex(n: int) -> LatticePolytope:
    return hull([tuple([0] * n)] + [_unit(i, n) for i in range(n)])


def dilated_simplex(d: int, n: int) -> LatticePolytope:
    if d < 1 or n < 1:
        raise InvalidParameterError("dilated simplex needs d >= 1 and n >= 1")
    return dilate(standard_simplex(n), d)


def simplex_product(factors) -> LatticePolytope:
    """d_1 Delta_{n_1} x ... x d_r Delta_{n_r}."""
    factors = list(factors)
    if not factors:
        raise InvalidParameterError("a product needs at least one factor")
    out = dilated_simplex(*factors[0])
    for d, n in factors[1:]:
        out = cartesian_product(out, dilated_simplex(d, n))
    return out


def hpt() -> LatticePolytope:
    """The bidegree (2,2) divisor polytope in Z^5 with class group Z x Z/2 x Z/2."""
    e = lambda i: _unit(i - 1, 5)

    def add(*vs):
        return tuple(sum(x) for x in zip(*vs))

    return hull(
        [
            (0, 0, 0, 0, 0),
            add(e(1), e(1)),
            add(e(2), e(2)),
            add(e(2), e(3), e(3)),
            add(e(1), e(4), e(4)),
            add(e(1), e(2), e(5), e(5)),
        ]
    )


def kollar_totaro(n: int, d: int) -> LatticePolytope:
    """Newton polytope of a double cover branched along a cyclic degree-d form."""
    if n < 2 or d < 2:
        raise InvalidParameterError("kollar_totaro needs n >= 2 and d >= 2")
    m = n + 1
    verts = [tuple(2 if j == 0 else 0 for j in range(m)), _unit(1, m)]
    for i in range(2, n + 1):
        v = [0] * m
        v[i - 1] = d - 1
        v[i] = 1
        verts.append(tuple(v))
    v = [0] * m
    v[n] = d - 1
    verts.append(tuple(v))
    return hull(verts)


def cubic_empty(n: int) -> LatticePolytope:
    """Rational empty simplices from cyclic cubics; n must be odd."""
    if n < 3 or n % 2 == 0:
        raise InvalidParameterError("cubic_empty needs odd n >= 3")
    verts = [_unit(0, n)]
    for i in range(1, n):
        v = [0] * n
        v[i - 1] = 3
        v[i] = 1
        verts.append(tuple(v))
    v = [0] * n
    v[n - 1] = 3
    verts.append(tuple(v))
    return hull(verts)


def tpq(p: int, q: int) -> LatticePolytope:
    """The empty tetrahedron Conv{0, e1, e3, p e1 + q e2 + e3}."""
    if not (1 <= p <= q) or gcd(p, q) != 1:
        raise InvalidParameterError("tpq needs 1 <= p <= q with gcd(p, q) = 1")
    return hull([(0, 0, 0), (1, 0, 0), (0, 0, 1), (p, q, 1)])


def double_cover(d: int, n: int) -> LatticePolytope:
    """Newton polytope of a double cover of projective n-space branched in degree d."""
    if d < 1 or n < 1:
        raise InvalidParameterError("double_cover needs d >= 1 and N >= 1")
    m = n + 1
    verts = [tuple([0] * m)]
    verts += [tuple(d if j == i else 0 for j in range(m)) for i in range(n)]
    verts.append(tuple(2 if j == n else 0 for j in range(m)))
    return hull(verts)


# -- the hypersurface family with small support --------------------------------------


def exponent_tuples(n: int):
    """All 0/1 tuples of length n with coordinate sum at most n - 2, the pinned order."""
    out = [t for t in itertools.product((0, 1), repeat=n) if sum(t) <= n - 2]
    zero = tuple([0] * n)
    rest = sorted(t for t in out if t != zero)
    return [zero] + rest


@dataclass(frozen=True)
class SchreiederData:
    n: int
    degree: int
    rho: tuple  # rho[k] = epsilon tuple whose column is 2n + k + 1 (1-based)
    polytope: LatticePolytope

    def column_of(self, eps) -> int:
        """0-based coordinate index carrying the doubled variable of eps."""
        return 2 * self.n + self.rho.index(tuple(eps))


def schreieder(n: int, rho=None) -> SchreiederData:
    """The degree-(n+2) hypersurface polytope with 2^n + n vertices in Z^(2^n+n-1).

    The bijection rho assigns each admissible exponent tuple its extra
    coordinate; the default pins the zero tuple first and orders the rest
    lexicographically.  A custom bijection may be supplied as a sequence of
    the same tuples in the desired column order.
    """
    if n < 3:
        raise InvalidParameterError(
            "schreieder needs n >= 3: for n = 2 no reduced ample monomial covers "
            "the first coordinate rays"
        )
    d = n + 2
    tuples = exponent_tuples(n)
    if rho is None:
        rho = tuple(tuples)
    else:
        rho = tuple(tuple(t) for t in rho)
        if sorted(rho) != sorted(tuples):
            raise InvalidParameterError("rho must enumerate the admissible exponent tuples")
    dim = 2**n + n - 1
    verts = [tuple([0] * dim)]
    for i in range(2 * n):
        verts.append(tuple(d if j == i else 0 for j in range(dim)))
    for k, eps in enumerate(rho):
        v = [0] * dim
        for i, bit in enumerate(eps):
            v[i] = bit
        v[2 * n + k] = 2
        verts.append(tuple(v))
    p = hull(verts)
    assert len(p.vertices) == 2**n + n and p.is_simplex()
    return SchreiederData(n, d, rho, p)


# -- double cones ---------------------------------------------------------------------


@dataclass(frozen=True)
class DoubleConeResult:
    polytope: LatticePolytope
    base: LatticePolytope  # in the original ambient space
    base_dim: int  # ambient dimension of the base
    pairs: tuple  # (v_plus, v_minus) in the enlarged space

    @property
    def r(self):
        return len(self.pairs)

    def embedded_base(self) -> LatticePolytope:
        n, r = self.base_dim, self.r
        return LatticePolytope._trusted(
            n + r, [v + tuple([0] * r) for v in self.base.vertices]
        )

    def slices(self):
        """The nested stage chain, outermost first, excluding the base itself."""
        if self.r == 0:
            return []
        out = [self.polytope]
        system = self.polytope.facet_system()
        n = self.base_dim
        for i in range(1, self.r):
            halves = [(a, Fraction(c)) for a, c in system]
            for k in range(i):
                axis = _unit(n + k, n + self.r)
                halves.append((axis, Fraction(0)))
                halves.append((tuple(-x for x in axis), Fraction(0)))
            out.append(RationalPolytope(n + self.r, halves))
        return out


def double_cone(p: LatticePolytope, pairs) -> DoubleConeResult:
    """Hull of the embedded polytope with cone point pairs over new coordinates.

    Pair k must project to plus and minus the k-th new coordinate; the
    original polytope sits in the slice where all new coordinates vanish.
    """
    n = p.ambient_dim
    r = len(pairs)
    checked = []
    for k, (vp, vm) in enumerate(pairs):
        vp, vm = tuple(vp), tuple(vm)
        if len(vp) != n + r or len(vm) != n + r:
            raise DegenerateInputError("cone points live in the enlarged space")
        for j in range(r):
            want = 1 if j == k else 0
            if vp[n + j] != want or vm[n + j] != -want:
                raise DegenerateInputError(
                    f"pair {k}: new coordinates must project to plus and minus e_{k + 1}"
                )
        checked.append((vp, vm))
    verts = [v + tuple([0] * r) for v in p.vertices]
    for vp, vm in checked:
        verts += [vp, vm]
    return DoubleConeResult(hull(verts), p, n, tuple(checked))


def divisor_23_double_cone() -> DoubleConeResult:
    """The 10-vertex double cone over the hpt polytope inside Z^7."""
    base = hpt()
    e = lambda i: _unit(i - 1, 7)

    def add(*vs):
        return tuple(sum(x) for x in zip(*vs))

    def sub(a, b):
        return tuple(x - y for x, y in zip(a, b))

    pairs = [
        (add(e(1), e(4), e(6)), sub(e(1), e(6))),
        (add(e(1), e(5), e(7)), sub(e(1), e(7))),
    ]
    return double_cone(base, pairs)


def divisor_23_certificate_map() -> AffineUnimodularMap:
    """The explicit unimodular map placing the 10-vertex polytope in 2D3 x 3D4.

    Columns give the images of the basis vectors; the map is applied after
    translating by e1.
    """
    cols = [
        (0, 0, 0, 0, 1, 0, 0),  # e1 -> e5
        (0, 0, 0, 1, 0, 0, 0),  # e2 -> e4
        (0, 0, 1, 0, 0, 0, 0),  # e3 -> e3
        (0, 1, 0, 0, -1, 1, 0),  # e4 -> e2 - e5 + e6
        (1, 0, 0, 0, -1, 0, 1),  # e5 -> e1 - e5 + e7
        (0, 0, 0, 0, 1, -1, 0),  # e6 -> e5 - e6
        (0, 0, 0, 0, 1, 0, -1),  # e7 -> e5 - e7
    ]
    linear = tuple(tuple(col[i] for col in cols) for i in range(7))
    return AffineUnimodularMap.from_pre_translation(linear, _unit(0, 7))


# -- degree-budget extensions ---------------------------------------------------------


@dataclass(frozen=True)
class ExtensionStep:
    eps: tuple
    column: int  # coordinate carrying the doubled variable, 0-based, current space
    new_coordinate: int  # 0-based index of the added coordinate
    shear: AffineUnimodularMap


@dataclass(frozen=True)
class ExtendedPolytope:
    data: SchreiederData
    polytope: LatticePolytope
    steps: tuple

    @property
    def r(self):
        return len(self.steps)


def extend_schreieder(data: SchreiederData, steps) -> ExtendedPolytope:
    """Grow the polytope one double-cone step at a time without raising the degree.

    Each step picks an admissible exponent tuple, adds a coordinate with a
    cone point pair, and shears so that all coordinates stay nonnegative
    with coordinate sums at most the degree.  Tuple eps supports
    floor((n - |eps|) / 2) steps; the total budget is 2^(n-2) (n-1).
    """
    n, d = data.n, data.degree
    poly = data.polytope
    used = {}
    done = []
    for eps in steps:
        eps = tuple(eps)
        if eps not in data.rho:
            raise InvalidParameterError(f"{eps!r} is not an admissible exponent tuple")
        allowance = (n - sum(eps)) // 2
        used[eps] = used.get(eps, 0) + 1
        if used[eps] > allowance:
            raise InvalidParameterError(
                f"{eps!r} supports only {allowance} extension steps"
            )
        cur = poly.ambient_dim
        col = data.column_of(eps)
        embedded = [v + (0,) for v in poly.vertices]
        v_plus = tuple(1 if j == cur else 0 for j in range(cur + 1))
        v_minus = tuple(
            (1 if j == col else 0) - (1 if j == cur else 0) for j in range(cur + 1)
        )
        coned = hull(embedded + [v_plus, v_minus])
        shear_rows = []
        for i in range(cur + 1):
            row = [1 if j == i else 0 for j in range(cur + 1)]
            if i == cur:
                row[col] = 1  # x_new += x_col
            shear_rows.append(tuple(row))
        shear = AffineUnimodularMap(tuple(shear_rows), tuple([0] * (cur + 1)))
        poly = shear.apply_polytope(coned)
        for v in poly.vertices:
            if any(x < 0 for x in v) or sum(v) > d:
                raise InvalidParameterError(
                    "extension broke the nonnegative degree budget"
                )
        done.append(ExtensionStep(eps, col, cur, shear))
    return ExtendedPolytope(data, poly, tuple(done))


# -- containment certificates ---------------------------------------------------------


@dataclass(frozen=True)
class ContainmentCertificate:
    contained: bool
    violated_halfspace: tuple | None
    violating_vertex: tuple | None


def containment_certificate(
    p: LatticePolytope, target: LatticePolytope, mapping: AffineUnimodularMap | None = None
) -> ContainmentCertificate:
    """Apply the map and verify every image vertex against the target halfspaces."""
    if mapping is None:
        mapping = AffineUnimodularMap.identity(p.ambient_dim)
    system = target.facet_system()
    for v in p.vertices:
        w = mapping.apply(v)
        for nrm, c in system:
            if dot(nrm, w) < c:
                return ContainmentCertificate(False, (nrm, c), w)
    return ContainmentCertificate(True, None, None)


# -- the closed-form sum and bound tables ---------------------------------------------


def sum_identity(n: int):
    """(enumerated sum, closed form, equal) of the per-tuple extension allowances."""
    if n < 2:
        raise InvalidParameterError("the identity needs n >= 2")
    lhs = sum((n - sum(eps)) // 2 for eps in exponent_tuples(n))
    rhs = 2 ** (n - 2) * (n - 1)
    return lhs, rhs, lhs == rhs


@dataclass(frozen=True)
class BoundsRow:
    n: int
    degree: int
    n_min: int
    n_max_baseline: int
    n_max: int


def bounds_table(n_values, kind: str = "hypersurface"):
    """Rows of (degree, covered dimension range) and Figure-style grid data.

    Hypersurfaces of degree n+2 are covered for N between n + 2^(n-1) - 2
    and n + 2^n - 2 + 2^(n-2)(n-1); the last term is exactly the enumerated
    extension budget.  Double covers lose floor(n/2) extension steps and
    have even degree 2 ceil(n/2) + 2.
    """
    if kind not in ("hypersurface", "double_cover"):
        raise InvalidParameterError(f"unknown bounds table kind {kind!r}")
    rows = []
    for n in n_values:
        if n < 2:
            raise InvalidParameterError("bounds rows need n >= 2")
        lhs, rhs, equal = sum_identity(n)
        assert equal
        base_extra = 2**n - 2
        if kind == "hypersurface":
            degree = n + 2
            extra = base_extra + rhs
        else:
            degree = 2 * ((n + 1) // 2) + 2
            extra = base_extra + rhs - n // 2
        rows.append(
            BoundsRow(
                n=n,
                degree=degree,
                n_min=n + 2 ** (n - 1) - 2,
                n_max_baseline=n + base_extra,
                n_max=n + extra,
            )
        )
    grid = []
    for row in rows:
        for big_n in range(3, row.n_max + 3):
            if big_n <= row.n_max_baseline:
                status = "paper-baseline"
            elif big_n <= row.n_max:
                status = "new"
            else:
                status = "open"
            grid.append((big_n, row.degree, status))
    return rows, grid


# -- family dispatcher and built-in seeds ----------------------------------------------


FAMILIES = {
    "hpt": lambda: hpt(),
    "kollar_totaro": kollar_totaro,
    "cubic_empty": cubic_empty,
    "tpq": tpq,
    "double_cover": double_cover,
    "schreieder": lambda n: schreieder(n).polytope,
    "dilated_simplex": dilated_simplex,
    "simplex_product": simplex_product,
}


def build(family: str, *args):
    if family not in FAMILIES:
        raise InvalidParameterError(
            f"unknown family {family!r}; choose from {sorted(FAMILIES)}"
        )
    return FAMILIES[family](*args)


def builtin_seed_registry() -> SeedRegistry:
    """Registry of polytopes consumed axiomatically as not stably rational."""
    reg = SeedRegistry()
    reg.register(
        "hpt",
        hpt(),
        "very general (2,2) divisor in P3 x P2; not stably rational",
        condition_m=True,
    )
    reg.register(
        "double-cover-4-4",
        kollar_totaro(4, 4),
        "double cover of P4 branched in a very general quartic; not stably rational",
        condition_m=False,
    )
    return reg
