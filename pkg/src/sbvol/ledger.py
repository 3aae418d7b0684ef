"""The signed obstruction ledger over a regular integral subdivision.

Each interior cell contributes its hypersurface class with sign
(-1)^(dim polytope) * (-1)^(dim cell).  Cells proven rational collapse to
the point class (with the exact multiplicity of their zero set: vertices
contribute nothing, a segment with r interior points contributes r+1
points).  Remaining cells are grouped by unimodular equivalence and carry
a tag that records why their class cannot cancel, when we can certify it.
The verdict applies only sound non-cancellation rules and degrades to
"inconclusive" rather than guess.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateInputError, SubdivisionError
from .intlinalg import dot
from .polytope import LatticePolytope, hull, unimodular_equivalence
from .subdivision import (
    Subdivision,
    distance_height,
    interior_cells,
    pulling_refinement,
    regular_subdivision,
    validate,
)
from .toric import fine_interior


@dataclass(frozen=True)
class CellClassTag:
    kind: str  # "rational" | "seed" | "strongly_varying" | "unknown"
    justification: str
    seed_name: str | None = None
    strongly_varying: bool = False

    @property
    def obstructs_alone(self):
        """True when a nonzero coefficient on this class already settles the verdict."""
        return self.strongly_varying


@dataclass(frozen=True)
class SeedEntry:
    name: str
    polytope: LatticePolytope  # span-normalized
    reason: str
    condition_m: bool | None = None


class SeedRegistry:
    """Polytopes consumed axiomatically as non-stably-rational."""

    def __init__(self):
        self.entries = []

    def register(self, name, polytope, reason, condition_m=None):
        q, _ = polytope.normalize_full_dimensional()
        d = q.dim()
        if d <= 1 or q.lattice_width()[0] == 1 or (d <= 3 and fine_interior(q).is_empty):
            raise DegenerateInputError(
                f"{name}: this polytope is provably rational and cannot be a seed"
            )
        entry = SeedEntry(name, q, reason, condition_m)
        self.entries.append(entry)
        return entry

    def match(self, p: LatticePolytope, budget=200_000):
        q, _ = p.normalize_full_dimensional()
        for entry in self.entries:
            res = unimodular_equivalence(q, entry.polytope, budget=budget)
            if res.found:
                return entry
        return None

    def __len__(self):
        return len(self.entries)


def classify_cell(cell: LatticePolytope, seeds: SeedRegistry | None = None) -> CellClassTag:
    """Tag a subdivision cell by the reason its class is under control.

    Rationality rules come first (width one, dimension at most one, empty
    Fine interior in dimension at most three), then registered seeds, then
    interior lattice points, which certify strong variation on their own.
    """
    q, _ = cell.normalize_full_dimensional()
    d = q.dim()
    if d <= 1:
        return CellClassTag("rational", "dimension at most one")
    if q.lattice_width()[0] == 1:
        return CellClassTag("rational", "lattice width one")
    if d <= 3 and fine_interior(q).is_empty:
        return CellClassTag(
            "rational", "empty fine interior in dimension at most three"
        )
    if seeds is not None:
        entry = seeds.match(q)
        if entry is not None:
            varying = bool(entry.condition_m) or q.n_interior_points() >= 1
            why = f"registered non-stably-rational seed {entry.name!r}"
            if varying:
                why += " with strong variation"
            return CellClassTag("seed", why, entry.name, varying)
    interior = q.n_interior_points()
    if interior == 1:
        return CellClassTag(
            "strongly_varying", "unique interior lattice point", None, True
        )
    if interior > 1:
        return CellClassTag(
            "strongly_varying", f"{interior} interior lattice points", None, True
        )
    return CellClassTag("unknown", "no rationality or variation rule applies")


@dataclass(frozen=True)
class LedgerEntry:
    representative: LatticePolytope  # span-normalized
    tag: CellClassTag
    fingerprint: tuple
    coefficient: int
    members: int


@dataclass(frozen=True)
class Ledger:
    polytope: LatticePolytope
    point_coefficient: int
    entries: tuple  # LedgerEntry, zero coefficients dropped
    provenance: str

    def is_point_form(self):
        return self.point_coefficient == 1 and not self.entries

    def describe(self):
        parts = []
        if self.point_coefficient:
            parts.append(f"{self.point_coefficient}*[point]")
        for e in self.entries:
            parts.append(f"{e.coefficient:+d}*[{e.tag.kind}:{e.tag.justification}]")
        return " ".join(parts) if parts else "0"


def volume_ledger(
    p: LatticePolytope,
    s: Subdivision,
    seeds: SeedRegistry | None = None,
    check: bool = True,
) -> Ledger:
    """Signed sum of cell classes over the interior cells of a valid subdivision."""
    if check:
        report = validate(s, p)
        if not report.ok:
            raise SubdivisionError(
                "refusing an invalid subdivision: "
                + ", ".join(name for name, ok, _ in report.checks if not ok)
            )
    sign = -1 if p.dim() % 2 else 1
    point_coeff = 0
    groups = []  # (normalized cell, tag, fingerprint, coeff, members)
    for cell in interior_cells(s, p):
        d = cell.dim()
        coeff = sign * (-1 if d % 2 else 1)
        tag = classify_cell(cell, seeds)
        if tag.kind == "rational":
            if d == 0:
                mult = 0  # a single monomial has empty zero set in the torus
            elif d == 1:
                mult = 1 + cell.n_interior_points()
            else:
                mult = 1
            point_coeff += coeff * mult
            continue
        q, _ = cell.normalize_full_dimensional()
        fp = q.fingerprint()
        for g in groups:
            if g[2] == fp and g[1] == tag and unimodular_equivalence(q, g[0]).found:
                g[3] += coeff
                g[4] += 1
                break
        else:
            groups.append([q, tag, fp, coeff, 1])
    entries = tuple(
        LedgerEntry(g[0], g[1], g[2], g[3], g[4])
        for g in sorted(groups, key=lambda g: (g[0].dim(), g[2]))
        if g[3] != 0
    )
    return Ledger(p, point_coeff, entries, provenance="subdivision ledger")


@dataclass(frozen=True)
class Verdict:
    status: str  # "obstructed" | "unobstructed" | "inconclusive"
    justification: str

    @property
    def obstructed(self):
        return self.status == "obstructed"


def verdict(ledger: Ledger) -> Verdict:
    """Sound reading of the ledger: obstructed only via non-cancellation arguments."""
    entries = ledger.entries
    if not entries:
        if ledger.point_coefficient == 1:
            return Verdict("unobstructed", "the ledger is exactly one point class")
        return Verdict(
            "obstructed",
            f"every class is the point class, with total coefficient "
            f"{ledger.point_coefficient} != 1",
        )
    strong = [e for e in entries if e.tag.obstructs_alone]
    if strong:
        e = strong[0]
        return Verdict(
            "obstructed",
            f"the class tagged '{e.tag.justification}' has coefficient "
            f"{e.coefficient} and strong variation prevents it from cancelling "
            "against any other term or the point class",
        )
    has_seed = any(e.tag.kind == "seed" for e in entries)
    signs = {1 if e.coefficient > 0 else -1 for e in entries}
    if has_seed and len(signs) == 1:
        return Verdict(
            "obstructed",
            "all non-point classes carry one sign, so they cannot cancel, and a "
            "registered non-stably-rational class among them differs from the point class",
        )
    return Verdict(
        "inconclusive",
        "uncertain classes remain and no non-cancellation rule applies",
    )


def find_unobstructed_subdivision(p: LatticePolytope):
    """A regular subdivision with ledger one point class, or None.

    Tries the trivial subdivision, then the full pulling triangulation by
    all lattice points; the result is certified through the ledger itself.
    """
    q, _ = p.normalize_full_dimensional()
    if q.dim() == 0:
        return None
    zero = {x: 0 for x in q.lattice_points()}
    s = regular_subdivision(q, zero)
    led = volume_ledger(q, s, check=False)
    if verdict(led).status == "unobstructed":
        return s
    for point in q.lattice_points():
        cells_with = [c for c in s.maximal_cells if c.contains(point)]
        if len(cells_with) == 1 and point in cells_with[0].vertices:
            continue
        s = pulling_refinement(s, point)
    led = volume_ledger(q, s, check=False)
    if verdict(led).status == "unobstructed":
        return s
    return None


@dataclass(frozen=True)
class PipelineResult:
    verdict: Verdict
    ledger: Ledger | None
    subdivision: Subdivision | None
    kodaira_shortcut: bool


def dim4_pipeline(big: LatticePolytope, small: LatticePolytope, seeds: SeedRegistry):
    """Distance-height obstruction pipeline for ambient dimension at most 4.

    When the big polytope has nonempty Fine interior the verdict is
    immediate (nonnegative Kodaira dimension).  Otherwise every proper cell
    of dimension at most three is rational, all cells of top dimension
    enter with one sign, and the seed class survives.
    """
    bq, chart = big.normalize_full_dimensional()
    if bq.dim() > 4:
        raise DegenerateInputError("pipeline hypothesis: ambient dimension at most 4")
    try:
        sverts = [chart.to_chart(v) for v in small.vertices]
    except DegenerateInputError as exc:
        raise DegenerateInputError("the small polytope must sit inside the big one") from exc
    sq = hull(sverts)
    if not all(bq.contains(v) for v in sq.vertices):
        raise DegenerateInputError("the small polytope must sit inside the big one")
    in_boundary = any(
        all(dot(n, v) == c for v in sq.vertices) for n, c in bq.facet_system()
    )
    if in_boundary:
        raise DegenerateInputError(
            "pipeline hypothesis: the small polytope may not lie in the boundary"
        )
    if seeds.match(sq) is None:
        raise DegenerateInputError("the small polytope must be a registered seed")
    fi = fine_interior(bq)
    if not fi.is_empty:
        return PipelineResult(
            Verdict(
                "obstructed",
                "the fine interior of the big polytope is nonempty, so a general "
                "section has nonnegative Kodaira dimension and is not stably rational",
            ),
            None,
            None,
            True,
        )
    heights = distance_height(bq, sq)
    s = regular_subdivision(bq, heights)
    if not any(c == sq for c in s.cells):
        raise SubdivisionError(
            "the distance subdivision merged the seed with other points; "
            "the seed is not a cell"
        )
    led = volume_ledger(bq, s, seeds)
    return PipelineResult(verdict(led), led, s, False)
