"""Regular subdivisions and the signed obstruction ledger.

The running example cuts the quartic surface polytope along a plane; the
two big cells are exchanged by a unimodular map and the middle triangle
carries one interior lattice point, so the ledger reads 2*[point] minus
one strongly varying class and the verdict is obstructed.

Run as: python3 demos/03_obstruction_ledgers.py
"""

from sbvol.families import builtin_seed_registry, dilated_simplex, kollar_totaro
from sbvol.ledger import dim4_pipeline, verdict, volume_ledger
from sbvol.polytope import unimodular_equivalence
from sbvol.subdivision import (
    height_function,
    interior_cells,
    regular_subdivision,
    validate,
)

# -- the cut quartic surface polytope ---------------------------------------

p = dilated_simplex(4, 3)
heights = height_function(p, lambda v: abs(v[0] + v[1] + 2 * v[2] - 4))
s = regular_subdivision(p, heights)
print("== cutting the quartic surface polytope ==")
print("  valid:", validate(s).ok)
for c in s.maximal_cells:
    print("  maximal cell:", c.vertices)
a, b = s.maximal_cells
eq = unimodular_equivalence(a, b)
print("  cells unimodularly equivalent:", eq.found)
print("  witness:", eq.ambient_map)
for c in interior_cells(s):
    if c.dim() == 2:
        print("  middle triangle:", c.vertices, "interior points:", c.n_interior_points())
led = volume_ledger(p, s)
print("  ledger:", led.describe())
v = verdict(led)
print("  verdict:", v.status)
print("   ", v.justification)

# -- the ambient-dimension-four pipeline -------------------------------------

print("\n== distance-height pipeline in ambient dimension 4 ==")
seeds = builtin_seed_registry()
seed = kollar_totaro(3, 4)
seeds.register(
    "double-cover-3-4",
    seed,
    "double cover of P3 branched in a very general quartic; not stably rational",
)
big = dilated_simplex(4, 4)
res = dim4_pipeline(big, seed, seeds)
print("  big polytope:", big.vertices[:3], "...")
print("  seed:", seed.vertices)
print("  verdict:", res.verdict.status)
print("   ", res.verdict.justification)
if res.ledger is not None:
    print("  ledger:", res.ledger.describe())
    print("  maximal cells in the subdivision:", len(res.subdivision.maximal_cells))
