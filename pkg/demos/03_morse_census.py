"""Count and classify stationary points, then audit the census.

On a box whose boundary gradient points outward, the alternating sum of
index counts over non-degenerate stationary points must equal one; a
different sum means the seed grid missed a point or the boundary leaks.
Degenerate points (singular Hessian) make the count undefined, so the
audit refuses them with a diagnosis instead of guessing.
"""

import minsection as ms

for name in ("QUAD", "TWO_WELLS"):
    merit = ms.get_problem(name).merit
    points = ms.find_critical_points(merit, seed_density=9)
    outward = ms.check_outward_gradient(merit, boundary_density=9)
    census = ms.morse_equality_audit(points, outward)
    print(f"==== {name} ====")
    print(ms.census_report(points, census))

# The flat valley (x + y - 2)^2 has a singular Hessian everywhere: every
# located point is degenerate and the audit refuses.
merit = ms.get_problem("DEGEN_LINE").merit
points = ms.find_critical_points(merit, seed_density=9)
print(f"==== DEGEN_LINE ====")
print(f"located {len(points)} stationary points, "
      f"all degenerate: {all(p.degenerate for p in points)}")
try:
    ms.morse_equality_audit(points, True)
except ms.DegenerateCriticalPointError as err:
    print(f"audit refused: {str(err)[:80]}...")
