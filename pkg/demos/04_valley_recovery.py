"""Recover a point of a flat valley from one known coordinate.

F = (x + y - 2)^2 vanishes on the whole line x + y = 2: no isolated
minimum exists and any full minimization just lands somewhere on the line.
But the inner problem over y stays strictly convex, so pinning x to a
known value and running a single slice solve pins down the rest. The same
move survives a slight convexity perturbation of the objective.
"""

import minsection as ms

merit = ms.get_problem("DEGEN_LINE").merit

print("objective (x + y - 2)^2: minimal on the whole line x + y = 2")
for anchor in (0.5, 2.0, -3.0):
    recovery = ms.recover_from_anchor(merit, 0, anchor)
    print(f"  anchor x = {anchor:+.1f} -> recovered {recovery.recovered}"
          f"  (residual {recovery.section_residual:.1e})")

# Perturbed variant: an extra tiny residual 1e-4 * x tilts the valley so it
# has a unique-but-nearly-flat minimum. Anchor recovery is unaffected.
perturbed = ms.build_residual_merit(
    (lambda p: p[0] + p[1] - 2.0, lambda p: 1e-4 * p[0]),
    2,
    name="TILTED_VALLEY",
)
recovery = ms.recover_from_anchor(perturbed, 0, 0.5)
print("\ntilted valley (extra residual 1e-4 * x)")
print(f"  anchor x = +0.5 -> recovered {recovery.recovered}"
      f"  (residual {recovery.section_residual:.1e})")

# Anchoring the second coordinate instead works symmetrically.
recovery = ms.recover_from_anchor(merit, 1, 1.5)
print(f"\nanchor on parameter 1 at 1.5 -> recovered {recovery.recovered}")
