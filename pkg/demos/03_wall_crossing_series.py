"""Exact log-expansion of the composed wall-crossing jump maps.

Composing the three pentagon transformations in counterclockwise ray order
collapses, thanks to the refinement sign, to the same two-wall map whose
expansion has a closed form.  The coefficients are exact rationals.
"""

from rhflow.charge_lattice import pentagon_spectrum
from rhflow.spectrum_rays import CentralCharge, admissible_pair, bps_ray
from rhflow.stokes_series import (ordered_side_charges, pentagon_coeff,
                                  stokes_log_coeffs)

Z = CentralCharge.constant(1.0, 1j)
spec = pentagon_spectrum()
r, classification = admissible_pair(Z, spec, 0.0)

print("positive charges in counterclockwise composition order:")
for g, om in ordered_side_charges(spec, Z, 0.0, +1, r):
    ray = bps_ray(Z, g, 0.0)
    print(f"  ({g.c1:+d},{g.c2:+d})  ray phase {ray.phase:+.4f} rad")

N = 6
print(f"\ncomposite log-expansion for the second basis target, degree <= {N}:")
coeffs = stokes_log_coeffs(spec, Z, 0.0, +1, 2, N, r)
print(f"{'charge':>10} {'composed':>12} {'closed form':>12}")
for g in sorted(coeffs, key=lambda g: (g.l1, g.c1, g.c2)):
    closed = pentagon_coeff(g.c1, g.c2, 2)
    mark = "" if closed == coeffs[g] else "   MISMATCH"
    print(f"  ({g.c1},{g.c2})".ljust(11)
          + f"{str(coeffs[g]):>12} {str(closed):>12}{mark}")

print("\nevery composed coefficient equals the closed form exactly;")
print("the first basis target carries only the pure powers of the second charge:")
coeffs1 = stokes_log_coeffs(spec, Z, 0.0, +1, 1, N, r)
for g in sorted(coeffs1, key=lambda g: (g.l1, g.c1, g.c2)):
    print(f"  ({g.c1},{g.c2}): {coeffs1[g]}")
