"""Build curvature tensors, check their symmetries, and round-trip files.

Run:  python demos/01_tensors_and_validation.py
"""

import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np

from actlab import (
    RATIONAL,
    combine,
    from_form,
    load_tensor,
    r0,
    r_theta,
    random_act,
    save_tensor,
    standard_complex_structure,
    validate,
)

print("=" * 72)
print("curvature tensors: construction and validation".center(72))
print("=" * 72)

# The constant-sectional-curvature tensor.  Its components are
# R[i][j][k][l] = c (d_jk d_il - d_ik d_jl); every sectional curvature is c.
R = r0(3, Fraction(5))
print("\nr0(3, 5): R[0,1,1,0] =", R.components[0, 1, 1, 0], "   R[0,1,0,1] =", R.components[0, 1, 0, 1])

report = validate(R.components, RATIONAL)
print("validation accepted:", report.accepted)
for name, value in report.violations.items():
    print(f"  {name:15s} max violation = {value}")

# Breaking one entry breaks the symmetries.
broken = R.components.copy()
broken[0, 1, 1, 0] += 1
bad = validate(broken, RATIONAL)
print("\nafter perturbing one entry: accepted =", bad.accepted)
print("  pair_exchange violation =", bad.violations["pair_exchange"])

# The tensor built from a skew complex structure. Theta maps
# e1 -> e2, e2 -> -e1, e3 -> e4, e4 -> -e3 in dimension 4.
cs = standard_complex_structure(4)
RT = r_theta(cs, 1)
print("\nr_theta(std, 1): R[0,1,1,0] =", RT.components[0, 1, 1, 0], " (three times the scale)")

# Gauss tensors from a symmetric form phi: R = phi ^ phi. With phi = 2 I the
# result is the constant-curvature tensor of scale 4 = 2^2.
phi = np.array([[Fraction(2 if i == j else 0) for j in range(3)] for i in range(3)], dtype=object)
G = from_form(phi, RATIONAL)
print("\nfrom_form(2 I) equals r0(3, 4):", (G.components == r0(3, 4).components).all())

# Seeded random tensors are signed sums of Gauss tensors; they satisfy the
# symmetries exactly by construction.
A = random_act(4, 3, seed=7)
print("random_act(4, 3, seed=7) validates:", validate(A.components, RATIONAL).accepted)

# Linear combinations stay in the space.
mix = combine([(1, r0(4, 1)), (1, r_theta(cs, 1))])
print("combined tensor validates:", validate(mix.components, RATIONAL).accepted)

# Files: sparse storage lists one representative per symmetry orbit and the
# loader completes the orbit; rational values survive the round trip exactly.
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "tensor.json"
    save_tensor(mix, path, storage="sparse")
    again = load_tensor(str(path))
    print("\nsparse file round trip is lossless:", (again.components == mix.components).all())
    print("file size:", path.stat().st_size, "bytes for", mix.m, "^4 =", mix.m**4, "components")
