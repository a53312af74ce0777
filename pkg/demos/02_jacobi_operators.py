"""Jacobi operators: spectra, ranks, the Ricci trace, and spectrum constancy.

Run:  python demos/02_jacobi_operators.py
"""

from fractions import Fraction

import numpy as np

from actlab import (
    jacobi,
    jacobi_polarized,
    jacobi_rank,
    osserman_check,
    r0,
    r_theta,
    random_rational_unit_vector,
    ricci,
    standard_complex_structure,
    structure_report,
    w_space,
)

print("=" * 72)
print("the Jacobi operator J(x): y -> R(y,x)x".center(72))
print("=" * 72)

R = r0(4, Fraction(2))
J = jacobi(R, [1, 0, 0, 0])
print("\nconstant curvature, J(e1) = c (I - x x^T):")
print(np.array([[str(v) for v in row] for row in J]))

cs = standard_complex_structure(4)
RT = r_theta(cs, Fraction(2))
J1 = jacobi(RT, [1, 0, 0, 0])
print("\ncomplex form, J(e1) = 3c (Th x)(Th x)^T is rank one:")
print(np.array([[str(v) for v in row] for row in J1]))
print("rank at 10 random rational unit vectors:", end=" ")
print([jacobi_rank(RT, random_rational_unit_vector(4, s)) for s in range(10)])

# The polarized operator is the bilinear extension: J(x,x) = J(x) and
# J(x,y)y = -J(y)x / 2.
x = np.array([Fraction(1), 0, 0, 0], dtype=object)
y = np.array([0, Fraction(1), 0, 0], dtype=object)
lhs = np.dot(jacobi_polarized(RT, x, y), y)
rhs = np.dot(jacobi(RT, y), x) * Fraction(-1, 2)
print("\npolarization identity J(x,y)y = -J(y)x/2 holds exactly:", (lhs == rhs).all())

# W(x) = span{x} + range J(x): two-dimensional for the complex form.
basis = w_space(RT, [1, 0, 0, 0])
print("w_space dimension at e1:", len(basis), "(= 1 + rank)")

# Ricci as the trace form: rho(x,x) = trace J(x).
print("\nricci(r0(4,2)) = c (m-1) I:", (ricci(R) == 6 * np.eye(4, dtype=object)).all())
print("ricci(r_theta(std,2)) = 3c I:", (ricci(RT) == 6 * np.eye(4, dtype=object)).all())

# Spectrum constancy on the unit sphere. Both model families pass; a Gauss
# tensor with distinct diagonal does not.
print("\nspectrum constancy over 200 random unit vectors:")
for name, T in [("r0(5, 2)", r0(5, 2)), ("r_theta(std, 2)", RT)]:
    rep = osserman_check(T, n_samples=200, seed=0)
    print(f"  {name:18s} constant={rep.is_osserman}  spectrum={np.round(rep.reference_spectrum, 12)}")

from actlab import from_form, RATIONAL

phi = np.array([[Fraction({0: 1, 1: 2, 2: 3}[i]) if i == j else Fraction(0) for j in range(3)] for i in range(3)], dtype=object)
G = from_form(phi, RATIONAL)
rep = osserman_check(G, n_samples=100, seed=0)
print(f"  gauss diag(1,2,3)  constant={rep.is_osserman}  (spectra vary with the direction)")

# The structure report aggregates ranks, spectra, and W(x) dimensions.
sr = structure_report(RT, n_samples=25, seed=3)
print("\nstructure report for r_theta: rank histogram =", sr.rank_histogram)
print("two-eigenvalue check:", sr.two_eigenvalue_ok)
