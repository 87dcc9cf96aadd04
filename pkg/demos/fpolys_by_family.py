"""
F-polynomials of D~4 and D~5, one family at a time
==================================================

Walks through the preprojective, regular and homogeneous families and
prints each F-polynomial together with the route that produced it.
"""
from dtilde.formulas import f_delta, f_homog, f_root, f_tube, formula_route, tube_info
from dtilde.laurent import evaluate_ones
from dtilde.quiver import DimVec, QuiverDn, positive_real_roots, tau_dim, simple

Q = QuiverDn.subspace(4)
print("quiver:", Q.orientation_string())

# simple and projective modules first
for alpha in [simple("a"), simple("0"), DimVec({"a": 1, "0": 1})]:
    print(f"{str(alpha):<40} {f_root(Q, alpha).to_text()}")

# tau^-1 of the simple projective has defect -2 and splits into two smaller roots
B = tau_dim(Q, simple("0"), "inverse")
F = f_root(Q, B)
print(f"\ntau^-1 S_0 = {B}: {len(F)} terms, route {formula_route(Q, B)}, F(1) = {evaluate_ones(F)}")

# the homogeneous family; F(1) grows fast with r
print()
for r in range(1, 5):
    Fr = f_homog(Q, r)
    print(f"F_{r}delta: {len(Fr):>5} terms, F(1) = {evaluate_ones(Fr)}")
print("F_delta =", f_delta(Q).to_text())

# the rank 2 tube 2a, quasi-length 2 modules over a delta shift
print()
for r in range(3):
    info = tube_info(Q, "2a", 0, r + 1)
    print(f"tube 2a, l=0, r={r + 1}: F(1) = {evaluate_ones(f_tube(Q, info))}")

# every route on D~5, tallied over small roots
Q5 = QuiverDn.subspace(5)
tally: dict = {}
for alpha in positive_real_roots(Q5, 9):
    if alpha.height() <= 9:
        route = formula_route(Q5, alpha)
        tally[route] = tally.get(route, 0) + 1
print("\nroutes used on D~5 (height <= 9):")
for route, k in sorted(tally.items()):
    print(f"  {route:<20} {k}")
