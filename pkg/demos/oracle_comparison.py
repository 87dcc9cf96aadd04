"""
Closed formulas against finite-field point counts
=================================================

Builds a matrix representation for each small root, counts its
subrepresentations over several F_p, interpolates the counting
polynomials and evaluates them at 1.  The result is compared with the
formula side.  Expect a few seconds.
"""
import time

from dtilde.formulas import f_delta, f_root
from dtilde.oracle import count_points, fpoly_oracle, good_primes, homogeneous_rep, rep_from_root
from dtilde.quiver import DimVec, QuiverDn, positive_real_roots

Q = QuiverDn.subspace(4)

# a single count first: every line in the centre space is a subrepresentation,
# so there are p + 1 of them
M = homogeneous_rep(Q, 1, 2)
print("points of Gr_(0:1) over F_5:", count_points(M, DimVec({"0": 1}), 5))
print("good primes for lambda = 2:", good_primes(M, 5))

t0 = time.perf_counter()
agree = 0
roots = sorted((a for a in positive_real_roots(Q, 8) if a.height() <= 8), key=lambda a: (a.height(), str(a)))
for alpha in roots:
    same = fpoly_oracle(rep_from_root(Q, alpha)) == f_root(Q, alpha)
    agree += same
    print(f"{str(alpha):<40} {'equal' if same else 'DIFFERENT'}")
print(f"{agree}/{len(roots)} roots agree ({time.perf_counter() - t0:.1f} s)")

for lam in (2, 3, 5):
    print(f"homogeneous lambda={lam}:", fpoly_oracle(homogeneous_rep(Q, 1, lam)) == f_delta(Q))
