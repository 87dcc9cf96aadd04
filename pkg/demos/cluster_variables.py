"""
Cluster variables from F-polynomials
====================================

Prints the Caldero-Chapoton Laurent polynomial for a handful of roots of
D~4, checks that it has the expected denominator and shows which index
convention makes the substituted form x^m' F(x') agree.
"""
from dtilde.formulas import CC_CONVENTIONS, cc_factorized, cc_variable, euler_table, f_root
from dtilde.laurent import NotDivisible, render_fraction
from dtilde.quiver import DimVec, QuiverDn, positive_real_roots, simple

Q = QuiverDn.subspace(4)


def X(alpha):
    return cc_variable(Q, alpha, euler_table(f_root(Q, alpha)))


for alpha in [simple("a"), simple("0"), DimVec({"a": 1, "0": 1}), DimVec({"a": 1, "b": 1, "0": 2, "c": 1})]:
    print(f"X_{alpha} = {render_fraction(X(alpha))}")

# denominators are x^dim for every root we try
roots = [a for a in positive_real_roots(Q, 8) if a.height() <= 8]
ok = True
for alpha in roots:
    lo, _ = X(alpha).exponent_bounds()
    ok &= all(-lo.get(v, 0) == alpha[v] for v in Q.vertices if alpha[v])
print(f"\ndenominator equals x^dim on {len(roots)} roots: {ok}")

print("\nconvention (m', x') -> roots where the factorized form agrees")
for mc in CC_CONVENTIONS:
    for xc in CC_CONVENTIONS:
        hits = 0
        for alpha in roots:
            F = f_root(Q, alpha)
            try:
                hits += cc_factorized(Q, alpha, F, mc, xc) == X(alpha)
            except NotDivisible:
                pass
        print(f"  ({mc}, {xc}): {hits}/{len(roots)}")
