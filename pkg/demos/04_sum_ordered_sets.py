"""
Colored sum-ordered sets
========================

Search for small colored sum-ordered families in F_p^n, certify each one
through its restriction tensor and compare with the size bound.
"""

from hyperdet import capset
from hyperdet.errors import BudgetExceeded

for p, n, d in [(2, 1, 3), (3, 1, 3), (2, 2, 3), (2, 1, 4)]:
    bound = capset.size_bound(p, n, d)
    best = None
    for N in range(1, min(bound.exact, 4) + 1):
        F = capset.search_sum_ordered(p, n, d, N)
        if F is None:
            break
        best = F
    cert = capset.certify_family(best)
    print(f"p={p} n={n} d={d}: largest N found = {best.N}, bound (p-1) d c(n) = {bound.exact}")
    print(f"   poset {cert.check.poset}, det = {cert.det}, prank >= {cert.prank.lower}")

# larger spaces hit the node budget quickly
try:
    capset.search_sum_ordered(3, 2, 3, 6, budget=10**5)
except BudgetExceeded as exc:
    print("budget:", exc)

# the Chernoff constant controls the growth of c(n)
for d in (3, 4, 6, 10):
    ch = capset.gamma_bound(3, d)
    print(f"gamma(3, {d}) = {ch.gamma:.10f}  (t* = {ch.t_star:.6f})")

ch = capset.gamma_bound(2, 4)
print("c(n) <= gamma^n for n <= 40:", all(ch.dominates(n) for n in range(41)))
