"""
Echelon forms over a poset
==========================

A tensor whose support respects i_a <= i_b for every relation a < b of a
connected poset has determinant equal to its diagonal product.
"""

import numpy as np

from hyperdet import Q, hyperdet
from hyperdet.order import echelon_det, find_echelon_poset, is_echelon_form, poset_new
from hyperdet.ranks import certify_via_echelon
from hyperdet.tensor import Tensor

P = poset_new(4, [(2, 1), (2, 3), (4, 3)])
print("poset:", P, " connected:", P.hasse_connected)

n = 3
rng = np.random.default_rng(0)
arr = np.zeros((n,) * 4, dtype=object)
for idx in np.ndindex(arr.shape):
    if all(idx[a - 1] <= idx[b - 1] for a, b in P.covers):
        arr[idx] = int(rng.integers(1, 5))
T = Tensor(Q, arr)
print("support entries:", len(T.support()), "of", n**4)
print("echelon:", bool(is_echelon_form(T, P)))
print("diagonal product:", echelon_det(T, P), "  full determinant:", hyperdet(T))

# without a poset the library searches for one
found = find_echelon_poset(T)
print("found poset:", found)
print("certificate:", certify_via_echelon(T).to_record())

# breaking the order condition is reported with the offending index
bad = T.set((1, 3, 1, 1), 1)
print("after adding (1,3,1,1):", is_echelon_form(bad, P))
