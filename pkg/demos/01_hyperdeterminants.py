"""
Hyperdeterminants of small tensors
==================================

The hyperdeterminant of a d-tensor sums over (d-1)-tuples of permutations.
For d = 2 it is the ordinary determinant.
"""

import time
from math import factorial

from hyperdet import Fp, Q, diagonal_identity, hyperdet, matrix, outer_product
from hyperdet.rng import Stream, random_tensor
from hyperdet.tensor import swap_slices

# a matrix first
A = matrix(Q, [[1, 2], [3, 4]])
print("det A =", hyperdet(A))

# the diagonal identity has determinant 1 in every order
for d in range(2, 7):
    print(f"d={d}: det I =", hyperdet(diagonal_identity(d, 3, Q)))

# outer products pick up a factor n! when the second factor has even order
n = 3
X = outer_product(diagonal_identity(2, n, Q), diagonal_identity(4, n, Q))
print("det(I2 (x) I4) =", hyperdet(X), "  n! =", factorial(n))
Y = outer_product(diagonal_identity(3, n, Q), diagonal_identity(3, n, Q))
print("det(I3 (x) I3) =", hyperdet(Y))

# swapping parallel slices flips the sign for even d
s = Stream(1)
T = random_tensor(s, 4, 3, Q)
print("det T =", hyperdet(T), "  after a swap:", hyperdet(swap_slices(T, 2, 1, 3)))

# odd d is symmetric in direction 1 and skew in the others
U = random_tensor(s, 3, 3, Q)
print("odd d:", hyperdet(U), hyperdet(swap_slices(U, 1, 1, 2)), hyperdet(swap_slices(U, 2, 1, 2)))

# the three engines agree; the subset DP is much faster than the plain sum
V = random_tensor(s, 3, 7, Fp(7))
for engine in ("dp", "naive"):
    t0 = time.perf_counter()
    value = hyperdet(V, engine=engine)
    print(f"{engine:>6}: det = {value}  ({time.perf_counter() - t0:.4f} s)")
W = random_tensor(s, 4, 4, Fp(7))
print("laplace vs dp:", hyperdet(W, engine="laplace"), hyperdet(W, engine="dp"))
