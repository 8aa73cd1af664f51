"""
Rank lower bounds from nonzero hyperdeterminants
================================================

A nonzero determinant forces full odd partition rank.  The examples below
separate the four rank notions on tensors built from identities.
"""

from hyperdet import Fp, Q, RankKind, diagonal_identity, hyperdet, outer_product
from hyperdet.ranks import (
    brute_force_rank,
    certify_oprank_full,
    certify_prank_bound,
    is_simple,
    oprank_direct_sum_check,
)
from hyperdet.tensor import Tensor, direct_sum
import numpy as np

n = 2
X = outer_product(diagonal_identity(2, n, Q), diagonal_identity(4, n, Q))
print("I2 (x) I4: prank-simple blocks", is_simple(X, RankKind.PARTITION).blocks)
cert = certify_oprank_full(X)
print("  certificate:", cert.to_record())

# I3 (x) I3 is oprank-simple, so its determinant has to vanish
Y = outer_product(diagonal_identity(3, n, Q), diagonal_identity(3, n, Q))
print("I3 (x) I3: oprank-simple blocks", is_simple(Y, RankKind.ODD_PARTITION).blocks, " det =", hyperdet(Y))

# exactly one coordinate equal to 2: det 0 and partition rank 2
arr = np.zeros((2,) * 6, dtype=object)
for idx in np.ndindex(arr.shape):
    if sum(1 for v in idx if v == 1) == 1:
        arr[idx] = 1
Z = Tensor(Fp(3), arr)
res = brute_force_rank(Z, RankKind.PARTITION, 3)
print("one-two tensor: det =", hyperdet(Z), " prank =", res.rank)
for term in res.terms:
    print("   blocks", term.blocks)

# in characteristic p the determinant only bounds prank by n/(p-1)
I = diagonal_identity(4, 4, Fp(3))
print("prank bound for I over F_3:", certify_prank_bound(I).to_record())

# odd partition rank adds over direct sums of full tensors
D = oprank_direct_sum_check(diagonal_identity(4, 2, Q), diagonal_identity(4, 1, Q))
print("oprank(I (+) I') =", D.lower, " witness terms:", len(D.witness))
print("det of the sum:", hyperdet(direct_sum(diagonal_identity(4, 2, Q), diagonal_identity(4, 1, Q))))
