"""Rebuild the golden fixture inputs under fixtures/.

Expected CLI outputs live in fixtures/expected.jsonl and are maintained by
hand; this script only writes inputs, so rerunning it must leave git clean.

    python3 fixtures/regenerate.py
"""

import itertools
from pathlib import Path

import numpy as np

from hyperdet import Fp, Q, Tensor, diagonal_identity, matrix, outer_product, poset_new, chain, zeros
from hyperdet.capset import ColoredFamily, search_sum_ordered
from hyperdet.formats import format_family, format_poset, format_tensor

ROOT = Path(__file__).resolve().parent


def write(rel, text):
    path = ROOT / rel
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def tensors():
    out = {}
    for d in range(2, 7):
        for n in (1, 2, 3):
            out[f"identity_d{d}_n{n}_Q"] = diagonal_identity(d, n, Q)
    for n in (2, 3):
        out[f"i2_i4_n{n}_Q"] = outer_product(diagonal_identity(2, n, Q), diagonal_identity(4, n, Q))
        out[f"i3_i3_n{n}_Q"] = outer_product(diagonal_identity(3, n, Q), diagonal_identity(3, n, Q))
    for d in (3, 5):
        out[f"i1_i{d - 1}_n2_Q"] = outer_product(diagonal_identity(1, 2, Q), diagonal_identity(d - 1, 2, Q))
    # order-6 side-2 indicator of tuples with exactly one coordinate equal to 2
    arr = np.zeros((2,) * 6, dtype=object)
    for idx in itertools.product(range(2), repeat=6):
        if sum(idx) == 1:
            arr[idx] = 1
    out["one_two_d6_n2_F3"] = Tensor.from_array(Fp(3), arr)
    out["identity_d3_n2_F2"] = diagonal_identity(3, 2, Fp(2))
    out["identity_d4_n4_F3"] = diagonal_identity(4, 4, Fp(3))
    out["matrix_2x2_Q"] = matrix(Q, [[1, 2], [3, 4]])
    out["upper_triangular_Q"] = matrix(Q, [[2, 5], [0, 3]])
    out["empty_d4_Q"] = zeros(4, 0, Q)
    return out


def posets():
    return {
        "chain2": chain(2),
        "chain3": chain(3),
        "chain4": chain(4),
        "zigzag4": poset_new(4, [(2, 1), (2, 3), (4, 3)]),
        "disconnected4": poset_new(4, [(1, 2)]),
    }


def families():
    out = {}
    for p, n, d, N in [(2, 2, 3, 2), (3, 1, 3, 2), (2, 1, 3, 1), (3, 2, 3, 3), (3, 2, 4, 2), (2, 3, 3, 3)]:
        F = search_sum_ordered(p, n, d, N)
        assert F is not None, (p, n, d, N)
        out[f"found_p{p}_n{n}_d{d}_N{N}"] = F
    # every coordinate pair is ordered both ways by some vanishing sum
    out["unordered_p2_n2_d3_N2"] = ColoredFamily(2, [[[0, 0], [0, 1]], [[0, 1], [0, 0]], [[0, 1], [0, 1]]])
    out["bad_diagonal_p2_n2_d3_N2"] = ColoredFamily(2, [[[0, 0], [1, 0]], [[0, 0], [0, 0]], [[0, 0], [0, 0]]])
    return out


def main():
    for name, T in tensors().items():
        layout = "sparse" if T.d >= 5 else "dense"
        write(f"tensors/{name}.hdt", format_tensor(T, layout))
    for name, P in posets().items():
        write(f"posets/{name}.poset", format_poset(P))
    for name, F in families().items():
        write(f"families/{name}.csf", format_family(F))


if __name__ == "__main__":
    main()
