import itertools

import numpy as np
import pytest

from hyperdet.errors import IndexOutOfBounds, ShapeMismatch, SpecMismatch
from hyperdet.ring import Fp, Q, Z
from hyperdet.rng import Stream, random_tensor
from hyperdet.tensor import (
    SubtensorSelector,
    Tensor,
    contraction_product,
    diagonal_identity,
    direct_sum,
    hat_extension,
    matrix,
    mode_permute,
    multilinear_product,
    outer_product,
    replace_slice,
    subtensor,
    swap_slices,
    tensor_new,
    tensor_slice,
    zeros,
)


def idx(n, d):
    return itertools.product(range(n), repeat=d)


def test_construction_and_indexing():
    T = tensor_new(2, 2, Z, [1, 2, 3, 4])
    assert T[1, 2] == 2 and T[2, 1] == 3
    assert T.set((1, 1), 9)[1, 1] == 9 and T[1, 1] == 1
    with pytest.raises(IndexOutOfBounds):
        T[0, 1]
    with pytest.raises(IndexOutOfBounds):
        T[1, 3]
    with pytest.raises(ShapeMismatch):
        tensor_new(2, 2, Z, [1, 2, 3])
    with pytest.raises(ShapeMismatch):
        Tensor(Z, np.zeros((2, 3), dtype=object))
    with pytest.raises(ValueError):
        T.data[0, 0] = 5


def test_entries_are_canonical():
    T = Tensor.from_array(Fp(5), [[7, -1], [10, 3]])
    assert T.entries() == [2, 4, 0, 3]
    assert T.support() == [(1, 1), (1, 2), (2, 2)]
    assert T.astype(Fp(2)).entries() == [0, 0, 0, 1]


def test_empty_tensor():
    E = zeros(4, 0, Q)
    assert E.n == 0 and E.is_zero() and E.support() == []
    X = diagonal_identity(4, 2, Q)
    assert direct_sum(X, E) == X and direct_sum(E, X) == X


def test_diagonal_identity():
    I = diagonal_identity(3, 3, Q)
    assert I.support() == [(1, 1, 1), (2, 2, 2), (3, 3, 3)]
    assert diagonal_identity(1, 3, Q).entries() == [1, 1, 1]


def test_slices():
    T = random_tensor(Stream(1), 3, 3, Z)
    S = tensor_slice(T, 2, 3)
    for i, j in idx(3, 2):
        assert S.data[i, j] == T.data[i, 2, j]
    R = replace_slice(T, 2, 3, zeros(2, 3, Z))
    assert tensor_slice(R, 2, 3).is_zero() and tensor_slice(R, 2, 1) == tensor_slice(T, 2, 1)
    W = swap_slices(T, 3, 1, 2)
    assert tensor_slice(W, 3, 1) == tensor_slice(T, 3, 2)
    assert swap_slices(W, 3, 1, 2) == T


def test_subtensor():
    T = random_tensor(Stream(2), 3, 3, Q)
    sel = SubtensorSelector(((1, 3), (2, 3), (1, 2)))
    S = subtensor(T, sel)
    for a, b, c in idx(2, 3):
        assert S.data[a, b, c] == T.data[(1, 3)[a] - 1, (2, 3)[b] - 1, (1, 2)[c] - 1]
    assert sel.complement(3).index_sets == ((2,), (1,), (3,))
    with pytest.raises(ValueError):
        SubtensorSelector(((2, 1), (1, 2)))
    with pytest.raises(ShapeMismatch):
        SubtensorSelector(((1,), (1, 2)))
    with pytest.raises(IndexOutOfBounds):
        subtensor(T, ((1, 4), (1, 2), (1, 2)))


def test_multilinear_product_matches_definition():
    s = Stream(3)
    T = random_tensor(s, 3, 2, Fp(7))
    As = [random_tensor(s, 2, 2, Fp(7)) for _ in range(3)]
    M = multilinear_product(As, T)
    for i in idx(2, 3):
        total = 0
        for j in idx(2, 3):
            total += As[0].data[i[0], j[0]] * As[1].data[i[1], j[1]] * As[2].data[i[2], j[2]] * T.data[j]
        assert M.data[i] == total % 7
    with pytest.raises(SpecMismatch):
        multilinear_product([matrix(Q, [[1, 0], [0, 1]])] * 3, T)


def test_outer_and_contraction():
    s = Stream(4)
    X = random_tensor(s, 2, 2, Z)
    Y = random_tensor(s, 3, 2, Z)
    O = outer_product(X, Y)
    assert O.d == 5
    for i in idx(2, 5):
        assert O.data[i] == X.data[i[:2]] * Y.data[i[2:]]
    C = contraction_product(Y, X)
    assert C.d == 3
    for i in idx(2, 3):
        assert C.data[i] == sum(Y.data[i[0], i[1], l] * X.data[l, i[2]] for l in range(2))
    with pytest.raises(ShapeMismatch):
        outer_product(X, random_tensor(s, 2, 3, Z))


def test_direct_sum_blocks():
    s = Stream(5)
    X = random_tensor(s, 3, 2, Q)
    Y = random_tensor(s, 3, 1, Q)
    T = direct_sum(X, Y)
    assert T.n == 3
    for i in idx(3, 3):
        if all(c < 2 for c in i):
            assert T.data[i] == X.data[i]
        elif all(c == 2 for c in i):
            assert T.data[i] == Y.data[0, 0, 0]
        else:
            assert T.data[i] == 0


def test_hat_extension():
    X = random_tensor(Stream(6), 3, 3, Z)
    H = hat_extension(X)
    for i in idx(3, 4):
        assert H.data[i] == (X.data[i[:3]] if i[0] == i[3] else 0)


def test_mode_permute():
    X = random_tensor(Stream(7), 3, 3, Z)
    P = mode_permute(X, [2, 3, 1])
    for i in idx(3, 3):
        assert P.data[i] == X.data[i[1], i[2], i[0]]
    with pytest.raises(ValueError):
        mode_permute(X, [1, 1, 2])


def test_arithmetic_and_equality():
    s = Stream(8)
    X, Y = random_tensor(s, 3, 2, Fp(5)), random_tensor(s, 3, 2, Fp(5))
    assert (X + Y) - Y == X
    assert X + (-X) == zeros(3, 2, Fp(5))
    assert X.scale(2) == X + X
    assert hash(X) == hash(Tensor(Fp(5), X.data))
    with pytest.raises(SpecMismatch):
        X + random_tensor(s, 3, 2, Fp(7))
