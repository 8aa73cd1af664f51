"""Dense d-tensors over an exact ring, and the constructions built on them.

Entries are stored in a numpy object array of canonical ring payloads with
shape ``(n,) * d``; C order is the lexicographic row-major layout used by the
file formats.  Public indices are 1-based, as in ``T(i_1, ..., i_d)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import IndexOutOfBounds, ShapeMismatch, SpecMismatch
from .ring import RingSpec, RingValue

__all__ = [
    "Tensor",
    "SubtensorSelector",
    "tensor_new",
    "tensor_get",
    "tensor_set",
    "diagonal_identity",
    "zeros",
    "tensor_slice",
    "subtensor",
    "multilinear_product",
    "outer_product",
    "contraction_product",
    "direct_sum",
    "hat_extension",
    "mode_permute",
    "replace_slice",
    "swap_slices",
    "identity_matrix",
    "matrix",
]


def _normalize(arr: np.ndarray, spec: RingSpec) -> np.ndarray:
    if spec.modulus is not None:
        return arr % spec.modulus
    return arr


def _object_array(values, shape, spec: RingSpec) -> np.ndarray:
    arr = np.empty(len(values), dtype=object)
    arr[:] = [spec.coerce(v) for v in values]
    return arr.reshape(shape)


class Tensor:
    """An immutable ``[n]^d -> R`` array.

    ``data`` is a read-only numpy object array; every operation returns a new
    tensor.  ``n = 0`` is allowed (the empty tensor, neutral for ``direct_sum``).
    """

    __slots__ = ("spec", "data")

    def __init__(self, spec: RingSpec, data: np.ndarray, *, canonical: bool = False):
        data = np.asarray(data, dtype=object)
        if data.ndim < 1:
            raise ShapeMismatch("a tensor needs order d >= 1")
        if len(set(data.shape)) > 1:
            raise ShapeMismatch(f"tensors are cubical; got shape {data.shape}")
        if not canonical:
            flat = [spec.coerce(v) for v in data.reshape(-1)]
            data = _object_array(flat, data.shape, spec)
        data.flags.writeable = False
        self.spec = spec
        self.data = data

    @classmethod
    def from_array(cls, spec: RingSpec, values) -> "Tensor":
        """Build from a nested list / array of ints, Fractions or strings."""
        return cls(spec, np.array(values, dtype=object))

    @property
    def d(self) -> int:
        return self.data.ndim

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self):
        return self.data.shape

    def entries(self) -> list:
        """Payloads in lexicographic index order."""
        return list(self.data.reshape(-1))

    def _index(self, idx: Sequence[int]) -> tuple:
        idx = tuple(idx)
        if len(idx) != self.d:
            raise IndexOutOfBounds(f"expected {self.d} indices, got {len(idx)}")
        for i in idx:
            if not 1 <= i <= self.n:
                raise IndexOutOfBounds(f"index {idx} outside [1, {self.n}]^{self.d}")
        return tuple(i - 1 for i in idx)

    def __getitem__(self, idx) -> RingValue:
        if isinstance(idx, int):
            idx = (idx,)
        return RingValue(self.spec, self.data[self._index(idx)])

    def get(self, idx) -> RingValue:
        return self[idx]

    def set(self, idx, value) -> "Tensor":
        arr = self.data.copy()
        arr[self._index(idx)] = self.spec.coerce(value)
        return Tensor(self.spec, arr, canonical=True)

    def is_zero(self) -> bool:
        return not any(v != 0 for v in self.data.reshape(-1))

    def support(self) -> list[tuple[int, ...]]:
        """1-based indices of nonzero entries, lexicographically ordered."""
        nz = nonzero_mask(self)
        return [tuple(int(c) + 1 for c in ix) for ix in np.argwhere(nz)]

    def astype(self, spec: RingSpec) -> "Tensor":
        """Reinterpret entries in another ring (e.g. integer tensor over F_p)."""
        return Tensor(spec, self.data)

    # -- arithmetic -----------------------------------------------------------

    def _same(self, other: "Tensor"):
        if not isinstance(other, Tensor):
            raise TypeError(f"expected Tensor, got {type(other).__name__}")
        if other.spec != self.spec:
            raise SpecMismatch(f"{self.spec} vs {other.spec}")
        if other.shape != self.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._same(other)
        return Tensor(self.spec, _normalize(self.data + other.data, self.spec), canonical=True)

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._same(other)
        return Tensor(self.spec, _normalize(self.data - other.data, self.spec), canonical=True)

    def __neg__(self) -> "Tensor":
        return Tensor(self.spec, _normalize(-self.data, self.spec), canonical=True)

    def scale(self, c) -> "Tensor":
        c = self.spec.coerce(c)
        return Tensor(self.spec, _normalize(self.data * c, self.spec), canonical=True)

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.shape == other.shape
            and bool(np.all(self.data == other.data))
        )

    def __hash__(self):
        return hash((self.spec, self.shape, tuple(self.data.reshape(-1))))

    def __repr__(self):
        return f"Tensor(d={self.d}, n={self.n}, ring={self.spec})"


def nonzero_mask(T: Tensor) -> np.ndarray:
    return np.frompyfunc(bool, 1, 1)(T.data).astype(bool) if T.data.size else np.zeros(T.shape, bool)


@dataclass(frozen=True)
class SubtensorSelector:
    """Index sets ``I_1, ..., I_d`` (1-based, strictly increasing, equal sizes)."""

    index_sets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        sets = tuple(tuple(int(i) for i in s) for s in self.index_sets)
        object.__setattr__(self, "index_sets", sets)
        for s in sets:
            if any(a >= b for a, b in zip(s, s[1:])):
                raise ValueError(f"index set {s} is not strictly increasing")
        if len({len(s) for s in sets}) > 1:
            raise ShapeMismatch("subtensor index sets must have equal sizes")

    @property
    def k(self) -> int:
        return len(self.index_sets[0]) if self.index_sets else 0

    def complement(self, n: int) -> "SubtensorSelector":
        return SubtensorSelector(
            tuple(tuple(i for i in range(1, n + 1) if i not in s) for s in self.index_sets)
        )


# -- constructors ---------------------------------------------------------------


def tensor_new(d: int, n: int, spec: RingSpec, entries: Iterable) -> Tensor:
    """Tensor from ``n**d`` entries listed in lexicographic index order."""
    entries = list(entries)
    if d < 1 or n < 0:
        raise ShapeMismatch(f"bad shape d={d}, n={n}")
    if len(entries) != n**d:
        raise ShapeMismatch(f"expected {n**d} entries, got {len(entries)}")
    return Tensor(spec, _object_array(entries, (n,) * d, spec), canonical=True)


def tensor_get(T: Tensor, idx) -> RingValue:
    return T[idx]


def tensor_set(T: Tensor, idx, value) -> Tensor:
    return T.set(idx, value)


def zeros(d: int, n: int, spec: RingSpec) -> Tensor:
    arr = np.empty((n,) * d, dtype=object)
    arr.fill(spec.zero())
    return Tensor(spec, arr, canonical=True)


def _zeros_array(shape, spec: RingSpec) -> np.ndarray:
    arr = np.empty(shape, dtype=object)
    arr.fill(spec.zero())
    return arr


def diagonal_identity(d: int, n: int, spec: RingSpec) -> Tensor:
    """``I(i_1..i_d) = 1`` iff all indices agree.  For ``d = 1`` this is all ones."""
    if d < 1:
        raise ShapeMismatch("d must be >= 1")
    arr = _zeros_array((n,) * d, spec)
    for i in range(n):
        arr[(i,) * d] = spec.one()
    return Tensor(spec, arr, canonical=True)


def identity_matrix(n: int, spec: RingSpec) -> Tensor:
    return diagonal_identity(2, n, spec)


def matrix(spec: RingSpec, rows) -> Tensor:
    return Tensor.from_array(spec, rows)


# -- slices and subtensors ----------------------------------------------------


def tensor_slice(T: Tensor, k: int, layer: int) -> Tensor:
    """The ``layer``-th slice in direction ``k``: fix coordinate ``k``."""
    if not 1 <= k <= T.d or not 1 <= layer <= T.n:
        raise IndexOutOfBounds(f"slice ({k}, {layer}) of {T!r}")
    if T.d == 1:
        raise ShapeMismatch("slices of an order-1 tensor are scalars")
    return Tensor(T.spec, np.take(T.data, layer - 1, axis=k - 1), canonical=True)


def replace_slice(T: Tensor, k: int, layer: int, S: Tensor) -> Tensor:
    """Copy of ``T`` with slice ``(k, layer)`` replaced by ``S``."""
    if S.d != T.d - 1 or S.n != T.n or S.spec != T.spec:
        raise ShapeMismatch("replacement slice has the wrong shape or ring")
    arr = T.data.copy()
    index = [slice(None)] * T.d
    index[k - 1] = layer - 1
    arr[tuple(index)] = S.data
    return Tensor(T.spec, arr, canonical=True)


def swap_slices(T: Tensor, k: int, a: int, b: int) -> Tensor:
    arr = T.data.copy()
    ia = [slice(None)] * T.d
    ib = [slice(None)] * T.d
    ia[k - 1] = a - 1
    ib[k - 1] = b - 1
    arr[tuple(ia)], arr[tuple(ib)] = T.data[tuple(ib)].copy(), T.data[tuple(ia)].copy()
    return Tensor(T.spec, arr, canonical=True)


def subtensor(T: Tensor, sel: SubtensorSelector | Sequence[Sequence[int]]) -> Tensor:
    """Restriction of ``T`` to ``I_1 x ... x I_d`` with relabelled indices."""
    if not isinstance(sel, SubtensorSelector):
        sel = SubtensorSelector(tuple(tuple(s) for s in sel))
    if len(sel.index_sets) != T.d:
        raise ShapeMismatch(f"selector has {len(sel.index_sets)} sets for order {T.d}")
    for s in sel.index_sets:
        if s and (s[0] < 1 or s[-1] > T.n):
            raise IndexOutOfBounds(f"index set {s} outside [1, {T.n}]")
    if sel.k == 0:
        return Tensor(T.spec, _zeros_array((0,) * T.d, T.spec), canonical=True)
    ix = np.ix_(*[np.asarray(s) - 1 for s in sel.index_sets])
    return Tensor(T.spec, T.data[ix], canonical=True)


# -- products -------------------------------------------------------------------


def _mode_product(arr: np.ndarray, A: np.ndarray, mode: int, spec: RingSpec) -> np.ndarray:
    out = np.tensordot(A, arr, axes=([1], [mode]))
    return _normalize(np.moveaxis(out, 0, mode), spec)


def multilinear_product(matrices: Sequence[Tensor], T: Tensor) -> Tensor:
    """``(A_1, ..., A_d) . T`` evaluated as d single-mode contractions."""
    if len(matrices) != T.d:
        raise ShapeMismatch(f"need {T.d} matrices, got {len(matrices)}")
    arr = T.data
    for mode, A in enumerate(matrices):
        if A.d != 2 or A.n != T.n:
            raise ShapeMismatch("multilinear product needs n x n matrices")
        if A.spec != T.spec:
            raise SpecMismatch(f"{A.spec} vs {T.spec}")
        arr = _mode_product(arr, A.data, mode, T.spec)
    return Tensor(T.spec, arr, canonical=True)


def _check_pair(X: Tensor, Y: Tensor):
    if X.spec != Y.spec:
        raise SpecMismatch(f"{X.spec} vs {Y.spec}")


def outer_product(X: Tensor, Y: Tensor) -> Tensor:
    """``T(i_1..i_d) = X(i_1..i_k) Y(i_{k+1}..i_d)``."""
    _check_pair(X, Y)
    if X.n != Y.n:
        raise ShapeMismatch(f"side lengths differ: {X.n} vs {Y.n}")
    return Tensor(X.spec, _normalize(np.multiply.outer(X.data, Y.data), X.spec), canonical=True)


def contraction_product(X: Tensor, Y: Tensor) -> Tensor:
    """Contract the last index of ``X`` with the first index of ``Y``."""
    _check_pair(X, Y)
    if X.n != Y.n:
        raise ShapeMismatch(f"side lengths differ: {X.n} vs {Y.n}")
    if X.d + Y.d - 2 < 1:
        raise ShapeMismatch("contraction of two vectors is a scalar, not a tensor")
    out = np.tensordot(X.data, Y.data, axes=([X.d - 1], [0]))
    return Tensor(X.spec, _normalize(np.asarray(out, dtype=object), X.spec), canonical=True)


def direct_sum(X: Tensor, Y: Tensor) -> Tensor:
    """Block-diagonal placement of ``X`` (side n) and ``Y`` (side m)."""
    _check_pair(X, Y)
    if X.d != Y.d:
        raise ShapeMismatch(f"orders differ: {X.d} vs {Y.d}")
    n, m = X.n, Y.n
    arr = _zeros_array((n + m,) * X.d, X.spec)
    arr[(slice(0, n),) * X.d] = X.data
    arr[(slice(n, n + m),) * X.d] = Y.data
    return Tensor(X.spec, arr, canonical=True)


def hat_extension(X: Tensor) -> Tensor:
    """Order ``d+1`` tensor ``X(i_1..i_d) * delta(i_1, i_{d+1})``."""
    n, d = X.n, X.d
    arr = _zeros_array((n,) * (d + 1), X.spec)
    for i in range(n):
        arr[(i,) + (slice(None),) * (d - 1) + (i,)] = X.data[i]
    return Tensor(X.spec, arr, canonical=True)


def mode_permute(T: Tensor, perm: Sequence[int]) -> Tensor:
    """``T'(i_1..i_d) = T(i_{perm(1)}, ..., i_{perm(d)})`` with 1-based ``perm``."""
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(1, T.d + 1)):
        raise ValueError(f"{perm} is not a permutation of [1..{T.d}]")
    # out axis perm(k) carries coordinate k of T
    inverse = [0] * T.d
    for k, p in enumerate(perm):
        inverse[p - 1] = k
    return Tensor(T.spec, np.transpose(T.data, inverse), canonical=True)
