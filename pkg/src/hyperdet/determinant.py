"""Cayley's first hyperdeterminant and the identities around it.

Two independent engines compute

    det(T) = sum over sigma_2..sigma_d in S_n of
             sgn(sigma_2 ... sigma_d) * prod_i T(i, sigma_2(i), ..., sigma_d(i)).

``hyperdet_naive`` walks the full (n!)^(d-1) term list, vectorised over the
last permutation only.  ``hyperdet_dp`` runs a row-by-row dynamic program whose
state is the tuple of value sets already used by sigma_2..sigma_d; the sign is
tracked through inversion parities, so no permutation is ever materialised.

Modular rings with modulus below 2**31 run on int64 arrays (every product is
reduced before it can overflow); other rings run on object arrays of exact
payloads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial, prod
from typing import Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded, HypothesisNotMet, OddOrder, ShapeMismatch, SupportViolation
from .ring import RingSpec, RingValue
from .tensor import SubtensorSelector, Tensor, nonzero_mask

__all__ = [
    "NAIVE_BUDGET",
    "DP_BUDGET",
    "MINOR_BUDGET",
    "PermutationTuple",
    "MinorSign",
    "MinorTerm",
    "MinorSummation",
    "NullityResult",
    "hyperdet",
    "hyperdet_naive",
    "hyperdet_dp",
    "laplace_expand",
    "permutation_terms",
    "minor_summation",
    "epsilon_sign",
    "is_k_null",
    "knull_propagate",
    "hyperpermanent",
    "mixed_discriminant",
    "reduce_repeated_index",
]

NAIVE_BUDGET = 10**8
DP_BUDGET = 2**26
MINOR_BUDGET = 10**6

_FAST_LIMIT = 2**31
_CHUNK = 1 << 21


class _Arith:
    """Array arithmetic over one ring (int64 fast path or exact objects)."""

    def __init__(self, spec: RingSpec):
        self.spec = spec
        self.m = spec.modulus
        self.fast = self.m is not None and self.m < _FAST_LIMIT
        self.dtype = np.int64 if self.fast else object

    def work(self, arr: np.ndarray) -> np.ndarray:
        return arr.astype(np.int64) if self.fast else arr

    def reduce(self, a):
        return a % self.m if self.m is not None else a

    def mul(self, a, b):
        return self.reduce(a * b)

    def negate_where(self, a, mask):
        if self.m is not None:
            return np.where(mask, (self.m - a) % self.m, a)
        return np.where(np.broadcast_to(mask, a.shape), -a, a)

    def ones(self, shape):
        if self.fast:
            return np.ones(shape, dtype=np.int64)
        out = np.empty(shape, dtype=object)
        out.fill(self.spec.one())
        return out

    def zeros(self, shape):
        if self.fast:
            return np.zeros(shape, dtype=np.int64)
        out = np.empty(shape, dtype=object)
        out.fill(self.spec.zero())
        return out

    def payload(self, x):
        return self.spec.coerce(int(x) if self.fast else x)


# -- permutation tables ----------------------------------------------------------


@lru_cache(maxsize=16)
def _perm_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    """All permutations of range(n) in lexicographic order, with signs."""
    P = np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)
    parity = np.zeros(len(P), dtype=np.int64)
    for a in range(n):
        for b in range(a + 1, n):
            parity ^= (P[:, a] > P[:, b]).astype(np.int64)
    signs = 1 - 2 * parity
    P.flags.writeable = False
    signs.flags.writeable = False
    return P, signs


def _perm_sign(seq: Sequence[int]) -> int:
    inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return -1 if inv % 2 else 1


@dataclass(frozen=True)
class PermutationTuple:
    """``(sigma_2, ..., sigma_d)`` as 1-based tuples, with ``sgn(sigma_2...sigma_d)``."""

    perms: tuple[tuple[int, ...], ...]
    sign: int


def permutation_terms(T: Tensor, budget: int = NAIVE_BUDGET) -> Iterator[tuple[PermutationTuple, RingValue]]:
    """Yield every term of the defining sum, in lexicographic order.

    Pure Python and slow; meant for inspecting small cases (e.g. counting the
    nonzero terms of an echelon tensor).
    """
    n, d = T.n, T.d
    _check_naive_budget(n, d, budget)
    spec = T.spec
    perms = list(itertools.permutations(range(n)))
    signs = [_perm_sign(p) for p in perms]
    for combo in itertools.product(range(len(perms)), repeat=d - 1):
        sign = prod(signs[c] for c in combo)
        value = spec.one()
        for i in range(n):
            value = spec.mul(value, T.data[(i,) + tuple(perms[c][i] for c in combo)])
        pt = PermutationTuple(tuple(tuple(v + 1 for v in perms[c]) for c in combo), sign)
        yield pt, RingValue(spec, value if sign > 0 else spec.neg(value))


# -- naive engine ---------------------------------------------------------------


def _check_naive_budget(n: int, d: int, budget: int):
    terms = factorial(n) ** max(d - 1, 0)
    if terms > budget:
        raise BudgetExceeded("naive hyperdeterminant terms", terms, budget)


def hyperdet_naive(T: Tensor, budget: int = NAIVE_BUDGET) -> RingValue:
    """The defining signed sum over all (n!)^(d-1) permutation tuples."""
    n, d, spec = T.n, T.d, T.spec
    _check_naive_budget(n, d, budget)
    ar = _Arith(spec)
    if n == 0:
        return RingValue(spec, spec.one())
    W = ar.work(T.data)
    if d == 1:
        value = spec.one()
        for v in W:
            value = spec.mul(value, ar.payload(v))
        return RingValue(spec, value)
    P, signs = _perm_table(n)
    rows = np.arange(n)
    total = spec.zero()
    for mids in itertools.product(range(len(P)), repeat=d - 2):
        outer_sign = prod(int(signs[c]) for c in mids)
        A = W[(rows,) + tuple(P[c] for c in mids)]  # A[i, j] = T(i, s2(i), .., j)
        G = A[rows[None, :], P]  # G[s, i] = A[i, P[s, i]]
        prods = G[:, 0]
        for c in range(1, n):
            prods = ar.mul(prods, G[:, c])
        term = ar.payload(np.dot(signs, prods) if ar.fast else np.dot(signs.astype(object), prods))
        total = spec.add(total, term) if outer_sign > 0 else spec.sub(total, term)
    return RingValue(spec, total)


# -- dynamic-programming engine -------------------------------------------------


def _dp_state_count(n: int, slots: int) -> int:
    return sum(comb(n, i) ** slots for i in range(n + 1))


@lru_cache(maxsize=256)
def _layer_states(n: int, slots: int, i: int) -> np.ndarray:
    """Sorted packed states: one i-subset of range(n) per slot, slot k at bits k*n."""
    subsets = [sum(1 << v for v in c) for c in itertools.combinations(range(n), i)]
    packed = np.zeros(1, dtype=np.uint64)
    for k in range(slots):
        sub = np.array(subsets, dtype=np.uint64) << np.uint64(k * n)
        packed = (packed[:, None] | sub[None, :]).reshape(-1)
    packed.sort()
    packed.flags.writeable = False
    return packed


@lru_cache(maxsize=64)
def _tuple_masks(n: int, slots: int) -> tuple[np.ndarray, np.ndarray]:
    """For each value tuple (j_1..j_slots) in C order: used-bit mask, above-bit mask."""
    full = (1 << n) - 1
    used = np.zeros(n**slots, dtype=np.uint64)
    above = np.zeros(n**slots, dtype=np.uint64)
    for f, js in enumerate(itertools.product(range(n), repeat=slots)):
        u = a = 0
        for k, j in enumerate(js):
            u |= 1 << (j + k * n)
            a |= (full ^ ((1 << (j + 1)) - 1)) << (k * n)
        used[f] = u
        above[f] = a
    return used, above


def _transitions(n: int, slots: int, i: int, lo: int, hi: int):
    """Transition arrays for source states ``lo:hi`` of layer i, grouped by target.

    Returns (src, flat, neg, tgt_unique, starts) where ``src`` indexes layer i,
    ``flat`` is the C-order index of (j_2..j_d) into the row slice, ``neg`` the
    inversion parity, and ``tgt_unique`` the layer-(i+1) indices hit, with
    ``starts`` the reduceat offsets for each.
    """
    states = _layer_states(n, slots, i)[lo:hi]
    nxt = _layer_states(n, slots, i + 1)
    used, above = _tuple_masks(n, slots)
    valid = (states[:, None] & used[None, :]) == 0
    src, flat = np.nonzero(valid)
    tgt_state = states[src] | used[flat]
    neg = (np.bitwise_count(states[src] & above[flat]) & 1).astype(bool)
    tgt = np.searchsorted(nxt, tgt_state)
    order = np.argsort(tgt, kind="stable")
    src, flat, neg, tgt = src[order] + lo, flat[order], neg[order], tgt[order]
    uniq, starts = np.unique(tgt, return_index=True)
    return src, flat, neg, uniq, starts


@lru_cache(maxsize=256)
def _cached_layer(n: int, slots: int, i: int):
    return _transitions(n, slots, i, 0, len(_layer_states(n, slots, i)))


def _layer_chunks(n: int, slots: int, i: int):
    size = len(_layer_states(n, slots, i))
    if size * n**slots <= _CHUNK:
        yield _cached_layer(n, slots, i)
        return
    step = max(1, _CHUNK // max(n**slots, 1))
    for lo in range(0, size, step):
        yield _transitions(n, slots, i, lo, min(size, lo + step))


def _dp_batch(W: np.ndarray, ar: _Arith, signed: bool = True) -> np.ndarray:
    """Row DP on a batch ``W`` of shape (B, n, ..., n); returns B values."""
    B = W.shape[0]
    d = W.ndim - 1
    n = W.shape[1]
    if n == 0:
        return ar.ones(B)
    if d == 1:
        out = ar.ones(B)
        for i in range(n):
            out = ar.mul(out, W[:, i])
        return out
    slots = d - 1
    dp = ar.ones((B, 1))
    for i in range(n):
        row = W[:, i].reshape(B, -1)
        new = ar.zeros((B, len(_layer_states(n, slots, i + 1))))
        for src, flat, neg, uniq, starts in _layer_chunks(n, slots, i):
            contrib = ar.mul(dp[:, src], row[:, flat])
            if signed:
                contrib = ar.negate_where(contrib, neg[None, :])
            new[:, uniq] = ar.reduce(new[:, uniq] + np.add.reduceat(contrib, starts, axis=1))
        dp = new
    return dp[:, 0]


def _check_dp_budget(n: int, d: int, budget: int):
    if d < 2:
        return
    states = _dp_state_count(n, d - 1)
    if states > budget or n * (d - 1) > 63:
        raise BudgetExceeded("DP states", states, budget)


def _det_stack(stack: np.ndarray, spec: RingSpec, budget: int = DP_BUDGET, signed: bool = True) -> list:
    """Batched DP determinants of payload arrays stacked on axis 0."""
    d = stack.ndim - 1
    n = stack.shape[1] if d else 0
    _check_dp_budget(n, d, budget)
    ar = _Arith(spec)
    vals = _dp_batch(ar.work(stack), ar, signed=signed)
    return [ar.payload(v) for v in vals]


def hyperdet_dp(T: Tensor, budget: int = DP_BUDGET) -> RingValue:
    """Hyperdeterminant by the used-value-set dynamic program."""
    return RingValue(T.spec, _det_stack(T.data[None], T.spec, budget)[0])


# -- Laplace expansion ----------------------------------------------------------


def _laplace(arr: np.ndarray, spec: RingSpec, cutoff: int, budget: int):
    n, d = arr.shape[0], arr.ndim
    if n == 0:
        return spec.one()
    if n == 1:
        return arr[(0,) * d]
    if n <= cutoff:
        return _det_stack(arr[None], spec, budget)[0]
    rest = [np.array([r for r in range(n) if r != j]) for j in range(n)]
    total = spec.zero()
    for js in itertools.product(range(n), repeat=d - 1):
        v = arr[(0,) + js]
        if v == 0:
            continue
        minor = arr[np.ix_(rest[0], *[rest[j] for j in js])]
        term = spec.mul(v, _laplace(minor, spec, cutoff, budget))
        # (-1)^(1 + i_2 + .. + i_d) with 1-based i, even d
        total = spec.sub(total, term) if sum(js) % 2 else spec.add(total, term)
    return total


def laplace_expand(T: Tensor, cutoff: int = 2, budget: int = DP_BUDGET) -> RingValue:
    """Expansion along the first slice in direction 1 (even d only).

    Minors of side ``<= cutoff`` are handed to the DP engine; ``cutoff=0``
    recurses all the way down to single entries.
    """
    if T.d % 2:
        raise OddOrder(f"Laplace expansion needs even d, got d={T.d}")
    return RingValue(T.spec, _laplace(T.data, T.spec, cutoff, budget))


def hyperdet(T: Tensor, engine: str = "dp", budget: int | None = None) -> RingValue:
    """Dispatch to ``naive``, ``dp`` or ``laplace``."""
    if engine == "naive":
        return hyperdet_naive(T, NAIVE_BUDGET if budget is None else budget)
    if engine == "dp":
        return hyperdet_dp(T, DP_BUDGET if budget is None else budget)
    if engine == "laplace":
        return laplace_expand(T, budget=DP_BUDGET if budget is None else budget)
    raise ValueError(f"unknown engine {engine!r}")


# -- minors ---------------------------------------------------------------------


def epsilon_sign(index_sets: Sequence[Sequence[int]], n: int) -> int:
    """``sgn(pi_{I_1} ... pi_{I_d})``; pi_I lists sorted I, then its sorted complement."""
    inversions = 0
    for s in index_sets:
        members = set(s)
        for a in members:
            inversions += sum(1 for b in range(1, a) if b not in members)
    return -1 if inversions % 2 else 1


@dataclass(frozen=True)
class MinorSign:
    index_sets: tuple[tuple[int, ...], ...]
    epsilon: int


@dataclass(frozen=True)
class MinorTerm:
    sign: MinorSign
    det_x: RingValue
    det_y: RingValue

    @property
    def value(self) -> RingValue:
        v = self.det_x * self.det_y
        return v if self.sign.epsilon > 0 else -v


@dataclass(frozen=True)
class MinorSummation:
    total: RingValue
    terms: tuple[MinorTerm, ...]


def _selectors(n: int, k: int, d: int):
    subsets = list(itertools.combinations(range(1, n + 1), k))
    return itertools.product(subsets, repeat=d)


def _gather(arr: np.ndarray, sels) -> np.ndarray:
    k = len(sels[0][0])
    d = arr.ndim
    out = np.empty((len(sels),) + (k,) * d, dtype=object)
    for b, sel in enumerate(sels):
        if k:
            out[b] = arr[np.ix_(*[np.asarray(s) - 1 for s in sel])]
    return out


def minor_summation(X: Tensor, Y: Tensor, ks: Sequence[int] | None = None,
                    budget: int = MINOR_BUDGET) -> MinorSummation:
    """Expand ``det(X + Y)`` over all pairs of complementary minors.

    ``ks`` restricts the strata (minor side k) that are summed; by default all
    of ``0..n`` are used and ``total`` equals ``det(X + Y)``.
    """
    if X.d % 2:
        raise OddOrder(f"minor summation needs even d, got d={X.d}")
    if X.shape != Y.shape or X.spec != Y.spec:
        raise ShapeMismatch("X and Y must share shape and ring")
    n, d, spec = X.n, X.d, X.spec
    ks = range(n + 1) if ks is None else ks
    count = sum(comb(n, k) ** d for k in ks)
    if count > budget:
        raise BudgetExceeded("minor pairs", count, budget)
    terms = []
    total = spec.zero()
    for k in ks:
        sels = list(_selectors(n, k, d))
        comps = [tuple(tuple(i for i in range(1, n + 1) if i not in s) for s in sel) for sel in sels]
        dx = _det_stack(_gather(X.data, sels), spec)
        dy = _det_stack(_gather(Y.data, comps), spec)
        for sel, a, b in zip(sels, dx, dy):
            eps = epsilon_sign(sel, n)
            t = MinorTerm(MinorSign(sel, eps), RingValue(spec, a), RingValue(spec, b))
            terms.append(t)
            total = spec.add(total, t.value.payload)
    return MinorSummation(RingValue(spec, total), tuple(terms))


@dataclass(frozen=True)
class NullityResult:
    """Outcome of a k-nullity check; truthy iff the tensor is k-null."""

    null: bool
    k: int
    witness: SubtensorSelector | None = None
    det: RingValue | None = None

    def __bool__(self):
        return self.null


def is_k_null(T: Tensor, k: int, budget: int = MINOR_BUDGET) -> NullityResult:
    """Check that every k x ... x k minor has vanishing hyperdeterminant.

    On failure the lexicographically first nonvanishing minor is returned.
    """
    n, d = T.n, T.d
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    count = comb(n, k) ** d
    if count > budget:
        raise BudgetExceeded("k-minors", count, budget)
    sel_iter = _selectors(n, k, d)
    step = 4096
    while True:
        batch = list(itertools.islice(sel_iter, step))
        if not batch:
            return NullityResult(True, k)
        dets = _det_stack(_gather(T.data, batch), T.spec)
        for sel, v in zip(batch, dets):
            if v != 0:
                return NullityResult(False, k, SubtensorSelector(sel), RingValue(T.spec, v))


def knull_propagate(T: Tensor, k: int, budget: int = MINOR_BUDGET) -> bool:
    """For even d: given that ``T`` is k-null, confirm it is (k+1)-null."""
    if T.d % 2:
        raise OddOrder(f"null propagation holds for even d, got d={T.d}")
    if k >= T.n:
        return True
    if not is_k_null(T, k, budget):
        raise HypothesisNotMet(f"tensor is not {k}-null")
    return is_k_null(T, k + 1, budget).null


# -- reductions -----------------------------------------------------------------


def hyperpermanent(X: Tensor, budget: int = DP_BUDGET) -> RingValue:
    """Unsigned version of the defining sum (the matrix permanent for k = 2)."""
    return RingValue(X.spec, _det_stack(X.data[None], X.spec, budget, signed=False)[0])


def mixed_discriminant(matrices: Sequence[Tensor], budget: int = DP_BUDGET) -> RingValue:
    """``D(A_1..A_n)`` as the hyperdeterminant of the stack ``T(l, i, j) = A_l(i, j)``."""
    n = len(matrices)
    for A in matrices:
        if A.d != 2 or A.n != n or A.spec != matrices[0].spec:
            raise ShapeMismatch("mixed discriminant needs n matrices of size n x n over one ring")
    if n == 0:
        raise ShapeMismatch("need at least one matrix")
    stack = np.stack([A.data for A in matrices]).astype(object)
    return hyperdet_dp(Tensor(matrices[0].spec, stack, canonical=True), budget)


def reduce_repeated_index(T: Tensor) -> Tensor:
    """Drop the first coordinate of a tensor supported on ``i_1 = i_2``.

    ``T'(i_2, ..., i_d) = T(i_2, i_2, i_3, ..., i_d)`` has the same
    hyperdeterminant.
    """
    if T.d < 2:
        raise ShapeMismatch("need d >= 2")
    nz = nonzero_mask(T)
    off = ~np.eye(T.n, dtype=bool).reshape((T.n, T.n) + (1,) * (T.d - 2))
    bad = np.argwhere(nz & off)
    if len(bad):
        where = tuple(int(c) + 1 for c in bad[0])
        raise SupportViolation(f"nonzero entry at {where} with i_1 != i_2")
    diag = np.diagonal(T.data, axis1=0, axis2=1)
    return Tensor(T.spec, np.ascontiguousarray(np.moveaxis(diag, -1, 0)), canonical=True)
