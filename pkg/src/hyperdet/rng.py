"""Splittable counter-based random streams (SplitMix64) and test-data helpers.

The generator is defined so that it can be re-implemented anywhere:

* ``mix(z)``: ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
  z *= 0x94D049BB133111EB; z ^= z >> 31`` (all arithmetic mod 2^64).
* A stream has a 64-bit key.  Its i-th raw word (i = 0, 1, ...) is
  ``mix(key + (i + 1) * G)`` with ``G = 0x9E3779B97F4A7C15``, which is the
  SplitMix64 sequence seeded with ``key``.
* ``Stream(seed)`` has key ``mix(seed + G)``; ``child(label)`` has key
  ``mix(key ^ mix(label + G))``.  String labels are hashed with FNV-1a 64
  over their UTF-8 bytes.
* ``integers(bound, k)`` consumes raw words in order and keeps the first k
  that are below ``2^64 - (2^64 mod bound)``, returning ``word mod bound``.

Every draw call starts at a fresh child stream, so results never depend on
how many numbers an earlier call consumed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .ring import RingKind, RingSpec
from .tensor import Tensor

__all__ = [
    "mix64",
    "Stream",
    "random_tensor",
    "random_matrix",
    "random_invertible",
    "random_factor",
]

_MASK = (1 << 64) - 1
G = 0x9E3779B97F4A7C15
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def mix64(z: int) -> int:
    z &= _MASK
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK
    z ^= z >> 31
    return z


def _mix_array(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = z ^ (z >> np.uint64(30))
        z = z * _M1
        z = z ^ (z >> np.uint64(27))
        z = z * _M2
        return z ^ (z >> np.uint64(31))


def _label_hash(label) -> int:
    if isinstance(label, int):
        return label & _MASK
    h = 0xCBF29CE484222325
    for b in str(label).encode("utf-8"):
        h = ((h ^ b) * 0x100000001B3) & _MASK
    return h


class Stream:
    __slots__ = ("key", "_calls")

    def __init__(self, seed: int = 0, *, key: int | None = None):
        self.key = mix64(seed + G) if key is None else key & _MASK
        self._calls = 0

    def child(self, label) -> "Stream":
        return Stream(key=self.key ^ mix64(_label_hash(label) + G))

    def _next(self) -> "Stream":
        s = self.child(self._calls)
        self._calls += 1
        return s

    def words(self, start: int, count: int) -> np.ndarray:
        i = np.arange(start + 1, start + count + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self.key) + i * np.uint64(G)
        return _mix_array(z)

    def raw_integers(self, bound: int, k: int) -> np.ndarray:
        """First k accepted words of this stream reduced mod ``bound``."""
        if not 1 <= bound <= 1 << 63:
            raise ValueError("bound must lie in [1, 2^63]")
        limit = (1 << 64) - ((1 << 64) % bound)
        out, start = [], 0
        got = 0
        while got < k:
            w = self.words(start, max(2 * (k - got), 16))
            start += len(w)
            if limit < (1 << 64):
                w = w[w < np.uint64(limit)]
            take = w[: k - got]
            out.append(take)
            got += len(take)
        res = np.concatenate(out) if out else np.zeros(0, np.uint64)
        return (res % np.uint64(bound)).astype(np.int64)

    def integers(self, bound: int, k: int) -> np.ndarray:
        """k uniform integers in ``[0, bound)``, from a fresh child stream."""
        return self._next().raw_integers(bound, k)

    def randrange(self, lo: int, hi: int) -> int:
        """One integer in ``[lo, hi)``."""
        return lo + int(self.integers(hi - lo, 1)[0])

    def random(self, k: int) -> np.ndarray:
        """k floats in [0, 1) with 53-bit resolution."""
        return self.integers(1 << 53, k) / float(1 << 53)

    def permutation(self, n: int) -> list[int]:
        # Fisher-Yates driven by one integer per step
        perm = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.randrange(0, i + 1)
            perm[i], perm[j] = perm[j], perm[i]
        return perm


def _entries(stream: Stream, spec: RingSpec, count: int, lo: int, hi: int, max_den: int) -> list:
    if spec.modulus is not None:
        return [int(x) for x in stream.integers(spec.modulus, count)]
    nums = stream.integers(hi - lo + 1, count) + lo
    if spec.kind is RingKind.INTEGERS or max_den <= 1:
        return [spec.coerce(int(x)) for x in nums]
    dens = stream.integers(max_den, count) + 1
    return [Fraction(int(a), int(b)) for a, b in zip(nums, dens)]


def random_tensor(stream: Stream, d: int, n: int, spec: RingSpec, *, lo: int = -3, hi: int = 3,
                  max_den: int = 1, density: float = 1.0) -> Tensor:
    """Uniform entries (residues, or integers in ``[lo, hi]`` optionally over 1..max_den)."""
    count = n**d
    vals = _entries(stream, spec, count, lo, hi, max_den)
    if density < 1.0:
        keep = stream.random(count) < density
        vals = [v if k else spec.zero() for v, k in zip(vals, keep)]
    arr = np.empty(count, dtype=object)
    arr[:] = vals
    return Tensor(spec, arr.reshape((n,) * d), canonical=True)


def random_matrix(stream: Stream, n: int, spec: RingSpec, **kw) -> Tensor:
    return random_tensor(stream, 2, n, spec, **kw)


def random_invertible(stream: Stream, n: int, spec: RingSpec, **kw) -> Tensor:
    """Rejection-sample a matrix with nonzero determinant (unit determinant over Z)."""
    from .determinant import hyperdet_dp

    for _ in range(10_000):
        A = random_matrix(stream, n, spec, **kw)
        D = hyperdet_dp(A)
        if spec.kind is RingKind.INTEGERS:
            if D.payload in (1, -1):
                return A
        elif spec.kind is RingKind.INTEGERS_MOD:
            from math import gcd

            if gcd(int(D.payload), spec.modulus) == 1:
                return A
        elif not D.is_zero():
            return A
    raise RuntimeError("no invertible matrix found")


def random_factor(stream: Stream, order: int, n: int, spec: RingSpec, **kw) -> Tensor:
    """A nonzero random tensor of the given order."""
    for _ in range(10_000):
        T = random_tensor(stream, order, n, spec, **kw)
        if not T.is_zero():
            return T
    raise RuntimeError("no nonzero tensor found")
