"""Rank functions: simple tensors, decompositions, exact small-case ranks and
hyperdeterminant lower-bound certificates.

A simple term is stored as a product of factor tensors over a set partition
of the coordinates ``[d]`` (``blocks``, 1-based, block containing coordinate 1
first).  The four rank kinds differ only in which block structures count as
simple:

* ``rank``   -- ``d`` singleton blocks (fully decomposable);
* ``srank``  -- some singleton block (vector times a (d-1)-tensor);
* ``prank``  -- any two nonempty blocks;
* ``oprank`` -- two blocks, the one without coordinate 1 of odd size.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, gcd
from typing import Sequence

import numpy as np

from . import determinant as det_mod
from .errors import BudgetExceeded, HypothesisNotMet, OddOrder, ShapeMismatch, UnsupportedRing
from .ring import RingKind, RingSpec, RingValue
from .tensor import (
    SubtensorSelector,
    Tensor,
    direct_sum,
    hat_extension,
    nonzero_mask,
    subtensor,
)

__all__ = [
    "RankKind",
    "Justification",
    "Bipartition",
    "SimpleTerm",
    "RankCertificate",
    "RankResult",
    "bipartitions",
    "is_simple",
    "verify_decomposition",
    "slice_terms",
    "fiber_terms",
    "upper_witness",
    "brute_force_rank",
    "certify_oprank_full",
    "certify_prank_bound",
    "certify_via_echelon",
    "generic_null_bound",
    "oprank_direct_sum_check",
    "vanishing_order",
    "SIMPLE_BUDGET",
]

SIMPLE_BUDGET = 5 * 10**6


class RankKind(enum.Enum):
    TENSOR = "rank"
    SLICE = "srank"
    PARTITION = "prank"
    ODD_PARTITION = "oprank"

    @classmethod
    def parse(cls, text: str) -> "RankKind":
        for k in cls:
            if text in (k.value, k.name, k.name.lower()):
                return k
        raise ValueError(f"unknown rank kind {text!r}")


class Justification(enum.Enum):
    DET_NONZERO = "DetNonzero"
    ECHELON = "Echelon"
    BRUTE_FORCE = "BruteForce"
    TRIVIAL = "Trivial"


@dataclass(frozen=True)
class Bipartition:
    """``block_a`` holds coordinate 1; ``block_b`` is its complement."""

    block_a: tuple[int, ...]
    block_b: tuple[int, ...]

    def __post_init__(self):
        a, b = tuple(sorted(self.block_a)), tuple(sorted(self.block_b))
        object.__setattr__(self, "block_a", a)
        object.__setattr__(self, "block_b", b)
        if not a or a[0] != 1:
            raise ValueError("block_a must contain coordinate 1")
        if set(a) & set(b):
            raise ValueError("blocks overlap")

    @property
    def d(self) -> int:
        return len(self.block_a) + len(self.block_b)

    @property
    def odd(self) -> bool:
        return len(self.block_b) % 2 == 1


def bipartitions(d: int, kind: RankKind = RankKind.PARTITION) -> list[Bipartition]:
    """Candidate two-block splits, smallest ``block_a`` first, then lexicographic."""
    out = []
    rest = list(range(2, d + 1))
    for size in range(0, d - 1):
        for extra in itertools.combinations(rest, size):
            a = (1,) + extra
            b = tuple(c for c in rest if c not in extra)
            bp = Bipartition(a, b)
            if kind is RankKind.ODD_PARTITION and not bp.odd:
                continue
            if kind is RankKind.SLICE and len(a) != 1 and len(b) != 1:
                continue
            out.append(bp)
    return out


@dataclass(frozen=True)
class SimpleTerm:
    """``prod_j factors[j](i restricted to blocks[j])``."""

    kind: RankKind
    blocks: tuple[tuple[int, ...], ...]
    factors: tuple[Tensor, ...]

    @property
    def d(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def n(self) -> int:
        return self.factors[0].n

    @property
    def spec(self) -> RingSpec:
        return self.factors[0].spec

    def to_tensor(self) -> Tensor:
        arr = self.factors[0].data
        for f in self.factors[1:]:
            arr = np.multiply.outer(arr, f.data)
        coords = [c for b in self.blocks for c in b]
        arr = np.transpose(arr, np.argsort(coords))
        spec = self.spec
        if spec.modulus is not None:
            arr = arr % spec.modulus
        return Tensor(spec, np.ascontiguousarray(arr), canonical=True)

    def to_record(self) -> dict:
        return {
            "blocks": [list(b) for b in self.blocks],
            "factors": [[self.spec.format(v) for v in f.entries()] for f in self.factors],
        }


def _structure_allows(blocks, kind: RankKind, d: int) -> bool:
    if d == 1:
        return len(blocks) == 1
    if len(blocks) < 2:
        return False
    sizes = [len(b) for b in blocks]
    if kind is RankKind.TENSOR:
        return all(s == 1 for s in sizes)
    if kind is RankKind.SLICE:
        return 1 in sizes
    if kind is RankKind.PARTITION:
        return True
    return any(len(b) % 2 == 1 for b in blocks if 1 not in b)


def term_is_simple_for(term: SimpleTerm, kind: RankKind) -> bool:
    """Structural check plus nonzero factors; a finer structure also counts."""
    coords = sorted(c for b in term.blocks for c in b)
    d = len(coords)
    if coords != list(range(1, d + 1)):
        return False
    for b, f in zip(term.blocks, term.factors):
        if f.d != len(b) or f.is_zero():
            return False
    if len({f.n for f in term.factors}) != 1 or len({f.spec for f in term.factors}) != 1:
        return False
    return _structure_allows(term.blocks, kind, d)


# -- rank-one flattenings --------------------------------------------------------


def _rank_one(M: np.ndarray, spec: RingSpec):
    """Factor a nonzero matrix of payloads as ``u v^T`` or return None.

    ``u`` has its leading nonzero entry equal to 1 over fields, and is a
    primitive integer vector over Z.
    """
    if spec.kind is RingKind.INTEGERS_MOD:
        raise UnsupportedRing(f"rank-one tests need a field or Z, not {spec}")
    mask = np.frompyfunc(bool, 1, 1)(M).astype(bool)
    nz = np.argwhere(mask)
    if not len(nz):
        return None
    r0, c0 = (int(x) for x in nz[0])
    pivot = M[r0, c0]
    lhs = M * pivot
    rhs = np.multiply.outer(M[:, c0], M[r0, :])
    if spec.modulus is not None:
        lhs, rhs = lhs % spec.modulus, rhs % spec.modulus
    if not np.all(lhs == rhs):
        return None
    col = M[:, c0]
    if spec.kind is RingKind.INTEGERS:
        g = 0
        for v in col:
            g = gcd(g, int(v))
        if col[r0] < 0:
            g = -g
        u = np.array([int(v) // g for v in col], dtype=object)
        v = np.array([Fraction(int(x), int(u[r0])) for x in M[r0, :]], dtype=object)
        if any(x.denominator != 1 for x in v):
            return None
        v = np.array([int(x) for x in v], dtype=object)
        return u, v
    inv = spec.inv(pivot)
    u = np.array([spec.mul(x, inv) for x in col], dtype=object)
    v = M[r0, :].copy()
    return u, v


def _flatten(T: Tensor, a: Sequence[int], b: Sequence[int]) -> np.ndarray:
    axes = [c - 1 for c in a] + [c - 1 for c in b]
    return np.transpose(T.data, axes).reshape(T.n ** len(a), T.n ** len(b))


def _split(T: Tensor, a, b):
    res = _rank_one(_flatten(T, a, b), T.spec)
    if res is None:
        return None
    u, v = res
    n = T.n
    fu = Tensor(T.spec, u.reshape((n,) * len(a)), canonical=True)
    fv = Tensor(T.spec, v.reshape((n,) * len(b)), canonical=True)
    return fu, fv


def _fully_decompose(T: Tensor):
    vectors = []
    cur = T
    while cur.d > 1:
        parts = _split(cur, [1], list(range(2, cur.d + 1)))
        if parts is None:
            return None
        vectors.append(parts[0])
        cur = parts[1]
    vectors.append(cur)
    return vectors


def is_simple(T: Tensor, kind: RankKind) -> SimpleTerm | None:
    """A witness that ``T`` has rank 1 for ``kind``, or None.

    Zero tensors are not simple.  Over Z/m with composite m this raises
    UnsupportedRing.
    """
    if T.is_zero():
        return None
    d = T.d
    if d == 1:
        return SimpleTerm(kind, ((1,),), (T,))
    if kind is RankKind.TENSOR:
        vecs = _fully_decompose(T)
        if vecs is None:
            return None
        return SimpleTerm(kind, tuple((c,) for c in range(1, d + 1)), tuple(vecs))
    for bp in bipartitions(d, kind):
        parts = _split(T, bp.block_a, bp.block_b)
        if parts is not None:
            return SimpleTerm(kind, (bp.block_a, bp.block_b), parts)
    return None


def verify_decomposition(T: Tensor, terms: Sequence[SimpleTerm], kind: RankKind | None = None) -> bool:
    """True iff every term is simple (for ``kind``, default its own) and they sum to T."""
    total = None
    for t in terms:
        if not term_is_simple_for(t, t.kind if kind is None else kind):
            return False
        if t.d != T.d or t.n != T.n or t.spec != T.spec:
            raise ShapeMismatch("term does not match the tensor's shape or ring")
        x = t.to_tensor()
        total = x if total is None else total + x
    if total is None:
        return T.is_zero()
    return total == T


# -- canonical upper-bound decompositions ---------------------------------------


def _delta(n: int, l: int, spec: RingSpec) -> Tensor:
    vec = np.empty(n, dtype=object)
    vec.fill(spec.zero())
    vec[l] = spec.one()
    return Tensor(spec, vec, canonical=True)


def slice_terms(T: Tensor, k: int, kind: RankKind = RankKind.SLICE) -> list[SimpleTerm]:
    """``T = sum_l delta(i_k, l) T^{(k)}_l`` over the nonzero slices."""
    d, n = T.d, T.n
    if d == 1:
        return [] if T.is_zero() else [SimpleTerm(kind, ((1,),), (T,))]
    rest = tuple(c for c in range(1, d + 1) if c != k)
    out = []
    for l in range(n):
        sl = Tensor(T.spec, np.take(T.data, l, axis=k - 1), canonical=True)
        if sl.is_zero():
            continue
        vec = _delta(n, l, T.spec)
        if k == 1:
            out.append(SimpleTerm(kind, ((1,), rest), (vec, sl)))
        else:
            out.append(SimpleTerm(kind, (rest, (k,)), (sl, vec)))
    return out


def fiber_terms(T: Tensor) -> list[SimpleTerm]:
    """Fully decomposable terms from the nonzero mode-1 fibres."""
    d, n = T.d, T.n
    out = []
    for rest in itertools.product(range(n), repeat=d - 1):
        fib = T.data[(slice(None),) + rest]
        vec = Tensor(T.spec, np.array(fib, dtype=object), canonical=True)
        if vec.is_zero():
            continue
        vecs = (vec,) + tuple(_delta(n, j, T.spec) for j in rest)
        out.append(SimpleTerm(RankKind.TENSOR, tuple((c,) for c in range(1, d + 1)), vecs))
    return out


def upper_witness(T: Tensor, kind: RankKind) -> list[SimpleTerm]:
    """Shortest canonical decomposition: slices in the best allowed direction."""
    if T.is_zero():
        return []
    if kind is RankKind.TENSOR or T.d == 1:
        return fiber_terms(T) if T.d > 1 else [SimpleTerm(kind, ((1,),), (T,))]
    directions = range(2, T.d + 1) if kind is RankKind.ODD_PARTITION else range(1, T.d + 1)
    best = None
    for k in directions:
        terms = slice_terms(T, k, kind)
        if best is None or len(terms) < len(best):
            best = terms
    return best


# -- exhaustive rank over small prime fields ------------------------------------


@dataclass(frozen=True)
class RankResult:
    kind: RankKind
    rank: int
    terms: tuple[SimpleTerm, ...]


class _Codec:
    """Tensors in F_p^{n^d} as base-p integers (entry f has weight p^f)."""

    def __init__(self, p: int, size: int):
        if p**size >= 2**63:
            raise BudgetExceeded("tensor code space", p**size, 2**63)
        self.p = p
        self.size = size
        self.weights = np.array([p**f for f in range(size)], dtype=np.int64)

    def encode(self, digits: np.ndarray) -> np.ndarray:
        return digits.astype(np.int64) @ self.weights

    def decode(self, codes: np.ndarray) -> np.ndarray:
        return (np.asarray(codes, dtype=np.int64)[..., None] // self.weights) % self.p

    def add(self, a: np.ndarray, b: np.ndarray, sub: bool = False) -> np.ndarray:
        if self.p == 2:
            return np.bitwise_xor(a, b)
        da, db = self.decode(a), self.decode(b)
        return self.encode((da - db) % self.p if sub else (da + db) % self.p)


def _all_nonzero(p: int, size: int, normalized: bool) -> np.ndarray:
    """Digit rows of every nonzero vector in F_p^size (leading entry 1 if normalized)."""
    count = p**size
    if count > SIMPLE_BUDGET:
        raise BudgetExceeded("factor enumeration", count, SIMPLE_BUDGET)
    codes = np.arange(1, count, dtype=np.int64)
    digits = (codes[:, None] // np.array([p ** (size - 1 - f) for f in range(size)])) % p
    if normalized:
        lead = digits[np.arange(len(digits)), np.argmax(digits != 0, axis=1)]
        digits = digits[lead == 1]
    return digits


def _outer_digits(U: np.ndarray, V: np.ndarray, p: int) -> np.ndarray:
    out = (U[:, None, :, None] * V[None, :, None, :]) % p
    return out.reshape(len(U) * len(V), U.shape[1] * V.shape[1])


class _Balls:
    """Sums of at most r simple tensors, grown level by level with parents."""

    def __init__(self, kind: RankKind, d: int, n: int, p: int, budget: int):
        self.codec = _Codec(p, n**d)
        self.kind, self.d, self.n, self.p, self.budget = kind, d, n, p, budget
        self.simple = self._enumerate_simple()
        zero = np.zeros(1, np.int64)
        self.levels = [(zero, zero, zero), (self.simple, np.zeros_like(self.simple), self.simple)]
        self.known = np.union1d(zero, self.simple)
        self._cum: dict[int, tuple[np.ndarray, np.ndarray | None]] = {}

    def _enumerate_simple(self) -> np.ndarray:
        d, n, p = self.d, self.n, self.p
        shape = (n,) * d
        chunks = []
        total = 0
        if d == 1:
            chunks.append(self.codec.encode(_all_nonzero(p, n, False)))
        elif self.kind is RankKind.TENSOR:
            digits = _all_nonzero(p, n, True)
            vec = _all_nonzero(p, n, False)
            for _ in range(d - 1):
                if len(digits) * len(vec) > self.budget:
                    raise BudgetExceeded("simple tensors", len(digits) * len(vec), self.budget)
                digits = _outer_digits(digits, vec, p)
            chunks.append(self.codec.encode(digits))
        else:
            for bp in bipartitions(d, self.kind):
                U = _all_nonzero(p, n ** len(bp.block_a), True)
                V = _all_nonzero(p, n ** len(bp.block_b), False)
                total += len(U) * len(V)
                if total > self.budget:
                    raise BudgetExceeded("simple tensors", total, self.budget)
                flat = _outer_digits(U, V, p).reshape((-1,) + shape)
                coords = list(bp.block_a) + list(bp.block_b)
                flat = np.transpose(flat, [0] + [1 + int(c) for c in np.argsort(coords)])
                chunks.append(self.codec.encode(flat.reshape(len(flat), -1)))
        return np.unique(np.concatenate(chunks))

    def cumulative(self, r: int, digits: bool = False):
        if r not in self._cum:
            while len(self.levels) <= r:
                self._grow()
            self._cum[r] = (np.sort(np.concatenate([lv[0] for lv in self.levels[: r + 1]])), None)
        codes, dig = self._cum[r]
        if not digits:
            return codes
        if dig is None:
            dig = self.codec.decode(codes).astype(np.int8)
            self._cum[r] = (codes, dig)
        return codes, dig

    def _grow(self):
        frontier = self.levels[-1][0]
        S = self.simple
        pairs = len(frontier) * len(S)
        if pairs > self.budget * 20:
            raise BudgetExceeded("rank-ball pairs", pairs, self.budget * 20)
        new_codes, new_parent, new_simple = [], [], []
        step = max(1, (1 << 22) // max(len(S), 1))
        for lo in range(0, len(frontier), step):
            f = frontier[lo : lo + step]
            sums = self.codec.add(f[:, None], S[None, :]).reshape(-1)
            par = np.repeat(f, len(S))
            sim = np.tile(S, len(f))
            keep = ~np.isin(sums, self.known)
            new_codes.append(sums[keep])
            new_parent.append(par[keep])
            new_simple.append(sim[keep])
        codes = np.concatenate(new_codes)
        codes, first = np.unique(codes, return_index=True)
        parent = np.concatenate(new_parent)[first]
        simple = np.concatenate(new_simple)[first]
        self.levels.append((codes, parent, simple))
        self.known = np.union1d(self.known, codes)

    def decompose(self, code: int) -> list[int]:
        """Simple-tensor codes summing to ``code`` (via parent pointers)."""
        out = []
        for r in range(len(self.levels) - 1, 0, -1):
            codes, parent, simple = self.levels[r]
            pos = np.searchsorted(codes, code)
            if pos < len(codes) and codes[pos] == code:
                out.append(int(simple[pos]))
                code = int(parent[pos])
        if code != 0:
            raise AssertionError("broken parent chain")
        return out

    def search(self, target: int, r: int):
        """Codes of r simple tensors summing to ``target``, or None."""
        a = (r + 1) // 2
        b = r - a
        right = self.cumulative(b)
        if self.p == 2:
            left = self.cumulative(a)
            diff = np.bitwise_xor(left, target)
        else:
            left, dig = self.cumulative(a, digits=True)
            tdig = self.codec.decode(np.array([target]))[0].astype(np.int8)
            diff = self.codec.encode((tdig - dig) % self.p)
        hit = np.nonzero(np.isin(diff, right))[0]
        if not len(hit):
            return None
        x = int(left[hit[0]])
        return self.decompose(x) + self.decompose(int(diff[hit[0]]))


@lru_cache(maxsize=32)
def _balls(kind: RankKind, d: int, n: int, p: int, budget: int) -> _Balls:
    return _Balls(kind, d, n, p, budget)


def _tensor_code(T: Tensor, codec: _Codec) -> int:
    return int(codec.encode(np.array([int(v) for v in T.entries()], dtype=np.int64)))


def _term_from_code(code: int, codec: _Codec, T: Tensor, kind: RankKind) -> SimpleTerm:
    digits = codec.decode(np.array([code]))[0]
    S = Tensor(T.spec, np.array([int(x) for x in digits], dtype=object).reshape(T.shape), canonical=True)
    term = is_simple(S, kind)
    if term is None:
        raise AssertionError("enumerated tensor is not simple")
    return term


def brute_force_rank(T: Tensor, kind: RankKind, r_max: int, budget: int = SIMPLE_BUDGET) -> RankResult | None:
    """Exact rank over a small prime field, with a witness decomposition.

    Ranks 0 and 1 are decided directly; the canonical slice/fibre decomposition
    gives an upper bound u; every r in [2, u) is then ruled in or out by a
    meet-in-the-middle search over sums of enumerated simple tensors.  Returns
    None when the rank exceeds ``r_max``.
    """
    if T.spec.kind is not RingKind.PRIME_FIELD:
        raise UnsupportedRing(f"exhaustive rank needs a prime field, got {T.spec}")
    if T.is_zero():
        return RankResult(kind, 0, ())
    one = is_simple(T, kind)
    if one is not None:
        return RankResult(kind, 1, (one,)) if r_max >= 1 else None
    upper = upper_witness(T, kind)
    top = min(len(upper) - 1, r_max)
    if top >= 2:
        balls = _balls(kind, T.d, T.n, T.spec.modulus, budget)
        target = _tensor_code(T, balls.codec)
        for r in range(2, top + 1):
            found = balls.search(target, r)
            if found is not None:
                terms = tuple(_term_from_code(c, balls.codec, T, kind) for c in found)
                return RankResult(kind, len(terms), terms)
    if len(upper) <= r_max:
        return RankResult(kind, len(upper), tuple(upper))
    return None


# -- certificates -----------------------------------------------------------------


@dataclass(frozen=True)
class RankCertificate:
    """A proven lower bound and, when known, a witnessed upper bound."""

    kind: RankKind
    lower: int
    justification: Justification
    upper: int | None = None
    witness: tuple[SimpleTerm, ...] = ()
    det: RingValue | None = None
    minor: SubtensorSelector | None = None
    null_order: int | None = None
    implied: tuple["RankCertificate", ...] = field(default=())

    def __post_init__(self):
        if self.upper is not None and self.lower > self.upper:
            raise AssertionError(f"lower {self.lower} exceeds upper {self.upper}")

    def to_record(self) -> dict:
        rec = {
            "kind": self.kind.value,
            "lower": self.lower,
            "justification": self.justification.value,
            "upper": self.upper,
        }
        if self.det is not None:
            rec["det"] = str(self.det)
        if self.null_order is not None:
            rec["null_order"] = self.null_order
        if self.minor is not None:
            rec["minor"] = [list(s) for s in self.minor.index_sets]
        return rec


def _det_for_bound(T: Tensor, budget: int) -> RingValue:
    # odd order goes through the hat extension, whose determinant is the same
    if T.d % 2:
        return det_mod.hyperdet_dp(hat_extension(T), budget)
    return det_mod.hyperdet_dp(T, budget)


def certify_oprank_full(T: Tensor, budget: int = det_mod.DP_BUDGET) -> RankCertificate | None:
    """``det(T) != 0`` forces oprank(T) = n, rank(T) >= n and, for even d, srank(T) = n."""
    if T.d < 2:
        raise ShapeMismatch("odd partition rank bounds need d >= 2")
    D = _det_for_bound(T, budget)
    if D.is_zero():
        return None
    return _full_certificate(T, D, Justification.DET_NONZERO)


def _full_certificate(T: Tensor, D: RingValue, why: Justification) -> RankCertificate:
    n = T.n
    op_terms = upper_witness(T, RankKind.ODD_PARTITION)
    implied = [RankCertificate(RankKind.TENSOR, n, why, det=D)]
    if T.d % 2 == 0:
        s_terms = upper_witness(T, RankKind.SLICE)
        implied.append(RankCertificate(RankKind.SLICE, n, why, len(s_terms), tuple(s_terms), det=D))
    return RankCertificate(
        RankKind.ODD_PARTITION, n, why, len(op_terms), tuple(op_terms), det=D, null_order=2,
        implied=tuple(implied),
    )


def certify_via_echelon(T: Tensor, poset=None) -> RankCertificate | None:
    """Full odd partition rank from a P-echelon form with nonzero diagonal."""
    from .order import echelon_det, find_echelon_poset, is_echelon_form

    if T.d < 2:
        raise ShapeMismatch("odd partition rank bounds need d >= 2")
    if poset is None:
        poset = find_echelon_poset(T)
        if poset is None:
            return None
    elif not is_echelon_form(T, poset):
        return None
    D = echelon_det(T, poset)
    if D.is_zero():
        return None
    return _full_certificate(T, D, Justification.ECHELON)


def vanishing_order(m: int) -> int:
    """Least k with k! = 0 mod m; equals m for a prime m."""
    k, f = 1, 1
    while f % m:
        k += 1
        f *= k
    return k


def certify_prank_bound(T: Tensor, budget: int = det_mod.DP_BUDGET) -> RankCertificate | None:
    """Over characteristic p > 0: ``det(T) != 0`` gives prank(T) >= ceil(n/(p-1))."""
    p = T.spec.characteristic
    if p == 0:
        raise UnsupportedRing("partition rank bound needs positive characteristic")
    D = _det_for_bound(T, budget)
    if D.is_zero():
        return None
    k = vanishing_order(p)
    terms = upper_witness(T, RankKind.PARTITION)
    return RankCertificate(
        RankKind.PARTITION, ceil(T.n / (k - 1)), Justification.DET_NONZERO,
        len(terms), tuple(terms), det=D, null_order=k,
    )


def generic_null_bound(T: Tensor, k: int, kind: RankKind = RankKind.PARTITION,
                       budget: int = det_mod.DP_BUDGET) -> RankCertificate | None:
    """If every simple tensor of ``kind`` is k-null, ``det(T) != 0`` gives rank >= ceil(n/(k-1)).

    The caller vouches for the k-nullity of the simple set (k = 2 for odd
    partition rank, k = p for partition rank in characteristic p).
    """
    if T.d % 2:
        raise OddOrder(f"the k-null bound is stated for even d, got d={T.d}")
    if k < 2:
        raise ValueError("k must exceed 1")
    D = det_mod.hyperdet_dp(T, budget)
    if D.is_zero():
        return None
    return RankCertificate(kind, ceil(T.n / (k - 1)), Justification.DET_NONZERO, det=D, null_order=k)


def _pad_term(term: SimpleTerm, size: int, offset: int) -> SimpleTerm:
    factors = []
    for f in term.factors:
        arr = np.empty((size,) * f.d, dtype=object)
        arr.fill(f.spec.zero())
        arr[(slice(offset, offset + f.n),) * f.d] = f.data
        factors.append(Tensor(f.spec, arr, canonical=True))
    return SimpleTerm(term.kind, term.blocks, tuple(factors))


def _nonnull_minor(X: Tensor, r: int, label: str):
    if r == 0:
        return SubtensorSelector(((),) * X.d)
    res = det_mod.is_k_null(X, r)
    if res.null:
        raise HypothesisNotMet(f"{label} is {r}-null")
    return res.witness


def oprank_direct_sum_check(X: Tensor, Y: Tensor, r: int | None = None, s: int | None = None,
                            x_terms: Sequence[SimpleTerm] | None = None,
                            y_terms: Sequence[SimpleTerm] | None = None) -> RankCertificate:
    """Certify ``oprank(X + Y) = r + s`` for the direct sum of X and Y.

    ``r`` and ``s`` default to the full sides, which requires nonzero
    determinants.  The lower bound comes from nonvanishing r- and s-minors
    whose direct sum has determinant det(X') det(Y') != 0; the upper bound from
    padding decompositions of X and Y.
    """
    if X.d % 2:
        raise OddOrder(f"direct-sum additivity is stated for even d, got d={X.d}")
    if r is None:
        r = X.n if X.n == 0 or not det_mod.hyperdet_dp(X).is_zero() else None
    if s is None:
        s = Y.n if Y.n == 0 or not det_mod.hyperdet_dp(Y).is_zero() else None
    if r is None or s is None:
        raise HypothesisNotMet("oprank is not certified full; pass r and s explicitly")
    sx = _nonnull_minor(X, r, "X")
    sy = _nonnull_minor(Y, s, "Y")
    Xp, Yp = subtensor(X, sx), subtensor(Y, sy)
    D = det_mod.hyperdet_dp(direct_sum(Xp, Yp))
    if D != det_mod.hyperdet_dp(Xp) * det_mod.hyperdet_dp(Yp) or D.is_zero():
        raise AssertionError("direct-sum product formula failed")
    x_terms = upper_witness(X, RankKind.ODD_PARTITION) if x_terms is None else list(x_terms)
    y_terms = upper_witness(Y, RankKind.ODD_PARTITION) if y_terms is None else list(y_terms)
    size = X.n + Y.n
    witness = tuple(_pad_term(t, size, 0) for t in x_terms) + tuple(_pad_term(t, size, X.n) for t in y_terms)
    minor = SubtensorSelector(tuple(a + tuple(X.n + i for i in b) for a, b in zip(sx.index_sets, sy.index_sets)))
    return RankCertificate(
        RankKind.ODD_PARTITION, r + s, Justification.DET_NONZERO, len(witness), witness,
        det=D, minor=minor, null_order=2,
    )
