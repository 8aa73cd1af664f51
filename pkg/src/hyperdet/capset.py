"""Colored sum-ordered sets in F_p^n and the slice-rank size bound.

A colored family is ``d`` lists ``x^(1), ..., x^(d)`` of ``N`` vectors each,
with ``x^(1)_i + ... + x^(d)_i = 0`` for every ``i``.  It is sum-ordered when
all vanishing colored sums ``x^(1)_{i_1} + ... + x^(d)_{i_d}`` have index
tuples in the order polytope of one connected poset P.  The restriction
tensor of such a family is P-echelon with unit diagonal, so its
hyperdeterminant is 1 and the family size is bounded by
``(p - 1) d c(n)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from mpmath import iv

from .determinant import DP_BUDGET, hyperdet_dp
from .errors import BudgetExceeded, NumericalFailure, ShapeMismatch, UnsupportedRing
from .order import Poset, admissible_relations, echelon_det, find_echelon_poset, is_echelon_form
from .ranks import RankCertificate, certify_prank_bound
from .ring import Fp, RingValue, is_prime
from .tensor import Tensor, nonzero_mask

__all__ = [
    "ColoredFamily",
    "restriction_tensor",
    "SumOrderedCheck",
    "verify_sum_ordered",
    "slice_rank_upper_count",
    "gamma",
    "ChernoffBound",
    "gamma_bound",
    "SizeBound",
    "size_bound",
    "FamilyCertificate",
    "certify_family",
    "search_sum_ordered",
    "SCAN_BUDGET",
]

SCAN_BUDGET = 10**8
SEARCH_BUDGET = 2 * 10**6
_ENCLOSURE_PREC = 128


@dataclass(frozen=True)
class ColoredFamily:
    """``vectors[l, i]`` is ``x^(l+1)_{i+1}``, residues in ``[0, p)``; shape ``(d, N, n)``.

    The diagonal condition is not enforced here so that invalid input can be
    reported by :func:`verify_sum_ordered`; see :attr:`diagonal_ok`.
    """

    p: int
    vectors: np.ndarray

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        v = np.array(self.vectors, dtype=np.int64)
        if v.ndim != 3:
            raise ShapeMismatch("vectors must have shape (d, N, n)")
        if v.shape[0] < 3:
            raise ValueError("colored families need d >= 3 colors")
        v = v % self.p
        v.flags.writeable = False
        object.__setattr__(self, "vectors", v)

    @property
    def d(self) -> int:
        return self.vectors.shape[0]

    @property
    def N(self) -> int:
        return self.vectors.shape[1]

    @property
    def n(self) -> int:
        return self.vectors.shape[2]

    def diagonal_failures(self) -> list[int]:
        """0-based indices i whose colored diagonal sum is nonzero."""
        s = self.vectors.sum(axis=0) % self.p
        return [int(i) for i in np.nonzero(np.any(s != 0, axis=1))[0]]

    @property
    def diagonal_ok(self) -> bool:
        return not self.diagonal_failures()

    def __eq__(self, other):
        if not isinstance(other, ColoredFamily):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.vectors, other.vectors)

    def __hash__(self):
        return hash((self.p, self.vectors.shape, self.vectors.tobytes()))


def _vanishing_mask(vectors: np.ndarray, p: int) -> np.ndarray:
    d, N, n = vectors.shape
    mask = np.ones((N,) * d, dtype=bool)
    for c in range(n):
        acc = np.zeros((N,) * d, dtype=np.int16)
        for l in range(d):
            shape = [1] * d
            shape[l] = N
            acc = acc + vectors[l, :, c].reshape(shape)
        mask &= acc % p == 0
    return mask


def _check_scan(N: int, d: int, budget: int):
    if N**d > budget:
        raise BudgetExceeded("colored-sum tuple scan", N**d, budget)


def restriction_tensor(F: ColoredFamily, budget: int = SCAN_BUDGET) -> Tensor:
    """0/1 tensor over F_p marking the vanishing colored sums."""
    _check_scan(F.N, F.d, budget)
    mask = _vanishing_mask(F.vectors, F.p)
    return Tensor(Fp(F.p), mask.astype(np.int64).astype(object), canonical=True)


@dataclass(frozen=True)
class SumOrderedCheck:
    ok: bool
    poset: Poset | None = None
    counterexample: tuple[int, ...] | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def _component_of_first(rel: np.ndarray) -> set[int]:
    und = rel | rel.T
    seen, stack = {0}, [0]
    while stack:
        a = stack.pop()
        for b in np.nonzero(und[a])[0]:
            if int(b) not in seen:
                seen.add(int(b))
                stack.append(int(b))
    return seen


def verify_sum_ordered(F: ColoredFamily, P: Poset | None = None, budget: int = SCAN_BUDGET) -> SumOrderedCheck:
    """Check the diagonal condition and the order condition for one poset.

    Without ``P`` a suitable poset is searched for.  Counterexamples are
    1-based index tuples.
    """
    bad = F.diagonal_failures()
    if bad:
        i = bad[0] + 1
        return SumOrderedCheck(False, None, (i,) * F.d, "diagonal sum is nonzero")
    T = restriction_tensor(F, budget)
    if P is not None:
        check = is_echelon_form(T, P)
        if not check:
            return SumOrderedCheck(False, P, check.violation, f"vanishing sum outside the order polytope of {P}")
        return SumOrderedCheck(True, P)
    found = find_echelon_poset(T)
    if found is not None:
        return SumOrderedCheck(True, found)
    # some coordinate b is incomparable with coordinate 1's component in
    # both directions; report a vanishing tuple with i_1 > i_b
    rel = admissible_relations(T)
    comp = _component_of_first(rel)
    b = min(set(range(F.d)) - comp)
    sup = np.argwhere(nonzero_mask(T)) + 1
    hit = sup[sup[:, 0] > sup[:, b]]
    return SumOrderedCheck(
        False, None, tuple(int(x) for x in hit[0]),
        "no connected poset orders every vanishing sum",
    )


# -- the size bound -------------------------------------------------------------


def slice_rank_upper_count(p: int, n: int, d: int) -> int:
    """``#{a in {0..p-1}^n : |a| <= (p-1) n / d}`` by convolution."""
    if d < 1 or n < 0:
        raise ValueError("need d >= 1 and n >= 0")
    top = ((p - 1) * n) // d
    dist = [1] + [0] * top
    for _ in range(n):
        nxt = [0] * (top + 1)
        for s, c in enumerate(dist):
            if c:
                for j in range(min(p - 1, top - s) + 1):
                    nxt[s + j] += c
        dist = nxt
    return sum(dist)


def gamma(p: int, d: int, t: float) -> float:
    """``e^{t(p-1)/d} (1 - e^{-pt}) / (1 - e^{-t})``, equal to p at t = 0."""
    if t == 0:
        return float(p)
    return math.exp(t * (p - 1) / d) * math.expm1(-p * t) / math.expm1(-t)


def _gamma_interval(p: int, d: int, t: Fraction):
    saved = iv.prec
    iv.prec = _ENCLOSURE_PREC
    try:
        x = iv.mpf(t.numerator) / t.denominator
        g = iv.exp(x * (p - 1) / d) * (1 - iv.exp(-p * x)) / (1 - iv.exp(-x))
        return tuple(_raw_to_fraction(e) for e in g._mpi_)
    finally:
        iv.prec = saved


def _raw_to_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    val = Fraction(int(man)) * (Fraction(2) ** exp)
    return -val if sign else val


@dataclass(frozen=True)
class ChernoffBound:
    """Minimizer of gamma(t) and a rational enclosure of gamma(t_star).

    Since ``c(n) <= gamma(t)^n`` holds for every ``t > 0``, ``upper ** n`` is a
    sound rational bound on ``c(n)``.
    """

    p: int
    d: int
    t_star: float
    gamma: float
    lower: Fraction
    upper: Fraction

    def dominates(self, n: int) -> bool:
        """Exact check ``c(n) <= upper^n``."""
        return slice_rank_upper_count(self.p, n, self.d) <= self.upper**n


_PHI = (math.sqrt(5) - 1) / 2


def gamma_bound(p: int, d: int, rtol: float = 1e-10) -> ChernoffBound:
    """Golden-section minimization of gamma over ``t > 0``."""
    if d < 3:
        raise ValueError("the Chernoff constant is used for d >= 3")
    f = lambda t: gamma(p, d, t)
    # bracket by doubling until gamma turns upward
    a, b = 0.0, 1.0
    fb = f(b)
    if fb >= p:
        lo, hi = 0.0, b
    else:
        for _ in range(200):
            c = 2 * b
            fc = f(c)
            if fc > fb:
                lo, hi = a, c
                break
            a, b, fb = b, c, fc
        else:
            raise NumericalFailure(f"could not bracket the minimum of gamma for p={p}, d={d}")
    x1 = hi - _PHI * (hi - lo)
    x2 = lo + _PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > rtol * max(abs(lo) + abs(hi), 1e-300) / 2:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _PHI * (hi - lo)
            f2 = f(x2)
    t_star = (lo + hi) / 2
    g = f(t_star)
    lower, upper = _gamma_interval(p, d, Fraction(t_star))
    if not (1 <= g < p) or not (lower <= upper < p):
        raise NumericalFailure(f"gamma={g} outside [1, {p}) for p={p}, d={d}")
    return ChernoffBound(p, d, t_star, g, lower, upper)


@dataclass(frozen=True)
class SizeBound:
    bound: int
    exact: int
    c: int


def size_bound(p: int, n: int, d: int) -> SizeBound:
    """``bound = ceil((p-1) d min(gamma^n, p^n))`` (enclosure-rounded) and ``exact = (p-1) d c(n)``."""
    ch = gamma_bound(p, d)
    c = slice_rank_upper_count(p, n, d)
    g_n = min(ch.upper**n, Fraction(p) ** n)
    return SizeBound(math.ceil((p - 1) * d * g_n), (p - 1) * d * c, c)


@dataclass(frozen=True)
class FamilyCertificate:
    """The full chain for one verified family."""

    check: SumOrderedCheck
    det: RingValue | None = None
    echelon_det: RingValue | None = None
    prank: RankCertificate | None = None
    exact_bound: int | None = None

    @property
    def ok(self) -> bool:
        return (
            self.check.ok
            and self.det is not None
            and self.det == 1
            and self.echelon_det == self.det
            and self.prank is not None
            and self.exact_bound is not None
        )


def certify_family(F: ColoredFamily, P: Poset | None = None, budget: int = DP_BUDGET) -> FamilyCertificate:
    """verify, build the restriction tensor, compute det, certify prank, compare sizes."""
    check = verify_sum_ordered(F, P)
    if not check:
        return FamilyCertificate(check)
    T = restriction_tensor(F)
    D = hyperdet_dp(T, budget)
    E = echelon_det(T, check.poset)
    cert = certify_prank_bound(T, budget)
    exact = (F.p - 1) * F.d * slice_rank_upper_count(F.p, F.n, F.d)
    if cert is None or F.N > exact:
        raise AssertionError("size bound chain broken for a verified family")
    return FamilyCertificate(check, D, E, cert, exact)


# -- exhaustive search ------------------------------------------------------------


def _relations_connected(rel: np.ndarray) -> bool:
    return len(_component_of_first(rel)) == rel.shape[0]


def search_sum_ordered(p: int, n: int, d: int, N_target: int, budget: int = SEARCH_BUDGET) -> ColoredFamily | None:
    """Depth-first search for a sum-ordered family of size ``N_target``.

    Elements are chosen as ``d - 1`` vectors (lexicographic over base-p
    codes) with the last color fixed by the diagonal condition.  A prefix
    whose admissible order relations are already disconnected cannot be
    extended, since adding elements only adds vanishing sums.
    """
    if d < 3:
        raise ValueError("need d >= 3")
    if not is_prime(p):
        raise UnsupportedRing(f"p={p} is not prime")
    q = p**n
    vec = ((np.arange(q)[:, None] // p ** np.arange(n - 1, -1, -1)) % p).astype(np.int64)
    element_count = q ** (d - 1)
    nodes = 0
    family: list[np.ndarray] = []

    def element(code: int) -> np.ndarray:
        digits = []
        for _ in range(d - 1):
            code, r = divmod(code, q)
            digits.append(vec[r])
        cols = digits[::-1]
        last = (-np.sum(cols, axis=0)) % p
        return np.stack(cols + [last])

    def admissible(prefix: list[np.ndarray]) -> bool:
        V = np.stack(prefix, axis=1)
        mask = _vanishing_mask(V, p)
        sup = np.argwhere(mask)
        rel = np.all(sup[:, :, None] <= sup[:, None, :], axis=0)
        np.fill_diagonal(rel, False)
        return _relations_connected(rel)

    def rec() -> bool:
        nonlocal nodes
        if len(family) == N_target:
            return True
        for code in range(element_count):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded("sum-ordered search nodes", nodes, budget)
            family.append(element(code))
            if admissible(family) and rec():
                return True
            family.pop()
        return False

    if N_target == 0:
        return ColoredFamily(p, np.zeros((d, 0, n), dtype=np.int64))
    if rec():
        return ColoredFamily(p, np.stack(family, axis=1))
    return None
