"""Posets on ``[d]``, order polytopes and P-echelon tensors.

A tensor is in P-echelon form when its support only contains index tuples
with ``i_a <= i_b`` for every ``a <_P b``.  For a poset with connected Hasse
diagram the hyperdeterminant of such a tensor is the product of its diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import CycleDetected, DisconnectedPoset, NotEchelon, ShapeMismatch
from .ring import RingValue
from .tensor import Tensor, nonzero_mask

__all__ = [
    "Poset",
    "poset_new",
    "chain",
    "order_polytope_contains",
    "EchelonCheck",
    "is_echelon_form",
    "echelon_det",
    "admissible_relations",
    "find_echelon_poset",
]


@dataclass(frozen=True)
class Poset:
    """A strict partial order on ``1..d`` generated by ``covers``.

    ``covers`` is the Hasse diagram: generating pairs implied by transitivity
    through others are dropped on construction.
    """

    d: int
    covers: tuple[tuple[int, int], ...]
    closure: frozenset[tuple[int, int]] = field(compare=False, repr=False)

    @property
    def hasse_connected(self) -> bool:
        if self.d <= 1:
            return True
        adj = {a: set() for a in range(1, self.d + 1)}
        for a, b in self.covers:
            adj[a].add(b)
            adj[b].add(a)
        seen, stack = {1}, [1]
        while stack:
            for b in adj[stack.pop()]:
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        return len(seen) == self.d

    def less(self, a: int, b: int) -> bool:
        return (a, b) in self.closure

    def __str__(self):
        return ", ".join(f"{a}<{b}" for a, b in self.covers) or "(antichain)"


def poset_new(d: int, relations: Iterable[Sequence[int]]) -> Poset:
    """Build a poset from generating pairs ``(a, b)`` meaning ``a < b``."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    pairs = set()
    for rel in relations:
        a, b = (int(x) for x in rel)
        if not (1 <= a <= d and 1 <= b <= d):
            raise ValueError(f"pair ({a}, {b}) outside [1, {d}]")
        if a == b:
            raise CycleDetected(f"{a} < {a}")
        pairs.add((a, b))
    reach = np.zeros((d + 1, d + 1), dtype=bool)
    for a, b in pairs:
        reach[a, b] = True
    for k in range(1, d + 1):
        reach |= reach[:, [k]] & reach[[k], :]
    if np.any(np.diagonal(reach)):
        raise CycleDetected("relations contain a cycle")
    closure = frozenset((a, b) for a in range(1, d + 1) for b in range(1, d + 1) if reach[a, b])
    covers = tuple(sorted(
        (a, b) for (a, b) in closure
        if not any(reach[a, c] and reach[c, b] for c in range(1, d + 1))
    ))
    return Poset(d, covers, closure)


def chain(d: int) -> Poset:
    return poset_new(d, [(a, a + 1) for a in range(1, d)])


def order_polytope_contains(P: Poset, t, point: Sequence) -> bool:
    """Membership of ``point`` in ``{0 <= z <= t, z_a <= z_b for a <_P b}``."""
    if len(point) != P.d:
        raise ShapeMismatch(f"point has {len(point)} coordinates, poset has {P.d}")
    z = [Fraction(x) for x in point]
    t = Fraction(t)
    if any(x < 0 or x > t for x in z):
        return False
    # covers suffice; the closure follows by transitivity
    return all(z[a - 1] <= z[b - 1] for a, b in P.covers)


@dataclass(frozen=True)
class EchelonCheck:
    ok: bool
    violation: tuple[int, ...] | None = None

    def __bool__(self):
        return self.ok


def _support(T: Tensor) -> np.ndarray:
    return np.argwhere(nonzero_mask(T)) + 1


def is_echelon_form(T: Tensor, P: Poset) -> EchelonCheck:
    """Check the support against the cover inequalities (indices in ``[1, n]``).

    Violations are reported as the lexicographically first offending 1-based
    index tuple.
    """
    if P.d != T.d:
        raise ShapeMismatch(f"poset on [{P.d}] for a tensor of order {T.d}")
    if not P.hasse_connected:
        raise DisconnectedPoset(f"Hasse diagram of {P} is not connected")
    sup = _support(T)
    if not len(sup) or not P.covers:
        return EchelonCheck(True)
    a = np.array([c[0] - 1 for c in P.covers])
    b = np.array([c[1] - 1 for c in P.covers])
    bad = np.any(sup[:, a] > sup[:, b], axis=1)
    if np.any(bad):
        return EchelonCheck(False, tuple(int(x) for x in sup[np.argmax(bad)]))
    return EchelonCheck(True)


def echelon_det(T: Tensor, P: Poset) -> RingValue:
    """Product of the diagonal entries of a P-echelon tensor."""
    check = is_echelon_form(T, P)
    if not check:
        raise NotEchelon(f"support entry {check.violation} violates {P}")
    out = T.spec.one()
    for i in range(T.n):
        out = T.spec.mul(out, T.data[(i,) * T.d])
    return RingValue(T.spec, out)


def admissible_relations(T: Tensor) -> np.ndarray:
    """Boolean ``(d, d)`` matrix: ``[a, b]`` iff ``i_a <= i_b`` on all of the support (0-based)."""
    sup = _support(T)
    d = T.d
    if not len(sup):
        rel = np.ones((d, d), dtype=bool)
    else:
        rel = np.all(sup[:, :, None] <= sup[:, None, :], axis=0)
    np.fill_diagonal(rel, False)
    return rel


def find_echelon_poset(T: Tensor) -> Poset | None:
    """A connected poset putting T in echelon form, or None if none exists.

    The admissible pairs form a transitive relation, so any spanning tree of
    its comparability graph, oriented along the relation, is a valid Hasse
    diagram.  Edges are taken greedily in lexicographic order of ``(a, b)``,
    which makes the result deterministic: the identity tensor gives the star
    ``1 < 2, ..., 1 < d``.
    """
    d = T.d
    rel = admissible_relations(T)
    parent = list(range(d))

    def root(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    covers = []
    for a in range(d):
        for b in range(d):
            if rel[a, b] and root(a) != root(b):
                parent[root(a)] = root(b)
                covers.append((a + 1, b + 1))
    if len(covers) != max(d - 1, 0):
        return None
    return poset_new(d, covers)
