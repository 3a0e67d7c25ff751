"""Blocking-set predicates, minimal reduction and the counting identities."""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import PreconditionError, TheoremViolation
from .geometry import ProjectiveSpace, Subspace, gaussian_coefficient, projective_space, theta
from .gf import prime_power


class OrderDependentReduction(UserWarning):
    """Reduction requested outside the regime where the result is unique."""


@dataclass(frozen=True)
class PointSet:
    space: ProjectiveSpace
    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(sorted(set(int(i) for i in self.indices)))
        if idx and not (0 <= idx[0] and idx[-1] < self.space.num_points):
            raise PreconditionError("point index outside the ambient space")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def of(cls, space: ProjectiveSpace, indices: Iterable[int]) -> PointSet:
        return cls(space, tuple(indices))

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, i):
        return int(i) in set(self.indices)

    def vector(self, value: int = 1) -> np.ndarray:
        v = np.zeros(self.space.num_points, dtype=np.int64)
        v[list(self.indices)] = value
        return v

    def without(self, i: int) -> PointSet:
        return PointSet(self.space, tuple(j for j in self.indices if j != i))

    def union(self, other: Iterable[int]) -> PointSet:
        return PointSet(self.space, self.indices + tuple(other))

    def to_json(self) -> dict:
        f = self.space.field
        return {"n": self.space.n, "p": f.p, "h": f.h, "points": list(self.indices)}

    @classmethod
    def from_json(cls, data: dict | str) -> PointSet:
        if isinstance(data, str):
            data = json.loads(data)
        space = projective_space(int(data["n"]), int(data["p"]) ** int(data.get("h", 1)))
        pts = [space.index(pt) if isinstance(pt, (list, tuple)) else int(pt) for pt in data["points"]]
        return cls(space, tuple(pts))


def subspace_points(space: ProjectiveSpace, s: Subspace) -> PointSet:
    return PointSet(space, tuple(space.points_of(s)))


def intersection_sizes(S: PointSet, d: int) -> np.ndarray:
    """|S cap T| for every d-subspace T, in enumeration order."""
    m = S.space.incidence(d)
    return m[:, list(S.indices)].sum(axis=1, dtype=np.int64) if len(S) else np.zeros(len(m), dtype=np.int64)


def _check_k(S: PointSet, k: int) -> int:
    n = S.space.n
    if not 1 <= k <= n - 1:
        raise PreconditionError(f"k={k} outside [1, {n - 1}]")
    return n - k


def is_k_blocking_set(S: PointSet, k: int) -> bool:
    d = _check_k(S, k)
    return bool((intersection_sizes(S, d) > 0).all())


def essential_points(S: PointSet, k: int) -> PointSet:
    d = _check_k(S, k)
    sizes = intersection_sizes(S, d)
    if not (sizes > 0).all():
        raise PreconditionError("not a k-blocking set")
    tangent = np.flatnonzero(sizes == 1)
    m = S.space.incidence(d)
    cols = list(S.indices)
    hit = m[np.ix_(tangent, cols)].any(axis=0) if len(tangent) else np.zeros(len(cols), dtype=bool)
    return PointSet(S.space, tuple(c for c, h in zip(cols, hit) if h))


def is_minimal(S: PointSet, k: int) -> bool:
    return is_k_blocking_set(S, k) and len(essential_points(S, k)) == len(S)


def in_uniqueness_regime(S: PointSet, k: int) -> bool:
    return len(S) < 2 * S.space.q**k


def minimal_reduce(S: PointSet, k: int, order: Sequence[int] | None = None) -> PointSet:
    """Delete non-essential points until the set is minimal.

    At each step the first non-essential point in ``order`` (default:
    increasing index) is removed.  For |S| >= 2 q^k the outcome can depend on
    the order, and an :class:`OrderDependentReduction` warning is issued.
    """
    if not is_k_blocking_set(S, k):
        raise PreconditionError("not a k-blocking set")
    if not in_uniqueness_regime(S, k):
        warnings.warn(
            f"|S| = {len(S)} >= 2q^k = {2 * S.space.q**k}; reduction may depend on deletion order",
            OrderDependentReduction,
            stacklevel=2,
        )
    rank = {int(i): r for r, i in enumerate(order)} if order is not None else None
    while True:
        ess = set(essential_points(S, k).indices)
        loose = [i for i in S.indices if i not in ess]
        if not loose:
            return S
        if rank is not None:
            victim = min(loose, key=lambda i: (rank.get(i, math.inf), i))
        else:
            victim = loose[0]
        S = S.without(victim)


def reduction_outcomes(S: PointSet, k: int) -> set[tuple[int, ...]]:
    """Every minimal set reachable by deleting non-essential points in some order.

    Explores all deletion sequences (with memoization on intermediate sets),
    so it covers every order a caller could pass to :func:`minimal_reduce`.
    """
    if not is_k_blocking_set(S, k):
        raise PreconditionError("not a k-blocking set")
    seen: set[tuple[int, ...]] = set()
    out: set[tuple[int, ...]] = set()
    stack = [S]
    while stack:
        cur = stack.pop()
        if cur.indices in seen:
            continue
        seen.add(cur.indices)
        ess = set(essential_points(cur, k).indices)
        loose = [i for i in cur.indices if i not in ess]
        if not loose:
            out.add(cur.indices)
        stack.extend(cur.without(i) for i in loose)
    return out


def intersection_exponent(S: PointSet, k: int) -> int:
    """Largest e with every (n-k)-space meeting S in 1 mod p^e points."""
    d = _check_k(S, k)
    sizes = intersection_sizes(S, d)
    if not (sizes > 0).all():
        raise PreconditionError("not a k-blocking set")
    p = S.space.p
    e = 0
    while p ** (e + 1) <= len(S) and ((sizes - 1) % p ** (e + 1) == 0).all():
        e += 1
    return e


@dataclass
class TauHistogram:
    E: int
    counts: dict[int, int]
    X: int
    lhs: tuple[int, int, int]
    rhs: tuple[Fraction, Fraction, Fraction]
    inequality_value: Fraction

    @property
    def identities(self) -> dict[str, bool]:
        return {f"eq{9 + i}": self.lhs[i] == self.rhs[i] for i in range(3)}

    def to_json(self) -> dict:
        return {
            "E": self.E,
            "tau": {str(s): c for s, c in sorted(self.counts.items())},
            "X": self.X,
            "identities": self.identities,
        }


def lines_through_count(n: int, k: int, q: int) -> Fraction:
    """(n-k)-spaces through a fixed line, as the explicit product formula."""
    num = 1
    for i in range(k + 1, n):
        num *= q**i - 1
    den = 1
    for i in range(1, n - k):
        den *= q**i - 1
    return Fraction(num, den)


def tau_histogram(S: PointSet, k: int, E: int) -> TauHistogram:
    """Histogram of (n-k)-space intersection sizes and the three counting identities."""
    d = _check_k(S, k)
    space = S.space
    n, q = space.n, space.q
    sizes = intersection_sizes(S, d)
    bad = np.flatnonzero((sizes - 1) % E != 0)
    if len(bad):
        t = space.enumerate_subspaces(d)[int(bad[0])]
        raise PreconditionError(
            f"{d}-space {t.to_json()} meets S in {int(sizes[bad[0]])} points, not 1 mod {E}"
        )
    values, freq = np.unique(sizes, return_counts=True)
    counts = {int(v): int(c) for v, c in zip(values, freq)}
    X = lines_through_count(n, k, q)
    b = len(S)
    lhs = (
        sum(counts.values()),
        sum(s * c for s, c in counts.items()),
        sum(s * (s - 1) * c for s, c in counts.items()),
    )
    spaces_factor = Fraction((q ** (n + 1) - 1) * (q**n - 1), (q ** (d + 1) - 1) * (q**d - 1))
    point_factor = Fraction(q**n - 1, q**d - 1)
    rhs = (spaces_factor * X, b * point_factor * X, Fraction(b * (b - 1)) * X)
    ineq = b * (b - 1) - (1 + E) * b * point_factor + (1 + E) * spaces_factor
    if X.denominator != 1:
        raise AssertionError("non-integral count of spaces through a line")
    return TauHistogram(E, counts, int(X), lhs, rhs, ineq)


def is_subspace_set(S: PointSet) -> Subspace | None:
    """The subspace whose point set is exactly S, if there is one."""
    if not len(S):
        return None
    sp = S.space.span_of_indices(S.indices)
    return sp if theta(sp.dim, S.space.q) == len(S) else None


def verify_bose_burton(S: PointSet, k: int) -> str:
    """Classify S as "k-space", "not-minimum" or "not-blocking".

    A blocking set of size theta_k that is not a k-space, or any blocking set
    smaller than theta_k, raises :class:`TheoremViolation`.
    """
    if not is_k_blocking_set(S, k):
        return "not-blocking"
    tk = theta(k, S.space.q)
    if len(S) < tk:
        raise TheoremViolation(f"k-blocking set of size {len(S)} < theta_k = {tk}")
    if len(S) == tk:
        sub = is_subspace_set(S)
        if sub is None or sub.dim != k:
            raise TheoremViolation(f"k-blocking set of size theta_k = {tk} is not a k-space")
        return "k-space"
    return "not-minimum"


def is_baer_subplane(S: PointSet) -> bool:
    """True if S is a PG(2, sqrt q) inside some plane of the ambient space."""
    q = S.space.q
    r = math.isqrt(q)
    if r * r != q or len(S) != q + r + 1:
        return False
    plane = S.space.span_of_indices(S.indices)
    if plane.dim != 2:
        return False
    members = set(S.indices)
    in_plane = set(S.space.points_of(plane).tolist())
    for line in S.space.enumerate_subspaces(1):
        pts = S.space.points_of(line).tolist()
        if not in_plane.issuperset(pts):
            continue
        if sum(1 for x in pts if x in members) not in (1, r + 1):
            return False
    return True


@dataclass(frozen=True)
class DualBound:
    value: int
    tag: str


def symbol_weight_bound(m: int, n: int, q: int, k: int) -> Fraction:
    """Weight bound for a dual codeword using 2m distinct nonzero symbols."""
    t = theta(n - k, q)
    return Fraction(4 * m, 2 * m + 1) * t + Fraction(2 * m, 2 * m + 1)


def dual_lower_bounds(n: int, q: int, k: int) -> DualBound:
    """Lower bound on the minimum weight of the dual of C_k(n, q)."""
    p, h = prime_power(q)
    t = theta(n - k, q)
    if h == 1:
        return DualBound(2 * p ** (n - k), "thm:priem")
    if p == 2:
        return DualBound(t + 1, "rem:trivial")
    if p < 7:
        return DualBound(math.ceil(Fraction(4 * t + 2, 3)), "thm:th16")
    if p == 7:
        return DualBound(math.ceil(Fraction(12 * t + 2, 7)), "thm:th8")
    return DualBound(math.ceil(Fraction(12 * t + 6, 7)), "thm:th8")


def gaussian_lines_through(n: int, k: int, q: int) -> int:
    return gaussian_coefficient(n - 1, n - k - 1, q)
