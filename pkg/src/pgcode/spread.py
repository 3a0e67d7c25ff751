"""Field reduction of PG(n, p^h) to PG((n+1)h - 1, p) and linear blocking sets.

An F_q-vector (x_0, ..., x_n) is written over F_p by expanding each
coordinate into its h coefficients, so coordinate j occupies positions
j*h .. j*h + h - 1 of the F_p-vector.  Spread element i is the image of
point i of PG(n, q), which makes the element index and the point index the
same thing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .blocking import PointSet, is_k_blocking_set, is_subspace_set
from .errors import PreconditionError, TheoremViolation
from .geometry import ProjectiveSpace, Subspace, projective_space, theta


class Spread:
    """The Desarguesian (h-1)-spread of PG((n+1)h - 1, p)."""

    def __init__(self, n: int, p: int, h: int):
        q = p**h
        self.n, self.p, self.h, self.q = n, p, h, q
        self.small = projective_space(n, q)
        self.big = projective_space((n + 1) * h - 1, p)
        self.field = self.small.field
        self._pw = np.array([p**i for i in range(h)], dtype=np.int64)
        self.lookup = self.small.index_of_vectors(self.to_small_vectors(self.big.points))
        self.lookup.setflags(write=False)
        self.elements = [self._element(i) for i in range(self.small.num_points)]

    def to_big_vectors(self, vectors) -> np.ndarray:
        """F_q-vectors (codes) to their F_p coefficient expansion."""
        v = np.asarray(vectors, dtype=np.int64)
        digits = (v[..., None] // self._pw) % self.p
        return digits.reshape(*v.shape[:-1], v.shape[-1] * self.h)

    def to_small_vectors(self, vectors) -> np.ndarray:
        v = np.asarray(vectors, dtype=np.int64)
        blocks = v.reshape(*v.shape[:-1], self.n + 1, self.h)
        return blocks @ self._pw

    def _scaled_rows(self, rows) -> np.ndarray:
        """{t^i * r : i < h, r in rows} expanded over F_p."""
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.n + 1)
        out = [np.asarray(self.field.mul(self.p**i, rows)) for i in range(self.h)]
        return self.to_big_vectors(np.concatenate(out))

    def _element(self, i: int) -> Subspace:
        return self.big.subspace(self._scaled_rows(self.small.points[i]))

    def image(self, s: Subspace) -> Subspace:
        """The ((d+1)h - 1)-space of PG((n+1)h-1, p) corresponding to s."""
        return self.big.subspace(self._scaled_rows(s.basis))

    def element_points(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.lookup == i)

    def element_hits(self, U: Subspace) -> np.ndarray:
        """For each spread element, the number of points of U in it."""
        return np.bincount(self.lookup[self.big.points_of(U)], minlength=len(self.elements))

    def b_of_u(self, U: Subspace) -> PointSet:
        if U.basis and len(U.basis[0]) != self.big.n + 1:
            raise PreconditionError("U does not live in the reduced space")
        return PointSet(self.small, tuple(np.unique(self.lookup[self.big.points_of(U)])))

    def to_json(self) -> dict:
        return {"n": self.n, "p": self.p, "h": self.h, "reduced_dimension": self.big.n}


@lru_cache(maxsize=None)
def field_reduce(n: int, p: int, h: int) -> Spread:
    return Spread(n, p, h)


@dataclass
class LinearBlockingSetWitness:
    U: Subspace
    B: PointSet
    k: int
    one_point_elements: int
    size_mod_q: int
    verified: bool = True
    provenance: dict = field(default_factory=dict)

    def to_json(self, spread: Spread) -> dict:
        return {
            "reduced_space": {"n": spread.big.n, "p": spread.p},
            "U_basis": self.U.to_json(),
            "points": list(self.B.indices),
            "verified": self.verified,
        }


def linear_blocking_set(U: Subspace, spread: Spread, k: int) -> LinearBlockingSetWitness:
    """Verified witness that B(U) is a k-blocking set, for dim U = hk."""
    N = spread.h * k
    if U.dim != N:
        raise PreconditionError(f"dim U = {U.dim}, expected h*k = {N}")
    B = spread.b_of_u(U)
    p = spread.p
    if len(B) % p != 1 % p:
        raise TheoremViolation(f"|B(U)| = {len(B)} is not 1 mod {p}")
    if not is_k_blocking_set(B, k):
        raise TheoremViolation("B(U) does not block all (n-k)-spaces")
    hits = spread.element_hits(U)
    census = int((hits == 1).sum())
    if census < p**N - p ** (N - 1) + 1:
        raise TheoremViolation(f"only {census} spread elements meet U in one point")
    return LinearBlockingSetWitness(U, B, k, census, len(B) % spread.q)


def is_trivial_witness(w: LinearBlockingSetWitness) -> bool:
    sub = is_subspace_set(w.B)
    return sub is not None and sub.dim == w.k


def _hyperplanes_within(big: ProjectiveSpace, U: Subspace) -> list[Subspace]:
    local = projective_space(U.dim, big.q).enumerate_subspaces(U.dim - 1)
    basis = np.array(U.basis, dtype=np.int64)
    F = big.field
    out = []
    for s in local:
        rows = []
        for coeffs in s.basis:
            acc = np.zeros(big.n + 1, dtype=np.int64)
            for c, b in zip(coeffs, basis):
                acc = np.asarray(F.add(acc, F.mul(c, b)))
            rows.append(acc)
        out.append(big.subspace(rows))
    return out


def _lines_through(big: ProjectiveSpace, r: int, within: Subspace | None) -> list[Subspace]:
    pool = big.points_of(within) if within is not None else np.arange(big.num_points)
    seen: set[int] = {r}
    lines = []
    for x in pool.tolist():
        if x in seen:
            continue
        line = big.span([r, x])
        seen.update(big.points_of(line).tolist())
        lines.append(line)
    return lines


def companion_blocking_set(w: LinearBlockingSetWitness, spread: Spread) -> LinearBlockingSetWitness:
    """Second small linear blocking set meeting B(U) in 2 mod p points.

    Follows the construction: a spread element R1 meeting U once, a
    hyperplane U1 of U missing R1, an element R2 of B(U1) not inside U1, then
    lines m through a point of U1 cap R2 (first inside <R1, R2>, then
    anywhere) with U' = <m, U1>.
    """
    if is_trivial_witness(w):
        raise PreconditionError("B(U) is a k-space; no companion is promised")
    big, p = spread.big, spread.p
    U, B = w.U, set(w.B.indices)
    upts = big.points_of(U)
    hits = spread.element_hits(U)
    elem_size = theta(spread.h - 1, p)
    for R1 in np.flatnonzero(hits == 1).tolist():
        p1 = int(upts[spread.lookup[upts] == R1][0])
        for U1 in _hyperplanes_within(big, U):
            u1pts = big.points_of(U1)
            if p1 in set(u1pts.tolist()):
                continue
            h1 = spread.element_hits(U1)
            for R2 in np.flatnonzero((h1 > 0) & (h1 < elem_size)).tolist():
                joint = big.span([spread.elements[R1], spread.elements[R2]])
                anchors = u1pts[spread.lookup[u1pts] == R2].tolist()
                for within in (joint, None):
                    for r in anchors:
                        for m in _lines_through(big, r, within):
                            Up = big.span([m, U1])
                            if Up.dim != U.dim:
                                continue
                            Bp = spread.b_of_u(Up)
                            inter = len(B.intersection(Bp.indices))
                            if inter % p == 2 % p:
                                out = linear_blocking_set(Up, spread, w.k)
                                out.provenance = {
                                    "construction": "companion",
                                    "R1": R1,
                                    "R2": R2,
                                    "U_hyperplane": U1.to_json(),
                                    "line": m.to_json(),
                                    "intersection": inter,
                                }
                                return out
    raise TheoremViolation("no companion blocking set found; the construction was exhausted")


def uniqueness_check(U1: Subspace, R1: int, R2: int, spread: Spread) -> PointSet | None:
    """The unique B(U) over all U ⊃ U1 of one dimension more meeting R1 and R2.

    Returns None when no such U exists or when R1 or R2 already lies in
    B(U1).  Two different resulting sets raise :class:`TheoremViolation`.
    """
    big = spread.big
    base = set(spread.b_of_u(U1).indices)
    if R1 in base or R2 in base or R1 == R2:
        return None
    found: dict[tuple[int, ...], PointSet] = {}
    for x in spread.element_points(R1).tolist():
        U = big.span([U1, x])
        if U.dim != U1.dim + 1:
            continue
        if spread.element_hits(U)[R2] == 0:
            continue
        B = spread.b_of_u(U)
        found[B.indices] = B
    if not found:
        return None
    if len(found) > 1:
        raise TheoremViolation("B(U) is not determined by U1, R1 and R2")
    return next(iter(found.values()))


def tangent_or_contained_points(B: PointSet) -> list[int]:
    """Points R of B with every line through R tangent to B or inside B."""
    space = B.space
    members = set(B.indices)
    lines = space.enumerate_subspaces(1)
    inc = space.incidence(1)
    out = []
    for r in B.indices:
        ok = True
        for li in np.flatnonzero(inc[:, r]).tolist():
            pts = space.points_of(lines[li]).tolist()
            c = sum(1 for x in pts if x in members)
            if c != 1 and c != len(pts):
                ok = False
                break
        if ok:
            out.append(r)
    return out
