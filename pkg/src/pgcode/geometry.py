"""Points and subspaces of PG(n, q) with their incidence matrices.

Points are tuples of field codes normalized so the first nonzero coordinate
is 1.  The canonical point order sorts by the position of that leading 1,
then lexicographically by the remaining codes, so PG(1, 2) is ordered
(1,0), (1,1), (0,1).  Subspaces are stored as their reduced row echelon
basis and ordered the same way: pivot columns first, then the flattened
basis codes.  A point is thus ordered exactly like the 0-space it spans.
"""

from __future__ import annotations

import io
import itertools
import json
import struct
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import PreconditionError
from .gf import Field, field_of_order
from .linalg import nullspace, rref

MAX_POINTS = 2**16

Point = tuple[int, ...]


def theta(n: int, q: int) -> int:
    """Number of points of PG(n, q); theta(-1, q) == 0."""
    if n < -1 or q < 2:
        raise PreconditionError("theta needs n >= -1 and q >= 2")
    return (q ** (n + 1) - 1) // (q - 1)


def gaussian_coefficient(a: int, b: int, q: int) -> int:
    """Number of b-dimensional subspaces of an a-dimensional F_q-space."""
    if not 0 <= b <= a:
        return 0
    num = den = 1
    for i in range(b):
        num *= q ** (a - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@dataclass(frozen=True)
class Subspace:
    """A projective subspace given by its RREF basis (rows of field codes).

    The empty subspace has no rows and projective dimension -1.
    """

    basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis) - 1

    @property
    def is_empty(self) -> bool:
        return not self.basis

    def sort_key(self):
        pivots = tuple(next(i for i, c in enumerate(row) if c) for row in self.basis)
        return (pivots, tuple(itertools.chain.from_iterable(self.basis)))

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.basis]


class ProjectiveSpace:
    """PG(n, q) with its canonical point index and subspace enumerations."""

    def __init__(self, n: int, field: Field):
        if n < 0:
            raise PreconditionError("projective dimension must be >= 0")
        q = field.q
        if theta(n, q) > MAX_POINTS:
            raise PreconditionError(f"PG({n},{q}) has more than {MAX_POINTS} points")
        self.n = n
        self.field = field
        self.q = q
        self.p = field.p
        self._weights = np.array([q ** (n - i) for i in range(n + 1)], dtype=np.int64)
        pts = []
        for lead in range(n + 1):
            for tail in itertools.product(range(q), repeat=n - lead):
                pts.append((0,) * lead + (1,) + tail)
        self.points = np.array(pts, dtype=np.int64).reshape(len(pts), n + 1)
        self.points.setflags(write=False)
        self.num_points = len(pts)
        vec_index = np.full(q ** (n + 1), -1, dtype=np.int64)
        idx = np.arange(self.num_points)
        for lam in range(1, q):
            scaled = np.asarray(field.mul(lam, self.points))
            vec_index[scaled @ self._weights] = idx
        self._vec_index = vec_index
        self._subspaces: dict[int, list[Subspace]] = {}
        self._incidence: dict[int, np.ndarray] = {}
        self._point_cache: dict[Subspace, np.ndarray] = {}

    def __repr__(self):
        return f"PG({self.n},{self.q})"

    # points

    def index_of_vectors(self, vectors) -> np.ndarray:
        """Point indices of nonzero vectors (any scaling); -1 for zero rows."""
        v = np.asarray(vectors, dtype=np.int64)
        return self._vec_index[v @ self._weights]

    def index(self, coords: Sequence[int]) -> int:
        i = int(self.index_of_vectors(np.asarray(coords).reshape(1, -1))[0])
        if i < 0:
            raise PreconditionError("the zero vector is not a point")
        return i

    def point(self, i: int) -> Point:
        return tuple(int(c) for c in self.points[i])

    def normalize(self, coords: Sequence[int]) -> Point:
        return self.point(self.index(coords))

    # subspaces

    def subspace(self, rows) -> Subspace:
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.n + 1)
        if len(rows) == 0:
            return Subspace(())
        r, _ = rref(rows, self.field)
        return Subspace(tuple(tuple(int(c) for c in row) for row in r))

    def span(self, objects: Iterable) -> Subspace:
        """Span of points (coordinate tuples or indices) and subspaces."""
        rows = []
        for obj in objects:
            if isinstance(obj, Subspace):
                rows.extend(obj.basis)
            elif isinstance(obj, (int, np.integer)):
                rows.append(self.point(int(obj)))
            else:
                rows.append(tuple(obj))
        return self.subspace(rows)

    def span_of_indices(self, indices: Iterable[int]) -> Subspace:
        idx = list(indices)
        return self.subspace(self.points[idx]) if idx else Subspace(())

    def dual(self, s: Subspace) -> Subspace:
        """Annihilator: the subspace of linear forms vanishing on s."""
        ns = nullspace(list(s.basis), self.n + 1, self.field)
        return self.subspace(ns)

    def meet(self, a: Subspace, b: Subspace) -> Subspace:
        forms = list(self.dual(a).basis) + list(self.dual(b).basis)
        ns = nullspace(forms, self.n + 1, self.field)
        return self.subspace(ns)

    def points_of(self, s: Subspace) -> np.ndarray:
        """Sorted point indices lying in s."""
        cached = self._point_cache.get(s)
        if cached is not None:
            return cached
        out = np.zeros(0, dtype=np.int64) if s.is_empty else np.sort(self.chart(s))
        out.setflags(write=False)
        if len(self._point_cache) < 200_000:
            self._point_cache[s] = out
        return out

    def chart(self, s: Subspace) -> np.ndarray:
        """Global index of each point of PG(dim s, q), read in the basis of s."""
        coeffs = projective_space(s.dim, self.q).points
        basis = np.array(s.basis, dtype=np.int64)
        F = self.field
        acc = np.zeros((len(coeffs), self.n + 1), dtype=np.int64)
        for i in range(len(basis)):
            acc = np.asarray(F.add(acc, F.mul(coeffs[:, i : i + 1], basis[i][None, :])))
        return self.index_of_vectors(acc)

    def contains_point(self, s: Subspace, i: int) -> bool:
        return self.span([s, i]).dim == s.dim

    def enumerate_subspaces(self, d: int) -> list[Subspace]:
        if not 0 <= d <= self.n:
            raise PreconditionError(f"subspace dimension {d} outside [0, {self.n}]")
        cached = self._subspaces.get(d)
        if cached is not None:
            return cached
        q, width, r = self.q, self.n + 1, d + 1
        out = []
        for pivots in itertools.combinations(range(width), r):
            pset = set(pivots)
            free = [(i, j) for i, pc in enumerate(pivots) for j in range(pc + 1, width) if j not in pset]
            for vals in itertools.product(range(q), repeat=len(free)):
                m = [[0] * width for _ in range(r)]
                for i, pc in enumerate(pivots):
                    m[i][pc] = 1
                for (i, j), v in zip(free, vals):
                    m[i][j] = v
                out.append(Subspace(tuple(tuple(row) for row in m)))
        self._subspaces[d] = out
        return out

    def incidence(self, d: int) -> np.ndarray:
        """0/1 matrix with rows the d-subspaces and columns the points."""
        cached = self._incidence.get(d)
        if cached is not None:
            return cached
        subs = self.enumerate_subspaces(d)
        m = np.zeros((len(subs), self.num_points), dtype=np.uint8)
        for i, s in enumerate(subs):
            m[i, self.points_of(s)] = 1
        m.setflags(write=False)
        self._incidence[d] = m
        return m

    def hyperplane(self, form: Sequence[int]) -> Subspace:
        """The hyperplane sum(form[i] * X_i) = 0."""
        return self.subspace(nullspace([list(form)], self.n + 1, self.field))


@lru_cache(maxsize=None)
def projective_space(n: int, q: int) -> ProjectiveSpace:
    return ProjectiveSpace(n, field_of_order(q))


def enumerate_points(n: int, q: int) -> list[Point]:
    sp = projective_space(n, q)
    return [sp.point(i) for i in range(sp.num_points)]


def enumerate_subspaces(n: int, q: int, d: int) -> list[Subspace]:
    return projective_space(n, q).enumerate_subspaces(d)


def span(n: int, q: int, objects) -> Subspace:
    return projective_space(n, q).span(objects)


def meet(n: int, q: int, a: Subspace, b: Subspace) -> Subspace:
    return projective_space(n, q).meet(a, b)


def incidence_matrix(n: int, q: int, k: int) -> np.ndarray:
    if not 1 <= k <= n - 1:
        raise PreconditionError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    return projective_space(n, q).incidence(k)


# --- external formats --------------------------------------------------------


def write_incidence_csv(matrix: np.ndarray, fh) -> None:
    for row in np.asarray(matrix):
        fh.write(",".join(str(int(x)) for x in row))
        fh.write("\n")


def read_incidence_csv(fh) -> np.ndarray:
    rows = [[int(x) for x in line.strip().split(",")] for line in fh if line.strip()]
    return np.array(rows, dtype=np.uint8)


def pack_incidence(matrix: np.ndarray) -> bytes:
    """Row-major bits, rows padded to whole bytes, after a <II (rows, cols) header."""
    m = np.asarray(matrix, dtype=np.uint8)
    rows, cols = m.shape
    return struct.pack("<II", rows, cols) + np.packbits(m, axis=1).tobytes()


def unpack_incidence(data: bytes) -> np.ndarray:
    rows, cols = struct.unpack_from("<II", data, 0)
    stride = (cols + 7) // 8
    raw = np.frombuffer(data, dtype=np.uint8, offset=8, count=rows * stride).reshape(rows, stride)
    return np.unpackbits(raw, axis=1)[:, :cols]


def points_to_json(points: Iterable[Sequence[int]]) -> str:
    return json.dumps([list(map(int, pt)) for pt in points])


def incidence_csv_string(matrix: np.ndarray) -> str:
    buf = io.StringIO()
    write_incidence_csv(matrix, buf)
    return buf.getvalue()
