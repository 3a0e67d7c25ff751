"""Rédei polynomials of small 1-blocking sets in PG(n, q).

After a change of coordinates the blocking set K has the tangent
hyperplane X_n = 0, touching K only in (0, ..., 0, 1, 0).  The remaining
points U get affine coordinates (a_0, ..., a_{n-1}) and

    H(X, X_0, ..., X_{n-2}) = prod_{a in U} (X + a_0 X_0 + ... + a_{n-2} X_{n-2} - a_{n-1}).

Writing H = sum_j h_j X^{|U| - j}, the truncation f = sum_{j <= k} h_j X^{k-j}
with k = |K| - q - 1 carries the information about non-essential points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .blocking import PointSet, intersection_sizes, is_k_blocking_set, minimal_reduce
from .errors import PreconditionError, TheoremViolation
from .geometry import Subspace
from .gf import Field
from .linalg import nullspace, rank


# --- sparse multivariate polynomials ----------------------------------------


class MPoly:
    """Sparse polynomial in X and X_0..X_{m-1} over a finite field.

    Keys are exponent tuples (x_degree, e_0, ..., e_{m-1}); values are
    nonzero field codes.
    """

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: Field, nvars: int, terms: dict | None = None):
        self.field = field
        self.nvars = nvars
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def constant(cls, field: Field, nvars: int, c: int) -> MPoly:
        return cls(field, nvars, {(0,) * (nvars + 1): c})

    @classmethod
    def linear(cls, field: Field, x_coeff: int, coeffs: Sequence[int], const: int) -> MPoly:
        m = len(coeffs)
        terms = {(0,) * (m + 1): const, (1,) + (0,) * m: x_coeff}
        for i, c in enumerate(coeffs):
            e = [0] * (m + 1)
            e[i + 1] = 1
            terms[tuple(e)] = c
        return cls(field, m, terms)

    def copy(self) -> MPoly:
        return MPoly(self.field, self.nvars, dict(self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, MPoly) and self.terms == other.terms

    def __add__(self, other: MPoly) -> MPoly:
        F = self.field
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = int(F.add(out.get(k, 0), v))
        return MPoly(F, self.nvars, out)

    def __neg__(self) -> MPoly:
        F = self.field
        return MPoly(F, self.nvars, {k: int(F.neg(v)) for k, v in self.terms.items()})

    def __sub__(self, other: MPoly) -> MPoly:
        return self + (-other)

    def __mul__(self, other: MPoly) -> MPoly:
        F = self.field
        out: dict = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                out[k] = int(F.add(out.get(k, 0), int(F.mul(va, vb))))
        return MPoly(F, self.nvars, out)

    def scale(self, c: int) -> MPoly:
        F = self.field
        return MPoly(F, self.nvars, {k: int(F.mul(v, c)) for k, v in self.terms.items()})

    def x_degree(self) -> int:
        return max((k[0] for k in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def x_coefficient(self, d: int) -> MPoly:
        """Coefficient of X^d, a polynomial with no X."""
        return MPoly(
            self.field,
            self.nvars,
            {(0,) + k[1:]: v for k, v in self.terms.items() if k[0] == d},
        )

    def shift_x(self, d: int) -> MPoly:
        return MPoly(self.field, self.nvars, {(k[0] + d,) + k[1:]: v for k, v in self.terms.items()})

    def evaluate(self, x: int, values: Sequence[int]) -> int:
        F = self.field
        acc = 0
        for k, v in self.terms.items():
            t = int(F.mul(v, int(F.pow(x, k[0]))))
            for e, val in zip(k[1:], values):
                if e:
                    t = int(F.mul(t, int(F.pow(val, e))))
            acc = int(F.add(acc, t))
        return acc

    def univariate(self, values: Sequence[int]) -> list[int]:
        """Coefficients (lowest degree first) of the polynomial in X at X_bar = values."""
        F = self.field
        out = [0] * (self.x_degree() + 1)
        for k, v in self.terms.items():
            t = v
            for e, val in zip(k[1:], values):
                if e:
                    t = int(F.mul(t, int(F.pow(val, e))))
            out[k[0]] = int(F.add(out[k[0]], t))
        return out

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        # total degree, then lex on the exponent vector
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def to_json(self) -> list[dict]:
        return [
            {"exponents": list(k[1:]), "x_degree": k[0], "coeff": v}
            for k, v in self.sorted_terms()
        ]

    def __repr__(self):
        return f"MPoly({self.to_json()})"


def divide_by_linear(f: MPoly, c: MPoly) -> tuple[MPoly, MPoly]:
    """Exact division of f by (X - c), c free of X.  Returns (quotient, remainder)."""
    k = f.x_degree()
    zero = MPoly(f.field, f.nvars)
    if k < 0:
        return zero, zero
    coeffs = [f.x_coefficient(d) for d in range(k + 1)]
    b = coeffs[k]
    quotient = b.shift_x(k - 1) if k >= 1 else zero
    for d in range(k - 1, 0, -1):
        b = coeffs[d] + c * b
        quotient = quotient + b.shift_x(d - 1)
    remainder = coeffs[0] + c * b if k >= 1 else coeffs[0]
    return quotient, remainder


# --- univariate helpers (lowest degree first) --------------------------------


def _trim(a: list[int]) -> list[int]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_divmod(a: Sequence[int], b: Sequence[int], F: Field) -> tuple[list[int], list[int]]:
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    inv_lead = int(F.inv(b[-1]))
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    for i in range(len(a) - len(b), -1, -1):
        c = int(F.mul(r[i + len(b) - 1], inv_lead))
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                r[i + j] = int(F.sub(r[i + j], int(F.mul(c, bj))))
    return _trim(q), _trim(r)


def root_multiplicities(a: Sequence[int], F: Field) -> dict[int, int]:
    out = {}
    for x in range(F.q):
        poly = _trim(a)
        m = 0
        while len(poly) > 1:
            quo, rem = poly_divmod(poly, [int(F.neg(x)), 1], F)
            if rem:
                break
            poly, m = quo, m + 1
        if m:
            out[x] = m
    return out


# --- frames ------------------------------------------------------------------


@dataclass
class AffineFrame:
    K: PointSet
    hyperplane: Subspace
    point: int
    matrix: np.ndarray  # new coordinates = matrix @ old coordinates
    affine: np.ndarray  # rows (a_0, ..., a_{n-1}) for the points of U
    affine_indices: tuple[int, ...]
    at_infinity: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.K.space.n

    @property
    def q(self) -> int:
        return self.K.space.q

    @property
    def k(self) -> int:
        return len(self.K) - self.q - len(self.at_infinity)

    def index_of_affine(self, a: Sequence[int]) -> int:
        i = [tuple(r) for r in self.affine.tolist()].index(tuple(int(x) for x in a))
        return self.affine_indices[i]


def _tangent_hyperplanes(K: PointSet) -> list[tuple[int, Subspace, int]]:
    space = K.space
    sizes = intersection_sizes(K, space.n - 1)
    hps = space.enumerate_subspaces(space.n - 1)
    members = set(K.indices)
    out = []
    for i in np.flatnonzero(sizes == 1).tolist():
        pt = next(x for x in space.points_of(hps[i]).tolist() if x in members)
        out.append((i, hps[i], pt))
    return out


def _frame_matrix(space, hyperplane: Subspace, point: int, rng: np.random.Generator | None) -> np.ndarray:
    F, n = space.field, space.n
    phi = np.array(space.dual(hyperplane).basis[0], dtype=np.int64)
    P = space.points[point]
    ann = nullspace([P], n + 1, F)
    if rng is not None:
        while True:
            mix = rng.integers(0, F.q, size=(len(ann), len(ann)))
            if rank(mix, F) == len(ann):
                break
        ann = np.array([_combine(F, row, ann) for row in mix])
    rows = [phi]
    for cand in ann:
        if rank(rows + [cand], F) == len(rows) + 1:
            rows.append(cand)
        if len(rows) == n:
            break
    others = rows[1:]
    if rng is not None:
        while True:
            last = rng.integers(0, F.q, size=n + 1)
            if _dot(F, last, P):
                break
    else:
        j = int(np.flatnonzero(P)[0])
        last = np.zeros(n + 1, dtype=np.int64)
        last[j] = 1
    last = np.asarray(F.mul(int(F.inv(_dot(F, last, P))), last))
    M = np.array(others + [last, phi], dtype=np.int64)
    if rank(M, F) != n + 1:
        raise AssertionError("frame matrix is singular")
    return M


def _combine(F: Field, coeffs, rows) -> np.ndarray:
    acc = np.zeros(rows.shape[1], dtype=np.int64)
    for c, r in zip(coeffs, rows):
        acc = np.asarray(F.add(acc, F.mul(int(c), r)))
    return acc


def _dot(F: Field, a, b) -> int:
    return _sum(F, F.mul(np.asarray(a), np.asarray(b)))


def _sum(F: Field, v) -> int:
    acc = 0
    for x in np.asarray(v).ravel().tolist():
        acc = int(F.add(acc, x))
    return acc


def _apply(F: Field, M: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Rows of ``vectors`` mapped by M (as column vectors)."""
    out = np.zeros((len(vectors), M.shape[0]), dtype=np.int64)
    for i, row in enumerate(M):
        prod = np.asarray(F.mul(vectors, row[None, :]))
        acc = np.zeros(len(vectors), dtype=np.int64)
        for j in range(prod.shape[1]):
            acc = np.asarray(F.add(acc, prod[:, j]))
        out[:, i] = acc
    return out


def build_frame(K: PointSet, choice: int = 0, rng: np.random.Generator | None = None) -> AffineFrame:
    """Coordinates putting a tangent hyperplane of K at infinity.

    ``choice`` picks among the tangent hyperplanes in enumeration order and
    ``rng`` randomizes the remaining basis; the defaults give the
    lexicographically first frame.
    """
    space = K.space
    q = space.q
    if space.n < 2:
        raise PreconditionError("need n >= 2")
    if len(K) > 2 * q - 1:
        raise PreconditionError(f"|K| = {len(K)} > 2q - 1 = {2 * q - 1}")
    if not is_k_blocking_set(K, 1):
        raise PreconditionError("K is not a 1-blocking set")
    tangents = _tangent_hyperplanes(K)
    if not tangents:
        raise TheoremViolation("a 1-blocking set of size <= 2q - 1 without a tangent hyperplane")
    _, hp, pt = tangents[choice % len(tangents)]
    F = space.field
    M = _frame_matrix(space, hp, pt, rng)
    new = _apply(F, M, space.points[list(K.indices)])
    affine, aff_idx, inf_idx = [], [], []
    for idx, y in zip(K.indices, new):
        last = int(y[-1])
        if last == 0:
            inf_idx.append(idx)
            continue
        affine.append(np.asarray(F.div(y[:-1], last)))
        aff_idx.append(idx)
    return AffineFrame(
        K,
        hp,
        pt,
        M,
        np.array(affine, dtype=np.int64).reshape(len(affine), space.n),
        tuple(aff_idx),
        tuple(inf_idx),
    )


def alternative_frames(K: PointSet, count: int, seed: int = 0) -> list[AffineFrame]:
    rng = np.random.default_rng(seed)
    return [build_frame(K, choice=int(rng.integers(0, 1 << 30)), rng=rng) for _ in range(count)]


# --- the polynomial ----------------------------------------------------------


@dataclass
class RedeiPolynomial:
    frame: AffineFrame
    H: MPoly
    coefficients: list[MPoly]  # h_0 = 1, h_1, ..., h_{|U|}
    k: int

    @property
    def f(self) -> MPoly:
        out = MPoly(self.H.field, self.H.nvars)
        for j in range(self.k + 1):
            out = out + self.coefficients[j].shift_x(self.k - j)
        return out

    def degree_bounds_hold(self) -> bool:
        return all(c.total_degree() <= j for j, c in enumerate(self.coefficients))

    def to_json(self) -> dict:
        return {"k": self.k, "H": self.H.to_json(), "f": self.f.to_json()}


def point_form(F: Field, a: Sequence[int]) -> MPoly:
    """X + a_0 X_0 + ... + a_{n-2} X_{n-2} - a_{n-1}."""
    a = [int(x) for x in a]
    return MPoly.linear(F, 1, a[:-1], int(F.neg(a[-1])))


def redei_f(frame: AffineFrame) -> RedeiPolynomial:
    F = frame.K.space.field
    m = frame.n - 1
    k = frame.k
    if k < 0:
        raise PreconditionError(f"|K| - q - N = {k} < 0")
    H = MPoly.constant(F, m, 1)
    for a in frame.affine:
        H = H * point_form(F, a)
    size = len(frame.affine)
    coeffs = [H.x_coefficient(size - j) for j in range(size + 1)]
    return RedeiPolynomial(frame, H, coeffs, k)


@dataclass
class SlopeReport:
    slope: tuple[int, ...]
    H: list[int]
    f: list[int]
    divisible: bool
    splits: bool
    roots: dict[int, int]
    hyperplane_hits: dict[int, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "slope": list(self.slope),
            "H": self.H,
            "f": self.f,
            "divisible": self.divisible,
            "splits": self.splits,
            "roots": {str(x): m for x, m in self.roots.items()},
            "hyperplane_hits": {str(x): c for x, c in self.hyperplane_hits.items()},
        }


def slope_evaluate(rp: RedeiPolynomial, slope: Sequence[int]) -> SlopeReport:
    """Check H(X, m) = (X^q - X) f(X, m) for one slope m, with f(X, m) split over F_q.

    An r-fold root x must also belong to a hyperplane meeting K in r + 1
    points.  Any failure raises :class:`TheoremViolation`.
    """
    frame = rp.frame
    space = frame.K.space
    F, q = space.field, space.q
    slope = tuple(int(s) for s in slope)
    if len(slope) != frame.n - 1:
        raise PreconditionError(f"slope needs {frame.n - 1} entries")
    if rp.k >= q - 1:
        raise PreconditionError(f"k = {rp.k} >= q - 1; the quotient identity needs k < q - 1")
    # the (n-2)-space at infinity: y_n = 0 and sum m_i y_i - y_{n-1} = 0
    form = np.array(list(slope) + [int(F.neg(1)), 0], dtype=np.int64)
    inf_new = _apply(F, frame.matrix, space.points[list(frame.at_infinity)]) if frame.at_infinity else []
    for idx, y in zip(frame.at_infinity, inf_new):
        if _dot(F, form, y) == 0:
            raise PreconditionError(
                f"slope {list(slope)} meets K at infinity in point {idx} {space.point(idx)}"
            )
    Hx = rp.H.univariate(slope)
    fx = _trim(rp.f.univariate(slope))
    xq = [0] * (q + 1)
    xq[q] = 1
    xq[1] = int(F.neg(1))
    quo, rem = poly_divmod(Hx, xq, F)
    divisible = not rem
    if not divisible:
        raise TheoremViolation(f"X^q - X does not divide H(X, {list(slope)})")
    if quo != fx:
        raise TheoremViolation(f"H(X, m) / (X^q - X) differs from f(X, m) at m = {list(slope)}")
    roots = root_multiplicities(fx, F)
    splits = sum(roots.values()) == len(fx) - 1
    if not splits:
        raise TheoremViolation(f"f(X, {list(slope)}) does not split over F_{q}")
    hits = {}
    for x in range(q):
        c = 0
        for a in frame.affine:
            if point_form(F, a).evaluate(x, slope) == 0:
                c += 1
        hits[x] = c
        if c != roots.get(x, 0) + 1:
            raise TheoremViolation(
                f"root {x} of f(X, {list(slope)}) has multiplicity {roots.get(x, 0)} "
                f"but its hyperplane meets K in {c} points"
            )
    return SlopeReport(slope, _trim(Hx), fx, divisible, splits, roots, hits)


def all_slopes(n: int, q: int):
    import itertools

    return itertools.product(range(q), repeat=n - 1)


def linear_factor_points(rp: RedeiPolynomial) -> list[tuple[int, ...]]:
    """Affine points a of U whose form X + sum a_i X_i - a_{n-1} divides f."""
    F = rp.H.field
    f = rp.f
    out = []
    for a in rp.frame.affine:
        a = [int(x) for x in a]
        # X + sum a_i X_i - a_{n-1} = X - c with c = a_{n-1} - sum a_i X_i
        c = -MPoly.linear(F, 0, a[:-1], int(F.neg(a[-1])))
        _, rem = divide_by_linear(f, c)
        if rem.is_zero():
            out.append(tuple(a))
    return out


def nonessential_points(rp: RedeiPolynomial) -> PointSet:
    """Points of K (original indices) detected as linear factors of f."""
    frame = rp.frame
    return PointSet(frame.K.space, tuple(frame.index_of_affine(a) for a in linear_factor_points(rp)))


def reduce_by_factors(K: PointSet) -> PointSet:
    """Strip the points found as linear factors until f has none left."""
    while True:
        rp = redei_f(build_frame(K))
        loose = nonessential_points(rp)
        if not len(loose):
            return K
        K = PointSet(K.space, tuple(i for i in K.indices if i not in set(loose.indices)))


def unique_reduction_agrees(K: PointSet) -> bool:
    return reduce_by_factors(K) == minimal_reduce(K, 1)
