"""Linear codes over a prime field F_p.

Codewords are plain numpy integer vectors with entries in [0, p), indexed
by the canonical point order of the ambient projective space.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded, PreconditionError
from .geometry import incidence_matrix
from .gf import prime_power
from .linalg import nullspace_mod_p, rref_mod_p

DEFAULT_BUDGET = 2**26
MAX_WITNESSES = 10**5
# cap on p**b * length for the vectorized inner block
_BLOCK_CELLS = 2**22


@dataclass(eq=False)
class LinearCode:
    p: int
    generator: np.ndarray
    pivots: tuple[int, ...]
    length: int
    ambient: dict | None = None

    @classmethod
    def from_matrix(cls, matrix, p: int, ambient: dict | None = None, length: int | None = None):
        m = np.asarray(matrix, dtype=np.int64)
        if length is None:
            length = m.shape[1]
        if m.size == 0:
            g, piv = np.zeros((0, length), dtype=np.int64), []
        else:
            g, piv = rref_mod_p(m, p)
        g.setflags(write=False)
        return cls(p, g, tuple(piv), length, ambient)

    @property
    def dimension(self) -> int:
        return len(self.pivots)

    def __eq__(self, other):
        return (
            isinstance(other, LinearCode)
            and self.p == other.p
            and self.length == other.length
            and np.array_equal(self.generator, other.generator)
        )

    def __repr__(self):
        return f"LinearCode(p={self.p}, length={self.length}, dimension={self.dimension}, ambient={self.ambient})"


def code_from_incidence(n: int, q: int, k: int) -> LinearCode:
    """The F_p row space of the point / k-space incidence matrix of PG(n, q)."""
    p, h = prime_power(q)
    m = incidence_matrix(n, q, k)
    return LinearCode.from_matrix(m, p, ambient={"n": n, "q": q, "k": k, "dual": False})


def dual(code: LinearCode) -> LinearCode:
    ns = nullspace_mod_p(code.generator, code.p, code.length) if code.dimension else np.eye(code.length, dtype=np.int64)
    amb = None
    if code.ambient is not None:
        amb = dict(code.ambient, dual=not code.ambient["dual"])
    return LinearCode.from_matrix(ns, code.p, ambient=amb, length=code.length)


def reduce(code: LinearCode, v) -> np.ndarray:
    """Remainder of v after elimination against the RREF generator."""
    v = np.asarray(v, dtype=np.int64) % code.p
    if v.shape != (code.length,):
        raise PreconditionError(f"vector of length {v.shape} vs code length {code.length}")
    v = v.copy()
    for row, pc in zip(code.generator, code.pivots):
        c = v[pc]
        if c:
            v = (v - c * row) % code.p
    return v


def contains(code: LinearCode, v) -> bool:
    return not reduce(code, v).any()


def scalar_product(a, b, p: int) -> int:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape != b.shape:
        raise PreconditionError("scalar product of vectors with different lengths")
    return int((a * b).sum() % p)


def weight(v) -> int:
    return int(np.count_nonzero(v))


def support(v) -> np.ndarray:
    return np.flatnonzero(v)


def canonical_scaling(v, p: int) -> np.ndarray:
    """Scale v so its first nonzero entry is 1."""
    v = np.asarray(v, dtype=np.int64)
    nz = np.flatnonzero(v)
    if len(nz) == 0:
        return v.copy()
    return (v * pow(int(v[nz[0]]), p - 2, p)) % p


# --- weight enumeration ------------------------------------------------------


@dataclass
class WeightReport:
    distribution: dict[int, int]
    exact: bool
    min_weight: int | None
    witnesses: list[np.ndarray] = field(default_factory=list)
    witnesses_truncated: bool = False
    p: int = 2

    @property
    def distinct_codewords(self) -> int:
        return len({tuple(canonical_scaling(w, self.p)) for w in self.witnesses})

    @property
    def distinct_supports(self) -> int:
        return len({tuple(np.flatnonzero(w)) for w in self.witnesses})

    def to_json(self) -> dict:
        return {
            "exact": self.exact,
            "distribution": {str(w): c for w, c in sorted(self.distribution.items())},
            "min_weight": self.min_weight,
            "min_weight_codewords": len(self.witnesses),
            "min_weight_codewords_projective": self.distinct_codewords,
            "min_weight_supports": self.distinct_supports,
            "witnesses_truncated": self.witnesses_truncated,
            "witnesses": [sparse(w) for w in self.witnesses[:1000]],
        }


def sparse(v) -> dict[str, int]:
    return {str(int(i)): int(v[i]) for i in np.flatnonzero(v)}


def _block_words(rows: np.ndarray, p: int) -> np.ndarray:
    """All F_p combinations of ``rows`` (p**len(rows) words)."""
    words = np.zeros((1, rows.shape[1]), dtype=np.int64)
    for r in rows:
        words = np.concatenate([(words + lam * r) % p for lam in range(p)])
    return words


def _gray_digits(i: int, p: int, a: int) -> list[int]:
    d = [(i // p**j) % p for j in range(a + 1)]
    return [(d[j] - d[j + 1]) % p for j in range(a)]


def _valuation(i: int, p: int) -> int:
    v = 0
    while i % p == 0:
        i //= p
        v += 1
    return v


class _Scan:
    def __init__(self, length: int, max_witnesses: int):
        self.counts = np.zeros(length + 1, dtype=np.int64)
        self.min_weight: int | None = None
        self.witnesses: list[np.ndarray] = []
        self.truncated = False
        self.max_witnesses = max_witnesses

    def absorb(self, words: np.ndarray, wts: np.ndarray) -> None:
        self.counts += np.bincount(wts, minlength=len(self.counts))
        nz = wts[wts > 0]
        if len(nz) == 0:
            return
        m = int(nz.min())
        if self.min_weight is None or m < self.min_weight:
            self.min_weight = m
            self.witnesses = []
            self.truncated = False
        if m == self.min_weight:
            hits = np.flatnonzero(wts == m)
            room = self.max_witnesses - len(self.witnesses)
            if len(hits) > room:
                self.truncated = True
                hits = hits[:room]
            self.witnesses.extend(words[i].copy() for i in hits)

    def merge(self, other: _Scan) -> None:
        self.counts += other.counts
        if other.min_weight is None:
            return
        if self.min_weight is None or other.min_weight < self.min_weight:
            self.min_weight = other.min_weight
            self.witnesses = []
            self.truncated = False
        if other.min_weight == self.min_weight:
            room = self.max_witnesses - len(self.witnesses)
            if len(other.witnesses) > room or other.truncated:
                self.truncated = True
            self.witnesses.extend(other.witnesses[:room])


def _scan_range(top: np.ndarray, block: np.ndarray, p: int, start: int, stop: int, max_witnesses: int) -> _Scan:
    a = len(top)
    scan = _Scan(block.shape[1], max_witnesses)
    digits = _gray_digits(start, p, a)
    acc = np.zeros(block.shape[1], dtype=np.int64)
    for j, d in enumerate(digits):
        if d:
            acc = (acc + d * top[j]) % p
    for i in range(start, stop):
        if i > start:
            acc = (acc + top[_valuation(i, p)]) % p
        words = (block + acc) % p
        scan.absorb(words, np.count_nonzero(words, axis=1))
    return scan


def enumerate_weights(
    code: LinearCode,
    budget: int = DEFAULT_BUDGET,
    exact: bool = True,
    max_witnesses: int = MAX_WITNESSES,
    workers: int = 1,
    samples: int = 200,
    seed: int = 0,
) -> WeightReport:
    """Weight distribution and minimum-weight codewords.

    Exact mode walks the message space in p-ary Gray-code order: the last
    ``b`` generator rows are expanded into a block of all their combinations
    and the remaining rows drive a one-row-per-step accumulator.  The outer
    range splits into disjoint prefix ranges for ``workers`` threads.

    With ``exact=False`` and an over-budget code, random information sets
    are sampled instead and the report is flagged non-exact.
    """
    p, k, length = code.p, code.dimension, code.length
    if k == 0:
        return WeightReport({0: 1}, True, None, p=p)
    if p**k > budget:
        if exact:
            raise BudgetExceeded(f"{p}^{k} codewords exceed budget {budget}")
        return _sample_min_weight(code, samples, seed, max_witnesses)
    g = code.generator
    b = k
    while b > 0 and p**b * length > _BLOCK_CELLS:
        b -= 1
    block = _block_words(g[k - b :], p)
    top = g[: k - b]
    total = p ** (k - b)
    workers = max(1, min(workers, total))
    bounds = [total * w // workers for w in range(workers + 1)]
    if workers == 1:
        scans = [_scan_range(top, block, p, 0, total, max_witnesses)]
    else:
        with ThreadPoolExecutor(workers) as ex:
            futs = [
                ex.submit(_scan_range, top, block, p, bounds[w], bounds[w + 1], max_witnesses)
                for w in range(workers)
            ]
            scans = [f.result() for f in futs]
    scan = scans[0]
    for s in scans[1:]:
        scan.merge(s)
    dist = {int(w): int(c) for w, c in enumerate(scan.counts) if c}
    return WeightReport(dist, True, scan.min_weight, scan.witnesses, scan.truncated, p=p)


def iter_codeword_blocks(code: LinearCode, budget: int = DEFAULT_BUDGET):
    """Yield arrays of codewords that together list every codeword once."""
    p, k = code.p, code.dimension
    if p**k > budget:
        raise BudgetExceeded(f"{p}^{k} codewords exceed budget {budget}")
    if k == 0:
        yield np.zeros((1, code.length), dtype=np.int64)
        return
    g = code.generator
    b = k
    while b > 0 and p**b * code.length > _BLOCK_CELLS:
        b -= 1
    block = _block_words(g[k - b :], p)
    top = g[: k - b]
    acc = np.zeros(code.length, dtype=np.int64)
    for i in range(p ** (k - b)):
        if i:
            acc = (acc + top[_valuation(i, p)]) % p
        yield (block + acc) % p


def codewords_in_weight_range(code: LinearCode, lo: int, hi: int, limit: int = 1000, budget: int = DEFAULT_BUDGET):
    """Codewords with lo < weight < hi (at most ``limit`` of them)."""
    out = []
    for words in iter_codeword_blocks(code, budget):
        wts = np.count_nonzero(words, axis=1)
        for i in np.flatnonzero((wts > lo) & (wts < hi)):
            out.append(words[i].copy())
            if len(out) >= limit:
                return out
    return out


def _sample_min_weight(code: LinearCode, samples: int, seed: int, max_witnesses: int) -> WeightReport:
    """Upper bound on the minimum weight from random information sets."""
    rng = np.random.default_rng(seed)
    p, length = code.p, code.length
    best: int | None = None
    found: dict[tuple, np.ndarray] = {}
    for _ in range(samples):
        perm = rng.permutation(length)
        g, _ = rref_mod_p(code.generator[:, perm], p)
        inv = np.argsort(perm)
        cands = [g]
        if len(g) > 1:
            for i in range(len(g)):
                for lam in range(1, p):
                    cands.append((g[i] + lam * g[i + 1 :]) % p)
        words = np.concatenate(cands)[:, inv]
        wts = np.count_nonzero(words, axis=1)
        m = int(wts[wts > 0].min())
        if best is None or m < best:
            best = m
            found = {}
        if m == best:
            for i in np.flatnonzero(wts == m):
                w = canonical_scaling(words[i], p)
                if len(found) < max_witnesses:
                    found.setdefault(tuple(w), w)
    return WeightReport({}, False, best, list(found.values()), p=p)


# --- MacWilliams transform ---------------------------------------------------


def krawtchouk(j: int, i: int, length: int, p: int) -> int:
    return sum(
        (-1) ** s * (p - 1) ** (j - s) * math.comb(i, s) * math.comb(length - i, j - s)
        for s in range(0, j + 1)
    )


def macwilliams(distribution: dict[int, int], length: int, p: int) -> dict[int, int]:
    """Weight distribution of the dual code, in exact integer arithmetic."""
    size = sum(distribution.values())
    out = {}
    for j in range(length + 1):
        total = sum(c * krawtchouk(j, i, length, p) for i, c in distribution.items())
        b = Fraction(total, size)
        if b.denominator != 1 or b < 0:
            raise ArithmeticError("MacWilliams transform produced a non-integer count")
        if b:
            out[j] = int(b)
    return out


def minimum_distance(code: LinearCode, budget: int = DEFAULT_BUDGET) -> tuple[int | None, str]:
    """Exact minimum weight by the cheaper of direct or dual-side enumeration.

    Returns (weight, method) with method "direct" or "macwilliams"; weight
    is None when both sides exceed the budget.
    """
    p, k, length = code.p, code.dimension, code.length
    if p**k <= budget and p**k <= p ** (length - k):
        return enumerate_weights(code, budget, max_witnesses=1).min_weight, "direct"
    if p ** (length - k) <= budget:
        other = enumerate_weights(dual(code), budget, max_witnesses=1)
        dist = macwilliams(other.distribution, length, p)
        nz = [w for w in dist if w > 0]
        return (min(nz) if nz else None), "macwilliams"
    if p**k <= budget:
        return enumerate_weights(code, budget, max_witnesses=1).min_weight, "direct"
    return None, "over-budget"

