"""Bounds on minimum weights of C_k(n, q)^perp and weight-gap reports for C_k(n, q)."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .codes import (
    DEFAULT_BUDGET,
    codewords_in_weight_range,
    code_from_incidence,
    dual,
    enumerate_weights,
    minimum_distance,
    sparse,
)
from .constructions import trace_blocking_set, trace_codeword
from .errors import BudgetExceeded, PreconditionError
from .geometry import gaussian_coefficient, theta
from .gf import prime_power

SCHEMA = "pgcode.bounds.v1"
# largest incidence structure built for an exact value
MAX_EXACT_POINTS = 400
MAX_EXACT_SPACES = 20_000


@dataclass
class Bound:
    value: int | None
    tag: str

    def to_json(self) -> dict:
        return {"value": self.value, "tag": self.tag}


@dataclass
class BoundReport:
    p: int
    h: int
    n: int
    k: int
    row: str
    lower: Bound
    upper: Bound
    exact: int | None = None
    exact_method: str | None = None
    construction_weight: int | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        lo, up = self.lower.value, self.upper.value
        if lo is not None and up is not None and lo > up:
            return "falsifying"
        if self.exact is None:
            return "not-computed"
        if lo is not None and self.exact < lo:
            return "falsifying"
        if up is not None and self.exact > up:
            return "falsifying"
        return "consistent"

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "parameters": {"p": self.p, "h": self.h, "n": self.n, "k": self.k},
            "row": self.row,
            "lower": self.lower.to_json(),
            "upper": self.upper.to_json(),
            "exact": None if self.exact is None else {"value": self.exact, "method": self.exact_method},
            "construction_weight": self.construction_weight,
            "verdict": self.verdict,
            "notes": self.notes,
        }


def _ceil(x: Fraction) -> int:
    return math.ceil(x)


def table_bounds(p: int, h: int, n: int, k: int) -> tuple[str, Bound, Bound, list[str]]:
    """Row label with the two bounds on d(C_k(n, p^h)^perp)."""
    if not 1 <= k <= n - 1:
        raise PreconditionError(f"need 1 <= k <= n-1, got n={n}, k={k}")
    q = p**h
    m = n - k
    t = theta(m, q)
    trace_upper = 2 * q**m + theta(m - 1, q) - (q**m - 1) // (p - 1)
    notes: list[str] = []
    if h == 1:
        v = 2 * p**m
        return "tbl:1:row2", Bound(v, "thm:priem"), Bound(v, "thm:priem"), notes
    if p == 2:
        upper = Bound(q ** (m - 1) * (q + 2), "cor:ba")
        if k == n - 1:
            notes.append("(k,n) = (n-1,n) is excluded from the p = 2 row; see hyperplane-code literature")
            return "tbl:1:row1-excluded", Bound(t + 1, "rem:trivial"), upper, notes
        return "tbl:1:row1", Bound(t + 2, "tbl:1:row1"), upper, notes
    if p < 7:
        return "tbl:1:row3", Bound(_ceil(Fraction(4 * t + 2, 3)), "thm:th16"), Bound(trace_upper, "cor:trace"), notes
    if p == 7:
        return "tbl:1:row4", Bound(_ceil(Fraction(12 * t + 2, 7)), "thm:th8"), Bound(trace_upper, "cor:trace"), notes
    return "tbl:1:row5", Bound(_ceil(Fraction(12 * t + 6, 7)), "thm:th8"), Bound(trace_upper, "cor:trace"), notes


def _desk_scale(n: int, q: int, k: int) -> bool:
    return theta(n, q) <= MAX_EXACT_POINTS and gaussian_coefficient(n + 1, k + 1, q) <= MAX_EXACT_SPACES


def table1_row(p: int, h: int, n: int, k: int, budget: int = DEFAULT_BUDGET, exact: bool = True) -> BoundReport:
    row, lower, upper, notes = table_bounds(p, h, n, k)
    rep = BoundReport(p, h, n, k, row, lower, upper, notes=notes)
    q = p**h
    if exact and _desk_scale(n, q, k):
        d, method = minimum_distance(dual(code_from_incidence(n, q, k)), budget)
        rep.exact, rep.exact_method = d, method
    if h > 1:
        rep.construction_weight = _construction_weight(p, h, n, k)
        if rep.construction_weight is not None and upper.value is not None and rep.construction_weight > upper.value:
            rep.notes.append(
                f"the trace construction here has weight {rep.construction_weight} > {upper.value}; "
                "its trace-zero part is not scattered, so the stated upper bound is not realized by it"
            )
    return rep


def _construction_weight(p: int, h: int, n: int, k: int) -> int | None:
    """Weight of the trace-difference word, certified when PG(n, q) is desk scale."""
    q, m = p**h, n - k
    if theta(m + 1, q) > 2000:
        return None
    if _desk_scale(n, q, k):
        return trace_codeword(p, h, n, k).weight
    tb = trace_blocking_set(p, h, m)
    return 2 * q**m + theta(m - 1, q) - tb.x


# --- weight gaps in C_k(n, q) ------------------------------------------------


@dataclass
class GapInterval:
    label: str
    lo: Fraction
    hi: Fraction
    weights: list[int] | None
    witnesses: list[dict]
    claim: str = ""
    applies: bool = False

    @property
    def integer_points(self) -> int:
        return max(0, _ceil(self.hi) - math.floor(self.lo) - 1)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "open_interval": [str(self.lo), str(self.hi)],
            "integers_inside": self.integer_points,
            "claim": self.claim,
            "claim_applies": self.applies,
            "weights_found": self.weights,
            "witnesses": self.witnesses,
        }


@dataclass
class GapReport:
    n: int
    q: int
    k: int
    verdict: str
    intervals: list[GapInterval]

    def interval(self, label: str) -> GapInterval:
        return next(iv for iv in self.intervals if iv.label == label)

    def to_json(self) -> dict:
        return {
            "parameters": {"n": self.n, "q": self.q, "k": self.k},
            "verdict": self.verdict,
            "intervals": [iv.to_json() for iv in self.intervals],
        }


def gap_verdict(n: int, q: int, k: int, budget: int = DEFAULT_BUDGET, max_witnesses: int = 100) -> GapReport:
    """Weights of C_k(n, q) inside ]theta_k, 2q^k[ and ]theta_k, (12 theta_k + 6)/7[."""
    if not 1 <= k <= n - 1:
        raise PreconditionError(f"need 1 <= k <= n-1, got n={n}, k={k}")
    p, h = prime_power(q)
    tk = theta(k, q)
    upper_half = 2 * k >= n
    intervals = [
        GapInterval("]theta_k, 2q^k[", Fraction(tk), Fraction(2 * q**k), None, [],
                    "empty for q prime and k >= n/2", upper_half and h == 1),
        GapInterval("]theta_k, (12theta_k+6)/7[", Fraction(tk), Fraction(12 * tk + 6, 7), None, [],
                    "empty for q = p^2 with p > 11 and k >= n/2", upper_half and h == 2 and p > 11),
    ]
    if not _desk_scale(n, q, k):
        return GapReport(n, q, k, "not-computed", intervals)
    code = code_from_incidence(n, q, k)
    try:
        dist = enumerate_weights(code, budget, max_witnesses=1).distribution
    except BudgetExceeded:
        return GapReport(n, q, k, "not-computed", intervals)
    for iv in intervals:
        iv.weights = sorted(w for w in dist if iv.lo < w < iv.hi)
        if iv.weights:
            words = codewords_in_weight_range(code, math.floor(iv.lo), _ceil(iv.hi), max_witnesses, budget)
            iv.witnesses = [sparse(w) for w in words]
    verdict = "falsifying" if any(iv.applies and iv.weights for iv in intervals) else "consistent"
    return GapReport(n, q, k, verdict, intervals)


# --- size window for small minimal blocking sets -----------------------------


@dataclass
class SizeWindow:
    lower: int
    upper: int | None
    lower_exact: Fraction
    upper_exact: Fraction | None

    def contains(self, size: int) -> bool:
        return size >= self.lower and (self.upper is None or size <= self.upper)

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "lower_exact": str(self.lower_exact),
            "upper_exact": None if self.upper_exact is None else str(self.upper_exact),
        }


def size_cap_expression(e: int, p: int, k: int, q: int) -> Fraction:
    """q^k + 2q^k/p^e as an exact rational, whatever p^e is."""
    return Fraction(q**k) + Fraction(2 * q**k, p**e)


def small_blocking_size_window(e: int, p: int, k: int, q: int) -> SizeWindow:
    """Integer window q^k + q^k/(p^e+1) - 1 <= |B| <= q^k + 2q^k/p^e.

    The upper end needs p^e > 2 and is None otherwise.
    """
    if e < 1:
        raise PreconditionError("e must be at least 1")
    lo = Fraction(q**k) + Fraction(q**k, p**e + 1) - 1
    up = size_cap_expression(e, p, k, q) if p**e > 2 else None
    return SizeWindow(_ceil(lo), None if up is None else math.floor(up), lo, up)


def report_dict(obj) -> dict:
    return obj.to_json() if hasattr(obj, "to_json") else asdict(obj)
