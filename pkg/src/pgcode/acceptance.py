"""The twelve end-to-end acceptance checks, shared by the test suite and ``pgcode verify-all``."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .analysis import gap_verdict, table1_row, size_cap_expression
from .blocking import (
    PointSet,
    intersection_exponent,
    is_baer_subplane,
    is_subspace_set,
    minimal_reduce,
    reduction_outcomes,
    essential_points,
    tau_histogram,
)
from .codes import (
    DEFAULT_BUDGET,
    canonical_scaling,
    code_from_incidence,
    contains,
    dual,
    enumerate_weights,
)
from .constructions import (
    difference_codeword,
    embed_codeword,
    find_projection,
    hyperoval_codeword,
    orthogonal_to_all,
    project_codeword,
    trace_blocking_set,
    trace_codeword,
)
from .geometry import projective_space
from .redei import all_slopes, build_frame, nonessential_points, redei_f, slope_evaluate
from .spread import companion_blocking_set, field_reduce, linear_blocking_set


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    limit: float

    @property
    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        timing = f"{self.seconds:.2f}s of {self.limit:g}s"
        return f"[{status}] criterion {self.number:2d}: {self.title} ({timing}) {self.detail}"

    def to_json(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
            "limit_seconds": self.limit,
        }


def _rows(space, d) -> set[tuple[int, ...]]:
    return {tuple(r) for r in space.incidence(d).astype(np.int64)}


def _differences(space, d: int, p: int, meet_dim: int | None = None) -> set[tuple[int, ...]]:
    """All lam * (1_A - 1_B) for distinct d-spaces A, B (optionally meeting in a meet_dim-space)."""
    subs = space.enumerate_subspaces(d)
    inc = space.incidence(d).astype(np.int64)
    out = set()
    for i in range(len(subs)):
        for j in range(len(subs)):
            if i == j:
                continue
            if meet_dim is not None and space.meet(subs[i], subs[j]).dim != meet_dim:
                continue
            v = inc[i] - inc[j]
            for lam in range(1, p):
                out.add(tuple((lam * v) % p))
    return out


def c1_min_weight(budget: int) -> tuple[bool, str]:
    space = projective_space(2, 3)
    rep = enumerate_weights(code_from_incidence(2, 3, 1), budget)
    lines = _rows(space, 1)
    multiples = all(tuple(canonical_scaling(w, 3)) in lines for w in rep.witnesses)
    ok = rep.min_weight == 4 and rep.distribution.get(4) == 26 and len(rep.witnesses) == 26 and multiples
    return ok, f"min weight {rep.min_weight}, {rep.distribution.get(4)} words of weight 4, all line multiples: {multiples}"


def c2_gap(budget: int) -> tuple[bool, str]:
    rep = gap_verdict(2, 3, 1, budget)
    iv = rep.interval("]theta_k, 2q^k[")
    return iv.weights == [], f"weights found in ]4, 6[: {iv.weights}"


def c3_dual_c123(budget: int) -> tuple[bool, str]:
    space = projective_space(2, 3)
    rep = enumerate_weights(dual(code_from_incidence(2, 3, 1)), budget)
    diffs = _differences(space, 1, 3)
    found = {tuple(w) for w in rep.witnesses}
    ok = rep.min_weight == 6 and found == diffs and not rep.witnesses_truncated
    return ok, f"min weight {rep.min_weight}, {len(found)} words of weight 6 vs {len(diffs)} line differences"


def c4_c232(budget: int) -> tuple[bool, str]:
    space = projective_space(3, 2)
    code = code_from_incidence(3, 2, 2)
    rep = enumerate_weights(code, budget)
    drep = enumerate_weights(dual(code), budget)
    diffs = _differences(space, 1, 2, meet_dim=0)
    found = {tuple(w) for w in drep.witnesses}
    ok = rep.min_weight == 7 and drep.min_weight == 4 and found == diffs
    return ok, (
        f"d(C) = {rep.min_weight}, d(C^perp) = {drep.min_weight}, "
        f"{len(found)} weight-4 words vs {len(diffs)} sums of meeting lines"
    )


def c5_dual_c124(budget: int) -> tuple[bool, str]:
    rep = enumerate_weights(dual(code_from_incidence(2, 4, 1)), budget, max_witnesses=1)
    construction = trace_codeword(2, 2, 2, 1).weight
    cap = 4 ** (2 - 2) * (4 + 2)
    ok = rep.min_weight == 6 == cap == construction and rep.exact
    return ok, f"d = {rep.min_weight}, cap q^(n-2)(q+2) = {cap}, trace construction weight {construction}"


def c6_planes_pg52(budget: int) -> tuple[bool, str]:
    spread = field_reduce(2, 2, 2)
    code = code_from_incidence(2, 4, 1)
    sizes, shapes, in_code = set(), {"line": 0, "baer": 0, "other": 0}, 0
    for U in spread.big.enumerate_subspaces(2):
        w = linear_blocking_set(U, spread, 1)
        sizes.add(len(w.B))
        sub = is_subspace_set(w.B)
        if sub is not None and sub.dim == 1:
            shapes["line"] += 1
        elif is_baer_subplane(w.B):
            shapes["baer"] += 1
            in_code += contains(code, w.B.vector())
        else:
            shapes["other"] += 1
    ok = sizes <= {5, 7} and all(s % 2 == 1 for s in sizes) and shapes["other"] == 0 and in_code == 0
    return ok, f"sizes {sorted(sizes)}, shapes {shapes}, Baer vectors inside C_1(2,4): {in_code}"


def c7_companions(budget: int) -> tuple[bool, str]:
    spread = field_reduce(2, 2, 2)
    done, bad = 0, 0
    for U in spread.big.enumerate_subspaces(2):
        w = linear_blocking_set(U, spread, 1)
        sub = is_subspace_set(w.B)
        if sub is not None and sub.dim == 1:
            continue
        c = companion_blocking_set(w, spread)
        inter = len(set(w.B.indices) & set(c.B.indices))
        bad += inter % 2 != 0
        done += 1
    return done == 1080 and bad == 0, f"{done} non-trivial witnesses, {bad} with odd intersection"


def c8_unique_reduction(budget: int) -> tuple[bool, str]:
    space = projective_space(2, 5)
    line = space.enumerate_subspaces(1)[0]
    lpts = space.points_of(line).tolist()
    off = [i for i in range(space.num_points) if i not in lpts]
    S = PointSet(space, tuple(lpts + off[:2]))
    outcomes = reduction_outcomes(S, 1)
    default = minimal_reduce(S, 1)
    ok = outcomes == {tuple(lpts)} and default.indices == tuple(lpts)
    return ok, f"{len(outcomes)} distinct outcome(s) over all deletion orders"


def random_small_blocking_sets(n: int, q: int, count: int, rng: np.random.Generator) -> list[PointSet]:
    """Blocking sets of size <= 2q-1: lines plus random points, and projective triangles in planes."""
    space = projective_space(n, q)
    lines = space.enumerate_subspaces(1)
    out = []
    tri = projective_triangle(q) if n == 2 and q % 2 == 1 else None
    while len(out) < count:
        if tri is not None and len(out) % 5 == 4:
            base = list(tri.indices)
        else:
            base = space.points_of(lines[rng.integers(len(lines))]).tolist()
        room = 2 * q - 1 - len(base)
        rest = [i for i in range(space.num_points) if i not in set(base)]
        extra = rng.choice(rest, size=int(rng.integers(0, room + 1)), replace=False).tolist() if room > 0 else []
        out.append(PointSet(space, tuple(base + extra)))
    return out


def projective_triangle(q: int) -> PointSet:
    """(0,1,-s), (-s,0,1), (1,-s,0) with s zero or a nonzero square; 3(q+1)/2 points."""
    space = projective_space(2, q)
    F = space.field
    squares = sorted({int(F.mul(x, x)) for x in range(q)})
    rows = []
    for s in squares:
        m = int(F.neg(s))
        rows += [(0, 1, m), (m, 0, 1), (1, m, 0)]
    return PointSet(space, tuple(space.index_of_vectors(np.array(rows))))


def redei_instance_ok(K: PointSet) -> tuple[bool, int]:
    rp = redei_f(build_frame(K))
    geo = set(K.indices) - set(essential_points(K, 1).indices)
    ok = set(nonessential_points(rp).indices) == geo and rp.degree_bounds_hold()
    slopes = 0
    for m in all_slopes(K.space.n, K.space.q):
        slope_evaluate(rp, m)
        slopes += 1
    return ok, slopes


def c9_redei(budget: int, seed: int = 2024) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    sets = random_small_blocking_sets(2, 7, 25, rng) + random_small_blocking_sets(3, 3, 25, rng)
    good, slopes = 0, 0
    for K in sets:
        ok, s = redei_instance_ok(K)
        good += ok
        slopes += s
    return good == len(sets), f"{good}/{len(sets)} instances agree, {slopes} slopes checked"


def c10_tau(budget: int) -> tuple[bool, str]:
    s33 = projective_space(3, 3)
    line = PointSet(s33, tuple(s33.points_of(s33.enumerate_subspaces(1)[0])))
    t1 = tau_histogram(line, 1, 3)
    ok1 = t1.counts == {1: 36, 4: 4} and t1.X == 4 and all(t1.identities.values())
    baer = trace_blocking_set(2, 2, 1).points
    e = intersection_exponent(baer, 1)
    t2 = tau_histogram(baer, 1, 2**e)
    ok2 = is_baer_subplane(baer) and all(t2.identities.values())
    cap = size_cap_expression(e, 2, 1, 4)
    ok3 = len(baer) <= cap
    return ok1 and ok2 and ok3, (
        f"line: tau {t1.counts}, X = {t1.X}; Baer: tau {t2.counts}, e = {e}; {len(baer)} <= {cap}"
    )


def c11_witnesses(budget: int) -> tuple[bool, str]:
    witnesses = []
    for q in (2, 3):
        big, plane = projective_space(3, q), projective_space(2, q)
        lines = big.enumerate_subspaces(1)
        pairs = [(a, b) for a in lines[:6] for b in lines[:12] if a != b][:10]
        target = dual(code_from_incidence(2, q, 1))
        for a, b in pairs:
            d = difference_codeword(big, a, b, 2)
            R, H = find_projection(d)
            pr = project_codeword(d, R, H)
            if not contains(target, pr.codeword):
                return False, f"projection of a line difference in PG(3,{q}) left the dual code"
            witnesses += [d, pr]
        pls = plane.enumerate_subspaces(1)
        small = difference_codeword(plane, pls[0], pls[1], 1)
        pi = big.enumerate_subspaces(2)[-1]
        emb = embed_codeword(small.codeword, pi, big, 2)
        if not contains(dual(code_from_incidence(3, q, 2)), emb.codeword):
            return False, f"embedded word left C_2(3,{q})^perp"
        witnesses += [small, emb]
    witnesses.append(hyperoval_codeword(4))
    witnesses.append(trace_codeword(2, 2, 2, 1))
    witnesses.append(trace_codeword(3, 2, 2, 1))
    ho = witnesses[-3]
    witnesses.append(embed_codeword(ho.codeword, projective_space(3, 4).enumerate_subspaces(2)[0], projective_space(3, 4), 2))
    rescan = [w for w in witnesses if w.verified and not len(orthogonal_to_all(w.space, w.k, w.codeword))]
    return len(rescan) == len(witnesses), f"{len(rescan)}/{len(witnesses)} witnesses pass the orthogonality rescan"


def c12_table1(budget: int) -> tuple[bool, str]:
    rows = [(3, 1, 2, 1), (2, 2, 2, 1), (2, 1, 3, 1), (2, 1, 3, 2), (3, 1, 3, 2)]
    parts, ok = [], True
    for r in rows:
        rep = table1_row(*r, budget=budget)
        ok &= rep.verdict == "consistent"
        parts.append(f"{r}: {rep.lower.value}<={rep.exact}<={rep.upper.value} {rep.verdict}")
    return ok, "; ".join(parts)


CRITERIA: list[tuple[int, str, float, Callable[[int], tuple[bool, str]]]] = [
    (1, "d(C_1(2,3)) = 4 with 26 line multiples", 1, c1_min_weight),
    (2, "no C_1(2,3) weight in ]4,6[", 1, c2_gap),
    (3, "d(C_1(2,3)^perp) = 6, all line differences", 1, c3_dual_c123),
    (4, "d(C_2(3,2)) = 7, d(C_2(3,2)^perp) = 4 from meeting lines", 5, c4_c232),
    (5, "d(C_1(2,4)^perp) = 6 = q+2 = trace construction", 10, c5_dual_c124),
    (6, "planes of PG(5,2) give lines or Baer subplanes outside C_1(2,4)", 30, c6_planes_pg52),
    (7, "companion sets meet in 2 mod p points", 60, c7_companions),
    (8, "line plus two points reduces to the line in every order", 1, c8_unique_reduction),
    (9, "Redei factors match non-essential points; slopes split", 60, c9_redei),
    (10, "tau identities and the size cap", 5, c10_tau),
    (11, "dual witnesses, projection and embedding stay in the dual", 30, c11_witnesses),
    (12, "Table 1 rows agree with exact minimum weights", 60, c12_table1),
]


def run_criterion(number: int, budget: int = DEFAULT_BUDGET) -> CriterionResult:
    num, title, limit, fn = CRITERIA[number - 1]
    t0 = time.perf_counter()
    try:
        ok, detail = fn(budget)
    except Exception as exc:  # a crash is a failed criterion, reported as such
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - t0
    if ok and elapsed > limit:
        ok, detail = False, f"over the time limit; {detail}"
    return CriterionResult(num, title, ok, detail, elapsed, limit)


def run_all(budget: int = DEFAULT_BUDGET, echo: Callable[[str], None] | None = None) -> list[CriterionResult]:
    out = []
    for num, *_ in CRITERIA:
        res = run_criterion(num, budget)
        if echo is not None:
            echo(res.line)
        out.append(res)
    return out
