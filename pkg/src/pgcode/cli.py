"""Command-line interface: ``pgcode <subcommand> [flags]``.

Every subcommand writes one JSON report (to --out or standard output) and a
short human summary to standard error.  Exit codes: 0 success, 2
precondition error, 3 an observation contradicting a proven statement, 64
usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import datetime as _dt
import json
import os
import re
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import PreconditionError, TheoremViolation
from .gf import is_prime

EXIT_OK, EXIT_PRECONDITION, EXIT_THEOREM, EXIT_USAGE = 0, 2, 3, 64
COMMANDS = ("space", "code", "dual", "blocking", "spread", "redei", "construct", "table1", "gap", "verify-all")
CONSTRUCTIONS = ("trace", "hyperoval", "difference", "projection", "embedding")


class UsageError(Exception):
    pass


class ReportedViolation(TheoremViolation):
    """A theorem-contradicting outcome that still has a report to write."""

    def __init__(self, message: str, results: dict):
        super().__init__(message)
        self.results = results


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclasses.dataclass
class RunConfig:
    subcommand: str
    p: int | None = None
    h: int = 1
    n: int | None = None
    k: int | None = None
    dual: bool = False
    min_weight: bool = False
    weight_dist: bool = False
    budget: int = 2**26
    threads: int = 1
    seed: int = 0
    input: str | None = None
    out: str | None = None
    construction: str | None = None

    @property
    def q(self) -> int:
        return self.p**self.h

    def to_json(self) -> dict:
        d = dataclasses.asdict(self)
        d.pop("out")
        return d


def parse_budget(text: str) -> int:
    m = re.fullmatch(r"\s*(\d+)\s*(?:(?:\^|\*\*)\s*(\d+))?\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"cannot read budget {text!r}; use e.g. 2^26 or 67108864")
    base, exp = int(m.group(1)), m.group(2)
    return base ** int(exp) if exp is not None else base


def default_threads() -> int:
    env = os.environ.get("PGCODE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"PGCODE_THREADS={env!r} is not an integer")
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pgcode", description="Codes and blocking sets of finite projective spaces.")
    parser.add_argument("--version", action="version", version=f"pgcode {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        if name == "construct":
            sp.add_argument("construction", nargs="?", default="trace", choices=CONSTRUCTIONS)
        sp.add_argument("--p", type=int)
        sp.add_argument("--h", type=int, default=1)
        sp.add_argument("--n", type=int)
        sp.add_argument("--k", type=int)
        sp.add_argument("--dual", action="store_true")
        sp.add_argument("--min-weight", action="store_true")
        sp.add_argument("--weight-dist", action="store_true")
        sp.add_argument("--budget", type=parse_budget, default=2**26)
        sp.add_argument("--threads", type=int)
        sp.add_argument("--out")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--input", help="JSON file (a point set, or a subspace basis for spread)")
    return parser


def _config(ns: argparse.Namespace) -> RunConfig:
    threads = ns.threads if ns.threads is not None else default_threads()
    if threads < 1:
        raise UsageError("--threads must be positive")
    if ns.p is not None and not is_prime(ns.p):
        raise PreconditionError(f"--p {ns.p} is not a prime")
    if ns.h < 1:
        raise PreconditionError("--h must be at least 1")
    return RunConfig(
        subcommand=ns.subcommand,
        p=ns.p,
        h=ns.h,
        n=ns.n,
        k=ns.k,
        dual=ns.dual or ns.subcommand == "dual",
        min_weight=ns.min_weight,
        weight_dist=ns.weight_dist,
        budget=ns.budget,
        threads=threads,
        seed=ns.seed,
        input=ns.input,
        out=ns.out,
        construction=getattr(ns, "construction", None),
    )


def _need(cfg: RunConfig, *names: str) -> None:
    missing = [f"--{n}" for n in names if getattr(cfg, n) is None]
    if missing:
        raise UsageError(f"{cfg.subcommand} needs {' '.join(missing)}")


def _read_json(path: str):
    return json.loads(Path(path).read_text())


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


# --- subcommands -------------------------------------------------------------


def cmd_space(cfg: RunConfig, log) -> dict:
    from .geometry import gaussian_coefficient, projective_space, theta

    _need(cfg, "p", "n")
    space = projective_space(cfg.n, cfg.q)
    out = {
        "n": cfg.n,
        "q": cfg.q,
        "field": space.field.to_json(),
        "points": theta(cfg.n, cfg.q),
        "subspaces": {str(d): gaussian_coefficient(cfg.n + 1, d + 1, cfg.q) for d in range(cfg.n + 1)},
    }
    if cfg.k is not None:
        subs = space.enumerate_subspaces(cfg.k)
        out["k"] = cfg.k
        if len(subs) <= 10_000:
            out["k_subspaces"] = [s.to_json() for s in subs]
    if space.num_points <= 10_000:
        out["point_list"] = space.points.tolist()
    log(f"PG({cfg.n},{cfg.q}): {out['points']} points")
    return out


def cmd_code(cfg: RunConfig, log) -> dict:
    from .codes import enumerate_weights, minimum_distance, code_from_incidence, dual, BudgetExceeded

    _need(cfg, "p", "n", "k")
    code = code_from_incidence(cfg.n, cfg.q, cfg.k)
    if cfg.dual:
        code = dual(code)
    out = {"ambient": code.ambient, "length": code.length, "dimension": code.dimension, "p": code.p}
    if cfg.weight_dist:
        try:
            rep = enumerate_weights(code, cfg.budget, workers=cfg.threads)
        except BudgetExceeded as exc:
            raise PreconditionError(str(exc))
        out["weights"] = rep.to_json()
    if cfg.min_weight:
        d, method = minimum_distance(code, cfg.budget)
        if d is None:
            rep = enumerate_weights(code, cfg.budget, exact=False, seed=cfg.seed)
            out["min_weight"] = {"value": rep.min_weight, "exact": False, "method": "information-set sampling",
                                 "note": "upper bound only"}
        else:
            out["min_weight"] = {"value": d, "exact": True, "method": method}
        log(f"minimum weight {out['min_weight']['value']} ({out['min_weight']['method']})")
    log(f"code of length {code.length} and dimension {code.dimension} over F_{code.p}")
    return out


def _point_set(cfg: RunConfig):
    from .blocking import PointSet

    if cfg.input is None:
        raise UsageError(f"{cfg.subcommand} needs --input with a JSON point set")
    return PointSet.from_json(_read_json(cfg.input))


def cmd_blocking(cfg: RunConfig, log) -> dict:
    from .blocking import (
        essential_points,
        in_uniqueness_regime,
        intersection_exponent,
        is_k_blocking_set,
        minimal_reduce,
        tau_histogram,
        verify_bose_burton,
    )
    import warnings

    _need(cfg, "k")
    S = _point_set(cfg)
    out = {"set": S.to_json(), "k": cfg.k, "size": len(S), "blocking": is_k_blocking_set(S, cfg.k)}
    if out["blocking"]:
        ess = essential_points(S, cfg.k)
        out["essential"] = list(ess.indices)
        out["minimal"] = len(ess) == len(S)
        out["bose_burton"] = verify_bose_burton(S, cfg.k)
        out["uniqueness_regime"] = in_uniqueness_regime(S, cfg.k)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            red = minimal_reduce(S, cfg.k)
        out["reduced"] = list(red.indices)
        out["reduction_warnings"] = [str(w.message) for w in caught]
        e = intersection_exponent(S, cfg.k)
        out["intersection_exponent"] = e
        if e:
            t = tau_histogram(S, cfg.k, S.space.p**e)
            out["tau"] = t.to_json()
    log(f"|S| = {len(S)}, blocking: {out['blocking']}")
    return out


def cmd_spread(cfg: RunConfig, log) -> dict:
    from .spread import companion_blocking_set, field_reduce, is_trivial_witness, linear_blocking_set

    _need(cfg, "p", "n")
    if cfg.h < 2:
        raise PreconditionError("field reduction needs h >= 2")
    spread = field_reduce(cfg.n, cfg.p, cfg.h)
    out = {"spread": spread.to_json(), "elements": len(spread.elements)}
    k = cfg.k if cfg.k is not None else 1
    if cfg.input is not None:
        data = _read_json(cfg.input)
        U = spread.big.subspace(data["U_basis"] if isinstance(data, dict) else data)
        w = linear_blocking_set(U, spread, k)
        out["witness"] = w.to_json(spread)
        if not is_trivial_witness(w):
            c = companion_blocking_set(w, spread)
            out["companion"] = c.to_json(spread)
            out["companion"]["intersection"] = c.provenance["intersection"]
    else:
        subs = spread.big.enumerate_subspaces(cfg.h * k)
        if len(subs) > 50_000:
            raise PreconditionError(f"{len(subs)} subspaces to scan; pass --input with one U instead")
        sizes: dict[int, int] = {}
        for U in subs:
            w = linear_blocking_set(U, spread, k)
            sizes[len(w.B)] = sizes.get(len(w.B), 0) + 1
        out["scan"] = {"k": k, "subspaces": len(subs), "sizes": dict(sorted(sizes.items()))}
        log(f"B(U) sizes over {len(subs)} subspaces: {dict(sorted(sizes.items()))}")
    return out


def cmd_redei(cfg: RunConfig, log) -> dict:
    from .redei import all_slopes, build_frame, nonessential_points, redei_f, slope_evaluate

    K = _point_set(cfg)
    frame = build_frame(K)
    rp = redei_f(frame)
    slopes = [slope_evaluate(rp, m).to_json() for m in all_slopes(K.space.n, K.space.q)]
    ne = nonessential_points(rp)
    log(f"k = {rp.k}, {len(ne)} non-essential point(s)")
    return {
        "set": K.to_json(),
        "frame": {"hyperplane": frame.hyperplane.to_json(), "point": frame.point, "matrix": frame.matrix.tolist()},
        "polynomial": rp.to_json(),
        "degree_bounds_hold": rp.degree_bounds_hold(),
        "nonessential": list(ne.indices),
        "slopes": slopes,
    }


def cmd_construct(cfg: RunConfig, log) -> dict:
    from . import constructions as cs
    from .geometry import projective_space

    kind = cfg.construction or "trace"
    if kind == "trace":
        _need(cfg, "p", "n", "k")
        tb = cs.trace_blocking_set(cfg.p, cfg.h, cfg.n - cfg.k, cfg.n, cfg.k)
        w = cs.blocking_difference_codeword(tb.points, tb.witness, cfg.k)
        out = {"blocking_set": tb.to_json(), "codeword": w.to_json()}
    elif kind == "hyperoval":
        _need(cfg, "p")
        out = {"codeword": cs.hyperoval_codeword(cfg.q).to_json()}
    else:
        _need(cfg, "p", "n", "k")
        space = projective_space(cfg.n, cfg.q)
        subs = space.enumerate_subspaces(cfg.n - cfg.k)
        d = cs.difference_codeword(space, subs[0], subs[1], cfg.k)
        out = {"codeword": d.to_json()}
        if kind == "projection":
            R, H = cs.find_projection(d)
            out["projected"] = cs.project_codeword(d, R, H).to_json()
        elif kind == "embedding":
            if cfg.k < 2:
                raise PreconditionError("embedding needs k >= 2")
            plane = projective_space(cfg.n - cfg.k + 1, cfg.q)
            lines = plane.enumerate_subspaces(plane.n - 1)
            small = cs.difference_codeword(plane, lines[0], lines[1], 1)
            pi = space.enumerate_subspaces(cfg.n - cfg.k + 1)[0]
            out["embedded"] = cs.embed_codeword(small.codeword, pi, space, cfg.k).to_json()
    log(f"{kind}: weight {out['codeword']['weight']}")
    return out


def cmd_table1(cfg: RunConfig, log) -> dict:
    from .analysis import table1_row

    _need(cfg, "p", "n", "k")
    rep = table1_row(cfg.p, cfg.h, cfg.n, cfg.k, budget=cfg.budget)
    log(f"{rep.lower.value} <= d <= {rep.upper.value}; exact {rep.exact}; {rep.verdict}")
    if rep.verdict == "falsifying":
        raise ReportedViolation("exact minimum weight outside the stated bounds", rep.to_json())
    return rep.to_json()


def cmd_gap(cfg: RunConfig, log) -> dict:
    from .analysis import gap_verdict

    _need(cfg, "p", "n", "k")
    rep = gap_verdict(cfg.n, cfg.q, cfg.k, budget=cfg.budget)
    log(f"gap verdict: {rep.verdict}")
    if rep.verdict == "falsifying":
        raise ReportedViolation("codewords inside an interval claimed empty", rep.to_json())
    return rep.to_json()


def cmd_verify_all(cfg: RunConfig, log) -> dict:
    from .acceptance import run_all

    results = run_all(cfg.budget, echo=log)
    out = {"criteria": [r.to_json() for r in results], "passed": all(r.passed for r in results)}
    if not out["passed"]:
        failed = [r.number for r in results if not r.passed]
        raise ReportedViolation(f"acceptance criteria failed: {failed}", out)
    return out


HANDLERS = {
    "space": cmd_space,
    "code": cmd_code,
    "dual": cmd_code,
    "blocking": cmd_blocking,
    "spread": cmd_spread,
    "redei": cmd_redei,
    "construct": cmd_construct,
    "table1": cmd_table1,
    "gap": cmd_gap,
    "verify-all": cmd_verify_all,
}


def envelope(cfg: RunConfig, results: dict, timestamp: str | None = None) -> dict:
    return {
        "tool_version": __version__,
        "schema": f"pgcode.{cfg.subcommand}.v1",
        "config": cfg.to_json(),
        "results": _jsonable(results),
        "timestamp": timestamp or _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }


def _emit(cfg: RunConfig, results: dict, stdout) -> None:
    text = json.dumps(envelope(cfg, results), indent=2, sort_keys=True) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        stdout.write(text)


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    def log(msg: str) -> None:
        print(msg, file=stderr)

    try:
        ns = build_parser().parse_args(argv)
        cfg = _config(ns)
        results = HANDLERS[cfg.subcommand](cfg, log)
    except UsageError as exc:
        log(f"usage error: {exc}")
        return EXIT_USAGE
    except TheoremViolation as exc:
        log(f"theorem violation: {exc}")
        if isinstance(exc, ReportedViolation):
            _emit(cfg, exc.results, stdout)
        return EXIT_THEOREM
    except PreconditionError as exc:
        log(f"precondition error: {exc}")
        return EXIT_PRECONDITION
    _emit(cfg, results, stdout)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
