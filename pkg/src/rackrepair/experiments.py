"""Repair experiments, reports and parameter sweeps.

Everything here is deterministic given the seed: trial ``i`` draws from
``numpy.random.default_rng([seed, i])`` so results do not depend on the order
in which trials or sweep points are evaluated.
"""

from __future__ import annotations

import csv
import io
import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .gf_tower import span_dim_over
from .grs_code import encode, naive_recover, random_message
from .rack_engine import (Bits, RepairError, RepairScheme, build_download_plan, execute_repair,
                          helper_sets, scheme_cutset, validate_scheme, worst_case_bandwidth)
from .scheme_forge import (FamilyParams, HypothesisError, SubspaceSearchError,
                           build_family_scheme, largest_k, validate_family_params)

__version__ = "0.1.0"

HELPER_POLICIES = ("all", "exhaustive", "random")
HELPER_STREAM = 1 << 32        # rng stream for helper-set sampling, apart from trials
REPORT_KEYS = ("family", "p0", "s_base", "t", "q", "n", "r", "u", "k", "d", "ell", "host",
               "bandwidth_symbols", "bandwidth_bits", "cutset_symbols", "cutset_bits",
               "optimal", "trials", "failures", "h_degrees", "subspace_basis")


@dataclass(frozen=True)
class ExperimentConfig:
    params: FamilyParams | None = None
    trials: int = 1
    helpers: str = "all"
    seed: int = 42
    out: str | None = None
    fmt: str = "json"
    subspace: object = "auto"

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trial count must be >= 1")
        if self.helpers not in HELPER_POLICIES:
            raise ValueError(f"helper policy must be one of {HELPER_POLICIES}")
        if self.fmt not in ("json", "csv"):
            raise ValueError("format must be json or csv")


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def symbols_field(x: Fraction | int):
    """Integers stay integers; proper fractions become "p/q" strings."""
    x = Fraction(x)
    return int(x) if x.denominator == 1 else str(x)


def bits_fields(bits: Bits) -> tuple[str, float]:
    return bits.exact, round(bits.value, 6)


# ---------------------------------------------------------------------------
# trials
# ---------------------------------------------------------------------------

@dataclass
class TrialStats:
    trials: int = 0
    repairs: int = 0
    failures: int = 0
    bandwidths: set = field(default_factory=set)
    span_mismatches: int = 0
    notes: list = field(default_factory=list)

    def merge(self, other: "TrialStats") -> None:
        self.trials += other.trials
        self.repairs += other.repairs
        self.failures += other.failures
        self.bandwidths |= other.bandwidths
        self.span_mismatches += other.span_mismatches
        self.notes += other.notes


def expected_rack_dims(scheme: RepairScheme) -> dict[int, int]:
    """b_i recomputed from scratch with :func:`span_dim_over`."""
    vals = scheme.h_values
    out = {}
    for i in range(scheme.layout.r):
        if i != scheme.host[0]:
            out[i] = span_dim_over(scheme.tower, [tuple(v) for v in vals[:, i, :]], scheme.base)[0]
    return out


def repair_trials(scheme: RepairScheme, trials: int, seed: int, helpers: str = "all",
                  nodes: Iterable[int] | None = None, first_trial: int = 0,
                  word_source=None) -> TrialStats:
    """Encode, erase, repair and compare against the truth and the naive oracle.

    ``nodes`` selects host-rack nodes to fail (default: the scheme's own host
    node).  ``word_source(trial)`` may supply codewords instead of random ones.
    """
    code = scheme.code
    lay = scheme.layout
    nodes = [scheme.host[1]] if nodes is None else list(nodes)
    dims = expected_rack_dims(scheme)
    helper_choice = helper_sets(scheme, helpers, trial_rng(seed, HELPER_STREAM))
    plans = {}
    for j in nodes:
        sc = scheme.with_host_node(j) if j != scheme.host[1] else scheme
        for hs in helper_choice:
            plans[(j, hs)] = build_download_plan(sc, hs)
    stats = TrialStats()
    for trial in range(first_trial, first_trial + trials):
        rng = trial_rng(seed, trial)
        if word_source is None:
            word = encode(code, random_message(code, rng))
        else:
            word = word_source(trial)
        stats.trials += 1
        oracle = {}
        for (j, hs), plan in plans.items():
            idx = lay.index(scheme.host[0], j)
            truth = word.symbols[idx]
            tx = execute_repair(plan, word.erase(idx))
            if idx not in oracle:
                survivors = [i for i in range(lay.n) if i != idx]
                oracle[idx] = naive_recover(code, word.erase(idx), survivors).symbols[idx]
            stats.repairs += 1
            if tx.recovered != truth or oracle[idx] != truth:
                stats.failures += 1
                stats.notes.append(f"trial {trial} node {j} helpers {hs}: mismatch")
            stats.bandwidths.add(tx.cross_rack_symbols)
            if any(len(tx.per_rack_payload[i]) != dims[i] for i in hs):
                stats.span_mismatches += 1
    return stats


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def build_report(scheme: RepairScheme, stats: TrialStats | None = None,
                 duration: float | None = None, hosts: Sequence | None = None) -> dict:
    tw = scheme.tower
    lay = scheme.layout
    bw = worst_case_bandwidth(scheme)
    cut = scheme_cutset(scheme)
    bw_exact, bw_float = bits_fields(bw.bits)
    cut_exact, cut_float = bits_fields(cut.bits)
    rep = {
        "family": scheme.family,
        "p0": tw.p0,
        "s_base": scheme.base.s,
        "t": scheme.t,
        "q": tw.q,
        "n": lay.n,
        "r": lay.r,
        "u": lay.u,
        "k": scheme.k,
        "d": scheme.d,
        "ell": scheme.meta.get("ell"),
        "host": list(scheme.host) if hosts is None else [list(h) for h in hosts],
        "bandwidth_symbols": bw.symbols,
        "bandwidth_bits": bw_exact,
        "bandwidth_bits_float": bw_float,
        "cutset_symbols": symbols_field(cut.symbols),
        "cutset_bits": cut_exact,
        "cutset_bits_float": cut_float,
        "optimal": Fraction(bw.symbols) == cut.symbols,
        "trials": 0 if stats is None else stats.trials,
        "failures": 0 if stats is None else stats.failures,
        "h_degrees": [h.degree for h in scheme.h_polys],
        "subspace_basis": scheme.meta.get("subspace_basis"),
        "rack_dims": {str(i): b for i, b in sorted(bw.per_rack.items())},
    }
    if stats is not None:
        rep["repairs"] = stats.repairs
        rep["observed_bandwidths"] = sorted(stats.bandwidths)
        rep["span_mismatches"] = stats.span_mismatches
    rep["version"] = __version__
    if duration is not None:
        rep["duration_s"] = round(duration, 3)
    return rep


def search_failure_report(params: FamilyParams, err: SubspaceSearchError, tower=None) -> dict:
    check = validate_family_params(params)
    rep = {"family": params.family, "p0": params.p0, "s_base": params.s_base, "t": params.t,
           "q": params.q, **{k: check.derived.get(k) for k in ("n", "r", "u", "d")},
           "k": params.k, "ell": params.ell, "status": "no-admissible-subspace",
           "best_degree": err.best_degree, "degree_bound": err.bound,
           "candidates_tried": err.tried}
    if tower is not None and err.best_basis is not None:
        rep["best_subspace_basis"] = [tower.format_element(b) for b in err.best_basis]
    rep["version"] = __version__
    return rep


def report_csv(rows: Sequence[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_csv_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return " ".join(str(_csv_cell(x)) for x in v)
    return v


CSV_COLUMNS = REPORT_KEYS[:-2] + ("bandwidth_bits_float", "cutset_bits_float", "h_degrees",
                                  "subspace_basis")


# ---------------------------------------------------------------------------
# exhaustive runs over every failure position
# ---------------------------------------------------------------------------

def host_schemes(params: FamilyParams, subspace="auto", seed: int = 42) -> list[RepairScheme]:
    """One scheme per rack that can host a failure (rack-dependent g)."""
    check = validate_family_params(params)
    if not check.ok:
        raise HypothesisError(check.violations)
    return [build_family_scheme(replace(params, host_rack=s, host_node=0), subspace, seed)
            for s in range(check.derived["r"])]


def exhaustive_repair(params: FamilyParams, trials: int, seed: int = 42, helpers: str = "all",
                      subspace="auto") -> tuple[dict, TrialStats]:
    """Every failure position, ``trials`` shared codewords each."""
    start = time.perf_counter()
    schemes = host_schemes(params, subspace, seed)
    code = schemes[0].code
    words = {i: encode(code, random_message(code, trial_rng(seed, i))) for i in range(trials)}
    stats = TrialStats()
    for sc in schemes:
        if sc.code.points != code.points:
            raise RepairError("host schemes disagree on the evaluation points")
        part = repair_trials(sc, trials, seed, helpers, nodes=range(sc.layout.u),
                             word_source=words.__getitem__)
        part.trials = 0
        stats.merge(part)
    stats.trials = trials
    worst = max(schemes, key=lambda s: worst_case_bandwidth(s).symbols)
    hosts = [(s.host[0], j) for s in schemes for j in range(s.layout.u)]
    rep = build_report(worst, stats, time.perf_counter() - start)
    rep["host"] = "all"
    rep["positions"] = len(hosts)
    rep["bandwidth_by_host_rack"] = [worst_case_bandwidth(s).symbols for s in schemes]
    return rep, stats


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

SWEEP_AXES = ("p0", "s_base", "t", "a", "v", "ell", "n", "k")
SWEEP_COLUMNS = ("family", "p0", "s_base", "t", "a", "v", "ell", "q", "n", "r", "u", "k", "d",
                 "status", "violation", "best_degree", "degree_bound", "bandwidth_symbols",
                 "bandwidth_bits", "cutset_symbols", "cutset_bits", "optimal", "trials",
                 "failures", "h_degrees", "subspace_basis")


def sweep_points(grid: dict) -> list[dict]:
    """Cartesian product of the grid axes, in fixed axis order then value order."""
    family = grid.get("family")
    if family is None:
        raise ValueError("sweep grid needs a family")
    axes = []
    for name in SWEEP_AXES:
        vals = grid.get(name)
        if vals is None:
            vals = [None]
        elif not isinstance(vals, list):
            vals = [vals]
        axes.append(vals)
    return [dict(zip(SWEEP_AXES, combo), family=family) for combo in itertools.product(*axes)]


def _sweep_row(point: dict, trials: int, seed: int) -> dict:
    p = {k: v for k, v in point.items() if v is not None}
    p.setdefault("s_base", 1)
    row = dict(point)
    row["s_base"] = p["s_base"]
    k = p.get("k", "auto")
    base = FamilyParams(family=p["family"], p0=p.get("p0", 2), t=p.get("t", 1), k=1,
                        s_base=p["s_base"], ell=p.get("ell"), a=p.get("a"), v=p.get("v"),
                        n=p.get("n"))
    row["p0"] = base.p0
    if k == "auto":
        k = largest_k(base)
        if k is None:
            check = validate_family_params(base)
            row.update(status="infeasible", k="",
                       violation="no admissible k; at k=1: " + " | ".join(check.violations))
            return row
    params = replace(base, k=int(k))
    row["k"] = params.k
    check = validate_family_params(params)
    row.update({key: check.derived.get(key) for key in ("q", "n", "r", "u", "d")})
    if not check.ok:
        row.update(status="infeasible", violation=" | ".join(check.violations))
        return row
    try:
        scheme = build_family_scheme(params, seed=seed)
    except SubspaceSearchError as err:
        row.update(status="no-subspace", best_degree=err.best_degree, degree_bound=err.bound)
        return row
    stats = repair_trials(scheme, trials, seed)
    rep = build_report(scheme, stats)
    for key in SWEEP_COLUMNS:
        if key in rep and key not in ("host",):
            row[key] = rep[key]
    row["status"] = "ok" if stats.failures == 0 else "repair-failure"
    row["degree_bound"] = scheme.degree_bound
    return row


def run_sweep(grid: dict, trials: int = 1, seed: int = 42, jobs: int = 1) -> list[dict]:
    points = sweep_points(grid) if grid.get("family") else []
    if jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_row, points, [trials] * len(points),
                                 [seed] * len(points)))
    return [_sweep_row(pt, trials, seed) for pt in points]


def sweep_csv(rows: Sequence[dict]) -> str:
    return report_csv(rows, SWEEP_COLUMNS)

