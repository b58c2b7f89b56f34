"""Rack-aware trace repair of Reed-Solomon codes.

A :class:`RepairScheme` carries t repair polynomials h_1..h_t with
h_a(alpha_{s,j}) = eta_a and deg h_a <= u(d+1) - k - 1.  Puncturing the code
to the host rack plus d helper racks gives a dual codeword (v_{i,l} h_a(alpha_{i,l}))
for each a, hence one trace equation per a.  Helper rack i only has to ship
Tr(f_i . c) for c in a basis of the F_p-span of its h-evaluation vectors, so it
costs b_i = dim of that span base-field symbols.

Indices are 0-based throughout: racks 0..r-1, nodes 0..u-1.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .gf_tower import (FieldError, FieldTower, Subfield, SubfieldSpan, TraceBasis,
                       dual_basis, element_from_traces, parse_field)
from .grs_code import Codeword, GrsCode, dual_multipliers, is_codeword, survivors_consistent
from .polyring import Poly


class SchemeError(ValueError):
    pass


class DegreeBoundError(SchemeError):
    pass


class RepairError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# bandwidth bookkeeping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Bits:
    """``symbols`` base-field symbols of log2(base_size) bits each."""

    symbols: Fraction
    base_size: int

    @property
    def exact(self) -> str:
        lg = self.base_size.bit_length() - 1
        if 1 << lg == self.base_size:
            return str(Fraction(self.symbols) * lg)
        return f"{self.symbols}*log2({self.base_size})"

    @property
    def value(self) -> float:
        return float(self.symbols) * math.log2(self.base_size)

    def __float__(self) -> float:
        return self.value


# ---------------------------------------------------------------------------
# layout and scheme
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RackLayout:
    """r racks of u evaluation points each; rack i is row i of ``grid``."""

    tower: FieldTower
    grid: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        grid = tuple(tuple(int(a) for a in row) for row in self.grid)
        object.__setattr__(self, "grid", grid)
        if not grid or not grid[0]:
            raise SchemeError("layout needs at least one non-empty rack")
        if any(len(row) != len(grid[0]) for row in grid):
            raise SchemeError("all racks must have the same size")
        flat = [a for row in grid for a in row]
        if len(set(flat)) != len(flat):
            raise SchemeError("evaluation points must be distinct")

    @classmethod
    def standard(cls, tower: FieldTower, points: Sequence[int]) -> "RackLayout":
        """One node per rack (the classical, non-rack model)."""
        return cls(tower, tuple((int(a),) for a in points))

    @property
    def r(self) -> int:
        return len(self.grid)

    @property
    def u(self) -> int:
        return len(self.grid[0])

    @property
    def n(self) -> int:
        return self.r * self.u

    @property
    def points(self) -> tuple[int, ...]:
        return tuple(a for row in self.grid for a in row)

    def index(self, rack: int, node: int) -> int:
        return rack * self.u + node


@dataclass(frozen=True)
class RepairScheme:
    layout: RackLayout
    k: int
    host: tuple[int, int]
    d: int
    basis: TraceBasis
    h_polys: tuple[Poly, ...]
    multipliers: tuple[int, ...] | None = None
    family: str = "custom"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        s, j = self.host
        if not (0 <= s < self.layout.r and 0 <= j < self.layout.u):
            raise SchemeError(f"host {self.host} is outside the {self.layout.r}x{self.layout.u} grid")
        if len(self.h_polys) != len(self.basis.eta):
            raise SchemeError("need one repair polynomial per basis element")
        if self.multipliers is not None and len(self.multipliers) != self.layout.n:
            raise SchemeError("one column multiplier per node is required")

    @property
    def tower(self) -> FieldTower:
        return self.layout.tower

    @property
    def base(self) -> Subfield:
        return self.basis.base

    @property
    def t(self) -> int:
        return self.base.degree

    @property
    def degree_bound(self) -> int:
        return self.layout.u * (self.d + 1) - self.k - 1

    @cached_property
    def code(self) -> GrsCode:
        mult = self.multipliers or (1,) * self.layout.n
        return GrsCode(self.tower, self.layout.points, tuple(mult), self.k)

    @cached_property
    def h_values(self) -> np.ndarray:
        """h_a evaluated at every node: array of shape (t, r, u)."""
        pts = np.array(self.layout.grid, dtype=np.int64)
        return np.stack([h.eval_many(pts) for h in self.h_polys])

    @cached_property
    def rack_dims(self) -> dict[int, int]:
        """b_i for every rack other than the host rack."""
        return {i: rack_span(self, i).dim for i in range(self.layout.r) if i != self.host[0]}

    def with_host_node(self, j: int) -> "RepairScheme":
        return replace(self, host=(self.host[0], j))

    def with_degree(self, d: int) -> "RepairScheme":
        return replace(self, d=d)

    def with_multipliers(self, multipliers: Sequence[int] | None) -> "RepairScheme":
        return replace(self, multipliers=None if multipliers is None else tuple(multipliers))


def rack_span(scheme: RepairScheme, rack: int) -> SubfieldSpan:
    span = SubfieldSpan(scheme.tower, scheme.base, scheme.layout.u)
    for vec in scheme.h_values[:, rack, :]:
        span.add(vec)
    return span


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    max_degree: int
    degree_bound: int
    degree_ok: bool
    host_values_ok: bool
    basis_ok: bool
    helper_degree_ok: bool
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "max_degree": self.max_degree,
            "degree_bound": self.degree_bound,
            "degree_ok": self.degree_ok,
            "host_values_ok": self.host_values_ok,
            "basis_ok": self.basis_ok,
            "helper_degree_ok": self.helper_degree_ok,
            "failures": list(self.failures),
        }


def validate_scheme(scheme: RepairScheme) -> ValidationReport:
    """Check degree bound and host values; failures are reported, not raised."""
    tw = scheme.tower
    lay = scheme.layout
    failures = []
    max_deg = max(h.degree for h in scheme.h_polys)
    bound = scheme.degree_bound
    degree_ok = max_deg <= bound
    if not degree_ok:
        failures.append(f"max deg h_a = {max_deg} exceeds u(d+1)-k-1 = {bound}")
    s, j = scheme.host
    host_pt = lay.grid[s][j]
    host_values_ok = all(h(host_pt) == e for h, e in zip(scheme.h_polys, scheme.basis.eta))
    if not host_values_ok:
        failures.append("h_a(host point) != eta_a for some a")
    basis_ok = True
    try:
        check = dual_basis(tw, scheme.base, scheme.basis.eta)
        if check.theta != tuple(scheme.basis.theta):
            basis_ok = False
            failures.append("theta is not the trace-dual of eta")
    except FieldError:
        basis_ok = False
        failures.append("eta is not a basis of F_q over the base field")
    low = -(-(scheme.k + 1) // lay.u) - 1
    helper_degree_ok = low <= scheme.d <= lay.r - 1 and scheme.d >= 1
    if not helper_degree_ok:
        failures.append(f"d={scheme.d} outside [{max(low, 1)}, {lay.r - 1}]")
    return ValidationReport(max_deg, bound, degree_ok, host_values_ok, basis_ok,
                            helper_degree_ok, tuple(failures))


# ---------------------------------------------------------------------------
# download plan and repair
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DownloadPlan:
    scheme: RepairScheme
    helpers: tuple[int, ...]
    punctured_multipliers: dict          # (rack, node) -> v_{i,j}
    span_bases: dict                     # rack -> tuple of basis vectors c_l
    combo_coeffs: dict                   # rack -> (t, b_i) array of e_{l,i,a}

    @property
    def b(self) -> dict[int, int]:
        return {i: len(self.span_bases[i]) for i in self.helpers}


def build_download_plan(scheme: RepairScheme, helpers: Iterable[int]) -> DownloadPlan:
    lay = scheme.layout
    s, _ = scheme.host
    helpers = tuple(sorted(int(i) for i in helpers))
    if len(set(helpers)) != len(helpers):
        raise SchemeError("helper racks must be distinct")
    if len(helpers) != scheme.d:
        raise SchemeError(f"scheme needs d={scheme.d} helper racks, got {len(helpers)}")
    if s in helpers:
        raise SchemeError("the host rack cannot be a helper")
    if any(not 0 <= i < lay.r for i in helpers):
        raise SchemeError("helper rack index out of range")
    racks = (s,) + helpers
    pts = [lay.grid[i][l] for i in racks for l in range(lay.u)]
    duals = dual_multipliers(scheme.tower, pts)
    mult = scheme.code.multipliers
    tw = scheme.tower
    v = {}
    for idx, (i, l) in enumerate((i, l) for i in racks for l in range(lay.u)):
        v[(i, l)] = tw.div(duals[idx], mult[lay.index(i, l)])
    bases, combos = {}, {}
    for i in helpers:
        span = rack_span(scheme, i)
        e = np.zeros((scheme.t, span.dim), dtype=np.int64)
        for a, vec in enumerate(scheme.h_values[:, i, :]):
            coeff = span.coefficients(vec)
            e[a, : len(coeff)] = coeff
        bases[i] = tuple(tuple(int(x) for x in c) for c in span.basis)
        combos[i] = e
    return DownloadPlan(scheme, helpers, v, bases, combos)


@dataclass(frozen=True)
class RepairTranscript:
    recovered: int
    traces: tuple[int, ...]
    cross_rack_symbols: int
    intra_rack_symbols: int
    base_size: int
    per_rack_payload: dict               # rack -> tuple of F_p symbols
    host_payload: tuple                  # ((node, a, symbol), ...)

    @property
    def cross_rack_bits(self) -> Bits:
        return Bits(Fraction(self.cross_rack_symbols), self.base_size)


def _trace_sums(plan: DownloadPlan, word: Codeword):
    """Host and helper parts of the right-hand side of the trace equations.

    Returns (host_sums, helper_sums, payload, host_payload) with
    Tr(eta_a c_{s,j}) = -(host_sums[a] + helper_sums[a]).
    """
    sch = plan.scheme
    tw = sch.tower
    lay = sch.layout
    ps = sch.base.s
    s, j = sch.host
    v = plan.punctured_multipliers
    vsj_inv = tw.inv(v[(s, j)])
    t = sch.t
    host_sums = [0] * t
    host_payload = []
    for l in range(lay.u):
        if l == j:
            continue
        scaled = tw.mul(tw.mul(v[(s, l)], vsj_inv), word.symbols[lay.index(s, l)])
        for a in range(t):
            sym = tw.trace(tw.mul(int(sch.h_values[a, s, l]), scaled), ps)
            host_payload.append((l, a, sym))
            host_sums[a] = tw.add(host_sums[a], sym)
    helper_sums = [0] * t
    payload = {}
    for i in plan.helpers:
        f_i = np.array([tw.mul(tw.mul(v[(i, l)], vsj_inv), word.symbols[lay.index(i, l)])
                        for l in range(lay.u)], dtype=np.int64)
        syms = tuple(tw.trace(tw.vdot(f_i, np.array(c)), ps) for c in plan.span_bases[i])
        payload[i] = syms
        e = plan.combo_coeffs[i]
        for a in range(t):
            for l, sym in enumerate(syms):
                helper_sums[a] = tw.add(helper_sums[a], tw.mul(int(e[a, l]), sym))
    return host_sums, helper_sums, payload, tuple(host_payload)


def execute_repair(plan: DownloadPlan, word: Codeword) -> RepairTranscript:
    """Regenerate the host symbol from intra-rack traces and helper-rack payloads."""
    sch = plan.scheme
    lay = sch.layout
    s, j = sch.host
    host_idx = lay.index(s, j)
    if len(word) != lay.n:
        raise RepairError("word length does not match the layout")
    if word.erasures - {host_idx}:
        raise RepairError("only the host position may be erased")
    if not (survivors_consistent(sch.code, word) if word.erasures
            else is_codeword(sch.code, word)):
        raise RepairError("input word is not a codeword of the underlying code")
    tw = sch.tower
    host_sums, helper_sums, payload, host_payload = _trace_sums(plan, word)
    traces = tuple(tw.neg(tw.add(h, g)) for h, g in zip(host_sums, helper_sums))
    recovered = element_from_traces(tw, traces, sch.basis)
    return RepairTranscript(
        recovered=recovered,
        traces=traces,
        cross_rack_symbols=sum(len(p) for p in payload.values()),
        intra_rack_symbols=(lay.u - 1) * sch.t,
        base_size=sch.base.size,
        per_rack_payload=payload,
        host_payload=host_payload,
    )


def repair_standard(scheme: RepairScheme, helpers: Iterable[int], word: Codeword) -> RepairTranscript:
    """Repair in the one-node-per-rack model with an arbitrary helper count."""
    if scheme.layout.u != 1:
        raise SchemeError("standard repair needs a layout with u = 1")
    helpers = tuple(helpers)
    if len(helpers) != scheme.d:
        scheme = scheme.with_degree(len(helpers))
        report = validate_scheme(scheme)
        if not report.degree_ok:
            raise DegreeBoundError(
                f"{len(helpers)} helpers allow degree {report.degree_bound}, "
                f"but the scheme needs {report.max_degree}")
    return execute_repair(build_download_plan(scheme, helpers), word)


# ---------------------------------------------------------------------------
# bandwidth and the cut-set bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BandwidthProfile:
    symbols: int
    per_rack: dict
    worst_helpers: tuple[int, ...]
    base_size: int

    @property
    def bits(self) -> Bits:
        return Bits(Fraction(self.symbols), self.base_size)


def worst_case_bandwidth(scheme: RepairScheme) -> BandwidthProfile:
    """max over helper sets of sum b_i: the d largest b_i among non-host racks."""
    dims = scheme.rack_dims
    order = sorted(dims, key=lambda i: (-dims[i], i))[: scheme.d]
    return BandwidthProfile(sum(dims[i] for i in order), dict(dims),
                            tuple(sorted(order)), scheme.base.size)


@dataclass(frozen=True)
class CutSetQuery:
    n: int
    k: int
    r: int
    d: int
    q: int
    base_size: int

    @property
    def m(self) -> int:
        return self.k * self.r // self.n

    @property
    def t(self) -> int:
        t = round(math.log(self.q, self.base_size))
        for cand in (t - 1, t, t + 1):
            if cand >= 1 and self.base_size ** cand == self.q:
                return cand
        raise SchemeError(f"q={self.q} is not a power of the base size {self.base_size}")


@dataclass(frozen=True)
class CutSet:
    m: int
    symbols: Fraction
    base_size: int

    @property
    def bits(self) -> Bits:
        return Bits(self.symbols, self.base_size)


def cutset_bound(query: CutSetQuery) -> CutSet:
    """Rack-aware cut-set bound d*t/(d - floor(kr/n) + 1) in base-field symbols."""
    if query.n % query.r:
        raise SchemeError("n must be a multiple of r")
    denom = query.d - query.m + 1
    if denom <= 0:
        raise SchemeError(f"d={query.d} is below floor(kr/n)={query.m}")
    return CutSet(query.m, Fraction(query.d * query.t, denom), query.base_size)


def scheme_cutset(scheme: RepairScheme) -> CutSet:
    lay = scheme.layout
    return cutset_bound(CutSetQuery(lay.n, scheme.k, lay.r, scheme.d,
                                    scheme.tower.q, scheme.base.size))


def helper_sets(scheme: RepairScheme, policy: str = "all",
                rng: np.random.Generator | None = None, limit: int = 64,
                samples: int = 50) -> list[tuple[int, ...]]:
    """Helper rack sets to exercise.

    ``all`` -- the d lowest-indexed other racks (every other rack when d = r-1);
    ``exhaustive`` -- every d-subset if there are at most ``limit`` of them,
    otherwise ``samples`` seeded random subsets; ``random`` -- one random subset.
    """
    others = [i for i in range(scheme.layout.r) if i != scheme.host[0]]
    if policy == "all":
        return [tuple(others[: scheme.d])]
    rng = rng or np.random.default_rng(42)
    if policy == "exhaustive":
        if math.comb(len(others), scheme.d) <= limit:
            return list(itertools.combinations(others, scheme.d))
        return [tuple(sorted(rng.choice(others, scheme.d, replace=False).tolist()))
                for _ in range(samples)]
    if policy == "random":
        return [tuple(sorted(rng.choice(others, scheme.d, replace=False).tolist()))]
    raise SchemeError(f"unknown helper policy {policy!r}")


# ---------------------------------------------------------------------------
# scheme files
# ---------------------------------------------------------------------------

def scheme_to_dict(scheme: RepairScheme, validation: ValidationReport | None = None) -> dict:
    tw = scheme.tower
    fe = tw.format_element
    out = {
        "field": tw.describe(),
        "family": scheme.family,
        "base_degree": scheme.base.s,
        "layout": [[fe(a) for a in row] for row in scheme.layout.grid],
        "k": scheme.k,
        "d": scheme.d,
        "host": list(scheme.host),
        "eta": [fe(e) for e in scheme.basis.eta],
        "theta": [fe(e) for e in scheme.basis.theta],
        "h_polys": [h.to_text() for h in scheme.h_polys],
        "multipliers": None if scheme.multipliers is None else [fe(v) for v in scheme.multipliers],
        "meta": scheme.meta,
    }
    if validation is not None:
        out["validation"] = validation.as_dict()
    return out


def scheme_from_dict(data: dict) -> RepairScheme:
    tw = parse_field(data["field"])
    pe = tw.parse_element
    layout = RackLayout(tw, tuple(tuple(pe(a) for a in row) for row in data["layout"]))
    eta = [pe(e) for e in data["eta"]]
    basis = dual_basis(tw, Subfield(tw, int(data["base_degree"])), eta)
    if "theta" in data and [pe(e) for e in data["theta"]] != list(basis.theta):
        raise SchemeError("stored theta is not the dual of eta")
    hs = tuple(Poly.from_text(tw, h) for h in data["h_polys"])
    mult = data.get("multipliers")
    return RepairScheme(
        layout=layout, k=int(data["k"]), host=tuple(data["host"]), d=int(data["d"]),
        basis=basis, h_polys=hs,
        multipliers=None if mult is None else tuple(pe(v) for v in mult),
        family=data.get("family", "custom"), meta=dict(data.get("meta", {})),
    )


def dump_scheme(scheme: RepairScheme, validation: ValidationReport | None = None) -> str:
    return json.dumps(scheme_to_dict(scheme, validation), indent=1)


def load_scheme(text: str) -> RepairScheme:
    return scheme_from_dict(json.loads(text))
