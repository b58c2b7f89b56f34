"""Constructors for concrete repair schemes.

* :func:`gw_scheme` -- full-length trace repair (one node per rack, all of F_q).
* :func:`two_coset_scheme` -- degree-one scheme over F_{2^{2s}} with points in
  F_{2^s}^* and beta F_{2^s}^*.
* :func:`degree_descent_scheme` -- rack schemes from a good polynomial g and a
  subspace V: h_a = L_V(g eta_a) / g, reduced modulo the vanishing polynomial
  of the evaluation set.  Good polynomials come from
  :func:`additive_good_poly`, :func:`multiplicative_good_poly` and
  :func:`combined_good_poly`.

A subspace V only works if the reduced h_a have small enough degree, and
which V qualify depends on the support of L_V.  The search therefore screens
candidates with the degree test and reports the best degree it saw when no
candidate passes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .gf_tower import FieldTower, Subfield, dual_basis, make_field, power_basis
from .polyring import (Poly, SubspaceChoice, compose_linearized, exact_div, linearized_coeffs,
                       linearized_dense, reduce_mod_vanishing, vanishing_poly)
from .rack_engine import (RackLayout, RepairScheme, SchemeError, validate_scheme)

FAMILIES = ("additive", "multiplicative", "combined", "gw", "two-coset")


class HypothesisError(SchemeError):
    def __init__(self, violations: Sequence[str]) -> None:
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class SubspaceSearchError(SchemeError):
    def __init__(self, message: str, best_degree: int | None, best_basis, bound: int,
                 tried: int) -> None:
        super().__init__(message)
        self.best_degree = best_degree
        self.best_basis = best_basis
        self.bound = bound
        self.tried = tried


# ---------------------------------------------------------------------------
# family parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyParams:
    family: str
    p0: int
    t: int
    k: int
    s_base: int = 1
    ell: int | None = None
    a: int | None = None
    v: int | None = None
    n: int | None = None
    host_rack: int = 0
    host_node: int = 0

    @property
    def p(self) -> int:
        return self.p0 ** self.s_base

    @property
    def q(self) -> int:
        return self.p ** self.t


@dataclass(frozen=True)
class FamilyCheck:
    params: FamilyParams
    derived: dict
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _rational_eq(lhs: int, num: int, den: int) -> bool:
    return den != 0 and Fraction(lhs) == Fraction(num, den)


def validate_family_params(params: FamilyParams) -> FamilyCheck:
    """Check every hypothesis of the chosen family; derive (n, r, u, m, d)."""
    P = params
    bad: list[str] = []
    p, t, k = P.p, P.t, P.k
    q = p ** t if t >= 1 else 0
    derived: dict = {"p": p, "q": q}
    if P.family not in FAMILIES:
        return FamilyCheck(P, derived, (f"unknown family {P.family!r}",))
    if t < 1:
        return FamilyCheck(P, derived, ("t must be >= 1",))
    if k < 1:
        bad.append("k must be >= 1")

    if P.family in ("additive", "multiplicative", "combined"):
        ell = P.ell
        if ell is None or not 1 <= ell < t:
            bad.append(f"ell must satisfy 1 <= ell < t (got {ell})")
            ell = None
    if P.family == "additive":
        if t % 2:
            bad.append(f"t must be even (got {t})")
        if t <= 2:
            bad.append(f"t must exceed 2 (got {t})")
        u = p ** max(t - 2, 0)
        n, r = q, p * p
        m = k // u
        derived.update(n=n, r=r, u=u, m=m, d=r - 1)
        kmax = p ** t - p ** (t - 1) + p ** max(t - 2, 0) - 1
        if k > kmax:
            bad.append(f"k <= p^t - p^(t-1) + p^(t-2) - 1 = {kmax} fails (k={k})")
        if ell is not None and not _rational_eq(r - m, t, t - ell):
            bad.append(f"p^2 - m = t/(t-ell) fails ({r - m} != {t}/{t - ell})")
    elif P.family == "multiplicative":
        a = P.a
        if a is None or not 1 <= a < t or t % a:
            bad.append(f"a must satisfy 1 <= a < t and a | t (got {a})")
        else:
            r = p ** a - 1
            u = (q - 1) // r
            n = q - 1
            m = k * r // (q - 1)
            derived.update(n=n, r=r, u=u, m=m, d=r - 1)
            if r < 2:
                bad.append("p^a - 1 must be at least 2 racks")
            if ell is not None:
                if a + ell <= t:
                    bad.append(f"a + ell > t fails ({a} + {ell} <= {t})")
                if not _rational_eq(r - m, t, t - ell):
                    bad.append(f"p^a - 1 - m = t/(t-ell) fails ({r - m} != {t}/{t - ell})")
                kmax = Fraction((p ** t - p ** ell) * (p ** t - 1), p ** t - p ** (t - a)) - 1
                if k > kmax:
                    bad.append(f"k <= (p^t - p^ell)(p^t - 1)/(p^t - p^(t-a)) - 1 = {kmax} fails (k={k})")
    elif P.family == "combined":
        a, v = P.a, P.v
        if a is None or not 1 <= a < t or t % a:
            bad.append(f"a must satisfy 1 <= a < t and a | t (got {a})")
        elif (t // a) % p:
            bad.append(f"p | t/a fails (p={p}, t/a={t // a})")
        if v is None or v < 1:
            bad.append(f"v must be a positive integer (got {v})")
        elif v >= p:
            bad.append(f"v < p fails (v={v}, p={p})")
        if not bad:
            if (p ** a - 1) % v:
                bad.append(f"p^a mod v = 1 fails (p^a={p ** a}, v={v})")
            else:
                w = p ** (t - a)
                u = v * w
                n = q - w
                r = n // u
                m = k // u
                derived.update(n=n, r=r, u=u, m=m, d=r - 1)
                if r < 2:
                    bad.append("the partition has fewer than 2 racks")
                kmax = p ** t - v * p ** (t - 1) - 1
                if k > kmax:
                    bad.append(f"k <= p^t - v p^(t-1) - 1 = {kmax} fails (k={k})")
                if ell is not None and not _rational_eq(r - m, t, t - ell):
                    bad.append(f"r - m = t/(t-ell) fails ({r - m} != {t}/{t - ell})")
    elif P.family == "gw":
        derived.update(n=q, r=q, u=1, m=k, d=q - 1)
        if k * p > q * (p - 1):
            bad.append(f"k <= q(1 - 1/p) fails (k={k}, q={q}, p={p})")
    elif P.family == "two-coset":
        n = P.n
        if P.p0 != 2 or t != 2:
            bad.append("two-coset scheme needs p0 = 2 and t = 2 (F_{2^2s} over F_{2^s})")
        if n is None or n < 2 or n % 2:
            bad.append(f"n must be even and >= 2 (got {n})")
        elif n > 2 * (p - 1):
            bad.append(f"n <= 2(2^s - 1) = {2 * (p - 1)} fails (n={n})")
        if n is not None and k > n - 2:
            bad.append(f"k <= n - 2 fails (k={k}, n={n})")
        if n is not None:
            derived.update(n=n, r=n, u=1, m=k, d=n - 1)

    if "r" in derived and not bad:
        if not 0 <= P.host_rack < derived["r"]:
            bad.append(f"host rack {P.host_rack} outside [0, {derived['r']})")
        if not 0 <= P.host_node < derived["u"]:
            bad.append(f"host node {P.host_node} outside [0, {derived['u']})")
    return FamilyCheck(P, derived, tuple(bad))


def require_family_params(params: FamilyParams) -> FamilyCheck:
    check = validate_family_params(params)
    if not check.ok:
        raise HypothesisError(check.violations)
    return check


# ---------------------------------------------------------------------------
# good polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GoodPolynomial:
    g: Poly
    layout: RackLayout
    host_rack: int
    base: Subfield
    rack_constants: dict = field(compare=False)
    family: str = "custom"

    @property
    def tower(self) -> FieldTower:
        return self.layout.tower


def trace_poly(tower: FieldTower, s: int) -> Poly:
    """Tr_{F_q/F_{p0^s}}(x) as a polynomial."""
    P = tower.p0 ** s
    return Poly.from_terms(tower, {P ** i: 1 for i in range(tower.T // s)})


def _partition(tower: FieldTower, points: Sequence[int], keys: np.ndarray) -> RackLayout:
    classes: dict[int, list[int]] = {}
    for x, key in zip(points, keys):
        classes.setdefault(int(key), []).append(int(x))
    return RackLayout(tower, tuple(tuple(c) for c in classes.values()))


def _shifted(key_poly: Poly, layout: RackLayout, host_rack: int, base: Subfield,
             family: str) -> GoodPolynomial:
    if not 0 <= host_rack < layout.r:
        raise SchemeError(f"host rack {host_rack} outside [0, {layout.r})")
    tw = layout.tower
    beta = layout.grid[host_rack][0]
    g = key_poly - key_poly(beta)
    consts = {i: int(g(row[0])) for i, row in enumerate(layout.grid) if i != host_rack}
    return GoodPolynomial(g, layout, host_rack, base, consts, family)


def additive_good_poly(tower: FieldTower, base: Subfield | int, host_rack: int = 0) -> GoodPolynomial:
    """Racks are the cosets of W = ker Tr_{F_q/F_{p^2}}; g = Tr(x) - Tr(beta)."""
    base = base if isinstance(base, Subfield) else Subfield(tower, base)
    t = base.degree
    if t % 2:
        raise SchemeError(f"additive construction needs t even (t={t})")
    s2 = 2 * base.s
    pts = tower.power_order()
    layout = _partition(tower, pts, tower.trace_array(s2)[np.array(pts)])
    return _shifted(trace_poly(tower, s2), layout, host_rack, base, "additive")


def multiplicative_good_poly(tower: FieldTower, base: Subfield | int, a: int,
                             host_rack: int = 0) -> GoodPolynomial:
    """Racks are the cosets of the order-u subgroup of F_q^*; g = x^u - beta^u."""
    base = base if isinstance(base, Subfield) else Subfield(tower, base)
    t = base.degree
    if a < 1 or t % a:
        raise SchemeError(f"multiplicative construction needs a | t (a={a}, t={t})")
    r = base.size ** a - 1
    u = (tower.q - 1) // r
    pts = tower.power_order()[1:]
    layout = _partition(tower, pts, tower.vpow(np.array(pts), u))
    return _shifted(Poly.monomial(tower, u), layout, host_rack, base, "multiplicative")


def combined_good_poly(tower: FieldTower, base: Subfield | int, a: int, v: int,
                       host_rack: int = 0) -> GoodPolynomial:
    """Racks are the level sets of G = Tr_{F_q/F_{p^a}}(x)^v off W = ker Tr."""
    base = base if isinstance(base, Subfield) else Subfield(tower, base)
    t, p = base.degree, base.size
    if a < 1 or t % a:
        raise SchemeError(f"combined construction needs a | t (a={a}, t={t})")
    if (t // a) % p or v < 1 or v >= p or (p ** a - 1) % v:
        raise SchemeError("combined construction needs p | t/a, v < p and p^a = 1 mod v")
    sa = a * base.s
    tr = tower.trace_array(sa)
    pts = [x for x in tower.power_order() if tr[x] != 0]
    keys = tower.vpow(tr[np.array(pts)], v)
    layout = _partition(tower, pts, keys)
    return _shifted(trace_poly(tower, sa) ** v, layout, host_rack, base, "combined")


def is_good_polynomial(g: Poly, layout: RackLayout, host: int) -> bool:
    """deg g = u, g vanishes on rack ``host`` and is a nonzero constant on every other rack."""
    if g.degree != layout.u:
        return False
    vals = g.eval_many(np.array(layout.grid, dtype=np.int64))
    for i, row in enumerate(vals):
        if i == host:
            if row.any():
                return False
        elif row[0] == 0 or (row != row[0]).any():
            return False
    return True


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------

def subspace_count(t: int, ell: int, p: int) -> int:
    """Number of ell-dimensional subspaces of F_p^t (Gaussian binomial)."""
    num = den = 1
    for i in range(ell):
        num *= p ** (t - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def iter_subspaces(base: Subfield, ell: int) -> Iterator[tuple[int, ...]]:
    """All ell-dimensional F_p-subspaces of F_q, as reduced-row-echelon bases.

    Coordinates are taken in the power basis 1, xi, ..., xi^{t-1}; pivot sets
    run in lexicographic order and free entries in generator-power order.
    """
    tw = base.tower
    t = base.degree
    elems = base.elements()
    for pivots in itertools.combinations(range(t), ell):
        slots = [(row, col) for row, piv in enumerate(pivots)
                 for col in range(piv + 1, t) if col not in pivots]
        for values in itertools.product(elems, repeat=len(slots)):
            rows = [[0] * t for _ in range(ell)]
            for row, piv in enumerate(pivots):
                rows[row][piv] = 1
            for (row, col), val in zip(slots, values):
                rows[row][col] = val
            yield tuple(tw.from_coords(rw, base.s) for rw in rows)


def random_subspaces(base: Subfield, ell: int, count: int, seed: int) -> Iterator[tuple[int, ...]]:
    tw = base.tower
    rng = np.random.default_rng(seed)
    elems = np.array(base.elements(), dtype=np.int64)
    made = 0
    while made < count:
        coords = elems[rng.integers(0, len(elems), size=(ell, base.degree))]
        vecs = tuple(tw.from_coords(row, base.s) for row in coords)
        try:
            SubspaceChoice(base, vecs)
        except ValueError:
            continue
        made += 1
        yield vecs


def subfield_subspace(base: Subfield, ell: int) -> tuple[int, ...]:
    """F_p-basis 1, z, ..., z^{ell-1} of the intermediate field F_{p^ell}."""
    tw = base.tower
    if base.degree % ell:
        raise SchemeError(f"ell={ell} does not divide t={base.degree}")
    s = base.s * ell
    z = tw.exp((tw.q - 1) // (tw.p0 ** s - 1))
    return tuple(tw.pow(z, i) for i in range(ell))


# ---------------------------------------------------------------------------
# degree descent
# ---------------------------------------------------------------------------

class DescentKernel:
    """Fast screening of subspaces for one good polynomial.

    L_V(g eta)/g = sum_i c_i eta^{p^i} g^{p^i - 1}, so after precomputing
    R_i = g^{p^i - 1} mod Z_E every candidate costs ell + 1 vector operations.
    """

    def __init__(self, good: GoodPolynomial, eta: Sequence[int], ell: int) -> None:
        tw = good.tower
        self.tower = tw
        self.p = good.base.size
        self.Z = vanishing_poly(tw, good.layout.points)
        D = self.Z.degree
        g1 = reduce_mod_vanishing(good.g ** (self.p - 1), self.Z)
        R = [Poly.const(tw, 1)]
        for _ in range(ell):
            R.append(reduce_mod_vanishing(R[-1].frobenius_power(self.p) * g1, self.Z))
        self.R = np.zeros((ell + 1, D), dtype=np.int64)
        for i, Ri in enumerate(R):
            self.R[i, : len(Ri.coeffs)] = Ri.coeffs
        eta = np.array(eta, dtype=np.int64)
        self.eta_pows = np.stack([tw.vpow(eta, self.p ** i) for i in range(ell + 1)], axis=1)

    def h_arrays(self, lin: Sequence[int]) -> np.ndarray:
        """Unnormalized reduced h_a coefficient rows, shape (t, deg Z)."""
        tw = self.tower
        out = np.zeros((self.eta_pows.shape[0], self.R.shape[1]), dtype=np.int64)
        for i, c in enumerate(lin):
            if c:
                scal = tw.vscale(int(c), self.eta_pows[:, i])
                out = tw.vadd(out, tw.vmul(scal[:, None], self.R[i][None, :]))
        return out

    def max_degree(self, lin: Sequence[int]) -> int:
        h = self.h_arrays(lin)
        nz = np.flatnonzero(h.any(axis=0))
        return int(nz[-1]) if len(nz) else -1


def descent_polys(good: GoodPolynomial, V: SubspaceChoice, eta: Sequence[int]) -> list[Poly]:
    """h_a = c0^{-1} * (L_V(g eta_a) / g mod Z_E), with c0 the linear coefficient of L_V.

    Division comes before reduction: reducing first would destroy the values
    on the host rack, where g vanishes.
    """
    tw = good.tower
    p = good.base.size
    lin = linearized_coeffs(V)
    Z = vanishing_poly(tw, good.layout.points)
    c0_inv = tw.inv(lin[0])
    out = []
    for e in eta:
        raw = exact_div(compose_linearized(lin, p, good.g.scale(int(e))), good.g)
        out.append(reduce_mod_vanishing(raw, Z).scale(c0_inv))
    return out


def _candidate_stream(base: Subfield, ell: int, policy, seed: int, max_exhaustive: int,
                      samples: int) -> Iterator[tuple[str, tuple[int, ...]]]:
    if isinstance(policy, SubspaceChoice):
        yield "explicit", tuple(policy.basis_vectors)
        return
    if not isinstance(policy, str):
        yield "explicit", tuple(int(b) for b in policy)
        return
    if policy not in ("auto", "subfield", "search"):
        raise SchemeError(f"unknown subspace policy {policy!r}")
    t = base.degree
    if policy in ("auto", "subfield"):
        if t % ell == 0:
            yield "subfield", subfield_subspace(base, ell)
        elif policy == "subfield":
            raise SchemeError(f"ell={ell} does not divide t={t}; no intermediate field")
        if policy == "subfield":
            return
    if subspace_count(t, ell, base.size) <= max_exhaustive:
        for vecs in iter_subspaces(base, ell):
            yield "exhaustive", vecs
    else:
        for vecs in random_subspaces(base, ell, samples, seed):
            yield "random", vecs


@dataclass(frozen=True)
class SearchOutcome:
    basis: tuple[int, ...]
    source: str
    degree: int
    tried: int


def search_subspace(good: GoodPolynomial, ell: int, k: int, d: int, eta: Sequence[int],
                    policy="auto", seed: int = 42, max_exhaustive: int = 100_000,
                    samples: int = 2000) -> SearchOutcome:
    """First subspace (in candidate order) whose reduced h_a meet u(d+1)-k-1."""
    bound = good.layout.u * (d + 1) - k - 1
    kernel = DescentKernel(good, eta, ell)
    best = None
    tried = 0
    for source, vecs in _candidate_stream(good.base, ell, policy, seed, max_exhaustive, samples):
        V = SubspaceChoice(good.base, vecs)
        if V.ell != ell:
            raise SchemeError(f"explicit subspace has dimension {V.ell}, expected {ell}")
        tried += 1
        deg = kernel.max_degree(linearized_coeffs(V))
        if best is None or deg < best[0]:
            best = (deg, vecs)
        if deg <= bound:
            return SearchOutcome(vecs, source, deg, tried)
    raise SubspaceSearchError(
        f"no admissible subspace: best max degree {best[0] if best else None} "
        f"exceeds u(d+1)-k-1 = {bound} after {tried} candidates",
        best[0] if best else None, best[1] if best else None, bound, tried)


def degree_descent_scheme(good: GoodPolynomial, k: int, ell: int | None = None,
                          subspace="auto", host_node: int = 0, eta: Sequence[int] | None = None,
                          d: int | None = None, seed: int = 42, max_exhaustive: int = 100_000,
                          samples: int = 2000) -> RepairScheme:
    """Rack repair scheme from a good polynomial by degree descent."""
    tw = good.tower
    base = good.base
    lay = good.layout
    d = lay.r - 1 if d is None else d
    eta = tuple(power_basis(tw, base)) if eta is None else tuple(int(e) for e in eta)
    if isinstance(subspace, SubspaceChoice):
        ell = subspace.ell
    if ell is None:
        raise SchemeError("ell is required unless an explicit subspace is given")
    if not 1 <= ell < base.degree:
        raise SchemeError(f"need 1 <= ell < t (ell={ell}, t={base.degree})")
    found = search_subspace(good, ell, k, d, eta, subspace, seed, max_exhaustive, samples)
    V = SubspaceChoice(base, found.basis)
    hs = descent_polys(good, V, eta)
    basis = dual_basis(tw, base, [h(lay.grid[good.host_rack][host_node]) for h in hs])
    scheme = RepairScheme(
        layout=lay, k=k, host=(good.host_rack, host_node), d=d, basis=basis,
        h_polys=tuple(hs), family=good.family,
        meta={"ell": ell, "subspace_basis": [tw.format_element(b) for b in V.basis_vectors],
              "subspace_source": found.source, "candidates_tried": found.tried,
              "linearized_support": [i for i, c in enumerate(linearized_coeffs(V)) if c]},
    )
    report = validate_scheme(scheme)
    if not report.passed:
        raise SchemeError("constructed scheme failed validation: " + "; ".join(report.failures))
    return scheme


# ---------------------------------------------------------------------------
# one-node-per-rack schemes
# ---------------------------------------------------------------------------

def gw_scheme(tower: FieldTower, base: Subfield | int, k: int, j: int,
              eta: Sequence[int] | None = None) -> RepairScheme:
    """Full-length trace repair: h_a(x) = Tr(eta_a (x - alpha_j)) / (x - alpha_j)."""
    base = base if isinstance(base, Subfield) else Subfield(tower, base)
    p, q = base.size, tower.q
    if k * p > q * (p - 1):
        raise HypothesisError([f"k <= q(1 - 1/p) fails (k={k}, q={q}, p={p})"])
    pts = tower.power_order()
    layout = RackLayout.standard(tower, pts)
    if not 0 <= j < q:
        raise SchemeError(f"failed node {j} outside [0, {q})")
    eta = tuple(power_basis(tower, base)) if eta is None else tuple(int(e) for e in eta)
    shift = Poly(tower, [tower.neg(pts[j]), 1])
    trace_lin = [1] * base.degree
    hs = tuple(exact_div(compose_linearized(trace_lin, p, shift.scale(e)), shift) for e in eta)
    scheme = RepairScheme(layout, k, (j, 0), q - 1, dual_basis(tower, base, eta), hs,
                          family="gw", meta={})
    report = validate_scheme(scheme)
    if not report.passed:
        raise SchemeError("; ".join(report.failures))
    return scheme


def two_coset_scheme(s_half: int, n: int, k: int, j: int,
                     tower: FieldTower | None = None) -> RepairScheme:
    """Degree-one scheme over F_{2^{2s}} with base F_{2^s}.

    Points: the first n/2 elements of F_{2^s}^* and their multiples by a fixed
    primitive element beta.  h_1 = 1 and h_2 = beta^{-1} x or x depending on
    which half the failed point lies in.
    """
    tower = tower or make_field(2, 2 * s_half)
    if tower.p0 != 2 or tower.T != 2 * s_half:
        raise SchemeError("two-coset scheme lives in F_{2^{2s}}")
    bad = []
    if n < 2 or n % 2:
        bad.append(f"n must be even and >= 2 (got {n})")
    if n > 2 * (2 ** s_half - 1):
        bad.append(f"n <= 2(2^s - 1) = {2 * (2 ** s_half - 1)} fails (n={n})")
    if not 1 <= k <= n - 2:
        bad.append(f"1 <= k <= n - 2 fails (k={k}, n={n})")
    if bad:
        raise HypothesisError(bad)
    base = Subfield(tower, s_half)
    beta = tower.primitive
    sub = base.elements()[1: n // 2 + 1]
    pts = list(sub) + [tower.mul(beta, c) for c in sub]
    if not 0 <= j < n:
        raise SchemeError(f"failed node {j} outside [0, {n})")
    layout = RackLayout.standard(tower, pts)
    x = Poly.x(tower)
    h2 = x.scale(tower.inv(beta)) if j < n // 2 else x
    hs = (Poly.const(tower, 1), h2)
    eta = [h(pts[j]) for h in hs]
    scheme = RepairScheme(layout, k, (j, 0), n - 1, dual_basis(tower, base, eta), hs,
                          family="two-coset", meta={})
    report = validate_scheme(scheme)
    if not report.passed:
        raise SchemeError("; ".join(report.failures))
    return scheme


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def family_field(params: FamilyParams) -> FieldTower:
    return make_field(params.p0, params.s_base * params.t)


def good_polynomial_for(params: FamilyParams, tower: FieldTower | None = None) -> GoodPolynomial:
    tower = tower or family_field(params)
    base = Subfield(tower, params.s_base)
    if params.family == "additive":
        return additive_good_poly(tower, base, params.host_rack)
    if params.family == "multiplicative":
        return multiplicative_good_poly(tower, base, params.a, params.host_rack)
    if params.family == "combined":
        return combined_good_poly(tower, base, params.a, params.v, params.host_rack)
    raise SchemeError(f"family {params.family!r} has no good polynomial")


def build_family_scheme(params: FamilyParams, subspace="auto", seed: int = 42,
                        tower: FieldTower | None = None) -> RepairScheme:
    """Validate the hypotheses of ``params.family`` and construct its scheme."""
    check = require_family_params(params)
    if params.family == "gw":
        tower = tower or family_field(params)
        return gw_scheme(tower, params.s_base, params.k, params.host_rack)
    if params.family == "two-coset":
        return two_coset_scheme(params.s_base, params.n, params.k, params.host_rack, tower)
    good = good_polynomial_for(params, tower)
    if good.layout.r != check.derived["r"] or good.layout.u != check.derived["u"]:
        raise SchemeError("partition does not match the derived rack shape")
    return degree_descent_scheme(good, params.k, params.ell, subspace, params.host_node,
                                 d=check.derived["d"], seed=seed)


def largest_k(params: FamilyParams) -> int | None:
    """Largest k admissible for the family's shape at fixed (p, t, ell, a, v).

    Used by sweeps that leave k unspecified; None when no k works.
    """
    for k in range(params.q, 0, -1):
        if validate_family_params(replace(params, k=k)).ok:
            return k
    return None


__all__ = [name for name in dir() if not name.startswith("_") and name not in {
    "annotations", "itertools", "np", "dataclass", "field", "replace", "Fraction",
    "Iterator", "Sequence"}]
