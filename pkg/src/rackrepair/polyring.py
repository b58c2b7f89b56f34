"""Dense univariate polynomials over a :class:`FieldTower`.

Coefficients are held low-degree-first in an immutable int64 array of tower
elements.  Besides ring arithmetic this module provides the pieces the repair
constructions are made of: vanishing polynomials of point sets and reduction
modulo them, subspace (linearized) polynomials, exact division and Lagrange
interpolation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .gf_tower import FieldError, FieldTower, Subfield, SubfieldSpan


class PolyError(ValueError):
    pass


def _as_array(values) -> np.ndarray:
    arr = np.array(values, dtype=np.int64).reshape(-1)
    nz = np.flatnonzero(arr)
    arr = arr[: nz[-1] + 1] if len(nz) else arr[:0]
    arr.setflags(write=False)
    return arr


class Poly:
    """Polynomial over ``tower``; the zero polynomial has degree -1."""

    __slots__ = ("tower", "coeffs")

    def __init__(self, tower: FieldTower, coeffs: Iterable[int] = ()) -> None:
        self.tower = tower
        self.coeffs = _as_array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs)

    # constructors ---------------------------------------------------------

    @classmethod
    def const(cls, tower: FieldTower, c: int) -> "Poly":
        return cls(tower, [c])

    @classmethod
    def x(cls, tower: FieldTower) -> "Poly":
        return cls(tower, [0, 1])

    @classmethod
    def monomial(cls, tower: FieldTower, n: int, c: int = 1) -> "Poly":
        arr = np.zeros(n + 1, dtype=np.int64)
        arr[n] = c
        return cls(tower, arr)

    @classmethod
    def from_terms(cls, tower: FieldTower, terms: dict[int, int]) -> "Poly":
        if not terms:
            return cls(tower)
        arr = np.zeros(max(terms) + 1, dtype=np.int64)
        for e, c in terms.items():
            arr[e] = tower.add(int(arr[e]), c)
        return cls(tower, arr)

    # basic properties -----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    @property
    def lead(self) -> int:
        return int(self.coeffs[-1]) if len(self.coeffs) else 0

    def coeff(self, i: int) -> int:
        return int(self.coeffs[i]) if 0 <= i < len(self.coeffs) else 0

    def is_monic(self) -> bool:
        return self.lead == 1

    def support(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.coeffs)]

    def _same(self, other: "Poly") -> None:
        if other.tower != self.tower:
            raise FieldError("polynomials over different towers")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._same(other)
            return other
        return Poly.const(self.tower, self.tower.check(int(other)))

    # arithmetic -----------------------------------------------------------

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = a.copy()
        out[: len(b)] = self.tower.vadd(a[: len(b)], b)
        return Poly(self.tower, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.tower, self.tower.vneg(self.coeffs))

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def scale(self, c: int) -> "Poly":
        return Poly(self.tower, self.tower.vscale(int(c), self.coeffs))

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(self.tower.check(int(other)))
        self._same(other)
        a, b = self.coeffs, other.coeffs
        if len(a) == 0 or len(b) == 0:
            return Poly(self.tower)
        if len(a) < len(b):
            a, b = b, a
        tw = self.tower
        out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
        for i, c in enumerate(b):
            c = int(c)
            if c:
                out[i: i + len(a)] = tw.vadd(out[i: i + len(a)], tw.vscale(c, a))
        return Poly(tw, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise PolyError("negative exponent")
        result, base = Poly.const(self.tower, 1), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def frobenius_power(self, P: int) -> "Poly":
        """self^P for P a power of the characteristic: sum a_k^P x^{kP}."""
        p0, n = self.tower.p0, P
        while n % p0 == 0 and n > 1:
            n //= p0
        if n != 1:
            raise PolyError(f"{P} is not a power of the characteristic {p0}")
        if self.is_zero():
            return self
        out = np.zeros(self.degree * P + 1, dtype=np.int64)
        out[::P] = self.tower.vpow(self.coeffs, P)
        return Poly(self.tower, out)

    def compose(self, inner: "Poly") -> "Poly":
        """self(inner(x)) by Horner's rule."""
        self._same(inner)
        acc = Poly(self.tower)
        for c in self.coeffs[::-1]:
            acc = acc * inner + int(c)
        return acc

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        self._same(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        tw = self.tower
        dg = other.degree
        if self.degree < dg:
            return Poly(tw), self
        r = self.coeffs.copy()
        g = other.coeffs
        inv_lead = tw.inv(other.lead)
        monic = inv_lead == 1
        quot = np.zeros(self.degree - dg + 1, dtype=np.int64)
        for k in range(self.degree - dg, -1, -1):
            c = int(r[k + dg])
            if c == 0:
                continue
            if not monic:
                c = tw.mul(c, inv_lead)
            quot[k] = c
            r[k: k + dg + 1] = tw.vsub(r[k: k + dg + 1], tw.vscale(c, g))
        return Poly(tw, quot), Poly(tw, r[:dg])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    # evaluation -----------------------------------------------------------

    def __call__(self, x: int) -> int:
        tw = self.tower
        acc = 0
        for c in self.coeffs[::-1]:
            acc = tw.add(tw.mul(acc, x), int(c))
        return acc

    def eval_many(self, xs) -> np.ndarray:
        """Horner's rule vectorised over an array of points."""
        tw = self.tower
        xs = np.asarray(xs, dtype=np.int64)
        acc = np.zeros_like(xs)
        for c in self.coeffs[::-1]:
            acc = tw.vmul(acc, xs)
            if c:
                acc = tw.vadd(acc, np.full_like(xs, int(c)))
        return acc

    # comparisons / display --------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.tower == other.tower and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.tower.q, self.coeffs.tobytes()))

    def __repr__(self) -> str:
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for i in np.flatnonzero(self.coeffs)[::-1]:
            c = int(self.coeffs[i])
            cs = "" if c == 1 and i else f"[{self.tower.format_element(c)}]"
            xs = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(cs + xs)
        return "Poly(" + " + ".join(terms) + ")"

    def to_text(self) -> str:
        """Flat comma-separated residues, T per coefficient, low degree first."""
        return ",".join(self.tower.format_element(int(c)) for c in self.coeffs)

    @classmethod
    def from_text(cls, tower: FieldTower, text: str) -> "Poly":
        text = text.strip()
        if not text:
            return cls(tower)
        vals = [int(v) for v in text.split(",")]
        T = tower.T
        if len(vals) % T:
            raise PolyError(f"residue count {len(vals)} is not a multiple of T={T}")
        return cls(tower, [tower.from_coeffs(vals[i: i + T]) for i in range(0, len(vals), T)])


def evaluate(f: Poly, x: int) -> int:
    return f(int(x))


def vanishing_poly(tower: FieldTower, points: Sequence[int]) -> Poly:
    """Monic product of (x - a) over the given distinct points."""
    points = [int(a) for a in points]
    if len(set(points)) != len(points):
        raise PolyError("vanishing polynomial needs distinct points")
    out = np.zeros(len(points) + 1, dtype=np.int64)
    out[0] = 1
    size = 1
    for a in points:
        # multiply the current polynomial (length ``size``) by (x - a)
        shifted = out[:size].copy()
        out[1: size + 1] = shifted
        out[0] = 0
        out[:size] = tower.vsub(out[:size], tower.vscale(a, shifted))
        size += 1
    return Poly(tower, out)


def _sparse_fold(f: Poly, Z: Poly) -> Poly:
    # x^D = -(lower part of Z), folded repeatedly onto the high part of f
    tw = f.tower
    D = Z.degree
    tail = [(int(i), tw.neg(int(Z.coeffs[i]))) for i in np.flatnonzero(Z.coeffs[:D])]
    coeffs = f.coeffs.copy()
    while len(coeffs) > D:
        low = coeffs[:D].copy()
        high = coeffs[D:]
        size = max(D, max((i for i, _ in tail), default=0) + len(high))
        nxt = np.zeros(size, dtype=np.int64)
        nxt[:D] = low
        for i, c in tail:
            seg = nxt[i: i + len(high)]
            nxt[i: i + len(high)] = tw.vadd(seg, tw.vscale(c, high))
        nz = np.flatnonzero(nxt)
        coeffs = nxt[: nz[-1] + 1] if len(nz) else nxt[:0]
    return Poly(tw, coeffs)


def reduce_mod_vanishing(f: Poly, Z: Poly) -> Poly:
    """Remainder of f modulo the monic polynomial Z.

    When Z is a vanishing polynomial the result agrees with f on every root
    of Z and has degree below deg Z: this is the low-degree representative of
    f as a function on the point set.
    """
    f._same(Z)
    if Z.is_zero() or not Z.is_monic():
        raise PolyError("reduction modulus must be monic")
    if f.degree < Z.degree:
        return f
    D = Z.degree
    nz = np.flatnonzero(Z.coeffs[:D])
    if len(nz) and D - int(nz[-1]) >= 2 and len(nz) <= 4:
        return _sparse_fold(f, Z)
    return f.divmod(Z)[1]


def powmod(f: Poly, e: int, Z: Poly) -> Poly:
    result = Poly.const(f.tower, 1)
    base = reduce_mod_vanishing(f, Z)
    while e:
        if e & 1:
            result = reduce_mod_vanishing(result * base, Z)
        e >>= 1
        if e:
            base = reduce_mod_vanishing(base * base, Z)
    return result


def exact_div(f: Poly, g: Poly) -> Poly:
    """Quotient f / g; raises if g does not divide f."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    quot, rem = f.divmod(g)
    if not rem.is_zero():
        raise PolyError(f"division is not exact (remainder of degree {rem.degree})")
    return quot


def interpolate(tower: FieldTower, points: Sequence[int], values: Sequence[int]) -> Poly:
    """Lagrange interpolation: the unique polynomial of degree < len(points)."""
    points = [int(a) for a in points]
    values = [int(v) for v in values]
    if len(points) != len(values):
        raise PolyError("points and values differ in length")
    if len(set(points)) != len(points):
        raise PolyError("interpolation points must be distinct")
    n = len(points)
    if n == 0 or not any(values):
        return Poly(tower)
    Z = vanishing_poly(tower, points).coeffs
    out = np.zeros(n, dtype=np.int64)
    for a, v in zip(points, values):
        if v == 0:
            continue
        # synthetic division Z / (x - a)
        quot = [0] * n
        carry = 0
        for k in range(n, 0, -1):
            carry = tower.add(int(Z[k]), tower.mul(carry, a))
            quot[k - 1] = carry
        denom = 0
        for c in reversed(quot):
            denom = tower.add(tower.mul(denom, a), c)
        w = tower.div(v, denom)
        out = tower.vadd(out, tower.vscale(w, np.array(quot, dtype=np.int64)))
    return Poly(tower, out)


# ---------------------------------------------------------------------------
# subspaces and linearized polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubspaceChoice:
    """An F_p-subspace V of F_q given by ``ell`` independent vectors."""

    base: Subfield
    basis_vectors: tuple[int, ...]

    def __post_init__(self) -> None:
        tw = self.base.tower
        span = SubfieldSpan(tw, self.base, 1)
        for b in self.basis_vectors:
            new, _ = span.add([int(b)])
            if not new:
                raise PolyError("subspace basis vectors are linearly dependent")
        if self.ell > self.base.degree:
            raise PolyError("subspace dimension exceeds [F_q : F_p]")

    @property
    def ell(self) -> int:
        return len(self.basis_vectors)

    def elements(self) -> list[int]:
        tw = self.base.tower
        out = []
        for combo in itertools.product(self.base.elements(), repeat=self.ell):
            out.append(tw.sum(tw.mul(c, b) for c, b in zip(combo, self.basis_vectors)))
        return out


def linearized_coeffs(V: SubspaceChoice) -> list[int]:
    """Coefficients c_0..c_ell with L_V(y) = sum_i c_i y^{p^i}.

    Built one basis vector at a time:
    L_{V + <b>}(y) = L_V(y)^p - L_V(b)^{p-1} L_V(y).
    """
    tw = V.base.tower
    p = V.base.size
    lin = [1]
    for b in V.basis_vectors:
        # evaluate the current linearized polynomial at b
        val = tw.sum(tw.mul(c, tw.pow(int(b), p ** i)) for i, c in enumerate(lin))
        factor = tw.pow(val, p - 1)
        powered = [0] + [tw.pow(c, p) for c in lin]
        scaled = [tw.mul(factor, c) for c in lin] + [0]
        lin = [tw.sub(a, s) for a, s in zip(powered, scaled)]
    return lin


def linearized_dense(tower: FieldTower, lin: Sequence[int], p: int) -> Poly:
    return Poly.from_terms(tower, {p ** i: int(c) for i, c in enumerate(lin) if c})


def linearized_from_subspace(V: SubspaceChoice) -> Poly:
    """L_V(x) = product of (x - beta) over beta in V, as a dense polynomial."""
    return linearized_dense(V.base.tower, linearized_coeffs(V), V.base.size)


def compose_linearized(lin: Sequence[int], p: int, inner: Poly) -> Poly:
    """L(inner(x)) for L(y) = sum_i lin[i] y^{p^i}, using Frobenius powers."""
    acc = Poly(inner.tower)
    for i, c in enumerate(lin):
        if c:
            acc = acc + inner.frobenius_power(p ** i).scale(int(c))
    return acc
