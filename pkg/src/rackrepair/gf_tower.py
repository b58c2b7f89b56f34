"""Finite field F_{p0^T} together with its subfield lattice.

Elements are plain Python integers: the element with polynomial-basis
coefficients ``(c0, ..., c_{T-1})`` is stored as ``sum(c_i * p0**i)``.  All
arithmetic runs through exp/log tables built once per tower (Zech logarithms
give addition in odd characteristic), and every scalar operation has a numpy
counterpart prefixed with ``v`` that works element-wise on integer arrays.

A subfield F_{p0^s} (s | T) is addressed by :class:`Subfield`; its elements
are ordinary elements of the tower that are fixed by x -> x^{p0^s}.
"""

from __future__ import annotations

import itertools
from math import gcd
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class FieldError(ValueError):
    """Invalid field description, subfield, or element."""


# ---------------------------------------------------------------------------
# F_{p0}[x] helpers (coefficient lists, low degree first)
# ---------------------------------------------------------------------------

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], f: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _pmulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pmod(out, f, p)


def _ppowmod(base: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def is_irreducible(modulus: Sequence[int], p0: int) -> bool:
    """Rabin's test for a monic polynomial over F_{p0} (coefficients low first).

    f of degree T is irreducible iff x^{p0^T} = x mod f and
    gcd(f, x^{p0^{T/r}} - x) = 1 for every prime r dividing T.
    """
    f = _trim([c % p0 for c in modulus])
    T = len(f) - 1
    if T < 1:
        return False
    if T == 1:
        return True
    x = [0, 1]

    def frob_power(k: int) -> list[int]:
        y = x
        for _ in range(k):
            y = _ppowmod(y, p0, f, p0)
        return y

    if _psub(frob_power(T), x, p0):
        return False
    for r in _prime_factors(T):
        g = _pgcd(f, _psub(frob_power(T // r), x, p0), p0)
        if len(g) > 1:
            return False
    return True


def smallest_irreducible(p0: int, T: int) -> tuple[int, ...]:
    """Monic irreducible of degree T whose coefficient vector, read as the
    base-p0 integer sum(c_i * p0**i), is smallest."""
    for value in range(p0 ** T):
        low = [(value // p0 ** i) % p0 for i in range(T)]
        cand = low + [1]
        if (T == 1 or low[0] != 0) and is_irreducible(cand, p0):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {T} over F_{p0}")  # unreachable


# ---------------------------------------------------------------------------
# The tower
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldTower:
    """The field F_{p0^T} built on ``modulus``.

    Use :func:`make_field` rather than calling the constructor directly; it
    checks primality and irreducibility and picks the default modulus.
    """

    p0: int
    T: int
    modulus: tuple[int, ...]
    q: int = field(init=False, compare=False)
    primitive: int = field(init=False, compare=False, repr=False)
    _exp: list = field(init=False, compare=False, repr=False)
    _log: list = field(init=False, compare=False, repr=False)
    _zech: list = field(init=False, compare=False, repr=False)
    _np_exp: np.ndarray = field(init=False, compare=False, repr=False)
    _np_log: np.ndarray = field(init=False, compare=False, repr=False)
    _np_zech: np.ndarray = field(init=False, compare=False, repr=False)
    _traces: dict = field(init=False, compare=False, repr=False)
    _coords: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        setattr_ = object.__setattr__
        q = self.p0 ** self.T
        setattr_(self, "q", q)
        gamma, exp = self._find_primitive()
        log = [0] * q
        for i, x in enumerate(exp):
            log[x] = i
        exp2 = exp + exp
        setattr_(self, "primitive", gamma)
        setattr_(self, "_exp", exp2)
        setattr_(self, "_log", log)
        zech = [-1] * max(q - 1, 1)
        if self.p0 != 2:
            p0 = self.p0
            for n in range(q - 1):
                y = exp[n]
                one_plus = y - y % p0 + (y % p0 + 1) % p0
                zech[n] = log[one_plus] if one_plus else -1
        setattr_(self, "_zech", zech)
        setattr_(self, "_np_exp", np.array(exp2, dtype=np.int64))
        setattr_(self, "_np_log", np.array(log, dtype=np.int64))
        setattr_(self, "_np_zech", np.array(zech, dtype=np.int64))
        setattr_(self, "_traces", {})
        setattr_(self, "_coords", {})
        for s in self.subfield_degrees():
            self._traces[s] = self._build_trace_table(s)
            self._coords[s] = self._build_coord_table(s)

    # -- construction helpers -------------------------------------------

    def _raw_mul(self, a: int, b: int) -> int:
        p0, f = self.p0, list(self.modulus)
        prod = _pmulmod(self._digits(a), self._digits(b), f, p0)
        return sum(c * p0 ** i for i, c in enumerate(prod))

    def _digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.T):
            x, r = divmod(x, self.p0)
            out.append(r)
        return _trim(out)

    def _find_primitive(self) -> tuple[int, list[int]]:
        q = self.p0 ** self.T
        if q == 2:
            return 1, [1]
        for cand in range(2 if self.T > 1 else 1, q):
            powers, x = [1], cand
            while x != 1:
                powers.append(x)
                x = self._raw_mul(x, cand)
            if len(powers) == q - 1:
                return cand, powers
        raise FieldError("no primitive element found")  # unreachable for a field

    def _build_trace_table(self, s: int) -> np.ndarray:
        t = self.T // s
        out = np.zeros(self.q, dtype=np.int64)
        xs = np.arange(self.q, dtype=np.int64)
        for i in range(t):
            out = self.vadd(out, self.vpow(xs, self.p0 ** (s * i)))
        return out

    def _build_coord_table(self, s: int) -> np.ndarray:
        # coordinates in the power basis 1, xi, ..., xi^{t-1} over F_{p0^s}
        t = self.T // s
        sub = np.array(self.subfield_elements(s), dtype=np.int64)
        vals = np.zeros(1, dtype=np.int64)
        coords = np.zeros((1, 0), dtype=np.int64)
        xi = self.generator
        for i in range(t):
            scaled = self.vmul(sub, np.full_like(sub, self.pow(xi, i)))
            vals = self.vadd(np.repeat(vals, len(sub)), np.tile(scaled, len(vals)))
            coords = np.hstack([np.repeat(coords, len(sub), axis=0),
                                np.tile(sub, len(coords))[:, None]])
        table = np.full((self.q, t), -1, dtype=np.int64)
        table[vals] = coords
        if (table < 0).any():
            raise FieldError("power basis does not span the field")  # unreachable
        return table

    # -- basic facts ----------------------------------------------------

    @property
    def generator(self) -> int:
        """The canonical root xi of the modulus."""
        if self.T == 1:
            return (-self.modulus[0]) % self.p0
        return self.p0

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def subfield_degrees(self) -> list[int]:
        return [s for s in range(1, self.T + 1) if self.T % s == 0]

    def subfield(self, s: int) -> "Subfield":
        return Subfield(self, s)

    def multiplicative_order(self, x: int) -> int:
        if x == 0:
            raise FieldError("zero has no multiplicative order")
        n = self.q - 1
        k = self._log[x]
        return n // gcd(n, k)

    def power_order(self) -> list[int]:
        """All elements, 0 first, then gamma^0, gamma^1, ... for the primitive gamma."""
        return [0] + self._exp[: self.q - 1]

    def subfield_elements(self, s: int) -> list[int]:
        """Elements of F_{p0^s} in generator-power order (0 first)."""
        self._check_degree(s)
        step = (self.q - 1) // (self.p0 ** s - 1)
        return [0] + [self._exp[i * step] for i in range(self.p0 ** s - 1)]

    def _check_degree(self, s: int) -> None:
        if s < 1 or self.T % s:
            raise FieldError(f"subfield degree {s} does not divide {self.T}")

    def check(self, x: int) -> int:
        x = int(x)
        if not 0 <= x < self.q:
            raise FieldError(f"{x} is not an element of F_{self.q}")
        return x

    # -- scalar arithmetic ----------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p0 == 2:
            return a ^ b
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % (self.q - 1)]
        return 0 if z < 0 else self._exp[la + z]

    def neg(self, a: int) -> int:
        if self.p0 == 2 or a == 0:
            return a
        return self._exp[self._log[a] + (self.q - 1) // 2]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if e == 0:
            return 1
        if a == 0:
            return 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def frobenius(self, a: int, e: int = 1) -> int:
        """a^{p0^e}."""
        return self.pow(a, self.p0 ** (e % self.T))

    def sum(self, items: Iterable[int]) -> int:
        acc = 0
        for x in items:
            acc = self.add(acc, x)
        return acc

    def prod(self, items: Iterable[int]) -> int:
        acc = 1
        for x in items:
            acc = self.mul(acc, x)
        return acc

    def log(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("log of zero")
        return self._log[a]

    def exp(self, n: int) -> int:
        return self._exp[n % (self.q - 1)]

    # -- vectorised arithmetic ------------------------------------------

    def vadd(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p0 == 2:
            return a ^ b
        a, b = np.broadcast_arrays(a, b)
        la = self._np_log[a]
        z = self._np_zech[(self._np_log[b] - la) % (self.q - 1)]
        out = np.where(z < 0, 0, self._np_exp[la + np.maximum(z, 0)])
        out = np.where(a == 0, b, out)
        return np.where(b == 0, a, out)

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.p0 == 2:
            return a
        return np.where(a == 0, 0, self._np_exp[self._np_log[a] + (self.q - 1) // 2])

    def vsub(self, a, b) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._np_exp[self._np_log[a] + self._np_log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vscale(self, c: int, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if c == 0:
            return np.zeros_like(a)
        if c == 1:
            return a.copy()
        out = self._np_exp[self._np_log[a] + self._log[c]]
        return np.where(a == 0, 0, out)

    def vinv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if (a == 0).any():
            raise ZeroDivisionError("inverse of zero")
        return self._np_exp[(self.q - 1 - self._np_log[a]) % (self.q - 1)]

    def vpow(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        out = self._np_exp[(self._np_log[a] * (e % (self.q - 1))) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def vsum(self, a, axis: int = -1) -> np.ndarray:
        """Field sum along an axis."""
        a = np.asarray(a, dtype=np.int64)
        if self.p0 == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        a = np.moveaxis(a, axis, 0)
        acc = np.zeros(a.shape[1:], dtype=np.int64)
        for row in a:
            acc = self.vadd(acc, row)
        return acc

    def vdot(self, a, b) -> int:
        return int(self.vsum(self.vmul(a, b)))

    # -- coefficient form and traces ------------------------------------

    def coeffs(self, x: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.T):
            x, r = divmod(x, self.p0)
            out.append(r)
        return tuple(out)

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.T:
            raise FieldError(f"expected {self.T} coefficients, got {len(coeffs)}")
        if any(not 0 <= c < self.p0 for c in coeffs):
            raise FieldError(f"coefficients must lie in [0, {self.p0})")
        return sum(int(c) * self.p0 ** i for i, c in enumerate(coeffs))

    def trace(self, x: int, s: int) -> int:
        self._check_degree(s)
        return int(self._traces[s][x])

    def trace_array(self, s: int) -> np.ndarray:
        self._check_degree(s)
        return self._traces[s]

    def in_subfield(self, x: int, s: int) -> bool:
        self._check_degree(s)
        return self.pow(x, self.p0 ** s) == x

    def coords(self, x: int, s: int) -> tuple[int, ...]:
        """Coordinates of x over F_{p0^s} in the basis 1, xi, ..., xi^{t-1}."""
        self._check_degree(s)
        return tuple(int(c) for c in self._coords[s][x])

    def coord_array(self, s: int) -> np.ndarray:
        self._check_degree(s)
        return self._coords[s]

    def from_coords(self, coords: Sequence[int], s: int) -> int:
        xi = self.generator
        return self.sum(self.mul(int(c), self.pow(xi, i)) for i, c in enumerate(coords))

    # -- conveniences ---------------------------------------------------

    def element(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            return x
        return FieldElement(self, self.check(x))

    def __call__(self, x) -> "FieldElement":
        return self.element(x)

    def random(self, rng: np.random.Generator, size=None, nonzero: bool = False):
        low = 1 if nonzero else 0
        if size is None:
            return int(rng.integers(low, self.q))
        return rng.integers(low, self.q, size=size, dtype=np.int64)

    def describe(self) -> str:
        return f"{self.p0}^{self.T}/modulus=" + ",".join(str(c) for c in self.modulus)

    def format_element(self, x: int) -> str:
        return ",".join(str(c) for c in self.coeffs(x))

    def parse_element(self, text: str) -> int:
        return self.from_coeffs([int(c) for c in text.strip().split(",")])

    def __str__(self) -> str:
        return f"GF({self.p0}^{self.T})"


class FieldElement:
    """Operator-friendly view of a tower element; the library itself uses ints."""

    __slots__ = ("tower", "value")

    def __init__(self, tower: FieldTower, value: int) -> None:
        self.tower = tower
        self.value = value

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.tower != self.tower:
                raise FieldError("elements belong to different towers")
            return other.value
        return self.tower.check(other)

    def __add__(self, other):
        return FieldElement(self.tower, self.tower.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.tower, self.tower.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.tower, self.tower.sub(self._other(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.tower, self.tower.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.tower, self.tower.div(self.value, self._other(other)))

    def __neg__(self):
        return FieldElement(self.tower, self.tower.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.tower, self.tower.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.tower, self.tower.inv(self.value))

    def trace(self, base: "Subfield | int") -> "FieldElement":
        s = base.s if isinstance(base, Subfield) else base
        return FieldElement(self.tower, self.tower.trace(self.value, s))

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.tower.coeffs(self.value)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.tower == other.tower and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.tower.q, self.value))

    def __int__(self) -> int:
        return self.value

    __index__ = __int__

    def __repr__(self) -> str:
        return f"FieldElement({self.tower.format_element(self.value)})"


@dataclass(frozen=True)
class Subfield:
    """F_{p0^s} inside ``tower``; F_q has degree t = T/s over it."""

    tower: FieldTower
    s: int

    def __post_init__(self) -> None:
        self.tower._check_degree(self.s)

    @property
    def size(self) -> int:
        return self.tower.p0 ** self.s

    @property
    def degree(self) -> int:
        """t = [F_q : F_p]."""
        return self.tower.T // self.s

    def elements(self) -> list[int]:
        return self.tower.subfield_elements(self.s)

    def contains(self, x: int) -> bool:
        return self.tower.in_subfield(x, self.s)

    def __str__(self) -> str:
        return f"GF({self.tower.p0}^{self.s})"


@dataclass(frozen=True)
class TraceBasis:
    """An F_p-basis eta of F_q and its trace-dual basis theta."""

    base: Subfield
    eta: tuple[int, ...]
    theta: tuple[int, ...]


# ---------------------------------------------------------------------------
# Spec-level operations
# ---------------------------------------------------------------------------

def make_field(p0: int, T: int, modulus: Sequence[int] | None = None) -> FieldTower:
    """Build F_{p0^T}.

    Without ``modulus`` the smallest monic irreducible of degree T is used, so
    that every downstream output is reproducible.
    """
    if not is_prime(p0):
        raise FieldError(f"p0={p0} is not prime")
    if T < 1:
        raise FieldError(f"extension degree must be >= 1, got {T}")
    if modulus is None:
        modulus = smallest_irreducible(p0, T)
    modulus = tuple(int(c) for c in modulus)
    if len(modulus) != T + 1 or modulus[-1] != 1:
        raise FieldError(f"modulus must be monic of degree {T}")
    if any(not 0 <= c < p0 for c in modulus):
        raise FieldError(f"modulus coefficients must lie in [0, {p0})")
    if not is_irreducible(modulus, p0):
        raise FieldError(f"modulus {modulus} is reducible over F_{p0}")
    return FieldTower(p0, T, modulus)


def parse_field(text: str) -> FieldTower:
    """Inverse of :meth:`FieldTower.describe`."""
    try:
        head, mod = text.strip().split("/modulus=")
        p0, T = (int(v) for v in head.split("^"))
        modulus = [int(c) for c in mod.split(",")]
    except ValueError as exc:
        raise FieldError(f"bad field description {text!r}") from exc
    return make_field(p0, T, modulus)


def trace_to(tower: FieldTower, x: int, base: Subfield | int) -> int:
    """Relative trace Tr_{F_q/F_p}(x) = x + x^p + ... + x^{p^{t-1}}."""
    s = base.s if isinstance(base, Subfield) else base
    return tower.trace(int(x), s)


def _as_subfield(tower: FieldTower, base: Subfield | int) -> Subfield:
    return base if isinstance(base, Subfield) else Subfield(tower, base)


def _solve_square(tower: FieldTower, M: list[list[int]]) -> list[list[int]] | None:
    """Inverse of a square matrix over the tower, or None if singular."""
    n = len(M)
    A = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        inv = tower.inv(A[col][col])
        A[col] = [tower.mul(inv, v) for v in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                c = A[r][col]
                A[r] = [tower.sub(v, tower.mul(c, w)) for v, w in zip(A[r], A[col])]
    return [row[n:] for row in A]


def dual_basis(tower: FieldTower, base: Subfield | int, eta: Sequence[int]) -> TraceBasis:
    """Trace-dual basis of ``eta`` over ``base``.

    Solves the t x t system given by the trace form M[i][j] = Tr(eta_i eta_j);
    theta_j = sum_k (M^{-1})[k][j] eta_k.
    """
    sub = _as_subfield(tower, base)
    eta = tuple(int(e) for e in eta)
    t = sub.degree
    if len(eta) != t:
        raise FieldError(f"a basis over {sub} needs {t} elements, got {len(eta)}")
    M = [[tower.trace(tower.mul(a, b), sub.s) for b in eta] for a in eta]
    Minv = _solve_square(tower, M)
    if Minv is None:
        raise FieldError("eta is not a basis over the base field")
    theta = tuple(
        tower.sum(tower.mul(Minv[k][j], eta[k]) for k in range(t)) for j in range(t)
    )
    return TraceBasis(sub, eta, theta)


def element_from_traces(tower: FieldTower, traces: Sequence[int], basis: TraceBasis) -> int:
    """Rebuild alpha from its traces Tr(alpha * eta_i): alpha = sum traces_i theta_i."""
    if len(traces) != len(basis.theta):
        raise FieldError(f"expected {len(basis.theta)} traces, got {len(traces)}")
    for x in traces:
        if not basis.base.contains(int(x)):
            raise FieldError(f"trace value {x} is outside {basis.base}")
    return tower.sum(tower.mul(int(x), th) for x, th in zip(traces, basis.theta))


class SubfieldSpan:
    """Incremental F_p-span of vectors over F_q.

    Each F_q entry is expanded into its t coordinates over F_p; vectors are
    kept in echelon form together with their expression in terms of the
    accepted (original, unexpanded) basis vectors, so membership queries
    return the combination coefficients directly.
    """

    def __init__(self, tower: FieldTower, base: Subfield | int, length: int) -> None:
        self.tower = tower
        self.base = _as_subfield(tower, base)
        self.length = length
        self.basis: list[np.ndarray] = []
        self._rows: list[np.ndarray] = []      # echelon rows over F_p
        self._pivots: list[int] = []
        self._combos: list[np.ndarray] = []    # row = sum combo[l] * basis[l]

    def _expand(self, vec) -> np.ndarray:
        return self.tower.coord_array(self.base.s)[np.asarray(vec, dtype=np.int64)].reshape(-1)

    def _reduce(self, row: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        tw = self.tower
        combo = np.zeros(len(self.basis) + 1, dtype=np.int64)
        for prow, piv, pc in zip(self._rows, self._pivots, self._combos):
            c = int(row[piv])
            if c:
                row = tw.vsub(row, tw.vscale(c, prow))
                combo[: len(pc)] = tw.vadd(combo[: len(pc)], tw.vscale(c, pc))
        return row, combo

    def add(self, vec) -> tuple[bool, np.ndarray]:
        """Insert ``vec``; returns (was_new, coefficients over current basis).

        When the vector is already in the span the coefficients e satisfy
        vec = sum_l e[l] * basis[l].
        """
        vec = np.asarray(vec, dtype=np.int64)
        if vec.shape != (self.length,):
            raise FieldError(f"expected a vector of length {self.length}")
        tw = self.tower
        row, combo = self._reduce(self._expand(vec))
        nz = np.flatnonzero(row)
        if len(nz) == 0:
            return False, combo[: len(self.basis)]
        piv = int(nz[0])
        inv = tw.inv(int(row[piv]))
        row = tw.vscale(inv, row)
        # new echelon row = (vec - sum combo * basis) / lead
        combo = tw.vneg(combo)
        combo[len(self.basis)] = 1
        combo = tw.vscale(inv, combo)
        # keep rows fully reduced so pivots stay unique
        for i, (prow, pc) in enumerate(zip(self._rows, self._combos)):
            c = int(prow[piv])
            if c:
                self._rows[i] = tw.vsub(prow, tw.vscale(c, row))
                ext = np.zeros(len(combo), dtype=np.int64)
                ext[: len(pc)] = pc
                self._combos[i] = tw.vsub(ext, tw.vscale(c, combo))
        self._rows.append(row)
        self._pivots.append(piv)
        self._combos.append(combo)
        self.basis.append(vec.copy())
        e = np.zeros(len(self.basis), dtype=np.int64)
        e[-1] = 1
        return True, e

    def coefficients(self, vec) -> np.ndarray | None:
        """Coefficients of ``vec`` over the basis, or None if outside the span."""
        row, combo = self._reduce(self._expand(vec))
        if row.any():
            return None
        return combo[: len(self.basis)]

    @property
    def dim(self) -> int:
        return len(self.basis)


def span_dim_over(tower: FieldTower, vectors: Sequence[Sequence[int]],
                  base: Subfield | int) -> tuple[int, list[tuple[int, ...]]]:
    """F_p-dimension of the span of ``vectors`` and a basis drawn from them.

    The basis consists of the input vectors that are independent of the ones
    before them, in input order.
    """
    vectors = [tuple(int(x) for x in v) for v in vectors]
    if not vectors:
        return 0, []
    n = len(vectors[0])
    if any(len(v) != n for v in vectors):
        raise FieldError("ragged vector list")
    span = SubfieldSpan(tower, base, n)
    for v in vectors:
        span.add(v)
    return span.dim, [tuple(int(x) for x in b) for b in span.basis]


def power_basis(tower: FieldTower, base: Subfield | int) -> tuple[int, ...]:
    """1, xi, ..., xi^{t-1}: a basis of F_q over the given subfield."""
    sub = _as_subfield(tower, base)
    return tuple(tower.pow(tower.generator, i) for i in range(sub.degree))


def iter_coordinate_vectors(sub: Subfield, length: int) -> Iterable[tuple[int, ...]]:
    return itertools.product(sub.elements(), repeat=length)
