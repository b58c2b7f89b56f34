"""Slow, independent reference implementations used as test oracles.

Nothing here imports the package: field elements are plain coefficient
lists (low degree first) and every operation is schoolbook.
"""

from __future__ import annotations

import itertools


def poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a, f, p):
    a = poly_trim([c % p for c in a])
    f = poly_trim(f)
    inv = pow(f[-1], p - 2, p)
    while len(a) >= len(f):
        c = a[-1] * inv % p
        shift = len(a) - len(f)
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        a = poly_trim(a)
    return a


def brute_irreducible(f, p):
    """No monic factor of degree 1..deg/2, by trial division over all candidates."""
    deg = len(f) - 1
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not poly_mod(f, list(low) + [1], p):
                return False
    return True


def first_irreducible(p, T):
    """Smallest monic irreducible by the integer sum c_i p^i (c0 least significant)."""
    for val in range(p ** T):
        low = [(val // p ** i) % p for i in range(T)]
        if brute_irreducible(low + [1], p):
            return tuple(low + [1])
    raise AssertionError("no irreducible found")


class SlowField:
    """F_{p^T} with elements as integers sum c_i p^i, arithmetic by schoolbook."""

    def __init__(self, p, modulus):
        self.p = p
        self.f = list(modulus)
        self.T = len(modulus) - 1
        self.q = p ** self.T

    def digits(self, x):
        return [(x // self.p ** i) % self.p for i in range(self.T)]

    def value(self, digits):
        return sum(int(c) % self.p * self.p ** i for i, c in enumerate(digits))

    def add(self, x, y):
        return self.value([a + b for a, b in zip(self.digits(x), self.digits(y))])

    def neg(self, x):
        return self.value([-a for a in self.digits(x)])

    def mul(self, x, y):
        a, b = self.digits(x), self.digits(y)
        prod = [0] * (2 * self.T)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
        return self.value(poly_mod(prod, self.f, self.p) + [0] * self.T)

    def pow(self, x, e):
        out = 1
        for _ in range(e):
            out = self.mul(out, x)
        return out

    def trace(self, x, s):
        """sum_{i < T/s} x^{p^{s i}} by repeated multiplication."""
        P = self.p ** s
        acc, y = 0, x
        for _ in range(self.T // s):
            acc = self.add(acc, y)
            y = self.pow(y, P)
        return acc


def span_size(field, vectors, base):
    """|F_p-span| of F_q-vectors, by closing the set under addition and base scaling."""
    span = {tuple([0] * len(vectors[0]))}
    for v in vectors:
        new = set(span)
        for c in base:
            sv = tuple(field.mul(c, x) for x in v)
            for w in span:
                new.add(tuple(field.add(a, b) for a, b in zip(w, sv)))
        span = new
    return len(span)
