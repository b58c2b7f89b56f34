import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rackrepair.grs_code import (CodeError, Codeword, GrsCode, dual_multipliers, dump_codeword,
                                 encode, is_codeword, load_codeword, naive_recover,
                                 random_message, survivors_consistent)
from rackrepair.gf_tower import make_field
from rackrepair.polyring import Poly

F16 = make_field(2, 4)


def test_encode_examples(F4):
    code = GrsCode.reed_solomon(F4, [0, 1, 2], 2)
    assert encode(code, Poly(F4)).symbols == (0, 0, 0)
    assert encode(code, Poly.const(F4, 1)).symbols == (1, 1, 1)
    assert encode(code, Poly.x(F4)).symbols == (0, 1, 2)
    with pytest.raises(CodeError):
        encode(code, Poly.monomial(F4, 2))


def test_code_validation(F4):
    with pytest.raises(CodeError):
        GrsCode.reed_solomon(F4, [0, 0, 1], 1)
    with pytest.raises(CodeError):
        GrsCode(F4, (0, 1, 2), (1, 0, 1), 1)
    with pytest.raises(CodeError):
        GrsCode.reed_solomon(F4, [0, 1], 2)


def test_dual_multipliers_by_definition():
    pts = [3, 7, 0, 12, 5]
    u = dual_multipliers(F16, pts)
    for i, a in enumerate(pts):
        prod = 1
        for j, b in enumerate(pts):
            if j != i:
                prod = F16.mul(prod, F16.sub(a, b))
        assert F16.mul(u[i], prod) == 1


def test_duality_500_pairs():
    code = GrsCode.reed_solomon(F16, range(8), 3)
    rng = np.random.default_rng(1)
    for _ in range(500):
        f = Poly(F16, F16.random(rng, size=code.k))
        g = Poly(F16, F16.random(rng, size=code.n - code.k))
        terms = [F16.mul(F16.mul(u, f(a)), g(a)) for u, a in zip(code.duals, code.points)]
        assert F16.sum(terms) == 0


def test_is_codeword_examples():
    code = GrsCode(F16, tuple(range(1, 9)), (1, 2, 3, 4, 5, 6, 7, 8), 4)
    rng = np.random.default_rng(3)
    w = encode(code, random_message(code, rng))
    assert is_codeword(code, w)
    assert is_codeword(code, Codeword((0,) * 8))
    flipped = list(w.symbols)
    flipped[2] = F16.add(flipped[2], 1)
    assert not is_codeword(code, Codeword(tuple(flipped)))
    assert not survivors_consistent(code, Codeword(tuple(flipped)).erase(0))
    assert survivors_consistent(code, w.erase(0))


def test_exhaustive_erasures_n8_k3():
    code = GrsCode(F16, tuple(range(2, 10)), tuple(range(1, 9)), 3)
    rng = np.random.default_rng(9)
    for _ in range(20):
        w = encode(code, random_message(code, rng))
        for erased in itertools.combinations(range(8), 5):
            helpers = [i for i in range(8) if i not in erased]
            assert naive_recover(code, w.erase(*erased), helpers) == Codeword(w.symbols)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 15), min_size=4, max_size=4),
       st.lists(st.integers(0, 15), min_size=4, max_size=4))
def test_encode_is_injective(a, b):
    code = GrsCode.reed_solomon(F16, range(8), 4)
    same = encode(code, Poly(F16, a)) == encode(code, Poly(F16, b))
    assert same == (Poly(F16, a) == Poly(F16, b))


def test_naive_recover_needs_k_helpers():
    code = GrsCode.reed_solomon(F16, range(6), 3)
    w = encode(code, Poly(F16, [1, 2, 3]))
    with pytest.raises(CodeError):
        naive_recover(code, w, [0, 1])
    with pytest.raises(CodeError):
        naive_recover(code, w.erase(0), [0, 1, 2])
    const = GrsCode.reed_solomon(F16, range(4), 1)
    cw = encode(const, Poly.const(F16, 9))
    assert naive_recover(const, cw.erase(0, 1, 2), [3]).symbols == (9, 9, 9, 9)


def test_codeword_file_round_trip():
    code = GrsCode(F16, (1, 2, 3, 4, 5), (1, 1, 2, 2, 3), 2)
    w = encode(code, Poly(F16, [4, 5])).erase(3)
    code2, w2 = load_codeword(dump_codeword(code, w))
    assert code2 == code and w2 == w
    with pytest.raises(CodeError):
        load_codeword("code: n=1 k=1\n")
