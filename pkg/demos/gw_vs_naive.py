"""Trace repair of a full-length RS code over F_16 versus naive recovery.

Naive repair downloads k whole symbols (8 x 4 = 32 bits).  The trace scheme
asks each of the 15 survivors for a single bit.
"""

import numpy as np

from rackrepair import encode, gw_scheme, make_field, naive_recover, random_message, repair_standard


F16 = make_field(2, 4)
scheme = gw_scheme(F16, 1, k=8, j=0)
code = scheme.code
rng = np.random.default_rng(3)

total = 0
for lost in range(code.n):
    sc = gw_scheme(F16, 1, k=8, j=lost)
    word = encode(code, random_message(code, rng))
    helpers = [i for i in range(code.n) if i != lost]
    tx = repair_standard(sc, helpers, word.erase(lost))
    naive = naive_recover(code, word.erase(lost), helpers[:code.k]).symbols[lost]
    assert tx.recovered == naive == word.symbols[lost]
    total += tx.cross_rack_symbols

print(f"trace repair: {total // code.n} bits per failure")
print(f"naive repair: {code.k * F16.T} bits per failure")
