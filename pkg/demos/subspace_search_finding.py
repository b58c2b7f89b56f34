"""Why the multiplicative construction over F_64 finds no admissible subspace.

The degree bound for k=36, d=6 leaves room for h_a of degree at most 26.  The
search walks all 651 four-dimensional F_2-subspaces of F_64 and tallies the
best degree each one reaches.
"""

from collections import Counter

from rackrepair.gf_tower import Subfield, power_basis
from rackrepair.polyring import SubspaceChoice, linearized_coeffs
from rackrepair.scheme_forge import (DescentKernel, FamilyParams, good_polynomial_for,
                                     iter_subspaces, subspace_count)

params = FamilyParams("multiplicative", p0=2, t=6, k=36, a=3, ell=4)
good = good_polynomial_for(params)
base = Subfield(good.layout.tower, 1)
eta = power_basis(base.tower, base)
kernel = DescentKernel(good, eta, 4)

hist = Counter()
for vecs in iter_subspaces(base, 4):
    hist[kernel.max_degree(linearized_coeffs(SubspaceChoice(base, vecs)))] += 1

d = good.layout.r - 1
bound = good.layout.u * (d + 1) - params.k - 1
print(f"subspaces: {sum(hist.values())} of {subspace_count(6, 4, 2)}")
print(f"degree bound: {bound}")
for deg, count in sorted(hist.items()):
    print(f"  max degree {deg}: {count} subspaces")
