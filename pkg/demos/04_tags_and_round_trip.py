"""
Pivot tags and the inverse transform
====================================

Any permutation of pivot tags only reorders the rank-1 updates.  With
orthonormal matrices the inverse is the conjugate transpose, and running it
on the simulator returns the input.
"""

import numpy as np

from triada.kernels import rel_max_err
from triada.sim import simulate
from triada.transforms import inverse_coeff, make_coeff, retag

rng = np.random.default_rng(5)
X = rng.uniform(-1, 1, (5, 4, 3)) + 1j * rng.uniform(-1, 1, (5, 4, 3))
mats = [make_coeff("dft", n, "orthonormal") for n in X.shape]

Y, rep = simulate(X, *mats)
shuffled = [retag(c, rng.permutation(c.rows)) for c in mats]
Y2, rep2 = simulate(X, *shuffled)
print("tags:", [c.tags for c in shuffled])
print("retagged difference:", f"{rel_max_err(Y2.data, Y.data):.1e}",
      "MACs", rep.macs_executed, rep2.macs_executed)

Z, _ = simulate(Y.data, *(inverse_coeff(c) for c in mats))
print("round-trip error:", f"{np.max(np.abs(Z.data - X)):.1e}")

# integer Hadamard data comes back exactly after dividing by N1 N2 N3
H = [make_coeff("dwht", n) for n in (4, 4, 2)]
Xi = rng.integers(-3, 4, (4, 4, 2))
twice, _ = simulate(simulate(Xi, *H)[0].data, *H)
print("exact integer recovery:", np.array_equal(twice.data // 32, Xi))
