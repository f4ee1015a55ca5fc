"""
Three ways to compute a 3D transform
====================================

A separable 3D transform multiplies a tensor by one matrix per mode.  This
script runs the three reference formulations on one problem, checks them
against numpy's FFT, and then compresses a tensor with rectangular matrices.
"""

import numpy as np

from triada.kernels import (
    ORDERS,
    GemtProblem,
    gemt_elementwise,
    gemt_staged_inner,
    gemt_staged_outer,
    rel_max_err,
)
from triada.transforms import custom_coeff, make_coeff

rng = np.random.default_rng(1)
X = rng.uniform(-1, 1, (4, 5, 6))

# unnormalized DFT matrices, one per mode
problem = GemtProblem(X, *(make_coeff("dft", n) for n in X.shape))

flat = gemt_elementwise(problem)
inner = gemt_staged_inner(problem)
outer = gemt_staged_outer(problem)
print("elementwise MACs:", flat.macs)
print("staged MACs:     ", inner.macs, "(inner)", outer.macs, "(outer)")

fft = np.fft.fftn(X)
for name, res in [("elementwise", flat), ("inner", inner), ("outer", outer)]:
    print(f"{name:12s} vs numpy fftn: {rel_max_err(res.out, fft):.2e}")

# the summation order is free: all six chains agree
errs = [rel_max_err(gemt_staged_inner(problem, o).out, fft) for o in ORDERS]
print("worst of the 6 orders:", f"{max(errs):.2e}")

# rectangular matrices shrink (or grow) each mode
shrink = [custom_coeff(rng.uniform(-1, 1, (n, 2))) for n in X.shape]
small = gemt_staged_outer(GemtProblem(X, *shrink))
print("compressed", X.shape, "->", small.out.shape)
