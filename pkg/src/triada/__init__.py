"""Trilinear transforms on a simulated cellular tensor core.

``tensor_core``, ``transforms`` and ``kernels`` form a small reference
library for three-mode matrix-by-tensor products; ``sim`` models the
cellular accelerator that executes them in ``N1 + N2 + N3`` time-steps.
"""

from .kernels import (
    GemtProblem,
    gemt_elementwise,
    gemt_staged_inner,
    gemt_staged_outer,
    rel_max_err,
)
from .sim import CoreConfig, load, simulate
from .tensor_core import Shape3, Tensor3, tensor_new, tensor_read, tensor_write
from .transforms import CoeffMatrix, TransformKind, custom_coeff, inverse_coeff, make_coeff, retag

__version__ = "0.1.0"
