"""Coefficient matrices for the separable 3D transforms.

Every transform kind is described by one ``N x N`` change-of-basis matrix
``C = [c(n, k)]`` with ``n`` the summation index and ``k`` the output index:

=====  =========================================  ==================
kind   unnormalized entry ``c(n, k)``              Gram ``C^H C``
=====  =========================================  ==================
dft    ``exp(-2 pi i n k / N)``                   ``N I``
dht    ``cos(2 pi n k / N) + sin(2 pi n k / N)``  ``N I``
dct2   ``cos(pi (2n + 1) k / (2N))``              diagonal, not scalar
dwht   Sylvester Hadamard, entries in ``{+1, -1}`` ``N I``
=====  =========================================  ==================

The ``orthonormal`` variants scale by ``1/sqrt(N)`` (dft, dht, dwht) or by
``sqrt(1/N)`` for column 0 and ``sqrt(2/N)`` elsewhere (dct2).

Each square matrix also carries a pivot-tag vector.  ``tags[t]`` is the
pivot column of the vector an actuator streams in slot ``t``.  The pivot
column selects which tensor cells broadcast their operand, so the vector
streamed in slot ``t`` is row ``tags[t]`` of the matrix.  The default
``tags[t] = t`` streams the rows in natural order with the tag on the
diagonal; any permutation is admissible, since it only reorders the
rank-1 updates.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
import scipy.linalg

from .tensor_core import Tensor3, kind_of, tensor_read, tensor_write


class TransformKind(str, enum.Enum):
    DFT = "dft"
    DHT = "dht"
    DCT2 = "dct2"
    DWHT = "dwht"
    CUSTOM = "custom"


NORMALIZATIONS = ("unnormalized", "orthonormal")

# Pivot magnitude (relative to the largest) below which a custom matrix is
# treated as singular.
SINGULAR_RTOL = 1e-12


class SingularMatrixError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CoeffMatrix:
    entries: np.ndarray
    kind: TransformKind = TransformKind.CUSTOM
    normalization: str = "unnormalized"
    tags: tuple[int, ...] | None = field(default=None)

    def __post_init__(self):
        a = np.array(self.entries, copy=True)
        if a.ndim != 2 or 0 in a.shape:
            raise ValueError(f"coefficient matrix must be 2-D and non-empty, got {a.shape}")
        kind_of(a.dtype)
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "kind", TransformKind(self.kind))
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"normalization must be one of {NORMALIZATIONS}")
        tags = self.tags
        if tags is None and a.shape[0] == a.shape[1]:
            tags = tuple(range(a.shape[0]))
        if tags is not None:
            tags = tuple(int(t) for t in tags)
            if a.shape[0] != a.shape[1]:
                raise ValueError("only square matrices carry pivot tags")
            if sorted(tags) != list(range(a.shape[0])):
                raise ValueError(f"tags {tags} are not a permutation of 0..{a.shape[0] - 1}")
        object.__setattr__(self, "tags", tags)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def dtype(self):
        return self.entries.dtype

    @property
    def skippable_rows(self) -> tuple[bool, ...]:
        """Rows that are entirely zero and never need to be streamed."""
        return tuple(bool(not np.any(r)) for r in self.entries)

    def stream_order(self) -> tuple[int, ...]:
        """Rows in the order an actuator streams them."""
        if self.tags is None:
            return tuple(range(self.rows))
        return self.tags

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __repr__(self):
        return (
            f"CoeffMatrix({self.kind.value}, {self.rows}x{self.cols}, "
            f"{self.normalization}, dtype={self.dtype})"
        )


def as_coeff(c) -> CoeffMatrix:
    return c if isinstance(c, CoeffMatrix) else CoeffMatrix(np.asarray(c))


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def _hadamard(n: int) -> np.ndarray:
    h = np.ones((1, 1), dtype=np.int64)
    while h.shape[0] < n:
        h = np.block([[h, h], [h, -h]])
    return h


def make_coeff(kind, n: int, normalization: str = "unnormalized") -> CoeffMatrix:
    """Generate the ``n x n`` matrix of a standard transform kind."""
    kind = TransformKind(kind)
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"transform size must be a positive integer, got {n!r}")
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"normalization must be one of {NORMALIZATIONS}")
    idx = np.arange(n)
    # reduce n*k modulo n before scaling so large angles keep full precision
    nk = np.outer(idx, idx) % n
    if kind is TransformKind.DFT:
        ang = 2.0 * np.pi * nk / n
        c = np.cos(ang) - 1j * np.sin(ang)
        if normalization == "orthonormal":
            c = c / np.sqrt(n)
    elif kind is TransformKind.DHT:
        ang = 2.0 * np.pi * nk / n
        c = np.cos(ang) + np.sin(ang)
        if normalization == "orthonormal":
            c = c / np.sqrt(n)
    elif kind is TransformKind.DCT2:
        c = np.cos(np.pi / (2 * n) * np.outer(2 * idx + 1, idx))
        if normalization == "orthonormal":
            scale = np.full(n, np.sqrt(2.0 / n))
            scale[0] = np.sqrt(1.0 / n)
            c = c * scale[None, :]
    elif kind is TransformKind.DWHT:
        if not _is_power_of_two(n):
            raise ValueError(f"dwht needs a power-of-two size, got {n}")
        c = _hadamard(n)
        if normalization == "orthonormal":
            c = c / np.sqrt(n)
    else:
        raise ValueError("custom matrices are built with custom_coeff()")
    return CoeffMatrix(c, kind, normalization)


def custom_coeff(entries, tags=None) -> CoeffMatrix:
    return CoeffMatrix(np.asarray(entries), TransformKind.CUSTOM, "unnormalized", tags)


def gram_scale(c: CoeffMatrix) -> float:
    if c.normalization == "orthonormal":
        return 1.0
    if c.kind in (TransformKind.DFT, TransformKind.DHT, TransformKind.DWHT):
        return float(c.rows)
    if c.kind is TransformKind.CUSTOM:
        return 1.0
    raise ValueError("unnormalized dct2 has no scalar Gram matrix")


def check_orthogonality(c: CoeffMatrix, scale: float | None = None) -> float:
    """Max-abs entry of ``C^H C - s I``; ``s`` defaults to the kind's Gram scale."""
    c = as_coeff(c)
    if not c.is_square:
        raise ValueError(f"orthogonality needs a square matrix, got {c.shape}")
    s = gram_scale(c) if scale is None else scale
    a = c.entries.astype(np.result_type(c.dtype, np.float64))
    gram = a.conj().T @ a
    return float(np.max(np.abs(gram - s * np.eye(c.rows))))


def inverse_coeff(c: CoeffMatrix) -> CoeffMatrix:
    """Matrix ``M`` with ``M C = I``, returned untagged-diagonal."""
    c = as_coeff(c)
    if not c.is_square:
        raise ValueError(f"inverse needs a square matrix, got {c.shape}")
    a = c.entries
    if c.kind is TransformKind.CUSTOM:
        with warnings.catch_warnings():
            # exact singularity is reported below as SingularMatrixError
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu, piv = scipy.linalg.lu_factor(a)
        d = np.abs(np.diag(lu))
        if d.min() <= SINGULAR_RTOL * max(d.max(), np.finfo(float).tiny):
            raise SingularMatrixError(
                f"matrix is numerically singular (min pivot {d.min():.3e})"
            )
        eye = np.eye(c.rows, dtype=np.result_type(a.dtype, np.float64))
        inv = scipy.linalg.lu_solve((lu, piv), eye)
        return CoeffMatrix(inv, TransformKind.CUSTOM, "unnormalized")
    if c.normalization == "orthonormal":
        inv = a.conj().T
    elif c.kind is TransformKind.DCT2:
        # columns are orthogonal with squared norms N (k = 0) and N/2
        norms = np.full(c.rows, c.rows / 2.0)
        norms[0] = c.rows
        inv = a.T / norms[:, None]
    else:
        inv = a.conj().T / c.rows
    return CoeffMatrix(inv, c.kind, c.normalization)


def retag(c: CoeffMatrix, pivot_map: Sequence[int] | Mapping[int, int]) -> CoeffMatrix:
    """Replace the pivot tags; ``pivot_map[t]`` is the pivot column of slot ``t``."""
    c = as_coeff(c)
    if not c.is_square:
        raise ValueError("only square matrices can be tagged")
    if isinstance(pivot_map, Mapping):
        if sorted(pivot_map) != list(range(c.rows)):
            raise ValueError("pivot map must cover every slot exactly once")
        tags = [pivot_map[t] for t in range(c.rows)]
    else:
        tags = list(pivot_map)
    if len(tags) != c.rows or sorted(tags) != list(range(c.rows)):
        raise ValueError(f"pivot map {tags} is not a bijection on 0..{c.rows - 1}")
    return CoeffMatrix(c.entries, c.kind, c.normalization, tuple(tags))


def coeff_from_tensor(t: Tensor3) -> CoeffMatrix:
    """A matrix stored as an ``(rows, 1, cols)`` tensor."""
    if t.shape[1] != 1:
        raise ValueError(f"matrix files must have n2 == 1, got shape {t.shape}")
    return custom_coeff(t.data[:, 0, :])


def read_coeff(path) -> CoeffMatrix:
    return coeff_from_tensor(tensor_read(path))


def write_coeff(path, c: CoeffMatrix) -> None:
    a = as_coeff(c).entries
    tensor_write(path, a[:, None, :])
