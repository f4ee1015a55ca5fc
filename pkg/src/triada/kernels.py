"""Reference three-mode GEMT kernels.

The product computed everywhere is

    Y[k1, k2, k3] = Y_init[k1, k2, k3]
                    + sum_{n1, n2, n3} X[n1, n2, n3] c1[n1, k1] c2[n2, k2] c3[n3, k3]

with ``C_s`` of shape ``(N_s, K_s)``.  Three formulations are provided:

* :func:`gemt_elementwise`: the flat 6-D index space, ``N1 N2 N3 K1 K2 K3`` MACs.
* :func:`gemt_staged_inner`: three mode products in any of the 6 summation
  orders, each output element an inner product.
* :func:`gemt_staged_outer`: three chained stages of rank-1 updates in the
  order n3, n1, n2 (horizontal, horizontal, lateral slices).  Its per-step
  traces are the golden schedule for the simulator.

These are oracles.  The staged kernels work on object arrays of Python
scalars so integer data never overflows and floating point results are
reproducible scalar-by-scalar; the elementwise kernel is vectorised numpy
and shares no code path with them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .tensor_core import (
    KINDS,
    as_array,
    from_pyscalars,
    result_kind,
    to_pyscalars,
)
from .transforms import CoeffMatrix, as_coeff, inverse_coeff

ORDERS: tuple[tuple[int, int, int], ...] = tuple(itertools.permutations((1, 2, 3)))
DEFAULT_ORDER = (3, 1, 2)


def parse_order(order) -> tuple[int, int, int]:
    """Accept ``"312"``, ``(3, 1, 2)`` or similar; modes are summed left to right."""
    if isinstance(order, str):
        order = tuple(int(ch) for ch in order)
    order = tuple(int(m) for m in order)
    if sorted(order) != [1, 2, 3]:
        raise ValueError(f"order must be a permutation of (1, 2, 3), got {order}")
    return order


@dataclass
class GemtProblem:
    X: np.ndarray
    C1: CoeffMatrix
    C2: CoeffMatrix
    C3: CoeffMatrix
    Y_init: np.ndarray | None = None
    direction: str = "forward"

    def __post_init__(self):
        self.X = np.asarray(as_array(self.X))
        self.C1, self.C2, self.C3 = (as_coeff(c) for c in (self.C1, self.C2, self.C3))
        if self.direction not in ("forward", "inverse"):
            raise ValueError(f"direction must be forward or inverse, got {self.direction!r}")
        for s, c in zip((1, 2, 3), self.matrices()):
            if c.rows != self.X.shape[s - 1]:
                raise ValueError(
                    f"C{s} has {c.rows} rows but the tensor has extent "
                    f"{self.X.shape[s - 1]} along mode {s}"
                )
        if self.Y_init is not None:
            self.Y_init = np.asarray(as_array(self.Y_init))
            if self.Y_init.shape != self.out_shape:
                raise ValueError(
                    f"Y_init has shape {self.Y_init.shape}, expected {self.out_shape}"
                )

    def matrices(self) -> tuple[CoeffMatrix, CoeffMatrix, CoeffMatrix]:
        """Matrices actually contracted; the inverse direction uses ``C_s^{-1}``."""
        cs = (self.C1, self.C2, self.C3)
        if self.direction == "inverse":
            cs = tuple(inverse_coeff(c) for c in cs)
        return cs

    @property
    def in_shape(self) -> tuple[int, int, int]:
        return self.X.shape

    @property
    def out_shape(self) -> tuple[int, int, int]:
        return tuple(c.cols for c in self.matrices())

    @property
    def kind(self) -> str:
        dts = [self.X.dtype] + [c.dtype for c in self.matrices()]
        if self.Y_init is not None:
            dts.append(self.Y_init.dtype)
        return result_kind(*dts)


@dataclass(frozen=True)
class TraceStep:
    """One rank-1 update: ``operand`` is the tensor vector, ``coeff`` the matrix vector."""

    stage: int
    slot: int
    index: int
    slice_index: int
    operand: tuple
    coeff: tuple


@dataclass
class GemtResult:
    out: np.ndarray
    macs: int
    stage_macs: tuple[int, ...] = ()
    intermediates: tuple[np.ndarray, ...] = ()
    traces: tuple[tuple[TraceStep, ...], ...] = ()


def _zeros_like_kind(shape, kind: str) -> np.ndarray:
    return to_pyscalars(np.zeros(shape, dtype=KINDS[kind]), kind)


def _init(p: GemtProblem, kind: str) -> np.ndarray:
    if p.Y_init is None:
        return _zeros_like_kind(p.out_shape, kind)
    return to_pyscalars(p.Y_init, kind)


def gemt_elementwise(p: GemtProblem) -> GemtResult:
    """Direct evaluation of every output element over the full input index space."""
    kind = p.kind
    c1, c2, c3 = (c.entries for c in p.matrices())
    if kind == "int64":
        X, c1, c2, c3 = (to_pyscalars(a, kind) for a in (p.X, c1, c2, c3))
        out = np.empty(p.out_shape, dtype=object)
    else:
        X = p.X.astype(KINDS[kind])
        out = np.empty(p.out_shape, dtype=KINDS[kind])
    macs = 0
    K1, K2, K3 = p.out_shape
    for k1 in range(K1):
        for k2 in range(K2):
            for k3 in range(K3):
                w = (
                    c1[:, k1][:, None, None]
                    * c2[:, k2][None, :, None]
                    * c3[:, k3][None, None, :]
                )
                out[k1, k2, k3] = np.sum(X * w)
                macs += X.size
    if p.Y_init is not None:
        out = out + (to_pyscalars(p.Y_init, kind) if kind == "int64" else p.Y_init)
    if kind == "int64":
        out = from_pyscalars(out, kind)
    return GemtResult(out.astype(KINDS[kind]), macs, (macs,))


def _mode_inner(T: np.ndarray, M: np.ndarray, mode: int) -> tuple[np.ndarray, int]:
    """Mode-``mode`` product by inner products: ``out[.., k, ..] = sum_n T[.., n, ..] M[n, k]``."""
    axis = mode - 1
    n, k = M.shape
    moved = np.moveaxis(T, axis, -1)
    out = np.empty(moved.shape[:-1] + (k,), dtype=object)
    if mode == 1:
        # transposed matrix in the multiplicand place: row k1 of M^T times a column
        left = M.T
        for idx in np.ndindex(moved.shape[:-1]):
            col = moved[idx]
            for kk in range(k):
                out[idx + (kk,)] = np.dot(left[kk, :], col)
    else:
        for idx in np.ndindex(moved.shape[:-1]):
            row = moved[idx]
            for kk in range(k):
                out[idx + (kk,)] = np.dot(row, M[:, kk])
    return np.moveaxis(out, -1, axis), out.size * n


def gemt_staged_inner(p: GemtProblem, order: Sequence[int] = DEFAULT_ORDER) -> GemtResult:
    """Three chained mode products in the given summation order.

    ``order=(3, 1, 2)`` sums over n3, then n1, then n2, i.e. the chain
    ``(C1^T (X x3 C3)) x2 C2``.  Intermediates are kept in ``intermediates``.
    """
    order = parse_order(order)
    kind = p.kind
    mats = {s: to_pyscalars(c.entries, kind) for s, c in zip((1, 2, 3), p.matrices())}
    T = to_pyscalars(p.X, kind)
    stage_macs, inter = [], []
    for mode in order:
        T, macs = _mode_inner(T, mats[mode], mode)
        stage_macs.append(macs)
        inter.append(T)
    out = T + _init(p, kind)
    out = from_pyscalars(out, kind)
    return GemtResult(out, sum(stage_macs), tuple(stage_macs),
                      tuple(from_pyscalars(a, kind) for a in inter[:-1]))


def gemt_staged_outer(p: GemtProblem, swap_stage2_operands: bool = False) -> GemtResult:
    """Sum-of-outer-products chain: n3 (per n2 slice), n1 (per n2), n2 (per k3).

    Rows of each matrix are consumed in its tag stream order.  Stage II
    takes the coefficient vector as the left operand: column ``n1`` of
    ``C1^T`` (row ``n1`` of ``C1``).  ``swap_stage2_operands`` uses column
    ``n1`` of ``C1`` instead; it exists only to demonstrate that the operand
    roles matter and needs a square ``C1``.
    """
    kind = p.kind
    C1, C2, C3 = p.matrices()
    c1, c2, c3 = (to_pyscalars(c.entries, kind) for c in (C1, C2, C3))
    X = to_pyscalars(p.X, kind)
    N1, N2, N3 = p.in_shape
    K1, K2, K3 = p.out_shape
    if swap_stage2_operands:
        if not C1.is_square:
            raise ValueError("operand swap is only defined for square C1")
        c1 = c1.T

    traces: list[list[TraceStep]] = [[], [], []]
    macs = [0, 0, 0]

    # Stage I: rank-N3 update of every horizontal slice
    Xd = _zeros_like_kind((N1, N2, K3), kind)
    for j in range(N2):
        for slot, n3 in enumerate(C3.stream_order()):
            x, c = X[:, j, n3], c3[n3, :]
            Xd[:, j, :] += np.multiply.outer(x, c)
            macs[0] += x.size * c.size
            traces[0].append(TraceStep(1, slot, n3, j, tuple(x), tuple(c)))

    # Stage II: rank-N1 update, coefficient column on the left
    Xdd = _zeros_like_kind((K1, N2, K3), kind)
    for j in range(N2):
        for slot, n1 in enumerate(C1.stream_order()):
            c, xd = c1[n1, :], Xd[n1, j, :]
            Xdd[:, j, :] += np.multiply.outer(c, xd)
            macs[1] += c.size * xd.size
            traces[1].append(TraceStep(2, slot, n1, j, tuple(xd), tuple(c)))

    # Stage III: rank-N2 update of every lateral slice (reslice of Xdd)
    Y = _init(p, kind)
    for k3 in range(K3):
        for slot, n2 in enumerate(C2.stream_order()):
            xdd, c = Xdd[:, n2, k3], c2[n2, :]
            Y[:, :, k3] += np.multiply.outer(xdd, c)
            macs[2] += xdd.size * c.size
            traces[2].append(TraceStep(3, slot, n2, k3, tuple(xdd), tuple(c)))

    return GemtResult(
        from_pyscalars(Y, kind),
        sum(macs),
        tuple(macs),
        (from_pyscalars(Xd, kind), from_pyscalars(Xdd, kind)),
        tuple(tuple(t) for t in traces),
    )


def _nnz(vec, eps: float = 0.0) -> int:
    return sum(1 for v in vec if abs(v) > eps)


def trace_nonzero_macs(traces, eps: float = 0.0) -> tuple[int, ...]:
    """Per stage, MACs whose two operands are both nonzero."""
    return tuple(sum(_nnz(t.operand, eps) * _nnz(t.coeff, eps) for t in st) for st in traces)


def trace_zero_pivots(traces, eps: float = 0.0) -> tuple[int, ...]:
    """Per stage, zero tensor operands met in steps whose coefficient vector is nonzero."""
    return tuple(
        sum(len(t.operand) - _nnz(t.operand, eps) for t in st if _nnz(t.coeff, eps))
        for st in traces
    )


@dataclass
class GemmResult:
    out: np.ndarray
    macs: int
    skipped: int = 0


def _gemm_init(A, B, C_init):
    A, B = np.asarray(A), np.asarray(B)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise ValueError(f"cannot multiply {A.shape} by {B.shape}")
    if C_init is not None:
        C_init = np.asarray(C_init)
    dt = np.result_type(A, B) if C_init is None else np.result_type(A, B, C_init)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=dt)
    if C_init is not None:
        if C_init.shape != out.shape:
            raise ValueError(f"C_init has shape {C_init.shape}, expected {out.shape}")
        out += C_init
    return A, B, out


def inner_gemm(A, B, C_init=None) -> GemmResult:
    """Each output element as a row-by-column inner product."""
    A, B, out = _gemm_init(A, B, C_init)
    for i in range(A.shape[0]):
        for j in range(B.shape[1]):
            out[i, j] += np.dot(A[i, :], B[:, j])
    return GemmResult(out, A.shape[0] * A.shape[1] * B.shape[1])


def saxpy_gemm(A, B, C_init=None) -> GemmResult:
    """Row-wise (Gustavson) GEMM; zero scalars of ``A`` skip their row update."""
    A, B, out = _gemm_init(A, B, C_init)
    macs = skipped = 0
    for i in range(A.shape[0]):
        for k in range(A.shape[1]):
            a = A[i, k]
            if a == 0:
                skipped += 1
                continue
            out[i, :] += a * B[k, :]
            macs += B.shape[1]
    return GemmResult(out, macs, skipped)


def outer_gemm(A, B, C_init=None) -> GemmResult:
    """Sum of rank-1 updates: column ``k`` of ``A`` times row ``k`` of ``B``."""
    A, B, out = _gemm_init(A, B, C_init)
    for k in range(A.shape[1]):
        out += np.multiply.outer(A[:, k], B[k, :])
    return GemmResult(out, A.shape[0] * A.shape[1] * B.shape[1])


def rel_max_err(a, b) -> float:
    """``max|a - b| / max|b|``, falling back to the absolute error when ``b`` is 0."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    diff = float(np.max(np.abs(a.astype(complex) - b.astype(complex))))
    scale = float(np.max(np.abs(b)))
    return diff / scale if scale > 0 else diff
