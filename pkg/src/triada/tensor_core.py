"""Dense 3-mode tensors, slice views and the tensor text format.

A tensor is stored as a C-ordered numpy array, so element ``(i1, i2, i3)``
lives at flat offset ``i1*n2*n3 + i2*n3 + i3``.  Three scalar kinds are
supported: ``real64``, ``complex128`` and ``int64``.

Slices follow the usual partition naming:

* ``horizontal`` fixes ``n2`` and yields an ``(n1, n3)`` matrix,
* ``lateral`` fixes ``n3`` and yields an ``(n1, n2)`` matrix,
* ``frontal`` fixes ``n1`` and yields an ``(n2, n3)`` matrix.

All slices are views over the parent storage.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

import numpy as np

MAGIC = "TRIADA-TENSOR v1"

KINDS = {
    "real64": np.dtype(np.float64),
    "complex128": np.dtype(np.complex128),
    "int64": np.dtype(np.int64),
}

_INT64_MIN = int(np.iinfo(np.int64).min)
_INT64_MAX = int(np.iinfo(np.int64).max)

SLICE_MODES = ("horizontal", "lateral", "frontal")


class TensorFormatError(ValueError):
    """Raised for malformed tensor files."""


def kind_of(dtype) -> str:
    """Map a numpy dtype onto one of the three scalar kinds."""
    dtype = np.dtype(dtype)
    if dtype.kind == "c":
        return "complex128"
    if dtype.kind == "f":
        return "real64"
    if dtype.kind in "iub":
        return "int64"
    raise TypeError(f"unsupported dtype {dtype}")


def result_kind(*dtypes) -> str:
    return kind_of(np.result_type(*[np.dtype(d) for d in dtypes]))


def conj(value):
    """Complex conjugate; identity for real and integer scalars."""
    if isinstance(value, (complex, np.complexfloating)):
        return value.conjugate()
    return value


def to_pyscalars(a, kind: str) -> np.ndarray:
    """Object array of Python scalars of the given kind.

    Python ``int`` never overflows, and Python float/complex arithmetic is
    plain IEEE scalar arithmetic, so kernels built on these arrays agree
    bitwise with any other code doing the same scalar operations.
    """
    a = np.asarray(a)
    if kind == "int64":
        if a.dtype.kind not in "iubO":
            raise TypeError(f"cannot represent {a.dtype} as int64 exactly")
        conv = int
    elif kind == "real64":
        if a.dtype.kind == "c":
            raise TypeError("complex data cannot be narrowed to real64")
        conv = float
    elif kind == "complex128":
        conv = complex
    else:
        raise ValueError(f"unknown scalar kind {kind!r}")
    out = np.empty(a.shape, dtype=object)
    flat = out.reshape(-1)
    for i, v in enumerate(a.reshape(-1).tolist()):
        flat[i] = conv(v)
    return out


def from_pyscalars(a: np.ndarray, kind: str) -> np.ndarray:
    """Inverse of :func:`to_pyscalars`; int64 results are range checked."""
    if kind == "int64":
        vals = a.reshape(-1).tolist()
        for v in vals:
            if not _INT64_MIN <= v <= _INT64_MAX:
                raise OverflowError(f"value {v} does not fit in int64")
        return np.array(vals, dtype=np.int64).reshape(a.shape)
    return np.array(a.reshape(-1).tolist(), dtype=KINDS[kind]).reshape(a.shape)


@dataclass(frozen=True)
class Shape3:
    n1: int
    n2: int
    n3: int

    def __post_init__(self):
        for name in ("n1", "n2", "n3"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ValueError(f"extent {name}={v!r} must be a positive integer")

    @classmethod
    def parse(cls, text: str) -> "Shape3":
        """Parse ``N1xN2xN3``."""
        parts = text.lower().split("x")
        if len(parts) != 3:
            raise ValueError(f"shape must look like N1xN2xN3, got {text!r}")
        return cls(*(int(p) for p in parts))

    def as_tuple(self) -> tuple[int, int, int]:
        return (int(self.n1), int(self.n2), int(self.n3))

    @property
    def size(self) -> int:
        return int(self.n1 * self.n2 * self.n3)

    def __iter__(self):
        return iter(self.as_tuple())


class Tensor3:
    """Immutable dense 3-mode tensor.

    The wrapped array is marked read-only; use :meth:`to_array` for a
    private writable copy.
    """

    def __init__(self, data, kind: str | None = None):
        arr = np.asarray(data)
        if arr.ndim != 3:
            raise ValueError(f"expected a 3-mode array, got ndim={arr.ndim}")
        Shape3(*arr.shape)
        kind = kind or kind_of(arr.dtype)
        if kind not in KINDS:
            raise ValueError(f"unknown scalar kind {kind!r}")
        if kind == "int64" and arr.dtype.kind not in "iub":
            raise TypeError("int64 tensors need integer data")
        arr = np.array(arr, dtype=KINDS[kind], order="C", copy=True)
        arr.flags.writeable = False
        self._data = arr
        self.kind = kind

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def shape(self) -> tuple[int, int, int]:
        return self._data.shape

    def to_array(self) -> np.ndarray:
        return self._data.copy()

    def slice(self, mode: str, index: int) -> np.ndarray:
        return slice_view(self._data, mode, index)

    def __eq__(self, other):
        if not isinstance(other, Tensor3):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.shape == other.shape
            and self._data.tobytes() == other._data.tobytes()
        )

    def __repr__(self):
        return f"Tensor3(shape={self.shape}, kind={self.kind})"


TensorLike = Union[Tensor3, np.ndarray]


def as_array(t: TensorLike) -> np.ndarray:
    if isinstance(t, Tensor3):
        return t.data
    arr = np.asarray(t)
    if arr.ndim != 3:
        raise ValueError(f"expected a 3-mode array, got ndim={arr.ndim}")
    return arr


def tensor_new(shape, kind: str = "real64", fill=0) -> Tensor3:
    """Tensor of the given shape with every element equal to ``fill``."""
    if not isinstance(shape, Shape3):
        shape = Shape3(*shape)
    if kind not in KINDS:
        raise ValueError(f"unknown scalar kind {kind!r}")
    return Tensor3(np.full(shape.as_tuple(), fill, dtype=KINDS[kind]), kind)


def slice_view(t: TensorLike, mode: str, index: int) -> np.ndarray:
    """View of one slice of ``t``; see the module docstring for orientation."""
    a = as_array(t)
    axis = {"horizontal": 1, "lateral": 2, "frontal": 0}.get(mode)
    if axis is None:
        raise ValueError(f"mode must be one of {SLICE_MODES}, got {mode!r}")
    if not 0 <= index < a.shape[axis]:
        raise IndexError(
            f"{mode} slice index {index} out of range [0, {a.shape[axis]})"
        )
    if axis == 1:
        return a[:, index, :]
    if axis == 2:
        return a[:, :, index]
    return a[index, :, :]


def _address(view: np.ndarray, idx: tuple[int, int]) -> int:
    base = view.__array_interface__["data"][0]
    return base + idx[0] * view.strides[0] + idx[1] * view.strides[1]


def repartition_check(t: TensorLike) -> bool:
    """Check that horizontal and lateral reslicing address the same cells.

    For every ``(k1, n2, k3)`` the element ``(k1, k3)`` of horizontal slice
    ``n2`` must be the very storage cell holding element ``(k1, n2)`` of
    lateral slice ``k3``.
    """
    a = as_array(t)
    n1, n2, n3 = a.shape
    horizontal = [slice_view(a, "horizontal", j) for j in range(n2)]
    lateral = [slice_view(a, "lateral", k) for k in range(n3)]
    for k1 in range(n1):
        for j in range(n2):
            for k3 in range(n3):
                h, lt = horizontal[j], lateral[k3]
                if _address(h, (k1, k3)) != _address(lt, (k1, j)):
                    return False
                if h[k1, k3].tobytes() != lt[k1, j].tobytes():
                    return False
    return True


def _format_scalar(v, kind: str) -> str:
    if kind == "complex128":
        return f"{float(v.real)!r} {float(v.imag)!r}"
    if kind == "real64":
        return repr(float(v))
    return str(int(v))


def _parse_scalar(text: str, kind: str, lineno: int):
    fields = text.split()
    try:
        if kind == "complex128":
            if len(fields) != 2:
                raise ValueError("complex scalars need '<re> <im>'")
            return complex(float(fields[0]), float(fields[1]))
        if len(fields) != 1:
            raise ValueError("expected one value")
        if kind == "real64":
            return float(fields[0])
        return int(fields[0])
    except ValueError as exc:
        raise TensorFormatError(f"line {lineno}: {exc}") from None


def format_tensor(t: TensorLike, kind: str | None = None) -> str:
    a = as_array(t)
    kind = kind or (t.kind if isinstance(t, Tensor3) else kind_of(a.dtype))
    n1, n2, n3 = a.shape
    lines = [MAGIC, f"{n1} {n2} {n3} {kind}"]
    lines.extend(_format_scalar(v, kind) for v in a.reshape(-1).tolist())
    return "\n".join(lines) + "\n"


def parse_tensor(lines: Iterable[str]) -> Tensor3:
    lines = [ln.strip() for ln in lines]
    while lines and not lines[-1]:
        lines.pop()
    if not lines or lines[0] != MAGIC:
        raise TensorFormatError(f"missing {MAGIC!r} header")
    if len(lines) < 2:
        raise TensorFormatError("missing shape/kind line")
    header = lines[1].split()
    if len(header) != 4:
        raise TensorFormatError("shape line must be '<n1> <n2> <n3> <kind>'")
    kind = header[3]
    if kind not in KINDS:
        raise TensorFormatError(f"unknown scalar kind {kind!r}")
    try:
        shape = Shape3(*(int(h) for h in header[:3]))
    except ValueError as exc:
        raise TensorFormatError(f"bad extents: {exc}") from None
    body = lines[2:]
    if len(body) != shape.size:
        raise TensorFormatError(
            f"header declares {shape.size} elements, file holds {len(body)}"
        )
    values = [_parse_scalar(ln, kind, i + 3) for i, ln in enumerate(body)]
    arr = np.array(values, dtype=KINDS[kind]).reshape(shape.as_tuple())
    return Tensor3(arr, kind)


def tensor_write(path, t: TensorLike, kind: str | None = None) -> None:
    Path(path).write_text(format_tensor(t, kind))


def tensor_read(path) -> Tensor3:
    return parse_tensor(Path(path).read_text().splitlines())
