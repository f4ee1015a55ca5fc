import itertools

import numpy as np
import pytest

from triada.transforms import custom_coeff, make_coeff

ACCEPTANCE_LINES: list[str] = []


def brute_gemt(X, c1, c2, c3, y_init=None):
    """Six nested Python loops over plain lists; shares nothing with the package."""
    X = np.asarray(X).tolist()
    c1, c2, c3 = (np.asarray(c).tolist() for c in (c1, c2, c3))
    N1, N2, N3 = len(X), len(X[0]), len(X[0][0])
    K1, K2, K3 = len(c1[0]), len(c2[0]), len(c3[0])
    out = np.zeros((K1, K2, K3), dtype=np.result_type(
        np.asarray(X).dtype, np.asarray(c1).dtype, np.asarray(c2).dtype, np.asarray(c3).dtype))
    out = out.tolist()
    for k1, k2, k3 in itertools.product(range(K1), range(K2), range(K3)):
        acc = 0
        for n1, n2, n3 in itertools.product(range(N1), range(N2), range(N3)):
            acc += X[n1][n2][n3] * c1[n1][k1] * c2[n2][k2] * c3[n3][k3]
        out[k1][k2][k3] = acc
    res = np.array(out)
    if y_init is not None:
        res = res + np.asarray(y_init)
    return res


def triple_loop_gemm(A, B, C=None):
    A, B = np.asarray(A).tolist(), np.asarray(B).tolist()
    m, k, n = len(A), len(B), len(B[0])
    out = [[0] * n for _ in range(m)]
    for i in range(m):
        for j in range(n):
            out[i][j] = sum(A[i][t] * B[t][j] for t in range(k))
    out = np.array(out)
    return out if C is None else out + np.asarray(C)


def random_tensor(rng, shape, dtype="real64"):
    if dtype == "complex128":
        return rng.uniform(-1, 1, shape) + 1j * rng.uniform(-1, 1, shape)
    if dtype == "int64":
        return rng.integers(-3, 4, shape)
    return rng.uniform(-1, 1, shape)


def kind_matrices(kind, shape, rng=None, normalization="unnormalized"):
    if kind == "custom":
        rng = rng or np.random.default_rng(0)
        return [custom_coeff(rng.uniform(-1, 1, (n, n))) for n in shape]
    return [make_coeff(kind, n, normalization) for n in shape]


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
