"""Acceptance criteria, one check per criterion.

Run under pytest (a summary section lists one PASS/FAIL line per
criterion) or directly with ``python3 tests/test_acceptance.py``.
"""

import itertools
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE_LINES, brute_gemt  # noqa: E402
from triada.kernels import (  # noqa: E402
    ORDERS,
    GemtProblem,
    gemt_elementwise,
    gemt_staged_inner,
    gemt_staged_outer,
    rel_max_err,
    trace_nonzero_macs,
    trace_zero_pivots,
)
from triada.sim import simulate  # noqa: E402
from triada.tensor_core import Tensor3, format_tensor, repartition_check  # noqa: E402
from triada.transforms import custom_coeff, inverse_coeff, make_coeff, retag  # noqa: E402

SEED = 715
KINDS = ("dft", "dht", "dct2", "dwht", "custom")
SHAPES = ((2, 3, 4), (4, 4, 4), (5, 3, 2), (1, 1, 1), (8, 7, 6))
TOL = 1e-12


def _power_of_two(shape):
    return all(n & (n - 1) == 0 for n in shape)


def criterion1_problems():
    """(kind, shape, X, mats) for every kind and shape DWHT admits."""
    rng = np.random.default_rng(SEED)
    out = []
    for kind, shape in itertools.product(KINDS, SHAPES):
        if kind == "dwht":
            if not _power_of_two(shape):
                continue
            X = rng.integers(-3, 4, shape)
            mats = [make_coeff("dwht", n) for n in shape]
        elif kind == "custom":
            X = rng.uniform(-1, 1, shape)
            mats = [custom_coeff(rng.uniform(-1, 1, (n, n))) for n in shape]
        else:
            X = rng.uniform(-1, 1, shape)
            mats = [make_coeff(kind, n) for n in shape]
        out.append((kind, shape, X, mats))
    return out


def criterion1():
    lines, ok = [], True
    for kind, shape, X, mats in criterion1_problems():
        Y, _ = simulate(X, *mats)
        p = GemtProblem(X, *mats)
        bitwise = Y.data.tobytes() == gemt_staged_outer(p).out.tobytes()
        ref = gemt_elementwise(p).out
        if kind == "dwht":
            close = Y.data.dtype == np.int64 and np.array_equal(Y.data, ref)
            err = "exact" if close else "inexact"
        else:
            e = rel_max_err(Y.data, ref)
            close, err = e <= TOL, f"{e:.1e}"
        ok &= bitwise and close
        lines.append(f"{kind} {shape}: rel {err}, bitwise {bitwise}")
    for shape in SHAPES:
        if not _power_of_two(shape):
            with pytest.raises(ValueError):
                make_coeff("dwht", max(n for n in shape if n & (n - 1)))
            lines.append(f"dwht {shape}: n/a (no Hadamard matrix of that order)")
    return ok, lines


def criterion2():
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for _ in range(20):
        shape = tuple(rng.integers(1, 7, 3))
        complex_data = rng.uniform() < 0.5
        X = rng.uniform(-1, 1, shape)
        if complex_data:
            X = X + 1j * rng.uniform(-1, 1, shape)
        mats = [custom_coeff(rng.uniform(-1, 1, (n, n))) for n in shape]
        p = GemtProblem(X, *mats)
        outs = [gemt_staged_inner(p, o).out for o in ORDERS]
        for a, b in itertools.combinations(outs, 2):
            worst = max(worst, rel_max_err(a, b))
    return worst <= TOL, [f"20 problems, max pairwise rel err {worst:.1e}"]


def _random_shapes(seed, count=20, hi=8):
    rng = np.random.default_rng(seed)
    return [tuple(int(n) for n in rng.integers(1, hi + 1, 3)) for _ in range(count)], rng


def criterion3():
    shapes, rng = _random_shapes(SEED + 3)
    ok, bad = True, []
    for shape in shapes:
        X = rng.uniform(0.5, 1.0, shape)
        rows = [rng.uniform(-1, 1, (n, n)) for n in shape]
        _, dense = simulate(X, *(custom_coeff(a) for a in rows))
        z_total = 0
        for a in rows:
            z = int(rng.integers(0, a.shape[0] + 1))
            a[rng.choice(a.shape[0], z, replace=False)] = 0.0
            z_total += z
        _, sparse = simulate(X, *(custom_coeff(a) for a in rows))
        good = (dense.time_steps == sum(shape)
                and dense.time_steps - sparse.time_steps == z_total
                and sparse.totals["steps_saved"] == z_total)
        if not good:
            bad.append(shape)
        ok &= good
    return ok, [f"20 shapes, dense steps == N1+N2+N3 and z zero rows save z: failures {bad}"]


def criterion4():
    shapes, rng = _random_shapes(SEED + 4)
    ok = True
    for shape in shapes:
        n = int(np.prod(shape))
        X = rng.uniform(0.5, 1.0, shape)
        mats = [custom_coeff(rng.uniform(0.5, 1.0, (s, s))) for s in shape]
        _, rep = simulate(X, *mats)
        ok &= rep.macs_executed == n * sum(shape)
        k = tuple(int(v) for v in rng.integers(1, 6, 3))
        rect = [custom_coeff(rng.uniform(-1, 1, (a, b))) for a, b in zip(shape, k)]
        ok &= gemt_elementwise(GemtProblem(X, *rect)).macs == n * int(np.prod(k))
        ok &= gemt_elementwise(GemtProblem(X, *mats)).macs == n * n
    return ok, ["20 shapes, dense simulator and elementwise MAC counts exact"]


def criterion5():
    rng = np.random.default_rng(SEED + 5)
    ok, lines = True, []
    for p in (0.5, 0.9):
        for shape in SHAPES:
            for kind in ("custom", "dft"):
                X = rng.uniform(-1, 1, shape)
                X[rng.uniform(size=shape) < p] = 0.0
                if kind == "custom":
                    mats = [custom_coeff(rng.uniform(-1, 1, (n, n))) for n in shape]
                else:
                    mats = [make_coeff("dft", n) for n in shape]
                Ys, rs = simulate(X, *mats)
                Yd, _ = simulate(X, *mats, esop=False)
                tr = gemt_staged_outer(GemtProblem(X, *mats)).traces
                bitwise = Ys.data.tobytes() == Yd.data.tobytes()
                macs = rs.macs_executed == sum(trace_nonzero_macs(tr))
                silent = [s.pivot_silent for s in rs.stages] == list(trace_zero_pivots(tr))
                ok &= bitwise and macs and silent
        lines.append(f"p={p}: bitwise vs dense, MACs and zero-pivot counts vs trace oracle")
    return ok, lines


def criterion6():
    rng = np.random.default_rng(SEED + 6)
    worst, ok = 0.0, True
    shapes = ((2, 3, 4), (5, 3, 2), (1, 1, 1), (8, 7, 6), (4, 4, 4), (8, 4, 2))
    for kind, shape in itertools.product(KINDS, shapes):
        if kind == "dwht" and not _power_of_two(shape):
            continue
        X = rng.uniform(-1, 1, shape)
        if kind == "custom":
            mats = [custom_coeff(rng.uniform(-1, 1, (n, n))) for n in shape]
        else:
            mats = [make_coeff(kind, n, "orthonormal") for n in shape]
        Y, _ = simulate(X, *mats)
        Z, _ = simulate(Y.data, *(inverse_coeff(c) for c in mats))
        worst = max(worst, float(np.max(np.abs(Z.data - X))))
    ok = worst <= 1e-9
    return ok, [f"all kinds, shapes up to 8x7x6, max abs err {worst:.1e}"]


def criterion7():
    rng = np.random.default_rng(SEED + 7)
    lines, ok = [], True
    for n, k in (((4, 4, 4), (2, 2, 2)), ((2, 2, 2), (4, 4, 4))):
        X = rng.uniform(-1, 1, n)
        mats = [custom_coeff(rng.uniform(-1, 1, (a, b))) for a, b in zip(n, k)]
        p = GemtProblem(X, *mats)
        ref = gemt_elementwise(p).out
        errs = [rel_max_err(gemt_staged_outer(p).out, ref)]
        errs += [rel_max_err(gemt_staged_inner(p, o).out, ref) for o in ORDERS]
        brute = rel_max_err(ref, brute_gemt(X, *(c.entries for c in mats)))
        worst = max(errs + [brute])
        ok &= worst <= TOL and ref.shape == k
        lines.append(f"{n}->{k}: max rel err {worst:.1e}")
    return ok, lines


def criterion8():
    rng = np.random.default_rng(SEED + 8)
    ok = True
    for _ in range(100):
        shape = tuple(rng.integers(1, 9, 3))
        kind = rng.choice(["real64", "complex128", "int64"])
        if kind == "int64":
            a = rng.integers(-100, 100, shape)
        elif kind == "complex128":
            a = rng.normal(size=shape) + 1j * rng.normal(size=shape)
        else:
            a = rng.normal(size=shape)
        ok &= repartition_check(Tensor3(a, str(kind)))
    return ok, ["100 random tensors"]


def criterion9():
    rng = np.random.default_rng(SEED + 9)
    lines, ok = [], True
    shape = (4, 3, 5)
    cases = {
        "int64 custom": (rng.integers(-3, 4, shape),
                         [custom_coeff(rng.integers(-3, 4, (n, n))) for n in shape]),
        "real64 dht": (rng.uniform(-1, 1, shape), [make_coeff("dht", n) for n in shape]),
        "complex dft": (rng.uniform(-1, 1, shape) + 1j * rng.uniform(-1, 1, shape),
                        [make_coeff("dft", n) for n in shape]),
    }
    for name, (X, mats) in cases.items():
        Y0, r0 = simulate(X, *mats)
        worst = 0.0
        for _ in range(10):
            tagged = [retag(c, rng.permutation(c.rows)) for c in mats]
            Y1, r1 = simulate(X, *tagged)
            ok &= r1.macs_executed == r0.macs_executed
            ok &= Y1.data.tobytes() == gemt_staged_outer(GemtProblem(X, *tagged)).out.tobytes()
            if X.dtype == np.int64:
                ok &= np.array_equal(Y1.data, Y0.data)
            else:
                worst = max(worst, rel_max_err(Y1.data, Y0.data))
        ok &= worst <= TOL
        lines.append(f"{name}: 10 permutations, MACs equal, "
                     + ("outputs identical" if X.dtype == np.int64 else f"max rel err {worst:.1e}"))
    return ok, lines


def criterion10():
    ok = True
    for _, _, X, mats in criterion1_problems():
        seen = set()
        for workers in (1, 2, 4):
            Y, rep = simulate(X, *mats, workers=workers)
            seen.add((format_tensor(Y), rep.to_json()))
        ok &= len(seen) == 1
    return ok, ["criterion-1 problems with 1, 2 and 4 workers"]


CRITERIA = {
    1: ("oracle equivalence", criterion1),
    2: ("parenthesization equivalence", criterion2),
    3: ("step law", criterion3),
    4: ("MAC law", criterion4),
    5: ("ESOP exactness and savings", criterion5),
    6: ("round trip", criterion6),
    7: ("rectangular GEMT", criterion7),
    8: ("repartition identity", criterion8),
    9: ("retag invariance", criterion9),
    10: ("determinism", criterion10),
}


def evaluate(number: int) -> tuple[bool, list[str]]:
    name, fn = CRITERIA[number]
    ok, details = fn()
    head = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {name}"
    return ok, [head] + [f"    {d}" for d in details]


@pytest.mark.parametrize("number", list(CRITERIA))
def test_criterion(number):
    ok, lines = evaluate(number)
    ACCEPTANCE_LINES.extend(lines)
    print("\n".join(lines))
    assert ok, lines[0]


if __name__ == "__main__":
    results = []
    for n in CRITERIA:
        ok, lines = evaluate(n)
        results.append(ok)
        print("\n".join(lines))
    print(f"{sum(results)}/{len(results)} criteria passed")
    sys.exit(0 if all(results) else 1)
