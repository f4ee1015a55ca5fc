"""
Skipping zeros
==============

Cells never multiply by a zero that they can see coming: silent pivots
leave their bus idle, and an all-zero coefficient row is never streamed.
The result is unchanged bit for bit.
"""

import numpy as np

from triada.datagen import random_problem
from triada.sim import esop_stats, simulate
from triada.transforms import custom_coeff, make_coeff

shape = (6, 6, 6)
mats = [make_coeff("dht", n) for n in shape]

print("sparsity  MACs   skipped  cost")
for p in (0.0, 0.5, 0.9, 0.99):
    X, _ = random_problem(shape, seed=4, sparsity=p)
    Y, rep = simulate(X, *mats)
    dense, _ = simulate(X, *mats, esop=False)
    assert Y.data.tobytes() == dense.data.tobytes()
    s = esop_stats(rep)
    print(f"{p:8.2f}  {rep.macs_executed:5d}  {s['macs_skipped']:7d}  "
          f"{s['weighted_cost']:.0f} / {s['dense_weighted_cost']:.0f}")

# two zero rows in C3 save two time-steps
c3 = np.asarray(make_coeff("dht", 6).entries).copy()
c3[[1, 4]] = 0.0
X, _ = random_problem(shape, seed=4)
_, rep = simulate(X, mats[0], mats[1], custom_coeff(c3))
print("steps:", rep.time_steps, "saved:", rep.totals["steps_saved"])
