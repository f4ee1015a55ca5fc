"""
Stepping the simulated tensor core
==================================

The tensor stays in the cells while three actuators stream their matrices
in turn.  Each global time-step is one rank-1 update over the whole core.
"""

import numpy as np

from triada.kernels import GemtProblem, gemt_staged_outer
from triada.sim import CoreConfig, load

rng = np.random.default_rng(2)
X = rng.uniform(-1, 1, (2, 3, 4))
mats = [np.asarray(rng.uniform(-1, 1, (n, n))) for n in X.shape]

machine = load(CoreConfig(4, 4, 4), X, *mats)
print("active cells:", machine.active_cell_count(), "of", machine.cells.size)

# walk the first stage one step at a time
while machine.current_stage == 1:
    t = machine.step()
    print(f"stage {t.stage} slot {t.slot}: coeff sends {t.coeff_sends}, "
          f"pivot sends {t.pivot_broadcast_sends}, MACs {t.macs}")

# finish in bulk and compare with the reference schedule
Y, report = machine.run_transform()
ref = gemt_staged_outer(GemtProblem(X, *mats)).out
print("bitwise equal to reference:", Y.data.tobytes() == ref.tobytes())
print("time-steps:", report.time_steps, "MACs:", report.macs_executed)
print(report.to_json())
