"""Discrete-time model of the tensor core and its three actuators.

One global time-step has three barrier-separated phases:

1. actuator phase: the active actuator puts the current tagged coefficient
   vector on its X-bus family, one element per channel, replicated across
   the face.  Zero non-pivot elements are not sent; an all-zero vector is
   not sent at all and costs no time-step.
2. pivot phase: cells that received ``tag=1`` broadcast their stage input
   on their Y-bus, unless it is zero.
3. compute phase: every cell holding a nonzero coefficient and an operand
   performs one MAC into its stage output register.

Stages run in actuator hand-off order 3 -> 1 -> 2.

With ``esop=False`` no zero is ever suppressed: every coefficient is sent,
every pivot broadcasts and every cell multiplies.  That dense mode is the
baseline the sparse skipping is measured against.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..tensor_core import KINDS, Tensor3, as_array, from_pyscalars, result_kind, to_pyscalars
from ..transforms import CoeffMatrix, as_coeff
from .cell import BusMessage, Cell, CellLogic, is_zero
from .geometry import HANDOFF, WIRING, active_coords, bus_key, bus_members, coefficient_buses
from .report import DEFAULT_WEIGHTS, SimReport, StageReport


class SimulationError(RuntimeError):
    pass


@dataclass(frozen=True)
class CoreConfig:
    p1: int
    p2: int
    p3: int
    weights: dict = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))

    @property
    def extent(self) -> tuple[int, int, int]:
        return (self.p1, self.p2, self.p3)


@dataclass
class Actuator:
    """Streaming memory holding one tagged square matrix.

    Actuator 1 holds ``C1`` and streams its rows, which are the columns of
    ``C1^T``; actuators 3 and 2 stream rows of ``C3`` and ``C2``.
    """

    id: int
    matrix: CoeffMatrix
    values: np.ndarray  # matrix entries as Python scalars of the run's kind
    cursor: int = 0

    @property
    def channels(self) -> int:
        return self.matrix.cols

    @property
    def finished(self) -> bool:
        return self.cursor >= self.matrix.rows

    def current(self):
        row = self.matrix.stream_order()[self.cursor]
        return row, self.values[row, :]


@dataclass
class StepTrace:
    stage: int
    actuator_id: int
    slot: int
    row: int
    consumed: bool
    coeff_sends: int = 0
    pivot_broadcast_sends: int = 0
    pivot_silent: int = 0
    macs: int = 0
    skips: int = 0
    receives: int = 0


class Machine:
    def __init__(self, core: CoreConfig, X, C1, C2, C3, *, zero_epsilon: float = 0.0,
                 esop: bool = True, workers: int = 1, logic: CellLogic | None = None):
        X = np.asarray(as_array(X))
        mats = [as_coeff(c) for c in (C1, C2, C3)]
        for s, c in zip((1, 2, 3), mats):
            if not c.is_square:
                raise ValueError(
                    f"C{s} is {c.rows}x{c.cols}: the simulator needs square matrices "
                    "(tag synchronisation is only defined when the matrix is square)"
                )
            if c.rows != X.shape[s - 1]:
                raise ValueError(f"C{s} is {c.rows}x{c.cols} but tensor extent is {X.shape[s - 1]}")
        if any(n > p for n, p in zip(X.shape, core.extent)):
            raise ValueError(f"problem {X.shape} does not fit core {core.extent}; tiling is not supported")
        if workers < 1:
            raise ValueError("workers must be >= 1")
        self.core = core
        self.extent = tuple(int(n) for n in X.shape)
        self.kind = result_kind(X.dtype, *(c.dtype for c in mats))
        if zero_epsilon < 0:
            raise ValueError("zero_epsilon must be >= 0")
        self.zero_epsilon = float(zero_epsilon)
        self.esop = esop
        self.workers = workers
        self.logic = logic or CellLogic()
        zero = to_pyscalars(np.zeros(1, dtype=KINDS[self.kind]), self.kind)[0]
        self.cells = np.empty(core.extent, dtype=object)
        for idx in np.ndindex(core.extent):
            c = Cell()
            c.clear(zero)
            self.cells[idx] = c
        xs = to_pyscalars(X, self.kind)
        for idx in active_coords(self.extent):
            self.cells[idx].x = xs[idx]
        self.actuators = {
            s: Actuator(s, c, to_pyscalars(c.entries, self.kind))
            for s, c in zip((1, 2, 3), mats)
        }
        self._active = [self.cells[idx] for idx in active_coords(self.extent)]
        self._stage_pos = 0
        self.stage_reports = [StageReport(WIRING[a].stage, a) for a in HANDOFF]

    # --- inspection -------------------------------------------------------

    @property
    def finished(self) -> bool:
        return self._stage_pos >= len(HANDOFF)

    @property
    def current_stage(self) -> int | None:
        return None if self.finished else self._stage_pos + 1

    def registers(self, name: str) -> np.ndarray:
        """Stage register ``name`` (x, xd, xdd, xddd) over the active extent."""
        out = np.empty(self.extent, dtype=object)
        for idx in active_coords(self.extent):
            out[idx] = getattr(self.cells[idx], name)
        return from_pyscalars(out, self.kind)

    def active_cell_count(self) -> int:
        return len(self._active)

    # --- execution --------------------------------------------------------

    def _map(self, fn, items):
        if self.workers == 1 or len(items) < 2:
            return [fn(it) for it in items]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(fn, items))

    def step(self) -> StepTrace:
        if self.finished:
            raise SimulationError("machine has finished all three stages")
        act_id = HANDOFF[self._stage_pos]
        w = WIRING[act_id]
        act = self.actuators[act_id]
        rep = self.stage_reports[self._stage_pos]
        eps = self.zero_epsilon if self.esop else None
        row, vec = act.current()
        trace = StepTrace(w.stage, act_id, act.cursor, row, consumed=True)

        if all(is_zero(v, eps) for v in vec):
            trace.consumed = False
            rep.steps_saved += 1
            rep.macs_skipped += len(self._active)
            self._advance(act)
            return trace

        # actuator phase
        pivots = []
        for ch, v in enumerate(vec):
            tag = 1 if ch == row else 0
            if tag == 0 and is_zero(v, eps):
                continue
            msg = BusMessage(v, tag, act_id)
            for key in coefficient_buses(w, ch, self.extent):
                trace.coeff_sends += 1
                for coord in bus_members(w.x_bus, key, self.extent):
                    self.logic.receive_coeff(self.cells[coord], msg)
                    trace.receives += 1
                    if tag:
                        pivots.append(coord)

        # pivot phase
        values = self._map(lambda c: self.logic.pivot(self.cells[c], eps), pivots)
        for coord, v in zip(pivots, values):
            if v is None:
                trace.pivot_silent += 1
                continue
            trace.pivot_broadcast_sends += 1
            for other in bus_members(w.y_bus, bus_key(w.y_bus, coord), self.extent):
                if other != coord:
                    self.logic.receive_operand(self.cells[other], v)
                    trace.receives += 1

        # compute phase
        done = self._map(lambda c: self.logic.compute(c, eps), self._active)
        trace.macs = sum(done)
        trace.skips = len(done) - trace.macs

        rep.time_steps += 1
        rep.macs_executed += trace.macs
        rep.macs_skipped += trace.skips
        rep.coeff_sends += trace.coeff_sends
        rep.pivot_broadcast_sends += trace.pivot_broadcast_sends
        rep.pivot_silent += trace.pivot_silent
        rep.receives += trace.receives
        self._advance(act)
        return trace

    def _advance(self, act: Actuator) -> None:
        act.cursor += 1
        if act.finished:
            # control passes to the next actuator
            self._stage_pos += 1

    def run_stage(self, stage: int) -> StageReport:
        if self.finished:
            raise SimulationError("machine has finished all three stages")
        if stage != self.current_stage:
            raise SimulationError(
                f"stage {stage} requested but stage {self.current_stage} is active "
                "(stages run in order 1, 2, 3)"
            )
        pos = self._stage_pos
        while self._stage_pos == pos:
            self.step()
        return self.stage_reports[pos]

    def report(self) -> SimReport:
        return SimReport(
            self.extent,
            self.core.extent,
            self.stage_reports,
            dict(self.core.weights),
            lossy=self.esop and self.zero_epsilon > 0,
            zero_epsilon=self.zero_epsilon,
            esop=self.esop,
        )

    def run_transform(self) -> tuple[Tensor3, SimReport]:
        while not self.finished:
            self.run_stage(self.current_stage)
        return Tensor3(self.registers("xddd"), self.kind), self.report()


def load(core: CoreConfig | None, X, C1, C2, C3, **kwargs) -> Machine:
    """Place ``X`` in the core and the three matrices in their actuators.

    ``core=None`` uses a core exactly the size of the problem.
    """
    if core is None:
        core = CoreConfig(*np.asarray(as_array(X)).shape)
    return Machine(core, X, C1, C2, C3, **kwargs)


def simulate(X, C1, C2, C3, core: CoreConfig | None = None, **kwargs) -> tuple[Tensor3, SimReport]:
    return load(core, X, C1, C2, C3, **kwargs).run_transform()
