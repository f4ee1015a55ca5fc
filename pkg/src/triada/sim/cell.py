"""Local cell state and the coordinate-free cell logic.

Nothing here knows where a cell sits.  Every decision is a function of the
cell's registers, the incoming messages and the actuator id carried by the
coefficient message.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, NamedTuple


class BusMessage(NamedTuple):
    value: Any
    tag: int
    actuator_id: int


# actuator id -> (input register, output register, coefficient is left operand)
REGISTERS = {
    3: ("x", "xd", False),
    1: ("xd", "xdd", True),
    2: ("xdd", "xddd", False),
}


@dataclass
class Cell:
    x: Any = 0
    xd: Any = 0
    xdd: Any = 0
    xddd: Any = 0
    waiting: bool = False
    macs: int = 0
    sends: int = 0
    receives: int = 0
    skips: int = 0
    # per-step latches, cleared by compute()
    coeff: BusMessage | None = None
    operand: Any = None

    def clear(self, zero) -> None:
        self.x = self.xd = self.xdd = self.xddd = zero


def is_zero(v, eps: float | None = 0.0) -> bool:
    """Zero test; ``eps=None`` disables zero detection (dense mode)."""
    if eps is None:
        return False
    if eps == 0.0:
        return v == 0
    return abs(v) <= eps


class CellLogic:
    """The per-cell program; the machine calls only these methods."""

    def receive_coeff(self, cell: Cell, msg: BusMessage) -> None:
        cell.coeff = msg
        cell.receives += 1
        cell.waiting = False

    def pivot(self, cell: Cell, eps: float | None = 0.0):
        """Broadcast value of a tagged cell, or ``None`` if it stays silent."""
        msg = cell.coeff
        if msg is None or msg.tag != 1:
            return None
        src = REGISTERS[msg.actuator_id][0]
        v = getattr(cell, src)
        if is_zero(v, eps):
            return None
        cell.sends += 1
        cell.operand = v
        return v

    def receive_operand(self, cell: Cell, value) -> None:
        cell.operand = value
        cell.receives += 1

    def compute(self, cell: Cell, eps: float | None = 0.0) -> bool:
        msg, op = cell.coeff, cell.operand
        cell.coeff = None
        cell.operand = None
        if msg is None or op is None or is_zero(msg.value, eps):
            cell.skips += 1
            cell.waiting = op is None
            return False
        _, dst, coeff_left = REGISTERS[msg.actuator_id]
        prod = msg.value * op if coeff_left else op * msg.value
        setattr(cell, dst, getattr(cell, dst) + prod)
        cell.macs += 1
        return True
