"""Time-step simulator of the cellular tensor core."""

from .cell import BusMessage, Cell, CellLogic, REGISTERS
from .geometry import HANDOFF, WIRING
from .machine import (
    Actuator,
    CoreConfig,
    Machine,
    SimulationError,
    StepTrace,
    load,
    simulate,
)
from .report import SCHEMA, SimReport, StageReport, dense_counts, esop_stats, report_from_dict

__all__ = [
    "Actuator", "BusMessage", "Cell", "CellLogic", "CoreConfig", "HANDOFF", "Machine",
    "REGISTERS", "SCHEMA", "SimReport", "SimulationError", "StageReport", "StepTrace",
    "WIRING", "dense_counts", "esop_stats", "load", "report_from_dict", "simulate",
]
