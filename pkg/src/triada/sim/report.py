"""Run counters, dense-equivalent baselines and the JSON report."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields

from .geometry import HANDOFF, WIRING, face_count

SCHEMA = "triada-report/v1"

DEFAULT_WEIGHTS = {"mac": 1.0, "send": 1.0, "receive": 0.2}


@dataclass
class StageReport:
    stage: int
    actuator: int
    time_steps: int = 0
    macs_executed: int = 0
    macs_skipped: int = 0
    coeff_sends: int = 0
    pivot_broadcast_sends: int = 0
    pivot_silent: int = 0
    receives: int = 0
    steps_saved: int = 0

    COUNTERS = (
        "time_steps",
        "macs_executed",
        "macs_skipped",
        "coeff_sends",
        "pivot_broadcast_sends",
        "pivot_silent",
        "receives",
        "steps_saved",
    )

    @property
    def sends(self) -> int:
        return self.coeff_sends + self.pivot_broadcast_sends


@dataclass
class SimReport:
    shape: tuple[int, int, int]
    core: tuple[int, int, int]
    stages: list[StageReport]
    weights: dict = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    lossy: bool = False
    zero_epsilon: float = 0.0
    esop: bool = True

    @property
    def totals(self) -> dict:
        return {k: sum(getattr(s, k) for s in self.stages) for k in StageReport.COUNTERS}

    @property
    def time_steps(self) -> int:
        return self.totals["time_steps"]

    @property
    def macs_executed(self) -> int:
        return self.totals["macs_executed"]

    @property
    def weighted_cost(self) -> float:
        t = self.totals
        return weighted_cost(t, self.weights)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "shape": list(self.shape),
            "core": list(self.core),
            "esop_enabled": self.esop,
            "zero_epsilon": self.zero_epsilon,
            "lossy": self.lossy,
            "weights": dict(self.weights),
            "stages": [
                {"stage": s.stage, "actuator": s.actuator,
                 **{k: getattr(s, k) for k in StageReport.COUNTERS}}
                for s in self.stages
            ],
            "totals": self.totals,
            "weighted_cost": self.weighted_cost,
            "esop": esop_stats(self),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def weighted_cost(counts: dict, weights: dict) -> float:
    sends = counts["coeff_sends"] + counts["pivot_broadcast_sends"]
    return (
        weights["mac"] * counts["macs_executed"]
        + weights["send"] * sends
        + weights["receive"] * counts["receives"]
    )


def dense_counts(shape) -> list[dict]:
    """Per-stage counters of a fully dense run, computed from the extents alone."""
    shape = tuple(shape)
    n = shape[0] * shape[1] * shape[2]
    out = []
    for act in HANDOFF:
        w = WIRING[act]
        steps = shape[w.axis]
        coeff = face_count(w.x_bus, shape)
        pivots = face_count(w.y_bus, shape)
        out.append({
            "time_steps": steps,
            "macs_executed": n * steps,
            "coeff_sends": coeff * steps,
            "pivot_broadcast_sends": pivots * steps,
            "receives": (n + n - pivots) * steps,
        })
    return out


def esop_stats(report: SimReport) -> dict:
    """Savings of a run relative to the dense-equivalent counts."""
    dense = dense_counts(report.shape)
    totals = report.totals
    dense_tot = {k: sum(d[k] for d in dense) for k in dense[0]}
    dense_cost = weighted_cost(dense_tot, report.weights)
    return {
        "macs_skipped": totals["macs_skipped"],
        "steps_saved": totals["steps_saved"],
        "dense": dense_tot,
        "savings": {k: dense_tot[k] - totals[k] for k in dense_tot},
        "weighted_cost": report.weighted_cost,
        "dense_weighted_cost": dense_cost,
    }


def report_from_dict(d: dict) -> SimReport:
    if d.get("schema") != SCHEMA:
        raise ValueError(f"not a {SCHEMA} document")
    names = {f.name for f in fields(StageReport)}
    stages = [StageReport(**{k: v for k, v in s.items() if k in names}) for s in d["stages"]]
    return SimReport(tuple(d["shape"]), tuple(d["core"]), stages, dict(d["weights"]),
                     bool(d["lossy"]), float(d["zero_epsilon"]), bool(d["esop_enabled"]))
