"""Bus families of the crossover mesh and the per-actuator stage wiring.

Cell ``(i1, i2, i3)`` sits on exactly one bus of each family:

* lateral bus ``(i2, i3)`` spans ``i1`` (axis 0),
* horizontal bus ``(i1, i2)`` spans ``i3`` (axis 2),
* frontal bus ``(i1, i3)`` spans ``i2`` (axis 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

SPAN = {"lateral": 0, "frontal": 1, "horizontal": 2}

Coord = tuple[int, int, int]


@dataclass(frozen=True)
class StageWiring:
    stage: int
    actuator: int
    axis: int  # tensor axis indexed by the actuator's channels
    x_bus: str  # family carrying coefficients
    y_bus: str  # family carrying pivot broadcasts


# Hand-off order of the actuators: lateral (3), horizontal (1), frontal (2).
HANDOFF = (3, 1, 2)

WIRING = {
    3: StageWiring(stage=1, actuator=3, axis=2, x_bus="lateral", y_bus="horizontal"),
    1: StageWiring(stage=2, actuator=1, axis=0, x_bus="horizontal", y_bus="lateral"),
    2: StageWiring(stage=3, actuator=2, axis=1, x_bus="lateral", y_bus="frontal"),
}

for _w in WIRING.values():
    # coefficients are replicated across the face orthogonal to the actuator
    # axis; broadcasts run along it
    assert SPAN[_w.x_bus] != _w.axis and SPAN[_w.y_bus] == _w.axis


def bus_key(family: str, coord: Coord) -> tuple[int, int]:
    span = SPAN[family]
    return tuple(c for ax, c in enumerate(coord) if ax != span)


def bus_members(family: str, key: tuple[int, int], extent: Coord) -> list[Coord]:
    """Active cells on one bus."""
    span = SPAN[family]
    out = []
    for i in range(extent[span]):
        coord = list(key)
        coord.insert(span, i)
        out.append(tuple(coord))
    return out


def coefficient_buses(w: StageWiring, channel: int, extent: Coord) -> list[tuple[int, int]]:
    """X-bus keys driven by one actuator channel, replicated over the face."""
    span = SPAN[w.x_bus]
    (rep,) = {0, 1, 2} - {span, w.axis}
    keys = []
    for r in range(extent[rep]):
        coord = [0, 0, 0]
        coord[w.axis] = channel
        coord[rep] = r
        keys.append(bus_key(w.x_bus, tuple(coord)))
    return keys


def face_count(family: str, extent: Coord) -> int:
    """Number of buses of a family within the active extent."""
    n = extent[0] * extent[1] * extent[2]
    return n // extent[SPAN[family]]


def active_coords(extent: Coord):
    return product(range(extent[0]), range(extent[1]), range(extent[2]))
