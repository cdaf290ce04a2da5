"""Nonlinear thermal model of a multi-room building.

Each room is a single lumped air mass. Heat moves along two kinds of paths:

* convection (open door, open window, heater airflow): rate ``M * C * dT``
  with ``M`` the airflow and ``C`` the heat capacity of air;
* conduction (wall, closed door, closed window): rate ``dT / R`` with ``R``
  the thermal resistance of the component.

Every door/window carries a pair of binary weights ``(wf, wc)`` selecting the
active path: ``wf = 1, wc = 0`` when open (convection), the reverse when
closed. The heater has a single convection weight ``wf_ac``.

Configuration files give airflow in kg/h; all flows are converted to kg/s
once, inside the heat-rate evaluation, so that heat rates are in watts and
temperature derivatives in degC/s. Shared-wall interface temperatures are
closed as the arithmetic mean of the two room temperatures.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import (
    ComponentNotFoundError,
    IntegrationDivergenceError,
    InvalidParameterError,
    ModelConfigError,
)

KGH_TO_KGS = 1.0 / 3600.0


def _require_finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise InvalidParameterError(f"{name}: non-finite value {v!r}")


@dataclass(frozen=True)
class ZoneThermalParams:
    """Per-room physical parameters.

    Resistances are degC/W; airflow rates are kg/h as configured. A ``None``
    resistance/flow pair means the room has no such component (no outdoor
    door, no window).
    """

    zone_id: int
    air_mass: float                 # kg
    heat_capacity: float            # J/(kg degC)
    r_walls_out: float              # outer wall, always conducting
    r_walls_in: float               # inner wall per shared pair, always conducting
    r_indoor: float                 # internal door (closed path)
    m_indoor: float                 # internal door airflow, kg/h (open path)
    r_outdoor: float | None = None  # outdoor door (closed path)
    m_outdoor: float = 0.0          # outdoor door airflow, kg/h
    r_window: float | None = None   # window (closed path)
    m_window: float = 0.0           # window airflow, kg/h
    m_ac: float = 0.0               # heater airflow, kg/h

    def __post_init__(self) -> None:
        if self.air_mass <= 0 or self.heat_capacity <= 0:
            raise InvalidParameterError(
                f"zone {self.zone_id}: air mass and heat capacity must be positive"
            )
        for name in ("r_walls_out", "r_walls_in", "r_indoor", "r_outdoor", "r_window"):
            r = getattr(self, name)
            if r is not None and r <= 0:
                raise InvalidParameterError(
                    f"zone {self.zone_id}: resistance {name} must be positive"
                )
        for name in ("m_indoor", "m_outdoor", "m_window", "m_ac"):
            m = getattr(self, name)
            if m < 0 or not math.isfinite(m):
                raise InvalidParameterError(
                    f"zone {self.zone_id}: flow {name} must be finite and >= 0"
                )

    @property
    def has_outdoor_door(self) -> bool:
        return self.r_outdoor is not None

    @property
    def has_window(self) -> bool:
        return self.r_window is not None


@dataclass
class ComponentWeights:
    """Binary convection/conduction weights per component instance.

    Keys: ``outdoor_door<z>``, ``window<z>``, ``heater<z>`` and
    ``indoor_door<i>-<j>`` for adjacent pair (i, j), i < j. Values are
    ``(wf, wc)``; for doors and windows ``wf + wc == 1``.
    """

    pairs: dict[str, tuple[float, float]]

    def __post_init__(self) -> None:
        for name, (wf, wc) in self.pairs.items():
            if wf not in (0.0, 1.0) or wc not in (0.0, 1.0):
                raise InvalidParameterError(f"{name}: weights must be 0 or 1")
            if not name.startswith("heater") and wf + wc != 1.0:
                raise InvalidParameterError(
                    f"{name}: exactly one of the convection/conduction paths "
                    f"must be active (wf + wc == 1)"
                )

    def wf(self, name: str) -> float:
        return self.pairs[name][0]

    def wc(self, name: str) -> float:
        return self.pairs[name][1]

    def copy(self) -> "ComponentWeights":
        return ComponentWeights(dict(self.pairs))


@dataclass(frozen=True)
class PlantState:
    """Room temperatures (degC) at simulation time t (s)."""

    x: np.ndarray
    t: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        if not np.all(np.isfinite(self.x)):
            raise InvalidParameterError("plant state contains non-finite temperatures")


@dataclass(frozen=True)
class HeaterCommand:
    """Heater settings per room: supply temperature, airflow (kg/h), on/off."""

    t_ac: np.ndarray
    m_ac: np.ndarray
    wf_ac: np.ndarray

    def __post_init__(self) -> None:
        for name in ("t_ac", "m_ac", "wf_ac"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if np.any(self.m_ac < 0):
            raise InvalidParameterError("heater airflow must be >= 0")
        if not (np.all(np.isfinite(self.t_ac)) and np.all(np.isfinite(self.m_ac))):
            raise InvalidParameterError("heater command contains non-finite values")

    @classmethod
    def off(cls, n: int) -> "HeaterCommand":
        return cls(np.zeros(n), np.zeros(n), np.zeros(n))

    @classmethod
    def supply(cls, t_ac: np.ndarray, m_ac: np.ndarray) -> "HeaterCommand":
        t_ac = np.asarray(t_ac, dtype=float)
        return cls(t_ac, np.asarray(m_ac, dtype=float), np.ones_like(t_ac))


@dataclass
class BuildingModel:
    """Rooms, wall/door adjacency, and component open/closed status.

    ``adjacency`` holds unordered pairs of zone ids sharing an inner wall and
    internal door. ``interface_temps`` are the configured t=0 values of the
    shared-wall interface temperatures; after t=0 the interface follows the
    mean of the two room temperatures.
    """

    zones: list[ZoneThermalParams]
    adjacency: frozenset[tuple[int, int]]
    weights: ComponentWeights
    interface_temps: dict[tuple[int, int], float]
    initial_temps: np.ndarray

    def __post_init__(self) -> None:
        ids = [z.zone_id for z in self.zones]
        if len(set(ids)) != len(ids):
            raise ModelConfigError("duplicate zone ids")
        norm = set()
        for a, b in self.adjacency:
            if a == b:
                raise ModelConfigError(f"self-adjacency for zone {a}")
            if a not in ids or b not in ids:
                raise ModelConfigError(f"adjacency ({a},{b}) references unknown zone")
            norm.add((min(a, b), max(a, b)))
        self.adjacency = frozenset(norm)
        self.initial_temps = np.asarray(self.initial_temps, dtype=float)
        if self.initial_temps.shape != (len(self.zones),):
            raise ModelConfigError("initial_temps length must match zone count")

    @property
    def n(self) -> int:
        return len(self.zones)

    def index(self, zone_id: int) -> int:
        for i, z in enumerate(self.zones):
            if z.zone_id == zone_id:
                return i
        raise ModelConfigError(f"unknown zone id {zone_id}")

    def neighbors(self, zone_id: int) -> list[int]:
        out = []
        for a, b in self.adjacency:
            if a == zone_id:
                out.append(b)
            elif b == zone_id:
                out.append(a)
        return sorted(out)

    def initial_state(self) -> PlantState:
        return PlantState(self.initial_temps.copy(), 0.0)

    def copy(self) -> "BuildingModel":
        return BuildingModel(
            list(self.zones),
            self.adjacency,
            self.weights.copy(),
            dict(self.interface_temps),
            self.initial_temps.copy(),
        )


def indoor_door_name(i: int, j: int) -> str:
    return f"indoor_door{min(i, j)}-{max(i, j)}"


def convection_rate(m_flow: float, c_air: float, t_adjacent: float, t_room: float) -> float:
    """Convective heat rate ``M * C * (T_adjacent - T_room)``.

    With ``m_flow`` in kg/h the result is J/h; callers that need watts divide
    the flow by 3600 first.
    """
    _require_finite("convection_rate", m_flow, c_air, t_adjacent, t_room)
    if m_flow < 0:
        raise InvalidParameterError("convection_rate: flow must be >= 0")
    if c_air <= 0:
        raise InvalidParameterError("convection_rate: heat capacity must be positive")
    return m_flow * c_air * (t_adjacent - t_room)


def conduction_rate(r: float, t_adjacent: float, t_room: float) -> float:
    """Conductive heat rate ``(T_adjacent - T_room) / R`` in watts."""
    _require_finite("conduction_rate", r, t_adjacent, t_room)
    if r <= 0:
        raise InvalidParameterError("conduction_rate: resistance must be positive")
    return (t_adjacent - t_room) / r


def interface_temperature(x: np.ndarray, i: int, j: int) -> float:
    """Shared-wall interface temperature: mean of the two room temperatures."""
    return 0.5 * (x[i] + x[j])


def zone_heat_rate(
    model: BuildingModel,
    zone_id: int,
    state: PlantState,
    t_out: float,
    command: HeaterCommand,
) -> float:
    """Net heat rate (W) into one room: sum of the active convection and
    conduction paths plus the heater term.

    Outer-wall and inner-wall conduction are always active; door/window paths
    are selected by the component weights. Airflows are converted from kg/h
    to kg/s here so every term is in watts.
    """
    i = model.index(zone_id)
    zone = model.zones[i]
    x = state.x
    w = model.weights
    c = zone.heat_capacity

    q = conduction_rate(zone.r_walls_out, t_out, x[i])

    neigh = model.neighbors(zone_id)
    if zone.r_walls_in is not None and not neigh and model.adjacency:
        # isolated zone inside a connected building: configuration suspect
        raise ModelConfigError(f"zone {zone_id} has no adjacency entry")
    for j_id in neigh:
        j = model.index(j_id)
        t_if = interface_temperature(x, i, j)
        q += conduction_rate(zone.r_walls_in, t_if, x[i])
        door = indoor_door_name(zone_id, j_id)
        if door not in w.pairs:
            raise ModelConfigError(f"missing weights for component {door}")
        q += w.wf(door) * convection_rate(
            zone.m_indoor * KGH_TO_KGS, c, t_if, x[i]
        )
        q += w.wc(door) * conduction_rate(zone.r_indoor, t_if, x[i])

    if zone.has_outdoor_door:
        name = f"outdoor_door{zone_id}"
        q += w.wc(name) * conduction_rate(zone.r_outdoor, t_out, x[i])
        q += w.wf(name) * convection_rate(zone.m_outdoor * KGH_TO_KGS, c, t_out, x[i])

    if zone.has_window:
        name = f"window{zone_id}"
        q += w.wc(name) * conduction_rate(zone.r_window, t_out, x[i])
        q += w.wf(name) * convection_rate(zone.m_window * KGH_TO_KGS, c, t_out, x[i])

    heater = f"heater{zone_id}"
    wf_ac = w.wf(heater) if heater in w.pairs else 1.0
    q += wf_ac * command.wf_ac[i] * convection_rate(
        command.m_ac[i] * KGH_TO_KGS, c, command.t_ac[i], x[i]
    )
    return q


def plant_derivative(
    model: BuildingModel,
    state: PlantState,
    t_out: float,
    command: HeaterCommand,
) -> np.ndarray:
    """Temperature rate vector (degC/s): heat rate over thermal mass per room."""
    dx = np.empty(model.n)
    for i, zone in enumerate(model.zones):
        q = zone_heat_rate(model, zone.zone_id, state, t_out, command)
        dx[i] = q / (zone.air_mass * zone.heat_capacity)
    return dx


def rk4_step(
    f: Callable[[np.ndarray, float], np.ndarray],
    x: np.ndarray,
    t: float,
    dt: float,
) -> np.ndarray:
    """One classical fixed-step Runge-Kutta 4 step of ``x' = f(x, t)``."""
    k1 = f(x, t)
    k2 = f(x + 0.5 * dt * k1, t + 0.5 * dt)
    k3 = f(x + 0.5 * dt * k2, t + 0.5 * dt)
    k4 = f(x + dt * k3, t + dt)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step_plant(
    model: BuildingModel,
    state: PlantState,
    t_out: float,
    command: HeaterCommand,
    dt: float,
) -> PlantState:
    """Advance the plant one RK4 step of length dt (s), holding t_out and the
    heater command constant over the step."""
    if dt <= 0:
        raise InvalidParameterError("step_plant: dt must be positive")

    def f(x: np.ndarray, t: float) -> np.ndarray:
        return plant_derivative(model, _raw_state(x, t), t_out, command)

    x_next = rk4_step(f, state.x, state.t, dt)
    if not np.all(np.isfinite(x_next)):
        bad = int(np.argmax(~np.isfinite(x_next)))
        raise IntegrationDivergenceError(bad, state.t + dt)
    return PlantState(x_next, state.t + dt)


def _raw_state(x: np.ndarray, t: float) -> PlantState:
    # bypass the finiteness check during intermediate RK4 stages; divergence
    # is detected on the committed step instead
    s = object.__new__(PlantState)
    object.__setattr__(s, "x", np.asarray(x, dtype=float))
    object.__setattr__(s, "t", t)
    return s


def set_component_status(model: BuildingModel, component: str, open_: bool) -> BuildingModel:
    """Return a copy of the model with one door/window opened or closed (or a
    heater switched on/off). Opening sets the convection weight, closing the
    conduction weight; the pair always sums to one for doors and windows."""
    if component not in model.weights.pairs:
        raise ComponentNotFoundError(component)
    new = model.copy()
    if component.startswith("heater"):
        new.weights.pairs[component] = (1.0 if open_ else 0.0, 0.0)
    else:
        new.weights.pairs[component] = (1.0, 0.0) if open_ else (0.0, 1.0)
    return new


# ---------------------------------------------------------------------------
# Default six-room building
# ---------------------------------------------------------------------------

# Rooms 1, 2, 5, 6 have an exit door to the outside; rooms 3, 4, 6 a window.
# All windows and exit doors start closed, internal doors start open.
_OUTDOOR_DOOR_ZONES = (1, 2, 5, 6)
_WINDOW_ZONES = (3, 4, 6)
_DEFAULT_ADJACENCY = ((2, 3), (1, 5), (4, 5), (4, 6))

# Heater airflow is not part of the published parameter set; the default is
# sized so a heater can hold the highest setpoint (22 degC) at the coldest
# outdoor temperature (-6 degC) with supply air within 0..60 degC against the
# fabric conductances of the worst-case room.
DEFAULT_M_AC_KGH = 180_000.0


def default_building(m_ac_kgh: float = DEFAULT_M_AC_KGH) -> BuildingModel:
    """The six-room benchmark building with its published parameter values."""
    zones = []
    for z in range(1, 7):
        zones.append(
            ZoneThermalParams(
                zone_id=z,
                air_mass=102.0425,
                heat_capacity=1005.4,
                r_walls_out=0.0000321,
                r_walls_in=0.0000696,
                r_indoor=0.000208,
                m_indoor=20.0,
                r_outdoor=0.000208 if z in _OUTDOOR_DOOR_ZONES else None,
                m_outdoor=35.0 if z in _OUTDOOR_DOOR_ZONES else 0.0,
                r_window=0.0000593542 if z in _WINDOW_ZONES else None,
                m_window=35.0 if z in _WINDOW_ZONES else 0.0,
                m_ac=m_ac_kgh,
            )
        )
    pairs: dict[str, tuple[float, float]] = {}
    for i, j in _DEFAULT_ADJACENCY:
        pairs[indoor_door_name(i, j)] = (1.0, 0.0)   # internal doors open
    for z in _OUTDOOR_DOOR_ZONES:
        pairs[f"outdoor_door{z}"] = (0.0, 1.0)       # exit doors closed
    for z in _WINDOW_ZONES:
        pairs[f"window{z}"] = (0.0, 1.0)             # windows closed
    for z in range(1, 7):
        pairs[f"heater{z}"] = (1.0, 0.0)             # heaters enabled
    interface = {(min(a, b), max(a, b)): 10.0 for a, b in _DEFAULT_ADJACENCY}
    return BuildingModel(
        zones=zones,
        adjacency=frozenset(_DEFAULT_ADJACENCY),
        weights=ComponentWeights(pairs),
        interface_temps=interface,
        initial_temps=np.full(6, 10.0),
    )


# ---------------------------------------------------------------------------
# Building description file (JSON)
# ---------------------------------------------------------------------------

def building_to_json(model: BuildingModel) -> dict:
    return {
        "zones": [
            {
                "zone_id": z.zone_id,
                "air_mass_kg": z.air_mass,
                "heat_capacity_j_per_kg_c": z.heat_capacity,
                "r_walls_out": z.r_walls_out,
                "r_walls_in": z.r_walls_in,
                "r_indoor": z.r_indoor,
                "m_indoor_kg_h": z.m_indoor,
                "r_outdoor": z.r_outdoor,
                "m_outdoor_kg_h": z.m_outdoor,
                "r_window": z.r_window,
                "m_window_kg_h": z.m_window,
                "m_ac_kg_h": z.m_ac,
            }
            for z in model.zones
        ],
        "adjacency": sorted([list(p) for p in model.adjacency]),
        "component_weights": {k: list(v) for k, v in sorted(model.weights.pairs.items())},
        "interface_temps_c": {f"{a}-{b}": t for (a, b), t in sorted(model.interface_temps.items())},
        "initial_temps_c": [float(v) for v in model.initial_temps],
    }


def building_from_json(data: dict) -> BuildingModel:
    zones = [
        ZoneThermalParams(
            zone_id=int(z["zone_id"]),
            air_mass=float(z["air_mass_kg"]),
            heat_capacity=float(z["heat_capacity_j_per_kg_c"]),
            r_walls_out=float(z["r_walls_out"]),
            r_walls_in=float(z["r_walls_in"]),
            r_indoor=float(z["r_indoor"]),
            m_indoor=float(z["m_indoor_kg_h"]),
            r_outdoor=None if z.get("r_outdoor") is None else float(z["r_outdoor"]),
            m_outdoor=float(z.get("m_outdoor_kg_h", 0.0)),
            r_window=None if z.get("r_window") is None else float(z["r_window"]),
            m_window=float(z.get("m_window_kg_h", 0.0)),
            m_ac=float(z.get("m_ac_kg_h", 0.0)),
        )
        for z in data["zones"]
    ]
    adjacency = frozenset(tuple(int(v) for v in pair) for pair in data["adjacency"])
    weights = ComponentWeights(
        {k: (float(v[0]), float(v[1])) for k, v in data["component_weights"].items()}
    )
    interface = {}
    for key, t in data.get("interface_temps_c", {}).items():
        a, b = key.split("-")
        interface[(int(a), int(b))] = float(t)
    return BuildingModel(
        zones=zones,
        adjacency=adjacency,
        weights=weights,
        interface_temps=interface,
        initial_temps=np.asarray(data["initial_temps_c"], dtype=float),
    )


def save_building(model: BuildingModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(building_to_json(model), indent=2) + "\n")


def load_building(path: str | Path) -> BuildingModel:
    return building_from_json(json.loads(Path(path).read_text()))
