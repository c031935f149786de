"""Synthetic tower/sensor network dataset generator.

Models a cluster of instrumented weather towers: each tower node carries an
integer ``Tower`` number plus ``Lat``/``Long`` coordinates, and every attached
sensor node is linked to exactly one tower via a ``HAS_SENSOR`` relationship.
The default configuration produces 13 towers (numbered 0..12), 121 attached
sensors, and one unattached spare sensor, for 135 nodes, 121 relationships,
and 11 distinct property keys in total.

One tower (``anchor_tower``, default 4) sits exactly at the configured center
coordinate; the rest are placed pseudo-randomly within ``radius_miles`` of it.
Generation is fully deterministic for a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import ValidationError
from .dataset import DatasetFile, NodeEntry, RelationshipEntry

DEFAULT_SENSOR_TYPES = (
    "temperature",
    "humidity",
    "wind speed",
    "precipitation",
    "barometric pressure",
    "soil conditions",
    "network conditions",
)

# CamelCase stems used to build unique sensor names like "WindSpeed-T03".
_NAME_STEMS = {
    "temperature": "Temperature",
    "humidity": "Humidity",
    "wind speed": "WindSpeed",
    "precipitation": "Precipitation",
    "barometric pressure": "Pressure",
    "soil conditions": "SoilMoisture",
    "network conditions": "NetworkStatus",
}

_UNITS = {
    "temperature": "C",
    "humidity": "%",
    "wind speed": "m/s",
    "precipitation": "mm",
    "barometric pressure": "hPa",
    "soil conditions": "VWC",
    "network conditions": "dBm",
}

DEFAULT_CENTER = (32.58088351, -106.7533307)
_METERS_PER_MILE = 1609.344
_METERS_PER_DEGREE_LAT = 111320.0


@dataclass
class GeneratorConfig:
    tower_count: int = 13
    sensor_types: tuple[str, ...] = DEFAULT_SENSOR_TYPES
    attached_sensors: int = 121
    spare_sensors: int = 1
    center: tuple[float, float] = DEFAULT_CENTER
    radius_miles: float = 1.5
    anchor_tower: int | None = None  # None: tower 4 when present, else the last tower
    seed: int = 42

    @classmethod
    def from_dict(cls, raw: dict) -> "GeneratorConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ValidationError(f"unknown generator config keys: {sorted(unknown)}")
        cleaned = dict(raw)
        if "sensor_types" in cleaned:
            cleaned["sensor_types"] = tuple(cleaned["sensor_types"])
        if "center" in cleaned:
            cleaned["center"] = tuple(cleaned["center"])
        return cls(**cleaned)


class _Rng:
    """Small deterministic PRNG (xorshift64*), stable across platforms."""

    def __init__(self, seed: int):
        self._state = (seed ^ 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF or 1

    def _next(self) -> int:
        x = self._state
        x ^= (x >> 12) & 0xFFFFFFFFFFFFFFFF
        x = (x ^ (x << 25)) & 0xFFFFFFFFFFFFFFFF
        x ^= (x >> 27) & 0xFFFFFFFFFFFFFFFF
        self._state = x
        return (x * 0x2545F4914F6CDD1D) & 0xFFFFFFFFFFFFFFFF

    def random(self) -> float:
        return (self._next() >> 11) / float(1 << 53)

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def randint(self, lo: int, hi: int) -> int:
        return lo + self._next() % (hi - lo + 1)

    def choice(self, seq):
        return seq[self._next() % len(seq)]


def _sensor_counts(tower_count: int, attached: int) -> list[int]:
    """Spread sensors over towers; the first ``attached % towers`` get one extra."""
    base, rem = divmod(attached, tower_count)
    return [base + (1 if i < rem else 0) for i in range(tower_count)]


def _sensor_name(sensor_type: str, occurrence: int, tower: int) -> str:
    stem = _NAME_STEMS.get(sensor_type, "".join(p.capitalize() for p in sensor_type.split()))
    if occurrence > 1:
        stem = f"{stem}{occurrence}"
    return f"{stem}-T{tower:02d}"


def generate_msa_fixture(config: GeneratorConfig | None = None) -> DatasetFile:
    """Generate the tower/sensor dataset for ``config`` (defaults shown above).

    Tower nodes come first in the file (so tower N gets node id N on load),
    followed by each tower's sensors in tower order, then spare sensors.
    """
    cfg = config or GeneratorConfig()
    if cfg.tower_count < 1:
        raise ValidationError("tower_count must be at least 1")
    if not cfg.sensor_types:
        raise ValidationError("sensor_types must be non-empty")
    if cfg.attached_sensors < 0 or cfg.spare_sensors < 0:
        raise ValidationError("sensor counts must be non-negative")
    if not -90.0 <= cfg.center[0] <= 90.0:
        raise ValidationError(f"center latitude {cfg.center[0]} out of range")
    anchor = cfg.anchor_tower if cfg.anchor_tower is not None else min(4, cfg.tower_count - 1)
    if not 0 <= anchor < cfg.tower_count:
        raise ValidationError("anchor_tower must be a valid tower number")

    rng = _Rng(cfg.seed)
    dataset = DatasetFile()
    center_lat, center_long = cfg.center
    radius_m = cfg.radius_miles * _METERS_PER_MILE

    for tower in range(cfg.tower_count):
        if tower == anchor:
            lat, long = center_lat, center_long
        else:
            # Uniform over the disc around the center.
            dist = radius_m * math.sqrt(rng.random())
            bearing = 2.0 * math.pi * rng.random()
            lat = round(center_lat + dist * math.cos(bearing) / _METERS_PER_DEGREE_LAT, 8)
            long = round(
                center_long
                + dist * math.sin(bearing) / (_METERS_PER_DEGREE_LAT * math.cos(math.radians(center_lat))),
                8,
            )
        dataset.nodes.append(
            NodeEntry(
                labels=["Tower"],
                properties={
                    "Height": round(rng.uniform(15.0, 45.0), 2),
                    "InstallDate": f"20{rng.randint(21, 23)}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}",
                    "Lat": lat,
                    "Long": long,
                    "Name": f"MSA-T{tower:02d}",
                    "Status": "active",
                    "Tower": tower,
                },
            )
        )

    counts = _sensor_counts(cfg.tower_count, cfg.attached_sensors)
    sensor_id = 1000
    type_count = len(cfg.sensor_types)
    for tower, count in enumerate(counts):
        for slot in range(count):
            sensor_type = cfg.sensor_types[slot % type_count]
            occurrence = slot // type_count + 1
            dataset.nodes.append(
                NodeEntry(
                    labels=["Sensor"],
                    properties={
                        "InstallDate": f"20{rng.randint(21, 24)}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}",
                        "Model": f"MSA-{_NAME_STEMS.get(sensor_type, 'GEN')[:4].upper()}{rng.randint(100, 999)}",
                        "Name": _sensor_name(sensor_type, occurrence, tower),
                        "SensorId": sensor_id,
                        "SensorType": sensor_type,
                        "Status": "active",
                        "Unit": _UNITS.get(sensor_type, "unit"),
                    },
                )
            )
            node_index = len(dataset.nodes) - 1
            dataset.relationships.append(RelationshipEntry(tower, "HAS_SENSOR", node_index, {}))
            sensor_id += 1

    for spare in range(cfg.spare_sensors):
        sensor_type = cfg.sensor_types[spare % type_count]
        dataset.nodes.append(
            NodeEntry(
                labels=["Sensor"],
                properties={
                    "InstallDate": f"20{rng.randint(21, 24)}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}",
                    "Model": f"MSA-{_NAME_STEMS.get(sensor_type, 'GEN')[:4].upper()}{rng.randint(100, 999)}",
                    "Name": f"Spare{spare + 1}-X{rng.randint(10, 99)}",
                    "SensorId": sensor_id,
                    "SensorType": sensor_type,
                    "Status": "spare",
                    "Unit": _UNITS.get(sensor_type, "unit"),
                },
            )
        )
        sensor_id += 1

    return dataset
