"""Great-circle distance on a spherical Earth."""

from __future__ import annotations

import math

from ..errors import ValidationError

# IUGG mean Earth radius in meters.
EARTH_RADIUS_M = 6371008.8


def haversine_distance(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Distance in meters between two (latitude, longitude) points in degrees.

    Symmetric, non-negative, and zero exactly for identical coordinates.
    Latitudes must lie in [-90, 90]; longitudes are taken as given.
    """
    for lat, _ in (a, b):
        if not -90.0 <= lat <= 90.0:
            raise ValidationError(f"latitude {lat} out of range [-90, 90]")
    if a == b:
        return 0.0
    lat1, lon1 = map(math.radians, a)
    lat2, lon2 = map(math.radians, b)
    sin_dlat = math.sin((lat2 - lat1) / 2.0)
    sin_dlon = math.sin((lon2 - lon1) / 2.0)
    h = sin_dlat * sin_dlat + math.cos(lat1) * math.cos(lat2) * sin_dlon * sin_dlon
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))
