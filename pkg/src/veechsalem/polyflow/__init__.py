"""Regular-polygon surfaces: flows, saddle connections, cylinders, IETs and Weyl sums."""

from .cylinders import (CommensurabilityReport, Cylinder, NonPeriodicDirection, commensurability,
                        cylinder_decomposition)
from .iet import IETData, NonRecurrent, Transversal, first_return_iet, keane_check, orthogonal_transversal
from .normalize import Normalization, NormalizationError, normalize_to_standard_group
from .saddles import SaddleConnection, no_small_triangle_check, saddle_connections, systole
from .surface import OrbitSegment, PolygonSurface, build_surface, flow_orbit
from .weyl import (CalibrationSweep, GridRegion, RectRegion, calibration_sweep, eigenfunction_portrait,
                   matched_region, polygon_region, weyl_average, weyl_sweep)

__all__ = [
    "CalibrationSweep", "CommensurabilityReport", "Cylinder", "GridRegion", "IETData",
    "NonPeriodicDirection", "NonRecurrent", "Normalization", "NormalizationError", "OrbitSegment",
    "PolygonSurface", "RectRegion", "SaddleConnection", "Transversal", "build_surface",
    "calibration_sweep", "commensurability", "cylinder_decomposition", "eigenfunction_portrait",
    "first_return_iet", "flow_orbit", "keane_check", "matched_region", "no_small_triangle_check",
    "normalize_to_standard_group", "orthogonal_transversal", "polygon_region", "saddle_connections",
    "systole", "weyl_average", "weyl_sweep",
]
