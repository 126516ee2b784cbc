"""Morse index and theta invariants of minimal Y-surfaces."""

from ._ysurf import (
    ArgumentError,
    SpectralError,
    StructuralError,
    YSurface,
    catenoid,
    classify,
    constant_form,
    flat_ycone,
    plane,
    run_cli,
    spectrum,
    theta,
    ycatenoid,
)

DISK = (0, 0, 0)
ANNULUS = (0, 1, 1)

__all__ = [
    "ANNULUS",
    "ArgumentError",
    "DISK",
    "SpectralError",
    "StructuralError",
    "YSurface",
    "catenoid",
    "classify",
    "constant_form",
    "flat_ycone",
    "plane",
    "run_cli",
    "spectrum",
    "theta",
    "ycatenoid",
]
