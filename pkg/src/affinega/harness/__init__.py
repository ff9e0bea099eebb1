"""File I/O, synthetic data, experiment batteries and the command line."""

from .battery import BatterySummary, ExperimentSpec, register, run_battery
from .distortion import DistortionSpec, generate_distortion, rmse, uniform_pointset
from .io import PointSetFormatError, load_pointset, load_transform, save_pointset, save_transform

__all__ = [
    "BatterySummary",
    "DistortionSpec",
    "ExperimentSpec",
    "PointSetFormatError",
    "generate_distortion",
    "load_pointset",
    "load_transform",
    "register",
    "rmse",
    "run_battery",
    "save_pointset",
    "save_transform",
    "uniform_pointset",
]
