"""Dimer models on rail-yard graphs: exact partition functions, Schur-process
sampling, limit shapes and frozen boundaries."""

from .errors import (
    BranchError,
    ConfigError,
    ConvergenceError,
    RailYardError,
    RootFindingError,
    SingularPointError,
    SpecError,
    TruncationError,
    VerificationError,
)
from .graph import DimerCovering, RailYardSpec, build
from .model import AsymptoticModel, ObservationPoint, Segment, Slot
from .schur_process import partition_function_product, partition_function_transfer, sample

__version__ = "0.1.0"

__all__ = [
    "AsymptoticModel",
    "BranchError",
    "ConfigError",
    "ConvergenceError",
    "DimerCovering",
    "ObservationPoint",
    "RailYardError",
    "RailYardSpec",
    "RootFindingError",
    "Segment",
    "SingularPointError",
    "Slot",
    "SpecError",
    "TruncationError",
    "VerificationError",
    "build",
    "partition_function_product",
    "partition_function_transfer",
    "sample",
]
